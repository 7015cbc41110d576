//! Exact computation in the affine Schur algebra S̃(n,r) of type A.
//!
//! The basis of S̃(n,r) is indexed by orbits of the extended affine Weyl
//! group Σ̂ᵣ = Σᵣ ⋉ ℤʳ on pairs of integer tuples. Products are computed
//! three independent ways (double cosets of Young subgroups, counting
//! middle tuples, composing operators on tensor space) so that each can
//! check the others.
//!
//! ```
//! use affine_schur::schur::{AlgebraElement, BasisIndex};
//!
//! let x = AlgebraElement::basis(BasisIndex::parse_text("xi[(1,1)|(1,2)]", 1).unwrap());
//! let sq = x.multiply(&x).unwrap();
//! assert_eq!(sq.to_string(), "xi[(1,1)|(1,3)] + 2*xi[(1,1)|(2,2)]");
//! ```

pub mod dual;
pub mod error;
pub mod hom;
pub mod laurent;
pub mod lie;
pub mod schur;
pub mod semigroup;
pub mod tensor;
pub mod transfer;
pub mod weyl;

pub use error::{Error, Result};
pub use laurent::{LaurentCoeff, Rational};
