//! The affine Schur algebra S̃(n,r): orbit basis, element arithmetic,
//! the double coset product, Weyl symmetries and the transpose.

mod element;
mod green;
mod index;
mod symmetry;

pub use element::{identity, AlgebraElement};
pub use green::{basis_product, multiply, multiply_with, Product};
pub(crate) use green::push_merged;
pub use index::{
    canonicalize, equivalent_middle, parse_tuple, residue_matching, increasing_tuples, window_indices, window_indices_l1,
    BasisIndex, CoordIndex, Pairs,
};
pub use symmetry::{transpose_antiauto, weyl_act, WeylSymmetry};
