//! Command-line front end: expressions, the product cache and the
//! verification suites.

pub mod cache;
pub mod expr;
pub mod input;
pub mod verify;
