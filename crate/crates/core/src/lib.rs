//! Exact combinatorics around transfer ideals in the cohomology of
//! symmetric groups: hom-classes `Z_p^h → Σ_{p^k}`, the generalized
//! induction formula, subgroup counts in `(Q_p/Z_p)^n`, and truncated
//! formal group law arithmetic.

pub mod abelianp;
pub mod acceptance;
pub mod arith;
pub mod charfun;
pub mod decomp;
mod error;
pub mod fgl;
pub mod limits;
pub mod permcore;
pub mod zpsets;

pub use error::{Error, Result};
