//! Exact computer algebra for column-unital Yang-Baxter operators.
//!
//! The library constructs a family of set-theoretic-flavoured Yang-Baxter
//! operators `R_(m)` on a free module of rank `m` over `Q[y]`, verifies the
//! Yang-Baxter equation symbolically, assembles the associated chain complex,
//! and computes its homology exactly via Smith normal form.

pub mod chain;
pub mod homology;
pub mod ring;
pub mod smith;
pub mod tensor;
#[cfg(test)]
pub(crate) mod testutil;
pub mod ybop;
