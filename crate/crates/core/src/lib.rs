//! Randomly weighted averages of arcsine variables and the power semicircle
//! law.
//!
//! If `(R_1, …, R_n)` are the spacings of `n - 1` uniform order statistics
//! on `[0, 1]` and `X_1, …, X_n` are i.i.d. Arcsine on `(-a, a)`, then
//! `S_n = Σ R_i X_i` follows the power semicircle law with `λ = (n - 1)/2`.
//! This crate checks that exactly, through rational moment computations
//! ([`moments`]), and statistically, through seeded sampling ([`rwa`],
//! [`distributions`]) and Kolmogorov–Smirnov tests ([`ks`]).
//!
//! The guide under `book/` walks through each piece; its Rust snippets are
//! compiled and run as doc-tests of this crate.

pub mod distributions;
pub mod error;
pub mod exact;
pub mod ks;
pub mod moments;
pub mod rng;
pub mod rwa;
pub mod special;

pub use error::{Error, Result};
pub use exact::{HalfInteger, Rational};
pub use rwa::RwaSpec;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/distributions.md")]
    mod distributions {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/moments.md")]
    mod moments {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
