//! Toeplitz sequences over odometers at desk scale.
//!
//! - [`mobius`]: segmented Möbius sieve, squarefree density, tail products
//!   over primes and progression hit densities.
//! - [`odometer`]: scales p_1 | p_2 | … and truncated odometer points.
//! - [`builder`]: the block scheme and the first-available-position readout
//!   scheme, with provenance of every cell.
//! - [`structure`]: periodic parts, aligned densities, regularity defect.
//! - [`correlation`]: exact Cesàro correlations and the strong-correlation check.
//! - [`complexity`]: block census, zero-frequency and replacement checks on the
//!   initial indicator, configuration C, sparse patterns.
//! - [`mixing`]: window-shift plans and their inverses.
//! - [`seqfile`]: the on-disk sequence format.

pub mod builder;
pub mod complexity;
pub mod correlation;
pub mod error;
pub mod mixing;
pub mod mobius;
pub mod odometer;
pub mod seqfile;
pub mod sequence;
pub mod structure;

pub use error::{Error, Result};
pub use odometer::{OdometerPoint, Scale, ScaleSpec};
pub use sequence::SymbolSequence;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scales.md")]
    mod scales {}
    #[doc = include_str!("../../../book/src/block-scheme.md")]
    mod block_scheme {}
    #[doc = include_str!("../../../book/src/readout-scheme.md")]
    mod readout_scheme {}
    #[doc = include_str!("../../../book/src/regularity.md")]
    mod regularity {}
    #[doc = include_str!("../../../book/src/mobius.md")]
    mod mobius {}
    #[doc = include_str!("../../../book/src/correlations.md")]
    mod correlations {}
    #[doc = include_str!("../../../book/src/census.md")]
    mod census {}
    #[doc = include_str!("../../../book/src/window-shifts.md")]
    mod window_shifts {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
