//! Design-based estimation of a finite-population mean under systematic
//! sampling when part of the sample fails to respond.
//!
//! The data model is a fixed finite population of `N = n * k` units carrying
//! a study variable `y` and an auxiliary variable `x` with known population
//! mean. A systematic sample is drawn by choosing a random start in `1..=k`
//! and taking every `k`-th unit. Non-respondents are handled by the classical
//! two-phase device: the `n2` units that fail to respond are revisited for a
//! sub-sample of `h2 = n2 / L` units, and the group mean is estimated from
//! that sub-sample alone.
//!
//! The crate provides:
//!
//! * [`popmodel`] — population containers and the summary statistics
//!   (means, mean squares, correlations, intraclass correlations) that feed
//!   the variance formulas;
//! * [`sampling`] — the systematic frame, the sub-sampling protocol and its
//!   randomisation;
//! * [`estimators`] — point estimators of the population mean: the
//!   sub-sampling mean `y**`, a difference/regression estimator, and three
//!   weighted regression-type families (`t1`, `t2`, `t3`);
//! * [`theory`] — first-order (Taylor) biases, mean squared errors, optimum
//!   constants and relative-efficiency tables for those estimators;
//! * [`mc`] — a design-based Monte Carlo simulator that checks the
//!   first-order formulas against empirical moments;
//! * [`num`] — compensated summation and the small numeric kit used by the
//!   rest of the crate.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line front-end live in the companion `sysest` crate.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod error;
pub mod estimators;
pub mod mc;
pub mod num;
pub mod popmodel;
pub mod sampling;
pub mod theory;

pub use error::{Error, Result};
