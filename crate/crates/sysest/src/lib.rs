//! Standard-library companion of `sysest-core`: file formats, a built-in
//! reference parameter set, a deterministic population generator,
//! configuration files, output rendering, and the command-line interface.
//!
//! All estimation theory and simulation machinery lives in `sysest-core`;
//! this crate only moves data in and out of it.

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod builtin;
pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod render;
pub mod synth;

pub use error::{AppError, Result};
