//! Command-line experiments and file formats on top of [`fiolab_core`].
//!
//! The library half exposes the pieces the `fiolab` binary is made of:
//! TOML experiment configs ([`config`]), grid-function files ([`io`]), the
//! phase expression language ([`expr`]), test corpora ([`corpus`]), the
//! experiments themselves ([`experiments`]), their reports ([`report`]) and
//! the CLI ([`cli`]).
#![forbid(unsafe_code)]

pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod experiments;
pub mod expr;
pub mod io;
pub mod named;
pub mod parallel;
pub mod report;
pub mod selftest;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::{Error, Result};
