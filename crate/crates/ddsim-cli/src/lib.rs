//! Library surface of the command-line front end: configuration parsing
//! and the subcommand implementations, shared by the binary and the
//! integration suites.

// `!(x > 0.0)` rejects NaN inputs where `x <= 0.0` would let them through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
