//! Simulation and analysis toolkit for qubit dephasing under
//! dynamical-decoupling pulse sequences.
//!
//! The pieces, bottom up:
//!
//! - [`sequences`]: pulse-timing patterns (Ramsey, echo, PDD, UDD, CPMG,
//!   symmetric five-pulse family).
//! - [`filter`]: the frequency-domain filter function g_N(omega, tau) of a
//!   sequence and its pass-band location.
//! - [`noise`]: composable one-sided noise spectra (power-law floor,
//!   Gaussian bump at the trap frequency) and seeded time-domain
//!   realizations.
//! - [`coherence`]: the coherence integral chi(tau), W = exp(-chi),
//!   coherence curves, 1/e-time extraction and the Monte-Carlo
//!   phase-accumulation cross-check.
//! - [`spectroscopy`]: DD noise spectroscopy via the filter pass-band.
//! - [`optimizer`]: grid optimization of symmetric five-pulse timings and
//!   protocol comparisons.
//! - [`fitting`]: decay and Rabi-oscillation least-squares fits.
//! - [`detection`]: photon-count threshold statistics.
//!
//! Grid sweeps, Monte-Carlo ensembles and curve evaluations run on rayon
//! when the default `parallel` feature is on; disabling it gives a fully
//! sequential build with identical results.

// `!(x > 0.0)` rejects NaN inputs where `x <= 0.0` would let them through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherence;
pub mod detection;
pub mod error;
mod exec;
pub mod filter;
pub mod fitting;
pub mod noise;
pub mod numerics;
pub mod optimizer;
pub mod sequences;
pub mod spectroscopy;

pub use error::{Error, Result};
