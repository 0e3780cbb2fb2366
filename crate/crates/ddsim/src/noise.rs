//! One-sided noise power spectral densities of the longitudinal field
//! beta_z, and time-domain realizations.
//!
//! Convention: S(omega) has units of rad/s (variance rad^2/s^2 per unit
//! angular-frequency bandwidth) and is one-sided, so the autocovariance is
//! C(t) = (1/pi) int_0^inf S(omega) cos(omega t) d omega. White noise of
//! level S0 then dephases a Ramsey fringe as chi = 2 S0 tau.

use crate::error::{Error, Result};
use crate::numerics::quad::gk15;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Band-limited power law S(omega) = amplitude * (omega_ref/omega)^alpha on
/// [omega_lo, omega_hi], zero outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawPsd {
    /// Value of S at the reference frequency, rad/s.
    pub amplitude: f64,
    /// Spectral exponent, >= 0.
    pub alpha: f64,
    /// Reference angular frequency, rad/s.
    pub omega_ref: f64,
    /// Infrared cutoff, rad/s.
    pub omega_lo: f64,
    /// Ultraviolet cutoff, rad/s.
    pub omega_hi: f64,
}

impl PowerLawPsd {
    pub fn new(amplitude: f64, alpha: f64, omega_ref: f64, omega_lo: f64, omega_hi: f64) -> Result<Self> {
        if amplitude < 0.0 {
            return Err(Error::invalid("power-law amplitude must be >= 0"));
        }
        if alpha < 0.0 {
            return Err(Error::invalid("power-law alpha must be >= 0"));
        }
        if !(omega_ref > 0.0) {
            return Err(Error::invalid("power-law omega_ref must be > 0"));
        }
        if !(0.0 < omega_lo && omega_lo < omega_hi) {
            return Err(Error::invalid(format!(
                "power-law cutoffs need 0 < omega_lo < omega_hi, got [{omega_lo}, {omega_hi}]"
            )));
        }
        Ok(PowerLawPsd { amplitude, alpha, omega_ref, omega_lo, omega_hi })
    }

    pub fn eval(&self, omega: f64) -> f64 {
        if omega < self.omega_lo || omega > self.omega_hi {
            return 0.0;
        }
        self.amplitude * (self.omega_ref / omega).powf(self.alpha)
    }

    /// Exact integral of S over [a, b] (clipped to the band).
    pub fn band_power(&self, a: f64, b: f64) -> f64 {
        let a = a.max(self.omega_lo);
        let b = b.min(self.omega_hi);
        if b <= a {
            return 0.0;
        }
        let k = self.amplitude * self.omega_ref.powf(self.alpha);
        if (self.alpha - 1.0).abs() < 1e-12 {
            k * (b / a).ln()
        } else {
            let e = 1.0 - self.alpha;
            k * (b.powf(e) - a.powf(e)) / e
        }
    }
}

/// Gaussian bump S(omega) = amplitude * exp(-(omega-center)^2 / (2 width^2)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPsd {
    /// Center angular frequency (the axial trap frequency), rad/s.
    pub center: f64,
    /// Standard deviation, rad/s.
    pub width: f64,
    /// Peak value of S, rad/s.
    pub amplitude: f64,
}

impl GaussianPsd {
    /// Integration support is truncated at this many sigmas.
    pub const SUPPORT_SIGMAS: f64 = 8.0;

    pub fn new(center: f64, width: f64, amplitude: f64) -> Result<Self> {
        if !(center > 0.0) {
            return Err(Error::invalid("gaussian center must be > 0"));
        }
        if !(width > 0.0) {
            return Err(Error::invalid("gaussian width must be > 0"));
        }
        if amplitude < 0.0 {
            return Err(Error::invalid("gaussian amplitude must be >= 0"));
        }
        Ok(GaussianPsd { center, width, amplitude })
    }

    pub fn eval(&self, omega: f64) -> f64 {
        let z = (omega - self.center) / self.width;
        self.amplitude * (-0.5 * z * z).exp()
    }

    fn support(&self) -> (f64, f64) {
        let lo = (self.center - Self::SUPPORT_SIGMAS * self.width).max(0.0);
        (lo, self.center + Self::SUPPORT_SIGMAS * self.width)
    }

    /// Integral of S over [a, b] by Gauss-Kronrod panels.
    pub fn band_power(&self, a: f64, b: f64) -> f64 {
        let (lo, hi) = self.support();
        let a = a.max(lo);
        let b = b.min(hi);
        if b <= a {
            return 0.0;
        }
        // panels no wider than one sigma keep GK15 essentially exact
        let n = ((b - a) / self.width).ceil() as usize + 1;
        let step = (b - a) / n as f64;
        let mut total = 0.0;
        for i in 0..n {
            let (v, _) = gk15(&|w| self.eval(w), a + i as f64 * step, a + (i + 1) as f64 * step);
            total += v;
        }
        total
    }
}

/// One spectral component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PsdTerm {
    PowerLaw(PowerLawPsd),
    Gaussian(GaussianPsd),
}

impl PsdTerm {
    pub fn eval(&self, omega: f64) -> f64 {
        match self {
            PsdTerm::PowerLaw(p) => p.eval(omega),
            PsdTerm::Gaussian(g) => g.eval(omega),
        }
    }

    /// Frequency range outside of which this term is treated as zero.
    pub fn support(&self) -> (f64, f64) {
        match self {
            PsdTerm::PowerLaw(p) => (p.omega_lo, p.omega_hi),
            PsdTerm::Gaussian(g) => g.support(),
        }
    }

    pub fn band_power(&self, a: f64, b: f64) -> f64 {
        match self {
            PsdTerm::PowerLaw(p) => p.band_power(a, b),
            PsdTerm::Gaussian(g) => g.band_power(a, b),
        }
    }
}

/// Sum of spectral components.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CompositePsd {
    terms: Vec<PsdTerm>,
}

impl CompositePsd {
    pub fn new(terms: Vec<PsdTerm>) -> Self {
        CompositePsd { terms }
    }

    pub fn terms(&self) -> &[PsdTerm] {
        &self.terms
    }

    pub fn push(&mut self, term: PsdTerm) {
        self.terms.push(term);
    }

    /// S_total(omega), always >= 0.
    pub fn eval(&self, omega: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(omega)).sum()
    }

    /// Total integral of S over [a, b].
    pub fn band_power(&self, a: f64, b: f64) -> f64 {
        self.terms.iter().map(|t| t.band_power(a, b)).sum()
    }

    /// Highest frequency carrying any power.
    pub fn max_support(&self) -> f64 {
        self.terms.iter().map(|t| t.support().1).fold(0.0, f64::max)
    }

    /// One-line description for output headers.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| match t {
                PsdTerm::PowerLaw(p) => format!(
                    "powerlaw(amp={:.6e},alpha={},ref={:.6e},lo={:.6e},hi={:.6e})",
                    p.amplitude, p.alpha, p.omega_ref, p.omega_lo, p.omega_hi
                ),
                PsdTerm::Gaussian(g) => format!(
                    "gaussian(center={:.6e},width={:.6e},amp={:.6e})",
                    g.center, g.width, g.amplitude
                ),
            })
            .collect();
        parts.join(" + ")
    }
}

/// Evaluate a composite PSD at one frequency.
pub fn psd_eval(model: &CompositePsd, omega: f64) -> f64 {
    model.eval(omega.max(0.0))
}

pub const TWO_PI: f64 = std::f64::consts::TAU;

/// Default infrared cutoff for power-law floors: 2 pi x 10 Hz.
pub const DEFAULT_OMEGA_LO: f64 = TWO_PI * 10.0;
/// Default ultraviolet cutoff: 2 pi x 1 MHz.
pub const DEFAULT_OMEGA_HI: f64 = TWO_PI * 1e6;
/// Reference frequency at which power-law amplitudes are quoted: 2 pi x 1 kHz.
pub const DEFAULT_OMEGA_REF: f64 = TWO_PI * 1e3;

/// Power-law floor plus a Gaussian bump at the axial trap frequency.
pub fn heuristic_model(
    alpha: f64,
    floor_amp: f64,
    trap_freq: f64,
    peak_amp: f64,
    peak_width: f64,
) -> Result<CompositePsd> {
    let floor = PowerLawPsd::new(floor_amp, alpha, DEFAULT_OMEGA_REF, DEFAULT_OMEGA_LO, DEFAULT_OMEGA_HI)?;
    let mut terms = vec![PsdTerm::PowerLaw(floor)];
    if peak_amp > 0.0 {
        terms.push(PsdTerm::Gaussian(GaussianPsd::new(trap_freq, peak_width, peak_amp)?));
    }
    Ok(CompositePsd::new(terms))
}

/// Calibration constants frozen from the one-time fit of the heuristic
/// model: the floor amplitude reproduces the Ramsey T2* = 38 us and the
/// infrared cutoff is tuned so the spin-echo T2 lands at 480 us with the
/// Gaussian bump below (see configs/calibrated.toml and the `calibrate`
/// example, which regenerates these numbers).
pub mod calibrated {
    use super::*;

    pub const ALPHA: f64 = 1.73;
    /// Floor amplitude at 2 pi x 1 kHz, rad/s.
    pub const FLOOR_AMP: f64 = 1.520_196_797_798_321e3;
    /// Infrared cutoff, rad/s (2 pi x 2.3505 Hz).
    pub const OMEGA_LO: f64 = 1.476_847_946_977_290_2e1;
    /// Ultraviolet cutoff, rad/s.
    pub const OMEGA_HI: f64 = DEFAULT_OMEGA_HI;
    /// Trap frequency (Gaussian center), rad/s.
    pub const TRAP_FREQ: f64 = TWO_PI * 12.0e3;
    /// Gaussian peak amplitude, rad/s.
    pub const PEAK_AMP: f64 = 400.0;
    /// Gaussian width, rad/s.
    pub const PEAK_WIDTH: f64 = TWO_PI * 1.5e3;
    /// Fringe visibility of the readout.
    pub const VISIBILITY: f64 = 0.837;

    /// The frozen calibrated model.
    pub fn model() -> CompositePsd {
        let floor = PowerLawPsd::new(FLOOR_AMP, ALPHA, DEFAULT_OMEGA_REF, OMEGA_LO, OMEGA_HI)
            .expect("calibrated floor constants are valid");
        let peak = GaussianPsd::new(TRAP_FREQ, PEAK_WIDTH, PEAK_AMP)
            .expect("calibrated peak constants are valid");
        CompositePsd::new(vec![PsdTerm::PowerLaw(floor), PsdTerm::Gaussian(peak)])
    }

    /// Same floor and peak shape but re-centered (trap-depth variants).
    pub fn model_with_center(trap_freq: f64) -> CompositePsd {
        let floor = PowerLawPsd::new(FLOOR_AMP, ALPHA, DEFAULT_OMEGA_REF, OMEGA_LO, OMEGA_HI)
            .expect("calibrated floor constants are valid");
        let peak = GaussianPsd::new(trap_freq, PEAK_WIDTH, PEAK_AMP)
            .expect("calibrated peak constants are valid");
        CompositePsd::new(vec![PsdTerm::PowerLaw(floor), PsdTerm::Gaussian(peak)])
    }
}

/// Flat S(omega) equivalent of a magnetic-field amplitude spectral density.
///
/// The splitting shifts by sensitivity * B, so beta_z = pi * sensitivity * B
/// and the one-sided PSD per unit angular frequency is
/// (pi * sensitivity * b_asd)^2 / (2 pi).
pub fn field_noise_to_psd(b_asd: f64, sensitivity: f64) -> f64 {
    let beta_density = std::f64::consts::PI * sensitivity * b_asd;
    beta_density * beta_density / TWO_PI
}

/// Axial trap frequency omega_z = sqrt(2 U0 / (m zR^2)).
pub fn axial_trap_frequency(depth_u0: f64, rayleigh_zr: f64, mass: f64) -> Result<f64> {
    if !(depth_u0 > 0.0 && rayleigh_zr > 0.0 && mass > 0.0) {
        return Err(Error::invalid(
            "axial_trap_frequency: depth, Rayleigh range and mass must all be > 0",
        ));
    }
    Ok((2.0 * depth_u0 / (mass * rayleigh_zr * rayleigh_zr)).sqrt())
}

/// Discretized spectrum: sum-of-cosines modes with exact per-panel power.
///
/// Each term is split into `n_modes` panels (log-spaced for power laws,
/// linear for Gaussians); mode k carries amplitude sqrt(2 P_k / pi) where
/// P_k is the exact band power, so the ensemble variance matches
/// (1/pi) int S d omega for any panel count.
#[derive(Debug, Clone)]
pub struct ModeSet {
    pub omega: Vec<f64>,
    pub amp: Vec<f64>,
}

impl ModeSet {
    pub fn new(model: &CompositePsd, n_modes_per_term: usize) -> Self {
        let mut omega = Vec::new();
        let mut amp = Vec::new();
        for term in model.terms() {
            let (lo, hi) = term.support();
            if hi <= lo {
                continue;
            }
            match term {
                PsdTerm::PowerLaw(_) => {
                    let ratio = (hi / lo).powf(1.0 / n_modes_per_term as f64);
                    let mut a = lo;
                    for _ in 0..n_modes_per_term {
                        let b = a * ratio;
                        let p = term.band_power(a, b);
                        omega.push((a * b).sqrt());
                        amp.push((2.0 * p / std::f64::consts::PI).sqrt());
                        a = b;
                    }
                }
                PsdTerm::Gaussian(_) => {
                    let lo = lo.max(1e-9 * hi);
                    let step = (hi - lo) / n_modes_per_term as f64;
                    for i in 0..n_modes_per_term {
                        let a = lo + i as f64 * step;
                        let b = a + step;
                        let p = term.band_power(a, b);
                        omega.push(0.5 * (a + b));
                        amp.push((2.0 * p / std::f64::consts::PI).sqrt());
                    }
                }
            }
        }
        ModeSet { omega, amp }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Ensemble variance of the generated process, (1/pi) sum P_k.
    pub fn variance(&self) -> f64 {
        self.amp.iter().map(|a| 0.5 * a * a).sum()
    }
}

/// A sampled realization of beta_z(t).
#[derive(Debug, Clone)]
pub struct NoiseTrajectory {
    /// Sample spacing, s.
    pub dt: f64,
    /// beta_z values, rad/s.
    pub samples: Vec<f64>,
    pub seed: u64,
}

/// Generate one realization with i.i.d. uniform mode phases.
///
/// Deterministic for fixed (model, duration, dt, n_modes, seed).
pub fn sample_trajectory(
    model: &CompositePsd,
    duration: f64,
    dt: f64,
    n_modes: usize,
    seed: u64,
) -> Result<NoiseTrajectory> {
    if !(duration > 0.0) {
        return Err(Error::invalid("sample_trajectory: duration must be > 0"));
    }
    if !(dt > 0.0) {
        return Err(Error::invalid("sample_trajectory: dt must be > 0"));
    }
    if n_modes < 64 {
        return Err(Error::invalid("sample_trajectory: n_modes must be >= 64"));
    }
    let omega_hi = model.max_support();
    if omega_hi > 0.0 && dt > std::f64::consts::PI / omega_hi {
        return Err(Error::invalid(format!(
            "sample_trajectory: dt = {dt:.3e} s too coarse to resolve omega_hi = {omega_hi:.3e} rad/s (need dt <= pi/omega_hi)"
        )));
    }
    let modes = ModeSet::new(model, n_modes);
    let n_samples = (duration / dt).floor() as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = vec![0.0f64; n_samples];
    for k in 0..modes.len() {
        let phase: f64 = rng.gen_range(0.0..TWO_PI);
        let a = modes.amp[k];
        if a == 0.0 {
            continue;
        }
        let (mut s, mut c) = phase.sin_cos();
        let (sd, cd) = (modes.omega[k] * dt).sin_cos();
        for sample in samples.iter_mut() {
            *sample += a * c;
            let c2 = c * cd - s * sd;
            s = s * cd + c * sd;
            c = c2;
        }
    }
    Ok(NoiseTrajectory { dt, samples, seed })
}
