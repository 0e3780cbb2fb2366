//! Frequency-domain filter function g_N(omega, tau) of a pulse sequence.
//!
//! g is the squared, normalized Fourier transform of the phase-accumulation
//! parity s(t) (+1/-1, flipping at each pulse), normalized so that
//! chi(tau) = (2/pi) tau^2 int_0^inf S(omega) g(omega, tau) d omega.
//! Evaluated per interval through sinc factors, which stays accurate down
//! to omega*tau -> 0 where the naive complex sum cancels catastrophically.

use crate::error::{Error, Result};
use crate::exec;
use crate::numerics::optim::golden_max;
use crate::numerics::sinc;
use crate::sequences::PulseSequence;

/// Precomputed per-interval geometry for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct FilterEvaluator {
    // interval half-widths, midpoints and alternating signs (+1 first)
    half: Vec<f64>,
    mid: Vec<f64>,
    signed_width: Vec<f64>,
    n_pulses: usize,
}

impl FilterEvaluator {
    pub fn new(seq: &PulseSequence) -> Self {
        let fr = seq.fractions();
        let n = fr.len();
        let mut half = Vec::with_capacity(n + 1);
        let mut mid = Vec::with_capacity(n + 1);
        let mut signed_width = Vec::with_capacity(n + 1);
        let mut prev = 0.0;
        let mut sign = 1.0;
        for &next in fr.iter().chain(std::iter::once(&1.0)) {
            half.push(0.5 * (next - prev));
            mid.push(0.5 * (next + prev));
            signed_width.push(sign * (next - prev));
            prev = next;
            sign = -sign;
        }
        FilterEvaluator { half, mid, signed_width, n_pulses: n }
    }

    pub fn n_pulses(&self) -> usize {
        self.n_pulses
    }

    /// g as a function of theta = omega * tau.
    pub fn g_theta(&self, theta: f64) -> f64 {
        if theta == 0.0 {
            // removable singularity: DC noise is fully refocused for any
            // refocused sequence, untouched for bare free evolution
            return if self.n_pulses == 0 { 1.0 } else { 0.0 };
        }
        let mut re = 0.0;
        let mut im = 0.0;
        for j in 0..self.half.len() {
            let k = self.signed_width[j] * sinc(self.half[j] * theta);
            let (s, c) = (self.mid[j] * theta).sin_cos();
            re += k * c;
            im += k * s;
        }
        re * re + im * im
    }
}

/// Pointwise filter samples over a frequency grid.
#[derive(Debug, Clone)]
pub struct FilterSamples {
    /// Angular frequencies, rad/s, strictly increasing.
    pub omega: Vec<f64>,
    /// Dimensionless non-negative filter values.
    pub g: Vec<f64>,
    /// Total free evolution time, s.
    pub tau: f64,
    pub sequence: PulseSequence,
}

/// Evaluate g_N(omega, tau) for one frequency.
pub fn filter_g(seq: &PulseSequence, omega: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("filter: tau = {tau} must be > 0")));
    }
    if omega < 0.0 {
        return Err(Error::invalid(format!("filter: omega = {omega} must be >= 0")));
    }
    Ok(FilterEvaluator::new(seq).g_theta(omega * tau))
}

/// Sample the filter on a uniform grid [omega_min, omega_max].
pub fn sample_filter(
    seq: &PulseSequence,
    tau: f64,
    omega_min: f64,
    omega_max: f64,
    n_points: usize,
) -> Result<FilterSamples> {
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("filter: tau = {tau} must be > 0")));
    }
    if !(omega_min >= 0.0 && omega_min < omega_max) {
        return Err(Error::invalid(format!(
            "filter: need 0 <= omega_min < omega_max, got [{omega_min}, {omega_max}]"
        )));
    }
    if n_points < 2 {
        return Err(Error::invalid("filter: n_points must be >= 2"));
    }
    let ev = FilterEvaluator::new(seq);
    let step = (omega_max - omega_min) / (n_points - 1) as f64;
    let omega: Vec<f64> = (0..n_points).map(|i| omega_min + step * i as f64).collect();
    let g = {
        let ev = &ev;
        let omega = &omega;
        exec::map_indexed(n_points, move |i| ev.g_theta(omega[i] * tau))
    };
    Ok(FilterSamples { omega, g, tau, sequence: seq.clone() })
}

/// Frequency of the global maximum of g for a refocused sequence.
///
/// Coarse scan at 64 points per pi/tau up to (N+2) pi/tau, then
/// golden-section refinement; ties resolve to the lowest frequency.
pub fn peak_frequency(seq: &PulseSequence, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("filter: tau = {tau} must be > 0")));
    }
    let n = seq.n_pulses();
    if n == 0 {
        return Err(Error::invalid("peak_frequency: Ramsey filter peaks at DC"));
    }
    let ev = FilterEvaluator::new(seq);
    let theta_max = (n as f64 + 2.0) * std::f64::consts::PI;
    let m = 64 * (n + 2);
    let dt = theta_max / m as f64;
    let mut best_i = 1;
    let mut best_g = f64::NEG_INFINITY;
    for i in 1..=m {
        let g = ev.g_theta(dt * i as f64);
        if g > best_g {
            best_g = g;
            best_i = i;
        }
    }
    let lo = dt * (best_i.saturating_sub(1).max(1)) as f64 - dt;
    let hi = dt * (best_i + 1) as f64;
    let theta = golden_max(|t| ev.g_theta(t), lo.max(dt * 0.5), hi.min(theta_max), 1e-12 * theta_max);
    Ok(theta / tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::PulseSequence;

    // closed forms for the two analytic cases, in the same stable form
    fn g_ramsey_closed(theta: f64) -> f64 {
        let s = sinc(0.5 * theta);
        s * s
    }
    fn g_echo_closed(theta: f64) -> f64 {
        let q = 0.25 * theta;
        let s = q.sin();
        let sc = sinc(q);
        s * s * sc * sc
    }

    #[test]
    fn ramsey_matches_closed_form() {
        let seq = PulseSequence::ramsey();
        let ev = FilterEvaluator::new(&seq);
        for i in 0..=1000 {
            let theta = 12.7 * i as f64 / 1000.0;
            let a = ev.g_theta(theta);
            let b = g_ramsey_closed(theta);
            let diff = (a - b).abs();
            assert!(
                diff <= 1e-12 * a.abs().max(b.abs()) || diff < 1e-20,
                "theta={theta}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn echo_matches_closed_form() {
        let seq = PulseSequence::echo();
        let ev = FilterEvaluator::new(&seq);
        for i in 0..=1000 {
            let theta = 25.3 * i as f64 / 1000.0;
            let a = ev.g_theta(theta);
            let b = g_echo_closed(theta);
            let diff = (a - b).abs();
            assert!(
                diff <= 1e-12 * a.abs().max(b.abs()) || diff < 1e-20,
                "theta={theta}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn ramsey_dc_limit_is_one_and_echo_zero() {
        assert_eq!(filter_g(&PulseSequence::ramsey(), 0.0, 1e-4).unwrap(), 1.0);
        assert_eq!(filter_g(&PulseSequence::echo(), 0.0, 1e-4).unwrap(), 0.0);
        for n in 1..=8 {
            for seq in [PulseSequence::udd(n).unwrap(), PulseSequence::cpmg(n).unwrap()] {
                assert_eq!(filter_g(&seq, 0.0, 1e-4).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn ramsey_value_at_theta_pi() {
        // 4 sin^2(pi/2) / pi^2 = 4/pi^2
        let g = filter_g(&PulseSequence::ramsey(), std::f64::consts::PI, 1.0).unwrap();
        assert!((g - 4.0 / std::f64::consts::PI.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn echo_value_at_theta_two_pi() {
        // 16 sin^4(pi/2) / (2 pi)^2 = 4/pi^2
        let g = filter_g(&PulseSequence::echo(), 2.0 * std::f64::consts::PI, 1.0).unwrap();
        assert!((g - 4.0 / std::f64::consts::PI.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn mirror_reversal_leaves_filter_invariant() {
        let seq = PulseSequence::custom(vec![0.13, 0.41, 0.77]).unwrap();
        let rev = seq.reversed();
        let a = FilterEvaluator::new(&seq);
        let b = FilterEvaluator::new(&rev);
        for i in 1..400 {
            let theta = 0.11 * i as f64;
            let (ga, gb) = (a.g_theta(theta), b.g_theta(theta));
            assert!((ga - gb).abs() <= 1e-12 * ga.max(gb).max(1e-30), "theta={theta}");
        }
    }

    #[test]
    fn echo_peak_against_closed_form_maximum() {
        // oracle: golden-section maximum of the echo closed form
        let tau = 100e-6;
        let theta_star = golden_max(g_echo_closed, 1.0, 8.0, 1e-13);
        let w = peak_frequency(&PulseSequence::echo(), tau).unwrap();
        assert!(
            (w - theta_star / tau).abs() / (theta_star / tau) < 1e-3,
            "peak {w} vs oracle {}",
            theta_star / tau
        );
        // the maximum of sin^4(t/4)/ (t/4)^2 /4... solves tan(u) = 2u, u = theta/4
        let u = theta_star / 4.0;
        assert!((u.tan() - 2.0 * u).abs() < 1e-5, "u = {u}");
    }

    #[test]
    fn pdd5_peak_lies_between_5pi_and_6pi() {
        let tau = 1e-3;
        let w = peak_frequency(&PulseSequence::pdd(5).unwrap(), tau).unwrap();
        let lo = 5.0 * std::f64::consts::PI / tau;
        let hi = 6.0 * std::f64::consts::PI / tau;
        assert!(w > lo && w < hi, "w*tau/pi = {}", w * tau / std::f64::consts::PI);
    }

    #[test]
    fn cpmg_peak_approaches_n_pi_over_tau_from_above() {
        let tau = 1.0;
        let mut prev_ratio = f64::INFINITY;
        for n in 2..=20 {
            let w = peak_frequency(&PulseSequence::cpmg(n).unwrap(), tau).unwrap();
            let ratio = w * tau / (n as f64 * std::f64::consts::PI);
            assert!(ratio > 1.0, "n={n}: ratio {ratio}");
            assert!(ratio < prev_ratio + 1e-9, "n={n}: {ratio} vs {prev_ratio}");
            prev_ratio = ratio;
        }
        assert!(prev_ratio < 1.01);
    }

    #[test]
    fn sample_filter_locates_echo_maximum_on_grid() {
        let tau = 1e-4;
        let s = sample_filter(
            &PulseSequence::echo(),
            tau,
            0.0,
            4.0 * std::f64::consts::PI / tau,
            1001,
        )
        .unwrap();
        let (imax, _) = s
            .g
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &g)| if g > acc.1 { (i, g) } else { acc });
        let w_peak = peak_frequency(&PulseSequence::echo(), tau).unwrap();
        let step = s.omega[1] - s.omega[0];
        assert!((s.omega[imax] - w_peak).abs() <= step, "grid peak off by more than a step");
    }

    #[test]
    fn ramsey_sample_is_dc_peaked() {
        let tau = 1e-4;
        let s =
            sample_filter(&PulseSequence::ramsey(), tau, 0.0, 4.0 * std::f64::consts::PI / tau, 801)
                .unwrap();
        let imax = (0..s.g.len()).max_by(|&i, &j| s.g[i].total_cmp(&s.g[j])).unwrap();
        assert_eq!(imax, 0);
    }

    #[test]
    fn invalid_arguments_rejected() {
        let seq = PulseSequence::echo();
        assert!(filter_g(&seq, 1.0, 0.0).is_err());
        assert!(filter_g(&seq, -1.0, 1.0).is_err());
        assert!(sample_filter(&seq, 1.0, 2.0, 1.0, 10).is_err());
        assert!(sample_filter(&seq, 1.0, 0.0, 1.0, 1).is_err());
        assert!(peak_frequency(&PulseSequence::ramsey(), 1.0).is_err());
    }
}
