//! Coherence decay under a pulse sequence and a noise spectrum.
//!
//! chi(tau) = (2/pi) tau^2 int_0^inf S(omega) g_N(omega, tau) d omega and
//! W(tau) = exp(-chi); chi is half the variance of the accumulated random
//! phase for Gaussian noise, which is what ties the filter-function route
//! and the Monte-Carlo trajectory route together.

use crate::error::{Error, Result};
use crate::exec;
use crate::filter::FilterEvaluator;
use crate::noise::{CompositePsd, ModeSet, PsdTerm};
use crate::numerics::quad;
use crate::sequences::PulseSequence;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Default relative tolerance for the coherence integral.
pub const DEFAULT_REL_TOL: f64 = 1e-6;

/// Cap on pre-seeded oscillation panels per term; beyond this the panels
/// coarsen and the adaptive splitter takes over.
const MAX_OSC_PANELS: usize = 4096;
const MAX_SEGMENTS: usize = 120_000;

/// Optional energy-relaxation envelope exp(-tau / (2 T1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T1Envelope {
    /// Energy relaxation time, s.
    pub t1: f64,
    pub enabled: bool,
}

impl T1Envelope {
    /// Disabled envelope with the default T1 of one second.
    pub fn disabled() -> Self {
        T1Envelope { t1: 1.0, enabled: false }
    }

    pub fn enabled(t1: f64) -> Result<Self> {
        if !(t1 > 0.0) {
            return Err(Error::invalid("T1 must be > 0 when the envelope is enabled"));
        }
        Ok(T1Envelope { t1, enabled: true })
    }

    pub fn factor(&self, tau: f64) -> f64 {
        if self.enabled {
            (-tau / (2.0 * self.t1)).exp()
        } else {
            1.0
        }
    }
}

impl Default for T1Envelope {
    fn default() -> Self {
        Self::disabled()
    }
}

/// Quadrature breakpoints for one PSD term: support edges, a geometric
/// ladder through any steep infrared rise, explicit points across Gaussian
/// bumps (which a coarse panel's nodes could otherwise straddle), and the
/// filter oscillation grid at multiples of pi/tau.
pub(crate) fn term_breakpoints(term: &PsdTerm, tau: f64) -> Vec<f64> {
    let (lo, hi) = term.support();
    if !(hi > lo) {
        return Vec::new();
    }
    let pstep = std::f64::consts::PI / tau;
    let mut bp = vec![lo];
    if let PsdTerm::PowerLaw(_) = term {
        let mut x = lo;
        while 2.0 * x < pstep.min(hi) && bp.len() < 64 {
            x *= 2.0;
            bp.push(x);
        }
    }
    if let PsdTerm::Gaussian(g) = term {
        for j in [-8.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let x = g.center + j * g.width;
            if x > lo && x < hi {
                bp.push(x);
            }
        }
    }
    let k_lo = (lo / pstep).floor() as u64 + 1;
    let k_hi = (hi / pstep).ceil() as u64;
    let stride = ((k_hi.saturating_sub(k_lo)) as usize / MAX_OSC_PANELS) + 1;
    let mut k = k_lo;
    while (k as f64) * pstep < hi {
        bp.push(k as f64 * pstep);
        k += stride as u64;
    }
    bp.push(hi);
    bp.sort_by(f64::total_cmp);
    bp.dedup();
    bp
}

pub(crate) fn chi_with(
    ev: &FilterEvaluator,
    tau: f64,
    model: &CompositePsd,
    rel_tol: f64,
) -> Result<f64> {
    let mut total = 0.0;
    for term in model.terms() {
        let bp = term_breakpoints(term, tau);
        if bp.len() < 2 {
            continue;
        }
        let f = |w: f64| term.eval(w) * ev.g_theta(w * tau);
        let q = quad::adaptive(&f, &bp, rel_tol, 0.0, MAX_SEGMENTS)?;
        total += q.value;
    }
    Ok(2.0 / std::f64::consts::PI * tau * tau * total)
}

/// Coherence integral chi(tau) >= 0 by adaptive quadrature.
pub fn chi(seq: &PulseSequence, tau: f64, model: &CompositePsd, rel_tol: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("chi: tau = {tau} must be > 0")));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::invalid("chi: rel_tol must be > 0"));
    }
    chi_with(&FilterEvaluator::new(seq), tau, model, rel_tol)
}

/// W(tau) = exp(-chi) with the optional T1 envelope applied.
pub fn coherence_w(
    seq: &PulseSequence,
    tau: f64,
    model: &CompositePsd,
    t1env: &T1Envelope,
) -> Result<f64> {
    Ok((-chi(seq, tau, model, DEFAULT_REL_TOL)?).exp() * t1env.factor(tau))
}

/// Map coherence to an F=2 population, p = (1 + visibility * w) / 2.
pub fn population(w: f64, visibility: f64) -> f64 {
    0.5 * (1.0 + visibility * w)
}

/// Opt-in binomial sampling layer emulating repeated state detections.
#[derive(Debug, Clone, Copy)]
pub struct SamplingSpec {
    pub n_rep: u32,
    pub seed: u64,
}

/// Sampled W(tau) and mapped population over a tau grid.
#[derive(Debug, Clone)]
pub struct CoherenceCurve {
    /// Free-evolution times, s.
    pub tau: Vec<f64>,
    /// Coherence values in [0, 1].
    pub w: Vec<f64>,
    /// Populations (1 + visibility * w) / 2.
    pub p2: Vec<f64>,
    /// Binomially sampled populations, when sampling is enabled.
    pub p2_sampled: Option<Vec<f64>>,
    /// Per-point standard error of the sampled populations.
    pub std_err: Option<Vec<f64>>,
    pub sequence: String,
    pub noise: String,
}

/// Evaluate W and the mapped population on a tau grid.
///
/// Grid points run in parallel (feature `parallel`); sampling draws use a
/// per-point RNG stream so results do not depend on scheduling.
pub fn coherence_curve(
    seq: &PulseSequence,
    tau_grid: &[f64],
    model: &CompositePsd,
    t1env: &T1Envelope,
    visibility: f64,
    sampling: Option<SamplingSpec>,
    rel_tol: f64,
) -> Result<CoherenceCurve> {
    if tau_grid.is_empty() {
        return Err(Error::invalid("coherence_curve: empty tau grid"));
    }
    if !tau_grid.windows(2).all(|w| w[1] > w[0]) || !(tau_grid[0] > 0.0) {
        return Err(Error::invalid("coherence_curve: tau grid must be positive and increasing"));
    }
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::invalid(format!("visibility = {visibility} outside [0, 1]")));
    }
    let ev = FilterEvaluator::new(seq);
    let results = {
        let ev = &ev;
        exec::map_indexed(tau_grid.len(), move |i| {
            chi_with(ev, tau_grid[i], model, rel_tol)
                .map(|c| (-c).exp() * t1env.factor(tau_grid[i]))
        })
    };
    let mut w = Vec::with_capacity(results.len());
    for r in results {
        w.push(r?);
    }
    let p2: Vec<f64> = w.iter().map(|&wi| population(wi, visibility)).collect();
    let (p2_sampled, std_err) = match sampling {
        None => (None, None),
        Some(spec) => {
            if spec.n_rep == 0 {
                return Err(Error::invalid("sampling n_rep must be >= 1"));
            }
            let mut ps = Vec::with_capacity(p2.len());
            let mut se = Vec::with_capacity(p2.len());
            for (i, &p) in p2.iter().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                rng.set_stream(i as u64);
                let k = Binomial::new(spec.n_rep as u64, p.clamp(0.0, 1.0))
                    .expect("binomial parameters are valid")
                    .sample(&mut rng);
                let phat = k as f64 / spec.n_rep as f64;
                ps.push(phat);
                se.push((phat * (1.0 - phat) / spec.n_rep as f64).sqrt());
            }
            (Some(ps), Some(se))
        }
    };
    Ok(CoherenceCurve {
        tau: tau_grid.to_vec(),
        w,
        p2,
        p2_sampled,
        std_err,
        sequence: format!("{}({})", seq.kind(), seq.n_pulses()),
        noise: model.describe(),
    })
}

/// Outcome of the 1/e-time extraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum T2Extraction {
    /// First downward crossing of W = 1/e, linearly interpolated.
    Crossed(f64),
    /// The curve never reached 1/e; carries the final coherence value.
    NotReached { final_w: f64 },
}

impl T2Extraction {
    pub fn time(&self) -> Option<f64> {
        match self {
            T2Extraction::Crossed(t) => Some(*t),
            T2Extraction::NotReached { .. } => None,
        }
    }
}

/// First downward crossing of w = 1/e on the curve.
pub fn extract_t2(curve: &CoherenceCurve) -> Result<T2Extraction> {
    if curve.tau.is_empty() {
        return Err(Error::invalid("extract_t2: empty curve"));
    }
    let target = (-1.0f64).exp();
    if curve.w[0] <= target {
        // already below at the first sample; the crossing happened earlier
        return Ok(T2Extraction::Crossed(curve.tau[0]));
    }
    for i in 1..curve.w.len() {
        let (w0, w1) = (curve.w[i - 1], curve.w[i]);
        if w0 > target && w1 <= target {
            let f = (w0 - target) / (w0 - w1);
            return Ok(T2Extraction::Crossed(curve.tau[i - 1] + f * (curve.tau[i] - curve.tau[i - 1])));
        }
    }
    Ok(T2Extraction::NotReached { final_w: *curve.w.last().expect("non-empty") })
}

/// Monte-Carlo estimate of W(tau) from stochastic phase accumulation.
///
/// Each trajectory draws independent mode phases, accumulates
/// phi = 2 sum_j (-1)^j int beta_z dt over the free-evolution intervals by
/// trapezoidal integration with dt <= pi / (10 omega_hi), and the estimate
/// is |<e^{i phi}>| with a delta-method standard error. Deterministic for a
/// fixed seed; trajectories run in parallel with an order-independent
/// reduction.
pub fn mc_coherence(
    seq: &PulseSequence,
    tau: f64,
    model: &CompositePsd,
    n_traj: usize,
    n_modes: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n_traj < 100 {
        return Err(Error::invalid("mc_coherence: need at least 100 trajectories"));
    }
    if n_modes < 64 {
        return Err(Error::invalid("mc_coherence: n_modes must be >= 64"));
    }
    if !(tau > 0.0) {
        return Err(Error::invalid("mc_coherence: tau must be > 0"));
    }
    let modes = ModeSet::new(model, n_modes);
    if modes.is_empty() || modes.variance() == 0.0 {
        return Ok((1.0, 0.0));
    }
    let omega_hi = model.max_support();
    let dt_max = std::f64::consts::PI / (10.0 * omega_hi);

    // interval edges in absolute time, with per-interval step counts
    let mut edges = Vec::with_capacity(seq.n_pulses() + 2);
    edges.push(0.0);
    edges.extend(seq.fractions().iter().map(|f| f * tau));
    edges.push(tau);
    let steps: Vec<usize> = edges
        .windows(2)
        .map(|w| (((w[1] - w[0]) / dt_max).ceil() as usize).max(1))
        .collect();

    let phases: Vec<(f64, f64)> = exec::map_indexed(n_traj, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64 + 1);
        let mode_phases: Vec<f64> =
            (0..modes.len()).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        let mut phi = 0.0;
        let mut sign = 1.0;
        for (j, w) in edges.windows(2).enumerate() {
            let (t0, t1) = (w[0], w[1]);
            let n = steps[j];
            let dt = (t1 - t0) / n as f64;
            let mut integral = 0.0;
            // four modes per pass: independent rotation chains overlap
            let n_modes_total = modes.len();
            let mut m = 0;
            while m < n_modes_total {
                let lanes = (n_modes_total - m).min(4);
                let mut c = [0.0f64; 4];
                let mut s = [0.0f64; 4];
                let mut cd = [1.0f64; 4];
                let mut sd = [0.0f64; 4];
                let mut amp = [0.0f64; 4];
                for l in 0..lanes {
                    let om = modes.omega[m + l];
                    let (si, ci) = (om * t0 + mode_phases[m + l]).sin_cos();
                    let (sdi, cdi) = (om * dt).sin_cos();
                    c[l] = ci;
                    s[l] = si;
                    cd[l] = cdi;
                    sd[l] = sdi;
                    amp[l] = modes.amp[m + l];
                }
                let mut acc = [0.0f64; 4];
                for l in 0..4 {
                    acc[l] = 0.5 * c[l];
                }
                for _ in 0..n - 1 {
                    for l in 0..4 {
                        let c2 = c[l] * cd[l] - s[l] * sd[l];
                        s[l] = s[l] * cd[l] + c[l] * sd[l];
                        c[l] = c2;
                        acc[l] += c[l];
                    }
                }
                for l in 0..4 {
                    let c_end = c[l] * cd[l] - s[l] * sd[l];
                    acc[l] += 0.5 * c_end;
                    integral += amp[l] * acc[l] * dt;
                }
                m += lanes;
            }
            phi += 2.0 * sign * integral;
            sign = -sign;
        }
        let (s, c) = phi.sin_cos();
        (c, s)
    });

    let n = n_traj as f64;
    let mean_c = phases.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_s = phases.iter().map(|p| p.1).sum::<f64>() / n;
    let w = (mean_c * mean_c + mean_s * mean_s).sqrt();
    let var_c = phases.iter().map(|p| (p.0 - mean_c).powi(2)).sum::<f64>() / (n - 1.0);
    let var_s = phases.iter().map(|p| (p.1 - mean_s).powi(2)).sum::<f64>() / (n - 1.0);
    let cov = phases.iter().map(|p| (p.0 - mean_c) * (p.1 - mean_s)).sum::<f64>() / (n - 1.0);
    let se = if w > 1e-12 {
        ((mean_c * mean_c * var_c + mean_s * mean_s * var_s + 2.0 * mean_c * mean_s * cov)
            / (w * w * n))
            .sqrt()
    } else {
        ((var_c + var_s) / (2.0 * n)).sqrt()
    };
    Ok((w, se))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{GaussianPsd, PowerLawPsd, DEFAULT_OMEGA_REF, TWO_PI};

    fn white_band(s0: f64, lo: f64, hi: f64) -> CompositePsd {
        CompositePsd::new(vec![PsdTerm::PowerLaw(
            PowerLawPsd::new(s0, 0.0, DEFAULT_OMEGA_REF, lo, hi).unwrap(),
        )])
    }

    #[test]
    fn white_noise_chi_is_sequence_independent() {
        // analytic: int_0^inf g d omega = pi/tau for every sequence, so
        // chi = 2 S0 tau; the band is wide enough that the truncated tail
        // (4N+2)/(pi u_hi) stays below 2e-4
        let s0 = 3000.0;
        let tau = 100e-6;
        let model = white_band(s0, TWO_PI * 0.05, TWO_PI * 1e8);
        let expect = 2.0 * s0 * tau;
        for seq in [
            PulseSequence::ramsey(),
            PulseSequence::echo(),
            PulseSequence::udd(3).unwrap(),
            PulseSequence::cpmg(5).unwrap(),
        ] {
            let c = chi(&seq, tau, &model, 1e-7).unwrap();
            assert!(
                (c - expect).abs() / expect < 1e-3,
                "{}: chi = {c} vs {expect}",
                seq.kind()
            );
        }
    }

    #[test]
    fn zero_noise_gives_unit_coherence() {
        let model = CompositePsd::new(vec![]);
        let seq = PulseSequence::echo();
        assert_eq!(chi(&seq, 1e-4, &model, 1e-6).unwrap(), 0.0);
        assert_eq!(coherence_w(&seq, 1e-4, &model, &T1Envelope::disabled()).unwrap(), 1.0);
    }

    #[test]
    fn narrow_peak_hits_harder_when_filter_is_aligned() {
        let omega0 = TWO_PI * 12e3;
        let model = CompositePsd::new(vec![PsdTerm::Gaussian(
            GaussianPsd::new(omega0, TWO_PI * 120.0, 300.0).unwrap(),
        )]);
        let seq = PulseSequence::echo();
        let aligned = chi(&seq, TWO_PI / omega0, &model, 1e-8).unwrap();
        let off = chi(&seq, std::f64::consts::PI / omega0, &model, 1e-8).unwrap();
        assert!(aligned > off, "aligned {aligned} vs off {off}");
    }

    #[test]
    fn t1_envelope_alone_reaches_1_over_e_at_two_t1() {
        let model = CompositePsd::new(vec![]);
        let env = T1Envelope::enabled(3e-3).unwrap();
        let w = coherence_w(&PulseSequence::echo(), 6e-3, &model, &env).unwrap();
        assert!((w - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn population_mapping() {
        assert_eq!(population(1.0, 1.0), 1.0);
        assert_eq!(population(0.0, 0.55), 0.5);
        assert!((population(1.0, 0.837) - 0.9185).abs() < 1e-12);
    }

    #[test]
    fn chi_rejects_bad_arguments() {
        let model = white_band(1.0, TWO_PI, TWO_PI * 1e3);
        assert!(chi(&PulseSequence::echo(), 0.0, &model, 1e-6).is_err());
        assert!(chi(&PulseSequence::echo(), 1.0, &model, 0.0).is_err());
    }

    #[test]
    fn dc_refocusing_separates_ramsey_from_echo() {
        // a near-DC spike changes Ramsey strongly and echo barely
        let base = white_band(100.0, TWO_PI * 10.0, TWO_PI * 100e3);
        let mut spiked = base.clone();
        spiked.push(PsdTerm::Gaussian(
            GaussianPsd::new(TWO_PI * 20.0, TWO_PI * 1.0, 2e5).unwrap(),
        ));
        let tau = 200e-6;
        let chi_r0 = chi(&PulseSequence::ramsey(), tau, &base, 1e-7).unwrap();
        let chi_r1 = chi(&PulseSequence::ramsey(), tau, &spiked, 1e-7).unwrap();
        let chi_e0 = chi(&PulseSequence::echo(), tau, &base, 1e-7).unwrap();
        let chi_e1 = chi(&PulseSequence::echo(), tau, &spiked, 1e-7).unwrap();
        let echo_rel = (chi_e1 - chi_e0) / chi_e0;
        let ramsey_rel = (chi_r1 - chi_r0) / chi_r0;
        assert!(echo_rel < 0.01, "echo changed by {echo_rel}");
        assert!(ramsey_rel > 10.0 * echo_rel, "ramsey {ramsey_rel} vs echo {echo_rel}");
    }

    fn synthetic_curve(taus: &[f64], w: &[f64]) -> CoherenceCurve {
        CoherenceCurve {
            tau: taus.to_vec(),
            w: w.to_vec(),
            p2: w.iter().map(|&x| population(x, 1.0)).collect(),
            p2_sampled: None,
            std_err: None,
            sequence: "test".into(),
            noise: "test".into(),
        }
    }

    #[test]
    fn extract_t2_recovers_exponential_and_gaussian_time_constants() {
        for p in [1.0, 2.0] {
            let t = 480e-6;
            // log grid, 200 points per decade over [t/10, 4t]
            let decades = (4.0f64 / 0.1).log10();
            let n = (200.0 * decades).ceil() as usize;
            let taus: Vec<f64> =
                (0..=n).map(|i| 0.1 * t * (40.0f64).powf(i as f64 / n as f64)).collect();
            let w: Vec<f64> = taus.iter().map(|&x| (-(x / t).powf(p)).exp()).collect();
            let curve = synthetic_curve(&taus, &w);
            match extract_t2(&curve).unwrap() {
                T2Extraction::Crossed(t2) => {
                    assert!((t2 - t).abs() / t < 5e-3, "p={p}: t2 = {t2}")
                }
                T2Extraction::NotReached { .. } => panic!("crossing not found"),
            }
        }
    }

    #[test]
    fn extract_t2_takes_first_crossing_of_a_collapsing_curve() {
        let taus = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let w = [0.9, 0.8, 0.2, 0.7, 0.5, 0.1];
        let curve = synthetic_curve(&taus, &w);
        match extract_t2(&curve).unwrap() {
            T2Extraction::Crossed(t2) => {
                // between tau=2 and tau=3 where w drops 0.8 -> 0.2
                assert!(t2 > 2.0 && t2 < 3.0, "t2 = {t2}");
            }
            _ => panic!("expected a crossing"),
        }
    }

    #[test]
    fn extract_t2_flags_flat_curves() {
        let taus = [1.0, 2.0, 3.0];
        let w = [1.0, 1.0, 1.0];
        let curve = synthetic_curve(&taus, &w);
        match extract_t2(&curve).unwrap() {
            T2Extraction::NotReached { final_w } => assert_eq!(final_w, 1.0),
            _ => panic!("expected not-reached"),
        }
    }

    #[test]
    fn curve_sampling_is_deterministic_and_bounded() {
        let model = white_band(500.0, TWO_PI * 10.0, TWO_PI * 50e3);
        let taus: Vec<f64> = (1..=20).map(|i| i as f64 * 20e-6).collect();
        let spec = SamplingSpec { n_rep: 300, seed: 11 };
        let a = coherence_curve(
            &PulseSequence::echo(),
            &taus,
            &model,
            &T1Envelope::disabled(),
            0.837,
            Some(spec),
            1e-6,
        )
        .unwrap();
        let b = coherence_curve(
            &PulseSequence::echo(),
            &taus,
            &model,
            &T1Envelope::disabled(),
            0.837,
            Some(spec),
            1e-6,
        )
        .unwrap();
        assert_eq!(a.p2_sampled, b.p2_sampled);
        let bound = (0.25f64 / 300.0).sqrt();
        for se in a.std_err.unwrap() {
            assert!(se <= bound + 1e-12);
        }
    }

    #[test]
    fn zero_noise_curve_is_flat_at_mapped_visibility() {
        let model = CompositePsd::new(vec![]);
        let taus = [1e-4, 2e-4, 3e-4];
        let c = coherence_curve(
            &PulseSequence::ramsey(),
            &taus,
            &model,
            &T1Envelope::disabled(),
            0.837,
            None,
            1e-6,
        )
        .unwrap();
        for p in c.p2 {
            assert!((p - 0.9185).abs() < 1e-12);
        }
    }

    #[test]
    fn mc_zero_noise_is_exactly_one() {
        let model = CompositePsd::new(vec![]);
        let (w, se) = mc_coherence(&PulseSequence::echo(), 1e-4, &model, 200, 64, 1).unwrap();
        assert_eq!(w, 1.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn mc_white_noise_ramsey_matches_analytic_decay() {
        let s0 = 800.0;
        let (lo, hi) = (TWO_PI * 50.0, TWO_PI * 20e3);
        let model = white_band(s0, lo, hi);
        let tau = 300e-6;
        let (w, se) = mc_coherence(&PulseSequence::ramsey(), tau, &model, 3000, 256, 5).unwrap();
        // finite band: chi = (2/pi) tau^2 int S g; compare against quadrature
        let chi_q = chi(&PulseSequence::ramsey(), tau, &model, 1e-8).unwrap();
        let expect = (-chi_q).exp();
        assert!(
            (w - expect).abs() <= (3.0 * se).max(0.02),
            "w = {w} vs {expect} (se {se})"
        );
        // and the wide-band analytic value 2 S0 tau is close by construction
        assert!((chi_q - 2.0 * s0 * tau).abs() / (2.0 * s0 * tau) < 0.05);
    }

    #[test]
    fn mc_rejects_insufficient_sampling() {
        let model = white_band(1.0, TWO_PI, TWO_PI * 1e3);
        assert!(mc_coherence(&PulseSequence::echo(), 1e-4, &model, 50, 64, 1).is_err());
        assert!(mc_coherence(&PulseSequence::echo(), 1e-4, &model, 200, 16, 1).is_err());
    }
}
