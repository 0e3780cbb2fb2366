//! Pulse-timing optimization of the symmetric five-pulse family at fixed
//! free evolution time, and protocol T2 comparisons.
//!
//! The coherence surface is evaluated by exhaustive grid search over the
//! feasible (tau1, tau2) simplex. Every grid point shares one free
//! evolution time and one noise model, so the quadrature nodes and the
//! S(omega) weights are prebuilt once and each point only re-evaluates the
//! filter on them.

use crate::coherence::{self, coherence_curve, extract_t2, T1Envelope, T2Extraction};
use crate::error::{Error, Result};
use crate::exec;
use crate::filter::FilterEvaluator;
use crate::noise::CompositePsd;
use crate::numerics::quad;
use crate::sequences::{PulseSequence, SequenceKind, SymmetricFiveTiming};

/// One evaluated timing on the search grid.
#[derive(Debug, Clone, Copy)]
pub struct TimingPoint {
    pub tau1_frac: f64,
    pub tau2_frac: f64,
    /// End-of-sequence coherence W(tau).
    pub w: f64,
}

/// The full fidelity surface over the feasible simplex.
#[derive(Debug, Clone)]
pub struct TimingMap {
    /// Free evolution time, s.
    pub tau: f64,
    /// Grid step in interval fraction.
    pub step: f64,
    pub points: Vec<TimingPoint>,
}

/// Fixed quadrature nodes with S(omega) premultiplied into the weights;
/// chi then reduces to a weighted sum of filter evaluations.
struct ChiNodes {
    theta: Vec<f64>,
    weight_s: Vec<f64>,
    tau: f64,
}

impl ChiNodes {
    fn build(model: &CompositePsd, tau: f64) -> Self {
        let mut theta = Vec::new();
        let mut weight_s = Vec::new();
        let mut xs = Vec::new();
        let mut ws = Vec::new();
        for term in model.terms() {
            let bp = coherence::term_breakpoints(term, tau);
            for win in bp.windows(2) {
                xs.clear();
                ws.clear();
                quad::gk15_nodes(win[0], win[1], &mut xs, &mut ws);
                for (&x, &w) in xs.iter().zip(ws.iter()) {
                    let s = term.eval(x);
                    if s != 0.0 {
                        theta.push(x * tau);
                        weight_s.push(w * s);
                    }
                }
            }
        }
        ChiNodes { theta, weight_s, tau }
    }

    fn chi(&self, ev: &FilterEvaluator) -> f64 {
        let acc: f64 = self
            .theta
            .iter()
            .zip(self.weight_s.iter())
            .map(|(&t, &ws)| ws * ev.g_theta(t))
            .sum();
        2.0 / std::f64::consts::PI * self.tau * self.tau * acc
    }
}

/// Exhaustive search of W(tau) over the symmetric five-pulse simplex.
///
/// Ties resolve deterministically to the lowest tau1, then the lowest
/// tau2. Returns the best timing and the full surface.
pub fn grid_search_sym5(
    tau: f64,
    model: &CompositePsd,
    step: f64,
) -> Result<(SymmetricFiveTiming, TimingMap)> {
    if !(tau > 0.0) {
        return Err(Error::invalid("grid_search_sym5: tau must be > 0"));
    }
    if !(step > 0.0 && step <= 0.05) {
        return Err(Error::invalid(format!(
            "grid_search_sym5: step = {step} outside (0, 0.05]"
        )));
    }
    let mut grid = Vec::new();
    let mut i = 1usize;
    loop {
        let t1 = i as f64 * step;
        if t1 >= 0.5 {
            break;
        }
        let mut j = 1usize;
        loop {
            let t2 = j as f64 * step;
            let t0 = 0.5 - t1 - t2;
            if t0 <= 1e-9 {
                break;
            }
            grid.push((t1, t2));
            j += 1;
        }
        i += 1;
    }
    if grid.is_empty() {
        return Err(Error::invalid("grid_search_sym5: no feasible grid points at this step"));
    }

    let nodes = ChiNodes::build(model, tau);
    let points: Vec<TimingPoint> = exec::map_indexed(grid.len(), |k| {
        let (t1, t2) = grid[k];
        let timing = SymmetricFiveTiming::new(0.5 - t1 - t2, t1, t2)
            .expect("grid point satisfies the timing invariants");
        let seq = PulseSequence::symmetric5(timing).expect("grid timing is valid");
        let ev = FilterEvaluator::new(&seq);
        TimingPoint { tau1_frac: t1, tau2_frac: t2, w: (-nodes.chi(&ev)).exp() }
    });

    let mut best = &points[0];
    for p in points.iter().skip(1) {
        if p.w > best.w {
            best = p;
        }
    }
    let timing = SymmetricFiveTiming::new(
        0.5 - best.tau1_frac - best.tau2_frac,
        best.tau1_frac,
        best.tau2_frac,
    )?;
    Ok((timing, TimingMap { tau, step, points }))
}

/// T2 per protocol from the coherence curve and the 1/e extraction.
#[derive(Debug, Clone)]
pub struct ProtocolT2 {
    pub protocol: SequenceKind,
    pub t2: T2Extraction,
}

/// Compare PDD, UDD and CPMG at the same pulse number over a tau grid.
pub fn compare_protocols(
    n: usize,
    tau_grid: &[f64],
    model: &CompositePsd,
    t1env: &T1Envelope,
) -> Result<Vec<ProtocolT2>> {
    if n == 0 {
        return Err(Error::invalid("compare_protocols: n must be >= 1"));
    }
    let mut out = Vec::with_capacity(3);
    for kind in [SequenceKind::Pdd, SequenceKind::Udd, SequenceKind::Cpmg] {
        let seq = PulseSequence::build(kind, n)?;
        let curve =
            coherence_curve(&seq, tau_grid, model, t1env, 1.0, None, coherence::DEFAULT_REL_TOL)?;
        out.push(ProtocolT2 { protocol: kind, t2: extract_t2(&curve)? });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::chi;
    use crate::noise::{calibrated, CompositePsd, PowerLawPsd, PsdTerm, TWO_PI};

    fn white(s0: f64) -> CompositePsd {
        CompositePsd::new(vec![PsdTerm::PowerLaw(
            PowerLawPsd::new(s0, 0.0, TWO_PI * 1e3, TWO_PI * 0.1, TWO_PI * 5e7).unwrap(),
        )])
    }

    #[test]
    fn fixed_nodes_agree_with_adaptive_quadrature() {
        let model = calibrated::model();
        let tau = 300e-6;
        let nodes = ChiNodes::build(&model, tau);
        for (t1, t2) in [(0.20, 0.20), (0.183, 0.25), (0.12, 0.31)] {
            let seq =
                PulseSequence::symmetric5(SymmetricFiveTiming::from_tau12(t1, t2).unwrap())
                    .unwrap();
            let fast = nodes.chi(&FilterEvaluator::new(&seq));
            let slow = chi(&seq, tau, &model, 1e-9).unwrap();
            assert!(
                (fast - slow).abs() / slow < 1e-5,
                "({t1},{t2}): {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn white_noise_surface_is_flat_and_best_dominates() {
        // sequence independence under white noise: W depends only on tau
        let tau = 100e-6;
        let (best, map) = grid_search_sym5(tau, &white(1500.0), 0.05).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in &map.points {
            lo = lo.min(p.w);
            hi = hi.max(p.w);
        }
        assert!(hi - lo <= 1e-3, "surface spread {}", hi - lo);
        let best_w = map
            .points
            .iter()
            .find(|p| p.tau1_frac == best.tau1_frac && p.tau2_frac == best.tau2_frac)
            .unwrap()
            .w;
        for p in &map.points {
            assert!(best_w >= p.w);
        }
    }

    #[test]
    fn grid_rejects_infeasible_step_and_bad_args() {
        let m = white(1.0);
        assert!(grid_search_sym5(0.0, &m, 0.002).is_err());
        assert!(grid_search_sym5(1e-3, &m, 0.0).is_err());
        assert!(grid_search_sym5(1e-3, &m, 0.2).is_err());
    }

    #[test]
    fn repeated_search_is_deterministic() {
        let m = calibrated::model();
        let (a, map_a) = grid_search_sym5(200e-6, &m, 0.04).unwrap();
        let (b, map_b) = grid_search_sym5(200e-6, &m, 0.04).unwrap();
        assert_eq!(a, b);
        assert_eq!(map_a.points.len(), map_b.points.len());
        for (x, y) in map_a.points.iter().zip(map_b.points.iter()) {
            assert_eq!(x.w, y.w);
        }
    }

    #[test]
    fn zero_noise_reports_not_reached_for_all_protocols() {
        let model = CompositePsd::new(vec![]);
        let taus: Vec<f64> = (1..=10).map(|i| i as f64 * 1e-4).collect();
        let out = compare_protocols(3, &taus, &model, &T1Envelope::disabled()).unwrap();
        assert_eq!(out.len(), 3);
        for p in out {
            assert!(matches!(p.t2, T2Extraction::NotReached { final_w } if final_w == 1.0));
        }
    }

    #[test]
    fn compare_protocols_rejects_zero_pulses() {
        let model = white(1.0);
        assert!(compare_protocols(0, &[1e-4, 2e-4], &model, &T1Envelope::disabled()).is_err());
    }
}
