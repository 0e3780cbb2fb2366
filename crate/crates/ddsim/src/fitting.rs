//! Nonlinear least-squares fits of the decay and oscillation models used
//! to summarize coherence data.
//!
//! All fits are derivative-free: multi-start Nelder-Mead refinement seeded
//! by coarse heuristics (a spectral peak for the Rabi frequency, span
//! fractions for decay times). Uncertainties come from the residual-based
//! covariance approximation around the optimum.

use crate::error::{Error, Result};
use crate::numerics::optim::{golden_max, nelder_mead};
use serde::Serialize;

/// Decay envelope shape: y = y_inf + a exp(-(t/T)^p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayShape {
    /// p = 1
    Exponential,
    /// p = 2
    Gaussian,
    /// p free
    Stretched,
}

impl DecayShape {
    fn name(&self) -> &'static str {
        match self {
            DecayShape::Exponential => "exponential",
            DecayShape::Gaussian => "gaussian",
            DecayShape::Stretched => "stretched",
        }
    }
}

/// One fitted parameter with its 1-sigma uncertainty.
#[derive(Debug, Clone, Serialize)]
pub struct FitParam {
    pub name: &'static str,
    pub value: f64,
    pub std_err: f64,
}

/// A converged fit: parameters, uncertainties and the residual sum of
/// squares.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub model: String,
    pub params: Vec<FitParam>,
    pub rss: f64,
    pub converged: bool,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.value)
    }
}

fn validate_data(data: &[(f64, f64)], min_points: usize, what: &str) -> Result<()> {
    if data.len() < min_points {
        return Err(Error::invalid(format!(
            "{what}: need at least {min_points} points, got {}",
            data.len()
        )));
    }
    if data.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::invalid(format!("{what}: time stamps must be strictly increasing")));
    }
    Ok(())
}

/// sigma_i = sqrt(rss/(n-p) * [(J^T J)^-1]_ii) with a finite-difference
/// Jacobian; None when the normal matrix is singular.
fn covariance_std_errs<F: Fn(&[f64], f64) -> f64>(
    model: F,
    params: &[f64],
    data: &[(f64, f64)],
    rss: f64,
) -> Option<Vec<f64>> {
    let np = params.len();
    let n = data.len();
    if n <= np {
        return None;
    }
    // J[i][k] = d model(t_i) / d p_k
    let mut jtj = vec![vec![0.0f64; np]; np];
    let mut jac = vec![vec![0.0f64; np]; n];
    for k in 0..np {
        let h = (1e-6 * params[k].abs()).max(1e-10);
        let mut plus = params.to_vec();
        let mut minus = params.to_vec();
        plus[k] += h;
        minus[k] -= h;
        for (i, &(t, _)) in data.iter().enumerate() {
            jac[i][k] = (model(&plus, t) - model(&minus, t)) / (2.0 * h);
        }
    }
    for row in &jac {
        for a in 0..np {
            for b in 0..np {
                jtj[a][b] += row[a] * row[b];
            }
        }
    }
    let inv = invert(&mut jtj)?;
    let sigma2 = rss / (n - np) as f64;
    Some((0..np).map(|k| (sigma2 * inv[k][k]).max(0.0).sqrt()).collect())
}

/// Gauss-Jordan inverse for the small normal matrices (<= 4x4).
fn invert(m: &mut [Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let d = m[col][col];
        for j in 0..n {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                for j in 0..n {
                    m[row][j] -= f * m[col][j];
                    inv[row][j] -= f * inv[col][j];
                }
            }
        }
    }
    Some(inv)
}

fn rss_of<F: Fn(f64) -> f64>(f: F, data: &[(f64, f64)]) -> f64 {
    data.iter().map(|&(t, y)| (f(t) - y).powi(2)).sum()
}

/// Fit y = y_inf + a exp(-(t/T)^p) with p fixed (exponential, gaussian) or
/// free (stretched).
pub fn fit_decay(data: &[(f64, f64)], shape: DecayShape) -> Result<FitResult> {
    let np = if shape == DecayShape::Stretched { 4 } else { 3 };
    validate_data(data, 3 * np, "fit_decay")?;
    let n = data.len();
    let t_span = data[n - 1].0 - data[0].0;
    let y_max = data.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let y_mean = data.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let y_var = data.iter().map(|p| (p.1 - y_mean).powi(2)).sum::<f64>() / n as f64;
    if y_var.sqrt() < 1e-12 * y_max.max(1.0) {
        return Err(Error::DegenerateFit(
            "data are constant: amplitude ~ 0, decay time unidentifiable".into(),
        ));
    }

    let tail = data[n.saturating_sub(3)..].iter().map(|p| p.1).sum::<f64>() / 3.0;
    let head = data[..3.min(n)].iter().map(|p| p.1).sum::<f64>() / 3.0_f64.min(n as f64);
    let y_inf0 = tail;
    let a0 = head - tail;

    let model = move |p: &[f64], t: f64| -> f64 {
        let (y_inf, a, tc) = (p[0], p[1], p[2]);
        let pw = if p.len() > 3 { p[3] } else { match shape {
            DecayShape::Exponential => 1.0,
            DecayShape::Gaussian => 2.0,
            DecayShape::Stretched => unreachable!(),
        }};
        y_inf + a * (-(t / tc).powf(pw)).exp()
    };
    let scale = y_max.max(1e-12);
    let objective = |p: &[f64]| -> f64 {
        let tc = p[2];
        if !(tc > 0.0) || tc > 1e4 * t_span {
            return 1e6 * scale * scale * (1.0 + tc.abs() / t_span.max(1e-300));
        }
        if p.len() > 3 && !(0.05..=10.0).contains(&p[3]) {
            return 1e6 * scale * scale * (1.0 + p[3].abs());
        }
        rss_of(|t| model(p, t), data)
    };

    let mut best: Option<(Vec<f64>, f64)> = None;
    let t_starts = [0.05, 0.15, 0.4, 1.0, 2.5];
    let p_starts: &[f64] = match shape {
        DecayShape::Stretched => &[0.7, 1.0, 1.5, 2.0],
        _ => &[f64::NAN], // unused marker
    };
    for &tf in &t_starts {
        for &p0 in p_starts {
            let mut x0 = vec![y_inf0, a0, tf * t_span];
            let mut sc = vec![0.05 * scale, 0.1 * scale.max(a0.abs()), 0.3 * tf * t_span];
            if shape == DecayShape::Stretched {
                x0.push(p0);
                sc.push(0.3);
            }
            let out = nelder_mead(objective, &x0, &sc, 1e-14, 2500);
            // polish from the found optimum with a tighter simplex
            let sc2: Vec<f64> =
                out.x.iter().map(|v| (1e-4 * v.abs()).max(1e-12)).collect();
            let out = nelder_mead(objective, &out.x, &sc2, 1e-16, 2500);
            if best.as_ref().is_none_or(|(_, f)| out.fval < *f) {
                best = Some((out.x, out.fval));
            }
        }
    }
    let (params, rss) = best.expect("at least one start ran");
    if !(params[2] > 0.0) || params[2] > 100.0 * t_span {
        return Err(Error::DegenerateFit(format!(
            "decay time {} far outside the sampled span; data do not constrain it",
            params[2]
        )));
    }
    if params[1].abs() < 1e-6 * scale {
        return Err(Error::DegenerateFit(
            "fitted amplitude ~ 0: decay time unidentifiable".into(),
        ));
    }

    let std_errs = covariance_std_errs(model, &params, data, rss)
        .ok_or_else(|| Error::DegenerateFit("singular normal matrix at the optimum".into()))?;
    let mut names = vec!["y_inf", "a", "t_decay"];
    if shape == DecayShape::Stretched {
        names.push("p");
    }
    Ok(FitResult {
        model: format!("decay_{}", shape.name()),
        params: names
            .into_iter()
            .zip(params.iter().zip(std_errs.iter()))
            .map(|(name, (&value, &std_err))| FitParam { name, value, std_err })
            .collect(),
        rss,
        converged: true,
    })
}

/// Discrete periodogram peak of the detrended data; the Rabi frequency
/// initializer.
fn periodogram_peak(data: &[(f64, f64)]) -> (f64, f64) {
    let n = data.len() as f64;
    let mean = data.iter().map(|p| p.1).sum::<f64>() / n;
    let span = data[data.len() - 1].0 - data[0].0;
    let dt_min = data
        .windows(2)
        .map(|w| w[1].0 - w[0].0)
        .fold(f64::INFINITY, f64::min);
    let w_lo = 0.5 * std::f64::consts::TAU / span;
    let w_hi = std::f64::consts::PI / dt_min;
    let power = |w: f64| -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for &(t, y) in data {
            let (s, c) = (w * t).sin_cos();
            re += (y - mean) * c;
            im += (y - mean) * s;
        }
        re * re + im * im
    };
    let m = 4096;
    let mut powers = Vec::with_capacity(m + 1);
    let mut best = (w_lo, 0.0f64);
    for i in 0..=m {
        let w = w_lo + (w_hi - w_lo) * i as f64 / m as f64;
        let p = power(w);
        powers.push(p);
        if p > best.1 {
            best = (w, p);
        }
    }
    powers.sort_by(f64::total_cmp);
    let median = powers[powers.len() / 2];
    let dw = (w_hi - w_lo) / m as f64;
    let w_star = golden_max(power, (best.0 - 2.0 * dw).max(w_lo), best.0 + 2.0 * dw, 1e-10 * best.0);
    (w_star, power(w_star) / median.max(f64::MIN_POSITIVE))
}

/// Fit p(t) = (1 + V cos(Omega t) exp(-t/T)) / 2 to oscillation data.
pub fn fit_rabi(data: &[(f64, f64)]) -> Result<FitResult> {
    validate_data(data, 12, "fit_rabi")?;
    let n = data.len() as f64;
    let mean = data.iter().map(|p| p.1).sum::<f64>() / n;
    let var = data.iter().map(|p| (p.1 - mean).powi(2)).sum::<f64>() / n;
    let span = data[data.len() - 1].0 - data[0].0;
    if var < 1e-24 {
        return Err(Error::NoOscillation);
    }
    let (w0, peak_to_median) = periodogram_peak(data);
    // a clean oscillation concentrates ~n^2 amp^2/4 in one line while the
    // noise floor sits at ~n var; peak/median separates the two regimes by
    // orders of magnitude
    if peak_to_median < 50.0 {
        return Err(Error::NoOscillation);
    }
    if w0 * span < 1.5 * std::f64::consts::TAU {
        return Err(Error::invalid(
            "fit_rabi: data span fewer than 1.5 oscillation periods",
        ));
    }
    // var = V^2/8 for an undamped fringe of the p-model
    let amp0 = (8.0 * var).sqrt().clamp(0.05, 1.0);

    let model = |p: &[f64], t: f64| -> f64 {
        0.5 * (1.0 + p[1] * (p[0] * t).cos() * (-t / p[2]).exp())
    };
    let objective = |p: &[f64]| -> f64 {
        if !(p[0] > 0.0) || !(p[2] > 0.0) || p[1] < 0.0 || p[1] > 1.5 {
            return 1e12;
        }
        rss_of(|t| model(p, t), data)
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for t0 in [span, 3.0 * span, 0.3 * span] {
        let x0 = vec![w0, amp0, t0];
        let sc = vec![0.002 * w0, 0.1, 0.5 * t0];
        let out = nelder_mead(objective, &x0, &sc, 1e-14, 3000);
        let sc2: Vec<f64> = out.x.iter().map(|v| (1e-5 * v.abs()).max(1e-12)).collect();
        let out = nelder_mead(objective, &out.x, &sc2, 1e-16, 3000);
        if best.as_ref().is_none_or(|(_, f)| out.fval < *f) {
            best = Some((out.x, out.fval));
        }
    }
    let (params, rss) = best.expect("at least one start ran");
    let std_errs = covariance_std_errs(model, &params, data, rss)
        .ok_or_else(|| Error::DegenerateFit("singular normal matrix at the optimum".into()))?;
    Ok(FitResult {
        model: "rabi".into(),
        params: vec![
            FitParam { name: "omega", value: params[0], std_err: std_errs[0] },
            FitParam { name: "visibility", value: params[1], std_err: std_errs[1] },
            FitParam { name: "t_decay", value: params[2], std_err: std_errs[2] },
        ],
        rss,
        converged: true,
    })
}
