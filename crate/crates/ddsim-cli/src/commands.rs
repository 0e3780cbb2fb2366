//! Subcommand implementations: each renders its output text(s);
//! writing and exit codes live in main.

use crate::config::RunConfig;
use ddsim::coherence::{
    coherence_curve, coherence_w, extract_t2, mc_coherence, SamplingSpec, T2Extraction,
    DEFAULT_REL_TOL,
};
use ddsim::fitting::{fit_decay, fit_rabi, DecayShape, FitResult};
use ddsim::detection::{assignment_errors, optimal_threshold, DetectionHistogram};
use ddsim::filter::sample_filter;
use ddsim::noise::TWO_PI;
use ddsim::optimizer::grid_search_sym5;
use ddsim::sequences::{PulseSequence, SequenceKind};
use ddsim::spectroscopy::{modulated_spectrum, scan, SpectroscopyPoint};
use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, config or input files: exit 1.
    Validation(String),
    /// Numerical non-convergence or degenerate analysis: exit 2.
    Numeric(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Numeric(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<ddsim::Error> for CliError {
    fn from(e: ddsim::Error) -> Self {
        use ddsim::Error::*;
        match e {
            Invalid(_) | EmptySpectrum => CliError::Validation(e.to_string()),
            QuadratureNotConverged { .. } | FitDidNotConverge { .. } | NoOscillation
            | DegenerateFit(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<crate::config::ConfigError> for CliError {
    fn from(e: crate::config::ConfigError) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type CmdResult<T> = Result<T, CliError>;

fn seed_str(seed: Option<u64>) -> String {
    seed.map(|s| s.to_string()).unwrap_or_else(|| "none".into())
}

fn csv_header(cfg: &RunConfig) -> String {
    format!("# config_sha256: {}\n# seed: {}\n", cfg.hash(), seed_str(cfg.seed))
}

/// Parse numeric CSV with `ncols` columns; '#' comments and one optional
/// header line are skipped.
pub fn parse_numeric_csv(text: &str, ncols: usize, what: &str) -> CmdResult<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    let mut header_skipped = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != ncols {
            return Err(CliError::Validation(format!(
                "{what}: line {}: expected {ncols} comma-separated fields, got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(vals) => rows.push(vals),
            Err(_) if !header_skipped && rows.is_empty() => header_skipped = true,
            Err(e) => {
                return Err(CliError::Validation(format!(
                    "{what}: line {}: {e}",
                    lineno + 1
                )))
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Validation(format!("{what}: no data rows found")));
    }
    Ok(rows)
}

pub fn cmd_filter(cfg: &RunConfig) -> CmdResult<String> {
    let samples = sample_filter(
        &cfg.sequence,
        cfg.filter_tau,
        cfg.filter_omega_min,
        cfg.filter_omega_max,
        cfg.filter_points,
    )?;
    let mut out = csv_header(cfg);
    out.push_str("omega_rad_s,omega_over_pi_tau,g\n");
    let pi_tau = std::f64::consts::PI / cfg.filter_tau;
    for (w, g) in samples.omega.iter().zip(samples.g.iter()) {
        out.push_str(&format!("{:.8e},{:.8},{:.10e}\n", w, w / pi_tau, g));
    }
    Ok(out)
}

pub fn cmd_simulate(cfg: &RunConfig) -> CmdResult<String> {
    let sampling = cfg.n_rep.map(|n_rep| SamplingSpec {
        n_rep,
        seed: cfg.seed.expect("config validation requires a seed with n_rep"),
    });
    let curve = coherence_curve(
        &cfg.sequence,
        &cfg.tau_grid,
        &cfg.noise,
        &cfg.t1_envelope(),
        cfg.visibility,
        sampling,
        DEFAULT_REL_TOL,
    )?;
    let mut out = csv_header(cfg);
    if curve.p2_sampled.is_some() {
        out.push_str("tau_us,w,p2,p2_sampled,stderr\n");
    } else {
        out.push_str("tau_us,w,p2\n");
    }
    for i in 0..curve.tau.len() {
        let base = format!(
            "{:.4},{:.8},{:.8}",
            curve.tau[i] * 1e6,
            curve.w[i],
            curve.p2[i]
        );
        match (&curve.p2_sampled, &curve.std_err) {
            (Some(ps), Some(se)) => {
                out.push_str(&format!("{base},{:.8},{:.8}\n", ps[i], se[i]))
            }
            _ => out.push_str(&format!("{base}\n")),
        }
    }
    Ok(out)
}

/// The scan family for t2scan: the configured kind when it is a pulse
/// family, PDD otherwise.
fn t2_family(kind: SequenceKind) -> SequenceKind {
    match kind {
        SequenceKind::Pdd | SequenceKind::Udd | SequenceKind::Cpmg => kind,
        _ => SequenceKind::Pdd,
    }
}

pub fn cmd_t2scan(cfg: &RunConfig) -> CmdResult<String> {
    let family = t2_family(cfg.sequence.kind());
    let mut out = csv_header(cfg);
    out.push_str("n_pulses,t2_us\n");
    for &n in &cfg.t2scan_n_list {
        let seq = PulseSequence::build(family, n)?;
        let curve = coherence_curve(
            &seq,
            &cfg.tau_grid,
            &cfg.noise,
            &cfg.t1_envelope(),
            cfg.visibility,
            None,
            DEFAULT_REL_TOL,
        )?;
        match extract_t2(&curve)? {
            T2Extraction::Crossed(t2) => out.push_str(&format!("{n},{:.4}\n", t2 * 1e6)),
            T2Extraction::NotReached { .. } => out.push_str(&format!("{n},nan\n")),
        }
    }
    Ok(out)
}

pub fn cmd_mc(cfg: &RunConfig) -> CmdResult<String> {
    let seed = cfg
        .seed
        .ok_or_else(|| CliError::Validation("seed: required for the mc subcommand".into()))?;
    // downsample the scan grid; Monte-Carlo points are expensive
    let n = cfg.tau_grid.len();
    let take = cfg.mc_max_points.min(n);
    let idx: Vec<usize> = if take == 1 {
        vec![n - 1]
    } else {
        (0..take).map(|i| i * (n - 1) / (take - 1)).collect()
    };
    let mut out = csv_header(cfg);
    out.push_str("tau_us,w_mc,std_err,w_filter\n");
    for &i in &idx {
        let tau = cfg.tau_grid[i];
        let (w_mc, se) =
            mc_coherence(&cfg.sequence, tau, &cfg.noise, cfg.mc_n_traj, cfg.mc_n_modes, seed)?;
        let w_f = coherence_w(&cfg.sequence, tau, &cfg.noise, &cfg.t1_envelope())?;
        out.push_str(&format!("{:.4},{:.6},{:.6},{:.6}\n", tau * 1e6, w_mc, se, w_f));
    }
    Ok(out)
}

pub fn cmd_spectroscopy(cfg: &RunConfig, points_file: Option<&str>) -> CmdResult<String> {
    let spectrum = match points_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Validation(format!("spectroscopy points file {path}: {e}"))
            })?;
            let rows = parse_numeric_csv(&text, 3, "spectroscopy points")?;
            let points: Vec<SpectroscopyPoint> = rows
                .iter()
                .map(|r| SpectroscopyPoint {
                    n_pulses: r[0] as usize,
                    tau: r[1] * 1e-6,
                    w_measured: r[2],
                })
                .collect();
            scan(&points, cfg.spectroscopy_kind)?
        }
        None => modulated_spectrum(
            &cfg.noise,
            cfg.spectroscopy_kind,
            cfg.spectroscopy_n,
            &cfg.tau_grid,
        )?,
    };
    let mut out = csv_header(cfg);
    out.push_str("omega_bar_khz,s_hat\n");
    for (w, s) in spectrum.omega_bar.iter().zip(spectrum.s_hat.iter()) {
        out.push_str(&format!("{:.6},{:.8e}\n", w / TWO_PI / 1e3, s));
    }
    Ok(out)
}

/// Returns (map CSV, summary JSON).
pub fn cmd_optimize(cfg: &RunConfig) -> CmdResult<(String, String)> {
    let (best, map) = grid_search_sym5(cfg.optimize_tau, &cfg.noise, cfg.optimize_step)?;
    let mut csv = csv_header(cfg);
    csv.push_str("tau1_frac,tau2_frac,w\n");
    for p in &map.points {
        csv.push_str(&format!("{:.4},{:.4},{:.8}\n", p.tau1_frac, p.tau2_frac, p.w));
    }
    let w_best = map
        .points
        .iter()
        .find(|p| p.tau1_frac == best.tau1_frac && p.tau2_frac == best.tau2_frac)
        .map(|p| p.w)
        .expect("best point is on the map");
    let summary = json!({
        "config_sha256": cfg.hash(),
        "seed": cfg.seed,
        "tau_us": cfg.optimize_tau * 1e6,
        "step": cfg.optimize_step,
        "best_tau1": best.tau1_frac,
        "best_tau2": best.tau2_frac,
        "w_best": w_best,
    });
    let json_text = serde_json::to_string_pretty(&summary).expect("json serializes") + "\n";
    Ok((csv, json_text))
}

fn fit_to_json(cfg: &RunConfig, fit: &FitResult) -> String {
    let params: Vec<_> = fit
        .params
        .iter()
        .map(|p| json!({"name": p.name, "value": p.value, "std_err": p.std_err}))
        .collect();
    let doc = json!({
        "config_sha256": cfg.hash(),
        "seed": cfg.seed,
        "model": fit.model,
        "params": params,
        "rss": fit.rss,
        "converged": fit.converged,
    });
    serde_json::to_string_pretty(&doc).expect("json serializes") + "\n"
}

pub fn cmd_fit(cfg: &RunConfig, data_path: &str, model: &str) -> CmdResult<String> {
    let text = std::fs::read_to_string(data_path)
        .map_err(|e| CliError::Validation(format!("fit data file {data_path}: {e}")))?;
    let rows = parse_numeric_csv(&text, 2, "fit data")?;
    let data: Vec<(f64, f64)> = rows.iter().map(|r| (r[0] * 1e-6, r[1])).collect();
    let fit = match model {
        "exponential" => fit_decay(&data, DecayShape::Exponential)?,
        "gaussian" => fit_decay(&data, DecayShape::Gaussian)?,
        "stretched" => fit_decay(&data, DecayShape::Stretched)?,
        "rabi" => fit_rabi(&data)?,
        other => {
            return Err(CliError::Validation(format!(
                "fit model '{other}' not one of exponential|gaussian|stretched|rabi"
            )))
        }
    };
    Ok(fit_to_json(cfg, &fit))
}

fn histogram_from_csv(path: &str, what: &str) -> CmdResult<DetectionHistogram> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{what} histogram file {path}: {e}")))?;
    let rows = parse_numeric_csv(&text, 2, what)?;
    let mut h = DetectionHistogram::new();
    for r in &rows {
        if r[0] < 0.0 || r[0].fract() != 0.0 || r[1] < 0.0 || r[1].fract() != 0.0 {
            return Err(CliError::Validation(format!(
                "{what}: photon numbers and counts must be non-negative integers"
            )));
        }
        h.add(r[0] as u32, r[1] as u64);
    }
    Ok(h)
}

pub fn cmd_threshold(cfg: &RunConfig, up_path: &str, down_path: &str) -> CmdResult<String> {
    let up = histogram_from_csv(up_path, "up")?;
    let down = histogram_from_csv(down_path, "down")?;
    let (n_th, f) = optimal_threshold(&up, &down)?;
    let (xi_up, xi_down) = assignment_errors(&up, &down, n_th)?;
    let doc = json!({
        "config_sha256": cfg.hash(),
        "seed": cfg.seed,
        "n_th": n_th,
        "xi_up": xi_up,
        "xi_down": xi_down,
        "fidelity": f,
    });
    Ok(serde_json::to_string_pretty(&doc).expect("json serializes") + "\n")
}
