//! TOML run configuration: strict parsing, unit conversion (kHz and us in
//! the file, SI internally) and validation with key-path error messages.

use ddsim::coherence::T1Envelope;
use ddsim::noise::{self, CompositePsd, GaussianPsd, PowerLawPsd, PsdTerm, TWO_PI};
use ddsim::sequences::{PulseSequence, SequenceKind, SymmetricFiveTiming};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}
impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

// ---------------------------------------------------------------- file schema

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    sequence: Option<SequenceSection>,
    noise: Option<NoiseSection>,
    scan: Option<ScanSection>,
    filter: Option<FilterSection>,
    mc: Option<McSection>,
    t2scan: Option<T2ScanSection>,
    spectroscopy: Option<SpectroscopySection>,
    optimize: Option<OptimizeSection>,
    t1: Option<T1Section>,
    output: Option<OutputSection>,
    visibility: Option<f64>,
    n_rep: Option<u32>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceSection {
    kind: Option<String>,
    n: Option<usize>,
    fractions: Option<Vec<f64>>,
    tau0_frac: Option<f64>,
    tau1_frac: Option<f64>,
    tau2_frac: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseSection {
    term: Vec<NoiseTermCfg>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum NoiseTermCfg {
    Powerlaw { amplitude: f64, alpha: f64, ref_khz: f64, low_khz: f64, high_khz: f64 },
    Gaussian { center_khz: f64, width_khz: f64, amplitude: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanSection {
    start_us: Option<f64>,
    stop_us: Option<f64>,
    points: Option<usize>,
    spacing: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterSection {
    tau_us: Option<f64>,
    min_khz: Option<f64>,
    max_khz: Option<f64>,
    points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct McSection {
    n_traj: Option<usize>,
    n_modes: Option<usize>,
    max_points: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct T2ScanSection {
    n_list: Option<Vec<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectroscopySection {
    n: Option<usize>,
    kind: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptimizeSection {
    tau_us: Option<f64>,
    step: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct T1Section {
    enabled: Option<bool>,
    t1_s: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    path: Option<String>,
}

// ------------------------------------------------------------- resolved config

/// Tau-grid spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Fully resolved, validated run configuration (SI units throughout).
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub sequence: PulseSequence,
    pub noise: CompositePsd,
    /// Free-evolution scan grid, s.
    pub tau_grid: Vec<f64>,
    pub visibility: f64,
    pub t1_enabled: bool,
    pub t1_s: f64,
    pub n_rep: Option<u32>,
    pub seed: Option<u64>,
    /// Output destination; not part of the reproducibility hash.
    #[serde(skip)]
    pub output: Option<String>,
    /// filter subcommand: tau (s), omega range (rad/s), points.
    pub filter_tau: f64,
    pub filter_omega_min: f64,
    pub filter_omega_max: f64,
    pub filter_points: usize,
    /// mc subcommand.
    pub mc_n_traj: usize,
    pub mc_n_modes: usize,
    pub mc_max_points: usize,
    /// t2scan subcommand.
    pub t2scan_n_list: Vec<usize>,
    /// spectroscopy subcommand.
    pub spectroscopy_n: usize,
    pub spectroscopy_kind: SequenceKind,
    /// optimize subcommand: tau (s) and grid step (fraction).
    pub optimize_tau: f64,
    pub optimize_step: f64,
}

impl RunConfig {
    pub fn t1_envelope(&self) -> T1Envelope {
        if self.t1_enabled {
            T1Envelope::enabled(self.t1_s).expect("validated")
        } else {
            T1Envelope::disabled()
        }
    }

    /// Hash of the resolved configuration for reproducibility headers.
    pub fn hash(&self) -> String {
        let canon = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canon.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Command-line overrides applied on top of the file values.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output: Option<String>,
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub start_us: Option<f64>,
    pub stop_us: Option<f64>,
    pub points: Option<usize>,
    pub n_rep: Option<u32>,
    pub visibility: Option<f64>,
    pub tau_us: Option<f64>,
    pub step: Option<f64>,
    pub n_traj: Option<usize>,
    pub n_modes: Option<usize>,
}

fn khz_to_rad(khz: f64) -> f64 {
    TWO_PI * 1e3 * khz
}

fn parse_kind(s: &str, key: &str) -> Result<SequenceKind, ConfigError> {
    match s {
        "ramsey" => Ok(SequenceKind::Ramsey),
        "echo" => Ok(SequenceKind::Echo),
        "pdd" => Ok(SequenceKind::Pdd),
        "udd" => Ok(SequenceKind::Udd),
        "cpmg" => Ok(SequenceKind::Cpmg),
        "symmetric5" => Ok(SequenceKind::Symmetric5),
        "custom" => Ok(SequenceKind::Custom),
        other => err(format!("{key}: unknown sequence kind '{other}'")),
    }
}

fn build_sequence(sec: Option<&SequenceSection>, ov: &Overrides) -> Result<PulseSequence, ConfigError> {
    let kind_str = ov
        .kind
        .clone()
        .or_else(|| sec.and_then(|s| s.kind.clone()))
        .unwrap_or_else(|| "echo".to_string());
    let kind = parse_kind(&kind_str, "sequence.kind")?;
    match kind {
        SequenceKind::Custom => {
            let fr = sec
                .and_then(|s| s.fractions.clone())
                .ok_or_else(|| ConfigError("sequence.fractions: required for kind = custom".into()))?;
            PulseSequence::custom(fr).map_err(|e| ConfigError(format!("sequence.fractions: {e}")))
        }
        SequenceKind::Symmetric5 => {
            let s = sec.ok_or_else(|| {
                ConfigError("sequence: tau0_frac/tau1_frac/tau2_frac required for symmetric5".into())
            })?;
            let (t1, t2) = match (s.tau1_frac, s.tau2_frac) {
                (Some(a), Some(b)) => (a, b),
                _ => return err("sequence.tau1_frac/tau2_frac: required for kind = symmetric5"),
            };
            let timing = match s.tau0_frac {
                Some(t0) => SymmetricFiveTiming::new(t0, t1, t2),
                None => SymmetricFiveTiming::from_tau12(t1, t2),
            }
            .map_err(|e| ConfigError(format!("sequence.tau*_frac: {e}")))?;
            PulseSequence::symmetric5(timing).map_err(|e| ConfigError(format!("sequence: {e}")))
        }
        k => {
            let n = ov.n.or_else(|| sec.and_then(|s| s.n)).unwrap_or(1);
            PulseSequence::build(k, n).map_err(|e| ConfigError(format!("sequence.n: {e}")))
        }
    }
}

fn build_noise(sec: Option<&NoiseSection>) -> Result<CompositePsd, ConfigError> {
    let Some(sec) = sec else {
        return Ok(noise::calibrated::model());
    };
    if sec.term.is_empty() {
        return err("noise.term: at least one term required when [noise] is present");
    }
    let mut terms = Vec::with_capacity(sec.term.len());
    for (i, t) in sec.term.iter().enumerate() {
        let key = format!("noise.term[{i}]");
        let term = match *t {
            NoiseTermCfg::Powerlaw { amplitude, alpha, ref_khz, low_khz, high_khz } => {
                if ref_khz <= 0.0 || low_khz <= 0.0 || high_khz <= low_khz {
                    return err(format!(
                        "{key}: need 0 < low_khz < high_khz and ref_khz > 0"
                    ));
                }
                PsdTerm::PowerLaw(
                    PowerLawPsd::new(
                        amplitude,
                        alpha,
                        khz_to_rad(ref_khz),
                        khz_to_rad(low_khz),
                        khz_to_rad(high_khz),
                    )
                    .map_err(|e| ConfigError(format!("{key}: {e}")))?,
                )
            }
            NoiseTermCfg::Gaussian { center_khz, width_khz, amplitude } => PsdTerm::Gaussian(
                GaussianPsd::new(khz_to_rad(center_khz), khz_to_rad(width_khz), amplitude)
                    .map_err(|e| ConfigError(format!("{key}: {e}")))?,
            ),
        };
        terms.push(term);
    }
    Ok(CompositePsd::new(terms))
}

fn build_tau_grid(sec: Option<&ScanSection>, ov: &Overrides) -> Result<Vec<f64>, ConfigError> {
    let start_us = ov.start_us.or_else(|| sec.and_then(|s| s.start_us)).unwrap_or(20.0);
    let stop_us = ov.stop_us.or_else(|| sec.and_then(|s| s.stop_us)).unwrap_or(2000.0);
    let points = ov.points.or_else(|| sec.and_then(|s| s.points)).unwrap_or(120);
    let spacing = match sec.and_then(|s| s.spacing.as_deref()).unwrap_or("log") {
        "linear" => Spacing::Linear,
        "log" => Spacing::Log,
        other => return err(format!("scan.spacing: expected 'linear' or 'log', got '{other}'")),
    };
    if !(start_us > 0.0) {
        return err(format!("scan.start_us: must be > 0, got {start_us}"));
    }
    if !(stop_us > start_us) {
        return err(format!("scan.stop_us: must exceed scan.start_us, got {stop_us}"));
    }
    if points < 2 {
        return err(format!("scan.points: must be >= 2, got {points}"));
    }
    let (a, b) = (start_us * 1e-6, stop_us * 1e-6);
    let grid = match spacing {
        Spacing::Linear => (0..points)
            .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
            .collect(),
        Spacing::Log => {
            let r = b / a;
            (0..points).map(|i| a * r.powf(i as f64 / (points - 1) as f64)).collect()
        }
    };
    Ok(grid)
}

/// Parse and validate a config document, applying command-line overrides.
pub fn parse_config(text: &str, ov: &Overrides) -> Result<RunConfig, ConfigError> {
    let file: FileConfig = toml::from_str(text).map_err(|e| ConfigError(format!("config: {e}")))?;
    resolve(file, ov)
}

fn resolve(file: FileConfig, ov: &Overrides) -> Result<RunConfig, ConfigError> {
    let sequence = build_sequence(file.sequence.as_ref(), ov)?;
    let noise = build_noise(file.noise.as_ref())?;
    let tau_grid = build_tau_grid(file.scan.as_ref(), ov)?;

    let visibility = ov.visibility.or(file.visibility).unwrap_or(noise::calibrated::VISIBILITY);
    if !(0.0..=1.0).contains(&visibility) {
        return err(format!("visibility: must lie in [0, 1], got {visibility}"));
    }
    let n_rep = ov.n_rep.or(file.n_rep);
    if let Some(n) = n_rep {
        if n == 0 {
            return err("n_rep: must be >= 1 when set");
        }
    }
    let seed = ov.seed.or(file.seed);
    if n_rep.is_some() && seed.is_none() {
        return err("seed: required whenever sampling (n_rep) is enabled");
    }

    let (t1_enabled, t1_s) = match file.t1.as_ref() {
        None => (false, 1.0),
        Some(t) => {
            let enabled = t.enabled.unwrap_or(false);
            let t1_s = t.t1_s.unwrap_or(1.0);
            if enabled && !(t1_s > 0.0) {
                return err(format!("t1.t1_s: must be > 0 when enabled, got {t1_s}"));
            }
            (enabled, t1_s)
        }
    };

    // filter grid: default spans the first pass bands
    let n_pulses = sequence.n_pulses();
    let filter_tau = ov
        .tau_us
        .or_else(|| file.filter.as_ref().and_then(|f| f.tau_us))
        .map(|us| us * 1e-6)
        .unwrap_or(500e-6);
    if !(filter_tau > 0.0) {
        return err(format!("filter.tau_us: must be > 0, got {}", filter_tau * 1e6));
    }
    let default_max = 2.0 * (n_pulses as f64 + 2.0) * std::f64::consts::PI / filter_tau;
    let filter_omega_min =
        file.filter.as_ref().and_then(|f| f.min_khz).map(khz_to_rad).unwrap_or(0.0);
    let filter_omega_max =
        file.filter.as_ref().and_then(|f| f.max_khz).map(khz_to_rad).unwrap_or(default_max);
    if !(filter_omega_min >= 0.0 && filter_omega_min < filter_omega_max) {
        return err("filter.min_khz/max_khz: need 0 <= min < max");
    }
    let filter_points = file.filter.as_ref().and_then(|f| f.points).unwrap_or(2001);
    if filter_points < 2 {
        return err("filter.points: must be >= 2");
    }

    let mc_n_traj = ov.n_traj.or_else(|| file.mc.as_ref().and_then(|m| m.n_traj)).unwrap_or(1000);
    let mc_n_modes =
        ov.n_modes.or_else(|| file.mc.as_ref().and_then(|m| m.n_modes)).unwrap_or(256);
    let mc_max_points = file.mc.as_ref().and_then(|m| m.max_points).unwrap_or(8);
    if mc_n_traj < 100 {
        return err(format!("mc.n_traj: must be >= 100, got {mc_n_traj}"));
    }
    if mc_n_modes < 64 {
        return err(format!("mc.n_modes: must be >= 64, got {mc_n_modes}"));
    }
    if mc_max_points == 0 {
        return err("mc.max_points: must be >= 1");
    }

    let t2scan_n_list =
        file.t2scan.as_ref().and_then(|t| t.n_list.clone()).unwrap_or_else(|| vec![1, 3, 5, 9, 13]);
    if t2scan_n_list.is_empty() {
        return err("t2scan.n_list: must not be empty");
    }
    if t2scan_n_list.contains(&0) {
        return err("t2scan.n_list: entries must be >= 1");
    }

    let spectroscopy_n = file.spectroscopy.as_ref().and_then(|s| s.n).unwrap_or(5);
    if spectroscopy_n == 0 {
        return err("spectroscopy.n: must be >= 1");
    }
    let spectroscopy_kind = parse_kind(
        file.spectroscopy.as_ref().and_then(|s| s.kind.as_deref()).unwrap_or("cpmg"),
        "spectroscopy.kind",
    )?;

    let optimize_tau = ov
        .tau_us
        .or_else(|| file.optimize.as_ref().and_then(|o| o.tau_us))
        .map(|us| us * 1e-6)
        .unwrap_or(1500e-6);
    if !(optimize_tau > 0.0) {
        return err("optimize.tau_us: must be > 0");
    }
    let optimize_step = ov.step.or_else(|| file.optimize.as_ref().and_then(|o| o.step)).unwrap_or(0.002);
    if !(optimize_step > 0.0 && optimize_step <= 0.05) {
        return err(format!("optimize.step: must lie in (0, 0.05], got {optimize_step}"));
    }

    let output = ov.output.clone().or_else(|| file.output.as_ref().and_then(|o| o.path.clone()));

    Ok(RunConfig {
        sequence,
        noise,
        tau_grid,
        visibility,
        t1_enabled,
        t1_s,
        n_rep,
        seed,
        output,
        filter_tau,
        filter_omega_min,
        filter_omega_max,
        filter_points,
        mc_n_traj,
        mc_n_modes,
        mc_max_points,
        t2scan_n_list,
        spectroscopy_n,
        spectroscopy_kind,
        optimize_tau,
        optimize_step,
    })
}
