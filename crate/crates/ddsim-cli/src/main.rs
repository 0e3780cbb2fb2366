//! Command-line front end: configuration, subcommand dispatch and
//! deterministic CSV/JSON emission.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical non-convergence.

use clap::{Parser, Subcommand};
use ddsim_cli::commands::{self, CliError};
use ddsim_cli::config::{self, Overrides};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "ddsim",
    version,
    about = "Qubit dephasing under dynamical decoupling: filter functions, coherence curves, noise spectroscopy, timing optimization"
)]
struct Cli {
    /// TOML run configuration; flags below override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// RNG seed (required whenever sampling is enabled).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<String>,

    /// Sequence kind: ramsey|echo|pdd|udd|cpmg|symmetric5|custom.
    #[arg(long, global = true)]
    kind: Option<String>,

    /// Pulse count for the pdd/udd/cpmg families.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Scan start, microseconds.
    #[arg(long, global = true)]
    start_us: Option<f64>,

    /// Scan stop, microseconds.
    #[arg(long, global = true)]
    stop_us: Option<f64>,

    /// Scan point count.
    #[arg(long, global = true)]
    points: Option<usize>,

    /// Binomial repetitions per point (enables sampling).
    #[arg(long, global = true)]
    n_rep: Option<u32>,

    /// Readout visibility in [0, 1].
    #[arg(long, global = true)]
    visibility: Option<f64>,

    /// Single tau for filter/optimize, microseconds.
    #[arg(long, global = true)]
    tau_us: Option<f64>,

    /// Grid step for optimize, interval fraction.
    #[arg(long, global = true)]
    step: Option<f64>,

    /// Monte-Carlo trajectory count.
    #[arg(long, global = true)]
    n_traj: Option<usize>,

    /// Monte-Carlo modes per spectral term.
    #[arg(long, global = true)]
    n_modes: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sample the filter function g_N(omega, tau) on a frequency grid.
    Filter,
    /// Coherence curve W(tau) and mapped population over the scan grid.
    Simulate,
    /// T2 versus pulse number for a sequence family.
    T2scan,
    /// Monte-Carlo coherence cross-check against the filter prediction.
    Mc,
    /// Reconstruct S(omega) from measured points or forward-simulation.
    Spectroscopy {
        /// CSV of measured points: n,tau_us,w.
        #[arg(long)]
        points_file: Option<PathBuf>,
    },
    /// Grid-search the symmetric five-pulse timing at fixed tau.
    Optimize,
    /// Least-squares fit of decay or Rabi models to CSV data (t_us,y).
    Fit {
        #[arg(long)]
        data: PathBuf,
        /// exponential|gaussian|stretched|rabi.
        #[arg(long)]
        model: String,
    },
    /// Optimal photon-count threshold from two histograms (n,count).
    Threshold {
        #[arg(long)]
        up: PathBuf,
        #[arg(long)]
        down: PathBuf,
    },
}

fn write_output(path: Option<&str>, content: &str) -> Result<(), CliError> {
    match path {
        None => {
            use std::io::Write;
            if let Err(e) = std::io::stdout().lock().write_all(content.as_bytes()) {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    // downstream closed the pipe (e.g. head); not an error
                    std::process::exit(0);
                }
                return Err(CliError::Validation(format!("cannot write to stdout: {e}")));
            }
            Ok(())
        }
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Validation(format!("cannot write {p}: {e}"))),
    }
}

/// Summary JSON path for optimize: the map path with a .summary.json suffix.
fn summary_path(map_path: &str) -> String {
    match map_path.rsplit_once('.') {
        Some((stem, _ext)) => format!("{stem}.summary.json"),
        None => format!("{map_path}.summary.json"),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ov = Overrides {
        seed: cli.seed,
        output: cli.out.clone(),
        kind: cli.kind.clone(),
        n: cli.n,
        start_us: cli.start_us,
        stop_us: cli.stop_us,
        points: cli.points,
        n_rep: cli.n_rep,
        visibility: cli.visibility,
        tau_us: cli.tau_us,
        step: cli.step,
        n_traj: cli.n_traj,
        n_modes: cli.n_modes,
    };
    let text = match &cli.config {
        None => String::new(),
        Some(path) => std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("cannot read config {}: {e}", path.display()))
        })?,
    };
    let cfg = config::parse_config(&text, &ov)?;

    match &cli.cmd {
        Cmd::Filter => write_output(cfg.output.as_deref(), &commands::cmd_filter(&cfg)?),
        Cmd::Simulate => write_output(cfg.output.as_deref(), &commands::cmd_simulate(&cfg)?),
        Cmd::T2scan => write_output(cfg.output.as_deref(), &commands::cmd_t2scan(&cfg)?),
        Cmd::Mc => write_output(cfg.output.as_deref(), &commands::cmd_mc(&cfg)?),
        Cmd::Spectroscopy { points_file } => {
            let pf = points_file.as_ref().map(|p| p.to_string_lossy().into_owned());
            write_output(cfg.output.as_deref(), &commands::cmd_spectroscopy(&cfg, pf.as_deref())?)
        }
        Cmd::Optimize => {
            let (map_csv, summary_json) = commands::cmd_optimize(&cfg)?;
            match cfg.output.as_deref() {
                None => {
                    print!("{map_csv}");
                    print!("{summary_json}");
                    Ok(())
                }
                Some(p) => {
                    write_output(Some(p), &map_csv)?;
                    write_output(Some(&summary_path(p)), &summary_json)
                }
            }
        }
        Cmd::Fit { data, model } => {
            let out = commands::cmd_fit(&cfg, &data.to_string_lossy(), model)?;
            write_output(cfg.output.as_deref(), &out)
        }
        Cmd::Threshold { up, down } => {
            let out =
                commands::cmd_threshold(&cfg, &up.to_string_lossy(), &down.to_string_lossy())?;
            write_output(cfg.output.as_deref(), &out)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    std::process::exit(0);
                }
                _ => {
                    eprintln!("{e}");
                    std::process::exit(1);
                }
            }
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
