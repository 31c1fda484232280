use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cavscat::{ModeShape, ScatterConfig};
use cavscat_cli::commands::{self, parse_m_range, parse_window, Quantity, Range};
use cavscat_cli::config::{self, parse_m_max};
use cavscat_cli::figures::run_figure;
use cavscat_cli::manifest::RunManifest;
use cavscat_cli::{CliError, CliResult};
use clap::{Args, Parser, Subcommand};

/// Scattering of cold two-level atoms by a cavity mode.
#[derive(Parser, Debug)]
#[command(name = "cavscat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args, Debug)]
struct Shared {
    /// Mode shape: constant or gaussian.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Velocity ratio k / kappa_n.
    #[arg(long = "k-over-kappa", global = true)]
    k_over_kappa: Option<f64>,
    /// Photon number of the initial Fock state.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Interaction length kappa R (or kappa sigma).
    #[arg(long, global = true)]
    size: Option<f64>,
    /// Highest partial wave, or `auto`.
    #[arg(long = "m-max", global = true)]
    m_max: Option<String>,
    /// Output file (directory for `figure`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Key-value configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads, or `auto`.
    #[arg(long, global = true)]
    threads: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Phase shifts and partial-wave coefficients for m = 0..m_max.
    PhaseShifts,
    /// One quantity over a grid of interaction lengths.
    Scan {
        /// total_a, total_b, total_plus, total_minus, coeff_a(m) or coeff_b(m).
        quantity: String,
        /// start:stop:step
        range: String,
    },
    /// Differential scattering lengths on the angular grid.
    Differential {
        #[arg(long = "theta-points")]
        theta_points: Option<usize>,
    },
    /// Resonance positions and widths.
    Resonances {
        /// lo:hi (inclusive) or a single m.
        #[arg(long = "m-range", default_value = "0:3")]
        m_range: String,
        /// Window in kappa R, lo:hi.
        #[arg(long, default_value = "0:6")]
        window: String,
    },
    /// Datasets of a published figure (2-7).
    Figure { id: u32 },
}

fn load_config(shared: &Shared) -> CliResult<ScatterConfig> {
    let mut cfg = match &shared.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            config::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => config::default_config(),
    };
    if let Some(mode) = &shared.mode {
        let shape = ModeShape::parse(mode).ok_or_else(|| CliError::Config(format!("--mode: unknown shape `{mode}`")))?;
        cfg.mode.shape = shape;
    }
    if let Some(v) = shared.k_over_kappa {
        cfg.k_over_kappa_n = v;
    }
    if let Some(v) = shared.n {
        cfg.n = v;
    }
    if let Some(v) = shared.size {
        cfg.mode.size = v;
    }
    if let Some(v) = &shared.m_max {
        cfg.m_max = parse_m_max(v).ok_or_else(|| CliError::Config(format!("--m-max: expected integer or `auto`, got `{v}`")))?;
    }
    Ok(cfg)
}

fn set_threads(spec: Option<&str>) -> CliResult<()> {
    let n = match spec {
        None | Some("auto") => return Ok(()),
        Some(s) => s
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("--threads: expected positive integer or `auto`, got `{s}`")))?,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("--threads: {e}")))
}

fn emit(out: Option<&Path>, body: &str, command: &str, cfg: &ScatterConfig) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| CliError::io(path, e))?;
            let mut manifest_path = path.as_os_str().to_owned();
            manifest_path.push(".manifest");
            RunManifest::new(command, cfg, vec![path.display().to_string()]).write(Path::new(&manifest_path))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    set_threads(cli.shared.threads.as_deref())?;
    let out = cli.shared.out.as_deref();
    let mut cfg = load_config(&cli.shared)?;
    match cli.command {
        Command::PhaseShifts => {
            let body = commands::phase_shifts_csv(&cfg)?;
            emit(out, &body, "phase-shifts", &cfg)
        }
        Command::Scan { quantity, range } => {
            let q = Quantity::parse(&quantity)?;
            let r = Range::parse(&range)?;
            let body = commands::scan_csv(q, &r, &cfg)?;
            emit(out, &body, &format!("scan {} {range}", q.name()), &cfg)
        }
        Command::Differential { theta_points } => {
            if let Some(t) = theta_points {
                cfg.theta_points = t;
            }
            let body = commands::differential_csv(&cfg)?;
            emit(out, &body, "differential", &cfg)
        }
        Command::Resonances { m_range, window } => {
            let ms = parse_m_range(&m_range)?;
            let w = parse_window(&window)?;
            let body = commands::resonances_csv(ms, w, &cfg)?;
            emit(out, &body, &format!("resonances --m-range {m_range} --window {window}"), &cfg)
        }
        Command::Figure { id } => {
            let dir = out.unwrap_or(Path::new("."));
            for name in run_figure(id, dir)? {
                println!("{}", dir.join(name).display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cavscat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
