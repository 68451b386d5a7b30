use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tomo::checks::Suite;
use tomo::commands::{self, BetaLayout, Hamiltonian, Mode, SpinLayout};
use tomo::{CliError, CliResult, Config, StateDescriptor};

/// Tomographic probability representation of oscillator and spin states.
#[derive(Debug, Parser)]
#[command(name = "tomo", version)]
struct Cli {
    /// JSON configuration file (default: $TOMO_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomly drawn test states.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on the count.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SamplingArgs {
    /// Angles over [0, pi).
    #[arg(long)]
    angles: Option<usize>,
    /// X samples over [-xmax, xmax).
    #[arg(long)]
    xpoints: Option<usize>,
    #[arg(long)]
    xmax: Option<f64>,
}

#[derive(Debug, Args)]
struct SpinArgs {
    /// Azimuthal samples over [0, 2 pi); 0 picks 4j + 2.
    #[arg(long)]
    alpha_points: Option<usize>,
    /// Polar samples; 0 picks 2j + 2.
    #[arg(long)]
    beta_points: Option<usize>,
    #[arg(long, value_enum, default_value = "gauss")]
    beta_layout: BetaLayout,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the tomogram of a library state.
    State {
        /// fock:n | coherent:re,im | classical-point:x0,p0[,eps] | spin:j:matrix-file
        state: String,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        spin: SpinArgs,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Invert a sampled optical tomogram (JSON manifest or CSV).
    Reconstruct {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "wigner")]
        mode: Mode,
        /// Nodes per phase-space axis.
        #[arg(long)]
        points: Option<usize>,
        /// Phase-space grid covers [-half-width, half-width].
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Evolve a library state under a quadratic Hamiltonian.
    Evolve {
        state: String,
        /// free | oscillator | JSON file {"b": [[..],[..]], "c": [..]}
        hamiltonian: Hamiltonian,
        #[arg(short, long = "time", allow_negative_numbers = true)]
        t: f64,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Transition probability between two states (descriptors or files).
    Overlap { first: String, second: String },
    /// Sample the tomogram of a spin density matrix.
    SpinTomogram {
        /// spin:j:matrix-file
        state: String,
        #[command(flatten)]
        spin: SpinArgs,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Recover a spin density matrix from its tomogram manifest.
    SpinReconstruct {
        input: PathBuf,
        #[arg(short, long, default_value = ".")]
        output: PathBuf,
    },
    /// Run an invariant suite and print a JSON report.
    Check {
        #[arg(value_enum, default_value = "all")]
        suite: Suite,
        /// Also write the report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

impl SamplingArgs {
    fn apply(&self, cfg: &mut Config) {
        if let Some(n) = self.angles {
            cfg.angles = n;
        }
        if let Some(n) = self.xpoints {
            cfg.x_points = n;
        }
        if let Some(x) = self.xmax {
            cfg.x_max = x;
        }
    }
}

impl SpinArgs {
    fn layout(&self, cfg: &Config) -> SpinLayout {
        SpinLayout {
            alpha_points: self.alpha_points.unwrap_or(cfg.spin_alpha_points),
            beta_points: self.beta_points.unwrap_or(cfg.spin_beta_points),
            beta: self.beta_layout,
        }
    }
}

fn announce(paths: Vec<PathBuf>) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn write_report(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> CliResult<()> {
    if cli.threads == 0 {
        return Err(CliError::input("--threads must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| CliError::input(e.to_string()))?;
    let mut cfg = Config::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    match cli.command {
        Command::State { state, sampling, spin, output } => {
            sampling.apply(&mut cfg);
            let desc: StateDescriptor = state.parse()?;
            announce(commands::state(&desc, &spin.layout(&cfg), &cfg, &output)?);
        }
        Command::Reconstruct { input, mode, points, half_width, output } => {
            if let Some(n) = points {
                cfg.phase_points = n;
            }
            if let Some(h) = half_width {
                cfg.phase_half_width = h;
            }
            announce(commands::reconstruct(&input, mode, &cfg, &output)?);
        }
        Command::Evolve { state, hamiltonian, t, sampling, output } => {
            sampling.apply(&mut cfg);
            let desc: StateDescriptor = state.parse()?;
            announce(commands::evolve(&desc, &hamiltonian, t, &cfg, &output)?);
        }
        Command::Overlap { first, second } => {
            println!("{}", to_json(&commands::overlap(&first, &second, &cfg)?));
        }
        Command::SpinTomogram { state, spin, output } => {
            let desc: StateDescriptor = state.parse()?;
            announce(commands::spin_tomogram_cmd(&desc, &spin.layout(&cfg), &cfg, &output)?);
        }
        Command::SpinReconstruct { input, output } => {
            announce(commands::spin_reconstruct(&input, &cfg, &output)?);
        }
        Command::Check { suite, report } => {
            let r = commands::check(suite, &cfg);
            for c in &r.checks {
                eprintln!("{}", c.line());
            }
            let text = to_json(&r);
            println!("{text}");
            if let Some(path) = report {
                write_report(&path, &text)?;
            }
            if !r.pass {
                return Err(CliError::CheckFailed(r.failures()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
