use std::path::PathBuf;
use std::process::ExitCode;

use apflow::config::{RunConfig, KEYS};
use apflow::experiment::{format_sweep, run_well_prepared, sweep_eps, write_sweep_summary};
use apflow::stability::{stability_report, LinearizationState};
use clap::{Args, Parser, Subcommand};

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

#[derive(Parser)]
#[command(name = "apflow", version, about = "Asymptotic-preserving Euler solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the well-prepared benchmark and write fields and time series.
    Run(RunArgs),
    /// Emit the amplification-matrix stability report as CSV.
    Stability(StabilityArgs),
    /// Run the benchmark for a list of eps values and summarise.
    SweepEps {
        /// Comma-separated eps values.
        #[arg(id = "eps_values", value_name = "EPS", value_delimiter = ',', required = true)]
        eps_values: Vec<f64>,
        #[command(flatten)]
        run: RunArgs,
        /// Run the eps values on separate threads.
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// File of key=value lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override any config key (repeatable), e.g. --set eps=0.05.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    ny: Option<String>,
    #[arg(long)]
    t_final: Option<String>,
    #[arg(long)]
    output_dir: Option<String>,
}

impl RunArgs {
    fn load(&self) -> CliResult<RunConfig> {
        let text = match &self.config {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| format!("{}: {e}", p.display()))?,
            None => String::new(),
        };
        let mut overrides = Vec::new();
        for s in &self.set {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| format!("--set expects KEY=VALUE, got `{s}` (keys: {})", KEYS.join(", ")))?;
            overrides.push((k.trim().to_string(), v.trim().to_string()));
        }
        let named = [
            ("preset", &self.preset),
            ("eps", &self.eps),
            ("alpha", &self.alpha),
            ("nx", &self.nx),
            ("ny", &self.ny),
            ("t_final", &self.t_final),
            ("output_dir", &self.output_dir),
        ];
        for (k, v) in named {
            if let Some(v) = v {
                overrides.push((k.to_string(), v.clone()));
            }
        }
        Ok(RunConfig::from_sources(&text, &overrides)?)
    }
}

#[derive(Args)]
struct StabilityArgs {
    /// Lattice radius: frequencies 2*pi*k with k in [-N, N]^2.
    #[arg(long = "N", short = 'N', default_value_t = 8)]
    n: usize,
    /// Decreasing time-step ladder.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.05, 0.025, 0.0125])]
    dt: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    rho_bar: f64,
    #[arg(long, default_value_t = 1.0)]
    a_bar: f64,
    /// Linearisation velocity as `u1,u2`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, 0.0], allow_negative_numbers = true)]
    u_bar: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("apflow: {e}");
            let mut source = e.source();
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load()?;
            let e = run_well_prepared(&cfg)?;
            let files = e.write(&cfg.output_dir)?;
            let (first, last) = (e.first(), e.last());
            println!(
                "{} eps={} {}x{}: {} steps to t={}",
                cfg.preset_name(),
                cfg.eps,
                cfg.nx,
                cfg.ny,
                e.outcome.steps,
                e.outcome.t
            );
            println!(
                "rho_dev_inf {:.6e} -> {:.6e}, div_inf {:.6e} -> {:.6e}",
                first.rho_dev_inf, last.rho_dev_inf, first.div_inf, last.div_inf
            );
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Command::Stability(args) => {
            let lin = LinearizationState::new(
                args.rho_bar,
                [args.u_bar[0], args.u_bar[1]],
                args.a_bar,
                args.eps,
            )?;
            let report = stability_report(&lin, args.n, &args.dt)?;
            match &args.output {
                Some(path) => {
                    report.save_csv(path)?;
                    println!("{report}");
                    println!("wrote {}", path.display());
                }
                None => {
                    report.write_csv(std::io::stdout().lock())?;
                    eprintln!("{report}");
                }
            }
            if !report.all_conditions_hold() {
                return Err("stability conditions violated".into());
            }
        }
        Command::SweepEps { eps_values, run, parallel } => {
            let cfg = run.load()?;
            let rows = sweep_eps(&cfg, &eps_values, parallel)?;
            let path = cfg.output_dir.join("sweep_eps.csv");
            write_sweep_summary(&rows, &path)?;
            print!("{}", format_sweep(&rows));
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
