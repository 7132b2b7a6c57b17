use std::path::PathBuf;
use std::process::ExitCode;

use cauchy_invariance_cli::{
    run_experiment, Domain, Experiment, ExperimentConfig, Format, MapChoice, ObservableChoice,
};
use clap::Parser;

/// Monte Carlo and orbit experiments on Cauchy-preserving maps.
///
/// Exit status: 0 if every gate passes, 1 if a gate fails, 2 for an invalid
/// configuration, 3 for I/O and other errors.
#[derive(Debug, Parser)]
#[command(name = "cauchy-inv", version)]
struct Args {
    #[arg(long, value_enum)]
    experiment: Experiment,
    #[arg(long, env = "CAUCHY_INV_SEED", default_value_t = cauchy_invariance_cli::config::DEFAULT_SEED)]
    seed: u64,
    /// Sample count [default: 100000, or 1000000 orbit points]
    #[arg(long)]
    n: Option<usize>,
    /// Euler time step, strip only [default: 0.001]
    #[arg(long)]
    dt: Option<f64>,
    /// Domain for exit-sim [default: upper-half-plane]
    #[arg(long, value_enum)]
    domain: Option<Domain>,
    /// boole, simpson-newton, sech-map, log-abs, mobius or pw:A,B[,AN:BN...]
    #[arg(long)]
    map: Option<MapChoice>,
    /// Orbit starting point [default: 2]
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    /// Restrict orbit Birkhoff gates to one observable
    #[arg(long, value_enum)]
    observable: Option<ObservableChoice>,
    /// Number of random streams [default: available cores]
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include the sorted primary sample in the report
    #[arg(long)]
    dump_samples: bool,
}

impl Args {
    fn into_config(self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(self.experiment);
        cfg.seed = self.seed;
        if let Some(n) = self.n {
            cfg.n = n;
        }
        cfg.workers = self.workers.unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        });
        cfg.domain = self.domain;
        cfg.map = self.map;
        cfg.x0 = self.x0;
        cfg.observable = self.observable;
        cfg.dt = self.dt;
        cfg.format = self.format;
        cfg.out = self.out;
        cfg.dump_samples = self.dump_samples;
        cfg
    }
}

fn main() -> ExitCode {
    let cfg = Args::parse().into_config();
    let report = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(e) if e.is_invalid_config() => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    if let Err(e) = report.emit(cfg.format, cfg.out.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(3);
    }
    for g in &report.gates {
        let status = if g.pass { "PASS" } else { "FAIL" };
        eprintln!("{status} {} observed={} threshold={}", g.name, g.observed, g.threshold);
    }
    for f in &report.failures {
        eprintln!("failure: {f}");
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
