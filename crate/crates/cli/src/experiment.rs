use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use cauchy_invariance::brownian::{
    default_max_steps, sample_exit_euler, sample_exit_exact, strip_exit_components, DomainSpec,
    ExitError,
};
use cauchy_invariance::ergodic::{orbit, Observable, OrbitConfig, OrbitError};
use cauchy_invariance::maps::{
    boole, log_abs_map, pw_validate, sech_map, simpson_newton, ExtendedReal, MapError,
};
use cauchy_invariance::parallel::{collect_draws, run_streams, Streams};
use cauchy_invariance::samplers::{sample_cauchy, sample_sech};
use cauchy_invariance::stats::{
    cauchy_cdf, correlation, empirical_cf, ks_critical_two_sample, ks_one_sample, ks_two_sample,
    quantiles, sech_cdf, StatsError,
};
use cauchy_invariance::{ComplexPoint, EmpiricalDistribution, PwMap, PwParams};
use thiserror::Error;

use crate::config::{ConfigError, Domain, Experiment, ExperimentConfig, MapChoice};
use crate::report::{Gate, Report, Timings};

/// Significance level of every two-sample gate.
pub const ALPHA: f64 = 0.001;

const FIXED_POINT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Exit(#[from] ExitError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Map(#[from] MapError),
}

impl ExperimentError {
    /// Whether the run was refused because of its inputs rather than failing
    /// part-way.
    pub fn is_invalid_config(&self) -> bool {
        matches!(
            self,
            ExperimentError::Config(_)
                | ExperimentError::Orbit(OrbitError::InvalidStart { .. })
                | ExperimentError::Orbit(OrbitError::InvalidConfig(_))
                | ExperimentError::Map(MapError::InvalidParams(_))
        )
    }
}

/// Scales a threshold stated for `reference` samples to `n` samples. Sampling
/// error shrinks like `1/√n`, so smaller runs get proportionally wider gates.
pub fn widen(threshold: f64, reference: usize, n: usize) -> f64 {
    threshold * (reference as f64 / n.max(1) as f64).sqrt().max(1.0)
}

const REFERENCE_N: usize = 100_000;
const REFERENCE_ORBIT_N: usize = 1_000_000;

#[derive(Default)]
struct Collector {
    gates: Vec<Gate>,
    summary: BTreeMap<String, f64>,
    counts: BTreeMap<String, u64>,
    failures: Vec<String>,
    stages: BTreeMap<String, f64>,
    samples: Option<Vec<f64>>,
}

impl Collector {
    fn gate(&mut self, g: Gate) {
        if !g.pass {
            let op = match g.comparison {
                crate::report::Comparison::Below => "<",
                crate::report::Comparison::AtMost => "≤",
            };
            self.failures.push(format!(
                "{}: observed {} is not {op} {}",
                g.name, g.observed, g.threshold
            ));
        }
        self.gates.push(g);
    }

    fn stat(&mut self, key: impl Into<String>, value: f64) {
        self.summary.insert(key.into(), value);
    }

    fn count(&mut self, key: impl Into<String>, value: usize) {
        self.counts.insert(key.into(), value as u64);
    }

    fn stage(&mut self, name: &str, since: Instant) {
        *self.stages.entry(name.to_string()).or_default() += since.elapsed().as_secs_f64();
    }

    fn keep(&mut self, cfg: &ExperimentConfig, e: &EmpiricalDistribution) {
        if cfg.dump_samples && self.samples.is_none() {
            self.samples = Some(e.sorted().to_vec());
        }
    }
}

/// Validates `cfg`, runs the experiment and collects its gates.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report, ExperimentError> {
    let cfg = cfg.clone().resolve()?;
    let start = Instant::now();
    let mut c = Collector::default();
    match cfg.experiment {
        Experiment::ExitSim => exit_sim(&cfg, &mut c)?,
        Experiment::Orbit => orbit_run(&cfg, &mut c)?,
        Experiment::InvarianceCheck => invariance_check(&cfg, &mut c)?,
        Experiment::PwCheck => pw_check(&cfg, &mut c)?,
        Experiment::CfCheck => cf_check(&cfg, &mut c)?,
    }
    Ok(Report {
        config: cfg,
        gates: c.gates,
        summary: c.summary,
        counts: c.counts,
        failures: c.failures,
        timings: Timings {
            wall_clock_s: start.elapsed().as_secs_f64(),
            stages: c.stages,
        },
        samples: c.samples,
    })
}

fn fraction<T>(xs: &[T], pred: impl Fn(&T) -> bool) -> f64 {
    xs.iter().filter(|x| pred(x)).count() as f64 / xs.len() as f64
}

fn indicator(b: bool) -> f64 {
    f64::from(u8::from(b))
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

fn exit_sim(cfg: &ExperimentConfig, c: &mut Collector) -> Result<(), ExperimentError> {
    let domain = cfg.domain.expect("resolved config has a domain");
    let spec = DomainSpec::default_for(domain.into());
    let streams = Streams::new(cfg.seed, cfg.workers);
    let wide = |t| widen(t, REFERENCE_N, cfg.n);
    let t = Instant::now();

    if domain == Domain::Strip {
        let dt = cfg.dt.expect("resolved strip config has a step");
        let max_steps = default_max_steps(dt);
        let chunks = run_streams(streams, cfg.n, |rng, count| {
            (0..count)
                .map(|_| sample_exit_euler(&spec, dt, rng, max_steps))
                .collect::<Vec<_>>()
        });
        let (mut sides, mut heights) = (Vec::new(), Vec::new());
        let (mut stuck, mut steps) = (0, 0u64);
        for r in chunks.into_iter().flatten() {
            match r {
                Ok(s) => {
                    steps += s.steps_taken;
                    let (side, h) = strip_exit_components(&s)?;
                    sides.push(f64::from(side));
                    heights.push(h);
                }
                Err(ExitError::MaxStepsExceeded { .. }) => stuck += 1,
                Err(e) => return Err(e.into()),
            }
        }
        c.stage("sampling", t);
        let t = Instant::now();
        c.count("exited_paths", sides.len());
        c.count("non_exit_paths", stuck);
        c.count("max_steps", max_steps as usize);
        c.stat("mean_steps", steps as f64 / sides.len().max(1) as f64);

        let plus = fraction(&sides, |&s| s > 0.0);
        let positive: Vec<f64> = heights.iter().map(|&h| indicator(h > 0.0)).collect();
        let corr_height = correlation(&sides, &heights)?;
        let corr_positive = correlation(&sides, &positive)?;
        let e = EmpiricalDistribution::new(heights)?;
        let ks = ks_one_sample(&e, sech_cdf)?;
        c.stat("side_plus_frequency", plus);
        c.stat("corr_side_height", corr_height);
        c.stat("corr_side_height_positive", corr_positive);
        c.gate(Gate::below("ks_vs_sech", ks, wide(0.02)));
        c.gate(Gate::below("side_plus_frequency_deviation", (plus - 0.5).abs(), wide(0.005)));
        c.gate(Gate::below("abs_corr_side_height", corr_height.abs(), wide(0.01)));
        c.gate(Gate::below("abs_corr_side_height_positive", corr_positive.abs(), wide(0.01)));
        c.gate(Gate::at_most("non_exit_paths", stuck as f64, 0.0));
        c.keep(cfg, &e);
        c.stage("statistics", t);
        return Ok(());
    }

    let exits: Vec<ComplexPoint> = collect_draws(streams, cfg.n, |rng| {
        sample_exit_exact(&spec, rng).map(|s| s.exit_point)
    })?;
    c.stage("sampling", t);
    let t = Instant::now();
    c.count("exited_paths", exits.len());
    if domain == Domain::UpperHalfPlane {
        let e = EmpiricalDistribution::new(exits.iter().map(|z| z.re).collect())?;
        let q = quantiles(&e, &[0.25, 0.5, 0.75])?;
        c.stat("quartile_lower", q[0]);
        c.stat("median", q[1]);
        c.stat("quartile_upper", q[2]);
        c.gate(Gate::below("ks_vs_cauchy", ks_one_sample(&e, cauchy_cdf)?, wide(0.01)));
        for theta in [0.5, 1.0, 2.0] {
            let modulus = empirical_cf(&e, theta)?.norm();
            c.stat(format!("cf_modulus_theta_{theta:?}"), modulus);
            c.gate(Gate::below(
                format!("cf_modulus_error_theta_{theta:?}"),
                (modulus - (-theta).exp()).abs(),
                wide(0.012),
            ));
        }
        c.keep(cfg, &e);
    } else {
        let upper = fraction(&exits, |z| z.im > 0.0);
        let e = EmpiricalDistribution::new(exits.iter().map(|z| z.im).collect())?;
        c.stat("arg_upper_frequency", upper);
        c.gate(Gate::below("ks_vs_cauchy", ks_one_sample(&e, cauchy_cdf)?, wide(0.01)));
        c.gate(Gate::below("arg_upper_frequency_deviation", (upper - 0.5).abs(), wide(0.005)));
        c.keep(cfg, &e);
    }
    c.stage("statistics", t);
    Ok(())
}

fn orbit_run(cfg: &ExperimentConfig, c: &mut Collector) -> Result<(), ExperimentError> {
    let map = cfg
        .map
        .as_ref()
        .and_then(MapChoice::orbit_map)
        .expect("resolved orbit config has a Cauchy-preserving map");
    let x0 = cfg.x0.expect("resolved orbit config has a start");
    let t = Instant::now();
    let result = orbit(&OrbitConfig::new(map, x0, cfg.n))?;
    c.stage("sampling", t);
    let t = Instant::now();
    c.count("orbit_points", result.samples.len());

    if let Some(stop) = result.terminated_early {
        c.count("terminated_at_step", stop.step);
        c.gate(Gate::at_most("early_termination", 1.0, 0.0));
        c.failures.push(format!(
            "exceptional-set: orbit reached a {} at step {}",
            stop.reason, stop.step
        ));
        c.keep(cfg, &result.samples);
        c.stage("statistics", t);
        return Ok(());
    }
    c.gate(Gate::at_most("early_termination", 0.0, 0.0));

    let wide = |t| widen(t, REFERENCE_ORBIT_N, cfg.n);
    let selected: Vec<Observable> = match cfg.observable {
        Some(o) => vec![o.into()],
        None => Observable::ALL.to_vec(),
    };
    for o in selected {
        let avg = result.birkhoff_values[o.name()];
        c.stat(format!("birkhoff_{}", o.name()), avg);
        c.stat(format!("cauchy_mean_{}", o.name()), o.cauchy_mean());
        c.gate(Gate::below(
            format!("birkhoff_error_{}", o.name()),
            (avg - o.cauchy_mean()).abs(),
            wide(0.01),
        ));
    }
    c.gate(Gate::below(
        "ks_vs_cauchy",
        ks_one_sample(&result.samples, cauchy_cdf)?,
        wide(0.02),
    ));
    c.keep(cfg, &result.samples);
    c.stage("statistics", t);
    Ok(())
}

/// A real map as used for pushforwards: `None` where it has a pole.
type RealMap = Box<dyn Fn(f64) -> Option<f64>>;

fn cauchy_map(choice: &MapChoice) -> Result<RealMap, ExperimentError> {
    Ok(match choice {
        MapChoice::Boole => Box::new(|x| boole(ExtendedReal::from(x)).value()),
        MapChoice::SimpsonNewton => Box::new(|x| simpson_newton(ExtendedReal::from(x)).value()),
        MapChoice::Pw { a, b, terms } => {
            let m = PwMap::new(PwParams::new(*a, *b, terms.clone()))?;
            Box::new(move |x| m.eval(ExtendedReal::from(x)).value())
        }
        MapChoice::SechMap | MapChoice::LogAbs => unreachable!("not a Cauchy-preserving map"),
    })
}

/// Applies `f`, dropping points where it is undefined. Returns the image and
/// the number of points dropped.
fn push_forward(xs: &[f64], f: impl Fn(f64) -> Option<f64>) -> (Vec<f64>, usize) {
    let image: Vec<f64> = xs.iter().filter_map(|&x| f(x)).collect();
    let dropped = xs.len() - image.len();
    (image, dropped)
}

fn invariance_check(cfg: &ExperimentConfig, c: &mut Collector) -> Result<(), ExperimentError> {
    let map = cfg.map.as_ref().expect("resolved config has a map");
    let streams = Streams::new(cfg.seed, cfg.workers);
    let t = Instant::now();

    let (source, fresh, reference_cdf): (_, _, fn(f64) -> f64) = match map {
        MapChoice::SechMap => (
            collect_draws(streams.batch(0), cfg.n, |rng| Ok::<_, ExitError>(sample_sech(rng)))?,
            collect_draws(streams.batch(1), cfg.n, |rng| Ok::<_, ExitError>(sample_sech(rng)))?,
            sech_cdf,
        ),
        _ => {
            let spec = DomainSpec::upper_half_plane();
            (
                collect_draws(streams.batch(0), cfg.n, |rng| {
                    sample_exit_exact(&spec, rng).map(|s| s.exit_point.re)
                })?,
                collect_draws(streams.batch(1), cfg.n, |rng| Ok::<_, ExitError>(sample_cauchy(rng)))?,
                cauchy_cdf,
            )
        }
    };
    let (image, dropped) = match map {
        MapChoice::SechMap => push_forward(&source, |x| sech_map(x).ok()),
        _ => push_forward(&source, cauchy_map(map)?),
    };
    c.stage("sampling", t);
    let t = Instant::now();
    c.count("pole_hits", dropped);
    c.count("pushed_samples", image.len());

    let pushed = EmpiricalDistribution::new(image)?;
    let fresh = EmpiricalDistribution::new(fresh)?;
    c.gate(Gate::below(
        "ks_two_sample_vs_fresh",
        ks_two_sample(&pushed, &fresh)?,
        ks_critical_two_sample(pushed.len(), fresh.len(), ALPHA),
    ));
    c.gate(Gate::below(
        "ks_vs_reference",
        ks_one_sample(&pushed, reference_cdf)?,
        widen(0.01, REFERENCE_N, cfg.n),
    ));
    c.keep(cfg, &pushed);
    c.stage("statistics", t);
    Ok(())
}

fn pw_check(cfg: &ExperimentConfig, c: &mut Collector) -> Result<(), ExperimentError> {
    let boole_params = || PwParams::new(0.5, 0.5, vec![]);
    let sets: Vec<(&str, PwParams)> = match &cfg.map {
        None => vec![
            ("boole", boole_params()),
            ("mobius", PwParams::new(0.0, 0.0, vec![(1.0, 1.0)])),
        ],
        Some(MapChoice::Boole) => vec![("boole", boole_params())],
        Some(MapChoice::Pw { a, b, terms }) => vec![("custom", PwParams::new(*a, *b, terms.clone()))],
        Some(other) => unreachable!("resolve rejects {other} for pw-check"),
    };
    let streams = Streams::new(cfg.seed, cfg.workers);
    let i = ComplexPoint::new(0.0, 1.0);

    for (k, (label, params)) in sets.into_iter().enumerate() {
        let t = Instant::now();
        let violations = pw_validate(&params).err().unwrap_or_default();
        c.gate(Gate::at_most(format!("{label}_valid"), violations.len() as f64, 0.0));
        if !violations.is_empty() {
            for v in violations {
                c.failures.push(format!("{label}: {v:?}"));
            }
            continue;
        }
        let m = PwMap::new(params)?;
        c.stat(format!("{label}_normalizer"), m.normalizer());
        let fixed = (m.eval_c(i)? - i).norm();
        c.gate(Gate::below(format!("{label}_fixed_point_error"), fixed, FIXED_POINT_TOLERANCE));

        let batch = 2 * k as u32;
        let draw = |rng: &mut _| Ok::<_, ExitError>(sample_cauchy(rng));
        let source = collect_draws(streams.batch(batch), cfg.n, draw)?;
        let fresh = collect_draws(streams.batch(batch + 1), cfg.n, draw)?;
        let (image, dropped) = push_forward(&source, |x| m.eval(ExtendedReal::from(x)).value());
        c.stage("sampling", t);
        let t = Instant::now();
        c.count(format!("{label}_pole_hits"), dropped);
        let pushed = EmpiricalDistribution::new(image)?;
        let fresh = EmpiricalDistribution::new(fresh)?;
        c.gate(Gate::below(
            format!("{label}_ks_two_sample"),
            ks_two_sample(&pushed, &fresh)?,
            ks_critical_two_sample(pushed.len(), fresh.len(), ALPHA),
        ));
        c.keep(cfg, &pushed);
        c.stage("statistics", t);
    }
    Ok(())
}

fn cf_check(cfg: &ExperimentConfig, c: &mut Collector) -> Result<(), ExperimentError> {
    let streams = Streams::new(cfg.seed, cfg.workers);
    let wide = |t| widen(t, REFERENCE_N, cfg.n);
    let t = Instant::now();
    let spec = DomainSpec::right_half_plane();
    let exits: Vec<ComplexPoint> = collect_draws(streams.batch(0), cfg.n, |rng| {
        sample_exit_exact(&spec, rng).map(|s| s.exit_point)
    })?;
    let cauchy = collect_draws(streams.batch(1), cfg.n, |rng| Ok::<_, ExitError>(sample_cauchy(rng)))?;
    c.stage("sampling", t);
    let t = Instant::now();

    let logs = exits
        .iter()
        .map(|z| log_abs_map(z.norm()))
        .collect::<Result<Vec<f64>, _>>()?;
    let signs: Vec<f64> = exits.iter().map(|z| z.arg().signum()).collect();
    let upper = fraction(&exits, |z| z.arg() == FRAC_PI_2);
    let corr = correlation(&signs, &logs)?;
    c.stat("arg_upper_frequency", upper);
    c.stat("corr_arg_sign_log_modulus", corr);
    c.gate(Gate::below("arg_upper_frequency_deviation", (upper - 0.5).abs(), wide(0.005)));
    c.gate(Gate::below("abs_corr_arg_sign_log_modulus", corr.abs(), wide(0.01)));

    let (cauchy_logs, zeros) = push_forward(&cauchy, |x| log_abs_map(x).ok());
    c.count("cauchy_zeros", zeros);
    for (prefix, sample) in [("exit", logs), ("cauchy", cauchy_logs)] {
        let e = EmpiricalDistribution::new(sample)?;
        c.gate(Gate::below(
            format!("{prefix}_ks_vs_sech"),
            ks_one_sample(&e, sech_cdf)?,
            wide(0.015),
        ));
        for lambda in [0.5, 1.0] {
            let cf = empirical_cf(&e, lambda)?;
            c.stat(format!("{prefix}_cf_re_lambda_{lambda:?}"), cf.re);
            c.stat(format!("{prefix}_cf_im_lambda_{lambda:?}"), cf.im);
            c.gate(Gate::below(
                format!("{prefix}_cf_error_lambda_{lambda:?}"),
                (cf - sech(lambda)).norm(),
                wide(0.012),
            ));
        }
        c.keep(cfg, &e);
    }
    c.stage("statistics", t);
    Ok(())
}
