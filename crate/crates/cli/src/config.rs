use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cauchy_invariance::brownian::DomainKind;
use cauchy_invariance::ergodic::{Observable, OrbitMap};
use cauchy_invariance::maps::pw_validate;
use cauchy_invariance::PwParams;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("--{flag} does not apply to the {experiment} experiment")]
    Unused {
        flag: &'static str,
        experiment: Experiment,
    },
    #[error("map {map} cannot be used by the {experiment} experiment")]
    WrongMap { map: String, experiment: Experiment },
    #[error("invalid --map value '{0}': {1}")]
    BadMap(String, String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    /// Exit points of planar Brownian motion.
    ExitSim,
    /// Orbit of a Cauchy-preserving map and its Birkhoff averages.
    Orbit,
    /// Push a sample through a map and compare with the source law.
    InvarianceCheck,
    /// Validate Pitman-Williams parameters and test their pushforward.
    PwCheck,
    /// Characteristic-function identity for (2/π)·ln|C|.
    CfCheck,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    UpperHalfPlane,
    Strip,
    RightHalfPlane,
}

impl From<Domain> for DomainKind {
    fn from(d: Domain) -> Self {
        match d {
            Domain::UpperHalfPlane => DomainKind::UpperHalfPlane,
            Domain::Strip => DomainKind::Strip,
            Domain::RightHalfPlane => DomainKind::RightHalfPlane,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ObservableChoice {
    /// 1/(1 + t²)
    Lorentzian,
    /// 1{0 ≤ t ≤ 1}
    UnitInterval,
}

impl From<ObservableChoice> for Observable {
    fn from(o: ObservableChoice) -> Self {
        match o {
            ObservableChoice::Lorentzian => Observable::Lorentzian,
            ObservableChoice::UnitInterval => Observable::UnitInterval,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// A map selected with `--map`.
///
/// Accepted spellings: `boole`, `simpson-newton`, `sech-map`, `log-abs`,
/// `mobius` (the Pitman-Williams map with `a = b = 0` and one term `(1, 1)`),
/// and `pw:A,B[,AN:BN…]` for arbitrary Pitman-Williams parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MapChoice {
    Boole,
    SimpsonNewton,
    SechMap,
    LogAbs,
    Pw {
        a: f64,
        b: f64,
        terms: Vec<(f64, f64)>,
    },
}

impl MapChoice {
    pub fn mobius() -> Self {
        MapChoice::Pw {
            a: 0.0,
            b: 0.0,
            terms: vec![(1.0, 1.0)],
        }
    }

    /// The map as an orbit generator, if it preserves the Cauchy law.
    pub fn orbit_map(&self) -> Option<OrbitMap> {
        match self {
            MapChoice::Boole => Some(OrbitMap::Boole),
            MapChoice::SimpsonNewton => Some(OrbitMap::SimpsonNewton),
            MapChoice::Pw { a, b, terms } => {
                Some(OrbitMap::Custom(PwParams::new(*a, *b, terms.clone())))
            }
            MapChoice::SechMap | MapChoice::LogAbs => None,
        }
    }
}

impl fmt::Display for MapChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapChoice::Boole => f.write_str("boole"),
            MapChoice::SimpsonNewton => f.write_str("simpson-newton"),
            MapChoice::SechMap => f.write_str("sech-map"),
            MapChoice::LogAbs => f.write_str("log-abs"),
            MapChoice::Pw { a, b, terms } => {
                write!(f, "pw:{a},{b}")?;
                for (a_n, b_n) in terms {
                    write!(f, ",{a_n}:{b_n}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for MapChoice {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| ConfigError::BadMap(s.to_string(), why.to_string());
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| bad(&format!("'{t}' is not a number")))
        };
        match s {
            "boole" => return Ok(MapChoice::Boole),
            "simpson-newton" => return Ok(MapChoice::SimpsonNewton),
            "sech-map" => return Ok(MapChoice::SechMap),
            "log-abs" => return Ok(MapChoice::LogAbs),
            "mobius" => return Ok(MapChoice::mobius()),
            _ => {}
        }
        let body = s.strip_prefix("pw:").ok_or_else(|| bad("unknown map"))?;
        let mut parts = body.split(',');
        let a = num(parts.next().unwrap_or(""))?;
        let b = num(parts.next().ok_or_else(|| bad("expected pw:A,B[,AN:BN…]"))?)?;
        let terms = parts
            .map(|t| {
                let (a_n, b_n) = t
                    .split_once(':')
                    .ok_or_else(|| bad(&format!("term '{t}' must be AN:BN")))?;
                Ok((num(a_n)?, num(b_n)?))
            })
            .collect::<Result<_, ConfigError>>()?;
        Ok(MapChoice::Pw { a, b, terms })
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    /// Sample count, or orbit length for `orbit`.
    pub n: usize,
    /// Number of random streams the workload is split over.
    pub workers: usize,
    pub domain: Option<Domain>,
    pub map: Option<MapChoice>,
    pub x0: Option<f64>,
    pub observable: Option<ObservableChoice>,
    pub dt: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub dump_samples: bool,
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_DT: f64 = 1e-3;
pub const DEFAULT_X0: f64 = 2.0;

impl ExperimentConfig {
    /// Defaults: seed 1, one worker, 10⁶ orbit points or 10⁵ samples.
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            seed: DEFAULT_SEED,
            n: Self::default_n(experiment),
            workers: 1,
            domain: None,
            map: None,
            x0: None,
            observable: None,
            dt: None,
            format: Format::Json,
            out: None,
            dump_samples: false,
        }
    }

    pub fn default_n(experiment: Experiment) -> usize {
        match experiment {
            Experiment::Orbit => 1_000_000,
            _ => 100_000,
        }
    }

    /// Checks every selector and fills in experiment-specific defaults.
    pub fn resolve(mut self) -> Result<Self, ConfigError> {
        let experiment = self.experiment;
        let unused = |flag| ConfigError::Unused { flag, experiment };
        let wrong_map = |m: &MapChoice| ConfigError::WrongMap {
            map: m.to_string(),
            experiment,
        };
        if self.n == 0 {
            return Err(ConfigError::Invalid("--n must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(ConfigError::Invalid("--workers must be at least 1".into()));
        }
        if experiment != Experiment::ExitSim && self.domain.is_some() {
            return Err(unused("domain"));
        }
        if experiment != Experiment::Orbit && self.x0.is_some() {
            return Err(unused("x0"));
        }
        if experiment != Experiment::Orbit && self.observable.is_some() {
            return Err(unused("observable"));
        }
        if experiment != Experiment::ExitSim && self.dt.is_some() {
            return Err(unused("dt"));
        }
        match experiment {
            Experiment::ExitSim => {
                if self.map.is_some() {
                    return Err(unused("map"));
                }
                let domain = *self.domain.get_or_insert(Domain::UpperHalfPlane);
                match (domain, self.dt) {
                    (Domain::Strip, None) => self.dt = Some(DEFAULT_DT),
                    (Domain::Strip, Some(dt)) if !(dt > 0.0 && dt <= 1e-2) => {
                        return Err(ConfigError::Invalid(format!(
                            "--dt must lie in (0, 0.01], got {dt}"
                        )))
                    }
                    (Domain::Strip, Some(_)) => {}
                    (_, Some(_)) => {
                        return Err(ConfigError::Invalid(
                            "--dt applies only to the strip; half-planes are sampled exactly"
                                .into(),
                        ))
                    }
                    (_, None) => {}
                }
            }
            Experiment::Orbit => {
                let map = self.map.get_or_insert(MapChoice::Boole);
                if map.orbit_map().is_none() {
                    return Err(wrong_map(map));
                }
                let x0 = *self.x0.get_or_insert(DEFAULT_X0);
                if !x0.is_finite() {
                    return Err(ConfigError::Invalid(format!("--x0 must be finite, got {x0}")));
                }
            }
            Experiment::InvarianceCheck => {
                let map = self.map.get_or_insert(MapChoice::Boole);
                if *map == MapChoice::LogAbs {
                    return Err(wrong_map(map));
                }
            }
            Experiment::PwCheck => {
                if let Some(map) = &self.map {
                    if !matches!(map, MapChoice::Pw { .. } | MapChoice::Boole) {
                        return Err(wrong_map(map));
                    }
                }
            }
            Experiment::CfCheck => {
                if self.map.is_some() {
                    return Err(unused("map"));
                }
            }
        }
        // pw-check reports bad parameters as a failed gate; everything else
        // needs a usable map before sampling.
        if experiment != Experiment::PwCheck {
            if let Some(MapChoice::Pw { a, b, terms }) = &self.map {
                pw_validate(&PwParams::new(*a, *b, terms.clone())).map_err(|v| {
                    ConfigError::Invalid(format!("invalid Pitman-Williams parameters: {v:?}"))
                })?;
            }
        }
        Ok(self)
    }
}
