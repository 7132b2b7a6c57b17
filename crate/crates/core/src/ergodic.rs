//! Orbits of Cauchy-preserving maps of the real line and their Birkhoff
//! averages.
//!
//! Starting points whose orbit lands on a pole form a countable set. A
//! floating-point orbit can still land there (e.g. `x0 = 1` under the Boole
//! map), and when it does the run stops and says so rather than skipping the
//! value.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::maps::{boole, is_simpson_pole, simpson_newton, ExtendedReal, MapError, PwMap, PwParams};
use crate::stats::EmpiricalDistribution;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrbitError {
    #[error("invalid starting point {x0}: {reason}")]
    InvalidStart { x0: f64, reason: &'static str },
    #[error("invalid orbit configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("orbit terminated at step {}: {}", .0.step, .0.reason)]
    TerminatedEarly(EarlyTermination),
}

/// The map being iterated.
#[derive(Debug, Clone, PartialEq)]
pub enum OrbitMap {
    /// `x ↦ ½(x − 1/x)`, Newton's method for `x² + 1`.
    Boole,
    /// `x ↦ (x³ − 3x)/(3x² − 1)`.
    SimpsonNewton,
    /// A normalized Pitman-Williams map.
    Custom(PwParams),
}

impl fmt::Display for OrbitMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitMap::Boole => f.write_str("boole"),
            OrbitMap::SimpsonNewton => f.write_str("simpson-newton"),
            OrbitMap::Custom(p) => write!(f, "pw({}, {}, {:?})", p.a, p.b, p.terms),
        }
    }
}

enum Stepper {
    Boole,
    SimpsonNewton,
    Pw(PwMap),
}

impl Stepper {
    fn new(map: &OrbitMap) -> Result<Self, MapError> {
        Ok(match map {
            OrbitMap::Boole => Stepper::Boole,
            OrbitMap::SimpsonNewton => Stepper::SimpsonNewton,
            OrbitMap::Custom(p) => Stepper::Pw(PwMap::new(p.clone())?),
        })
    }

    fn step(&self, x: f64) -> ExtendedReal {
        let x = ExtendedReal::Finite(x);
        match self {
            Stepper::Boole => boole(x),
            Stepper::SimpsonNewton => simpson_newton(x),
            Stepper::Pw(m) => m.eval(x),
        }
    }

    /// Distance from `x` to the nearest real pole.
    fn pole_distance(&self, x: f64) -> f64 {
        match self {
            Stepper::Boole => x.abs(),
            Stepper::SimpsonNewton => (x.abs() - 1.0 / 3f64.sqrt()).abs(),
            Stepper::Pw(m) => m
                .params()
                .poles()
                .map(|p| (x - p).abs())
                .fold(f64::INFINITY, f64::min),
        }
    }

    fn is_pole(&self, x: f64) -> bool {
        match self {
            Stepper::Boole => x == 0.0,
            Stepper::SimpsonNewton => is_simpson_pole(x),
            Stepper::Pw(m) => m.is_pole(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitConfig {
    pub map: OrbitMap,
    pub x0: f64,
    /// Number of orbit points `x_0, …, x_{length−1}`.
    pub length: usize,
    /// Iterates with magnitude at or above this stop the orbit.
    pub blowup_guard: f64,
    /// An iterate within this distance of a pole stops the orbit at the
    /// following step.
    pub pole_guard: f64,
}

impl OrbitConfig {
    pub const DEFAULT_BLOWUP_GUARD: f64 = 1e300;
    pub const DEFAULT_POLE_GUARD: f64 = 1e-300;

    pub fn new(map: OrbitMap, x0: f64, length: usize) -> Self {
        OrbitConfig {
            map,
            x0,
            length,
            blowup_guard: Self::DEFAULT_BLOWUP_GUARD,
            pole_guard: Self::DEFAULT_POLE_GUARD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    /// The orbit reached a pole, i.e. the point at infinity.
    Pole,
    /// The orbit exceeded the blow-up guard.
    Blowup,
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TerminationReason::Pole => "pole",
            TerminationReason::Blowup => "blowup",
        })
    }
}

/// Where and why a guard stopped an orbit. `step` is the index of the
/// iterate that could not be recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EarlyTermination {
    pub step: usize,
    pub reason: TerminationReason,
}

/// A raw orbit in iteration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<f64>,
    pub terminated_early: Option<EarlyTermination>,
}

impl Trajectory {
    fn complete(self) -> Result<Vec<f64>, OrbitError> {
        match self.terminated_early {
            Some(t) => Err(OrbitError::TerminatedEarly(t)),
            None => Ok(self.points),
        }
    }
}

/// A named observable with a closed-form Cauchy space average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observable {
    /// `1/(1 + t²)`, Cauchy mean ½.
    Lorentzian,
    /// `1{0 ≤ t ≤ 1}`, Cauchy mean ¼.
    UnitInterval,
}

impl Observable {
    pub const ALL: [Observable; 2] = [Observable::Lorentzian, Observable::UnitInterval];

    pub fn eval(self, t: f64) -> f64 {
        match self {
            Observable::Lorentzian => 1.0 / (1.0 + t * t),
            Observable::UnitInterval => f64::from(u8::from((0.0..=1.0).contains(&t))),
        }
    }

    /// `∫ f(t)/(π(1 + t²)) dt`.
    pub fn cauchy_mean(self) -> f64 {
        match self {
            Observable::Lorentzian => 0.5,
            Observable::UnitInterval => 0.25,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Observable::Lorentzian => "lorentzian",
            Observable::UnitInterval => "unit-interval",
        }
    }
}

impl std::str::FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown observable '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitResult {
    pub samples: EmpiricalDistribution,
    /// Birkhoff average of each built-in [`Observable`] over the recorded
    /// points, keyed by name.
    pub birkhoff_values: BTreeMap<&'static str, f64>,
    pub terminated_early: Option<EarlyTermination>,
}

fn validate(cfg: &OrbitConfig, stepper: &Stepper) -> Result<(), OrbitError> {
    if cfg.length == 0 {
        return Err(OrbitError::InvalidConfig("length must be at least 1"));
    }
    if !(cfg.blowup_guard > 0.0 && cfg.pole_guard > 0.0) {
        return Err(OrbitError::InvalidConfig("guards must be positive"));
    }
    if !cfg.x0.is_finite() {
        return Err(OrbitError::InvalidStart {
            x0: cfg.x0,
            reason: "not finite",
        });
    }
    if stepper.is_pole(cfg.x0) {
        return Err(OrbitError::InvalidStart {
            x0: cfg.x0,
            reason: "starting point is a pole of the map",
        });
    }
    Ok(())
}

/// Iterates the map from `x0`, keeping every point in order.
pub fn trajectory(cfg: &OrbitConfig) -> Result<Trajectory, OrbitError> {
    let stepper = Stepper::new(&cfg.map)?;
    validate(cfg, &stepper)?;
    let mut points = Vec::with_capacity(cfg.length);
    points.push(cfg.x0);
    let mut x = cfg.x0;
    for step in 1..cfg.length {
        let stop = |reason| {
            Some(EarlyTermination { step, reason })
        };
        let halt = if stepper.pole_distance(x) <= cfg.pole_guard {
            stop(TerminationReason::Pole)
        } else {
            match stepper.step(x) {
                ExtendedReal::Infinity => stop(TerminationReason::Pole),
                ExtendedReal::Finite(y) if y.abs() >= cfg.blowup_guard => {
                    stop(TerminationReason::Blowup)
                }
                ExtendedReal::Finite(y) => {
                    x = y;
                    None
                }
            }
        };
        if halt.is_some() {
            return Ok(Trajectory {
                points,
                terminated_early: halt,
            });
        }
        points.push(x);
    }
    Ok(Trajectory {
        points,
        terminated_early: None,
    })
}

fn mean_of<F: Fn(f64) -> f64>(points: &[f64], f: F) -> f64 {
    points.iter().map(|&t| f(t)).sum::<f64>() / points.len() as f64
}

/// Generates the orbit and summarises it. Early termination is reported in
/// the result, not as an error.
pub fn orbit(cfg: &OrbitConfig) -> Result<OrbitResult, OrbitError> {
    let traj = trajectory(cfg)?;
    let birkhoff_values = Observable::ALL
        .into_iter()
        .map(|o| (o.name(), mean_of(&traj.points, |t| o.eval(t))))
        .collect();
    Ok(OrbitResult {
        samples: EmpiricalDistribution::new(traj.points)
            .expect("finite orbit points are never NaN"),
        birkhoff_values,
        terminated_early: traj.terminated_early,
    })
}

/// `(1/n)·Σ_{k<n} f(x_k)` along the orbit.
pub fn birkhoff_average<F>(cfg: &OrbitConfig, observable: F) -> Result<f64, OrbitError>
where
    F: Fn(f64) -> f64,
{
    let points = trajectory(cfg)?.complete()?;
    Ok(mean_of(&points, observable))
}

/// Empirical distribution of the orbit points.
pub fn orbit_empirical_law(cfg: &OrbitConfig) -> Result<EmpiricalDistribution, OrbitError> {
    let points = trajectory(cfg)?.complete()?;
    Ok(EmpiricalDistribution::new(points).expect("finite orbit points are never NaN"))
}
