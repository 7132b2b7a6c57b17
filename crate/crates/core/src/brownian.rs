//! Exit points of planar Brownian motion from a half-plane or a vertical
//! strip.
//!
//! Half-planes have an exact sampler built from the first-passage law of the
//! normal coordinate. The strip (and, for comparison, any of the domains) can
//! be simulated with an Euler scheme whose per-step Brownian-bridge crossing
//! test removes the leading-order bias of checking the boundary only at grid
//! times.

use num_complex::Complex64;
use thiserror::Error;

use crate::maps::ComplexPoint;
use crate::samplers::RandomSource;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExitError {
    #[error("start point {start} lies outside the domain")]
    StartOutside { start: ComplexPoint },
    #[error("strip half-width must be positive and finite, got {0}")]
    BadHalfWidth(f64),
    #[error("the exact sampler needs a half-plane, got {0:?}")]
    NotAHalfPlane(DomainKind),
    #[error("time step {0} is outside (0, 0.01]")]
    BadStep(f64),
    #[error("no exit after {steps} steps")]
    MaxStepsExceeded { steps: u64 },
    #[error("exit sample is not from a strip")]
    WrongDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    /// `{Im z > 0}`
    UpperHalfPlane,
    /// `{−w < Re z < w}`
    Strip,
    /// `{Re z > 0}`
    RightHalfPlane,
}

/// A domain together with the Brownian starting point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    kind: DomainKind,
    half_width: f64,
    start: ComplexPoint,
}

/// A boundary line `{coord = offset}` with the domain on the side where
/// `side·(coord − offset) > 0`. `coord` is `Re` for vertical lines and `Im`
/// otherwise.
#[derive(Debug, Clone, Copy)]
struct Line {
    vertical: bool,
    offset: f64,
    side: f64,
}

impl Line {
    fn distance(&self, p: Complex64) -> f64 {
        let coord = if self.vertical { p.re } else { p.im };
        self.side * (coord - self.offset)
    }
}

impl DomainSpec {
    /// Upper half-plane started from `i`.
    pub fn upper_half_plane() -> Self {
        DomainSpec {
            kind: DomainKind::UpperHalfPlane,
            half_width: 1.0,
            start: Complex64::new(0.0, 1.0),
        }
    }

    /// Unit-half-width strip started from 0.
    pub fn strip() -> Self {
        DomainSpec {
            kind: DomainKind::Strip,
            half_width: 1.0,
            start: Complex64::new(0.0, 0.0),
        }
    }

    /// Right half-plane started from 1.
    pub fn right_half_plane() -> Self {
        DomainSpec {
            kind: DomainKind::RightHalfPlane,
            half_width: 1.0,
            start: Complex64::new(1.0, 0.0),
        }
    }

    pub fn default_for(kind: DomainKind) -> Self {
        match kind {
            DomainKind::UpperHalfPlane => Self::upper_half_plane(),
            DomainKind::Strip => Self::strip(),
            DomainKind::RightHalfPlane => Self::right_half_plane(),
        }
    }

    /// Builds a domain, rejecting start points outside its closure. A start
    /// point on the boundary is accepted and exits immediately.
    pub fn new(kind: DomainKind, half_width: f64, start: ComplexPoint) -> Result<Self, ExitError> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(ExitError::BadHalfWidth(half_width));
        }
        let spec = DomainSpec {
            kind,
            half_width,
            start,
        };
        let finite = start.re.is_finite() && start.im.is_finite();
        if !finite || spec.lines().iter().any(|l| l.distance(start) < 0.0) {
            return Err(ExitError::StartOutside { start });
        }
        Ok(spec)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn start(&self) -> ComplexPoint {
        self.start
    }

    fn lines(&self) -> Vec<Line> {
        match self.kind {
            DomainKind::UpperHalfPlane => vec![Line {
                vertical: false,
                offset: 0.0,
                side: 1.0,
            }],
            DomainKind::RightHalfPlane => vec![Line {
                vertical: true,
                offset: 0.0,
                side: 1.0,
            }],
            DomainKind::Strip => vec![
                Line {
                    vertical: true,
                    offset: -self.half_width,
                    side: 1.0,
                },
                Line {
                    vertical: true,
                    offset: self.half_width,
                    side: -1.0,
                },
            ],
        }
    }

    /// Whether `p` lies on the boundary, within `tol`.
    pub fn on_boundary(&self, p: ComplexPoint, tol: f64) -> bool {
        self.lines().iter().any(|l| l.distance(p).abs() <= tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitMethod {
    Exact,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitSample {
    pub exit_point: ComplexPoint,
    pub domain: DomainSpec,
    pub method: ExitMethod,
    /// Time step, for Euler samples only.
    pub step_size: Option<f64>,
    pub steps_taken: u64,
}

/// Default step cap for the Euler scheme: `⌈50/dt⌉`. The strip exit time has
/// an exponential tail, so paths surviving that long have probability far
/// below 1e−6.
pub fn default_max_steps(dt: f64) -> u64 {
    (50.0 / dt).ceil() as u64
}

/// Exit point of a half-plane from the two normals of the hitting-time
/// decomposition: the boundary is reached at `T = d²/z1²`, by which time the
/// tangential coordinate has moved by `√T·z2`.
pub fn exit_from_normals(domain: &DomainSpec, z1: f64, z2: f64) -> Result<ComplexPoint, ExitError> {
    let start = domain.start;
    match domain.kind {
        DomainKind::UpperHalfPlane => {
            let d = start.im;
            Ok(Complex64::new(start.re + d * z2 / z1.abs(), 0.0))
        }
        DomainKind::RightHalfPlane => {
            let d = start.re;
            Ok(Complex64::new(0.0, start.im + d * z2 / z1.abs()))
        }
        DomainKind::Strip => Err(ExitError::NotAHalfPlane(domain.kind)),
    }
}

/// Exact half-plane exit sample.
pub fn sample_exit_exact(domain: &DomainSpec, rng: &mut RandomSource) -> Result<ExitSample, ExitError> {
    if domain.kind == DomainKind::Strip {
        return Err(ExitError::NotAHalfPlane(domain.kind));
    }
    let exit_point = if domain.on_boundary(domain.start, 0.0) {
        domain.start
    } else {
        let mut z1 = rng.standard_normal();
        while z1 == 0.0 {
            z1 = rng.standard_normal();
        }
        let z2 = rng.standard_normal();
        exit_from_normals(domain, z1, z2)?
    };
    Ok(ExitSample {
        exit_point,
        domain: *domain,
        method: ExitMethod::Exact,
        step_size: None,
        steps_taken: 0,
    })
}

/// Crossing probabilities `exp(−x)` with `x` above this are below 5e−18,
/// under the 2⁻⁵³ resolution of [`RandomSource::uniform_open`], and are
/// treated as zero.
const NEGLIGIBLE_EXPONENT: f64 = 40.0;

/// Euler simulation of the exit point with Brownian-bridge crossing
/// correction.
///
/// Each step adds an `N(0, dt)` increment to the coordinate normal to the
/// boundary lines. A step that lands outside exits where the segment meets
/// the boundary. A step between interior points exits across a boundary line
/// with probability `exp(−2·d₀·d₁/dt)` (`d₀`, `d₁` the distances to that
/// line), lines being tested nearest first; the exit point is then the
/// midpoint of the step projected onto that line.
///
/// All boundary lines of a [`DomainSpec`] are parallel, so the tangential
/// coordinate never affects the exit time. Its `k − 1` full-step increments
/// are drawn as a single `N(0, (k − 1)·dt)` variate once the exit step `k`
/// is known, which has the same law as drawing them one by one.
pub fn sample_exit_euler(
    domain: &DomainSpec,
    dt: f64,
    rng: &mut RandomSource,
    max_steps: u64,
) -> Result<ExitSample, ExitError> {
    if !(dt > 0.0 && dt <= 1e-2) {
        return Err(ExitError::BadStep(dt));
    }
    let lines = domain.lines();
    let vertical = lines[0].vertical;
    let (normal0, tangent0) = if vertical {
        (domain.start.re, domain.start.im)
    } else {
        (domain.start.im, domain.start.re)
    };
    let point = |normal: f64, tangent: f64| {
        if vertical {
            Complex64::new(normal, tangent)
        } else {
            Complex64::new(tangent, normal)
        }
    };
    let sample = |exit_point, steps_taken| ExitSample {
        exit_point,
        domain: *domain,
        method: ExitMethod::Euler,
        step_size: Some(dt),
        steps_taken,
    };
    // Signed distance to a line, positive inside.
    let dist = |line: &Line, normal: f64| line.side * (normal - line.offset);

    if let Some(line) = lines.iter().find(|l| dist(l, normal0) <= 0.0) {
        return Ok(sample(point(line.offset, tangent0), 0));
    }
    let sd = dt.sqrt();
    // Tangential position at the start of step `step`, then the fraction of
    // that step's tangential increment travelled before exiting.
    let tangent_at_exit = |rng: &mut RandomSource, step: u64, fraction: f64| {
        let before = tangent0 + sd * ((step - 1) as f64).sqrt() * rng.standard_normal();
        before + fraction * sd * rng.standard_normal()
    };

    let mut p = normal0;
    let mut probs = [0.0f64; 2];
    for step in 1..=max_steps {
        let q = p + sd * rng.standard_normal();

        // Direct exit: first boundary met along the segment p → q.
        let mut hit: Option<(f64, &Line)> = None;
        for line in &lines {
            let d1 = dist(line, q);
            if d1 <= 0.0 {
                let d0 = dist(line, p);
                let t = d0 / (d0 - d1);
                if hit.is_none_or(|(best, _)| t < best) {
                    hit = Some((t, line));
                }
            }
        }
        if let Some((t, line)) = hit {
            let tangent = tangent_at_exit(rng, step, t);
            return Ok(sample(point(line.offset, tangent), step));
        }

        // Bridge crossing between two interior points.
        let mut any = false;
        for (k, line) in lines.iter().enumerate() {
            let x = 2.0 * dist(line, p) * dist(line, q) / dt;
            probs[k] = if x > NEGLIGIBLE_EXPONENT { 0.0 } else { (-x).exp() };
            any |= probs[k] > 0.0;
        }
        if any {
            let order: &[usize] = match lines.len() {
                1 => &[0],
                _ if dist(&lines[0], p) <= dist(&lines[1], p) => &[0, 1],
                _ => &[1, 0],
            };
            // One uniform decides all lines: after rejecting line k with
            // probability 1 − p_k, (u − p_k)/(1 − p_k) is again uniform.
            let mut u = rng.uniform_open();
            for &k in order {
                if u < probs[k] {
                    let tangent = tangent_at_exit(rng, step, 0.5);
                    return Ok(sample(point(lines[k].offset, tangent), step));
                }
                u = (u - probs[k]) / (1.0 - probs[k]);
            }
        }
        p = q;
    }
    Err(ExitError::MaxStepsExceeded { steps: max_steps })
}

/// Side hit (−1 or +1) and height of a strip exit.
pub fn strip_exit_components(s: &ExitSample) -> Result<(i8, f64), ExitError> {
    if s.domain.kind != DomainKind::Strip {
        return Err(ExitError::WrongDomain);
    }
    let side = if s.exit_point.re > 0.0 { 1 } else { -1 };
    Ok((side, s.exit_point.im))
}
