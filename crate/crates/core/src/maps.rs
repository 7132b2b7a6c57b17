//! Analytic self-maps of the upper half-plane and the strip, with their
//! conjugating Möbius maps.
//!
//! Real-line overloads work on [`ExtendedReal`], so that a pole maps to the
//! point at infinity instead of producing a NaN or a signed infinity that
//! would poison later arithmetic. Complex overloads return [`MapError::Pole`]
//! when the argument falls within [`POLE_TOLERANCE`] of a pole.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, LN_2};
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// Complex arguments closer than this to a pole are rejected.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Allowed deviation of `|w|` from 1 for maps defined on the unit circle.
pub const CIRCLE_TOLERANCE: f64 = 1e-9;

/// Upper bound on the number of `(a_n, b_n)` terms accepted in [`PwParams`].
pub const MAX_PW_TERMS: usize = 4096;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `1/√3`, the positive pole of the Simpson-Newton map.
const INV_SQRT_3: f64 = 0.577_350_269_189_625_8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("{map} has a pole at {at}")]
    Pole { map: &'static str, at: ComplexPoint },
    #[error("{map} is singular at 0")]
    Singular { map: &'static str },
    #[error("argument has modulus {modulus}, expected a point on the unit circle")]
    OffCircle { modulus: f64 },
    #[error("argument has modulus {modulus}, expected a point of the closed unit disk")]
    OutsideDisk { modulus: f64 },
    #[error("imaginary part {im} is outside the strip |Im z| < π/2")]
    OutOfStrip { im: f64 },
    #[error("invalid Pitman-Williams parameters: {0:?}")]
    InvalidParams(Vec<PwViolation>),
}

/// A point of the extended real line ℝ ∪ {∞}.
///
/// The finite variant never carries a NaN or an infinity; use
/// [`ExtendedReal::from`] to fold IEEE infinities into [`ExtendedReal::Infinity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    pub fn value(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinity => None,
        }
    }
}

impl From<f64> for ExtendedReal {
    /// Panics on NaN, which has no place on the extended line.
    fn from(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN is not a point of the extended real line");
        if x.is_finite() {
            ExtendedReal::Finite(x)
        } else {
            ExtendedReal::Infinity
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinity => f.write_str("∞"),
        }
    }
}

fn near(z: Complex64, pole: Complex64) -> bool {
    (z - pole).norm() <= POLE_TOLERANCE
}

/// Boole transformation `x ↦ ½(x − 1/x)` on the extended real line.
pub fn boole(x: ExtendedReal) -> ExtendedReal {
    match x {
        ExtendedReal::Infinity => ExtendedReal::Infinity,
        ExtendedReal::Finite(0.0) => ExtendedReal::Infinity,
        ExtendedReal::Finite(x) => ExtendedReal::from(0.5 * (x - 1.0 / x)),
    }
}

/// Boole transformation on the complex plane. Maps the upper half-plane into
/// itself and fixes `i`.
pub fn boole_c(z: ComplexPoint) -> Result<ComplexPoint, MapError> {
    if near(z, Complex64::new(0.0, 0.0)) {
        return Err(MapError::Pole { map: "boole", at: z });
    }
    Ok(0.5 * (z - z.inv()))
}

/// Simpson-Newton map `x ↦ (x³ − 3x)/(3x² − 1)`.
///
/// The poles `±1/√3` are irrational, so arguments within [`POLE_TOLERANCE`]
/// of either one are sent to infinity.
pub fn simpson_newton(x: ExtendedReal) -> ExtendedReal {
    let x = match x {
        ExtendedReal::Infinity => return ExtendedReal::Infinity,
        ExtendedReal::Finite(x) => x,
    };
    if is_simpson_pole(x) {
        return ExtendedReal::Infinity;
    }
    let y = if x.abs() > 1.0 {
        // Divide through by x² so that x³ cannot overflow.
        let r = 1.0 / (x * x);
        x * (1.0 - 3.0 * r) / (3.0 - r)
    } else {
        x * (x * x - 3.0) / (3.0 * x * x - 1.0)
    };
    ExtendedReal::from(y)
}

pub(crate) fn is_simpson_pole(x: f64) -> bool {
    (x.abs() - INV_SQRT_3).abs() <= POLE_TOLERANCE
}

/// Complex Simpson-Newton map; fixes `±i`.
pub fn simpson_newton_c(z: ComplexPoint) -> Result<ComplexPoint, MapError> {
    for pole in [INV_SQRT_3, -INV_SQRT_3] {
        if near(z, Complex64::new(pole, 0.0)) {
            return Err(MapError::Pole { map: "simpson-newton", at: z });
        }
    }
    let z2 = z * z;
    Ok(z * (z2 - 3.0) / (3.0 * z2 - 1.0))
}

/// Cayley transform `F(z) = (i − z)/(i + z)`, upper half-plane → unit disk.
pub fn cayley(z: ComplexPoint) -> Result<ComplexPoint, MapError> {
    if near(z, -I) {
        return Err(MapError::Pole { map: "cayley", at: z });
    }
    Ok((I - z) / (I + z))
}

/// Inverse Cayley transform `G(w) = i(1 − w)/(1 + w)`.
pub fn inverse_cayley(w: ComplexPoint) -> Result<ComplexPoint, MapError> {
    if near(w, Complex64::new(-1.0, 0.0)) {
        return Err(MapError::Pole { map: "inverse-cayley", at: w });
    }
    Ok(I * (1.0 - w) / (1.0 + w))
}

/// Signed doubling map `w ↦ −w²` on the unit circle.
pub fn doubling(w: ComplexPoint) -> Result<ComplexPoint, MapError> {
    let modulus = w.norm();
    if (modulus - 1.0).abs() > CIRCLE_TOLERANCE {
        return Err(MapError::OffCircle { modulus });
    }
    Ok(-(w * w))
}

/// `|F(φ(G(z))) − (−z²)|`: how far the Cayley-conjugated Boole map is from
/// the signed doubling map at `z`.
pub fn conjugacy_defect(z: ComplexPoint) -> Result<f64, MapError> {
    let modulus = z.norm();
    if modulus > 1.0 + CIRCLE_TOLERANCE {
        return Err(MapError::OutsideDisk { modulus });
    }
    let lifted = inverse_cayley(z)?;
    let image = cayley(boole_c(lifted)?)?;
    Ok((image + z * z).norm())
}

/// Why a [`PwParams`] value fails to define a Cauchy-preserving map.
#[derive(Debug, Clone, PartialEq)]
pub enum PwViolation {
    /// `a_n` is zero for the term at this index.
    ZeroPole { index: usize },
    /// The nonzero constants among `a, b, b_1, …` do not share one sign.
    MixedSigns,
    /// Every constant is zero, so the map is constant.
    AllZero,
    /// `a + b + Σ b_n/(a_n² + 1)` vanishes.
    ZeroNormalizer,
    NonFinite,
    TooManyTerms { len: usize },
}

/// Constants of the Pitman-Williams family
/// `f(z) = az − b/z + Σ [b_n/(a_n − z) − a_n b_n/(a_n² + 1)]`, with the
/// terms given as `(a_n, b_n)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PwParams {
    pub a: f64,
    pub b: f64,
    pub terms: Vec<(f64, f64)>,
}

impl PwParams {
    pub fn new(a: f64, b: f64, terms: Vec<(f64, f64)>) -> Self {
        PwParams { a, b, terms }
    }

    fn constants(&self) -> impl Iterator<Item = f64> + '_ {
        [self.a, self.b]
            .into_iter()
            .chain(self.terms.iter().map(|&(_, b_n)| b_n))
    }

    /// Common sign (+1 or −1) of the nonzero constants, if there is one.
    pub fn sign(&self) -> Option<f64> {
        let mut sign = None;
        for c in self.constants().filter(|&c| c != 0.0) {
            let s = c.signum();
            match sign {
                None => sign = Some(s),
                Some(prev) if prev != s => return None,
                _ => {}
            }
        }
        sign
    }

    fn raw_normalizer(&self) -> f64 {
        self.a
            + self.b
            + self
                .terms
                .iter()
                .map(|&(a_n, b_n)| b_n / (a_n * a_n + 1.0))
                .sum::<f64>()
    }

    /// Real poles of `f`, i.e. `0` when `b ≠ 0` and each `a_n` with `b_n ≠ 0`.
    pub fn poles(&self) -> impl Iterator<Item = f64> + '_ {
        let origin = (self.b != 0.0).then_some(0.0);
        origin.into_iter().chain(
            self.terms
                .iter()
                .filter(|&&(_, b_n)| b_n != 0.0)
                .map(|&(a_n, _)| a_n),
        )
    }
}

/// Checks every condition a [`PwParams`] must satisfy, reporting all failures.
pub fn pw_validate(p: &PwParams) -> Result<(), Vec<PwViolation>> {
    let mut violations = Vec::new();
    if p.terms.len() > MAX_PW_TERMS {
        violations.push(PwViolation::TooManyTerms { len: p.terms.len() });
    }
    let all_finite = p.a.is_finite()
        && p.b.is_finite()
        && p.terms.iter().all(|&(x, y)| x.is_finite() && y.is_finite());
    if !all_finite {
        violations.push(PwViolation::NonFinite);
    }
    for (index, &(a_n, _)) in p.terms.iter().enumerate() {
        if a_n == 0.0 {
            violations.push(PwViolation::ZeroPole { index });
        }
    }
    if p.constants().all(|c| c == 0.0) {
        violations.push(PwViolation::AllZero);
    } else if p.sign().is_none() {
        violations.push(PwViolation::MixedSigns);
    } else if all_finite && p.raw_normalizer() == 0.0 {
        violations.push(PwViolation::ZeroNormalizer);
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// `c = a + b + Σ b_n/(a_n² + 1)`, the scale that makes `f/c` fix `i`.
pub fn pw_normalizer(p: &PwParams) -> Result<f64, MapError> {
    pw_validate(p).map_err(MapError::InvalidParams)?;
    Ok(p.raw_normalizer())
}

/// A validated, normalized Pitman-Williams map `z ↦ f(z)/c`.
#[derive(Debug, Clone, PartialEq)]
pub struct PwMap {
    params: PwParams,
    normalizer: f64,
    /// `f(∞)/c` when `a = 0`.
    limit_at_infinity: Option<f64>,
}

impl PwMap {
    pub fn new(params: PwParams) -> Result<Self, MapError> {
        let normalizer = pw_normalizer(&params)?;
        let limit_at_infinity = (params.a == 0.0).then(|| {
            -params
                .terms
                .iter()
                .map(|&(a_n, b_n)| a_n * b_n / (a_n * a_n + 1.0))
                .sum::<f64>()
                / normalizer
        });
        Ok(PwMap {
            params,
            normalizer,
            limit_at_infinity,
        })
    }

    pub fn params(&self) -> &PwParams {
        &self.params
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn is_pole(&self, x: f64) -> bool {
        self.params.poles().any(|p| p == x)
    }

    pub fn eval(&self, x: ExtendedReal) -> ExtendedReal {
        let x = match x {
            ExtendedReal::Infinity => {
                return match self.limit_at_infinity {
                    Some(v) => ExtendedReal::from(v),
                    None => ExtendedReal::Infinity,
                }
            }
            ExtendedReal::Finite(x) => x,
        };
        if self.is_pole(x) {
            return ExtendedReal::Infinity;
        }
        let p = &self.params;
        let mut f = p.a * x;
        if p.b != 0.0 {
            f -= p.b / x;
        }
        for &(a_n, b_n) in &p.terms {
            f += b_n / (a_n - x) - a_n * b_n / (a_n * a_n + 1.0);
        }
        ExtendedReal::from(f / self.normalizer)
    }

    pub fn eval_c(&self, z: ComplexPoint) -> Result<ComplexPoint, MapError> {
        if let Some(pole) = self
            .params
            .poles()
            .find(|&pole| near(z, Complex64::new(pole, 0.0)))
        {
            return Err(MapError::Pole {
                map: "pitman-williams",
                at: Complex64::new(pole, 0.0),
            });
        }
        let p = &self.params;
        let mut f = p.a * z;
        if p.b != 0.0 {
            f -= p.b / z;
        }
        for &(a_n, b_n) in &p.terms {
            f += b_n / (a_n - z) - a_n * b_n / (a_n * a_n + 1.0);
        }
        Ok(f / self.normalizer)
    }
}

/// Normalized Pitman-Williams map on the extended real line.
pub fn pw_eval(p: &PwParams, x: ExtendedReal) -> Result<ExtendedReal, MapError> {
    Ok(PwMap::new(p.clone())?.eval(x))
}

/// Normalized Pitman-Williams map on the complex plane.
pub fn pw_eval_c(p: &PwParams, z: ComplexPoint) -> Result<ComplexPoint, MapError> {
    PwMap::new(p.clone())?.eval_c(z)
}

/// `Log((e^z + e^{−z})/2)`, a conformal automorphism of the strip
/// `|Im z| < π/2` that preserves the real axis.
pub fn strip_automorphism(z: ComplexPoint) -> Result<ComplexPoint, MapError> {
    if !(z.im.abs() < FRAC_PI_2) || !z.re.is_finite() {
        return Err(MapError::OutOfStrip { im: z.im });
    }
    // cosh is even; fold to Re z ≥ 0 and use
    // Log cosh z = z − ln 2 + Log(1 + e^{−2z}) where e^z would overflow.
    let w = if z.re < 0.0 { -z } else { z };
    if w.re < 20.0 {
        Ok(z.cosh().ln())
    } else {
        Ok(w - LN_2 + (1.0 + (-2.0 * w).exp()).ln())
    }
}

fn ln_abs_sinh(u: f64) -> f64 {
    let u = u.abs();
    if u > 20.0 {
        u - LN_2 + (-(-2.0 * u).exp()).ln_1p()
    } else {
        u.sinh().ln()
    }
}

/// `(2/π)·ln|sinh(πx/2)|`, which leaves the hyperbolic secant law invariant.
pub fn sech_map(x: f64) -> Result<f64, MapError> {
    if x == 0.0 {
        return Err(MapError::Singular { map: "sech-map" });
    }
    Ok(FRAC_2_PI * ln_abs_sinh(FRAC_PI_2 * x.abs()))
}

/// `(2/π)·ln|x|`; carries a standard Cauchy variable to the sech law.
pub fn log_abs_map(x: f64) -> Result<f64, MapError> {
    if x == 0.0 {
        return Err(MapError::Singular { map: "log-abs" });
    }
    Ok(FRAC_2_PI * x.abs().ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{E, FRAC_PI_3, FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn boole_values() {
        assert_eq!(boole(1.0.into()), ExtendedReal::Finite(0.0));
        assert_eq!(boole(0.0.into()), ExtendedReal::Infinity);
        assert_eq!(boole(2.0.into()), ExtendedReal::Finite(0.75));
        assert_eq!(boole(ExtendedReal::Infinity), ExtendedReal::Infinity);
        assert!((boole_c(I).unwrap() - I).norm() <= 1e-14);
        assert!(matches!(boole_c(c(0.0, 0.0)), Err(MapError::Pole { .. })));
    }

    #[test]
    fn simpson_newton_values() {
        assert_eq!(simpson_newton(0.0.into()), ExtendedReal::Finite(0.0));
        assert_eq!(simpson_newton(1.0.into()), ExtendedReal::Finite(-1.0));
        assert_eq!(simpson_newton((1.0 / 3f64.sqrt()).into()), ExtendedReal::Infinity);
        assert_eq!(simpson_newton((-1.0 / 3f64.sqrt()).into()), ExtendedReal::Infinity);
        assert!((simpson_newton_c(I).unwrap() - I).norm() <= 1e-14);
        // Both evaluation branches agree with the plain rational formula.
        for x in [0.3, 0.9, 1.1, 2.5, -7.0, 1e5] {
            let direct = (x * x * x - 3.0 * x) / (3.0 * x * x - 1.0);
            let got = simpson_newton(x.into()).value().unwrap();
            assert!((got - direct).abs() <= 1e-14 * direct.abs().max(1.0));
        }
        // Large arguments do not overflow through x³.
        let big = simpson_newton(1e200.into()).value().unwrap();
        assert!((big - 1e200 / 3.0).abs() <= 1e186);
    }

    #[test]
    fn cayley_pair() {
        assert!((cayley(I).unwrap()).norm() < 1e-15);
        assert_eq!(cayley(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!((cayley(c(1.0, 0.0)).unwrap() - I).norm() < 1e-15);
        assert!(matches!(cayley(-I), Err(MapError::Pole { .. })));

        assert!((inverse_cayley(c(0.0, 0.0)).unwrap() - I).norm() < 1e-15);
        assert!((inverse_cayley(I).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(inverse_cayley(c(-1.0, 0.0)), Err(MapError::Pole { .. })));

        let z = c(2.0, 3.0);
        let back = inverse_cayley(cayley(z).unwrap()).unwrap();
        assert!((back - z).norm() <= 1e-12);
    }

    #[test]
    fn doubling_values() {
        assert!((doubling(c(1.0, 0.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((doubling(I).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!((doubling(Complex64::from_polar(1.0, FRAC_PI_4)).unwrap() + I).norm() < 1e-15);
        assert!(matches!(doubling(c(0.5, 0.0)), Err(MapError::OffCircle { .. })));
    }

    #[test]
    fn conjugacy_defect_values() {
        assert!(conjugacy_defect(c(0.0, 0.0)).unwrap() < 1e-15);
        assert!(conjugacy_defect(c(0.5, 0.0)).unwrap() < 1e-12);
        assert!(conjugacy_defect(c(0.3, 0.4)).unwrap() < 1e-12);
        assert!(matches!(conjugacy_defect(c(1.0, 0.0)), Err(MapError::Pole { .. })));
        assert!(matches!(conjugacy_defect(c(-1.0, 0.0)), Err(MapError::Pole { .. })));
        assert!(matches!(conjugacy_defect(c(1.5, 0.0)), Err(MapError::OutsideDisk { .. })));
    }

    #[test]
    fn pw_validation() {
        assert_eq!(pw_validate(&PwParams::new(0.5, 0.5, vec![])), Ok(()));
        assert_eq!(
            pw_validate(&PwParams::new(1.0, -1.0, vec![])),
            Err(vec![PwViolation::MixedSigns])
        );
        let errs = pw_validate(&PwParams::new(0.0, 0.0, vec![(0.0, 1.0)])).unwrap_err();
        assert!(errs.contains(&PwViolation::ZeroPole { index: 0 }));
        assert_eq!(
            pw_validate(&PwParams::new(0.0, 0.0, vec![])),
            Err(vec![PwViolation::AllZero])
        );
        let too_many = PwParams::new(1.0, 0.0, vec![(1.0, 1.0); MAX_PW_TERMS + 1]);
        assert!(pw_validate(&too_many)
            .unwrap_err()
            .contains(&PwViolation::TooManyTerms { len: MAX_PW_TERMS + 1 }));
        assert_eq!(PwParams::new(-1.0, 0.0, vec![(3.0, -2.0)]).sign(), Some(-1.0));
    }

    #[test]
    fn pw_normalizer_values() {
        assert_eq!(pw_normalizer(&PwParams::new(0.5, 0.5, vec![])).unwrap(), 1.0);
        assert_eq!(pw_normalizer(&PwParams::new(0.0, 0.0, vec![(1.0, 1.0)])).unwrap(), 0.5);
        assert_eq!(pw_normalizer(&PwParams::new(1.0, 2.0, vec![(2.0, 5.0)])).unwrap(), 4.0);
        assert!(matches!(
            pw_normalizer(&PwParams::new(1.0, -1.0, vec![])),
            Err(MapError::InvalidParams(_))
        ));
    }

    #[test]
    fn pw_eval_values() {
        let boole_params = PwParams::new(0.5, 0.5, vec![]);
        assert_eq!(pw_eval(&boole_params, 2.0.into()).unwrap(), ExtendedReal::Finite(0.75));
        assert_eq!(pw_eval(&boole_params, 0.0.into()).unwrap(), ExtendedReal::Infinity);

        // Normalized map equals (1 + x)/(1 − x).
        let mobius = PwParams::new(0.0, 0.0, vec![(1.0, 1.0)]);
        assert_eq!(pw_eval(&mobius, 0.0.into()).unwrap(), ExtendedReal::Finite(1.0));
        assert_eq!(pw_eval(&mobius, 1.0.into()).unwrap(), ExtendedReal::Infinity);
        assert_eq!(
            pw_eval(&mobius, ExtendedReal::Infinity).unwrap(),
            ExtendedReal::Finite(-1.0)
        );
        for x in [-3.0, -0.5, 0.25, 3.0, 10.0] {
            let got = pw_eval(&mobius, x.into()).unwrap().value().unwrap();
            assert_abs_diff_eq!(got, (1.0 + x) / (1.0 - x), epsilon = 1e-13);
        }
        assert!((pw_eval_c(&mobius, I).unwrap() - I).norm() < 1e-12);
        assert!(matches!(
            pw_eval_c(&mobius, c(1.0, 0.0)),
            Err(MapError::Pole { .. })
        ));
    }

    #[test]
    fn strip_automorphism_values() {
        assert_eq!(strip_automorphism(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let v = strip_automorphism(c(0.0, FRAC_PI_3)).unwrap();
        assert!((v - c(-LN_2, 0.0)).norm() < 1e-15);
        let v = strip_automorphism(c(1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, 0.433_780_830_483_027_2, epsilon = 1e-15);
        assert_eq!(v.im, 0.0);
        assert!(matches!(
            strip_automorphism(c(0.0, 2.0)),
            Err(MapError::OutOfStrip { .. })
        ));
        // Far from the origin the stable branch matches ln cosh x ≈ |x| − ln 2.
        let v = strip_automorphism(c(-800.0, 0.3)).unwrap();
        assert_abs_diff_eq!(v.re, 800.0 - LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, -0.3, epsilon = 1e-12);
        let near = strip_automorphism(c(19.0, 0.7)).unwrap();
        let far = strip_automorphism(c(21.0, 0.7)).unwrap();
        assert_abs_diff_eq!(near.im, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(far.im, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(near.re, 19.0 - LN_2, epsilon = 1e-12);
    }

    #[test]
    fn sech_map_values() {
        let root = FRAC_2_PI * 1f64.asinh();
        assert_abs_diff_eq!(root, 0.561_099_852_339_180_1, epsilon = 1e-15);
        assert_abs_diff_eq!(sech_map(root).unwrap(), 0.0, epsilon = 1e-15);
        assert_eq!(sech_map(-1.7).unwrap(), sech_map(1.7).unwrap());
        assert!(sech_map(1e-300).unwrap() < -400.0);
        assert!(matches!(sech_map(0.0), Err(MapError::Singular { .. })));
        // Both branches of ln|sinh| agree around the switch point.
        let x = 40.0 / PI;
        let direct = FRAC_2_PI * (FRAC_PI_2 * x).sinh().ln();
        assert_abs_diff_eq!(sech_map(x * 1.000_001).unwrap(), direct, epsilon = 1e-4);
        assert!(sech_map(1000.0).unwrap().is_finite());
    }

    #[test]
    fn log_abs_map_values() {
        assert_eq!(log_abs_map(1.0).unwrap(), 0.0);
        assert_eq!(log_abs_map(-1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(log_abs_map(E.powf(FRAC_PI_2)).unwrap(), 1.0, epsilon = 1e-15);
        assert!(matches!(log_abs_map(0.0), Err(MapError::Singular { .. })));
    }

    #[test]
    fn extended_real_from_float() {
        assert_eq!(ExtendedReal::from(f64::INFINITY), ExtendedReal::Infinity);
        assert_eq!(ExtendedReal::from(f64::NEG_INFINITY), ExtendedReal::Infinity);
        assert_eq!(ExtendedReal::from(3.0).value(), Some(3.0));
        assert_eq!(ExtendedReal::Infinity.to_string(), "∞");
    }
}
