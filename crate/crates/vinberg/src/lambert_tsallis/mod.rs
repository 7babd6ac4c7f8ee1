//! Generalized Tsallis function `f(z) = z/(1+γz)·(1+z/κ)^κ`, its main-branch
//! inverse (the Lambert-Tsallis function), the forbidden set on the negative
//! axis and the boundary solutions of `f(z) = x` for `x` in that set.
//!
//! Negative `κ` is handled through the homographic change of variable
//! `z ↦ z/(1+z/κ)`, which maps the problem to a positive exponent. Internally the
//! reduced exponent may lie in `(0, 1)`.

mod boundary;
mod inverse;

pub use boundary::{boundary_solutions, BoundaryCurve, BoundaryPoint};
pub use inverse::{taylor3, w_main};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

/// Extended real exponent: a finite value or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    Finite(f64),
    Infinite,
}

impl Kappa {
    /// `1/κ` with `1/∞ = 0`.
    pub fn recip(self) -> f64 {
        match self {
            Kappa::Finite(k) => 1.0 / k,
            Kappa::Infinite => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Kappa::Infinite)
    }

    /// Finite value, `None` for `+∞`.
    pub fn value(self) -> Option<f64> {
        match self {
            Kappa::Finite(k) => Some(k),
            Kappa::Infinite => None,
        }
    }

    /// As an `f64`, with `+∞` mapped to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Finite(k) => write!(f, "{k}"),
            Kappa::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Kappa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => Ok(Kappa::Infinite),
            t => {
                let k: f64 = t
                    .parse()
                    .map_err(|_| Error::Parameter(format!("cannot parse kappa from {s:?}")))?;
                if k == f64::INFINITY {
                    Ok(Kappa::Infinite)
                } else {
                    Ok(Kappa::Finite(k))
                }
            }
        }
    }
}

/// Parameter pair `(κ, γ)`. Admissible pairs satisfy `γ < 1` and `γ ≤ 1/κ ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LTParams {
    kappa: Kappa,
    gamma: f64,
}

impl LTParams {
    /// Checked constructor. `κ` must be negative, at least 1, or `+∞`.
    pub fn new(kappa: Kappa, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::Parameter(format!("gamma must be finite, got {gamma}")));
        }
        if let Kappa::Finite(k) = kappa {
            if !k.is_finite() || !(k < 0.0 || k >= 1.0) {
                return Err(Error::Parameter(format!(
                    "kappa must lie in (-inf,0) or [1,inf], got {k}"
                )));
            }
        }
        let inv = kappa.recip();
        if !(gamma < 1.0 && gamma <= inv) {
            return Err(Error::Parameter(format!(
                "inadmissible (kappa, gamma) = ({kappa}, {gamma}): need gamma <= 1/kappa <= 1 and gamma < 1"
            )));
        }
        Ok(LTParams { kappa, gamma })
    }

    /// Shorthand for a finite exponent.
    pub fn finite(kappa: f64, gamma: f64) -> Result<Self> {
        Self::new(Kappa::Finite(kappa), gamma)
    }

    /// Shorthand for `κ = +∞`.
    pub fn infinite(gamma: f64) -> Result<Self> {
        Self::new(Kappa::Infinite, gamma)
    }

    /// Positive-exponent pair produced by the reduction, where `κ` may be below 1.
    pub(crate) fn reduced_unchecked(kappa: f64, gamma: f64) -> Self {
        LTParams { kappa: Kappa::Finite(kappa), gamma }
    }

    pub fn kappa(&self) -> Kappa {
        self.kappa
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// True when `κ` is finite and negative.
    pub fn is_negative_kappa(&self) -> bool {
        matches!(self.kappa, Kappa::Finite(k) if k < 0.0)
    }

    /// The reduction for negative `κ`, `None` otherwise.
    pub fn reduction(&self) -> Option<Reduction> {
        match self.kappa {
            Kappa::Finite(k) if k < 0.0 => Some(Reduction {
                kappa: k,
                params: LTParams::reduced_unchecked(-k, self.gamma - 1.0 / k),
            }),
            _ => None,
        }
    }

    /// Parameters the boundary and inverse computations actually run on.
    pub(crate) fn working(&self) -> LTParams {
        self.reduction().map_or(*self, |r| r.params)
    }
}

impl fmt::Display for LTParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(kappa={}, gamma={})", self.kappa, self.gamma)
    }
}

/// Change of variable `z' = z/(1+z/κ)` taking `(κ, γ)` with `κ < 0` to
/// `(κ', γ') = (−κ, γ − 1/κ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reduction {
    kappa: f64,
    pub params: LTParams,
}

impl Reduction {
    /// `z ↦ z/(1+z/κ)`.
    pub fn forward(&self, z: Complex64) -> Complex64 {
        z / (1.0 + z / self.kappa)
    }

    /// `z' ↦ z'/(1+z'/κ')`, the inverse of [`Reduction::forward`].
    pub fn inverse(&self, zp: Complex64) -> Complex64 {
        zp / (1.0 - zp / self.kappa)
    }

    /// Original (negative) exponent.
    pub fn original_kappa(&self) -> f64 {
        self.kappa
    }
}

/// Homographic reduction of a pair with negative `κ`.
pub fn homographic_reduce(params: &LTParams) -> Result<Reduction> {
    params
        .reduction()
        .ok_or_else(|| Error::Parameter(format!("reduction needs kappa < 0, got {params}")))
}

pub(crate) fn ln1p_c(u: Complex64) -> Complex64 {
    Complex64::new(
        0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p(),
        u.im.atan2(1.0 + u.re),
    )
}

pub(crate) fn expm1_c(w: Complex64) -> Complex64 {
    let s = (0.5 * w.im).sin();
    Complex64::new(
        w.re.exp_m1() * w.im.cos() - 2.0 * s * s,
        w.re.exp() * w.im.sin(),
    )
}

fn on_negative_axis(w: Complex64) -> bool {
    w.im == 0.0 && w.re <= 0.0
}

/// Tsallis exponential `(1+z/κ)^κ` on the principal branch; `e^z` for `κ = ∞`.
pub fn exp_kappa(z: Complex64, kappa: Kappa) -> Result<Complex64> {
    Ok(exp_kappa_m1(z, kappa)? + 1.0)
}

/// `exp_κ(z) − 1` without cancellation near `z = 0`.
pub fn exp_kappa_m1(z: Complex64, kappa: Kappa) -> Result<Complex64> {
    match kappa {
        Kappa::Infinite => Ok(expm1_c(z)),
        Kappa::Finite(k) => {
            if k == 1.0 {
                return Ok(z);
            }
            let u = z / k;
            if on_negative_axis(u + 1.0) {
                return Err(Error::BranchCut(format!("1 + z/kappa = {} for z = {z}", u + 1.0)));
            }
            Ok(expm1_c(ln1p_c(u) * k))
        }
    }
}

/// Tsallis logarithm `(z^q − 1)/q` on the principal branch; `log z` for `q = 0`.
pub fn ln_kappa(z: Complex64, q: f64) -> Result<Complex64> {
    if on_negative_axis(z) {
        return Err(Error::BranchCut(format!("tsallis log at {z}")));
    }
    let l = ln1p_c(z - 1.0);
    if q == 0.0 {
        Ok(l)
    } else {
        Ok(expm1_c(l * q) / q)
    }
}

/// `f(z) = z/(1+γz)·exp_κ(z)`.
pub fn f_kg(z: Complex64, params: &LTParams) -> Result<Complex64> {
    let den = 1.0 + params.gamma * z;
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole(format!("z = -1/gamma = {z}")));
    }
    Ok(z / den * exp_kappa(z, params.kappa)?)
}

/// `f′(z) = (γz² + (1+1/κ)z + 1)/(1+γz)² · (1+z/κ)^{κ−1}`.
pub fn f_kg_prime(z: Complex64, params: &LTParams) -> Result<Complex64> {
    let g = params.gamma;
    let q = params.kappa.recip();
    let den = 1.0 + g * z;
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole(format!("z = -1/gamma = {z}")));
    }
    let e = exp_kappa(z, params.kappa)?;
    let e_less = match params.kappa {
        Kappa::Infinite => e,
        Kappa::Finite(k) => e / (1.0 + z / k),
    };
    Ok((g * z * z + (1.0 + q) * z + 1.0) / (den * den) * e_less)
}

/// Logarithmic derivative `f′/f = 1/z − γ/(1+γz) + 1/(1+z/κ)`.
pub(crate) fn f_log_derivative(z: Complex64, params: &LTParams) -> Complex64 {
    let tail = match params.kappa {
        Kappa::Infinite => Complex64::new(1.0, 0.0),
        Kappa::Finite(k) => 1.0 / (1.0 + z / k),
    };
    1.0 / z - params.gamma / (1.0 + params.gamma * z) + tail
}

/// Roots `α₁ ≤ α₂` of `γz² + (1+1/κ)z + 1`. For `γ = 0` the first entry is `−∞`.
pub fn critical_points(params: &LTParams) -> (f64, f64) {
    let g = params.gamma;
    let b = 1.0 + params.kappa.recip();
    if g == 0.0 {
        return (f64::NEG_INFINITY, -1.0 / b);
    }
    let disc = (b * b - 4.0 * g).max(0.0);
    let t = -0.5 * (b + disc.sqrt());
    let (r1, r2) = (t / g, 1.0 / t);
    (r1.min(r2), r1.max(r2))
}

/// Value of `f` at a critical point `α`, i.e. `−α²(1+α/κ)^{κ−1}`.
pub fn critical_value(alpha: f64, kappa: Kappa) -> f64 {
    match kappa {
        Kappa::Infinite => -alpha * alpha * alpha.exp(),
        Kappa::Finite(k) => -alpha * alpha * (1.0 + alpha / k).powf(k - 1.0),
    }
}

/// Shape of the forbidden set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetCase {
    /// Bounded interval between the two critical values, `γ < 0`.
    S1,
    /// Half-line, `γ ≥ 0` with `κ > 1`, or `γ = 0`.
    S2,
    /// Half-line for negative `κ` whose reduced `γ` vanishes.
    S3,
    /// Bounded interval, `κ = 1` and `γ > 0`.
    S4,
}

/// Open real interval `(lo, hi)` missed by `f` on the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForbiddenSet {
    pub case: SetCase,
    pub lo: f64,
    pub hi: f64,
}

impl ForbiddenSet {
    /// Membership in the open set.
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// Membership in the closure.
    pub fn closure_contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Forbidden set of `f_{κ,γ}`; negative `κ` is classified on the reduced pair.
pub fn forbidden_set(params: &LTParams) -> ForbiddenSet {
    if let Some(red) = params.reduction() {
        let mut s = forbidden_set(&red.params);
        s.case = if red.params.gamma < 0.0 { SetCase::S1 } else { SetCase::S3 };
        return s;
    }
    let (a1, a2) = critical_points(params);
    let k = params.kappa;
    let g = params.gamma;
    if g < 0.0 {
        ForbiddenSet { case: SetCase::S1, lo: critical_value(a2, k), hi: critical_value(a1, k) }
    } else if g > 0.0 && k == Kappa::Finite(1.0) {
        ForbiddenSet { case: SetCase::S4, lo: critical_value(a1, k), hi: critical_value(a2, k) }
    } else {
        ForbiddenSet { case: SetCase::S2, lo: f64::NEG_INFINITY, hi: critical_value(a2, k) }
    }
}
