//! Limiting laws of quadratic Wishart ensembles: Stieltjes transforms of the
//! bipartite and covariance spectra, the R-transform, the density through the
//! boundary solutions, and the Marchenko-Pastur and Dykema-Haagerup special
//! cases.

use crate::error::{Error, Result};
use crate::lambert_tsallis::{
    exp_kappa_m1, forbidden_set, ln_kappa, w_main, BoundaryCurve, Kappa, LTParams,
};
use crate::law::{Atom, ContinuousPart, DensityPart, SpectralLaw, ZeroBehavior};
use crate::quadrature::integrate;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Trapezoid variance profile with corner `p`, slope `alpha` and level `v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidProfile {
    pub p: f64,
    pub alpha: f64,
    pub v: f64,
}

impl TrapezoidProfile {
    pub fn new(p: f64, alpha: f64, v: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Parameter(format!("p must lie in (0,1), got {p}")));
        }
        if !(alpha >= 0.0 && alpha <= (1.0 - p) / p * (1.0 + 1e-12)) {
            return Err(Error::Parameter(format!("alpha must lie in [0, (1-p)/p], got {alpha}")));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Parameter(format!("variance must be positive, got {v}")));
        }
        Ok(TrapezoidProfile { p, alpha, v })
    }
}

/// `κ = 1/(1−α)` (`∞` at `α = 1`) and `γ = (2p−1)/p`.
pub fn trapezoid_to_lt(profile: &TrapezoidProfile) -> Result<LTParams> {
    let kappa = if profile.alpha == 1.0 {
        Kappa::Infinite
    } else {
        Kappa::Finite(1.0 / (1.0 - profile.alpha))
    };
    let mut gamma = (2.0 * profile.p - 1.0) / profile.p;
    // the slope bound is the admissibility bound; absorb rounding at equality
    let cap = kappa.recip();
    if gamma > cap && gamma - cap < 1e-12 {
        gamma = cap;
    }
    LTParams::new(kappa, gamma)
}

fn upper(z: Complex64) -> Result<()> {
    if z.im > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("need Im z > 0, got {z}")))
    }
}

/// Stieltjes transform of the bipartite (symmetric) spectrum:
/// `−2p/(z W(−vp/z²)) + (1−2p)/z − 2z/v`.
pub fn stieltjes_s(z: Complex64, profile: &TrapezoidProfile) -> Result<Complex64> {
    upper(z)?;
    let params = trapezoid_to_lt(profile)?;
    let TrapezoidProfile { p, v, .. } = *profile;
    let w = w_main(-v * p / (z * z), &params)?;
    let g = params.gamma();
    // −2p/(zW) − 2z/v rewritten through f(W) = −vp/z² to avoid cancellation
    let em1 = exp_kappa_m1(w, params.kappa())?;
    Ok(2.0 * z / v * (em1 - g * w) / (1.0 + g * w) + (1.0 - 2.0 * p) / z)
}

fn nonzero(z: Complex64) -> Result<()> {
    if z != Complex64::new(0.0, 0.0) && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("transform undefined at {z}")))
    }
}

/// Stieltjes transform of the covariance limit, `(exp_κ(W(−v/z)) − 1)/v`.
pub fn stieltjes_t(z: Complex64, params: &LTParams, v: f64) -> Result<Complex64> {
    upper(z)?;
    stieltjes_t_continued(z, params, v)
}

/// [`stieltjes_t`] on all of `ℂ ∖ supp`, including the lower half-plane and
/// real points off the support.
pub fn stieltjes_t_continued(z: Complex64, params: &LTParams, v: f64) -> Result<Complex64> {
    nonzero(z)?;
    let w = w_main(-v / z, params)?;
    Ok(exp_kappa_m1(w, params.kappa())? / v)
}

/// Second closed form of the same transform, `−1/v − 1/(zW(−v/z)) − γ/z`.
pub fn stieltjes_t_alt(z: Complex64, params: &LTParams, v: f64) -> Result<Complex64> {
    upper(z)?;
    let w = w_main(-v / z, params)?;
    Ok(-1.0 / v - 1.0 / (z * w) - params.gamma() / z)
}

/// R-transform `−1/z − vγ/(1−vz) − v/((1−vz)·ln_{1/κ}(1−vz))`.
pub fn r_transform(z: Complex64, params: &LTParams, v: f64) -> Result<Complex64> {
    let u = 1.0 - v * z;
    let l = ln_kappa(u, params.kappa().recip())?;
    Ok(-1.0 / z - v * params.gamma() / u - v / (u * l))
}

/// Density of the covariance limit at `x`.
pub fn wishart_density(x: f64, params: &LTParams, v: f64) -> f64 {
    WishartLaw::new(params, v).density(x)
}

/// Which of the three support shapes applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WishartCase {
    /// Compact support away from 0.
    Bounded,
    /// Support reaching 0 with an unbounded density there.
    ReachesZero,
    /// Point mass at 0.
    AtomAtZero,
}

/// Covariance limit for one `(κ, γ, v)`, holding its traced boundary curve.
#[derive(Debug, Clone)]
pub struct WishartLaw {
    params: LTParams,
    v: f64,
    curve: BoundaryCurve,
    lo: f64,
    hi: f64,
}

impl WishartLaw {
    pub fn new(params: &LTParams, v: f64) -> Self {
        let s = forbidden_set(params);
        WishartLaw { params: *params, v, curve: BoundaryCurve::new(params), lo: s.lo, hi: s.hi }
    }

    pub fn case(&self) -> WishartCase {
        let g = self.params.working().gamma();
        if g < 0.0 {
            WishartCase::Bounded
        } else if g == 0.0 {
            WishartCase::ReachesZero
        } else {
            WishartCase::AtomAtZero
        }
    }

    /// `[left, right]` carrying the density.
    pub fn support(&self) -> (f64, f64) {
        let right = self.v / self.hi.abs();
        let left = if self.lo.is_finite() { self.v / self.lo.abs() } else { 0.0 };
        (left, right)
    }

    /// `Im K₊(−v/x) / (π x |K₊|²)` when `−v/x` lies in the forbidden set.
    pub fn density(&self, x: f64) -> f64 {
        if x == 0.0 {
            let (left, _) = self.support();
            return if left == 0.0 { f64::INFINITY } else { 0.0 };
        }
        if x < 0.0 {
            return 0.0;
        }
        let u = -self.v / x;
        if !(u > self.lo && u < self.hi) {
            return 0.0;
        }
        match self.curve.solve(u) {
            Ok(bp) => {
                let k = bp.k_plus;
                (k.im / (PI * x * k.norm_sqr())).max(0.0)
            }
            Err(_) => 0.0,
        }
    }

    /// Continuous mass on `[a, b]`, integrated along the boundary curve.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        let a = a.max(0.0);
        if !(b > a) {
            return 0.0;
        }
        let ua = if a == 0.0 { f64::NEG_INFINITY } else { -self.v / a };
        let ub = -self.v / b;
        let s0 = self.curve.parameter_of(ub);
        let s1 = self.curve.parameter_of(ua);
        if !(s1 > s0) {
            return 0.0;
        }
        let mut cuts = vec![s0];
        cuts.extend(self.curve.junctions().iter().copied().filter(|&j| j > s0 && j < s1));
        cuts.push(s1);
        let total: f64 = cuts
            .windows(2)
            .map(|w| integrate(|s| self.curve.mass_integrand(s), w[0], w[1], 1e-13, 1e-13).value)
            .sum();
        -total
    }

    /// Sample the density along the boundary curve: `(x, d(x))` pairs with
    /// `x = −v/f(K)` for `K` on the curve.
    pub fn parametric_curve(&self, samples: usize) -> Vec<(f64, f64)> {
        let span = self.curve.span();
        (1..samples + 1)
            .map(|i| {
                let s = span * i as f64 / (samples + 1) as f64;
                let k = self.curve.point(s);
                let x = -self.v / self.curve.value(s);
                (x, k.im / (PI * x * k.norm_sqr()))
            })
            .collect()
    }

    /// As a [`SpectralLaw`].
    pub fn law(&self) -> SpectralLaw {
        let (left, right) = self.support();
        let (atoms, zero) = match self.case() {
            WishartCase::Bounded => (Vec::new(), ZeroBehavior::FiniteLimit(0.0)),
            WishartCase::ReachesZero => (Vec::new(), ZeroBehavior::InfiniteLimit),
            WishartCase::AtomAtZero => {
                let g = self.params.gamma();
                (vec![Atom { loc: 0.0, mass: g }], ZeroBehavior::Atom(g))
            }
        };
        SpectralLaw::new(atoms, vec![(left, right)], zero, Some(Arc::new(self.clone())))
    }
}

impl ContinuousPart for WishartLaw {
    fn density(&self, x: f64) -> f64 {
        WishartLaw::density(self, x)
    }

    fn mass(&self, a: f64, b: f64) -> f64 {
        WishartLaw::mass(self, a, b)
    }
}

/// Limiting covariance law for `(κ, γ, v)`.
pub fn wishart_law(params: &LTParams, v: f64) -> SpectralLaw {
    WishartLaw::new(params, v).law()
}

/// Density of the symmetric embedding at `x ≠ 0`: `2|x|·d(x²/p)`, where
/// `d` is the covariance density of `trapezoid_to_lt(profile)`.
pub fn bipartite_density(x: f64, profile: &TrapezoidProfile) -> Result<f64> {
    let params = trapezoid_to_lt(profile)?;
    if x == 0.0 {
        return Err(Error::Domain("bipartite density is not evaluated at 0".into()));
    }
    Ok(2.0 * x.abs() * wishart_density(x * x / profile.p, &params, profile.v))
}

/// Closed-form parametric density of the triangular (`κ = ∞`, `γ = 0`, `v = 1`)
/// case: `t ↦ ((sin t/t)·e^{t cot t}, (1/π)·sin t·e^{−t cot t})` for `t ∈ [0, π)`.
pub fn dh_density_curve(grid: &[f64]) -> Vec<(f64, f64)> {
    grid.iter()
        .map(|&t| {
            if t == 0.0 {
                (std::f64::consts::E, 0.0)
            } else {
                let c = t / t.tan();
                ((t.sin() / t) * c.exp(), t.sin() * (-c).exp() / PI)
            }
        })
        .collect()
}

/// Hub fraction and column multiplicities of a general daisy Wishart ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralVinbergParams {
    pub c: f64,
    pub m1: u32,
    pub m2: u32,
    pub v: f64,
}

impl GeneralVinbergParams {
    pub fn new(c: f64, m1: u32, m2: u32, v: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::Parameter(format!("c must lie in (0,1], got {c}")));
        }
        if m1 + m2 == 0 {
            return Err(Error::Parameter("m1 + m2 must be positive".into()));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Parameter(format!("variance must be positive, got {v}")));
        }
        Ok(GeneralVinbergParams { c, m1, m2, v })
    }

    /// Limit of `n/(n+N)`: `1/(1 + m1 + m2(1−c))`.
    pub fn row_fraction(&self) -> f64 {
        1.0 / (1.0 + self.m1 as f64 + self.m2 as f64 * (1.0 - self.c))
    }

    /// `κ = 1/(1−m1)` and `γ = 1 − (m1 + m2(1−c))/c`.
    pub fn lt_params(&self) -> Result<LTParams> {
        let kappa = if self.m1 == 1 {
            Kappa::Infinite
        } else {
            Kappa::Finite(1.0 / (1.0 - self.m1 as f64))
        };
        let gamma = 1.0 - (self.m1 as f64 + self.m2 as f64 * (1.0 - self.c)) / self.c;
        LTParams::new(kappa, gamma)
    }
}

/// `T_{κ,γ}(z/c) − (1−c)/z`.
pub fn general_vinberg_t(z: Complex64, g: &GeneralVinbergParams) -> Result<Complex64> {
    upper(z)?;
    general_vinberg_t_continued(z, g)
}

/// [`general_vinberg_t`] on all of `ℂ ∖ supp`.
pub fn general_vinberg_t_continued(z: Complex64, g: &GeneralVinbergParams) -> Result<Complex64> {
    nonzero(z)?;
    let params = g.lt_params()?;
    Ok(stieltjes_t_continued(z / g.c, &params, g.v)? - (1.0 - g.c) / z)
}

/// Transform of the symmetric embedding of a general daisy Wishart factor,
/// `2z·T(z²/p′) − (1−2p′)/z` with `p′ = 1/(1 + m1 + m2(1−c))`.
pub fn general_vinberg_s(z: Complex64, g: &GeneralVinbergParams) -> Result<Complex64> {
    upper(z)?;
    let pp = g.row_fraction();
    Ok(2.0 * z * general_vinberg_t_continued(z * z / pp, g)? - (1.0 - 2.0 * pp) / z)
}

/// Marchenko-Pastur density with ratio `C` and scale `v`:
/// `√((t−a)(b−t))/(2πvt)` on `[a, b] = v[(√C−1)², (√C+1)²]`.
pub fn marchenko_pastur(t: f64, c: f64, v: f64) -> f64 {
    let a = v * (c.sqrt() - 1.0).powi(2);
    let b = v * (c.sqrt() + 1.0).powi(2);
    if t <= a || t >= b || t <= 0.0 {
        return 0.0;
    }
    ((t - a) * (b - t)).sqrt() / (2.0 * PI * v * t)
}

/// Marchenko-Pastur law with atom `max(1−C, 0)` at 0.
pub fn mp_law(c: f64, v: f64) -> Result<SpectralLaw> {
    if !(c > 0.0 && c.is_finite() && v > 0.0 && v.is_finite()) {
        return Err(Error::Parameter(format!("need C > 0 and v > 0, got C={c} v={v}")));
    }
    let a = v * (c.sqrt() - 1.0).powi(2);
    let b = v * (c.sqrt() + 1.0).powi(2);
    let (atoms, zero) = if c < 1.0 {
        (vec![Atom { loc: 0.0, mass: 1.0 - c }], ZeroBehavior::Atom(1.0 - c))
    } else if c == 1.0 {
        (Vec::new(), ZeroBehavior::InfiniteLimit)
    } else {
        (Vec::new(), ZeroBehavior::FiniteLimit(0.0))
    };
    let part = DensityPart {
        density: move |t: f64| marchenko_pastur(t, c, v),
        pieces: vec![(a, b, 2.0, 2.0)],
        abs_tol: 1e-11,
    };
    Ok(SpectralLaw::new(atoms, vec![(a, b)], zero, Some(Arc::new(part))))
}

/// `|T(z²/p) − (1/(2z))((1−2p)/z + S(z))|`.
pub fn bipartite_relation_check(
    z: Complex64,
    p: f64,
    s_value: Complex64,
    t_fn: impl Fn(Complex64) -> Result<Complex64>,
) -> Result<f64> {
    let lhs = t_fn(z * z / p)?;
    let rhs = ((1.0 - 2.0 * p) / z + s_value) / (2.0 * z);
    Ok((lhs - rhs).norm())
}
