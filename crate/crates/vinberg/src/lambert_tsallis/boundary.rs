//! Upper boundary curve of the main-branch image domain, and the two boundary
//! solutions `K₊`, `K₋ = conj(K₊)` of `f(z) = x` for `x` in the forbidden set.
//!
//! The curve is parametrized by `s ∈ (0, span)`. At `s = 0` it leaves the real
//! axis at the critical point whose value is the upper end of the forbidden set,
//! and `Re f` decreases monotonically along it.

use super::{f_kg, f_kg_prime, f_log_derivative, forbidden_set, Kappa, LTParams, Reduction};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const SCAN: usize = 2048;

/// `K₊(x)` with positive imaginary part and its conjugate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub k_plus: Complex64,
    pub k_minus: Complex64,
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    /// `1 + z/κ = r e^{iθ}`, two roots of `a r² + b(θ) r + a − 1 = 0` joining at `θ*`.
    PolarPair { kappa: f64, a: f64, t_star: f64 },
    /// Single root, `θ ∈ (0, t_max)`.
    PolarSingle { kappa: f64, a: f64, t_max: f64 },
    /// `κ = ∞`, `γ < 0`: two roots in `x` of `x + γx² + γy² + y cot y = 0` joining at `y*`.
    ExpPair { gamma: f64, y_star: f64 },
    /// `κ = ∞`, `γ = 0`: `x = −y cot y`.
    ExpSingle,
}

/// Traced boundary curve for one parameter pair (immutable once built).
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    params: LTParams,
    working: LTParams,
    reduction: Option<Reduction>,
    shape: Shape,
    lo: f64,
    hi: f64,
}

fn b_theta(t: f64, k: f64, a: f64) -> f64 {
    ((k + 1.0) * t).sin() / (k * t).sin() - 2.0 * a * t.cos()
}

fn b_theta_prime(t: f64, k: f64, a: f64) -> f64 {
    let (s1, c1) = ((k + 1.0) * t).sin_cos();
    let (s0, c0) = (k * t).sin_cos();
    ((k + 1.0) * c1 * s0 - k * s1 * c0) / (s0 * s0) + 2.0 * a * t.sin()
}

/// First sign change of `g` on a uniform scan of `(0, end)`, refined by bisection.
fn first_root(g: impl Fn(f64) -> f64, end: f64) -> f64 {
    let mut lo = 0.0;
    let mut hi = end;
    for i in 1..=SCAN {
        let t = end * i as f64 / SCAN as f64;
        let v = g(t);
        if !(v > 0.0) {
            hi = t;
            lo = end * (i - 1) as f64 / SCAN as f64;
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn cot(y: f64) -> f64 {
    y.cos() / y.sin()
}

impl BoundaryCurve {
    pub fn new(params: &LTParams) -> Self {
        let reduction = params.reduction();
        let working = params.working();
        let set = forbidden_set(params);
        let g = working.gamma();
        let shape = match working.kappa() {
            Kappa::Infinite => {
                if g < 0.0 {
                    let disc = |y: f64| 1.0 - 4.0 * g * (g * y * y + y * cot(y));
                    Shape::ExpPair { gamma: g, y_star: first_root(disc, PI) }
                } else {
                    Shape::ExpSingle
                }
            }
            Kappa::Finite(k) => {
                let a = g * k;
                if a < 0.0 {
                    let disc = |t: f64| {
                        let b = b_theta(t, k, a);
                        b * b + 4.0 * a * (1.0 - a)
                    };
                    Shape::PolarPair { kappa: k, a, t_star: first_root(disc, PI / (k + 1.0)) }
                } else if a == 0.0 {
                    Shape::PolarSingle { kappa: k, a, t_max: PI / (k + 1.0) }
                } else {
                    Shape::PolarSingle { kappa: k, a, t_max: PI / k }
                }
            }
        };
        BoundaryCurve { params: *params, working, reduction, shape, lo: set.lo, hi: set.hi }
    }

    /// Original parameter pair.
    pub fn params(&self) -> &LTParams {
        &self.params
    }

    /// Length of the parameter interval.
    pub fn span(&self) -> f64 {
        match self.shape {
            Shape::PolarPair { .. } | Shape::ExpPair { .. } => 2.0,
            _ => 1.0,
        }
    }

    /// Parameter values where the curve is not smooth (branch junction).
    pub fn junctions(&self) -> &'static [f64] {
        match self.shape {
            Shape::PolarPair { .. } | Shape::ExpPair { .. } => &[1.0],
            _ => &[],
        }
    }

    /// Point and derivative with respect to `s`, in working coordinates.
    fn working_point(&self, s: f64) -> (Complex64, Complex64) {
        match self.shape {
            Shape::PolarPair { kappa, a, t_star } => {
                let (u, big, dir) = if s <= 1.0 { (1.0 - s, false, 1.0) } else { (s - 1.0, true, -1.0) };
                let t = t_star * (1.0 - u * u);
                let dt = dir * 2.0 * t_star * u;
                let b = b_theta(t, kappa, a);
                let root = (b * b + 4.0 * a * (1.0 - a)).max(0.0).sqrt();
                let r = if big { (b + root) / (-2.0 * a) } else { 2.0 * (1.0 - a) / (b + root) };
                polar(kappa, a, t, r, b, dt)
            }
            Shape::PolarSingle { kappa, a, t_max } => {
                let t = t_max * s;
                let b = b_theta(t, kappa, a);
                let root = (b * b + 4.0 * a * (1.0 - a)).max(0.0).sqrt();
                let r = if b >= 0.0 { 2.0 * (1.0 - a) / (root + b) } else { (root - b) / (2.0 * a) };
                polar(kappa, a, t, r, b, t_max)
            }
            Shape::ExpPair { gamma, y_star } => {
                let (u, big, dir) = if s <= 1.0 { (1.0 - s, false, 1.0) } else { (s - 1.0, true, -1.0) };
                let y = y_star * (1.0 - u * u);
                let dy = dir * 2.0 * y_star * u;
                let g = gamma * y * y + y * cot(y);
                let root = (1.0 - 4.0 * gamma * g).max(0.0).sqrt();
                let x = if big { (1.0 + root) / (-2.0 * gamma) } else { -2.0 * g / (1.0 + root) };
                let sn = y.sin();
                let dx = -(2.0 * gamma * y + cot(y) - y / (sn * sn)) / (1.0 + 2.0 * gamma * x);
                (Complex64::new(x, y), Complex64::new(dx, 1.0) * dy)
            }
            Shape::ExpSingle => {
                let y = PI * s;
                let sn = y.sin();
                let x = -y * cot(y);
                let dx = -cot(y) + y / (sn * sn);
                (Complex64::new(x, y), Complex64::new(dx, 1.0) * PI)
            }
        }
    }

    /// Curve point in original coordinates.
    pub fn point(&self, s: f64) -> Complex64 {
        self.to_original(self.working_point(s).0)
    }

    fn to_original(&self, w: Complex64) -> Complex64 {
        self.reduction.map_or(w, |r| r.inverse(w))
    }

    /// Value of `f` at the curve point (real up to rounding).
    pub fn value(&self, s: f64) -> f64 {
        f_kg(self.working_point(s).0, &self.working).map_or(f64::NEG_INFINITY, |v| v.re)
    }

    /// Curve parameter whose `f`-value is `x`; clamps to the ends outside the set.
    pub fn parameter_of(&self, x: f64) -> f64 {
        if x >= self.hi {
            return 0.0;
        }
        if x <= self.lo {
            return self.span();
        }
        let (mut a, mut b) = (0.0, self.span());
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let v = self.value(mid);
            if v > x {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }

    /// Boundary solutions of `f(z) = x` for `x` strictly inside the forbidden set.
    pub fn solve(&self, x: f64) -> Result<BoundaryPoint> {
        if !(x > self.lo && x < self.hi) {
            return Err(Error::Domain(format!(
                "{x} is not inside the forbidden set ({}, {}) of {}",
                self.lo, self.hi, self.params
            )));
        }
        let s = self.parameter_of(x);
        let mut w = self.working_point(s).0;
        let target = Complex64::new(x, 0.0);
        let mut res = (f_kg(w, &self.working)? - target).norm();
        for _ in 0..8 {
            let d = match f_kg_prime(w, &self.working) {
                Ok(d) => d,
                Err(_) => break,
            };
            let cand = w - (f_kg(w, &self.working)? - target) / d;
            if !(cand.im > 0.0) {
                break;
            }
            let r = match f_kg(cand, &self.working) {
                Ok(v) => (v - target).norm(),
                Err(_) => break,
            };
            if !(r < res) {
                break;
            }
            w = cand;
            res = r;
        }
        let k = self.to_original(w);
        Ok(BoundaryPoint { k_plus: k, k_minus: k.conj() })
    }

    /// Integrand `(1/π)·Re(d log f)·Im(1/K)` along the curve. Its integral between
    /// two parameters is minus the mass the boundary-value density puts on the
    /// corresponding abscissae `x = −v/f`.
    pub(crate) fn mass_integrand(&self, s: f64) -> f64 {
        let (w, dw) = self.working_point(s);
        let dlog = f_log_derivative(w, &self.working) * dw;
        let k = self.to_original(w);
        let v = dlog.re * (1.0 / k).im / PI;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    }
}

fn polar(kappa: f64, a: f64, t: f64, r: f64, b: f64, dt: f64) -> (Complex64, Complex64) {
    let db = b_theta_prime(t, kappa, a);
    let dr = -db * r / (2.0 * a * r + b);
    let e = Complex64::from_polar(1.0, t);
    let z = (e * r - 1.0) * kappa;
    let dz = e * Complex64::new(dr, r) * kappa * dt;
    (z, dz)
}

/// `K₊(x)` and `K₋(x)` for `x` strictly inside the forbidden set.
pub fn boundary_solutions(x: f64, params: &LTParams) -> Result<BoundaryPoint> {
    BoundaryCurve::new(params).solve(x)
}
