//! Limiting eigenvalue law of rescaled Wigner matrices on daisy-graph spaces
//! with hub fraction `c` and entry variance `v`.

use crate::error::{Error, Result};
use crate::law::{Atom, DensityPart, SpectralLaw, ZeroBehavior};
use crate::poly;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// Hub fraction and variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerLawParams {
    pub c: f64,
    pub v: f64,
}

impl WignerLawParams {
    pub fn new(c: f64, v: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::Parameter(format!("hub fraction c must lie in [0,1], got {c}")));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Parameter(format!("variance must be positive, got {v}")));
        }
        Ok(WignerLawParams { c, v })
    }
}

/// Depressed-cubic data of the monic Stieltjes cubic at one point `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    pub p_of_z: Complex64,
    pub q_of_z: Complex64,
    pub disc: Complex64,
}

/// Squared edge points `(α_c, β_c)` of the support in units of `v`.
/// For `c = 1` the lower value is `−∞`.
pub fn edge_points(c: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::Domain(format!("hub fraction c must lie in [0,1], got {c}")));
    }
    if c == 1.0 {
        return Ok((f64::NEG_INFINITY, 4.0));
    }
    let base = 8.0 + 4.0 * c - 13.0 * c * c;
    let root = (c * (8.0 - 7.0 * c).powi(3)).sqrt();
    let den = 8.0 * (1.0 - c);
    Ok(((base - root) / den, (base + root) / den))
}

/// Density of the limiting law at `t`.
pub fn wigner_density(t: f64, params: WignerLawParams) -> f64 {
    let WignerLawParams { c, v } = params;
    if c == 0.0 {
        return 0.0;
    }
    if c == 1.0 {
        let r = 4.0 * v - t * t;
        return if r > 0.0 { r.sqrt() / (2.0 * PI * v) } else { 0.0 };
    }
    if t == 0.0 {
        return if c > 0.5 {
            c / (PI * (v * (2.0 * c - 1.0)).sqrt())
        } else if c == 0.5 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    let (alpha, beta) = edge_points(c).expect("c checked at construction");
    let x = t.abs() / v.sqrt();
    let x2 = x * x;
    if x2 > beta || x2 < alpha.max(0.0) {
        return 0.0;
    }
    let mut rad = (x2 - alpha) * (beta - x2);
    if rad < 0.0 {
        if rad >= -1e-12 {
            rad = 0.0;
        } else {
            return 0.0;
        }
    }
    let poly = x2 * x2 * x2 - 3.0 * (c + 1.0) * x2 * x2
        + 1.5 * (5.0 * c * c - 2.0 * c + 2.0) * x2
        + (2.0 * c - 1.0).powi(3);
    // ∛(P+E) − ∛(P−E) = 2E/(A² + AB + B²), with E ∝ x cancelled against t
    let e_over_x = 3.0 * c * (3.0 - 3.0 * c).sqrt() * rad.sqrt();
    let extra = e_over_x * x;
    let (a, b) = ((poly + extra).cbrt(), (poly - extra).cbrt());
    let den = a * a + a * b + b * b;
    if den <= 0.0 {
        return 0.0;
    }
    (2.0 * e_over_x / (den * 2.0 * 3f64.sqrt() * PI * v.sqrt())).max(0.0)
}

/// Limiting law: an atom `max(1−2c, 0)` at 0 plus the density on its support.
pub fn wigner_law(params: WignerLawParams) -> SpectralLaw {
    let WignerLawParams { c, v } = params;
    if c == 0.0 {
        return SpectralLaw::dirac(0.0);
    }
    let (alpha, beta) = edge_points(c).expect("c checked at construction");
    let outer = (v * beta).sqrt();
    let dens = move |t: f64| wigner_density(t, params);
    let (atoms, support, pieces, zero) = if c < 0.5 {
        let inner = (v * alpha).sqrt();
        (
            vec![Atom { loc: 0.0, mass: 1.0 - 2.0 * c }],
            vec![(-outer, -inner), (inner, outer)],
            vec![(-outer, -inner, 2.0, 2.0), (inner, outer, 2.0, 2.0)],
            ZeroBehavior::Atom(1.0 - 2.0 * c),
        )
    } else {
        let zero = if c == 0.5 {
            ZeroBehavior::InfiniteLimit
        } else {
            ZeroBehavior::FiniteLimit(wigner_density(0.0, params))
        };
        (
            Vec::new(),
            vec![(-outer, outer)],
            vec![(-outer, 0.0, 2.0, 2.0), (0.0, outer, 2.0, 2.0)],
            zero,
        )
    };
    let part = DensityPart { density: dens, pieces, abs_tol: 1e-10 };
    SpectralLaw::new(atoms, support, zero, Some(Arc::new(part)))
}

/// Coefficients, constant term first, of
/// `v²zA³ + (2vz² + (1−2c)v²)A² + (z² + 2v(1−c))zA + z² − c²v`.
pub fn cubic(z: Complex64, params: WignerLawParams) -> [Complex64; 4] {
    let WignerLawParams { c, v } = params;
    let z2 = z * z;
    [
        z2 - c * c * v,
        (z2 + 2.0 * v * (1.0 - c)) * z,
        2.0 * v * z2 + (1.0 - 2.0 * c) * v * v,
        v * v * z,
    ]
}

/// Depressed form `y³ + p y + q` of the monic cubic at `z`.
pub fn cubic_coefficients(z: Complex64, params: WignerLawParams) -> CubicCoefficients {
    let k = cubic(z, params);
    let (b, c, d) = (k[2] / k[3], k[1] / k[3], k[0] / k[3]);
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    CubicCoefficients { p_of_z: p, q_of_z: q, disc: -(4.0 * p * p * p + 27.0 * q * q) }
}

fn nearest(roots: &[Complex64], target: Complex64) -> Option<(Complex64, f64, f64)> {
    let mut d: Vec<(f64, Complex64)> = roots.iter().map(|r| ((r - target).norm(), *r)).collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0));
    let first = *d.first()?;
    let second = d.get(1).map_or(f64::INFINITY, |x| x.0);
    Some((first.1, first.0, second))
}

/// Stieltjes transform of the limiting law, `Im z > 0`.
pub fn wigner_stieltjes(z: Complex64, params: WignerLawParams) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("Stieltjes transform needs Im z > 0, got {z}")));
    }
    let WignerLawParams { c, v } = params;
    if c == 0.0 {
        return Ok(-1.0 / z);
    }
    if c == 1.0 {
        let r = (z * z - 4.0 * v).sqrt();
        let s1 = (-z + r) / (2.0 * v);
        let s2 = (-z - r) / (2.0 * v);
        return Ok(if s1.im >= s2.im { s1 } else { s2 });
    }
    // follow the Herglotz root from i·H down to z
    let height = 10.0 * (1.0 + z.norm() + v.sqrt());
    let top = Complex64::new(0.0, height);
    let mut current = nearest(&poly::roots(&cubic(top, params)), -1.0 / top)
        .ok_or_else(|| Error::Convergence("cubic has no roots".into()))?
        .0;
    let path = |t: f64| -> Complex64 {
        // horizontal leg, then a geometric vertical descent
        if t <= 0.5 {
            Complex64::new(2.0 * t * z.re, height)
        } else {
            let s = 2.0 * (t - 0.5);
            Complex64::new(z.re, height * (z.im / height).powf(s))
        }
    };
    let (mut t, mut h) = (0.0f64, 0.02f64);
    while t < 1.0 {
        let t_new = (t + h).min(1.0);
        let zn = if t_new == 1.0 { z } else { path(t_new) };
        let roots = poly::roots(&cubic(zn, params));
        match nearest(&roots, current) {
            Some((r, d1, d2)) if d1 < 0.3 * d2 && r.im > 0.0 => {
                current = r;
                t = t_new;
                h = (h * 1.5).min(0.05);
            }
            _ => {
                h *= 0.5;
                if h < 1e-12 {
                    return Err(Error::Convergence(format!(
                        "root tracking stalled near {zn} for c = {c}"
                    )));
                }
            }
        }
    }
    Ok(current)
}
