//! Main branch `W` of the inverse of `f`, by Newton continuation from a small
//! anchor near the origin.

use super::{f_kg, f_kg_prime, forbidden_set, Kappa, LTParams};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

const MAX_NEWTON: usize = 60;
const MIN_STEP: f64 = 1e-12;

/// Three-term expansion of `W` at the origin.
pub fn taylor3(z: Complex64, params: &LTParams) -> Complex64 {
    let g = params.gamma();
    let c3 = match params.kappa() {
        Kappa::Infinite => g * g - 3.0 * g + 1.5,
        Kappa::Finite(k) => g * g - 3.0 * g + (3.0 * k + 1.0) / (2.0 * k),
    };
    z + (g - 1.0) * z * z + c3 * z * z * z
}

/// Main-branch Lambert-Tsallis function: the holomorphic solution of
/// `f(W(z)) = z` on the complement of the closed forbidden set with `W(0) = 0`.
pub fn w_main(z: Complex64, params: &LTParams) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if let Some(red) = params.reduction() {
        let w = w_main(z, &red.params)?;
        return Ok(red.inverse(w));
    }
    if z.im < 0.0 {
        return w_upper(z.conj(), params).map(|w| w.conj());
    }
    w_upper(z, params)
}

fn newton(mut w: Complex64, z: Complex64, params: &LTParams) -> Option<Complex64> {
    for _ in 0..MAX_NEWTON {
        let r = f_kg(w, params).ok()? - z;
        let d = f_kg_prime(w, params).ok()?;
        let step = r / d;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return None;
        }
        w -= step;
        if step.norm() <= 1e-14 * w.norm() || step.norm() < 1e-300 {
            // one extra step to land at rounding level
            let r = f_kg(w, params).ok()? - z;
            let d = f_kg_prime(w, params).ok()?;
            let last = r / d;
            if last.norm() <= step.norm() {
                w -= last;
            }
            return Some(w);
        }
    }
    None
}

fn advance(w: Complex64, z_old: Complex64, z_new: Complex64, params: &LTParams) -> Option<Complex64> {
    let d = f_kg_prime(w, params).ok()?;
    let pred = w + (z_new - z_old) / d;
    let w_new = newton(pred, z_new, params)?;
    let moved = (pred - w).norm();
    if (w_new - pred).norm() > 0.25 * moved + 1e-12 * (1.0 + w_new.norm()) {
        return None;
    }
    if z_new.im > 0.0 && w_new.im <= 0.0 {
        return None;
    }
    Some(w_new)
}

fn w_upper(z: Complex64, params: &LTParams) -> Result<Complex64> {
    let s = forbidden_set(params);
    if z.im == 0.0 && s.closure_contains(z.re) {
        return Err(Error::Domain(format!(
            "{z} lies in the closed forbidden set [{}, {}] of {params}",
            s.lo, s.hi
        )));
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rho = (0.5 * s.hi.abs()).min(0.01);
    let radius = z.norm();
    let phi = z.arg();

    if radius <= rho {
        if let Some(w) = newton(taylor3(z, params), z, params) {
            return finish(w, z, params);
        }
    }

    // radial leg at angle min(phi, pi/2), then an arc at the target radius
    let phi_ray = phi.min(FRAC_PI_2);
    let start = rho.min(radius);
    let z0 = Complex64::from_polar(start, phi_ray);
    let mut w = newton(taylor3(z0, params), z0, params)
        .ok_or_else(|| Error::Convergence(format!("anchor solve failed at {z0} for {params}")))?;
    let mut zc = z0;

    let (mut t, t_end) = (start.ln(), radius.ln());
    let mut h = 0.2;
    while t < t_end {
        let t_new = (t + h).min(t_end);
        let z_new = Complex64::from_polar(t_new.exp(), phi_ray);
        match advance(w, zc, z_new, params) {
            Some(w_new) => {
                w = w_new;
                zc = z_new;
                t = t_new;
                h = (h * 1.5).min(1.0);
            }
            None => {
                h *= 0.5;
                if h < MIN_STEP {
                    return Err(Error::Convergence(format!(
                        "radial continuation stalled at {z_new} towards {z} for {params}"
                    )));
                }
            }
        }
    }

    let mut a = phi_ray;
    let mut h = 0.05;
    while a < phi {
        let a_new = (a + h).min(phi);
        let z_new = if a_new == phi { z } else { Complex64::from_polar(radius, a_new) };
        match advance(w, zc, z_new, params) {
            Some(w_new) => {
                w = w_new;
                zc = z_new;
                a = a_new;
                h = (h * 1.5).min(0.2);
            }
            None => {
                h *= 0.5;
                if h < MIN_STEP {
                    return Err(Error::Convergence(format!(
                        "angular continuation stalled at {z_new} towards {z} for {params}"
                    )));
                }
            }
        }
    }
    if zc != z {
        w = advance(w, zc, z, params)
            .ok_or_else(|| Error::Convergence(format!("final correction failed at {z} for {params}")))?;
    }
    finish(w, z, params)
}

fn finish(mut w: Complex64, z: Complex64, params: &LTParams) -> Result<Complex64> {
    if z.im == 0.0 {
        w.im = 0.0;
        if let Some(wr) = newton(w, z, params) {
            w = Complex64::new(wr.re, 0.0);
        }
    }
    let res = (f_kg(w, params)? - z).norm();
    if !(res <= 1e-11 * (1.0 + z.norm())) {
        return Err(Error::Convergence(format!(
            "residual {res:e} at {z} for {params} exceeds tolerance"
        )));
    }
    Ok(w)
}
