//! Roots of small complex polynomials (Aberth-Ehrlich iteration with a Newton
//! polish).

use num_complex::Complex64;

/// Value and derivative of `Σ c[k] z^k`.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `Σ c[k] z^k` (coefficients from the constant term up). Leading
/// zero coefficients are dropped.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg].norm() == 0.0 {
        deg -= 1;
    }
    if deg == 0 {
        return Vec::new();
    }
    let c: Vec<Complex64> = coeffs[..=deg].iter().map(|&x| x / coeffs[deg]).collect();
    // Cauchy bound for the initial circle
    let bound = 1.0 + c[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let radius = bound.min(
        c[..deg]
            .iter()
            .enumerate()
            .map(|(k, x)| x.norm().powf(1.0 / (deg - k) as f64))
            .fold(0.0, f64::max)
            .max(1e-8)
            * 2.0,
    );
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let (p, dp) = horner(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let step = ratio / (1.0 - ratio * s);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        let (p, dp) = horner(&c, *zi);
        let step = p / dp;
        if step.re.is_finite() && step.im.is_finite() {
            let cand = *zi - step;
            if horner(&c, cand).0.norm() <= p.norm() {
                *zi = cand;
            }
        }
    }
    z
}
