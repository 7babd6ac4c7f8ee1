//! Numerical solution of the variance-profile fixed-point equation
//! `η(x) = −(z + ∫ σ(x,y) η(y) dy)^{−1}` for piecewise-constant profiles, and
//! density recovery from Stieltjes transforms.

use crate::error::{Error, Result};
use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par};
use num_complex::Complex64;

/// Profile families.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Constant { v: f64 },
    /// `v` on `min(x, y) ≤ c`.
    WignerCorner { c: f64, v: f64 },
    /// `v` on `{x < p, y ≥ p + αx}` and its transpose.
    Trapezoid { p: f64, alpha: f64, v: f64 },
    /// `v` on `{x < c·p′, y ≥ p′ + m1·x}` and its transpose, `p′ = 1/(1 + m1 + m2(1−c))`.
    GeneralVinberg { c: f64, m1: f64, m2: f64, v: f64 },
    /// Explicit symmetric cell values.
    Custom(Vec<Vec<f64>>),
}

/// Piecewise-constant symmetric profile on an `m × m` grid of `[0,1]²`.
#[derive(Debug, Clone)]
pub struct VarianceProfile {
    grid: Mat<f64>,
    pub v_scale: f64,
}

impl VarianceProfile {
    pub fn m(&self) -> usize {
        self.grid.nrows()
    }

    /// Cell value.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.grid[(i, j)]
    }

    pub fn grid(&self) -> &Mat<f64> {
        &self.grid
    }
}

/// Area of `{x < x_max, y ≥ y0 + slope·x}` inside `[x0,x1] × [ya,yb]`.
fn wedge_area(x0: f64, x1: f64, ya: f64, yb: f64, x_max: f64, y0: f64, slope: f64) -> f64 {
    let xe = x1.min(x_max);
    if xe <= x0 {
        return 0.0;
    }
    let h = yb - ya;
    let g = |x: f64| (yb - (y0 + slope * x).max(ya)).clamp(0.0, h);
    let mut pts = vec![x0, xe];
    if slope != 0.0 {
        for y in [ya, yb] {
            let x = (y - y0) / slope;
            if x > x0 && x < xe {
                pts.push(x);
            }
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.windows(2).map(|w| 0.5 * (w[1] - w[0]) * (g(w[0]) + g(w[1]))).sum()
}

fn wedge_grid(m: usize, x_max: f64, y0: f64, slope: f64, v: f64) -> Mat<f64> {
    let h = 1.0 / m as f64;
    let cell = h * h;
    let mut w = Mat::<f64>::zeros(m, m);
    for i in 0..m {
        let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
        if x0 >= x_max {
            continue;
        }
        for j in 0..m {
            let (ya, yb) = (j as f64 * h, (j + 1) as f64 * h);
            w[(i, j)] = wedge_area(x0, x1, ya, yb, x_max, y0, slope) / cell;
        }
    }
    Mat::from_fn(m, m, |i, j| v * (w[(i, j)] + w[(j, i)]))
}

/// Cell-averaged discretization with exact area fractions on cut cells.
pub fn make_profile(kind: &ProfileKind, m: usize) -> Result<VarianceProfile> {
    if m == 0 {
        return Err(Error::Parameter("grid size must be positive".into()));
    }
    let pos = |v: f64| -> Result<()> {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::Parameter(format!("variance must be positive, got {v}")))
        }
    };
    let h = 1.0 / m as f64;
    let (grid, v_scale) = match *kind {
        ProfileKind::Constant { v } => {
            pos(v)?;
            (Mat::from_fn(m, m, |_, _| v), v)
        }
        ProfileKind::WignerCorner { c, v } => {
            pos(v)?;
            if !(0.0..=1.0).contains(&c) {
                return Err(Error::Parameter(format!("corner size must lie in [0,1], got {c}")));
            }
            let g = Mat::from_fn(m, m, |i, j| {
                let ox = ((i + 1) as f64 * h - (i as f64 * h).max(c)).max(0.0);
                let oy = ((j + 1) as f64 * h - (j as f64 * h).max(c)).max(0.0);
                v * (1.0 - ox * oy / (h * h))
            });
            (g, v)
        }
        ProfileKind::Trapezoid { p, alpha, v } => {
            pos(v)?;
            if !(p > 0.0 && p < 1.0 && alpha >= 0.0 && alpha <= (1.0 - p) / p + 1e-12) {
                return Err(Error::Parameter(format!("need 0<p<1 and 0<=alpha<=(1-p)/p, got p={p} alpha={alpha}")));
            }
            (wedge_grid(m, p, p, alpha, v), v)
        }
        ProfileKind::GeneralVinberg { c, m1, m2, v } => {
            pos(v)?;
            if !(c > 0.0 && c <= 1.0 && m1 >= 0.0 && m2 >= 0.0 && m1 + m2 > 0.0) {
                return Err(Error::Parameter(format!("bad general profile c={c} m1={m1} m2={m2}")));
            }
            let pp = 1.0 / (1.0 + m1 + m2 * (1.0 - c));
            (wedge_grid(m, c * pp, pp, m1, v), v)
        }
        ProfileKind::Custom(ref rows) => {
            if rows.len() != m || rows.iter().any(|r| r.len() != m) {
                return Err(Error::Dimension(format!("custom profile must be {m} x {m}")));
            }
            let mut vmax = 0.0f64;
            for i in 0..m {
                for j in 0..m {
                    let x = rows[i][j];
                    if !(x.is_finite() && x >= 0.0) || x != rows[j][i] {
                        return Err(Error::Parameter(format!("custom profile entry ({i},{j}) invalid or asymmetric")));
                    }
                    vmax = vmax.max(x);
                }
            }
            (Mat::from_fn(m, m, |i, j| rows[i][j]), vmax.max(f64::MIN_POSITIVE))
        }
    };
    Ok(VarianceProfile { grid, v_scale })
}

/// Solution of the discretized fixed-point equation at one `z`.
#[derive(Debug, Clone)]
pub struct EtaField {
    pub values: Vec<Complex64>,
    pub z: Complex64,
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
}

impl EtaField {
    /// Cell average of `η`.
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-10, max_iter: 10_000, damping: 0.5 }
    }
}

fn picard(
    z: Complex64,
    profile: &VarianceProfile,
    seed: Vec<Complex64>,
    opts: &SolverOptions,
) -> Result<EtaField> {
    let m = profile.m();
    let mut eta = Mat::<f64>::from_fn(m, 2, |i, k| if k == 0 { seed[i].re } else { seed[i].im });
    let mut prod = Mat::<f64>::zeros(m, 2);
    let inv_m = 1.0 / m as f64;
    let mut history = Vec::new();
    for it in 1..=opts.max_iter {
        matmul(prod.as_mut(), Accum::Replace, profile.grid.as_ref(), eta.as_ref(), inv_m, Par::Seq);
        let mut res = 0.0f64;
        for i in 0..m {
            let g = -1.0 / (z + Complex64::new(prod[(i, 0)], prod[(i, 1)]));
            let cur = Complex64::new(eta[(i, 0)], eta[(i, 1)]);
            res = res.max((g - cur).norm());
            let next = cur + (g - cur) * opts.damping;
            eta[(i, 0)] = next.re;
            eta[(i, 1)] = next.im;
        }
        if !res.is_finite() {
            return Err(Error::Convergence(format!("fixed-point iteration diverged at z = {z}")));
        }
        if it % 500 == 0 {
            history.push(res);
        }
        if res <= opts.tol {
            let values: Vec<Complex64> = (0..m).map(|i| Complex64::new(eta[(i, 0)], eta[(i, 1)])).collect();
            if values.iter().any(|v| !(v.im > 0.0)) {
                return Err(Error::Convergence(format!("fixed point at z = {z} left the upper half-plane")));
            }
            return Ok(EtaField { values, z, converged: true, iterations: it, residual: res });
        }
    }
    Err(Error::Convergence(format!(
        "no convergence at z = {z} after {} iterations; residual every 500 steps: {history:?}",
        opts.max_iter
    )))
}

/// Solve at `z` from an explicit seed (no continuation).
pub fn solve_eta_seeded(
    z: Complex64,
    profile: &VarianceProfile,
    seed: Vec<Complex64>,
    opts: &SolverOptions,
) -> Result<EtaField> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("need Im z > 0, got {z}")));
    }
    if seed.len() != profile.m() {
        return Err(Error::Dimension(format!("seed length {} differs from grid size {}", seed.len(), profile.m())));
    }
    picard(z, profile, seed, opts)
}

/// Damped Picard iteration seeded with `−1/z`. For `Im z ≤ 1` the solve starts at
/// `z + i` and walks the imaginary part down in steps of 0.1.
pub fn solve_eta(z: Complex64, profile: &VarianceProfile, tol: f64, max_iter: usize) -> Result<EtaField> {
    let opts = SolverOptions { tol, max_iter, ..SolverOptions::default() };
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!("need Im z > 0, got {z}")));
    }
    let m = profile.m();
    if z.im > 1.0 {
        return picard(z, profile, vec![-1.0 / z; m], &opts);
    }
    let steps = 10;
    let start = z + Complex64::new(0.0, 1.0);
    let mut field = picard(start, profile, vec![-1.0 / start; m], &opts)?;
    let mut total = field.iterations;
    for k in 1..=steps {
        let zk = if k == steps { z } else { Complex64::new(z.re, z.im + 1.0 - 0.1 * k as f64) };
        field = picard(zk, profile, field.values, &opts)?;
        total += field.iterations;
    }
    field.iterations = total;
    Ok(field)
}

/// `∫ η_z`, the Stieltjes transform of the limiting law at `z`.
pub fn stieltjes_numeric(z: Complex64, profile: &VarianceProfile) -> Result<Complex64> {
    let o = SolverOptions::default();
    solve_eta(z, profile, o.tol, o.max_iter).map(|f| f.mean())
}

/// Density at `x` from `(1/π) Im S(x + iy)` on a decreasing `y` ladder,
/// extrapolated to `y = 0` by Richardson (polynomial in `y`) extrapolation.
pub fn density_from_stieltjes(
    s: impl Fn(Complex64) -> Result<Complex64>,
    x: f64,
    ladder: &[f64],
) -> Result<f64> {
    if ladder.len() < 3 || ladder.windows(2).any(|w| !(w[1] < w[0] && w[1] > 0.0)) {
        return Err(Error::Parameter("ladder must hold at least 3 decreasing positive values".into()));
    }
    let vals: Vec<f64> = ladder
        .iter()
        .map(|&y| s(Complex64::new(x, y)).map(|v| v.im / std::f64::consts::PI))
        .collect::<Result<_>>()?;
    // Im S growing like 1/y (rather than staying bounded) means a point mass
    // or a singularity at x; the cut sits halfway on a log scale
    let n = vals.len();
    let span = ladder[0] / ladder[n - 1];
    if vals[0] > 0.0 && vals[n - 1] > span.sqrt() * vals[0] {
        return Err(Error::Domain(format!("point mass or singularity detected at {x}")));
    }
    // Neville extrapolation to y = 0
    let mut p = vals.clone();
    for k in 1..n {
        for i in 0..n - k {
            let (ya, yb) = (ladder[i], ladder[i + k]);
            p[i] = (yb * p[i] - ya * p[i + 1]) / (yb - ya);
        }
    }
    let est = p[0];
    if !est.is_finite() {
        return Err(Error::Convergence(format!("ladder diverged at {x}")));
    }
    Ok(est.max(0.0))
}
