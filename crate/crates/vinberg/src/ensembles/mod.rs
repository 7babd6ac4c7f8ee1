//! Random Wigner and Wishart matrices with the daisy-graph zero pattern, the
//! symmetric eigensolver, and empirical spectral measures.

mod empirical;

pub use empirical::{compare, profile_deviation, ComparisonReport, EmpiricalSpectrum};

use crate::error::{Error, Result};
use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatRef, Par, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::str::FromStr;

/// Daisy graph: a complete hub of `a` vertices and `b` complete petals of `k`
/// vertices, every petal joined to the whole hub.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DaisyDims {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub k: usize,
}

impl DaisyDims {
    pub fn new(n: usize, a: usize, b: usize, k: usize) -> Result<Self> {
        if a == 0 || b == 0 || k == 0 {
            return Err(Error::Dimension(format!("need a, b, k >= 1, got a={a} b={b} k={k}")));
        }
        if a + k * b != n {
            return Err(Error::Dimension(format!("a + k*b = {} differs from n = {n}", a + k * b)));
        }
        Ok(DaisyDims { n, a, b, k })
    }

    /// Petal size 1.
    pub fn simple(n: usize, a: usize) -> Result<Self> {
        if a >= n {
            return Err(Error::Dimension(format!("hub size {a} must be below n = {n}")));
        }
        Self::new(n, a, n - a, 1)
    }

    /// Hub size `round(c·n)` clamped to `[1, n−1]`, petal size 1.
    pub fn from_fraction(n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("need n >= 2, got {n}")));
        }
        let a = ((c * n as f64).round() as usize).clamp(1, n - 1);
        Self::simple(n, a)
    }

    fn petal(&self, i: usize) -> Option<usize> {
        (i >= self.a).then(|| (i - self.a) / self.k)
    }

    /// True when `{i, j}` is an edge (or `i = j`).
    pub fn is_edge(&self, i: usize, j: usize) -> bool {
        match (self.petal(i), self.petal(j)) {
            (Some(p), Some(q)) => p == q,
            _ => true,
        }
    }
}

/// Centered, unit-variance base law of the matrix entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryDist {
    Gaussian,
    Rademacher,
    Uniform,
}

impl EntryDist {
    pub fn sample<R: Rng>(self, rng: &mut R) -> f64 {
        match self {
            EntryDist::Gaussian => rng.sample(StandardNormal),
            EntryDist::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            EntryDist::Uniform => 3f64.sqrt() * (2.0 * rng.random::<f64>() - 1.0),
        }
    }
}

impl FromStr for EntryDist {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "normal" => Ok(EntryDist::Gaussian),
            "rademacher" => Ok(EntryDist::Rademacher),
            "uniform" => Ok(EntryDist::Uniform),
            _ => Err(Error::Parameter(format!("unknown entry law {s:?}"))),
        }
    }
}

/// Entry variances and base law of a Wigner matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerParams {
    pub v: f64,
    pub v_diag: f64,
    pub dist: EntryDist,
}

impl WignerParams {
    pub fn new(v: f64, v_diag: f64, dist: EntryDist) -> Result<Self> {
        if !(v > 0.0 && v.is_finite() && v_diag > 0.0 && v_diag.is_finite()) {
            return Err(Error::Parameter(format!("variances must be positive, got v={v} v_diag={v_diag}")));
        }
        Ok(WignerParams { v, v_diag, dist })
    }

    /// Diagonal variance `2v`, as in the orthogonal Gaussian ensemble.
    pub fn with_variance(v: f64, dist: EntryDist) -> Result<Self> {
        Self::new(v, 2.0 * v, dist)
    }
}

/// Number of copies of each column type: `m1` everywhere plus `m2` on petals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WishartIndex {
    pub m1: usize,
    pub m2: usize,
    pub v: f64,
}

impl WishartIndex {
    pub fn new(m1: usize, m2: usize, v: f64) -> Result<Self> {
        if m1 + m2 == 0 {
            return Err(Error::Empty("m1 = m2 = 0 gives an empty factor".into()));
        }
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Parameter(format!("variance must be positive, got {v}")));
        }
        Ok(WishartIndex { m1, m2, v })
    }

    /// Total column count `m1·n + m2·b`.
    pub fn columns(&self, dims: &DaisyDims) -> usize {
        self.m1 * dims.n + self.m2 * dims.b
    }
}

/// Symmetric Wigner matrix with the daisy zero pattern (not rescaled).
pub fn sample_wigner_vinberg(dims: &DaisyDims, params: &WignerParams, seed: u64) -> Result<Mat<f64>> {
    DaisyDims::new(dims.n, dims.a, dims.b, dims.k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = dims.n;
    let (s_off, s_diag) = (params.v.sqrt(), params.v_diag.sqrt());
    let mut m = Mat::<f64>::zeros(n, n);
    for j in 0..n {
        for i in 0..=j {
            if i == j {
                m[(i, i)] = s_diag * params.dist.sample(&mut rng);
            } else if dims.is_edge(i, j) {
                let x = s_off * params.dist.sample(&mut rng);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
    }
    Ok(m)
}

/// Rows on which column type `j` is supported.
fn column_rows(dims: &DaisyDims, j: usize) -> impl Iterator<Item = usize> {
    let a = dims.a;
    let hub = j < a;
    (0..a.max(j + 1)).filter(move |&i| if hub { i <= j } else { i < a || i == j })
}

/// Factor `η` (n × N) of the quadratic Wishart construction; needs petal size 1.
pub fn sample_wishart_factor(
    dims: &DaisyDims,
    index: &WishartIndex,
    dist: EntryDist,
    seed: u64,
) -> Result<Mat<f64>> {
    DaisyDims::new(dims.n, dims.a, dims.b, dims.k)?;
    if dims.k != 1 {
        return Err(Error::Dimension(format!("Wishart factor needs petal size 1, got {}", dims.k)));
    }
    WishartIndex::new(index.m1, index.m2, index.v)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = index.v.sqrt();
    let mut eta = Mat::<f64>::zeros(dims.n, index.columns(dims));
    let mut col = 0;
    for j in 0..dims.n {
        let copies = index.m1 + if j >= dims.a { index.m2 } else { 0 };
        for _ in 0..copies {
            for i in column_rows(dims, j) {
                eta[(i, col)] = s * dist.sample(&mut rng);
            }
            col += 1;
        }
    }
    Ok(eta)
}

/// Staircase factor (n × N): entry `(i, c)` is non-null iff `c ≥ slope·i`
/// (0-based). Realizes the trapezoid variance profile for any real slope.
pub fn sample_staircase_factor(
    n: usize,
    big_n: usize,
    slope: f64,
    v: f64,
    dist: EntryDist,
    seed: u64,
) -> Result<Mat<f64>> {
    if n == 0 || big_n == 0 {
        return Err(Error::Dimension(format!("empty factor {n} x {big_n}")));
    }
    if !(slope >= 0.0 && v > 0.0) {
        return Err(Error::Parameter(format!("need slope >= 0 and v > 0, got {slope}, {v}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = v.sqrt();
    let mut eta = Mat::<f64>::zeros(n, big_n);
    for c in 0..big_n {
        for i in 0..n {
            if c as f64 >= slope * i as f64 - 1e-9 {
                eta[(i, c)] = s * dist.sample(&mut rng);
            }
        }
    }
    Ok(eta)
}

/// `η ηᵀ / scale`, symmetrized exactly.
pub fn gram(eta: MatRef<'_, f64>, scale: f64) -> Mat<f64> {
    let n = eta.nrows();
    let mut q = Mat::<f64>::zeros(n, n);
    matmul(q.as_mut(), Accum::Replace, eta, eta.transpose(), 1.0 / scale, Par::Seq);
    for j in 0..n {
        for i in 0..j {
            let m = 0.5 * (q[(i, j)] + q[(j, i)]);
            q[(i, j)] = m;
            q[(j, i)] = m;
        }
    }
    q
}

/// `[[0, ξ], [ξᵀ, 0]]`.
pub fn bipartite_embed(xi: MatRef<'_, f64>) -> Mat<f64> {
    let (n, big_n) = (xi.nrows(), xi.ncols());
    let mut y = Mat::<f64>::zeros(n + big_n, n + big_n);
    for c in 0..big_n {
        for i in 0..n {
            y[(i, n + c)] = xi[(i, c)];
            y[(n + c, i)] = xi[(i, c)];
        }
    }
    y
}

/// Full spectrum of a symmetric matrix, sorted non-decreasingly.
pub fn eigenvalues_sym(m: MatRef<'_, f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Dimension(format!("matrix is {} x {}", n, m.ncols())));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut scale = 0.0f64;
    let mut asym = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            scale = scale.max(m[(i, j)].abs());
            if i < j {
                asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
    }
    if asym > 1e-10 * scale {
        return Err(Error::NotSymmetric(asym / scale));
    }
    let mut ev = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Convergence(format!("symmetric eigensolver: {e:?}")))?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Scale every entry of `m` by `s` in place.
pub fn scale_in_place(m: &mut Mat<f64>, s: f64) {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            m[(i, j)] *= s;
        }
    }
}
