//! Empirical spectral measures and their comparison with a limiting law.

use crate::error::{Error, Result};
use crate::law::SpectralLaw;
use crate::profile_solver::VarianceProfile;
use faer::Mat;

/// Sorted eigenvalues of one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSpectrum {
    eigenvalues: Vec<f64>,
}

impl EmpiricalSpectrum {
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::Empty("spectrum has no eigenvalues".into()));
        }
        if eigenvalues.iter().any(|x| x.is_nan()) {
            return Err(Error::Parameter("spectrum contains NaN".into()));
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(EmpiricalSpectrum { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Right-continuous distribution function.
    pub fn cdf(&self, x: f64) -> f64 {
        self.eigenvalues.partition_point(|&e| e <= x) as f64 / self.n() as f64
    }

    /// Left limit of the distribution function.
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.eigenvalues.partition_point(|&e| e < x) as f64 / self.n() as f64
    }

    /// Fraction of eigenvalues in each of `bins` equal cells of `[lo, hi]`.
    /// The right edge belongs to the last cell; values outside are dropped.
    pub fn histogram(&self, lo: f64, hi: f64, bins: usize) -> Result<Vec<f64>> {
        if bins == 0 || !(hi > lo) {
            return Err(Error::Parameter(format!("bad histogram range [{lo}, {hi}] with {bins} bins")));
        }
        let mut h = vec![0.0; bins];
        let w = (hi - lo) / bins as f64;
        let unit = 1.0 / self.n() as f64;
        for &e in &self.eigenvalues {
            if e < lo || e > hi {
                continue;
            }
            let k = (((e - lo) / w) as usize).min(bins - 1);
            h[k] += unit;
        }
        Ok(h)
    }

    /// Smallest and largest eigenvalue.
    pub fn range(&self) -> (f64, f64) {
        (self.eigenvalues[0], self.eigenvalues[self.n() - 1])
    }
}

/// Distances between an empirical spectrum and a law.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub ks: f64,
    pub l1: f64,
    pub atom_estimate: f64,
    pub support_estimate: (f64, f64),
    pub bins: usize,
    pub n: usize,
    /// Bin edges used for `l1`.
    pub range: (f64, f64),
}

/// Compare `eigs` with `law` on `bins` equal cells covering both the law and
/// the sample, padded by 5% on each side.
///
/// Eigenvalues within `atom_window` of an atom are moved onto it before the
/// distances are computed; `l1` is the sum over cells of |empirical mass − law
/// mass|, and `ks` is the largest CDF gap over cell edges and eigenvalues.
pub fn compare(
    eigs: &EmpiricalSpectrum,
    law: &SpectralLaw,
    bins: usize,
    atom_window: f64,
) -> Result<ComparisonReport> {
    if bins < 2 {
        return Err(Error::Parameter(format!("need at least 2 bins, got {bins}")));
    }
    let n = eigs.n();
    let near_atom = |e: f64| law.atoms().iter().find(|a| (e - a.loc).abs() <= atom_window);
    let inside = eigs.eigenvalues().iter().filter(|&&e| near_atom(e).is_some()).count();
    let atom_estimate = inside as f64 / n as f64;
    let snapped = EmpiricalSpectrum::new(
        eigs.eigenvalues().iter().map(|&e| near_atom(e).map_or(e, |a| a.loc)).collect(),
    )?;

    let (emin, emax) = eigs.range();
    let (llo, lhi) = law.hull();
    let lo0 = emin.min(llo);
    let hi0 = emax.max(lhi);
    let pad = 0.05 * (hi0 - lo0).max(1e-9);
    let (lo, hi) = (lo0 - pad, hi0 + pad);
    let w = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|k| lo + w * k as f64).collect();

    let hist = snapped.histogram(lo, hi, bins)?;
    let cont: Vec<f64> = (0..bins).map(|k| law.continuous_mass(edges[k], edges[k + 1])).collect();
    let mut atom_bins = vec![0.0; bins];
    for a in law.atoms() {
        if a.loc >= lo && a.loc <= hi {
            atom_bins[(((a.loc - lo) / w) as usize).min(bins - 1)] += a.mass;
        }
    }
    let l1: f64 = (0..bins).map(|k| (hist[k] - cont[k] - atom_bins[k]).abs()).sum();

    // law CDF on the merged grid of edges and eigenvalues, continuous mass
    // accumulated piece by piece, atoms added exactly
    let mut grid: Vec<f64> = edges.iter().chain(snapped.eigenvalues()).copied().collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let atoms_upto = |x: f64, inclusive: bool| -> f64 {
        law.atoms()
            .iter()
            .filter(|a| if inclusive { a.loc <= x } else { a.loc < x })
            .map(|a| a.mass)
            .sum()
    };
    let mut ks = 0.0f64;
    let mut cont = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for &x in &grid {
        if prev.is_finite() {
            cont += law.continuous_mass(prev, x);
        }
        prev = x;
        ks = ks.max((snapped.cdf(x) - cont - atoms_upto(x, true)).abs());
        ks = ks.max((snapped.cdf_left(x) - cont - atoms_upto(x, false)).abs());
    }

    Ok(ComparisonReport {
        ks,
        l1,
        atom_estimate,
        support_estimate: (emin, emax),
        bins,
        n,
        range: (lo, hi),
    })
}

/// Average absolute gap `(1/n²) Σ |n·Var(Y_ij) − σ_cell(i,j)|` between the
/// entry variances estimated across `replicas` (already rescaled by `1/√n`)
/// and the cell values of `profile`.
pub fn profile_deviation(replicas: &[Mat<f64>], profile: &VarianceProfile) -> Result<f64> {
    if replicas.len() < 2 {
        return Err(Error::Parameter(format!("need at least 2 replicas, got {}", replicas.len())));
    }
    let n = replicas[0].nrows();
    if replicas.iter().any(|r| r.nrows() != n || r.ncols() != n) {
        return Err(Error::Dimension("replicas must share one square shape".into()));
    }
    let r = replicas.len() as f64;
    let m = profile.m();
    let mut total = 0.0;
    for j in 0..n {
        for i in 0..n {
            let mean = replicas.iter().map(|x| x[(i, j)]).sum::<f64>() / r;
            let var = replicas.iter().map(|x| (x[(i, j)] - mean).powi(2)).sum::<f64>() / (r - 1.0);
            let cell = profile.value(i * m / n, j * m / n);
            total += (n as f64 * var - cell).abs();
        }
    }
    Ok(total / (n * n) as f64)
}
