//! Limiting spectral laws: point masses plus an absolutely continuous part on a
//! finite union of intervals.

use crate::quadrature::integrate_edges;
use std::fmt;
use std::sync::Arc;

/// Point mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub loc: f64,
    pub mass: f64,
}

/// Behaviour of the law at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroBehavior {
    /// Density has a finite limit (possibly zero) at 0.
    FiniteLimit(f64),
    /// Density blows up at 0.
    InfiniteLimit,
    /// Point mass at 0.
    Atom(f64),
}

/// Absolutely continuous part of a law.
pub trait ContinuousPart: Send + Sync {
    fn density(&self, x: f64) -> f64;
    /// Mass on `[a, b]`.
    fn mass(&self, a: f64, b: f64) -> f64;
}

/// Continuous part given by a density on closed intervals; each interval edge
/// carries the substitution power used by the quadrature near it.
pub struct DensityPart<F> {
    pub density: F,
    /// `(lo, hi, power at lo, power at hi)`.
    pub pieces: Vec<(f64, f64, f64, f64)>,
    pub abs_tol: f64,
}

impl<F: Fn(f64) -> f64 + Send + Sync> ContinuousPart for DensityPart<F> {
    fn density(&self, x: f64) -> f64 {
        (self.density)(x)
    }

    fn mass(&self, a: f64, b: f64) -> f64 {
        let mut total = 0.0;
        for &(lo, hi, pl, pr) in &self.pieces {
            let l = a.max(lo);
            let h = b.min(hi);
            if h > l {
                let pl = if l == lo { pl } else { 1.0 };
                let pr = if h == hi { pr } else { 1.0 };
                total += integrate_edges(&self.density, l, h, pl, pr, self.abs_tol);
            }
        }
        total
    }
}

/// Probability law on the real line: atoms, support intervals, continuous part.
#[derive(Clone)]
pub struct SpectralLaw {
    atoms: Vec<Atom>,
    support: Vec<(f64, f64)>,
    zero: ZeroBehavior,
    part: Option<Arc<dyn ContinuousPart>>,
}

impl fmt::Debug for SpectralLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralLaw")
            .field("atoms", &self.atoms)
            .field("support", &self.support)
            .field("zero", &self.zero)
            .finish()
    }
}

impl SpectralLaw {
    pub fn new(
        atoms: Vec<Atom>,
        support: Vec<(f64, f64)>,
        zero: ZeroBehavior,
        part: Option<Arc<dyn ContinuousPart>>,
    ) -> Self {
        SpectralLaw { atoms, support, zero, part }
    }

    /// Unit mass at `loc`.
    pub fn dirac(loc: f64) -> Self {
        let zero = if loc == 0.0 { ZeroBehavior::Atom(1.0) } else { ZeroBehavior::FiniteLimit(0.0) };
        SpectralLaw { atoms: vec![Atom { loc, mass: 1.0 }], support: Vec::new(), zero, part: None }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Closed intervals carrying the continuous part (atoms not included).
    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    pub fn zero_behavior(&self) -> ZeroBehavior {
        self.zero
    }

    /// Smallest interval containing all atoms and the continuous support.
    pub fn hull(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in &self.atoms {
            lo = lo.min(a.loc);
            hi = hi.max(a.loc);
        }
        for &(a, b) in &self.support {
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    /// Density of the continuous part, zero outside the support.
    pub fn density(&self, x: f64) -> f64 {
        if !self.support.iter().any(|&(a, b)| x >= a && x <= b) {
            return 0.0;
        }
        self.part.as_ref().map_or(0.0, |p| p.density(x))
    }

    /// Continuous mass on `[a, b]`.
    pub fn continuous_mass(&self, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        self.part.as_ref().map_or(0.0, |p| p.mass(a, b))
    }

    /// Total atomic mass on the half-open interval `[a, b)`.
    pub fn atom_mass(&self, a: f64, b: f64) -> f64 {
        self.atoms.iter().filter(|x| x.loc >= a && x.loc < b).map(|x| x.mass).sum()
    }

    /// Mass of `[a, b)`.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        self.atom_mass(a, b) + self.continuous_mass(a, b)
    }

    /// Distribution function `μ((−∞, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        let atoms: f64 = self.atoms.iter().filter(|a| a.loc <= x).map(|a| a.mass).sum();
        let (lo, _) = self.hull();
        atoms + self.continuous_mass(lo.min(x), x)
    }

    /// Atoms plus integrated density.
    pub fn total_mass(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.mass).sum();
        atoms + self.support.iter().map(|&(a, b)| self.continuous_mass(a, b)).sum::<f64>()
    }
}
