//! Exact Dirac spectrum of a flat 2-torus, used as an end-to-end oracle.
//!
//! For the torus `R² / Λ` with lattice basis `(b1, b2)` and twist bits
//! `(ε1, ε2)`, the eigenvalues are `±2π|ξ|` for `ξ` in the shifted dual
//! lattice `Λ* + (ε1/2) b1* + (ε2/2) b2*`, each with multiplicity two.
//!
//! The twist convention is pinned by two facts, checked in the tests rather
//! than assumed: the trivial structure (`ε = (0,0)`, form values `(1,1)`)
//! must have `0` in the spectrum for every lattice, and the three nontrivial
//! structures must have a spectral gap. Together with the Arf invariants
//! this determines the shift uniquely.
//!
//! Stored form values follow the convention `q = 0` on a class iff the
//! structure is nontrivial along it, so `q_i = 1 - ε_i`.

use std::fmt;

use crate::bounds::{self, BoundsError};
use crate::cutmetrics::{delta_flat_torus, MetricError};
use crate::gf2::{QuadraticForm, SymplecticSpace};

/// A flat torus with one of its four spin structures.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatTorus {
    b1: [f64; 2],
    b2: [f64; 2],
    /// Form values on the generator classes, `q_i = 1 - ε_i`.
    q: (u8, u8),
}

/// All `|λ|` below the cutoff, sorted, with multiplicities; complete by the
/// coefficient-bound certificate in [`FlatTorus::spectrum`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSlice {
    pub entries: Vec<(f64, usize)>,
    pub cutoff: f64,
}

impl SpectrumSlice {
    pub fn min_abs(&self) -> Option<f64> {
        self.entries.first().map(|&(v, _)| v)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }
}

/// Outcome of checking the torus eigenvalue bound against the exact
/// spectrum, for every `k` in the scan window.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusVerification {
    pub area: f64,
    pub delta: f64,
    pub lambda_min: f64,
    pub best_k: usize,
    pub best_bound: f64,
    /// `lambda_min - best_bound`; positive when the check passes.
    pub margin: f64,
    pub window: (usize, usize),
    pub all_pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FlatTorusError {
    Metric(MetricError),
    Bounds(BoundsError),
    NonPositiveCutoff(f64),
}

impl fmt::Display for FlatTorusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatTorusError::Metric(e) => write!(f, "{e}"),
            FlatTorusError::Bounds(e) => write!(f, "{e}"),
            FlatTorusError::NonPositiveCutoff(c) => write!(f, "cutoff must be positive, got {c}"),
        }
    }
}

impl std::error::Error for FlatTorusError {}

impl From<MetricError> for FlatTorusError {
    fn from(e: MetricError) -> Self {
        FlatTorusError::Metric(e)
    }
}

impl From<BoundsError> for FlatTorusError {
    fn from(e: BoundsError) -> Self {
        FlatTorusError::Bounds(e)
    }
}

fn det2(b1: [f64; 2], b2: [f64; 2]) -> f64 {
    b1[0] * b2[1] - b1[1] * b2[0]
}

impl FlatTorus {
    /// Constructor from twist bits `ε` (1 means nontrivial along that
    /// generator).
    pub fn new(b1: [f64; 2], b2: [f64; 2], eps: (u8, u8)) -> Result<Self, FlatTorusError> {
        FlatTorus::from_q(b1, b2, (1 - (eps.0 & 1), 1 - (eps.1 & 1)))
    }

    /// Constructor from form values on the generators.
    pub fn from_q(b1: [f64; 2], b2: [f64; 2], q: (u8, u8)) -> Result<Self, FlatTorusError> {
        if det2(b1, b2).abs() < 1e-12 {
            return Err(FlatTorusError::Metric(MetricError::DegenerateLattice));
        }
        Ok(FlatTorus { b1, b2, q: (q.0 & 1, q.1 & 1) })
    }

    pub fn basis(&self) -> ([f64; 2], [f64; 2]) {
        (self.b1, self.b2)
    }

    pub fn q(&self) -> (u8, u8) {
        self.q
    }

    pub fn eps(&self) -> (u8, u8) {
        (1 - self.q.0, 1 - self.q.1)
    }

    pub fn area(&self) -> f64 {
        det2(self.b1, self.b2).abs()
    }

    /// The trivial structure is exactly `q = (1, 1)`, the one with Arf `-1`.
    pub fn is_trivial(&self) -> bool {
        self.q == (1, 1)
    }

    /// The quadratic form on the standard genus-1 symplectic space.
    pub fn quadratic_form(&self) -> QuadraticForm {
        QuadraticForm::from_bits(SymplecticSpace::standard(1), &[self.q.0, self.q.1])
    }

    /// Dual basis with `b_i* · b_j = δ_ij`.
    pub fn dual_basis(&self) -> ([f64; 2], [f64; 2]) {
        let d = det2(self.b1, self.b2);
        ([self.b2[1] / d, -self.b2[0] / d], [-self.b1[1] / d, self.b1[0] / d])
    }

    pub fn scaled(&self, t: f64) -> FlatTorus {
        FlatTorus {
            b1: [t * self.b1[0], t * self.b1[1]],
            b2: [t * self.b2[0], t * self.b2[1]],
            q: self.q,
        }
    }

    /// All dual points `ξ` with `|ξ| <= rho`. Writing `ξ = α b1* + β b2*`,
    /// the coefficients satisfy `α = ξ · b1`, so `|α| <= rho |b1|` and the
    /// integer ranges below are certified complete.
    fn dual_points_within(&self, rho: f64) -> Vec<[f64; 2]> {
        let (d1, d2) = self.dual_basis();
        let (e1, e2) = (self.eps().0 as f64 / 2.0, self.eps().1 as f64 / 2.0);
        let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
        let m_lo = (-rho * norm(self.b1) - e1).floor() as i64 - 1;
        let m_hi = (rho * norm(self.b1) - e1).ceil() as i64 + 1;
        let n_lo = (-rho * norm(self.b2) - e2).floor() as i64 - 1;
        let n_hi = (rho * norm(self.b2) - e2).ceil() as i64 + 1;
        let mut out = Vec::new();
        for m in m_lo..=m_hi {
            for n in n_lo..=n_hi {
                let a = m as f64 + e1;
                let b = n as f64 + e2;
                let xi = [a * d1[0] + b * d2[0], a * d1[1] + b * d2[1]];
                if norm(xi) <= rho {
                    out.push(xi);
                }
            }
        }
        out
    }

    /// Sorted `|λ|` values below `cutoff` with multiplicities; every dual
    /// point contributes multiplicity two (positive and negative chirality).
    pub fn spectrum(&self, cutoff: f64) -> Result<SpectrumSlice, FlatTorusError> {
        if cutoff <= 0.0 || cutoff.is_nan() {
            return Err(FlatTorusError::NonPositiveCutoff(cutoff));
        }
        let tau = std::f64::consts::TAU;
        let rho = cutoff / tau;
        let mut values: Vec<f64> = self
            .dual_points_within(rho)
            .into_iter()
            .map(|xi| tau * (xi[0] * xi[0] + xi[1] * xi[1]).sqrt())
            .filter(|&l| l <= cutoff)
            .collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut entries: Vec<(f64, usize)> = Vec::new();
        for v in values {
            match entries.last_mut() {
                Some((last, mult)) if (v - *last).abs() <= 1e-9 * (1.0 + v) => *mult += 2,
                _ => entries.push((v, 2)),
            }
        }
        Ok(SpectrumSlice { entries, cutoff })
    }

    /// Smallest `|λ|`; zero exactly for the trivial structure.
    pub fn min_abs_eigenvalue(&self) -> f64 {
        if self.eps() == (0, 0) {
            return 0.0;
        }
        let tau = std::f64::consts::TAU;
        let (d1, d2) = self.dual_basis();
        let (e1, e2) = (self.eps().0 as f64 / 2.0, self.eps().1 as f64 / 2.0);
        // upper bound from small coefficients, then exact enumeration below it
        let mut upper = f64::INFINITY;
        for m in -2..=2i64 {
            for n in -2..=2i64 {
                let a = m as f64 + e1;
                let b = n as f64 + e2;
                let xi = [a * d1[0] + b * d2[0], a * d1[1] + b * d2[1]];
                upper = upper.min((xi[0] * xi[0] + xi[1] * xi[1]).sqrt());
            }
        }
        let best = self
            .dual_points_within(upper + 1e-12)
            .into_iter()
            .map(|xi| (xi[0] * xi[0] + xi[1] * xi[1]).sqrt())
            .fold(f64::INFINITY, f64::min);
        tau * best
    }

    /// Checks the eigenvalue bound at every `k` in the scan window against
    /// the exact smallest eigenvalue, using the closed-form spin-cut
    /// diameter. Rejects the trivial structure.
    pub fn verify_torus_theorem(&self) -> Result<TorusVerification, FlatTorusError> {
        if self.is_trivial() {
            return Err(FlatTorusError::Metric(MetricError::TrivialSpinStructure));
        }
        let area = self.area();
        let delta = delta_flat_torus(self.b1, self.b2, self.q)?;
        let lambda_min = self.min_abs_eigenvalue();
        let window = bounds::scan_window(area, delta);
        let mut all_pass = true;
        let mut best = (window.0, f64::NEG_INFINITY);
        for k in window.0..=window.1 {
            let bound = bounds::torus_bound(area, delta, k)?;
            if lambda_min < bound - 1e-9 {
                all_pass = false;
            }
            if bound > best.1 {
                best = (k, bound);
            }
        }
        Ok(TorusVerification {
            area,
            delta,
            lambda_min,
            best_k: best.0,
            best_bound: best.1,
            margin: lambda_min - best.1,
            window,
            all_pass,
        })
    }
}
