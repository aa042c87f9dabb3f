//! Discrete Willmore energy of embedded meshes.
//!
//! The mean curvature magnitude at a vertex comes from the cotangent
//! Laplacian: with mixed area `A_i`,
//!
//! ```text
//! K_i = (1 / 2A_i) Σ_j (cot α_ij + cot β_ij) (p_j - p_i),   H_i = |K_i| / 2,
//! ```
//!
//! and the energy is `W = Σ_i H_i² A_i`. Mixed areas are Voronoi areas with
//! the usual fallback for obtuse triangles (half the face area at the obtuse
//! corner, a quarter elsewhere). Only `|H|` is computed; the energy consumes
//! `H²`, so no orientation bookkeeping is needed.
//!
//! `W` is invariant under rigid motions exactly and under scaling up to
//! floating-point error, since `cot` weights are scale free and `H² A` is
//! dimensionless.

use std::fmt;

use crate::bounds;
use crate::cutmetrics::spin_cut_diameter_lower;
use crate::spin::{AbsenceReason, SearchBudget, SpinStructure};
use crate::surface::Mesh;

#[derive(Debug, Clone, PartialEq)]
pub enum WillmoreError {
    /// The mesh carries no embedding.
    MissingPositions,
    /// The torus theorem applies to genus 1 only.
    GenusNotOne { genus: usize },
    /// No spin-cut was witnessed, so no diameter is available.
    NoSpinCut(AbsenceReason),
    Bounds(bounds::BoundsError),
}

impl fmt::Display for WillmoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WillmoreError::MissingPositions => {
                write!(f, "mesh has no vertex positions; Willmore energy needs an embedding")
            }
            WillmoreError::GenusNotOne { genus } => {
                write!(f, "torus Willmore check needs genus 1, got {genus}")
            }
            WillmoreError::NoSpinCut(r) => write!(f, "no spin-cut witnessed: {r}"),
            WillmoreError::Bounds(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for WillmoreError {}

impl From<bounds::BoundsError> for WillmoreError {
    fn from(e: bounds::BoundsError) -> Self {
        WillmoreError::Bounds(e)
    }
}

/// Willmore energy with the per-vertex data it was assembled from.
#[derive(Debug, Clone)]
pub struct WillmoreResult {
    pub energy: f64,
    pub mean_curvature: Vec<f64>,
    pub mixed_areas: Vec<f64>,
}

/// Outcome of checking `sqrt(W) >= willmore_bound(area, δ)` with a
/// witnessed spin-cut diameter.
#[derive(Debug, Clone)]
pub struct WillmoreVerification {
    pub energy: f64,
    pub sqrt_energy: f64,
    pub area: f64,
    pub delta: f64,
    pub bound_k: usize,
    pub bound: f64,
    /// `sqrt(W) - bound`; positive when the check passes.
    pub margin: f64,
    /// Whether the bound beats the classical `W >= 4π`.
    pub exceeds_classical: bool,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Per-vertex mean curvature magnitudes and mixed areas.
pub fn mean_curvature_field(mesh: &Mesh) -> Result<(Vec<f64>, Vec<f64>), WillmoreError> {
    let Some(pos) = mesh.positions() else {
        return Err(WillmoreError::MissingPositions);
    };
    let v_count = mesh.vertex_count();
    let mut laplace = vec![[0.0f64; 3]; v_count];
    let mut mixed = vec![0.0f64; v_count];

    for face in mesh.faces() {
        let [a, b, c] = *face;
        let (pa, pb, pc) = (pos[a], pos[b], pos[c]);
        // cotangents at the three corners
        let cot = |apex: [f64; 3], u: [f64; 3], v: [f64; 3]| {
            let e1 = sub(u, apex);
            let e2 = sub(v, apex);
            let sin_area = norm(cross(e1, e2));
            if sin_area < 1e-300 {
                0.0
            } else {
                dot(e1, e2) / sin_area
            }
        };
        let cot_a = cot(pa, pb, pc);
        let cot_b = cot(pb, pc, pa);
        let cot_c = cot(pc, pa, pb);

        // cotangent weights accumulate on the edge opposite each corner
        let mut add = |i: usize, j: usize, w: f64| {
            let d = sub(pos[j], pos[i]);
            for t in 0..3 {
                laplace[i][t] += w * d[t];
            }
            let d = sub(pos[i], pos[j]);
            for t in 0..3 {
                laplace[j][t] += w * d[t];
            }
        };
        add(b, c, cot_a);
        add(c, a, cot_b);
        add(a, b, cot_c);

        // mixed area: Voronoi for non-obtuse faces, half/quarter otherwise
        let area = 0.5 * norm(cross(sub(pb, pa), sub(pc, pa)));
        let obtuse_a = cot_a < 0.0;
        let obtuse_b = cot_b < 0.0;
        let obtuse_c = cot_c < 0.0;
        if obtuse_a || obtuse_b || obtuse_c {
            let half = |is_obtuse: bool| if is_obtuse { area / 2.0 } else { area / 4.0 };
            mixed[a] += half(obtuse_a);
            mixed[b] += half(obtuse_b);
            mixed[c] += half(obtuse_c);
        } else {
            let l_ab = dot(sub(pb, pa), sub(pb, pa));
            let l_bc = dot(sub(pc, pb), sub(pc, pb));
            let l_ca = dot(sub(pa, pc), sub(pa, pc));
            mixed[a] += (l_ab * cot_c + l_ca * cot_b) / 8.0;
            mixed[b] += (l_ab * cot_c + l_bc * cot_a) / 8.0;
            mixed[c] += (l_bc * cot_a + l_ca * cot_b) / 8.0;
        }
    }

    let h = laplace
        .iter()
        .zip(&mixed)
        .map(|(l, &area)| norm(*l) / (2.0 * area) / 2.0)
        .collect();
    Ok((h, mixed))
}

/// Total Willmore energy `Σ H_i² A_i`.
pub fn willmore_energy(mesh: &Mesh) -> Result<WillmoreResult, WillmoreError> {
    let (mean_curvature, mixed_areas) = mean_curvature_field(mesh)?;
    let energy = mean_curvature
        .iter()
        .zip(&mixed_areas)
        .map(|(&h, &a)| h * h * a)
        .sum();
    Ok(WillmoreResult { energy, mean_curvature, mixed_areas })
}

/// Checks the Willmore lower bound on an embedded torus: computes `W`, the
/// area, a witnessed spin-cut diameter, and verifies
/// `sqrt(W) >= willmore_bound(area, δ)`.
pub fn check_willmore_theorem(
    mesh: &Mesh,
    spin: &SpinStructure,
    budget: &SearchBudget,
    subdivision: usize,
) -> Result<WillmoreVerification, WillmoreError> {
    if mesh.genus() != 1 {
        return Err(WillmoreError::GenusNotOne { genus: mesh.genus() });
    }
    let result = willmore_energy(mesh)?;
    let area = mesh.area();
    let delta = spin_cut_diameter_lower(mesh, spin, budget, subdivision)
        .map_err(WillmoreError::NoSpinCut)?
        .best;
    let (bound_k, bound) = bounds::willmore_bound(area, delta)?;
    let sqrt_energy = result.energy.sqrt();
    Ok(WillmoreVerification {
        energy: result.energy,
        sqrt_energy,
        area,
        delta,
        bound_k,
        bound,
        margin: sqrt_energy - bound,
        exceeds_classical: bound > (4.0 * std::f64::consts::PI).sqrt(),
    })
}

/// Analytic Willmore energy of the torus of revolution, via numerical
/// quadrature of `(π / 2r) ∫ (R + 2r cos v)² / (R + r cos v) dv`; used as an
/// independent oracle in the tests.
pub fn revolution_willmore_quadrature(major: f64, minor: f64, samples: usize) -> f64 {
    // Simpson's rule over one period
    let n = samples + samples % 2;
    let h = std::f64::consts::TAU / n as f64;
    let f = |v: f64| {
        let num = major + 2.0 * minor * v.cos();
        num * num / (major + minor * v.cos())
    };
    let mut sum = f(0.0) + f(std::f64::consts::TAU);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(i as f64 * h);
    }
    let integral = sum * h / 3.0;
    std::f64::consts::PI / (2.0 * minor) * integral
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::spin::torus_of_revolution;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    #[test]
    fn sphere_mean_curvature_is_one() {
        let m = fixtures::icosphere(4);
        let (h, _) = mean_curvature_field(&m).unwrap();
        for (i, &hi) in h.iter().enumerate() {
            assert!((hi - 1.0).abs() < 0.03, "H[{i}] = {hi}");
        }
    }

    #[test]
    fn scaled_sphere_halves_curvature() {
        let m = fixtures::icosphere(3);
        let scaled: Vec<[f64; 3]> = m
            .positions()
            .unwrap()
            .iter()
            .map(|p| [2.0 * p[0], 2.0 * p[1], 2.0 * p[2]])
            .collect();
        let m2 = Mesh::from_positions(scaled, m.faces().to_vec()).unwrap();
        let (h, _) = mean_curvature_field(&m2).unwrap();
        for &hi in &h {
            assert!((hi - 0.5).abs() < 0.02, "H = {hi}");
        }
    }

    #[test]
    fn flat_torus_has_no_positions() {
        let m = fixtures::unit_grid_torus(6);
        assert!(matches!(willmore_energy(&m), Err(WillmoreError::MissingPositions)));
    }

    #[test]
    fn sphere_energy_is_four_pi() {
        let m = fixtures::icosphere(4);
        let w = willmore_energy(&m).unwrap().energy;
        let target = 4.0 * PI;
        assert!((w - target).abs() / target < 0.02, "W = {w}");
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for (major, minor) in [(2.0_f64.sqrt(), 1.0), (2.0, 1.0), (3.0, 1.0), (1.7, 0.4)] {
            let closed = PI.powi(2) * major * major
                / (minor * (major * major - minor * minor).sqrt());
            let quad = revolution_willmore_quadrature(major, minor, 4096);
            assert!(
                (quad - closed).abs() < 1e-9 * closed,
                "R={major} r={minor}: {quad} vs {closed}"
            );
        }
    }

    #[test]
    fn revolution_torus_energy_matches_oracle() {
        // W(R=sqrt(2), r=1) = 2 pi^2, the conjectured global minimum shape
        let (mesh, _) = torus_of_revolution(2.0_f64.sqrt(), 1.0, 96, 96).unwrap();
        let w = willmore_energy(&mesh).unwrap().energy;
        let target = 2.0 * PI.powi(2);
        assert!((w - target).abs() / target < 0.02, "W = {w}, target = {target}");

        let (mesh, _) = torus_of_revolution(2.0, 1.0, 96, 96).unwrap();
        let w = willmore_energy(&mesh).unwrap().energy;
        let target = 4.0 * PI.powi(2) / 3.0_f64.sqrt();
        assert!((w - target).abs() / target < 0.02, "W = {w}, target = {target}");
    }

    #[test]
    fn refinement_converges_to_analytic_value() {
        let target = 2.0 * PI.powi(2);
        let errors: Vec<f64> = [24, 48, 96]
            .iter()
            .map(|&n| {
                let (mesh, _) = torus_of_revolution(2.0_f64.sqrt(), 1.0, n, n).unwrap();
                (willmore_energy(&mesh).unwrap().energy - target).abs()
            })
            .collect();
        assert!(errors[1] < errors[0]);
        assert!(errors[2] < errors[1]);
    }

    #[test]
    fn rigid_motion_invariance() {
        let (mesh, _) = torus_of_revolution(2.0, 1.0, 32, 32).unwrap();
        let w0 = willmore_energy(&mesh).unwrap().energy;
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..5 {
            let (a, b, c) = (
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let t = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
            let rot = |p: [f64; 3]| {
                let p = [p[0], p[1] * a.cos() - p[2] * a.sin(), p[1] * a.sin() + p[2] * a.cos()];
                let p = [p[0] * b.cos() + p[2] * b.sin(), p[1], -p[0] * b.sin() + p[2] * b.cos()];
                [
                    p[0] * c.cos() - p[1] * c.sin() + t[0],
                    p[0] * c.sin() + p[1] * c.cos() + t[1],
                    p[2] + t[2],
                ]
            };
            let moved: Vec<[f64; 3]> = mesh.positions().unwrap().iter().map(|&p| rot(p)).collect();
            let m2 = Mesh::from_positions(moved, mesh.faces().to_vec()).unwrap();
            let w = willmore_energy(&m2).unwrap().energy;
            assert!((w - w0).abs() < 1e-9 * w0, "{w} vs {w0}");
        }
    }

    #[test]
    fn scale_drift_within_tolerance() {
        let (mesh, _) = torus_of_revolution(2.0_f64.sqrt(), 1.0, 48, 48).unwrap();
        let w0 = willmore_energy(&mesh).unwrap().energy;
        for t in [0.3, 2.5, 10.0] {
            let scaled: Vec<[f64; 3]> = mesh
                .positions()
                .unwrap()
                .iter()
                .map(|p| [t * p[0], t * p[1], t * p[2]])
                .collect();
            let m2 = Mesh::from_positions(scaled, mesh.faces().to_vec()).unwrap();
            let w = willmore_energy(&m2).unwrap().energy;
            assert!((w - w0).abs() <= 0.02 * w0, "t={t}: {w} vs {w0}");
        }
    }

    #[test]
    fn willmore_theorem_on_revolution_tori() {
        let (mesh, spin) = torus_of_revolution(2.0_f64.sqrt(), 1.0, 48, 48).unwrap();
        let v = check_willmore_theorem(&mesh, &spin, &SearchBudget::default(), 0).unwrap();
        assert!(v.margin > 0.0, "margin = {}", v.margin);
        assert!((v.sqrt_energy - (2.0 * PI.powi(2)).sqrt()).abs() < 0.1);

        // a fatter torus has larger energy and still passes
        let (mesh3, spin3) = torus_of_revolution(3.0, 1.0, 48, 48).unwrap();
        let v3 = check_willmore_theorem(&mesh3, &spin3, &SearchBudget::default(), 0).unwrap();
        assert!(v3.margin > 0.0);
        assert!(v3.energy > v.energy);
    }

    #[test]
    fn willmore_theorem_rejects_sphere() {
        let m = fixtures::icosphere(2);
        let basis = std::sync::Arc::new(m.homology_basis());
        let spin = SpinStructure::from_basis_values(basis, &[]).unwrap();
        assert!(matches!(
            check_willmore_theorem(&m, &spin, &SearchBudget::default(), 0),
            Err(WillmoreError::GenusNotOne { genus: 0 })
        ));
    }
}
