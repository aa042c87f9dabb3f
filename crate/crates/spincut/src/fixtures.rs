//! Deterministic test surfaces.
//!
//! - flat grid tori over an arbitrary lattice basis (edge lengths only, no
//!   embedding), with the diagonal running along `b1 + b2`,
//! - a genus-2 surface made of two unit grid tori glued along a removed
//!   face,
//! - the unit icosahedron and its sphere-projected subdivisions.

use std::collections::HashMap;

use crate::surface::Mesh;

fn norm2(v: [f64; 2]) -> f64 {
    (v[0] * v[0] + v[1] * v[1]).sqrt()
}

/// Flat torus for the lattice spanned by `b1`, `b2`, triangulated by an
/// `n x n` grid with `(i, j) -> (i+1, j+1)` diagonals. Vertex `(i, j)` has
/// index `j * n + i`.
pub fn grid_torus(n: usize, b1: [f64; 2], b2: [f64; 2]) -> Mesh {
    assert!(n >= 3, "grid torus needs n >= 3");
    let det = b1[0] * b2[1] - b1[1] * b2[0];
    assert!(det.abs() > 1e-12, "degenerate lattice");
    let idx = |i: usize, j: usize| (j % n) * n + (i % n);
    let mut faces = Vec::with_capacity(2 * n * n);
    let mut lengths = Vec::with_capacity(3 * n * n);
    let l1 = norm2(b1) / n as f64;
    let l2 = norm2(b2) / n as f64;
    let ld = norm2([b1[0] + b2[0], b1[1] + b2[1]]) / n as f64;
    for j in 0..n {
        for i in 0..n {
            let (v, vx, vy, vxy) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
            faces.push([v, vx, vxy]);
            faces.push([v, vxy, vy]);
            lengths.push((v, vx, l1));
            lengths.push((v, vy, l2));
            lengths.push((v, vxy, ld));
        }
    }
    Mesh::from_edge_lengths(n * n, faces, &lengths).expect("grid torus is valid")
}

/// Unit-square flat torus, area exactly 1.
pub fn unit_grid_torus(n: usize) -> Mesh {
    grid_torus(n, [1.0, 0.0], [0.0, 1.0])
}

/// Mildly sheared lattice torus; the shear keeps grid paths within a few
/// percent of the flat geodesics.
pub fn sheared_torus(n: usize) -> Mesh {
    grid_torus(n, [1.0, 0.0], [0.2, 1.0])
}

/// Vertex loop winding once along the `b1` direction in row `row`.
pub fn horizontal_loop(n: usize, row: usize) -> Vec<usize> {
    (0..n).map(|i| (row % n) * n + i).collect()
}

/// Vertex loop winding once along the `b2` direction in column `col`.
pub fn vertical_loop(n: usize, col: usize) -> Vec<usize> {
    (0..n).map(|j| j * n + (col % n)).collect()
}

/// Genus-2 surface: two unit grid tori, one triangle removed from each,
/// glued along the resulting boundary with matching edge lengths.
///
/// The removed triangle is face `(0, 1, n+1)` of each torus; the boundary
/// circles are identified orientation-compatibly, pairing legs with legs and
/// the diagonal with the diagonal.
pub fn genus2_fixture(n: usize) -> Mesh {
    assert!(n >= 4, "genus-2 fixture needs n >= 4");
    let torus = unit_grid_torus(n);
    let nn = n * n;
    let remap = genus2_remap(n);

    let hole = [0usize, 1, n + 1];
    let mut faces: Vec<[usize; 3]> = Vec::with_capacity(2 * torus.faces().len() - 2);
    for f in torus.faces() {
        if *f == hole {
            continue;
        }
        faces.push(*f);
    }
    for f in torus.faces() {
        if *f == hole {
            continue;
        }
        faces.push([remap(f[0]), remap(f[1]), remap(f[2])]);
    }

    let mut lengths: HashMap<(usize, usize), f64> = HashMap::new();
    let mut push = |a: usize, b: usize, len: f64| {
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&old) = lengths.get(&key) {
            assert!((old - len).abs() < 1e-12, "glued edges must agree in length");
        } else {
            lengths.insert(key, len);
        }
    };
    for (id, &(a, b)) in torus.edges().iter().enumerate() {
        let len = torus.edge_length(id);
        push(a, b, len);
        push(remap(a), remap(b), len);
    }
    let flat: Vec<(usize, usize, f64)> = lengths.iter().map(|(&(a, b), &l)| (a, b, l)).collect();
    Mesh::from_edge_lengths(2 * nn - 3, faces, &flat).expect("genus-2 fixture is valid")
}

/// Merged vertex id of a local vertex of the second torus. The hole corners
/// are identified as `0 <-> n+1`, `1 <-> 1`, `n+1 <-> 0` (diagonal to
/// diagonal, legs to legs); everything else packs after the first torus.
fn genus2_remap(n: usize) -> impl Fn(usize) -> usize {
    let nn = n * n;
    move |w: usize| {
        if w == 0 {
            n + 1
        } else if w == 1 {
            1
        } else if w == n + 1 {
            0
        } else {
            nn + w - 2 - usize::from(w > n + 1)
        }
    }
}

/// A meridian of one handle of [`genus2_fixture`], avoiding the glued seam.
/// `handle` is 0 or 1.
pub fn genus2_handle_loop(n: usize, handle: usize) -> Vec<usize> {
    let local = vertical_loop(n, 2);
    match handle {
        0 => local,
        1 => local.into_iter().map(genus2_remap(n)).collect(),
        _ => panic!("handle must be 0 or 1"),
    }
}

/// Unit-radius icosahedron.
pub fn icosahedron() -> Mesh {
    let t = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let raw: [[f64; 3]; 12] = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let positions: Vec<[f64; 3]> = raw.iter().map(|p| normalize(*p)).collect();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    Mesh::from_positions(positions, faces).expect("icosahedron is valid")
}

fn normalize(p: [f64; 3]) -> [f64; 3] {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

/// Icosahedron subdivided `level` times with all vertices projected to the
/// unit sphere; `10 * 4^level + 2` vertices.
pub fn icosphere(level: usize) -> Mesh {
    let base = icosahedron();
    let mut positions = base.positions().unwrap().to_vec();
    let mut faces = base.faces().to_vec();
    for _ in 0..level {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(4 * faces.len());
        for f in &faces {
            let [a, b, c] = *f;
            let ab = sphere_midpoint(a, b, &mut positions, &mut cache);
            let bc = sphere_midpoint(b, c, &mut positions, &mut cache);
            let ca = sphere_midpoint(c, a, &mut positions, &mut cache);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    Mesh::from_positions(positions, faces).expect("icosphere is valid")
}

fn sphere_midpoint(
    a: usize,
    b: usize,
    positions: &mut Vec<[f64; 3]>,
    cache: &mut HashMap<(usize, usize), usize>,
) -> usize {
    let key = if a < b { (a, b) } else { (b, a) };
    *cache.entry(key).or_insert_with(|| {
        let (pa, pb) = (positions[a], positions[b]);
        positions.push(normalize([
            (pa[0] + pb[0]) / 2.0,
            (pa[1] + pb[1]) / 2.0,
            (pa[2] + pb[2]) / 2.0,
        ]));
        positions.len() - 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_torus_edge_counts() {
        let m = unit_grid_torus(5);
        assert_eq!(m.vertex_count(), 25);
        assert_eq!(m.edges().len(), 75);
        assert_eq!(m.faces().len(), 50);
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn rectangle_torus_area() {
        let m = grid_torus(6, [2.0, 0.0], [0.0, 1.0]);
        assert!((m.area() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn loops_are_cycles() {
        let n = 6;
        let m = unit_grid_torus(n);
        let h = m.cycle(horizontal_loop(n, 2)).unwrap();
        let v = m.cycle(vertical_loop(n, 3)).unwrap();
        assert!(h.is_simple() && v.is_simple());
        assert!((h.length(&m) - 1.0).abs() < 1e-12);
        assert!((v.length(&m) - 1.0).abs() < 1e-12);
        assert_eq!(m.intersection_mod2(&h, &v), 1);
    }

    #[test]
    fn genus2_handle_loops_are_disjoint_simple() {
        let n = 6;
        let m = genus2_fixture(n);
        let c0 = m.cycle(genus2_handle_loop(n, 0)).unwrap();
        let c1 = m.cycle(genus2_handle_loop(n, 1)).unwrap();
        assert!(c0.is_simple() && c1.is_simple());
        assert!(!c0.shares_vertex_with(&c1));
        assert_eq!(m.intersection_mod2(&c0, &c1), 0);
    }

    #[test]
    fn genus2_area_is_two_tori_minus_holes() {
        let n = 8;
        let m = genus2_fixture(n);
        let hole = 0.5 / ((n * n) as f64);
        assert!((m.area() - (2.0 - 2.0 * hole)).abs() < 1e-9);
    }

    #[test]
    fn icosphere_counts() {
        for (level, verts) in [(0, 12), (1, 42), (2, 162), (3, 642)] {
            let m = icosphere(level);
            assert_eq!(m.vertex_count(), verts);
            assert_eq!(m.genus(), 0);
        }
    }
}
