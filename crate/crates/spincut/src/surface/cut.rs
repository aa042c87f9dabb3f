//! Cutting a closed surface along a system of disjoint simple cycles.
//!
//! Cutting duplicates every vertex on the cut: the two cut edges through a
//! cut vertex split its face umbrella into two arcs, and one arc is moved to
//! a fresh copy of the vertex. For a valid cut (`g` disjoint simple cycles
//! with independent classes) the result is connected, has the same Euler
//! characteristic as the input, `2g` boundary circles, and closes up to a
//! genus-0 surface — all of which is asserted, not assumed.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use super::{edge_key, heron, subdivide_raw, Cycle, Mesh};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutError {
    /// A cut must consist of exactly `genus` curves.
    WrongCount { expected: usize, got: usize },
    NotSimple { index: usize },
    NotDisjoint { first: usize, second: usize },
    /// The classes of the cut curves are dependent over GF(2).
    DependentClasses,
}

impl fmt::Display for CutError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutError::WrongCount { expected, got } => {
                write!(f, "cut needs {expected} curves, got {got}")
            }
            CutError::NotSimple { index } => write!(f, "cut curve {index} is not simple"),
            CutError::NotDisjoint { first, second } => {
                write!(f, "cut curves {first} and {second} share a vertex")
            }
            CutError::DependentClasses => {
                write!(f, "cut curve classes are dependent in H_1(M, Z_2)")
            }
        }
    }
}

impl std::error::Error for CutError {}

/// The surface obtained by cutting a [`Mesh`] along a curve system. Edges on
/// the cut have exactly one face; everything else is as in a closed mesh.
#[derive(Clone)]
pub struct CutOpenMesh {
    positions: Option<Vec<[f64; 3]>>,
    faces: Vec<[usize; 3]>,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    edge_lengths: Vec<f64>,
    /// Per vertex: `(neighbor, edge id)`, sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
    boundary_components: Vec<Vec<usize>>,
    /// Maps each cut-open vertex to the original mesh vertex.
    projection: Vec<usize>,
}

impl CutOpenMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_length(&self, id: usize) -> f64 {
        self.edge_lengths[id]
    }

    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn boundary_components(&self) -> &[Vec<usize>] {
        &self.boundary_components
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Genus of the closed surface obtained by capping every boundary circle
    /// with a disk.
    pub fn closed_up_genus(&self) -> i64 {
        let chi_closed = self.euler_characteristic() + self.boundary_components.len() as i64;
        (2 - chi_closed) / 2
    }

    pub fn area(&self) -> f64 {
        let lookup: HashMap<(usize, usize), f64> = self
            .edges
            .iter()
            .zip(&self.edge_lengths)
            .map(|(&e, &l)| (e, l))
            .collect();
        self.faces
            .iter()
            .map(|f| {
                let l = |a: usize, b: usize| lookup[&edge_key(a, b)];
                heron(l(f[0], f[1]), l(f[1], f[2]), l(f[2], f[0]))
            })
            .sum()
    }

    /// Distance graph refined by 1-to-4 subdivision, with boundary
    /// components recomputed on the refined graph. Used for cut-diameter
    /// computations; the projection does not survive refinement.
    pub fn refined(&self, levels: usize) -> CutOpenMesh {
        let mut current = self.clone();
        for _ in 0..levels {
            let lookup: HashMap<(usize, usize), usize> = current
                .edges
                .iter()
                .enumerate()
                .map(|(i, &e)| (e, i))
                .collect();
            let (vertex_count, faces, lengths, positions) = subdivide_raw(
                current.vertex_count,
                &current.faces,
                |a, b| current.edge_lengths[lookup[&edge_key(a, b)]],
                current.positions.as_deref(),
                |a, b| lookup[&edge_key(a, b)],
                current.edges.len(),
            );
            let mut projection = current.projection.clone();
            projection.resize(vertex_count, usize::MAX);
            current = CutOpenMesh::assemble(positions, vertex_count, faces, lengths, projection);
        }
        current
    }

    /// Builds the derived structure (edges, adjacency, boundary walks) from
    /// faces and lengths, checking connectivity and boundary degrees.
    fn assemble(
        positions: Option<Vec<[f64; 3]>>,
        vertex_count: usize,
        faces: Vec<[usize; 3]>,
        lengths: BTreeMap<(usize, usize), f64>,
        projection: Vec<usize>,
    ) -> CutOpenMesh {
        let mut face_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in &faces {
            for k in 0..3 {
                *face_count.entry(edge_key(f[k], f[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        let edges: Vec<(usize, usize)> = face_count.keys().copied().collect();
        let edge_lengths: Vec<f64> = edges.iter().map(|e| lengths[e]).collect();
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
        for (id, &(a, b)) in edges.iter().enumerate() {
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        // connectivity
        let mut seen = vec![false; vertex_count];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut visited = 1;
        while let Some(v) = queue.pop_front() {
            for &(u, _) in &adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    visited += 1;
                    queue.push_back(u);
                }
            }
        }
        assert_eq!(visited, vertex_count, "cut-open surface must be connected");

        // boundary: edges in exactly one face; every boundary vertex carries
        // exactly two boundary edges, so the boundary is a union of circles
        let mut boundary_nbrs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&(a, b), &count) in &face_count {
            assert!(count <= 2, "edge ({a}, {b}) in {count} faces after cutting");
            if count == 1 {
                boundary_nbrs.entry(a).or_default().push(b);
                boundary_nbrs.entry(b).or_default().push(a);
            }
        }
        for (v, nbrs) in &boundary_nbrs {
            assert_eq!(nbrs.len(), 2, "boundary vertex {v} has {} boundary edges", nbrs.len());
        }
        let mut boundary_components = Vec::new();
        let mut visited_b: std::collections::HashSet<usize> = std::collections::HashSet::new();
        for &start in boundary_nbrs.keys() {
            if visited_b.contains(&start) {
                continue;
            }
            let mut loop_vs = vec![start];
            visited_b.insert(start);
            let mut prev = start;
            let mut here = *boundary_nbrs[&start].iter().min().unwrap();
            while here != start {
                visited_b.insert(here);
                loop_vs.push(here);
                let nbrs = &boundary_nbrs[&here];
                let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
                prev = here;
                here = next;
            }
            boundary_components.push(loop_vs);
        }

        CutOpenMesh {
            positions,
            faces,
            vertex_count,
            edges,
            edge_lengths,
            adjacency,
            boundary_components,
            projection,
        }
    }
}

impl fmt::Debug for CutOpenMesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CutOpenMesh(V={}, E={}, F={}, boundary={})",
            self.vertex_count,
            self.edges.len(),
            self.faces.len(),
            self.boundary_components.len()
        )
    }
}

impl Mesh {
    /// Cuts the mesh along `cut`, a system of exactly `genus` pairwise
    /// vertex-disjoint simple cycles whose classes are independent over
    /// GF(2). The metric pulls back, so the projection is a local isometry.
    pub fn cut_along(&self, cut: &[Cycle]) -> Result<CutOpenMesh, CutError> {
        let g = self.genus();
        if cut.len() != g {
            return Err(CutError::WrongCount { expected: g, got: cut.len() });
        }
        for (i, c) in cut.iter().enumerate() {
            if !c.is_simple() {
                return Err(CutError::NotSimple { index: i });
            }
        }
        for i in 0..cut.len() {
            for j in i + 1..cut.len() {
                if cut[i].shares_vertex_with(&cut[j]) {
                    return Err(CutError::NotDisjoint { first: i, second: j });
                }
            }
        }
        if g > 0 {
            let basis = self.homology_basis();
            let rows: Vec<crate::gf2::GfVector> =
                cut.iter().map(|c| basis.class_of(self, c)).collect();
            if crate::gf2::BitMatrix::from_rows(rows).rank() != g {
                return Err(CutError::DependentClasses);
            }
        }

        // neighbors of each cut vertex along its curve
        let mut cut_nbrs: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for c in cut {
            let n = c.len();
            for i in 0..n {
                let prev = c.vertices()[(i + n - 1) % n];
                let here = c.vertices()[i];
                let next = c.vertices()[(i + 1) % n];
                cut_nbrs.insert(here, (prev, next));
            }
        }

        // split each cut vertex's umbrella at the two cut edges; faces in the
        // arc [p, q) keep the vertex, the rest move to a fresh copy
        let mut vertex_count = self.vertex_count();
        let mut projection: Vec<usize> = (0..vertex_count).collect();
        let mut corner_moves: HashMap<(usize, usize), usize> = HashMap::new(); // (face, old v) -> new v
        for (&v, &(n1, n2)) in &cut_nbrs {
            let rot = self.rotation(v);
            let _deg = rot.len();
            let p1 = self.rotation_pos(v, n1);
            let p2 = self.rotation_pos(v, n2);
            let (p, q) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
            let copy = vertex_count;
            vertex_count += 1;
            projection.push(v);
            for (j, &(_, face)) in rot.iter().enumerate() {
                let side_a = p <= j && j < q;
                if !side_a {
                    corner_moves.insert((face, v), copy);
                }
            }
        }

        let faces: Vec<[usize; 3]> = self
            .faces()
            .iter()
            .enumerate()
            .map(|(fi, f)| {
                let mut out = *f;
                for corner in out.iter_mut() {
                    if let Some(&copy) = corner_moves.get(&(fi, *corner)) {
                        *corner = copy;
                    }
                }
                out
            })
            .collect();

        // pull the metric (and embedding) back through the projection
        let mut lengths: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for f in &faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let orig = self
                    .edge_id(projection[a], projection[b])
                    .expect("cut faces project to mesh edges");
                lengths.insert(edge_key(a, b), self.edge_length(orig));
            }
        }
        let positions = self.positions().map(|pos| {
            projection.iter().map(|&v| pos[v]).collect::<Vec<_>>()
        });

        let open = CutOpenMesh::assemble(positions, vertex_count, faces, lengths, projection);

        // Certified invariants of a cut along independent simple curves.
        assert_eq!(open.euler_characteristic(), self.euler_characteristic());
        assert_eq!(open.boundary_components().len(), 2 * cut.len());
        if cut.len() == g {
            assert_eq!(open.closed_up_genus(), 0);
        }
        // projection: a bijection away from the cut, a double cover on it
        let mut preimages = vec![0usize; self.vertex_count()];
        for &orig in open.projection() {
            preimages[orig] += 1;
        }
        for (v, &count) in preimages.iter().enumerate() {
            let expected = if cut_nbrs.contains_key(&v) { 2 } else { 1 };
            assert_eq!(count, expected, "projection multiplicity at vertex {v}");
        }
        Ok(open)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn torus_cut_along_meridian_is_cylinder() {
        let n = 6;
        let m = fixtures::unit_grid_torus(n);
        let meridian = m.cycle((0..n).map(|j| j * n).collect()).unwrap();
        let open = m.cut_along(&[meridian]).unwrap();
        assert_eq!(open.boundary_components().len(), 2);
        assert_eq!(open.euler_characteristic(), 0);
        assert_eq!(open.closed_up_genus(), 0);
        assert!((open.area() - m.area()).abs() < 1e-12);
        assert_eq!(open.vertex_count(), m.vertex_count() + n);
    }

    #[test]
    fn genus2_cut_along_two_handles() {
        let n = 6;
        let m = fixtures::genus2_fixture(n);
        let c1 = m.cycle(fixtures::genus2_handle_loop(n, 0)).unwrap();
        let c2 = m.cycle(fixtures::genus2_handle_loop(n, 1)).unwrap();
        let open = m.cut_along(&[c1, c2]).unwrap();
        assert_eq!(open.boundary_components().len(), 4);
        assert_eq!(open.euler_characteristic(), -2);
        assert_eq!(open.closed_up_genus(), 0);
        assert!((open.area() - m.area()).abs() < 1e-12);
    }

    #[test]
    fn face_boundary_cut_rejected_as_dependent() {
        let m = fixtures::unit_grid_torus(6);
        let f = m.faces()[0];
        let fb = m.cycle(f.to_vec()).unwrap();
        assert_eq!(m.cut_along(&[fb]).unwrap_err(), CutError::DependentClasses);
    }

    #[test]
    fn wrong_count_and_overlap_rejected() {
        let n = 6;
        let m = fixtures::unit_grid_torus(n);
        assert_eq!(
            m.cut_along(&[]).unwrap_err(),
            CutError::WrongCount { expected: 1, got: 0 }
        );

        let m2 = fixtures::genus2_fixture(n);
        let c1 = m2.cycle(fixtures::genus2_handle_loop(n, 0)).unwrap();
        let c1b = c1.clone();
        assert_eq!(
            m2.cut_along(&[c1, c1b]).unwrap_err(),
            CutError::NotDisjoint { first: 0, second: 1 }
        );
    }

    #[test]
    fn nonsimple_rejected() {
        let n = 6;
        let m = fixtures::unit_grid_torus(n);
        let walk = m.cycle(vec![0, 1]).unwrap();
        assert_eq!(m.cut_along(&[walk]).unwrap_err(), CutError::NotSimple { index: 0 });
    }

    #[test]
    fn refinement_preserves_boundary_count_and_area() {
        let n = 6;
        let m = fixtures::unit_grid_torus(n);
        let meridian = m.cycle((0..n).map(|j| j * n).collect()).unwrap();
        let open = m.cut_along(&[meridian]).unwrap();
        let fine = open.refined(2);
        assert_eq!(fine.boundary_components().len(), 2);
        assert!((fine.area() - open.area()).abs() < 1e-12);
        assert_eq!(fine.faces().len(), open.faces().len() * 16);
    }
}
