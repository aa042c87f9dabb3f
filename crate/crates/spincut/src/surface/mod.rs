//! Triangulated oriented surfaces with an edge-length metric.
//!
//! A [`Mesh`] is a closed, connected, oriented triangle mesh. The metric is
//! carried by edge lengths, either derived from embedded vertex positions or
//! supplied directly (flat tori have no embedding). Curves are restricted to
//! edge paths, so all reported lengths are graph lengths of the discrete
//! model; see [`crate::cutmetrics`] for how the quantitative tests account
//! for that.
//!
//! Validation enforces, at construction time:
//! - every edge lies in exactly two faces with opposite induced orientations,
//! - the link of every vertex is a single cycle,
//! - the mesh is connected and every face satisfies the strict triangle
//!   inequality.

mod cut;
mod homology;
mod io;

pub use cut::{CutError, CutOpenMesh};
pub(crate) use homology::shortest_cycle_with_weights;
pub use homology::{shortest_cycle_in_class, CycleSearchError, HomologyBasis};
pub use io::{load_mesh, mesh_to_json, LoadedMesh, SpinSpec};

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum MeshError {
    Parse(String),
    BadIndex { face: usize, index: usize },
    DegenerateFace { face: usize },
    NonManifoldEdge { a: usize, b: usize, count: usize },
    OpenEdge { a: usize, b: usize },
    NonOrientable { a: usize, b: usize },
    NonManifoldVertex { vertex: usize },
    IsolatedVertex { vertex: usize },
    Disconnected,
    MissingLength { a: usize, b: usize },
    UnknownLengthEdge { a: usize, b: usize },
    NonPositiveLength { a: usize, b: usize },
    /// Both positions and explicit edge lengths were supplied.
    AmbiguousMetric,
    TriangleInequality { face: usize },
    BadCycle(String),
}

impl fmt::Display for MeshError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshError::Parse(msg) => write!(f, "parse error: {msg}"),
            MeshError::BadIndex { face, index } => {
                write!(f, "face {face} references vertex {index} out of range")
            }
            MeshError::DegenerateFace { face } => {
                write!(f, "face {face} repeats a vertex")
            }
            MeshError::NonManifoldEdge { a, b, count } => {
                write!(f, "edge ({a}, {b}) lies in {count} faces, expected 2")
            }
            MeshError::OpenEdge { a, b } => {
                write!(f, "edge ({a}, {b}) lies in only one face; surface not closed")
            }
            MeshError::NonOrientable { a, b } => {
                write!(f, "edge ({a}, {b}) has twice the same induced orientation")
            }
            MeshError::NonManifoldVertex { vertex } => {
                write!(f, "the link of vertex {vertex} is not a single cycle")
            }
            MeshError::IsolatedVertex { vertex } => {
                write!(f, "vertex {vertex} lies in no face")
            }
            MeshError::Disconnected => write!(f, "mesh is not connected"),
            MeshError::MissingLength { a, b } => {
                write!(f, "no length given for edge ({a}, {b})")
            }
            MeshError::UnknownLengthEdge { a, b } => {
                write!(f, "length given for nonexistent edge ({a}, {b})")
            }
            MeshError::NonPositiveLength { a, b } => {
                write!(f, "edge ({a}, {b}) has a nonpositive length")
            }
            MeshError::AmbiguousMetric => {
                write!(f, "both positions and explicit edge lengths supplied")
            }
            MeshError::TriangleInequality { face } => {
                write!(f, "face {face} violates the strict triangle inequality")
            }
            MeshError::BadCycle(msg) => write!(f, "invalid cycle: {msg}"),
        }
    }
}

impl std::error::Error for MeshError {}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A closed, connected, oriented triangle mesh with an edge-length metric.
#[derive(Clone)]
pub struct Mesh {
    positions: Option<Vec<[f64; 3]>>,
    faces: Vec<[usize; 3]>,
    vertex_count: usize,
    /// Sorted vertex pairs in lexicographic order; indices are edge ids.
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    edge_lengths: Vec<f64>,
    /// Per vertex: `(neighbor, edge id)`, sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Per vertex: cyclic rotation `(neighbor, face between it and the next)`.
    rotations: Vec<Vec<(usize, usize)>>,
    genus: usize,
}

impl Mesh {
    /// Builds a mesh from an embedding; edge lengths are Euclidean.
    pub fn from_positions(
        positions: Vec<[f64; 3]>,
        faces: Vec<[usize; 3]>,
    ) -> Result<Self, MeshError> {
        let vertex_count = positions.len();
        let mut lengths = BTreeMap::new();
        for face in &faces {
            for k in 0..3 {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                if a >= vertex_count || b >= vertex_count {
                    continue; // reported precisely by build()
                }
                let (pa, pb) = (positions[a], positions[b]);
                let d = ((pa[0] - pb[0]).powi(2)
                    + (pa[1] - pb[1]).powi(2)
                    + (pa[2] - pb[2]).powi(2))
                .sqrt();
                lengths.insert(edge_key(a, b), d);
            }
        }
        Mesh::build(Some(positions), vertex_count, faces, lengths)
    }

    /// Builds a mesh from faces and explicit edge lengths (no embedding).
    pub fn from_edge_lengths(
        vertex_count: usize,
        faces: Vec<[usize; 3]>,
        lengths: &[(usize, usize, f64)],
    ) -> Result<Self, MeshError> {
        let mut map = BTreeMap::new();
        for &(a, b, len) in lengths {
            map.insert(edge_key(a, b), len);
        }
        Mesh::build(None, vertex_count, faces, map)
    }

    fn build(
        positions: Option<Vec<[f64; 3]>>,
        vertex_count: usize,
        faces: Vec<[usize; 3]>,
        lengths: BTreeMap<(usize, usize), f64>,
    ) -> Result<Self, MeshError> {
        // face sanity
        for (fi, face) in faces.iter().enumerate() {
            for &v in face {
                if v >= vertex_count {
                    return Err(MeshError::BadIndex { face: fi, index: v });
                }
            }
            if face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
                return Err(MeshError::DegenerateFace { face: fi });
            }
        }

        // undirected edge census with orientation bookkeeping
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        let mut undirected: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (fi, face) in faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (face[k], face[(k + 1) % 3]);
                if directed.insert((a, b), fi).is_some() {
                    // same directed edge twice: either a third face on the
                    // undirected edge or an orientation clash
                    let total = faces
                        .iter()
                        .flat_map(|f| (0..3).map(move |k| edge_key(f[k], f[(k + 1) % 3])))
                        .filter(|&e| e == edge_key(a, b))
                        .count();
                    if total > 2 {
                        return Err(MeshError::NonManifoldEdge { a, b, count: total });
                    }
                    return Err(MeshError::NonOrientable { a, b });
                }
                *undirected.entry(edge_key(a, b)).or_insert(0) += 1;
            }
        }
        for (&(a, b), &count) in &undirected {
            match count {
                2 => {}
                1 => return Err(MeshError::OpenEdge { a, b }),
                n => return Err(MeshError::NonManifoldEdge { a, b, count: n }),
            }
        }

        // edge ids in lexicographic order
        let edges: Vec<(usize, usize)> = undirected.keys().copied().collect();
        let edge_index: HashMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        // metric
        let mut edge_lengths = vec![0.0; edges.len()];
        for (&e, &len) in &lengths {
            let Some(&id) = edge_index.get(&e) else {
                return Err(MeshError::UnknownLengthEdge { a: e.0, b: e.1 });
            };
            if len <= 0.0 || !len.is_finite() {
                return Err(MeshError::NonPositiveLength { a: e.0, b: e.1 });
            }
            edge_lengths[id] = len;
        }
        for (id, &(a, b)) in edges.iter().enumerate() {
            if edge_lengths[id] == 0.0 {
                return Err(MeshError::MissingLength { a, b });
            }
        }
        for (fi, face) in faces.iter().enumerate() {
            let l = |a: usize, b: usize| edge_lengths[edge_index[&edge_key(a, b)]];
            let (x, y, z) = (l(face[0], face[1]), l(face[1], face[2]), l(face[2], face[0]));
            if x + y <= z || y + z <= x || z + x <= y {
                return Err(MeshError::TriangleInequality { face: fi });
            }
        }

        // adjacency
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
        for (id, &(a, b)) in edges.iter().enumerate() {
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        for (v, list) in adjacency.iter().enumerate() {
            if list.is_empty() {
                return Err(MeshError::IsolatedVertex { vertex: v });
            }
        }

        // rotation system: the successor of neighbor u at v is the third
        // vertex of the unique face containing the directed edge (v, u)
        let mut rotations: Vec<Vec<(usize, usize)>> = Vec::with_capacity(vertex_count);
        for (v, adj) in adjacency.iter().enumerate() {
            let degree = adj.len();
            let start = adj[0].0;
            let mut order = Vec::with_capacity(degree);
            let mut current = start;
            loop {
                let &fi = directed
                    .get(&(v, current))
                    .ok_or(MeshError::NonManifoldVertex { vertex: v })?;
                let face = faces[fi];
                let pos = face.iter().position(|&x| x == v).unwrap();
                debug_assert_eq!(face[(pos + 1) % 3], current);
                let next = face[(pos + 2) % 3];
                order.push((current, fi));
                current = next;
                if current == start {
                    break;
                }
                if order.len() > degree {
                    return Err(MeshError::NonManifoldVertex { vertex: v });
                }
            }
            if order.len() != degree {
                return Err(MeshError::NonManifoldVertex { vertex: v });
            }
            rotations.push(order);
        }

        // connectivity
        let mut seen = vec![false; vertex_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
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
        if visited != vertex_count {
            return Err(MeshError::Disconnected);
        }

        let chi = vertex_count as i64 - edges.len() as i64 + faces.len() as i64;
        debug_assert!(chi <= 2 && (2 - chi) % 2 == 0, "closed orientable surface, chi = {chi}");
        let genus = ((2 - chi) / 2) as usize;

        Ok(Mesh {
            positions,
            faces,
            vertex_count,
            edges,
            edge_index,
            edge_lengths,
            adjacency,
            rotations,
            genus,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn positions(&self) -> Option<&[[f64; 3]]> {
        self.positions.as_deref()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&edge_key(a, b)).copied()
    }

    pub fn edge_length(&self, id: usize) -> f64 {
        self.edge_lengths[id]
    }

    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub(crate) fn rotation(&self, v: usize) -> &[(usize, usize)] {
        &self.rotations[v]
    }

    pub(crate) fn rotation_pos(&self, v: usize, neighbor: usize) -> usize {
        self.rotations[v]
            .iter()
            .position(|&(u, _)| u == neighbor)
            .expect("neighbor present in rotation")
    }

    /// `(2 - χ) / 2` with `χ = V - E + F`.
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Heron's area of one face from its edge lengths.
    pub fn face_area(&self, face: usize) -> f64 {
        let f = self.faces[face];
        let l = |a: usize, b: usize| self.edge_lengths[self.edge_index[&edge_key(a, b)]];
        heron(l(f[0], f[1]), l(f[1], f[2]), l(f[2], f[0]))
    }

    /// Total surface area.
    pub fn area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    /// Validates a closed vertex walk on this mesh.
    pub fn cycle(&self, vertices: Vec<usize>) -> Result<Cycle, MeshError> {
        if vertices.len() < 2 {
            return Err(MeshError::BadCycle("needs at least two vertices".into()));
        }
        for i in 0..vertices.len() {
            let a = vertices[i];
            let b = vertices[(i + 1) % vertices.len()];
            if a >= self.vertex_count {
                return Err(MeshError::BadCycle(format!("vertex {a} out of range")));
            }
            if self.edge_id(a, b).is_none() {
                return Err(MeshError::BadCycle(format!("({a}, {b}) is not an edge")));
            }
        }
        Ok(Cycle { vertices })
    }

    /// One level of 1-to-4 triangle subdivision. Edge midpoints become new
    /// vertices; the metric splits exactly (each child edge is half of a
    /// parent edge, medial edges are half the opposite side).
    pub fn subdivided(&self) -> Mesh {
        let (vertex_count, faces, lengths, positions) = subdivide_raw(
            self.vertex_count,
            &self.faces,
            |a, b| self.edge_lengths[self.edge_index[&edge_key(a, b)]],
            self.positions.as_deref(),
            |a, b| self.edge_index[&edge_key(a, b)],
            self.edges.len(),
        );
        Mesh::build(positions, vertex_count, faces, lengths)
            .expect("subdivision preserves validity")
    }

    pub fn subdivided_levels(&self, levels: usize) -> Mesh {
        let mut m = self.clone();
        for _ in 0..levels {
            m = m.subdivided();
        }
        m
    }
}

impl fmt::Debug for Mesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Mesh(V={}, E={}, F={}, g={})",
            self.vertex_count,
            self.edges.len(),
            self.faces.len(),
            self.genus
        )
    }
}

pub(crate) fn heron(a: f64, b: f64, c: f64) -> f64 {
    let s = 0.5 * (a + b + c);
    (s * (s - a) * (s - b) * (s - c)).max(0.0).sqrt()
}

/// Shared 1-to-4 subdivision of a face list; the midpoint of edge `e` gets
/// vertex id `vertex_count + e`.
/// Vertex count, faces, edge lengths and optional positions of a refined
/// face list.
pub(crate) type RawSubdivision =
    (usize, Vec<[usize; 3]>, BTreeMap<(usize, usize), f64>, Option<Vec<[f64; 3]>>);

pub(crate) fn subdivide_raw(
    vertex_count: usize,
    faces: &[[usize; 3]],
    edge_len: impl Fn(usize, usize) -> f64,
    positions: Option<&[[f64; 3]]>,
    edge_id: impl Fn(usize, usize) -> usize,
    edge_count: usize,
) -> RawSubdivision {
    let mid = |a: usize, b: usize| vertex_count + edge_id(a, b);
    let mut new_faces = Vec::with_capacity(4 * faces.len());
    let mut lengths: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for f in faces {
        let [a, b, c] = *f;
        let (mab, mbc, mca) = (mid(a, b), mid(b, c), mid(c, a));
        new_faces.push([a, mab, mca]);
        new_faces.push([b, mbc, mab]);
        new_faces.push([c, mca, mbc]);
        new_faces.push([mab, mbc, mca]);
        let (lab, lbc, lca) = (edge_len(a, b), edge_len(b, c), edge_len(c, a));
        lengths.insert(edge_key(a, mab), lab / 2.0);
        lengths.insert(edge_key(b, mab), lab / 2.0);
        lengths.insert(edge_key(b, mbc), lbc / 2.0);
        lengths.insert(edge_key(c, mbc), lbc / 2.0);
        lengths.insert(edge_key(c, mca), lca / 2.0);
        lengths.insert(edge_key(a, mca), lca / 2.0);
        // medial triangle: each side is parallel to and half of a parent side
        lengths.insert(edge_key(mab, mbc), lca / 2.0);
        lengths.insert(edge_key(mbc, mca), lab / 2.0);
        lengths.insert(edge_key(mca, mab), lbc / 2.0);
    }
    let new_positions = positions.map(|pos| {
        let mut out = pos.to_vec();
        out.resize(vertex_count + edge_count, [0.0; 3]);
        for f in faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let m = mid(a, b);
                for d in 0..3 {
                    out[m][d] = 0.5 * (pos[a][d] + pos[b][d]);
                }
            }
        }
        out
    });
    (vertex_count + edge_count, new_faces, lengths, new_positions)
}

/// A closed walk along mesh edges, stored as its vertex sequence; the edge
/// from the last vertex back to the first is implicit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// An embedded circle: at least three vertices, all distinct.
    pub fn is_simple(&self) -> bool {
        if self.vertices.len() < 3 {
            return false;
        }
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Directed edges `(v_i, v_{i+1})`, wrapping around.
    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn edge_ids(&self, mesh: &Mesh) -> Vec<usize> {
        self.directed_edges()
            .map(|(a, b)| mesh.edge_id(a, b).expect("cycle edges exist"))
            .collect()
    }

    pub fn length(&self, mesh: &Mesh) -> f64 {
        self.edge_ids(mesh).iter().map(|&e| mesh.edge_length(e)).sum()
    }

    /// Whether two cycles share a vertex.
    pub fn shares_vertex_with(&self, other: &Cycle) -> bool {
        let mut sorted = other.vertices.clone();
        sorted.sort_unstable();
        self.vertices.iter().any(|v| sorted.binary_search(v).is_ok())
    }
}

impl fmt::Debug for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cycle{:?}", self.vertices)
    }
}
