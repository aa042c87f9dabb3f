//! Homology of the 1-skeleton: tree-cotree bases, mod-2 intersection
//! numbers and shortest cycles in a prescribed `H_1(M, Z_2)` class.
//!
//! The basis comes from a tree-cotree decomposition: a BFS spanning tree `T`
//! of the vertex graph, a BFS spanning tree `C` of the dual graph avoiding
//! `T`, and the `2g` leftover edges. Each leftover edge closes a fundamental
//! cycle through `T` (the basis cycles) and a fundamental cocycle through
//! `C` (edge sets used to track homology classes of paths during search).
//!
//! Intersection numbers are computed combinatorially at shared vertices from
//! the rotation system, never by geometric perturbation. Cycles that share
//! edges are handled by a fixed transverse convention: within every edge the
//! second cycle runs on the left of the edge's canonical direction, which
//! refines the cyclic order of strand ends around each vertex and makes
//! crossing parities well defined.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;

use super::{Cycle, Mesh};
use crate::gf2::{BitMatrix, GfVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleSearchError {
    /// The zero class has no shortest representative.
    ZeroClass,
    /// State space `V * 2^{2g}` too large to search.
    GenusGuard { genus: usize },
    /// No cycle in the class exists in the (possibly restricted) graph.
    Unreachable,
}

impl fmt::Display for CycleSearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleSearchError::ZeroClass => write!(f, "the zero class is rejected"),
            CycleSearchError::GenusGuard { genus } => {
                write!(f, "genus {genus} exceeds the search guard")
            }
            CycleSearchError::Unreachable => write!(f, "no cycle in this class is reachable"),
        }
    }
}

impl std::error::Error for CycleSearchError {}

/// A homology basis of `2g` fundamental cycles with precomputed intersection
/// data and per-edge cocycle labels.
#[derive(Clone)]
pub struct HomologyBasis {
    cycles: Vec<Cycle>,
    /// `Ω[i][j] = ω(cycle_i, cycle_j)` from corner counting.
    intersection: BitMatrix,
    intersection_inv: BitMatrix,
    /// Per edge id: bit `i` set iff the edge lies in fundamental cocycle `i`.
    edge_labels: Vec<u64>,
    /// `M[i][j]` = pairing of cocycle `i` with cycle `j`.
    signature: BitMatrix,
    signature_inv: BitMatrix,
}

impl HomologyBasis {
    pub fn genus(&self) -> usize {
        self.cycles.len() / 2
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn intersection_matrix(&self) -> &BitMatrix {
        &self.intersection
    }

    /// Coordinates of `[c]` in this basis, from pairing with the basis
    /// cycles and applying the inverse intersection matrix.
    pub fn class_of(&self, mesh: &Mesh, c: &Cycle) -> GfVector {
        let dim = self.cycles.len();
        let mut pair = 0u64;
        for (i, b) in self.cycles.iter().enumerate() {
            pair |= (mesh.intersection_mod2(c, b) as u64) << i;
        }
        self.intersection_inv.mul_vec(&GfVector::from_bits(pair, dim))
    }

    /// XOR of the per-edge cocycle labels along a closed walk; coordinates of
    /// `[c]` in the basis dual to the fundamental cocycles.
    pub fn signature_of(&self, mesh: &Mesh, c: &Cycle) -> GfVector {
        let dim = self.cycles.len();
        let mut sig = 0u64;
        for e in c.edge_ids(mesh) {
            sig ^= self.edge_labels[e];
        }
        GfVector::from_bits(sig, dim)
    }

    /// Independent route to [`Self::class_of`] through the cocycle pairing;
    /// the two must agree on every closed walk.
    pub fn class_of_via_cocycles(&self, mesh: &Mesh, c: &Cycle) -> GfVector {
        self.signature_inv.mul_vec(&self.signature_of(mesh, c))
    }

    pub(crate) fn edge_labels(&self) -> &[u64] {
        &self.edge_labels
    }

    pub(crate) fn signature_matrix(&self) -> &BitMatrix {
        &self.signature
    }
}

impl Mesh {
    /// Tree-cotree homology basis; empty for genus 0.
    pub fn homology_basis(&self) -> HomologyBasis {
        let v = self.vertex_count();
        let f = self.faces().len();
        let e = self.edges().len();

        // BFS spanning tree of the vertex graph, sorted adjacency
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; v]; // (parent vertex, edge id)
        let mut depth = vec![0usize; v];
        let mut in_tree = vec![false; e];
        let mut queue = VecDeque::from([0usize]);
        let mut seen = vec![false; v];
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &(y, eid) in self.adjacency(x) {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, eid));
                    depth[y] = depth[x] + 1;
                    in_tree[eid] = true;
                    queue.push_back(y);
                }
            }
        }

        // dual BFS over edges not in the tree
        let mut edge_faces: Vec<[usize; 2]> = vec![[usize::MAX; 2]; e];
        for (fi, face) in self.faces().iter().enumerate() {
            for k in 0..3 {
                let eid = self.edge_id(face[k], face[(k + 1) % 3]).unwrap();
                if edge_faces[eid][0] == usize::MAX {
                    edge_faces[eid][0] = fi;
                } else {
                    edge_faces[eid][1] = fi;
                }
            }
        }
        let mut face_edges: Vec<Vec<usize>> = vec![Vec::new(); f];
        for (fi, face) in self.faces().iter().enumerate() {
            for k in 0..3 {
                face_edges[fi].push(self.edge_id(face[k], face[(k + 1) % 3]).unwrap());
            }
        }
        let mut dual_parent: Vec<Option<(usize, usize)>> = vec![None; f];
        let mut dual_depth = vec![0usize; f];
        let mut in_cotree = vec![false; e];
        let mut dseen = vec![false; f];
        dseen[0] = true;
        let mut dqueue = VecDeque::from([0usize]);
        while let Some(x) = dqueue.pop_front() {
            for &eid in &face_edges[x] {
                if in_tree[eid] {
                    continue;
                }
                let other = if edge_faces[eid][0] == x { edge_faces[eid][1] } else { edge_faces[eid][0] };
                if !dseen[other] {
                    dseen[other] = true;
                    dual_parent[other] = Some((x, eid));
                    dual_depth[other] = dual_depth[x] + 1;
                    in_cotree[eid] = true;
                    dqueue.push_back(other);
                }
            }
        }

        // leftover edges
        let leftover: Vec<usize> =
            (0..e).filter(|&eid| !in_tree[eid] && !in_cotree[eid]).collect();
        debug_assert_eq!(leftover.len(), 2 * self.genus());
        let dim = leftover.len();

        // fundamental cycles through the tree
        let tree_path_up = |mut a: usize, mut b: usize| -> Vec<usize> {
            // vertices from a to b through their tree LCA, inclusive
            let mut left = vec![a];
            let mut right = vec![b];
            while depth[a] > depth[b] {
                a = parent[a].unwrap().0;
                left.push(a);
            }
            while depth[b] > depth[a] {
                b = parent[b].unwrap().0;
                right.push(b);
            }
            while a != b {
                a = parent[a].unwrap().0;
                b = parent[b].unwrap().0;
                left.push(a);
                right.push(b);
            }
            right.pop(); // drop duplicate LCA
            left.extend(right.into_iter().rev());
            left
        };
        let cycles: Vec<Cycle> = leftover
            .iter()
            .map(|&eid| {
                let (u, w) = self.edges()[eid];
                // path w -> u through the tree, then close with edge (u, w)
                let path = tree_path_up(w, u);
                self.cycle(path).expect("tree path is a valid walk")
            })
            .collect();

        // fundamental cocycles through the cotree
        let mut edge_labels = vec![0u64; e];
        for (i, &eid) in leftover.iter().enumerate() {
            edge_labels[eid] |= 1 << i;
            let [fa, fb] = edge_faces[eid];
            let (mut a, mut b) = (fa, fb);
            let mark = |eid: usize, labels: &mut Vec<u64>| labels[eid] ^= 1 << i;
            while dual_depth[a] > dual_depth[b] {
                let (p, pe) = dual_parent[a].unwrap();
                mark(pe, &mut edge_labels);
                a = p;
            }
            while dual_depth[b] > dual_depth[a] {
                let (p, pe) = dual_parent[b].unwrap();
                mark(pe, &mut edge_labels);
                b = p;
            }
            while a != b {
                let (pa, pea) = dual_parent[a].unwrap();
                let (pb, peb) = dual_parent[b].unwrap();
                mark(pea, &mut edge_labels);
                mark(peb, &mut edge_labels);
                a = pa;
                b = pb;
            }
        }

        // pairing matrices
        let mut intersection = BitMatrix::zero(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                intersection.set(i, j, self.intersection_mod2(&cycles[i], &cycles[j]));
            }
        }
        let intersection_inv = if dim == 0 {
            BitMatrix::zero(0, 0)
        } else {
            intersection
                .inverse()
                .expect("intersection matrix of a homology basis is invertible")
        };
        let mut signature = BitMatrix::zero(dim, dim);
        for (j, c) in cycles.iter().enumerate() {
            let mut sig = 0u64;
            for eid in c.edge_ids(self) {
                sig ^= edge_labels[eid];
            }
            for i in 0..dim {
                signature.set(i, j, ((sig >> i) & 1) as u8);
            }
        }
        let signature_inv = if dim == 0 {
            BitMatrix::zero(0, 0)
        } else {
            signature.inverse().expect("cocycle pairing matrix is invertible")
        };

        HomologyBasis {
            cycles,
            intersection,
            intersection_inv,
            edge_labels,
            signature,
            signature_inv,
        }
    }

    /// Mod-2 intersection number of the homology classes of two closed
    /// walks, by corner counting at shared vertices.
    pub fn intersection_mod2(&self, c1: &Cycle, c2: &Cycle) -> u8 {
        // passages of c2 grouped by vertex
        let mut at: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        let n2 = c2.len();
        for i in 0..n2 {
            let prev = c2.vertices()[(i + n2 - 1) % n2];
            let here = c2.vertices()[i];
            let next = c2.vertices()[(i + 1) % n2];
            at.entry(here).or_default().push((prev, next));
        }
        let n1 = c1.len();
        let mut crossings = 0u8;
        for i in 0..n1 {
            let here = c1.vertices()[i];
            let Some(passages2) = at.get(&here) else { continue };
            let prev = c1.vertices()[(i + n1 - 1) % n1];
            let next = c1.vertices()[(i + 1) % n1];
            for &(p2, n2v) in passages2 {
                crossings ^= self.passages_cross(here, (prev, next), (p2, n2v));
            }
        }
        crossings
    }

    /// Crossing parity of one passage of cycle 1 and one passage of cycle 2
    /// through vertex `v`, under the fixed transverse convention.
    fn passages_cross(
        &self,
        v: usize,
        (a_in, a_out): (usize, usize),
        (b_in, b_out): (usize, usize),
    ) -> u8 {
        if a_in == a_out || b_in == b_out {
            // a spur enters and leaves through the same edge; its perturbed
            // strand crosses everything an even number of times
            return 0;
        }
        // strand-end key: (rotation slot, sub-position within the slot).
        // Within the slot toward neighbor u, the strand of cycle 1 comes
        // first when v < u and second otherwise; cycle 2 mirrored.
        let key = |u: usize, role: u8| -> (usize, u8) {
            let slot = self.rotation_pos(v, u);
            let block = if v < u { role } else { 1 - role };
            (slot, block)
        };
        let k1a = key(a_in, 0);
        let k1b = key(a_out, 0);
        let k2a = key(b_in, 1);
        let k2b = key(b_out, 1);
        // crossing iff exactly one of cycle 2's ends lies in the open cyclic
        // interval (k1a, k1b)
        let inside = |x: (usize, u8)| -> bool {
            if k1a < k1b {
                k1a < x && x < k1b
            } else {
                x > k1a || x < k1b
            }
        };
        (u8::from(inside(k2a)) + u8::from(inside(k2b))) & 1
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    dist: f64,
    state: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, state); dist is finite by construction
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap()
            .then_with(|| other.state.cmp(&self.state))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest closed walk whose mod-2 homology class is `target`, by Dijkstra
/// over states `(vertex, partial class signature)` in the `Z_2^{2g}`-cover.
///
/// The returned length is exact for the graph metric and an upper bound for
/// the stable norm of any integral lift of the class.
pub fn shortest_cycle_in_class(
    mesh: &Mesh,
    basis: &HomologyBasis,
    target: &GfVector,
) -> Result<Cycle, CycleSearchError> {
    shortest_cycle_with_weights(mesh, basis, target, |e| mesh.edge_length(e), &[])
}

/// Same search with custom edge weights and forbidden vertices; used by the
/// spin-cut search for penalty rerouting and disjointness.
pub(crate) fn shortest_cycle_with_weights(
    mesh: &Mesh,
    basis: &HomologyBasis,
    target: &GfVector,
    weight: impl Fn(usize) -> f64,
    forbidden: &[usize],
) -> Result<Cycle, CycleSearchError> {
    if target.is_zero() {
        return Err(CycleSearchError::ZeroClass);
    }
    let dim = basis.cycles().len();
    if dim > 20 {
        return Err(CycleSearchError::GenusGuard { genus: dim / 2 });
    }
    let sig_target = basis.signature_matrix().mul_vec(target).bits();
    let labels = basis.edge_labels();
    let v_count = mesh.vertex_count();
    let states = 1usize << dim;
    let mut blocked = vec![false; v_count];
    for &v in forbidden {
        blocked[v] = true;
    }

    // any cycle with signature bit i set traverses some edge of fundamental
    // cocycle i and therefore passes through that edge's smaller endpoint,
    // so the smaller endpoints of the smallest such cocycle suffice as
    // search sources
    let mut best_sources: Option<Vec<usize>> = None;
    for i in 0..dim {
        if (sig_target >> i) & 1 == 0 {
            continue;
        }
        let mut sources: Vec<usize> = (0..mesh.edges().len())
            .filter(|&e| (labels[e] >> i) & 1 == 1)
            .map(|e| mesh.edges()[e].0)
            .filter(|&v| !blocked[v])
            .collect();
        sources.sort_unstable();
        sources.dedup();
        if best_sources.as_ref().is_none_or(|b| sources.len() < b.len()) {
            best_sources = Some(sources);
        }
    }
    let sources = best_sources.expect("nonzero target has a set signature bit");

    let mut dist = vec![f64::INFINITY; v_count * states];
    let mut pred: Vec<usize> = vec![usize::MAX; v_count * states];
    let mut stamp = vec![u32::MAX; v_count * states];
    let mut best: Option<(f64, usize, Vec<usize>)> = None;

    for (round, &source) in sources.iter().enumerate() {
        let round = round as u32;
        let goal = source * states + sig_target as usize;
        let start = source * states;
        let fresh = |stamp: &mut Vec<u32>, dist: &mut Vec<f64>, pred: &mut Vec<usize>, s: usize, r: u32| {
            if stamp[s] != r {
                stamp[s] = r;
                dist[s] = f64::INFINITY;
                pred[s] = usize::MAX;
            }
        };
        fresh(&mut stamp, &mut dist, &mut pred, start, round);
        dist[start] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapEntry { dist: 0.0, state: start });
        while let Some(HeapEntry { dist: d, state }) = heap.pop() {
            fresh(&mut stamp, &mut dist, &mut pred, state, round);
            if d > dist[state] {
                continue;
            }
            if let Some((b, _, _)) = &best {
                if d >= *b {
                    break;
                }
            }
            if state == goal && d > 0.0 {
                // reconstruct the walk
                let mut walk = Vec::new();
                let mut s = state;
                while s != start || walk.is_empty() {
                    walk.push(s / states);
                    s = pred[s];
                    if s == usize::MAX {
                        break;
                    }
                }
                walk.reverse();
                if best.as_ref().is_none_or(|(b, bs, _)| d < *b || (d == *b && state < *bs)) {
                    best = Some((d, state, walk));
                }
                break;
            }
            let vtx = state / states;
            let sig = state % states;
            for &(u, eid) in mesh.adjacency(vtx) {
                if blocked[u] {
                    continue;
                }
                let w = weight(eid);
                let nsig = sig ^ (labels[eid] as usize & (states - 1));
                let nstate = u * states + nsig;
                fresh(&mut stamp, &mut dist, &mut pred, nstate, round);
                let nd = d + w;
                if nd < dist[nstate] {
                    if let Some((b, _, _)) = &best {
                        if nd >= *b {
                            continue;
                        }
                    }
                    dist[nstate] = nd;
                    pred[nstate] = state;
                    heap.push(HeapEntry { dist: nd, state: nstate });
                }
            }
        }
    }

    let (_, _, walk) = best.ok_or(CycleSearchError::Unreachable)?;
    Ok(mesh.cycle(walk).expect("search walk is valid"))
}
