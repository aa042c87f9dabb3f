//! Mesh file formats.
//!
//! The native format is a JSON document:
//!
//! ```json
//! {
//!   "version": 1,
//!   "positions": [[x, y, z], ...],
//!   "faces": [[i, j, k], ...],
//!   "edge_lengths": [[i, j, len], ...],
//!   "spin": { "basis_cycles": [[v, ...], ...], "q_values": [0, 1] }
//! }
//! ```
//!
//! Faces are 0-based and counterclockwise. Exactly one of `positions` and
//! `edge_lengths` must be present. The optional `spin` block carries the
//! quadratic-form values of a spin structure; when `basis_cycles` is absent
//! the values refer to the canonical tree-cotree basis in its deterministic
//! order. Plain OFF files are also accepted for geometry-only input.

use serde::{Deserialize, Serialize};

use super::{Mesh, MeshError};

#[derive(Serialize, Deserialize)]
struct MeshFileJson {
    version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    positions: Option<Vec<[f64; 3]>>,
    faces: Vec<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edge_lengths: Option<Vec<(usize, usize, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spin: Option<SpinBlockJson>,
}

#[derive(Serialize, Deserialize)]
struct SpinBlockJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_cycles: Option<Vec<Vec<usize>>>,
    q_values: Vec<u8>,
}

/// A spin structure as stored in a mesh file: quadratic-form values on
/// either the given cycles or the canonical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinSpec {
    pub basis_cycles: Option<Vec<Vec<usize>>>,
    pub q_values: Vec<u8>,
}

#[derive(Debug)]
pub struct LoadedMesh {
    pub mesh: Mesh,
    pub spin: Option<SpinSpec>,
}

/// Parses a mesh file (native JSON or OFF) and validates the mesh.
pub fn load_mesh(bytes: &[u8]) -> Result<LoadedMesh, MeshError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| MeshError::Parse(format!("not valid UTF-8: {e}")))?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first == "OFF" || first.starts_with("OFF ") {
        load_off(text)
    } else {
        load_json(text)
    }
}

fn load_json(text: &str) -> Result<LoadedMesh, MeshError> {
    let file: MeshFileJson =
        serde_json::from_str(text).map_err(|e| MeshError::Parse(e.to_string()))?;
    if file.version != 1 {
        return Err(MeshError::Parse(format!("unsupported version {}", file.version)));
    }
    let mesh = match (file.positions, file.edge_lengths) {
        (Some(_), Some(_)) => return Err(MeshError::AmbiguousMetric),
        (Some(positions), None) => Mesh::from_positions(positions, file.faces)?,
        (None, Some(lengths)) => {
            let vertex_count = file
                .faces
                .iter()
                .flat_map(|f| f.iter())
                .max()
                .map_or(0, |&m| m + 1);
            Mesh::from_edge_lengths(vertex_count, file.faces, &lengths)?
        }
        (None, None) => {
            return Err(MeshError::Parse("positions or edge_lengths required".into()))
        }
    };
    let spin = file
        .spin
        .map(|s| SpinSpec { basis_cycles: s.basis_cycles, q_values: s.q_values });
    Ok(LoadedMesh { mesh, spin })
}

fn load_off(text: &str) -> Result<LoadedMesh, MeshError> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace())
        .peekable();
    let header = tokens.next().ok_or_else(|| MeshError::Parse("empty OFF file".into()))?;
    if header != "OFF" {
        return Err(MeshError::Parse("missing OFF header".into()));
    }
    let next_usize = |what: &str, tokens: &mut dyn Iterator<Item = &str>| {
        tokens
            .next()
            .ok_or_else(|| MeshError::Parse(format!("missing {what}")))?
            .parse::<usize>()
            .map_err(|e| MeshError::Parse(format!("bad {what}: {e}")))
    };
    let nv = next_usize("vertex count", &mut tokens)?;
    let nf = next_usize("face count", &mut tokens)?;
    let _ne = next_usize("edge count", &mut tokens)?;
    let mut positions = Vec::with_capacity(nv);
    for i in 0..nv {
        let mut coord = [0.0f64; 3];
        for c in coord.iter_mut() {
            *c = tokens
                .next()
                .ok_or_else(|| MeshError::Parse(format!("missing coordinate of vertex {i}")))?
                .parse()
                .map_err(|e| MeshError::Parse(format!("bad coordinate of vertex {i}: {e}")))?;
        }
        positions.push(coord);
    }
    let mut faces = Vec::with_capacity(nf);
    for i in 0..nf {
        let arity = next_usize("face arity", &mut tokens)?;
        if arity != 3 {
            return Err(MeshError::Parse(format!("face {i} has {arity} vertices, only triangles supported")));
        }
        let mut face = [0usize; 3];
        for v in face.iter_mut() {
            *v = next_usize("face index", &mut tokens)?;
        }
        faces.push(face);
    }
    Ok(LoadedMesh { mesh: Mesh::from_positions(positions, faces)?, spin: None })
}

/// Serializes a mesh (and optional spin block) into the native format.
///
/// Positions are written when the mesh has an embedding, otherwise the edge
/// lengths; the output round-trips through [`load_mesh`].
pub fn mesh_to_json(mesh: &Mesh, spin: Option<&SpinSpec>) -> String {
    let file = MeshFileJson {
        version: 1,
        positions: mesh.positions().map(|p| p.to_vec()),
        faces: mesh.faces().to_vec(),
        edge_lengths: if mesh.positions().is_some() {
            None
        } else {
            Some(
                mesh.edges()
                    .iter()
                    .enumerate()
                    .map(|(id, &(a, b))| (a, b, mesh.edge_length(id)))
                    .collect(),
            )
        },
        spin: spin.map(|s| SpinBlockJson {
            basis_cycles: s.basis_cycles.clone(),
            q_values: s.q_values.clone(),
        }),
    };
    serde_json::to_string_pretty(&file).expect("mesh serialization cannot fail")
}
