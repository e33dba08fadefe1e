//! Validated triangle meshes with face-edge adjacency.
//!
//! Local edge `e` of a face `[v0, v1, v2]` runs from `v[e]` to `v[(e + 1) % 3]`;
//! the vertex opposite to it is `v[(e + 2) % 3]`.

use std::collections::{HashMap, VecDeque};
use std::io::BufRead;
use std::path::Path;

use nalgebra::Vector3;
use thiserror::Error;

/// Minimum face area accepted by validation.
pub const MIN_FACE_AREA: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("mesh::load_mesh: parse error at {element}: {message}")]
    Parse { element: String, message: String },
    #[error("mesh::load_mesh: non-manifold {element}: {message}")]
    NonManifold { element: String, message: String },
    #[error("mesh::load_mesh: disconnected {element}")]
    Disconnected { element: String },
    #[error("mesh::load_mesh: degenerate face {face}: {message}")]
    DegenerateFace { face: usize, message: String },
}

fn parse_error(element: impl Into<String>, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        element: element.into(),
        message: message.into(),
    }
}

/// An undirected edge with its one or two incident face-edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    /// Endpoints, lower index first.
    pub v: [usize; 2],
    pub halves: Vec<(usize, usize)>,
}

/// A connected, edge- and vertex-manifold triangle mesh.
///
/// Boundary edges (one incident face) are tolerated so planar patches can be
/// loaded; every other invariant is enforced at construction.
#[derive(Debug, Clone)]
pub struct TriMesh {
    positions: Vec<Vector3<f64>>,
    faces: Vec<[usize; 3]>,
    twins: Vec<[Option<(usize, usize)>; 3]>,
    edge_ids: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    lengths: Vec<[f64; 3]>,
    angles: Vec<[f64; 3]>,
    cone_angles: Vec<f64>,
    boundary: Vec<bool>,
    vertex_faces: Vec<Vec<(usize, usize)>>,
}

fn corner_angle(p: &Vector3<f64>, q: &Vector3<f64>, r: &Vector3<f64>) -> f64 {
    let u = q - p;
    let w = r - p;
    u.cross(&w).norm().atan2(u.dot(&w))
}

impl TriMesh {
    pub fn new(positions: Vec<Vector3<f64>>, faces: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        let nv = positions.len();
        if faces.is_empty() {
            return Err(parse_error("file", "no faces"));
        }
        for (i, p) in positions.iter().enumerate() {
            if !p.iter().all(|x| x.is_finite()) {
                return Err(parse_error(format!("vertex {i}"), "non-finite coordinate"));
            }
        }
        for (f, tri) in faces.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&v| v >= nv) {
                return Err(parse_error(
                    format!("face {f}"),
                    format!("vertex index {bad} out of range ({nv} vertices)"),
                ));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::DegenerateFace {
                    face: f,
                    message: format!("repeated vertex in {tri:?}"),
                });
            }
            let [a, b, c] = tri.map(|v| positions[v]);
            let area = 0.5 * (b - a).cross(&(c - a)).norm();
            if area <= MIN_FACE_AREA {
                return Err(MeshError::DegenerateFace {
                    face: f,
                    message: format!("area {area:e}"),
                });
            }
        }

        let mut directed: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (f, tri) in faces.iter().enumerate() {
            for e in 0..3 {
                let key = (tri[e], tri[(e + 1) % 3]);
                if let Some(&(g, _)) = directed.get(&key) {
                    return Err(MeshError::NonManifold {
                        element: format!("edge ({}, {})", key.0, key.1),
                        message: format!("used by faces {g} and {f} with the same orientation"),
                    });
                }
                directed.insert(key, (f, e));
            }
        }

        let mut twins = vec![[None; 3]; faces.len()];
        let mut edge_ids = vec![[usize::MAX; 3]; faces.len()];
        let mut edges: Vec<Edge> = Vec::new();
        for (f, tri) in faces.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                let twin = directed.get(&(b, a)).copied();
                twins[f][e] = twin;
                if edge_ids[f][e] != usize::MAX {
                    continue;
                }
                let id = edges.len();
                let mut halves = vec![(f, e)];
                edge_ids[f][e] = id;
                if let Some((g, ge)) = twin {
                    edge_ids[g][ge] = id;
                    halves.push((g, ge));
                }
                edges.push(Edge {
                    v: [a.min(b), a.max(b)],
                    halves,
                });
            }
        }

        let mut vertex_faces = vec![Vec::new(); nv];
        for (f, tri) in faces.iter().enumerate() {
            for (i, &v) in tri.iter().enumerate() {
                vertex_faces[v].push((f, i));
            }
        }
        if let Some(v) = vertex_faces.iter().position(Vec::is_empty) {
            return Err(MeshError::Disconnected {
                element: format!("vertex {v} (not used by any face)"),
            });
        }

        let mut lengths = Vec::with_capacity(faces.len());
        let mut angles = Vec::with_capacity(faces.len());
        for (f, tri) in faces.iter().enumerate() {
            let p = tri.map(|v| positions[v]);
            let l = [0, 1, 2].map(|e| (p[(e + 1) % 3] - p[e]).norm());
            if let Some(e) = l.iter().position(|&x| x <= 0.0) {
                return Err(MeshError::DegenerateFace {
                    face: f,
                    message: format!("edge {e} has zero length"),
                });
            }
            lengths.push(l);
            angles.push([0, 1, 2].map(|i| corner_angle(&p[i], &p[(i + 1) % 3], &p[(i + 2) % 3])));
        }

        let mut mesh = Self {
            positions,
            faces,
            twins,
            edge_ids,
            edges,
            lengths,
            angles,
            cone_angles: vec![0.0; nv],
            boundary: vec![false; nv],
            vertex_faces,
        };
        mesh.check_vertex_fans()?;
        mesh.check_connected()?;
        for v in 0..nv {
            mesh.cone_angles[v] = mesh.vertex_faces[v]
                .iter()
                .map(|&(f, i)| mesh.angles[f][i])
                .sum();
        }
        for edge in &mesh.edges {
            if edge.halves.len() == 1 {
                mesh.boundary[edge.v[0]] = true;
                mesh.boundary[edge.v[1]] = true;
            }
        }
        Ok(mesh)
    }

    fn check_vertex_fans(&self) -> Result<(), MeshError> {
        for (v, incident) in self.vertex_faces.iter().enumerate() {
            let start = incident[0];
            let mut seen = 1;
            let mut cur = start;
            let mut closed = false;
            while let Some(next) = self.next_around(cur.0, cur.1) {
                if next == start {
                    closed = true;
                    break;
                }
                seen += 1;
                cur = next;
                if seen > incident.len() {
                    break;
                }
            }
            if !closed {
                let mut cur = start;
                while let Some(prev) = self.prev_around(cur.0, cur.1) {
                    seen += 1;
                    cur = prev;
                    if seen > incident.len() {
                        break;
                    }
                }
            }
            if seen != incident.len() {
                return Err(MeshError::NonManifold {
                    element: format!("vertex {v}"),
                    message: format!("{} incident faces do not form a single fan", incident.len()),
                });
            }
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<(), MeshError> {
        let mut seen = vec![false; self.faces.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(f) = queue.pop_front() {
            for (g, _) in self.twins[f].iter().flatten() {
                if !seen[*g] {
                    seen[*g] = true;
                    queue.push_back(*g);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(f) => Err(MeshError::Disconnected {
                element: format!("face {f} (not reachable from face 0)"),
            }),
            None => Ok(()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn positions(&self) -> &[Vector3<f64>] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> Vector3<f64> {
        self.positions[v]
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> [usize; 3] {
        self.faces[f]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Undirected edge id of local edge `e` of face `f`.
    pub fn edge_id(&self, f: usize, e: usize) -> usize {
        self.edge_ids[f][e]
    }

    /// The face and local edge on the other side of local edge `e` of `f`.
    pub fn twin(&self, f: usize, e: usize) -> Option<(usize, usize)> {
        self.twins[f][e]
    }

    pub fn edge_length(&self, f: usize, e: usize) -> f64 {
        self.lengths[f][e]
    }

    /// Interior angle of face `f` at its local vertex `i`.
    pub fn corner_angle(&self, f: usize, i: usize) -> f64 {
        self.angles[f][i]
    }

    pub fn cone_angle(&self, v: usize) -> f64 {
        self.cone_angles[v]
    }

    pub fn cone_angles(&self) -> &[f64] {
        &self.cone_angles
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary[v]
    }

    /// Faces incident to `v` with the local index of `v` in each.
    pub fn vertex_faces(&self, v: usize) -> &[(usize, usize)] {
        &self.vertex_faces[v]
    }

    pub fn shortest_edge(&self) -> f64 {
        self.lengths
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn longest_edge(&self) -> f64 {
        self.lengths.iter().flatten().copied().fold(0.0, f64::max)
    }

    pub fn local_index(&self, f: usize, v: usize) -> Option<usize> {
        self.faces[f].iter().position(|&w| w == v)
    }

    /// Rotates around the vertex at local index `i` of `f` by crossing the
    /// edge leaving it.
    pub fn next_around(&self, f: usize, i: usize) -> Option<(usize, usize)> {
        self.twins[f][i].map(|(g, e)| (g, (e + 1) % 3))
    }

    /// Rotates around the vertex at local index `i` of `f` by crossing the
    /// edge arriving at it.
    pub fn prev_around(&self, f: usize, i: usize) -> Option<(usize, usize)> {
        self.twins[f][(i + 2) % 3]
    }

    pub fn surface_area(&self) -> f64 {
        self.faces
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|v| self.positions[v]);
                0.5 * (b - a).cross(&(c - a)).norm()
            })
            .sum()
    }
}

/// Reads a Wavefront OBJ file.
pub fn load_mesh(path: impl AsRef<Path>) -> Result<TriMesh, MeshError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|e| parse_error(path.display().to_string(), e.to_string()))?;
    parse_obj(&mut std::io::BufReader::new(file))
}

/// Parses OBJ text: `v` and `f` records, triangles only.
pub fn parse_obj_str(text: &str) -> Result<TriMesh, MeshError> {
    parse_obj(&mut std::io::Cursor::new(text.as_bytes()))
}

fn parse_obj<R: BufRead>(reader: &mut R) -> Result<TriMesh, MeshError> {
    let options = tobj::LoadOptions {
        triangulate: false,
        single_index: false,
        ..Default::default()
    };
    let (models, _) = tobj::load_obj_buf(reader, &options, |_| {
        Err(tobj::LoadError::MaterialParseError)
    })
    .map_err(|e| parse_error("file", e.to_string()))?;
    if models.len() != 1 {
        return Err(parse_error(
            "file",
            format!("expected exactly one object, found {}", models.len()),
        ));
    }
    let mesh = &models[0].mesh;
    if let Some(f) = mesh.face_arities.iter().position(|&a| a != 3) {
        return Err(parse_error(
            format!("face {f}"),
            format!(
                "has {} vertices, only triangles are supported",
                mesh.face_arities[f]
            ),
        ));
    }
    if mesh.indices.len() % 3 != 0 {
        return Err(parse_error("file", "index count is not a multiple of 3"));
    }
    let positions = mesh
        .positions
        .chunks_exact(3)
        .map(|p| Vector3::new(p[0], p[1], p[2]))
        .collect();
    let faces = mesh
        .indices
        .chunks_exact(3)
        .map(|t| [t[0] as usize, t[1] as usize, t[2] as usize])
        .collect();
    TriMesh::new(positions, faces)
}

/// OBJ text for a mesh.
pub fn to_obj(mesh: &TriMesh) -> String {
    let mut out = String::new();
    for p in mesh.positions() {
        out.push_str(&format!("v {} {} {}\n", p.x, p.y, p.z));
    }
    for t in mesh.faces() {
        out.push_str(&format!("f {} {} {}\n", t[0] + 1, t[1] + 1, t[2] + 1));
    }
    out
}
