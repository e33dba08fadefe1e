//! Points on a mesh surface.

use nalgebra::Vector3;

use geodesic_core::space::{SpaceError, COORD_TOL};

use crate::mesh::TriMesh;

/// A face id and barycentric coordinates with respect to its three vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshPoint {
    pub face: usize,
    pub bary: [f64; 3],
}

impl MeshPoint {
    pub fn new(face: usize, bary: [f64; 3]) -> Self {
        Self { face, bary }
    }

    /// Centroid of a face.
    pub fn centroid(face: usize) -> Self {
        Self::new(face, [1.0 / 3.0; 3])
    }

    pub fn at_vertex(mesh: &TriMesh, v: usize) -> Self {
        let (f, i) = mesh.vertex_faces(v)[0];
        let mut bary = [0.0; 3];
        bary[i] = 1.0;
        Self::new(f, bary)
    }
}

/// Where a point sits combinatorially.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Support {
    Vertex(usize),
    /// On the edge between two vertices, with their weights.
    Edge([(usize, f64); 2]),
    Interior(usize, [f64; 3]),
}

/// Barycentric components at or below this are treated as zero.
const SNAP: f64 = 1e-12;

pub(crate) fn check_point(mesh: &TriMesh, p: &MeshPoint) -> Result<(), SpaceError> {
    if p.face >= mesh.face_count() {
        return Err(SpaceError::InvalidPoint(format!(
            "face {} out of range ({} faces)",
            p.face,
            mesh.face_count()
        )));
    }
    if p.bary.iter().any(|b| !b.is_finite() || *b < -COORD_TOL) {
        return Err(SpaceError::InvalidPoint(format!(
            "barycentric coordinates {:?} must be non-negative",
            p.bary
        )));
    }
    let sum: f64 = p.bary.iter().sum();
    if (sum - 1.0).abs() > COORD_TOL {
        return Err(SpaceError::InvalidPoint(format!(
            "barycentric coordinates {:?} sum to {sum}",
            p.bary
        )));
    }
    Ok(())
}

/// Clamps to non-negative and rescales to sum 1.
pub(crate) fn normalize_bary(bary: [f64; 3]) -> [f64; 3] {
    let b = bary.map(|x| if x > SNAP { x } else { 0.0 });
    let sum: f64 = b.iter().sum();
    if sum <= 0.0 {
        return [1.0 / 3.0; 3];
    }
    b.map(|x| x / sum)
}

pub(crate) fn support(mesh: &TriMesh, p: &MeshPoint) -> Support {
    let b = normalize_bary(p.bary);
    let tri = mesh.face(p.face);
    let nonzero: Vec<usize> = (0..3).filter(|&i| b[i] > 0.0).collect();
    match nonzero.as_slice() {
        [i] => Support::Vertex(tri[*i]),
        [i, j] => Support::Edge([(tri[*i], b[*i]), (tri[*j], b[*j])]),
        _ => Support::Interior(p.face, b),
    }
}

/// Faces whose closure contains the point.
pub(crate) fn faces_containing(mesh: &TriMesh, s: &Support) -> Vec<usize> {
    match *s {
        Support::Vertex(v) => mesh.vertex_faces(v).iter().map(|&(f, _)| f).collect(),
        Support::Edge([(u, _), (w, _)]) => mesh
            .vertex_faces(u)
            .iter()
            .map(|&(f, _)| f)
            .filter(|&f| mesh.local_index(f, w).is_some())
            .collect(),
        Support::Interior(f, _) => vec![f],
    }
}

/// Barycentric coordinates of a supported point in face `f`, if `f`
/// contains it.
pub(crate) fn bary_in(mesh: &TriMesh, s: &Support, f: usize) -> Option<[f64; 3]> {
    match *s {
        Support::Interior(g, b) => (g == f).then_some(b),
        Support::Vertex(v) => {
            let i = mesh.local_index(f, v)?;
            let mut b = [0.0; 3];
            b[i] = 1.0;
            Some(b)
        }
        Support::Edge(ws) => {
            let mut b = [0.0; 3];
            for (v, w) in ws {
                b[mesh.local_index(f, v)?] = w;
            }
            Some(b)
        }
    }
}

pub(crate) fn position_in(mesh: &TriMesh, f: usize, bary: &[f64; 3]) -> Vector3<f64> {
    let tri = mesh.face(f);
    mesh.position(tri[0]) * bary[0]
        + mesh.position(tri[1]) * bary[1]
        + mesh.position(tri[2]) * bary[2]
}

pub fn position(mesh: &TriMesh, p: &MeshPoint) -> Vector3<f64> {
    position_in(mesh, p.face, &p.bary)
}

/// Closest point of triangle `abc` to `p`, as barycentric coordinates.
fn closest_on_triangle(
    p: &Vector3<f64>,
    a: &Vector3<f64>,
    b: &Vector3<f64>,
    c: &Vector3<f64>,
) -> [f64; 3] {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(&ap);
    let d2 = ac.dot(&ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return [1.0, 0.0, 0.0];
    }
    let bp = p - b;
    let d3 = ab.dot(&bp);
    let d4 = ac.dot(&bp);
    if d3 >= 0.0 && d4 <= d3 {
        return [0.0, 1.0, 0.0];
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return [1.0 - v, v, 0.0];
    }
    let cp = p - c;
    let d5 = ab.dot(&cp);
    let d6 = ac.dot(&cp);
    if d6 >= 0.0 && d5 <= d6 {
        return [0.0, 0.0, 1.0];
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return [1.0 - w, 0.0, w];
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return [0.0, 1.0 - w, w];
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    [1.0 - v - w, v, w]
}

/// Nearest surface point to `x` in 3D (ties go to the lowest face id).
pub fn closest_point(mesh: &TriMesh, x: &Vector3<f64>) -> MeshPoint {
    let mut best = (f64::INFINITY, MeshPoint::centroid(0));
    for (f, tri) in mesh.faces().iter().enumerate() {
        let [a, b, c] = tri.map(|v| mesh.position(v));
        let bary = normalize_bary(closest_on_triangle(x, &a, &b, &c));
        let d = (position_in(mesh, f, &bary) - x).norm_squared();
        if d < best.0 {
            best = (d, MeshPoint::new(f, bary));
        }
    }
    best.1
}
