//! The mesh as a geodesic space.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::Vector3;

use geodesic_core::space::{GeodesicSpace, SpaceError};

use crate::mesh::TriMesh;
use crate::path::{sample, straighten, strip_from_seed, Segment, Strip, TracedPath};
use crate::point::{self, closest_point, position, support, MeshPoint};
use crate::steiner::SteinerGraph;

pub const DEFAULT_SUBDIVISIONS: usize = 4;

/// Scale applied to the shortest-edge term of [`epsilon_estimate`].
pub const S_FACTOR: f64 = 1.0;

/// Shortest Steiner loop around an interior vertex: one node on every edge
/// at the vertex (its Steiner points or far endpoint), joined across the
/// faces of the star.
pub fn vertex_girth(mesh: &TriMesh, graph: &SteinerGraph, v: usize) -> f64 {
    let start = mesh.vertex_faces(v)[0];
    let mut fan = vec![start];
    let mut cur = start;
    while let Some(next) = mesh.next_around(cur.0, cur.1) {
        if next == start {
            break;
        }
        fan.push(next);
        cur = next;
    }
    // Nodes on the edge leaving v in face f (local index i), v excluded.
    let edge_nodes = |f: usize, i: usize| -> Vec<u32> {
        let tri = mesh.face(f);
        let id = mesh.edge_id(f, i);
        let mut nodes: Vec<u32> = (1..=graph.subdivisions())
            .map(|j| graph.edge_node(id, j))
            .collect();
        nodes.push(tri[(i + 1) % 3] as u32);
        nodes
    };
    // The edge arriving at v in fan[0] is the edge leaving v in the last face.
    let (lf, li) = *fan.last().unwrap();
    let closing = edge_nodes(lf, li);
    let mut best = f64::INFINITY;
    for &x in &closing {
        let mut prev_nodes = vec![x];
        let mut prev_dist = vec![0.0];
        for &(f, i) in &fan {
            let nodes = edge_nodes(f, i);
            let dist: Vec<f64> = nodes
                .iter()
                .map(|&y| {
                    prev_nodes
                        .iter()
                        .zip(&prev_dist)
                        .map(|(&p, &d)| d + (graph.position(p) - graph.position(y)).norm())
                        .fold(f64::INFINITY, f64::min)
                })
                .collect();
            prev_nodes = nodes;
            prev_dist = dist;
        }
        if let Some(pos) = prev_nodes.iter().position(|&y| y == x) {
            best = best.min(prev_dist[pos]);
        }
    }
    best
}

/// Conservative uniqueness radius:
/// `min(0.5 * shortest edge * S_FACTOR, 0.25 * shortest vertex girth)`, the
/// girth taken over interior vertices with cone angle below `2 pi`.
pub fn epsilon_estimate(mesh: &TriMesh, graph: &SteinerGraph) -> f64 {
    let edge_term = 0.5 * mesh.shortest_edge() * S_FACTOR;
    let girth = (0..mesh.vertex_count())
        .filter(|&v| !mesh.is_boundary_vertex(v) && mesh.cone_angle(v) < 2.0 * PI - 1e-9)
        .map(|v| vertex_girth(mesh, graph, v))
        .fold(f64::INFINITY, f64::min);
    edge_term.min(0.25 * girth)
}

/// Intrinsic metric of a triangle mesh.
#[derive(Debug)]
pub struct MeshBackend {
    mesh: TriMesh,
    graph: SteinerGraph,
    epsilon: f64,
    estimated_epsilon: f64,
    ambiguities: AtomicUsize,
}

impl MeshBackend {
    /// Backend with the estimated epsilon.
    pub fn new(mesh: TriMesh, subdivisions: usize) -> Self {
        let graph = SteinerGraph::new(&mesh, subdivisions.max(1));
        let estimated_epsilon = epsilon_estimate(&mesh, &graph);
        Self {
            mesh,
            graph,
            epsilon: estimated_epsilon,
            estimated_epsilon,
            ambiguities: AtomicUsize::new(0),
        }
    }

    /// Backend with a user-chosen epsilon.
    pub fn with_epsilon(
        mesh: TriMesh,
        subdivisions: usize,
        epsilon: f64,
    ) -> Result<Self, SpaceError> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(SpaceError::InvalidPoint(format!(
                "mesh epsilon must be positive, got {epsilon}"
            )));
        }
        let mut backend = Self::new(mesh, subdivisions);
        backend.epsilon = epsilon;
        Ok(backend)
    }

    pub fn mesh(&self) -> &TriMesh {
        &self.mesh
    }

    pub fn graph(&self) -> &SteinerGraph {
        &self.graph
    }

    pub fn estimated_epsilon(&self) -> f64 {
        self.estimated_epsilon
    }

    /// Number of path queries that met a vertex with two equally short
    /// sides.
    pub fn ambiguity_count(&self) -> usize {
        self.ambiguities.load(Ordering::Relaxed)
    }

    pub fn position(&self, p: &MeshPoint) -> Vector3<f64> {
        position(&self.mesh, p)
    }

    pub fn closest_point(&self, x: &Vector3<f64>) -> MeshPoint {
        closest_point(&self.mesh, x)
    }

    fn search_cap(&self) -> f64 {
        let spacing = self.mesh.longest_edge() / (self.graph.subdivisions() + 1) as f64;
        2.0 * self.epsilon + 2.0 * spacing
    }

    /// Length of the Steiner-graph route between two points.
    pub fn seed_length(&self, a: &MeshPoint, b: &MeshPoint) -> Result<f64, SpaceError> {
        let (sa, sb) = (support(&self.mesh, a), support(&self.mesh, b));
        let cap = self.search_cap();
        self.graph
            .route(
                &self.mesh,
                (&sa, self.position(a)),
                (&sb, self.position(b)),
                cap,
            )
            .map(|s| s.length)
            .ok_or(SpaceError::TooFar {
                distance: cap,
                epsilon: self.epsilon,
            })
    }

    /// Straightened path between two points, without the epsilon check.
    pub fn trace(&self, a: &MeshPoint, b: &MeshPoint) -> Result<TracedPath, SpaceError> {
        self.check_point(a)?;
        self.check_point(b)?;
        let (sa, sb) = (support(&self.mesh, a), support(&self.mesh, b));
        let (pa, pb) = (self.position(a), self.position(b));
        if sa == sb {
            return Ok(TracedPath {
                segments: vec![Segment {
                    face: a.face,
                    from: a.bary,
                    to: a.bary,
                    length: 0.0,
                }],
                length: 0.0,
                strip: Strip {
                    faces: vec![a.face],
                    exits: Vec::new(),
                },
                unfolded: Vec::new(),
                ambiguous: false,
                reroutes: 0,
            });
        }
        let cap = self.search_cap();
        let seed = self
            .graph
            .route(&self.mesh, (&sa, pa), (&sb, pb), cap)
            .ok_or(SpaceError::TooFar {
                distance: cap,
                epsilon: self.epsilon,
            })?;
        let strip = strip_from_seed(&self.mesh, &self.graph, &seed);
        let traced = straighten(&self.mesh, strip, &sa, &sb)?;
        if traced.ambiguous {
            self.ambiguities.fetch_add(1, Ordering::Relaxed);
        }
        Ok(traced)
    }

    fn trace_within(&self, a: &MeshPoint, b: &MeshPoint) -> Result<TracedPath, SpaceError> {
        let traced = self.trace(a, b)?;
        if traced.length > self.epsilon * (1.0 + 1e-12) {
            return Err(SpaceError::TooFar {
                distance: traced.length,
                epsilon: self.epsilon,
            });
        }
        Ok(traced)
    }
}

impl GeodesicSpace for MeshBackend {
    type Point = MeshPoint;

    fn name(&self) -> &'static str {
        "mesh"
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn distance(&self, a: &MeshPoint, b: &MeshPoint) -> Result<f64, SpaceError> {
        Ok(self.trace_within(a, b)?.length)
    }

    fn geodesic_points(
        &self,
        a: &MeshPoint,
        b: &MeshPoint,
        fractions: &[f64],
    ) -> Result<Vec<MeshPoint>, SpaceError> {
        let traced = self.trace_within(a, b)?;
        Ok(sample(&traced.segments, fractions))
    }

    fn check_point(&self, p: &MeshPoint) -> Result<(), SpaceError> {
        point::check_point(&self.mesh, p)
    }

    fn encode_point(&self, p: &MeshPoint) -> Vec<f64> {
        vec![p.face as f64, p.bary[0], p.bary[1], p.bary[2]]
    }

    fn decode_point(&self, coords: &[f64]) -> Result<MeshPoint, SpaceError> {
        let [face, b0, b1, b2] = coords else {
            return Err(SpaceError::InvalidPoint(format!(
                "mesh points have 4 coordinates (face, barycentric triple), got {}",
                coords.len()
            )));
        };
        if !(face.fract() == 0.0 && *face >= 0.0) {
            return Err(SpaceError::InvalidPoint(format!(
                "face id must be a non-negative integer, got {face}"
            )));
        }
        let p = MeshPoint::new(*face as usize, [*b0, *b1, *b2]);
        self.check_point(&p)?;
        Ok(p)
    }
}
