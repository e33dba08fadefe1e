//! Steiner graph: mesh vertices plus `s` equally spaced points per edge,
//! joined by straight segments across each face. Shortest routes in it seed
//! the exact path computation.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use nalgebra::Vector3;

use crate::mesh::TriMesh;
use crate::point::{faces_containing, Support};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteinerNode {
    Vertex(usize),
    /// Point `j` (1-based) of `s` on an edge, at `t = j / (s + 1)` from its
    /// lower-index endpoint.
    Edge {
        edge: usize,
        j: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub to: u32,
    pub weight: f64,
    pub face: u32,
}

#[derive(Debug, Clone)]
pub struct SteinerGraph {
    s: usize,
    vertex_count: usize,
    positions: Vec<Vector3<f64>>,
    offsets: Vec<usize>,
    arcs: Vec<Arc>,
}

/// A route found in the graph: `faces[i]` holds the segment ending at
/// `nodes[i]` (the last face holds the segment into the target).
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Seed {
    pub nodes: Vec<u32>,
    pub faces: Vec<usize>,
    pub length: f64,
}

#[derive(PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .total_cmp(&self.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const SOURCE: u32 = u32::MAX;

impl SteinerGraph {
    pub fn new(mesh: &TriMesh, s: usize) -> Self {
        let vertex_count = mesh.vertex_count();
        let mut positions = mesh.positions().to_vec();
        for edge in mesh.edges() {
            let (p, q) = (mesh.position(edge.v[0]), mesh.position(edge.v[1]));
            for j in 1..=s {
                let t = j as f64 / (s + 1) as f64;
                positions.push(p * (1.0 - t) + q * t);
            }
        }
        let mut graph = Self {
            s,
            vertex_count,
            positions,
            offsets: Vec::new(),
            arcs: Vec::new(),
        };
        let mut lists: Vec<Vec<Arc>> = vec![Vec::new(); graph.node_count()];
        for f in 0..mesh.face_count() {
            let nodes = graph.face_nodes(mesh, f);
            for (i, &a) in nodes.iter().enumerate() {
                for &b in &nodes[i + 1..] {
                    let weight = (graph.positions[a as usize] - graph.positions[b as usize]).norm();
                    let face = f as u32;
                    lists[a as usize].push(Arc {
                        to: b,
                        weight,
                        face,
                    });
                    lists[b as usize].push(Arc {
                        to: a,
                        weight,
                        face,
                    });
                }
            }
        }
        graph.offsets.push(0);
        for list in lists {
            graph.arcs.extend(list);
            graph.offsets.push(graph.arcs.len());
        }
        graph
    }

    pub fn subdivisions(&self) -> usize {
        self.s
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn position(&self, n: u32) -> Vector3<f64> {
        self.positions[n as usize]
    }

    pub fn node(&self, n: u32) -> SteinerNode {
        let n = n as usize;
        if n < self.vertex_count {
            SteinerNode::Vertex(n)
        } else {
            let k = n - self.vertex_count;
            SteinerNode::Edge {
                edge: k / self.s,
                j: k % self.s + 1,
            }
        }
    }

    pub fn edge_node(&self, edge: usize, j: usize) -> u32 {
        (self.vertex_count + edge * self.s + j - 1) as u32
    }

    pub fn arcs(&self, n: u32) -> &[Arc] {
        &self.arcs[self.offsets[n as usize]..self.offsets[n as usize + 1]]
    }

    /// Nodes on the boundary of face `f`.
    pub fn face_nodes(&self, mesh: &TriMesh, f: usize) -> Vec<u32> {
        let mut nodes: Vec<u32> = mesh.face(f).iter().map(|&v| v as u32).collect();
        for e in 0..3 {
            let id = mesh.edge_id(f, e);
            nodes.extend((1..=self.s).map(|j| self.edge_node(id, j)));
        }
        nodes
    }

    pub(crate) fn support(&self, mesh: &TriMesh, n: u32) -> Support {
        match self.node(n) {
            SteinerNode::Vertex(v) => Support::Vertex(v),
            SteinerNode::Edge { edge, j } => {
                let t = j as f64 / (self.s + 1) as f64;
                let [u, w] = mesh.edges()[edge].v;
                Support::Edge([(u, 1.0 - t), (w, t)])
            }
        }
    }

    pub(crate) fn node_faces(&self, mesh: &TriMesh, n: u32) -> Vec<usize> {
        match self.node(n) {
            SteinerNode::Vertex(v) => mesh.vertex_faces(v).iter().map(|&(f, _)| f).collect(),
            SteinerNode::Edge { edge, .. } => {
                mesh.edges()[edge].halves.iter().map(|&(f, _)| f).collect()
            }
        }
    }

    /// Shortest graph route between two surface points, or `None` when
    /// nothing is reached within `cap`.
    pub(crate) fn route(
        &self,
        mesh: &TriMesh,
        a: (&Support, Vector3<f64>),
        b: (&Support, Vector3<f64>),
        cap: f64,
    ) -> Option<Seed> {
        let source_faces = faces_containing(mesh, a.0);
        let target_faces = faces_containing(mesh, b.0);
        if let Some(&f) = source_faces.iter().find(|f| target_faces.contains(f)) {
            return Some(Seed {
                nodes: Vec::new(),
                faces: vec![f],
                length: (a.1 - b.1).norm(),
            });
        }

        let mut dist: HashMap<u32, f64> = HashMap::new();
        let mut prev: HashMap<u32, (u32, u32)> = HashMap::new();
        let mut heap = BinaryHeap::new();
        for &f in &source_faces {
            for n in self.face_nodes(mesh, f) {
                let d = (self.position(n) - a.1).norm();
                if dist.get(&n).is_none_or(|&old| d < old) {
                    dist.insert(n, d);
                    prev.insert(n, (SOURCE, f as u32));
                    heap.push(Entry(d, n));
                }
            }
        }

        let mut best: Option<(f64, u32, usize)> = None;
        while let Some(Entry(d, n)) = heap.pop() {
            if d > dist[&n] {
                continue;
            }
            if d > cap || best.is_some_and(|(bd, _, _)| d >= bd) {
                break;
            }
            let to_target = (self.position(n) - b.1).norm();
            for f in self.node_faces(mesh, n) {
                if target_faces.contains(&f) && best.is_none_or(|(bd, _, _)| d + to_target < bd) {
                    best = Some((d + to_target, n, f));
                }
            }
            for arc in self.arcs(n) {
                let nd = d + arc.weight;
                if dist.get(&arc.to).is_none_or(|&old| nd < old) {
                    dist.insert(arc.to, nd);
                    prev.insert(arc.to, (n, arc.face));
                    heap.push(Entry(nd, arc.to));
                }
            }
        }

        let (length, last, last_face) = best?;
        let mut nodes = vec![last];
        let mut faces = vec![last_face];
        let mut cur = last;
        loop {
            let (p, f) = prev[&cur];
            faces.push(f as usize);
            if p == SOURCE {
                break;
            }
            nodes.push(p);
            cur = p;
        }
        nodes.reverse();
        faces.reverse();
        Some(Seed {
            nodes,
            faces,
            length,
        })
    }
}
