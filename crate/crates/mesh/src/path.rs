//! Exact shortest paths inside a triangle strip.
//!
//! A strip is a sequence of faces, each joined to the next across one edge.
//! It is unfolded into the plane, the taut string through it is found with
//! the funnel algorithm, and wherever the string wraps around a vertex whose
//! other side is shorter (angle below pi), the strip is rerouted around that
//! side. Repeats until no such vertex remains.

use std::f64::consts::PI;

use nalgebra::Vector2;

use geodesic_core::space::SpaceError;

use crate::mesh::TriMesh;
use crate::point::{bary_in, normalize_bary, MeshPoint, Support};
use crate::steiner::{Seed, SteinerGraph};

type P2 = Vector2<f64>;

/// A path must bend by less than this at every vertex it is allowed to pass.
pub const ANGLE_TOL: f64 = 1e-7;
/// Two sides of a vertex within this angle of each other give equally long
/// paths.
pub const AMBIGUITY_TOL: f64 = 1e-9;
pub const MAX_STRAIGHTEN_ITERS: usize = 200;

/// Faces crossed in order; `exits[i]` is the local edge of `faces[i]` leading
/// into `faces[i + 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Strip {
    pub faces: Vec<usize>,
    pub exits: Vec<usize>,
}

/// The straight piece of a path inside one face.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub face: usize,
    pub from: [f64; 3],
    pub to: [f64; 3],
    pub length: f64,
}

#[derive(Debug, Clone)]
pub struct TracedPath {
    pub segments: Vec<Segment>,
    pub length: f64,
    pub strip: Strip,
    /// Unfolded vertex positions of each strip face.
    pub unfolded: Vec<[P2; 3]>,
    /// A vertex on the path had equally short sides.
    pub ambiguous: bool,
    pub reroutes: usize,
}

fn cross(o: &P2, a: &P2, b: &P2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

fn angle_between(u: &P2, w: &P2) -> f64 {
    (u.x * w.y - u.y * w.x).abs().atan2(u.dot(w))
}

/// Walks around vertex `v` from face `from` to face `to`, always crossing
/// the edge leaving `v` (`forward`) or the edge arriving at it. Returns the
/// faces entered, the exits taken, and the corner angles at `v` of the faces
/// strictly between.
fn walk_around(
    mesh: &TriMesh,
    from: usize,
    v: usize,
    to: usize,
    forward: bool,
) -> Option<(Vec<usize>, Vec<usize>, f64)> {
    let mut cur = (from, mesh.local_index(from, v)?);
    let mut faces = Vec::new();
    let mut exits = Vec::new();
    let mut angle = 0.0;
    for _ in 0..mesh.vertex_faces(v).len() {
        let exit = if forward { cur.1 } else { (cur.1 + 2) % 3 };
        let next = if forward {
            mesh.next_around(cur.0, cur.1)
        } else {
            mesh.prev_around(cur.0, cur.1)
        }?;
        exits.push(exit);
        faces.push(next.0);
        if next.0 == to {
            return Some((faces, exits, angle));
        }
        angle += mesh.corner_angle(next.0, next.1);
        cur = next;
    }
    None
}

/// The strip covering a Steiner route. Where the route passes through a
/// vertex, the strip goes around the side with the smaller angle.
pub(crate) fn strip_from_seed(mesh: &TriMesh, graph: &SteinerGraph, seed: &Seed) -> Strip {
    let mut strip = Strip {
        faces: vec![seed.faces[0]],
        exits: Vec::new(),
    };
    for (i, &node) in seed.nodes.iter().enumerate() {
        let current = *strip.faces.last().unwrap();
        let target = seed.faces[i + 1];
        if current == target {
            continue;
        }
        let support = graph.support(mesh, node);
        if let Support::Edge([(u, _), (w, _)]) = support {
            let tri = mesh.face(current);
            let e = (0..3)
                .find(|&e| {
                    let (p, q) = (tri[e], tri[(e + 1) % 3]);
                    (p == u && q == w) || (p == w && q == u)
                })
                .expect("route nodes lie on both faces");
            strip.exits.push(e);
            strip.faces.push(target);
            continue;
        }
        let Support::Vertex(v) = support else {
            unreachable!("graph nodes are vertices or edge points")
        };
        let fwd = walk_around(mesh, current, v, target, true);
        let bwd = walk_around(mesh, current, v, target, false);
        let (faces, exits, _) = match (fwd, bwd) {
            (Some(a), Some(b)) => {
                if b.2 < a.2 {
                    b
                } else {
                    a
                }
            }
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("consecutive route faces share the route node"),
        };
        strip.faces.extend(faces);
        strip.exits.extend(exits);
    }
    strip
}

/// Removes `f -> g -> f` detours through a single edge.
fn remove_backtracks(mesh: &TriMesh, strip: &mut Strip) {
    let mut faces = Vec::with_capacity(strip.faces.len());
    let mut exits: Vec<usize> = Vec::with_capacity(strip.exits.len());
    for (i, &f) in strip.faces.iter().enumerate() {
        let n = faces.len();
        // Entering f from faces[n-1]; if that face was entered from f via
        // the same edge, drop both.
        if n >= 2 && faces[n - 2] == f {
            let g = faces[n - 1];
            let back = exits[n - 1];
            if mesh.twin(g, back) == Some((f, exits[n - 2])) {
                faces.pop();
                exits.pop();
                exits.pop();
                if i < strip.exits.len() {
                    exits.push(strip.exits[i]);
                }
                continue;
            }
        }
        faces.push(f);
        if i < strip.exits.len() {
            exits.push(strip.exits[i]);
        }
    }
    strip.faces = faces;
    strip.exits = exits;
}

/// Drops end faces whose neighbour already contains the endpoint, so no
/// portal passes through `a` or `b`.
fn trim_ends(mesh: &TriMesh, strip: &mut Strip, a: &Support, b: &Support) {
    let mut first = 0;
    while first < strip.exits.len() && bary_in(mesh, a, strip.faces[first + 1]).is_some() {
        first += 1;
    }
    let mut last = strip.faces.len() - 1;
    while last > first && bary_in(mesh, b, strip.faces[last - 1]).is_some() {
        last -= 1;
    }
    strip.faces = strip.faces[first..=last].to_vec();
    strip.exits = strip.exits[first..last].to_vec();
}

/// Lays the strip out in the plane, preserving every edge length.
pub(crate) fn unfold(mesh: &TriMesh, strip: &Strip) -> Vec<[P2; 3]> {
    let f0 = strip.faces[0];
    let l01 = mesh.edge_length(f0, 0);
    let l12 = mesh.edge_length(f0, 1);
    let l20 = mesh.edge_length(f0, 2);
    let x = (l01 * l01 + l20 * l20 - l12 * l12) / (2.0 * l01);
    let y = (l20 * l20 - x * x).max(0.0).sqrt();
    let mut out = Vec::with_capacity(strip.faces.len());
    out.push([P2::new(0.0, 0.0), P2::new(l01, 0.0), P2::new(x, y)]);
    for (i, &e) in strip.exits.iter().enumerate() {
        let prev: [P2; 3] = out[i];
        let a = prev[e];
        let b = prev[(e + 1) % 3];
        let (g, ge) = mesh
            .twin(strip.faces[i], e)
            .expect("strip exits are interior edges");
        debug_assert_eq!(g, strip.faces[i + 1]);
        let l_ac = mesh.edge_length(g, (ge + 1) % 3);
        let l_cb = mesh.edge_length(g, (ge + 2) % 3);
        let ab = a - b;
        let l_ba = ab.norm();
        let u = ab / l_ba;
        let n = P2::new(-u.y, u.x);
        let x = (l_ba * l_ba + l_cb * l_cb - l_ac * l_ac) / (2.0 * l_ba);
        let y = (l_cb * l_cb - x * x).max(0.0).sqrt();
        let mut next = [P2::zeros(); 3];
        next[ge] = b;
        next[(ge + 1) % 3] = a;
        next[(ge + 2) % 3] = b + u * x + n * y;
        out.push(next);
    }
    out
}

fn lerp2(coords: &[P2; 3], bary: &[f64; 3]) -> P2 {
    coords[0] * bary[0] + coords[1] * bary[1] + coords[2] * bary[2]
}

#[derive(Debug, Clone, Copy)]
struct Portal {
    left: P2,
    right: P2,
}

#[derive(Debug, Clone, Copy)]
struct Corner {
    pos: P2,
    portal: usize,
    left: bool,
}

fn push_corner(corners: &mut Vec<Corner>, c: Corner) {
    if corners.last().is_none_or(|last| last.pos != c.pos) {
        corners.push(c);
    }
}

/// Taut string through a sequence of portals; the first and last portals
/// are the endpoints.
fn funnel(portals: &[Portal]) -> Vec<Corner> {
    let start = portals[0].left;
    let mut corners = vec![Corner {
        pos: start,
        portal: 0,
        left: true,
    }];
    let mut apex = start;
    let (mut pl, mut pr) = (start, start);
    let (mut li, mut ri) = (0, 0);
    let mut i = 1;
    let mut guard = 0;
    let limit = portals.len() * portals.len() + 16;
    while i < portals.len() && guard < limit {
        guard += 1;
        let Portal { left, right } = portals[i];
        if cross(&apex, &pr, &right) >= 0.0 {
            if pr == apex || right == pl || cross(&apex, &pl, &right) < 0.0 {
                pr = right;
                ri = i;
            } else {
                apex = pl;
                push_corner(
                    &mut corners,
                    Corner {
                        pos: apex,
                        portal: li,
                        left: true,
                    },
                );
                pr = apex;
                ri = li;
                i = li + 1;
                continue;
            }
        }
        if cross(&apex, &pl, &left) <= 0.0 {
            if pl == apex || left == pr || cross(&apex, &pr, &left) > 0.0 {
                pl = left;
                li = i;
            } else {
                apex = pr;
                push_corner(
                    &mut corners,
                    Corner {
                        pos: apex,
                        portal: ri,
                        left: false,
                    },
                );
                pl = apex;
                li = ri;
                i = ri + 1;
                continue;
            }
        }
        i += 1;
    }
    let end = portals[portals.len() - 1].left;
    corners.push(Corner {
        pos: end,
        portal: portals.len() - 1,
        left: true,
    });
    corners
}

struct Bend {
    vertex: usize,
    other_side: f64,
    first: usize,
    last: usize,
}

fn portal_vertices(mesh: &TriMesh, strip: &Strip, p: usize) -> (usize, usize) {
    let tri = mesh.face(strip.faces[p]);
    let e = strip.exits[p];
    (tri[e], tri[(e + 1) % 3])
}

/// Straightens the path from `a` to `b` inside `strip`.
pub(crate) fn straighten(
    mesh: &TriMesh,
    mut strip: Strip,
    a: &Support,
    b: &Support,
) -> Result<TracedPath, SpaceError> {
    let endpoint_vertex = |s: &Support| match s {
        Support::Vertex(v) => Some(*v),
        _ => None,
    };
    let skip = [endpoint_vertex(a), endpoint_vertex(b)];
    let mut ambiguous = false;
    for reroutes in 0..MAX_STRAIGHTEN_ITERS {
        remove_backtracks(mesh, &mut strip);
        trim_ends(mesh, &mut strip, a, b);
        let n = strip.exits.len();
        let coords = unfold(mesh, &strip);
        let ba = bary_in(mesh, a, strip.faces[0]).expect("strip starts at a");
        let bb = bary_in(mesh, b, strip.faces[n]).expect("strip ends at b");
        let a2 = lerp2(&coords[0], &ba);
        let b2 = lerp2(&coords[n], &bb);

        let mut portals = Vec::with_capacity(n + 2);
        portals.push(Portal {
            left: a2,
            right: a2,
        });
        for (i, &e) in strip.exits.iter().enumerate() {
            portals.push(Portal {
                left: coords[i][(e + 1) % 3],
                right: coords[i][e],
            });
        }
        portals.push(Portal {
            left: b2,
            right: b2,
        });
        let corners = funnel(&portals);

        let mut worst: Option<Bend> = None;
        for k in 1..corners.len() - 1 {
            let c = corners[k];
            let p = c.portal - 1;
            let (r, l) = portal_vertices(mesh, &strip, p);
            let v = if c.left { l } else { r };
            if skip.contains(&Some(v)) || mesh.is_boundary_vertex(v) {
                continue;
            }
            let contains = |q: usize| {
                let (x, y) = portal_vertices(mesh, &strip, q);
                x == v || y == v
            };
            let mut first = p;
            while first > 0 && contains(first - 1) {
                first -= 1;
            }
            let mut last = p;
            while last + 1 < n && contains(last + 1) {
                last += 1;
            }
            let iv = mesh.local_index(strip.faces[first], v).unwrap();
            let pv = coords[first][iv];
            let other = |q: usize| {
                let e = strip.exits[q];
                let tri = mesh.face(strip.faces[q]);
                if tri[e] == v {
                    coords[q][(e + 1) % 3]
                } else {
                    coords[q][e]
                }
            };
            let mut strip_side = angle_between(&(corners[k - 1].pos - pv), &(other(first) - pv));
            for q in first + 1..=last {
                let f = strip.faces[q];
                strip_side += mesh.corner_angle(f, mesh.local_index(f, v).unwrap());
            }
            strip_side += angle_between(&(other(last) - pv), &(corners[k + 1].pos - pv));
            let cone = mesh.cone_angle(v);
            let other_side = cone - strip_side;
            if (other_side - PI).abs() <= AMBIGUITY_TOL && cone > 2.0 * PI + AMBIGUITY_TOL {
                ambiguous = true;
            }
            if other_side < PI - ANGLE_TOL
                && worst.as_ref().is_none_or(|w| {
                    other_side < w.other_side || (other_side == w.other_side && v < w.vertex)
                })
            {
                worst = Some(Bend {
                    vertex: v,
                    other_side,
                    first,
                    last,
                });
            }
        }

        if let Some(bend) = worst {
            if reroute(mesh, &mut strip, &bend) {
                continue;
            }
        }
        let segments = segments(mesh, &strip, &coords, &corners, (ba, bb));
        let length = segments.iter().map(|s| s.length).sum();
        return Ok(TracedPath {
            segments,
            length,
            strip,
            unfolded: coords,
            ambiguous,
            reroutes,
        });
    }
    Err(SpaceError::NoConvergence {
        iterations: MAX_STRAIGHTEN_ITERS,
    })
}

/// Sends the strip around the other side of the bend vertex.
fn reroute(mesh: &TriMesh, strip: &mut Strip, bend: &Bend) -> bool {
    let (first, last) = (bend.first, bend.last);
    let f = strip.faces[first];
    let iv = mesh.local_index(f, bend.vertex).unwrap();
    let forward_used = strip.exits[first] == iv;
    let Some((faces, exits, _)) =
        walk_around(mesh, f, bend.vertex, strip.faces[last + 1], !forward_used)
    else {
        return false;
    };
    let mut new_faces = strip.faces[..=first].to_vec();
    new_faces.extend(faces);
    new_faces.extend_from_slice(&strip.faces[last + 2..]);
    let mut new_exits = strip.exits[..first].to_vec();
    new_exits.extend(exits);
    new_exits.extend_from_slice(&strip.exits[last + 1..]);
    strip.faces = new_faces;
    strip.exits = new_exits;
    true
}

/// Where the taut string crosses each portal, as a fraction from its right
/// end to its left end.
fn crossings(portals_2d: &[(P2, P2)], corners: &[Corner]) -> Vec<f64> {
    let mut out = Vec::with_capacity(portals_2d.len());
    let mut k = 0;
    for (i, (right, left)) in portals_2d.iter().enumerate() {
        let ext = i + 1;
        while k + 1 < corners.len() && corners[k + 1].portal < ext {
            k += 1;
        }
        if let Some(c) = corners.iter().find(|c| c.portal == ext) {
            out.push(if c.left { 1.0 } else { 0.0 });
            continue;
        }
        let p = corners[k].pos;
        let d = corners[k + 1].pos - p;
        let e = left - right;
        let denom = e.x * d.y - e.y * d.x;
        let lambda = if denom.abs() > 1e-300 {
            let w = p - right;
            (w.x * d.y - w.y * d.x) / denom
        } else {
            0.5
        };
        out.push(lambda.clamp(0.0, 1.0));
    }
    out
}

fn segments(
    mesh: &TriMesh,
    strip: &Strip,
    coords: &[[P2; 3]],
    corners: &[Corner],
    ends: ([f64; 3], [f64; 3]),
) -> Vec<Segment> {
    let n = strip.exits.len();
    let portals_2d: Vec<(P2, P2)> = strip
        .exits
        .iter()
        .enumerate()
        .map(|(i, &e)| (coords[i][e], coords[i][(e + 1) % 3]))
        .collect();
    let lambdas = crossings(&portals_2d, corners);
    let mut out = Vec::with_capacity(n + 1);
    let mut entry = ends.0;
    for i in 0..=n {
        let f = strip.faces[i];
        let exit = if i < n {
            let e = strip.exits[i];
            let mut b = [0.0; 3];
            b[e] = 1.0 - lambdas[i];
            b[(e + 1) % 3] = lambdas[i];
            b
        } else {
            ends.1
        };
        let length = (lerp2(&coords[i], &exit) - lerp2(&coords[i], &entry)).norm();
        out.push(Segment {
            face: f,
            from: entry,
            to: exit,
            length,
        });
        if i < n {
            let e = strip.exits[i];
            let (_, ge) = mesh.twin(f, e).unwrap();
            let mut b = [0.0; 3];
            b[ge] = lambdas[i];
            b[(ge + 1) % 3] = 1.0 - lambdas[i];
            entry = b;
        }
    }
    out
}

/// Points at the given arc-length fractions along a traced path.
pub(crate) fn sample(segments: &[Segment], fractions: &[f64]) -> Vec<MeshPoint> {
    let total: f64 = segments.iter().map(|s| s.length).sum();
    fractions
        .iter()
        .map(|&t| {
            let target = t.clamp(0.0, 1.0) * total;
            let mut acc = 0.0;
            for (i, s) in segments.iter().enumerate() {
                let is_last = i + 1 == segments.len();
                if acc + s.length >= target || is_last {
                    let u = if s.length > 0.0 {
                        ((target - acc) / s.length).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    let bary = [0, 1, 2].map(|k| s.from[k] * (1.0 - u) + s.to[k] * u);
                    return MeshPoint::new(s.face, normalize_bary(bary));
                }
                acc += s.length;
            }
            unreachable!("paths have at least one segment")
        })
        .collect()
}
