use std::f64::consts::PI;
use std::io::Write;

use approx::assert_relative_eq;
use geodesic_core::space::GeodesicSpace;
use geodesic_mesh::fixtures::{cube, flat_patch, icosphere};
use geodesic_mesh::{
    epsilon_estimate, load_mesh, parse_obj_str, to_obj, MeshBackend, MeshError, SteinerGraph,
};

#[test]
fn cube_has_three_right_angles_per_corner() {
    let mesh = cube();
    assert_eq!(mesh.vertex_count(), 8);
    assert_eq!(mesh.face_count(), 12);
    assert_eq!(mesh.edge_count(), 18);
    for v in 0..8 {
        assert_relative_eq!(mesh.cone_angle(v), 1.5 * PI, epsilon = 1e-12);
        assert!(!mesh.is_boundary_vertex(v));
    }
    assert_relative_eq!(mesh.surface_area(), 6.0, epsilon = 1e-12);
}

#[test]
fn icosphere_vertex_counts() {
    for (level, v) in [(1, 42), (2, 162), (3, 642), (4, 2562)] {
        let mesh = icosphere(level);
        assert_eq!(mesh.vertex_count(), v);
        assert_eq!(mesh.face_count(), 20 * 4usize.pow(level as u32));
        // Closed surface of genus 0.
        assert_eq!(
            mesh.vertex_count() + mesh.face_count() - mesh.edge_count(),
            2
        );
        assert!(mesh.cone_angles().iter().all(|&c| c < 2.0 * PI));
    }
}

#[test]
fn obj_round_trip_through_a_file() {
    let mesh = icosphere(1);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(to_obj(&mesh).as_bytes()).unwrap();
    let loaded = load_mesh(file.path()).unwrap();
    // Vertices may be renumbered; face order and corner order are kept.
    assert_eq!(loaded.face_count(), mesh.face_count());
    assert_eq!(loaded.vertex_count(), mesh.vertex_count());
    for (s, t) in loaded.faces().iter().zip(mesh.faces()) {
        for k in 0..3 {
            assert_eq!(loaded.position(s[k]), mesh.position(t[k]));
        }
    }
}

#[test]
fn quad_face_is_a_parse_error_naming_the_face() {
    let text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 0 0 1\nf 1 2 5\nf 1 2 3 4\n";
    match parse_obj_str(text) {
        Err(MeshError::Parse { element, .. }) => assert_eq!(element, "face 1"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn garbage_is_a_parse_error() {
    assert!(matches!(
        parse_obj_str("v 0 0 zero\nf 1 2 3\n"),
        Err(MeshError::Parse { .. })
    ));
    assert!(matches!(
        load_mesh("/nonexistent/mesh.obj"),
        Err(MeshError::Parse { .. })
    ));
}

#[test]
fn fin_edge_is_non_manifold() {
    // Three triangles sharing edge 1-2.
    let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nv 1 1 1\n\
                f 1 2 3\nf 2 4 3\nf 3 5 2\n";
    match parse_obj_str(text) {
        Err(MeshError::NonManifold { element, .. }) => assert!(element.starts_with("edge")),
        other => panic!("expected non-manifold, got {other:?}"),
    }
}

#[test]
fn bowtie_vertex_is_non_manifold() {
    // Two triangles touching only at vertex 1.
    let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv -1 0 0\nv 0 -1 0\nf 1 2 3\nf 1 4 5\n";
    match parse_obj_str(text) {
        Err(MeshError::NonManifold { element, .. }) => assert_eq!(element, "vertex 0"),
        other => panic!("expected non-manifold, got {other:?}"),
    }
}

#[test]
fn two_components_are_disconnected() {
    let mut text = to_obj(&cube());
    for i in 0..8 {
        let (x, y, z) = (
            (i & 1) as f64 + 5.0,
            ((i >> 1) & 1) as f64,
            ((i >> 2) & 1) as f64,
        );
        text.push_str(&format!("v {x} {y} {z}\n"));
    }
    for t in cube().faces() {
        text.push_str(&format!("f {} {} {}\n", t[0] + 9, t[1] + 9, t[2] + 9));
    }
    assert!(matches!(
        parse_obj_str(&text),
        Err(MeshError::Disconnected { .. })
    ));
}

#[test]
fn flat_triangle_is_degenerate() {
    let text = "v 0 0 0\nv 1 0 0\nv 2 0 0\nf 1 2 3\n";
    assert!(matches!(
        parse_obj_str(text),
        Err(MeshError::DegenerateFace { face: 0, .. })
    ));
}

#[test]
fn cube_epsilon_is_positive_and_at_most_half() {
    let mesh = cube();
    let graph = SteinerGraph::new(&mesh, 4);
    let eps = epsilon_estimate(&mesh, &graph);
    assert!(eps > 0.0 && eps <= 0.5, "{eps}");
    // Recorded fixture value.
    assert_relative_eq!(eps, CUBE_EPSILON, epsilon = 1e-12);
}

/// Every corner carries at least one face diagonal; corner 1 carries exactly
/// one. Its cheapest loop uses the Steiner points at 1/5 along each edge:
/// two legs of 0.2 across the split square (through the diagonal point at
/// (0.2, 0.2)) and two legs of 0.2 * sqrt(2) across the other squares.
/// Girth 0.4 + 0.4 * sqrt(2), a quarter of it is below the edge term 0.5.
const CUBE_EPSILON: f64 = 0.1 + 0.1 * std::f64::consts::SQRT_2;

#[test]
fn flat_patch_epsilon_is_half_the_shortest_edge() {
    let mesh = flat_patch(8, 5, 0.1);
    let graph = SteinerGraph::new(&mesh, 4);
    assert_relative_eq!(epsilon_estimate(&mesh, &graph), 0.05, epsilon = 1e-15);
}

#[test]
fn epsilon_override_is_passed_through() {
    let backend = MeshBackend::with_epsilon(cube(), 4, 0.2).unwrap();
    assert_eq!(backend.epsilon(), 0.2);
    assert!(MeshBackend::with_epsilon(cube(), 4, 0.0).is_err());
}

#[test]
fn steiner_graph_shape() {
    let mesh = cube();
    let graph = SteinerGraph::new(&mesh, 4);
    assert_eq!(graph.node_count(), 8 + 18 * 4);
    // 15 boundary nodes per face, every pair joined both ways.
    assert_eq!(graph.arc_count(), 12 * 15 * 14);
    for n in 0..graph.node_count() as u32 {
        assert!(graph.arcs(n).iter().all(|a| a.weight > 0.0));
    }
}

#[test]
fn point_encoding_round_trips_and_rejects_bad_input() {
    let backend = MeshBackend::new(cube(), 4);
    let p = geodesic_mesh::MeshPoint::new(3, [0.25, 0.25, 0.5]);
    assert_eq!(backend.decode_point(&backend.encode_point(&p)).unwrap(), p);
    assert!(backend.decode_point(&[1.5, 0.2, 0.3, 0.5]).is_err());
    assert!(backend.decode_point(&[12.0, 0.2, 0.3, 0.5]).is_err());
    assert!(backend.decode_point(&[1.0, 0.2, 0.3, 0.6]).is_err());
    assert!(backend.decode_point(&[1.0, -0.1, 0.6, 0.5]).is_err());
    assert!(backend.decode_point(&[1.0, 0.5, 0.5]).is_err());
}

#[test]
fn committed_fixtures_match_their_generators() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for (name, mesh) in geodesic_mesh::fixtures::shipped() {
        let path = dir.join(format!("{name}.obj"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            to_obj(&mesh),
            "{name}.obj is stale; rerun the write_fixtures example"
        );
        let loaded = load_mesh(&path).unwrap();
        assert_eq!(loaded.face_count(), mesh.face_count());
        assert_relative_eq!(loaded.surface_area(), mesh.surface_area(), epsilon = 1e-12);
    }
}
