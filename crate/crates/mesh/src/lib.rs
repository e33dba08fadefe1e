//! Triangle meshes with their intrinsic metric.
//!
//! Shortest paths are found in two phases: a route through a Steiner graph
//! (vertices plus equally spaced edge points) picks the sequence of faces,
//! then the path is pulled taut inside the unfolded face strip, rerouting
//! around any vertex it should not pass through.

pub mod backend;
pub mod fixtures;
pub mod mesh;
pub mod path;
pub mod point;
pub mod steiner;

pub use backend::{epsilon_estimate, vertex_girth, MeshBackend, DEFAULT_SUBDIVISIONS, S_FACTOR};
pub use mesh::{load_mesh, parse_obj_str, to_obj, MeshError, TriMesh};
pub use path::{Segment, Strip, TracedPath, ANGLE_TOL, MAX_STRAIGHTEN_ITERS};
pub use point::{closest_point, position, MeshPoint};
pub use steiner::{SteinerGraph, SteinerNode};
