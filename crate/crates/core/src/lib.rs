//! Closed geodesics in compact, locally uniquely geodesic metric spaces.
//!
//! The crate is organised bottom-up:
//!
//! - [`space`]: the [`GeodesicSpace`] contract every backend implements;
//! - [`curve`]: discretized curves, length and constant-speed resampling;
//! - [`sphere`] and [`torus`]: exact model spaces;
//! - [`shortening`]: the Birkhoff shortening operator and its iteration;
//! - [`sweepout`]: circle foliations of spheres, sweep-out families, the
//!   minimax driver, the systole search and geodesic certification.
//!
//! Triangle meshes live in the `geodesic-mesh` crate.

pub mod curve;
pub mod shortening;
pub mod space;
pub mod sphere;
pub mod sweepout;
pub mod torus;

pub use curve::{
    curve_length, distance, resample_constant_speed, shortest_path, sup_displacement,
    validate_curve, CurveDocument, OpenPath, PolyCurve,
};
pub use shortening::{
    birkhoff_step, choose_k, lipschitz_bound, shorten_to_limit, KChoice, ShorteningError,
    ShorteningParams, ShorteningStatus, ShorteningTrace,
};
pub use space::{GeodesicSpace, SpaceError};
pub use sphere::SphereBackend;
pub use sweepout::{
    build_family, certify_geodesic, foliation_circle, minimax_run, systole_search,
    CertificationResult, CertifyParams, MinimaxReport, SweepError, SweepFamily, SystoleReport,
};
pub use torus::TorusBackend;
