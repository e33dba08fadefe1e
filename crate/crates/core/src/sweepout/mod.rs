//! Sweep-outs of a space by families of closed curves, the minimax search
//! over them, the single-loop (systole) branch, and geodesic certification.

mod certify;
mod family;
mod foliation;
mod minimax;
mod systole;

use thiserror::Error;

use crate::shortening::ShorteningError;
use crate::space::SpaceError;

pub use certify::{certify_geodesic, default_window, CertificationResult, CertifyParams};
pub use family::{build_family, SweepFamily, R_MIN};
pub use foliation::{base_grid, foliation_circle, GridPoint};
pub use minimax::{minimax_run, MinimaxReport, MinimaxStatus};
pub use systole::{systole_search, SeedOutcome, SystoleBest, SystoleReport, SystoleWarning};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Shortening(#[from] ShorteningError),
    #[error("base parameter has squared norm {norm2} > 1")]
    OutsideDisk { norm2: f64 },
    #[error("sphere dimension n = {0} is not supported here")]
    UnsupportedDimension(usize),
    #[error(
        "family is discontinuous at grid point {grid_index} ({what}): distance {distance} >= epsilon/2 = {limit}; refine the grid or the sampling"
    )]
    ContinuityViolation {
        grid_index: usize,
        what: String,
        distance: f64,
        limit: f64,
    },
    #[error(
        "family collapsed at sweep iteration {iteration}: max length {c} < epsilon = {epsilon}"
    )]
    FamilyCollapsed {
        iteration: usize,
        c: f64,
        epsilon: f64,
    },
    #[error("no seed converged ({seeds} tried)")]
    NoneConverged { seeds: usize },
    #[error("certification window spans arc length {arc} > epsilon = {epsilon}")]
    WindowTooWide { arc: f64, epsilon: f64 },
    #[error("family has no curves")]
    EmptyFamily,
}
