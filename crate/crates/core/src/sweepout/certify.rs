use serde::Serialize;

use super::SweepError;
use crate::curve::{segment_gaps, PolyCurve};
use crate::space::GeodesicSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifyParams {
    /// Largest accepted relative defect.
    pub tol: f64,
    /// Parameter width of the tested sub-arcs; `None` picks
    /// [`default_window`].
    pub window: Option<f64>,
}

impl Default for CertifyParams {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationResult {
    pub passed: bool,
    /// Largest `(arc - chord) / arc` over all tested sub-arcs.
    pub max_defect: f64,
    /// Sample index where the largest defect starts.
    pub worst_start: usize,
    /// Parameter width actually tested (a whole number of samples).
    pub window: f64,
    pub tol: f64,
}

/// `min(epsilon / (2 L), 1/8)` for a curve of length `L`.
pub fn default_window(epsilon: f64, length: f64) -> f64 {
    if length > 0.0 {
        (epsilon / (2.0 * length)).min(0.125)
    } else {
        0.125
    }
}

/// Checks that the closed curve locally realizes distance: for every sample
/// `s`, the distance from `c(s)` to `c(s + w)` must match the length of the
/// sub-arc between them up to the relative tolerance.
pub fn certify_geodesic<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    params: &CertifyParams,
) -> Result<CertificationResult, SweepError> {
    let m = c.len();
    let gaps = segment_gaps(space, c)?;
    let length: f64 = gaps.iter().sum();
    let window = params
        .window
        .unwrap_or_else(|| default_window(space.epsilon(), length));
    let span = ((window * m as f64).floor() as usize).clamp(1, m);

    let mut max_defect = 0.0_f64;
    let mut worst_start = 0;
    for s in 0..m {
        let arc: f64 = (s..s + span).map(|i| gaps[i % m]).sum();
        if arc > space.epsilon() {
            return Err(SweepError::WindowTooWide {
                arc,
                epsilon: space.epsilon(),
            });
        }
        if arc <= 0.0 {
            continue;
        }
        let chord = space.distance(c.at(s), c.at(s + span))?;
        let defect = (arc - chord) / arc;
        if defect > max_defect {
            max_defect = defect;
            worst_start = s;
        }
    }
    Ok(CertificationResult {
        passed: max_defect < params.tol,
        max_defect,
        worst_start,
        window: span as f64 / m as f64,
        tol: params.tol,
    })
}
