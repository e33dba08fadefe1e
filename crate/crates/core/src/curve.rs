//! Discretized curves, their length, and constant-speed resampling.
//!
//! A closed curve with `m` samples places sample `i` at parameter `i / m`;
//! an open one at `i / (m - 1)`. Between consecutive samples the curve is the
//! unique shortest path joining them, so every gap must stay below the
//! backend's uniqueness radius.

use serde::{Deserialize, Serialize};

use crate::space::{check_backend, uniform_fractions, GeodesicSpace, SpaceError};

/// A cyclic (closed) or linear (open) sequence of points.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve<P> {
    points: Vec<P>,
    closed: bool,
}

impl<P: Clone> PolyCurve<P> {
    pub fn closed(points: Vec<P>) -> Result<Self, SpaceError> {
        if points.len() < 3 {
            return Err(SpaceError::InvalidCurve(format!(
                "closed curve needs at least 3 points, got {}",
                points.len()
            )));
        }
        Ok(Self {
            points,
            closed: true,
        })
    }

    pub fn open(points: Vec<P>) -> Result<Self, SpaceError> {
        if points.len() < 2 {
            return Err(SpaceError::InvalidCurve(format!(
                "open curve needs at least 2 points, got {}",
                points.len()
            )));
        }
        Ok(Self {
            points,
            closed: false,
        })
    }

    /// `m` copies of one point.
    pub fn constant(p: P, m: usize, closed: bool) -> Result<Self, SpaceError> {
        let points = vec![p; m];
        if closed {
            Self::closed(points)
        } else {
            Self::open(points)
        }
    }
}

impl<P> PolyCurve<P> {
    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn into_points(self) -> Vec<P> {
        self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of segments: `m` for closed curves, `m - 1` for open ones.
    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        }
    }

    /// Sample `i` taken cyclically.
    pub fn at(&self, i: usize) -> &P {
        &self.points[i % self.points.len()]
    }
}

/// A shortest path between two points: an open curve whose first and last
/// samples are its endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenPath<P> {
    curve: PolyCurve<P>,
}

impl<P: Clone> OpenPath<P> {
    pub fn new(points: Vec<P>) -> Result<Self, SpaceError> {
        Ok(Self {
            curve: PolyCurve::open(points)?,
        })
    }

    pub fn source(&self) -> &P {
        &self.curve.points[0]
    }

    pub fn target(&self) -> &P {
        self.curve
            .points
            .last()
            .expect("open path has at least two points")
    }

    pub fn points(&self) -> &[P] {
        self.curve.points()
    }

    pub fn as_curve(&self) -> &PolyCurve<P> {
        &self.curve
    }

    pub fn into_curve(self) -> PolyCurve<P> {
        self.curve
    }
}

/// Distance between `a` and `b`.
pub fn distance<S: GeodesicSpace + ?Sized>(
    space: &S,
    a: &S::Point,
    b: &S::Point,
) -> Result<f64, SpaceError> {
    space.distance(a, b)
}

/// The unique shortest path from `a` to `b`, sampled at `samples` points
/// equally spaced in arc length.
pub fn shortest_path<S: GeodesicSpace + ?Sized>(
    space: &S,
    a: &S::Point,
    b: &S::Point,
    samples: usize,
) -> Result<OpenPath<S::Point>, SpaceError> {
    if samples < 2 {
        return Err(SpaceError::InvalidCurve(format!(
            "a shortest path needs at least 2 samples, got {samples}"
        )));
    }
    let mut points = space.geodesic_points(a, b, &uniform_fractions(samples))?;
    // Endpoints are exact copies, not recomputed coordinates.
    points[0] = a.clone();
    points[samples - 1] = b.clone();
    OpenPath::new(points)
}

/// Per-segment distances, cyclic for closed curves.
pub fn segment_gaps<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
) -> Result<Vec<f64>, SpaceError> {
    (0..c.segment_count())
        .map(|i| space.distance(c.at(i), c.at(i + 1)))
        .collect()
}

/// Sum of the geodesic gaps between consecutive samples.
pub fn curve_length<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
) -> Result<f64, SpaceError> {
    Ok(segment_gaps(space, c)?.iter().sum())
}

/// Checks point invariants and that every gap is below epsilon.
pub fn validate_curve<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
) -> Result<(), SpaceError> {
    for p in c.points() {
        space.check_point(p)?;
    }
    check_gaps(space, &segment_gaps(space, c)?)
}

fn check_gaps<S: GeodesicSpace + ?Sized>(space: &S, gaps: &[f64]) -> Result<(), SpaceError> {
    let epsilon = space.epsilon();
    match gaps.iter().position(|&g| g >= epsilon) {
        Some(index) => Err(SpaceError::GapTooWide {
            index,
            gap: gaps[index],
            epsilon,
        }),
        None => Ok(()),
    }
}

/// Relative gap spread at which resampling stops correcting.
const GAP_SPREAD_TOL: f64 = 1e-9;
const MAX_GAP_PASSES: usize = 20;

/// Resamples `c` to `m_out` points equally spaced along it.
///
/// Sample 0 is kept exactly (and the last one, for open curves). Points
/// between input samples are taken on the shortest path joining them, which
/// is why every input gap must be below epsilon. Where the input turns, the
/// gap across the corner is shorter than the arc it spans; the positions
/// are then corrected until the geodesic gaps themselves agree.
pub fn resample_constant_speed<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    m_out: usize,
) -> Result<PolyCurve<S::Point>, SpaceError> {
    let min = if c.is_closed() { 3 } else { 2 };
    if m_out < min {
        return Err(SpaceError::InvalidCurve(format!(
            "cannot resample to {m_out} points (need at least {min})"
        )));
    }
    let gaps = segment_gaps(space, c)?;
    check_gaps(space, &gaps)?;
    let total: f64 = gaps.iter().sum();
    if total <= 0.0 {
        return PolyCurve::constant(c.points()[0].clone(), m_out, c.is_closed());
    }

    let intervals = if c.is_closed() { m_out } else { m_out - 1 };
    // Arc positions of the free samples 1..intervals (the last one is the
    // fixed endpoint of an open curve).
    let free = if c.is_closed() { m_out - 1 } else { m_out - 2 };
    let mut positions: Vec<f64> = (1..=free)
        .map(|j| j as f64 * total / intervals as f64)
        .collect();
    let mut points = points_at(space, c, &gaps, &positions)?;
    for _ in 0..MAX_GAP_PASSES {
        let out = assemble(c, &points);
        let out_gaps = segment_gaps(space, &out)?;
        let chord_total: f64 = out_gaps.iter().sum();
        let step = chord_total / intervals as f64;
        let spread = out_gaps
            .iter()
            .map(|g| (g - step).abs())
            .fold(0.0, f64::max);
        if chord_total <= 0.0 || spread <= GAP_SPREAD_TOL * step {
            return Ok(out);
        }
        let mut reached = 0.0;
        for (j, s) in positions.iter_mut().enumerate() {
            reached += out_gaps[j];
            *s = (*s + (j + 1) as f64 * step - reached).clamp(0.0, total);
        }
        // Corrections are small; keep the order in case of rounding.
        for j in 1..positions.len() {
            positions[j] = positions[j].max(positions[j - 1]);
        }
        points = points_at(space, c, &gaps, &positions)?;
    }
    Ok(assemble(c, &points))
}

fn assemble<P: Clone>(c: &PolyCurve<P>, interior: &[P]) -> PolyCurve<P> {
    let mut out = Vec::with_capacity(interior.len() + 2);
    out.push(c.points()[0].clone());
    out.extend_from_slice(interior);
    if !c.is_closed() {
        out.push(c.points()[c.len() - 1].clone());
    }
    PolyCurve {
        points: out,
        closed: c.is_closed(),
    }
}

/// Points at the given non-decreasing arc positions along `c`.
fn points_at<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    gaps: &[f64],
    positions: &[f64],
) -> Result<Vec<S::Point>, SpaceError> {
    let mut out = Vec::with_capacity(positions.len());
    let mut seg = 0;
    let mut seg_start = 0.0;
    let mut j = 0;
    while j < positions.len() {
        while seg + 1 < gaps.len() && seg_start + gaps[seg] < positions[j] {
            seg_start += gaps[seg];
            seg += 1;
        }
        let mut fractions = Vec::new();
        while j < positions.len() {
            if seg + 1 < gaps.len() && positions[j] > seg_start + gaps[seg] {
                break;
            }
            let frac = if gaps[seg] > 0.0 {
                ((positions[j] - seg_start) / gaps[seg]).clamp(0.0, 1.0)
            } else {
                0.0
            };
            fractions.push(frac);
            j += 1;
        }
        if !fractions.is_empty() {
            out.extend(space.geodesic_points(c.at(seg), c.at(seg + 1), &fractions)?);
        }
    }
    Ok(out)
}

/// Largest distance between corresponding samples of two curves.
pub fn sup_displacement<S: GeodesicSpace + ?Sized>(
    space: &S,
    a: &PolyCurve<S::Point>,
    b: &PolyCurve<S::Point>,
) -> Result<f64, SpaceError> {
    if a.len() != b.len() {
        return Err(SpaceError::InvalidCurve(format!(
            "sample counts differ ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    a.points()
        .iter()
        .zip(b.points())
        .try_fold(0.0_f64, |acc, (p, q)| Ok(acc.max(space.distance(p, q)?)))
}

/// JSON form of a curve: `{"backend": name, "closed": bool, "points": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub backend: String,
    pub closed: bool,
    pub points: Vec<Vec<f64>>,
}

impl CurveDocument {
    pub fn from_curve<S: GeodesicSpace + ?Sized>(space: &S, c: &PolyCurve<S::Point>) -> Self {
        Self {
            backend: space.name().to_string(),
            closed: c.is_closed(),
            points: c.points().iter().map(|p| space.encode_point(p)).collect(),
        }
    }

    pub fn to_curve<S: GeodesicSpace + ?Sized>(
        &self,
        space: &S,
    ) -> Result<PolyCurve<S::Point>, SpaceError> {
        check_backend(space, &self.backend)?;
        let points = self
            .points
            .iter()
            .map(|coords| space.decode_point(coords))
            .collect::<Result<Vec<_>, _>>()?;
        if self.closed {
            PolyCurve::closed(points)
        } else {
            PolyCurve::open(points)
        }
    }
}
