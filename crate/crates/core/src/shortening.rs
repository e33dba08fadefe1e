//! Birkhoff curve shortening on discretized closed curves.
//!
//! A closed curve with `m = 2 k h` samples is split into `k` arcs of `2h`
//! samples. Stage one replaces each arc starting at an even multiple of `h`
//! by the shortest path between its endpoints; stage two does the same on
//! the arcs starting at odd multiples of `h`, wrapping around sample 0. Arc
//! endpoints are sample points, so both stages are exact replacements.
//!
//! The operator is only defined when every arc of parameter width `1/k` has
//! diameter below `epsilon / 2`; [`choose_k`] finds the smallest such `k`.

use serde::Serialize;
use thiserror::Error;

use crate::curve::{
    curve_length, resample_constant_speed, segment_gaps, sup_displacement, PolyCurve,
};
use crate::space::{uniform_fractions, GeodesicSpace, SpaceError, COORD_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShorteningError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("arc starting at sample {start} has diameter {diameter} >= {limit}")]
    DiameterViolation {
        start: usize,
        diameter: f64,
        limit: f64,
    },
    #[error("no k <= {m_max} makes every arc shorter than epsilon/2 at {m} samples")]
    CannotSatisfy { m: usize, m_max: usize },
    #[error("curve has {m} samples, not a positive multiple of 2k = {}", 2 * k)]
    BadSampleCount { m: usize, k: usize },
    #[error("expected a closed curve")]
    NotClosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShorteningParams {
    /// Initial number of arcs; `None` lets [`choose_k`] decide. Either way
    /// `k` only grows during a run.
    pub k: Option<usize>,
    /// Relative length decrease below which a run may stop.
    pub tol_length: f64,
    /// Sup sample displacement below which a run may stop; `None` means
    /// `1e-7 * epsilon`.
    pub tol_move: Option<f64>,
    pub max_iter: usize,
    /// Upper bound on `k`.
    pub m_max: usize,
}

impl Default for ShorteningParams {
    fn default() -> Self {
        Self {
            k: None,
            tol_length: 1e-7,
            tol_move: None,
            max_iter: 10_000,
            m_max: 4096,
        }
    }
}

impl ShorteningParams {
    pub fn tol_move_for(&self, epsilon: f64) -> f64 {
        self.tol_move.unwrap_or(1e-7 * epsilon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ShorteningStatus {
    Converged,
    MaxIter,
    DiameterViolation,
}

/// Per-iteration record of a shortening run. Entry 0 is the input curve
/// (after resampling), with a displacement of zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShorteningTrace {
    pub lengths: Vec<f64>,
    pub moves: Vec<f64>,
    pub status: ShorteningStatus,
    pub k: usize,
}

impl ShorteningTrace {
    /// `(iteration, length, sup_move)` rows.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.lengths
            .iter()
            .zip(&self.moves)
            .enumerate()
            .map(|(i, (&l, &m))| (i, l, m))
    }

    pub fn iterations(&self) -> usize {
        self.lengths.len() - 1
    }
}

/// Number of arcs together with a constant-speed resampling of the curve
/// whose sample count is a multiple of `2k` and at least `8k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KChoice<P> {
    pub k: usize,
    pub curve: PolyCurve<P>,
}

/// Prefix sums of gaps over two laps, so any cyclic arc length is one
/// subtraction.
struct ArcLengths {
    prefix: Vec<f64>,
}

impl ArcLengths {
    fn new(gaps: &[f64]) -> Self {
        let mut prefix = Vec::with_capacity(2 * gaps.len() + 1);
        prefix.push(0.0);
        for g in gaps.iter().chain(gaps) {
            prefix.push(prefix.last().unwrap() + g);
        }
        Self { prefix }
    }

    /// Length of the arc from sample `i` spanning `span` gaps (`i < m`, `span <= m`).
    fn arc(&self, i: usize, span: usize) -> f64 {
        self.prefix[i + span] - self.prefix[i]
    }
}

/// Largest distance from sample `j` to samples `i..j`, stopping early once
/// `limit` is reached. Backend failures count as reaching the limit: pairs
/// without a unique path are certainly not within `epsilon / 2`.
fn max_distance_to_window<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    i: usize,
    j: usize,
    limit: f64,
) -> f64 {
    let pj = c.at(j);
    let mut worst = 0.0_f64;
    for l in i..j {
        match space.distance(c.at(l), pj) {
            Ok(d) => worst = worst.max(d),
            Err(_) => return f64::INFINITY,
        }
        if worst >= limit {
            break;
        }
    }
    worst
}

/// Diameter bound for the arc window: the arc length itself when that is
/// already below `limit`, otherwise the exact sample diameter (early exit at
/// `limit`).
fn window_diameter<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    arcs: &ArcLengths,
    i: usize,
    span: usize,
    limit: f64,
) -> f64 {
    let arc = arcs.arc(i, span);
    if arc < limit {
        return arc;
    }
    let mut diam = 0.0_f64;
    // Far pairs first: the endpoints usually decide it.
    for j in (i + 1..=i + span).rev() {
        diam = diam.max(max_distance_to_window(space, c, i, j, limit));
        if diam >= limit {
            break;
        }
    }
    diam
}

fn half_epsilon_limit<S: GeodesicSpace + ?Sized>(space: &S) -> f64 {
    // Diameters equal to epsilon/2 up to rounding do not count as below it.
    space.epsilon() / 2.0 - COORD_TOL
}

/// Checks that every arc of `span` gaps has sample diameter below `epsilon/2`.
pub fn check_windows<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    span: usize,
) -> Result<(), ShorteningError> {
    let limit = half_epsilon_limit(space);
    let arcs = ArcLengths::new(&segment_gaps(space, c)?);
    for start in 0..c.len() {
        let diameter = window_diameter(space, c, &arcs, start, span.min(c.len()), limit);
        if diameter >= limit {
            return Err(ShorteningError::DiameterViolation {
                start,
                diameter,
                limit: space.epsilon() / 2.0,
            });
        }
    }
    Ok(())
}

/// Largest `w` such that every run of `w` consecutive gaps has sample
/// diameter below `epsilon/2` (capped at `m`).
fn max_window_span<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
) -> Result<usize, SpaceError> {
    let m = c.len();
    let limit = half_epsilon_limit(space);
    let arcs = ArcLengths::new(&segment_gaps(space, c)?);
    let mut best = m;
    let mut reach: usize = 0;
    for i in 0..m {
        // Window i..=i+reach is a sub-window of the previous valid one.
        reach = reach.saturating_sub(1);
        while reach < best {
            let j = i + reach + 1;
            let ok = arcs.arc(i, reach + 1) < limit
                || max_distance_to_window(space, c, i, j, limit) < limit;
            if !ok {
                break;
            }
            reach += 1;
        }
        best = best.min(reach);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

fn round_up(value: usize, multiple: usize) -> usize {
    value.div_ceil(multiple) * multiple
}

/// Smallest `k >= 2` such that every arc of parameter width `1/k` has
/// diameter below `epsilon / 2`, with the curve resampled to a multiple of
/// `2k` samples (at least `max(m, 8k)`).
pub fn choose_k<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    m_max: usize,
) -> Result<KChoice<S::Point>, ShorteningError> {
    choose_k_from(space, c, 2, m_max)
}

fn choose_k_from<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    k_min: usize,
    m_max: usize,
) -> Result<KChoice<S::Point>, ShorteningError> {
    if !c.is_closed() {
        return Err(ShorteningError::NotClosed);
    }
    let m_in = c.len();
    let cannot = ShorteningError::CannotSatisfy { m: m_in, m_max };
    // A single gap of epsilon/2 or more: subdivide along the polygon first.
    let mut refined = None;
    let mut span = max_window_span(space, c)?;
    while span == 0 {
        let current = refined.as_ref().unwrap_or(c);
        let m2 = 2 * current.len();
        if m2 > m_max {
            return Err(cannot);
        }
        let next = resample_constant_speed(space, current, m2)?;
        span = max_window_span(space, &next)?;
        refined = Some(next);
    }
    let c = refined.as_ref().unwrap_or(c);
    let m = c.len();
    // Smallest k with floor(m / k) <= span.
    let mut k = (m / (span + 1) + 1).max(k_min).max(2);
    while k <= m_max {
        let m_out = round_up(m.max(8 * k), 2 * k);
        let curve = resample_constant_speed(space, c, m_out)?;
        match check_windows(space, &curve, m_out / k) {
            Ok(()) => return Ok(KChoice { k, curve }),
            Err(ShorteningError::DiameterViolation { .. }) => k += 1,
            Err(e) => return Err(e),
        }
    }
    Err(cannot)
}

fn check_layout<P>(c: &PolyCurve<P>, k: usize) -> Result<usize, ShorteningError> {
    if !c.is_closed() {
        return Err(ShorteningError::NotClosed);
    }
    let m = c.len();
    if k < 2 || !m.is_multiple_of(2 * k) {
        return Err(ShorteningError::BadSampleCount { m, k });
    }
    Ok(m / (2 * k))
}

/// `k * max_i d(c(2i/2k), c((2i+2)/2k))`: the speed bound of the curve
/// produced by the first shortening stage.
pub fn lipschitz_bound<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    k: usize,
) -> Result<f64, ShorteningError> {
    let h = check_layout(c, k)?;
    let mut worst = 0.0_f64;
    for i in 0..k {
        worst = worst.max(space.distance(c.at(2 * i * h), c.at((2 * i + 2) * h))?);
    }
    Ok(k as f64 * worst)
}

/// Replaces each arc `[offset + 2ih, offset + 2ih + 2h]` by the shortest path
/// between its endpoints.
fn replace_arcs<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    k: usize,
    h: usize,
    offset: usize,
) -> Result<Vec<S::Point>, SpaceError> {
    let m = c.len();
    let fractions = uniform_fractions(2 * h + 1);
    let mut out = c.points().to_vec();
    for i in 0..k {
        let start = offset + 2 * i * h;
        let a = c.at(start);
        let b = c.at(start + 2 * h);
        let path = space.geodesic_points(a, b, &fractions)?;
        for (j, p) in path.into_iter().enumerate().take(2 * h).skip(1) {
            out[(start + j) % m] = p;
        }
        out[start % m] = a.clone();
    }
    Ok(out)
}

/// One application of the Birkhoff shortening operator.
///
/// The input must be closed with `m` divisible by `2k`, and every arc of
/// `m / k` gaps must have diameter below `epsilon / 2`.
pub fn birkhoff_step<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    k: usize,
) -> Result<PolyCurve<S::Point>, ShorteningError> {
    let h = check_layout(c, k)?;
    check_windows(space, c, 2 * h)?;
    let first = PolyCurve::closed(replace_arcs(space, c, k, h, 0)?)?;
    let second = replace_arcs(space, &first, k, h, h)?;
    Ok(PolyCurve::closed(second)?)
}

/// Iterates the shortening operator (resampling to constant speed between
/// steps, base point kept) until both the relative length decrease and the
/// sup displacement fall below tolerance, or the curve collapses to a point.
pub fn shorten_to_limit<S: GeodesicSpace + ?Sized>(
    space: &S,
    c: &PolyCurve<S::Point>,
    params: &ShorteningParams,
) -> Result<(PolyCurve<S::Point>, ShorteningTrace), ShorteningError> {
    let tol_move = params.tol_move_for(space.epsilon());
    let KChoice { mut k, mut curve } =
        choose_k_from(space, c, params.k.unwrap_or(2), params.m_max)?;
    let mut trace = ShorteningTrace {
        lengths: vec![curve_length(space, &curve)?],
        moves: vec![0.0],
        status: ShorteningStatus::MaxIter,
        k,
    };
    let mut rechosen = false;
    let mut iter = 0;
    while iter < params.max_iter {
        let stepped = match birkhoff_step(space, &curve, k) {
            Ok(next) => next,
            Err(ShorteningError::DiameterViolation { .. }) if !rechosen => {
                rechosen = true;
                let choice = choose_k_from(space, &curve, k, params.m_max)?;
                k = choice.k;
                curve = choice.curve;
                trace.k = k;
                continue;
            }
            Err(ShorteningError::DiameterViolation { .. }) => {
                trace.status = ShorteningStatus::DiameterViolation;
                break;
            }
            Err(e) => return Err(e),
        };
        iter += 1;
        let next = resample_constant_speed(space, &stepped, curve.len())?;
        let moved = sup_displacement(space, &curve, &next)?;
        let prev = *trace.lengths.last().unwrap();
        let length = curve_length(space, &next)?;
        trace.lengths.push(length);
        trace.moves.push(moved);
        curve = next;
        let stalled = prev <= 0.0 || (prev - length) / prev < params.tol_length;
        if (stalled && moved < tol_move) || length < tol_move {
            trace.status = ShorteningStatus::Converged;
            break;
        }
    }
    Ok((curve, trace))
}
