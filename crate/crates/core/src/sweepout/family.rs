use rayon::prelude::*;

use super::foliation::{base_grid, foliation_circle};
use super::SweepError;
use crate::curve::PolyCurve;
use crate::space::{GeodesicSpace, SpaceError};

/// Circles with radius below this are stored as constant curves.
pub const R_MIN: f64 = 1e-3;

/// A discrete sweep-out: one closed curve per base-disk lattice point.
#[derive(Debug, Clone)]
pub struct SweepFamily<P> {
    pub n: usize,
    pub grid_res: usize,
    pub lattice: Vec<Vec<usize>>,
    pub grid: Vec<Vec<f64>>,
    pub curves: Vec<PolyCurve<P>>,
    pub degenerate: Vec<bool>,
}

impl<P: Clone> SweepFamily<P> {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Pairs of lattice neighbours (one step along one axis).
    pub fn neighbour_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (i, a) in self.lattice.iter().enumerate() {
            for (j, b) in self.lattice.iter().enumerate().skip(i + 1) {
                let steps: usize = a.iter().zip(b).map(|(p, q)| p.abs_diff(*q)).sum();
                if steps == 1 {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

/// Builds the family `t -> f(phi_x(t))` over the base lattice, sampled at `m`
/// uniform times.
///
/// Curves over points with `r < R_MIN` are flagged degenerate and stored as
/// constant curves at their base point. Consecutive samples of every other
/// curve, and base points of neighbouring non-degenerate lattice points,
/// must lie within `epsilon / 2` of each other.
pub fn build_family<S, F>(
    space: &S,
    f: F,
    n: usize,
    grid_res: usize,
    m: usize,
) -> Result<SweepFamily<S::Point>, SweepError>
where
    S: GeodesicSpace + ?Sized,
    F: Fn(&[f64]) -> Result<S::Point, SpaceError> + Sync,
{
    let grid = base_grid(n, grid_res)?;
    let limit = space.epsilon() / 2.0;

    let built = grid
        .par_iter()
        .enumerate()
        .map(
            |(gi, g)| -> Result<(PolyCurve<S::Point>, bool), SweepError> {
                let r2 = 1.0 - g.x.iter().map(|v| v * v).sum::<f64>();
                let degenerate = r2 < R_MIN * R_MIN;
                if degenerate {
                    let base = f(&foliation_circle(n, &g.x, 0.0)?)?;
                    return Ok((PolyCurve::constant(base, m, true)?, true));
                }
                let points = (0..m)
                    .map(|i| {
                        f(&foliation_circle(n, &g.x, i as f64 / m as f64)?).map_err(Into::into)
                    })
                    .collect::<Result<Vec<_>, SweepError>>()?;
                let curve = PolyCurve::closed(points)?;
                for i in 0..m {
                    let d = space
                        .distance(curve.at(i), curve.at(i + 1))
                        .unwrap_or(f64::INFINITY);
                    if d >= limit {
                        return Err(SweepError::ContinuityViolation {
                            grid_index: gi,
                            what: format!("samples {i} and {}", (i + 1) % m),
                            distance: d,
                            limit,
                        });
                    }
                }
                Ok((curve, false))
            },
        )
        .collect::<Result<Vec<_>, _>>()?;

    let (curves, degenerate): (Vec<_>, Vec<_>) = built.into_iter().unzip();
    let family = SweepFamily {
        n,
        grid_res,
        lattice: grid.iter().map(|g| g.lattice.clone()).collect(),
        grid: grid.into_iter().map(|g| g.x).collect(),
        curves,
        degenerate,
    };

    for (i, j) in family.neighbour_pairs() {
        if family.degenerate[i] || family.degenerate[j] {
            continue;
        }
        let d = space
            .distance(family.curves[i].at(0), family.curves[j].at(0))
            .unwrap_or(f64::INFINITY);
        if d >= limit {
            return Err(SweepError::ContinuityViolation {
                grid_index: i,
                what: format!("base points of grid points {i} and {j}"),
                distance: d,
                limit,
            });
        }
    }
    Ok(family)
}
