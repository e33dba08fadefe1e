//! Minimax over a sweep-out: apply the shortening operator to every curve of
//! the family, track the largest length `c_k` per iteration, and return the
//! curve realizing it.

use rayon::prelude::*;
use serde::Serialize;

use super::certify::{certify_geodesic, CertificationResult, CertifyParams};
use super::family::SweepFamily;
use super::SweepError;
use crate::curve::{curve_length, resample_constant_speed, sup_displacement, PolyCurve};
use crate::shortening::{
    birkhoff_step, check_windows, choose_k, lipschitz_bound, ShorteningError, ShorteningParams,
};
use crate::space::GeodesicSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MinimaxStatus {
    Converged,
    MaxIter,
}

#[derive(Debug, Clone)]
pub struct MinimaxReport<P> {
    /// `c_0` (the resampled input family) followed by one maximum per sweep
    /// iteration.
    pub c_seq: Vec<f64>,
    /// Largest Lipschitz bound over the family, aligned with `c_seq`.
    pub lipschitz_seq: Vec<f64>,
    /// Sup displacement of the arg-max curve, aligned with `c_seq` (0 first).
    pub argmax_moves: Vec<f64>,
    pub argmax_index: usize,
    pub argmax_grid_point: Vec<f64>,
    /// The raw arg-max curve at termination.
    pub candidate: PolyCurve<P>,
    pub candidate_length: f64,
    pub certified: CertificationResult,
    /// Whether the final maximum is at least epsilon.
    pub epsilon_check: bool,
    pub status: MinimaxStatus,
    pub k: usize,
    pub m: usize,
    pub epsilon: f64,
}

impl<P> MinimaxReport<P> {
    pub fn iterations(&self) -> usize {
        self.c_seq.len() - 1
    }
}

fn round_up(value: usize, multiple: usize) -> usize {
    value.div_ceil(multiple) * multiple
}

/// Maximum with ties going to the lowest index.
fn arg_max(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
            if v > bv {
                (i, v)
            } else {
                (bi, bv)
            }
        })
}

type Prepared<P> = (usize, Vec<PolyCurve<P>>);

/// Picks one global `k` for the family (the largest per-curve choice, grown
/// further if some curve still fails at the common sample count) and
/// resamples every curve to the common count.
fn prepare_family<S: GeodesicSpace + ?Sized>(
    space: &S,
    family: &SweepFamily<S::Point>,
    params: &ShorteningParams,
) -> Result<Prepared<S::Point>, SweepError> {
    let live: Vec<usize> = (0..family.len())
        .filter(|&i| !family.degenerate[i])
        .collect();
    let ks = live
        .par_iter()
        .map(|&i| choose_k(space, &family.curves[i], params.m_max).map(|c| c.k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut k = ks.into_iter().max().unwrap_or(2).max(params.k.unwrap_or(2));
    let m_in = family.curves.iter().map(|c| c.len()).max().unwrap_or(0);
    loop {
        if k > params.m_max {
            return Err(ShorteningError::CannotSatisfy {
                m: m_in,
                m_max: params.m_max,
            }
            .into());
        }
        let m = round_up(m_in.max(8 * k), 2 * k);
        let curves = family
            .curves
            .par_iter()
            .zip(&family.degenerate)
            .map(|(c, &degenerate)| -> Result<_, SweepError> {
                if degenerate {
                    return Ok(PolyCurve::constant(c.points()[0].clone(), m, true)?);
                }
                let r = resample_constant_speed(space, c, m)?;
                check_windows(space, &r, m / k)?;
                Ok(r)
            })
            .collect::<Result<Vec<_>, _>>();
        match curves {
            Ok(curves) => return Ok((k, curves)),
            Err(SweepError::Shortening(ShorteningError::DiameterViolation { .. })) => k += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Runs the sweep-out minimax iteration.
///
/// Stops when the relative change of `c_k` is below `params.tol_length`
/// and the arg-max curve moved less than the move tolerance, or after
/// `max_sweep_iters` iterations. Fails with `FamilyCollapsed` as soon as
/// every curve is shorter than epsilon.
pub fn minimax_run<S: GeodesicSpace + ?Sized>(
    space: &S,
    family: &SweepFamily<S::Point>,
    params: &ShorteningParams,
    max_sweep_iters: usize,
    certify: &CertifyParams,
) -> Result<MinimaxReport<S::Point>, SweepError> {
    if family.is_empty() {
        return Err(SweepError::EmptyFamily);
    }
    let epsilon = space.epsilon();
    let tol_move = params.tol_move_for(epsilon);
    let (k, mut curves) = prepare_family(space, family, params)?;
    let m = curves[0].len();

    let lengths = curves
        .par_iter()
        .map(|c| curve_length(space, c))
        .collect::<Result<Vec<_>, _>>()?;
    let (mut argmax, c0) = arg_max(&lengths);
    if c0 < epsilon {
        return Err(SweepError::FamilyCollapsed {
            iteration: 0,
            c: c0,
            epsilon,
        });
    }
    let lip0 = curves
        .par_iter()
        .map(|c| lipschitz_bound(space, c, k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut c_seq = vec![c0];
    let mut lipschitz_seq = vec![lip0.into_iter().fold(0.0, f64::max)];
    let mut argmax_moves = vec![0.0];
    let mut status = MinimaxStatus::MaxIter;

    for iteration in 1..=max_sweep_iters {
        let stepped = curves
            .par_iter()
            .zip(&family.degenerate)
            .map(|(c, &degenerate)| -> Result<_, SweepError> {
                if degenerate {
                    return Ok((c.clone(), 0.0, 0.0, 0.0));
                }
                let next = resample_constant_speed(space, &birkhoff_step(space, c, k)?, m)?;
                let length = curve_length(space, &next)?;
                let moved = sup_displacement(space, c, &next)?;
                let lip = lipschitz_bound(space, &next, k)?;
                Ok((next, length, moved, lip))
            })
            .collect::<Result<Vec<_>, _>>()?;

        let lengths: Vec<f64> = stepped.iter().map(|s| s.1).collect();
        let (idx, c_k) = arg_max(&lengths);
        let c_prev = *c_seq.last().unwrap();
        c_seq.push(c_k);
        lipschitz_seq.push(stepped.iter().map(|s| s.3).fold(0.0, f64::max));
        argmax_moves.push(stepped[idx].2);
        argmax = idx;
        curves = stepped.into_iter().map(|s| s.0).collect();

        if c_k < epsilon {
            return Err(SweepError::FamilyCollapsed {
                iteration,
                c: c_k,
                epsilon,
            });
        }
        if (c_prev - c_k).abs() / c_prev < params.tol_length && argmax_moves[iteration] < tol_move {
            status = MinimaxStatus::Converged;
            break;
        }
    }

    let candidate = curves.swap_remove(argmax);
    let candidate_length = *c_seq.last().unwrap();
    let certified = certify_geodesic(space, &candidate, certify)?;
    Ok(MinimaxReport {
        epsilon_check: candidate_length >= epsilon,
        c_seq,
        lipschitz_seq,
        argmax_moves,
        argmax_index: argmax,
        argmax_grid_point: family.grid[argmax].clone(),
        candidate,
        candidate_length,
        certified,
        status,
        k,
        m,
        epsilon,
    })
}
