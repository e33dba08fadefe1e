//! Foliation of the unit sphere `S^n` by circles in the planes orthogonal to
//! the first `n - 1` coordinate axes.

use std::f64::consts::PI;

use super::SweepError;
use crate::space::COORD_TOL;

/// Point on the circle over base parameter `x` (length `n - 1`) at time `t`:
/// `(x_1, ..., x_{n-1}, r sin 2 pi t, r cos 2 pi t)` with
/// `r = sqrt(1 - |x|^2)`. Time 0 is the base point `(x, 0, r)`.
pub fn foliation_circle(n: usize, x: &[f64], t: f64) -> Result<Vec<f64>, SweepError> {
    if n < 2 || x.len() != n - 1 {
        return Err(SweepError::UnsupportedDimension(n));
    }
    let norm2: f64 = x.iter().map(|v| v * v).sum();
    if norm2 > 1.0 + COORD_TOL {
        return Err(SweepError::OutsideDisk { norm2 });
    }
    let r = (1.0 - norm2).max(0.0).sqrt();
    let angle = 2.0 * PI * t;
    let mut p = Vec::with_capacity(n + 1);
    p.extend_from_slice(x);
    p.push(r * angle.sin());
    p.push(r * angle.cos());
    let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
    p.iter_mut().for_each(|v| *v /= norm);
    Ok(p)
}

/// A lattice point of the base disk.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    /// Integer lattice coordinates in `0..=grid_res`.
    pub lattice: Vec<usize>,
    /// Base parameter `x` in the closed unit disk.
    pub x: Vec<f64>,
}

/// Square lattice of spacing `2 / grid_res` on `[-1, 1]^(n-1)`, clipped to the
/// unit disk, in lexicographic order.
pub fn base_grid(n: usize, grid_res: usize) -> Result<Vec<GridPoint>, SweepError> {
    if n < 2 || grid_res == 0 {
        return Err(SweepError::UnsupportedDimension(n));
    }
    let dim = n - 1;
    let coord = |j: usize| -1.0 + 2.0 * j as f64 / grid_res as f64;
    let mut out = Vec::new();
    let mut idx = vec![0usize; dim];
    loop {
        let x: Vec<f64> = idx.iter().map(|&j| coord(j)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() <= 1.0 + COORD_TOL {
            out.push(GridPoint {
                lattice: idx.clone(),
                x,
            });
        }
        // Odometer increment, last axis fastest.
        let mut axis = dim;
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] <= grid_res {
                break;
            }
            idx[axis] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(p, q)| (p - q).abs() < 1e-15)
    }

    #[test]
    fn base_point_and_quarter_turn() {
        assert!(close(
            &foliation_circle(2, &[0.0], 0.0).unwrap(),
            &[0.0, 0.0, 1.0]
        ));
        assert!(close(
            &foliation_circle(2, &[0.0], 0.25).unwrap(),
            &[0.0, 1.0, 0.0]
        ));
    }

    #[test]
    fn point_circle_at_the_rim() {
        for t in [0.0, 0.3, 0.9] {
            assert!(close(
                &foliation_circle(2, &[1.0], t).unwrap(),
                &[1.0, 0.0, 0.0]
            ));
        }
    }

    #[test]
    fn outside_disk() {
        let err = foliation_circle(3, &[0.8, 0.7], 0.0).unwrap_err();
        assert!(matches!(err, SweepError::OutsideDisk { .. }));
    }

    #[test]
    fn higher_dimensions_have_unit_norm() {
        let p = foliation_circle(4, &[0.1, -0.5, 0.3], 0.37).unwrap();
        assert_eq!(p.len(), 5);
        assert!((p.iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(close(&p[..3], &[0.1, -0.5, 0.3]));
    }

    #[test]
    fn grid_sizes() {
        let g = base_grid(2, 16).unwrap();
        assert_eq!(g.len(), 17);
        assert_eq!(g[8].x, vec![0.0]);
        assert_eq!(g[0].x, vec![-1.0]);
        // Disk of radius 4 lattice units: 49 points with i^2 + j^2 <= 16.
        assert_eq!(base_grid(3, 8).unwrap().len(), 49);
    }
}
