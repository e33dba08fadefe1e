//! The flat square torus `R^2 / (side * Z^2)`.
//!
//! Points carry fractional coordinates in `[0, 1)^2`; lengths are scaled by
//! `side`. Shortest paths are straight segments of the minimizing lift.

use nalgebra::Vector2;

use crate::space::{GeodesicSpace, SpaceError};

/// Two lifts whose lengths differ by less than this are a tie.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusBackend {
    side: f64,
    epsilon: f64,
}

impl Default for TorusBackend {
    fn default() -> Self {
        Self {
            side: 1.0,
            epsilon: 0.25,
        }
    }
}

/// Reduces a coordinate into `[0, 1)`.
pub fn wrap(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl TorusBackend {
    /// Torus of the given side with the default epsilon `side / 4`.
    pub fn new(side: f64) -> Result<Self, SpaceError> {
        Self::with_epsilon(side, side / 4.0)
    }

    pub fn with_epsilon(side: f64, epsilon: f64) -> Result<Self, SpaceError> {
        if !(side > 0.0 && side.is_finite()) {
            return Err(SpaceError::InvalidPoint(format!(
                "torus side must be positive, got {side}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < side / 2.0) {
            return Err(SpaceError::InvalidPoint(format!(
                "torus epsilon must lie in (0, {}), got {epsilon}",
                side / 2.0
            )));
        }
        Ok(Self { side, epsilon })
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    /// Point with arbitrary real fractional coordinates, reduced mod 1.
    pub fn point(x: f64, y: f64) -> Vector2<f64> {
        Vector2::new(wrap(x), wrap(y))
    }

    /// Displacement (in fractional units) of the shortest lift from `a` to `b`.
    fn lift(&self, a: &Vector2<f64>, b: &Vector2<f64>) -> Result<Vector2<f64>, SpaceError> {
        let base = b - a;
        let mut best: Option<(f64, Vector2<f64>)> = None;
        let mut second = f64::INFINITY;
        for i in -1..=1 {
            for j in -1..=1 {
                let v = base + Vector2::new(i as f64, j as f64);
                let len = v.norm();
                match best {
                    Some((b_len, _)) if len >= b_len => second = second.min(len),
                    Some((b_len, _)) => {
                        second = b_len;
                        best = Some((len, v));
                    }
                    None => best = Some((len, v)),
                }
            }
        }
        let (len, v) = best.expect("nine translates");
        if (second - len) * self.side < TIE_TOL {
            return Err(SpaceError::NotUnique(format!(
                "{a:?} and {b:?} have two minimizing translates"
            )));
        }
        Ok(v)
    }
}

impl GeodesicSpace for TorusBackend {
    type Point = Vector2<f64>;

    fn name(&self) -> &'static str {
        "torus"
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<f64, SpaceError> {
        Ok(self.lift(a, b)?.norm() * self.side)
    }

    fn geodesic_points(
        &self,
        a: &Self::Point,
        b: &Self::Point,
        fractions: &[f64],
    ) -> Result<Vec<Self::Point>, SpaceError> {
        let v = self.lift(a, b)?;
        let d = v.norm() * self.side;
        if d > self.epsilon {
            return Err(SpaceError::TooFar {
                distance: d,
                epsilon: self.epsilon,
            });
        }
        Ok(fractions
            .iter()
            .map(|&t| {
                let p = a + v * t;
                Self::point(p.x, p.y)
            })
            .collect())
    }

    fn check_point(&self, p: &Self::Point) -> Result<(), SpaceError> {
        if p.iter().all(|c| (0.0..1.0).contains(c)) {
            Ok(())
        } else {
            Err(SpaceError::InvalidPoint(format!(
                "torus point {p:?} is outside [0,1)^2"
            )))
        }
    }

    fn encode_point(&self, p: &Self::Point) -> Vec<f64> {
        vec![p.x, p.y]
    }

    fn decode_point(&self, coords: &[f64]) -> Result<Self::Point, SpaceError> {
        let [x, y] = coords else {
            return Err(SpaceError::InvalidPoint(format!(
                "torus point needs 2 coordinates, got {}",
                coords.len()
            )));
        };
        let p = Vector2::new(*x, *y);
        self.check_point(&p)?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{curve_length, shortest_path, PolyCurve};
    use approx::assert_abs_diff_eq;

    #[test]
    fn wraparound_distance() {
        let t = TorusBackend::default();
        let d = t
            .distance(&Vector2::new(0.0, 0.0), &Vector2::new(0.9, 0.0))
            .unwrap();
        assert_abs_diff_eq!(d, 0.1, epsilon = 1e-12);
        assert_eq!(
            t.distance(&Vector2::new(0.3, 0.7), &Vector2::new(0.3, 0.7))
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn interior_segment() {
        let t = TorusBackend::default();
        let d = t
            .distance(&Vector2::new(0.1, 0.1), &Vector2::new(0.2, 0.3))
            .unwrap();
        assert_abs_diff_eq!(d, 0.05f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn half_diagonal_ties() {
        let t = TorusBackend::default();
        let err = t
            .distance(&Vector2::new(0.0, 0.0), &Vector2::new(0.5, 0.5))
            .unwrap_err();
        assert!(matches!(err, SpaceError::NotUnique(_)));
    }

    #[test]
    fn wraparound_midpoints() {
        let t = TorusBackend::default();
        let p = shortest_path(&t, &Vector2::new(0.95, 0.0), &Vector2::new(0.05, 0.0), 3).unwrap();
        let mid = p.points()[1];
        assert!(mid.x.min(1.0 - mid.x) < 1e-12 && mid.y == 0.0, "{mid:?}");

        let p = shortest_path(&t, &Vector2::new(0.9, 0.0), &Vector2::new(0.1, 0.0), 3).unwrap();
        let mid = p.points()[1];
        assert!(mid.x.min(1.0 - mid.x) < 1e-12, "{mid:?}");
        assert_abs_diff_eq!(
            curve_length(&t, p.as_curve()).unwrap(),
            0.2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn wrapped_loop_length() {
        let t = TorusBackend::default();
        let c =
            PolyCurve::closed((0..5).map(|i| Vector2::new(i as f64 * 0.2, 0.0)).collect()).unwrap();
        assert_abs_diff_eq!(curve_length(&t, &c).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn side_scales_lengths() {
        let t = TorusBackend::new(2.0).unwrap();
        assert_eq!(t.epsilon(), 0.5);
        let d = t
            .distance(&Vector2::new(0.0, 0.0), &Vector2::new(0.9, 0.0))
            .unwrap();
        assert_abs_diff_eq!(d, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn wrap_stays_in_unit_interval() {
        assert_eq!(wrap(1.0), 0.0);
        assert_eq!(wrap(-1e-18), 0.0);
        assert!((0.0..1.0).contains(&wrap(-0.25)));
        assert!(TorusBackend::with_epsilon(1.0, 0.5).is_err());
    }
}
