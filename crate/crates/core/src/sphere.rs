//! The round 2-sphere of a given radius.
//!
//! Points are unit vectors in R^3; distances are the great-circle angle
//! scaled by the radius.

use std::f64::consts::PI;

use nalgebra::Vector3;

use crate::space::{GeodesicSpace, SpaceError, COORD_TOL};

/// Antipodal pairs closer than this to `pi * radius` have no unique path.
const ANTIPODAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereBackend {
    radius: f64,
    epsilon: f64,
}

impl Default for SphereBackend {
    fn default() -> Self {
        Self {
            radius: 1.0,
            epsilon: PI / 2.0,
        }
    }
}

impl SphereBackend {
    /// Sphere of the given radius with the default epsilon `(pi/2) * radius`.
    pub fn new(radius: f64) -> Result<Self, SpaceError> {
        Self::with_epsilon(radius, PI / 2.0 * radius)
    }

    pub fn with_epsilon(radius: f64, epsilon: f64) -> Result<Self, SpaceError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(SpaceError::InvalidPoint(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        if !(epsilon > 0.0 && epsilon < PI * radius) {
            return Err(SpaceError::InvalidPoint(format!(
                "sphere epsilon must lie in (0, {}), got {epsilon}",
                PI * radius
            )));
        }
        Ok(Self { radius, epsilon })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Normalizes an arbitrary nonzero vector onto the sphere.
    pub fn project(&self, v: Vector3<f64>) -> Result<Vector3<f64>, SpaceError> {
        let n = v.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(SpaceError::InvalidPoint(format!(
                "cannot project {v:?} onto the sphere"
            )));
        }
        Ok(v / n)
    }

    fn angle(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
        a.cross(b).norm().atan2(a.dot(b))
    }
}

impl GeodesicSpace for SphereBackend {
    type Point = Vector3<f64>;

    fn name(&self) -> &'static str {
        "sphere"
    }

    fn epsilon(&self) -> f64 {
        self.epsilon
    }

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<f64, SpaceError> {
        let d = self.radius * Self::angle(a, b);
        if d >= PI * self.radius - ANTIPODAL_TOL {
            return Err(SpaceError::NotUnique(format!(
                "{a:?} and {b:?} are antipodal"
            )));
        }
        Ok(d)
    }

    fn geodesic_points(
        &self,
        a: &Self::Point,
        b: &Self::Point,
        fractions: &[f64],
    ) -> Result<Vec<Self::Point>, SpaceError> {
        let d = self.distance(a, b)?;
        if d > self.epsilon {
            return Err(SpaceError::TooFar {
                distance: d,
                epsilon: self.epsilon,
            });
        }
        let theta = d / self.radius;
        let tangent = b - a * a.dot(b);
        let tn = tangent.norm();
        if tn == 0.0 || theta == 0.0 {
            return Ok(vec![*a; fractions.len()]);
        }
        let u = tangent / tn;
        Ok(fractions
            .iter()
            .map(|&t| {
                let phi = t * theta;
                let p = a * phi.cos() + u * phi.sin();
                p / p.norm()
            })
            .collect())
    }

    fn check_point(&self, p: &Self::Point) -> Result<(), SpaceError> {
        if (p.norm() - 1.0).abs() > COORD_TOL {
            return Err(SpaceError::InvalidPoint(format!(
                "sphere point {p:?} has norm {} (expected 1)",
                p.norm()
            )));
        }
        Ok(())
    }

    fn encode_point(&self, p: &Self::Point) -> Vec<f64> {
        vec![p.x, p.y, p.z]
    }

    fn decode_point(&self, coords: &[f64]) -> Result<Self::Point, SpaceError> {
        let [x, y, z] = coords else {
            return Err(SpaceError::InvalidPoint(format!(
                "sphere point needs 3 coordinates, got {}",
                coords.len()
            )));
        };
        let p = Vector3::new(*x, *y, *z);
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
    fn quarter_great_circle() {
        let s = SphereBackend::default();
        let d = s
            .distance(&Vector3::new(0.0, 0.0, 1.0), &Vector3::new(1.0, 0.0, 0.0))
            .unwrap();
        assert_abs_diff_eq!(d, PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn arc_of_angle_one() {
        let s = SphereBackend::default();
        let b = Vector3::new(0.0, 1f64.sin(), 1f64.cos());
        let d = s.distance(&Vector3::z(), &b).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn antipodal_is_not_unique() {
        let s = SphereBackend::default();
        let err = s
            .distance(&Vector3::x(), &Vector3::new(-1.0, 0.0, 0.0))
            .unwrap_err();
        assert!(matches!(err, SpaceError::NotUnique(_)));
    }

    #[test]
    fn midpoints() {
        let s = SphereBackend::default();
        let h = 2f64.sqrt() / 2.0;
        let p = shortest_path(&s, &Vector3::z(), &Vector3::x(), 3).unwrap();
        assert_abs_diff_eq!(p.points()[1], Vector3::new(h, 0.0, h), epsilon = 1e-15);
        let p = shortest_path(&s, &Vector3::x(), &Vector3::y(), 3).unwrap();
        assert_abs_diff_eq!(p.points()[1], Vector3::new(h, h, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn degenerate_path() {
        let s = SphereBackend::default();
        let p = shortest_path(&s, &Vector3::z(), &Vector3::z(), 4).unwrap();
        assert!(p.points().iter().all(|q| *q == Vector3::z()));
        assert_eq!(curve_length(&s, p.as_curve()).unwrap(), 0.0);
    }

    #[test]
    fn too_far() {
        let s = SphereBackend::default();
        let b = Vector3::new(-1.0, 0.1, 0.0).normalize();
        let err = shortest_path(&s, &Vector3::x(), &b, 3).unwrap_err();
        assert!(matches!(err, SpaceError::TooFar { .. }));
    }

    #[test]
    fn radius_scales_lengths() {
        let s = SphereBackend::new(2.0).unwrap();
        assert_abs_diff_eq!(s.epsilon(), PI, epsilon = 1e-15);
        let eq = equator(64);
        assert_abs_diff_eq!(curve_length(&s, &eq).unwrap(), 4.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SphereBackend::new(0.0).is_err());
        assert!(SphereBackend::with_epsilon(1.0, PI).is_err());
        assert!(SphereBackend::default()
            .decode_point(&[1.0, 1.0, 0.0])
            .is_err());
    }

    fn equator(m: usize) -> PolyCurve<Vector3<f64>> {
        PolyCurve::closed(
            (0..m)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / m as f64;
                    Vector3::new(t.cos(), t.sin(), 0.0)
                })
                .collect(),
        )
        .unwrap()
    }
}
