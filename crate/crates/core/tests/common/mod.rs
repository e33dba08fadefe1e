//! Curve generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use geodesic_core::torus::wrap;
use geodesic_core::PolyCurve;
use nalgebra::{Rotation3, Unit, Vector2, Vector3};
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn random_torus_point<R: Rng>(rng: &mut R) -> Vector2<f64> {
    Vector2::new(rng.random_range(0.0..1.0), rng.random_range(0.0..1.0))
}

/// Circle at colatitude `colat` around the z axis, starting at longitude 0.
pub fn latitude(colat: f64, m: usize) -> PolyCurve<Vector3<f64>> {
    PolyCurve::closed(
        (0..m)
            .map(|i| {
                let phi = 2.0 * PI * i as f64 / m as f64;
                Vector3::new(
                    colat.sin() * phi.cos(),
                    colat.sin() * phi.sin(),
                    colat.cos(),
                )
            })
            .collect(),
    )
    .unwrap()
}

pub fn equator(m: usize) -> PolyCurve<Vector3<f64>> {
    latitude(PI / 2.0, m)
}

/// `t -> offset + t * class + wiggle * sin(2 pi t) * n` where `n` is the unit
/// normal of `class`.
pub fn torus_loop(
    class: (f64, f64),
    offset: (f64, f64),
    wiggle: f64,
    m: usize,
) -> PolyCurve<Vector2<f64>> {
    let len = (class.0 * class.0 + class.1 * class.1).sqrt();
    let normal = (-class.1 / len, class.0 / len);
    PolyCurve::closed(
        (0..m)
            .map(|i| {
                let t = i as f64 / m as f64;
                let w = wiggle * (2.0 * PI * t).sin();
                Vector2::new(
                    wrap(offset.0 + t * class.0 + w * normal.0),
                    wrap(offset.1 + t * class.1 + w * normal.1),
                )
            })
            .collect(),
    )
    .unwrap()
}

/// The wiggle curve `t -> (t, amp sin 2 pi t)`.
pub fn torus_wiggle(amp: f64, m: usize) -> PolyCurve<Vector2<f64>> {
    PolyCurve::closed(
        (0..m)
            .map(|i| {
                let t = i as f64 / m as f64;
                Vector2::new(t, wrap(amp * (2.0 * PI * t).sin()))
            })
            .collect(),
    )
    .unwrap()
}

pub fn torus_circle(center: (f64, f64), radius: f64, m: usize) -> PolyCurve<Vector2<f64>> {
    PolyCurve::closed(
        (0..m)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / m as f64;
                Vector2::new(
                    wrap(center.0 + radius * a.cos()),
                    wrap(center.1 + radius * a.sin()),
                )
            })
            .collect(),
    )
    .unwrap()
}

/// Random smooth closed curve on the sphere: a randomly rotated latitude
/// circle with a few random Fourier bumps in colatitude.
pub fn random_sphere_curve<R: Rng>(rng: &mut R, m: usize) -> PolyCurve<Vector3<f64>> {
    let colat0 = rng.random_range(0.3..(PI - 0.3));
    let bumps: Vec<(f64, f64)> = (1..=3)
        .map(|f| {
            (
                rng.random_range(-0.15..0.15) / f as f64,
                rng.random_range(0.0..2.0 * PI),
            )
        })
        .collect();
    let axis = Unit::new_normalize(random_unit(rng));
    let rot = Rotation3::from_axis_angle(&axis, rng.random_range(0.0..PI));
    PolyCurve::closed(
        (0..m)
            .map(|i| {
                let phi = 2.0 * PI * i as f64 / m as f64;
                let colat = colat0
                    + bumps
                        .iter()
                        .enumerate()
                        .map(|(f, (a, p))| a * ((f + 1) as f64 * phi + p).sin())
                        .sum::<f64>();
                let v = Vector3::new(
                    colat.sin() * phi.cos(),
                    colat.sin() * phi.sin(),
                    colat.cos(),
                );
                rot * v
            })
            .collect(),
    )
    .unwrap()
}

/// Random smooth closed curve on the torus: either a wiggly loop in a random
/// primitive class or a wobbly contractible circle.
pub fn random_torus_curve<R: Rng>(rng: &mut R, m: usize) -> PolyCurve<Vector2<f64>> {
    let offset = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
    let classes = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0), (2.0, 1.0)];
    if rng.random_bool(0.75) {
        let class = classes[rng.random_range(0..classes.len())];
        let wiggle = rng.random_range(0.0..0.08);
        torus_loop(class, offset, wiggle, m)
    } else {
        let r = rng.random_range(0.02..0.3);
        torus_circle(offset, r, m)
    }
}
