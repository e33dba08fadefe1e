mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_relative_eq;
use common::*;
use geodesic_core::space::GeodesicSpace;
use geodesic_core::torus::wrap;
use geodesic_core::{curve_length, shortest_path, SpaceError, SphereBackend, TorusBackend};
use nalgebra::{Vector2, Vector3};
use rand::{Rng, RngExt};

/// Great-circle angle via atan2, independent of the backend's acos path.
fn sphere_oracle(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Shortest lift over a 5x5 block of translates.
fn torus_oracle(a: &Vector2<f64>, b: &Vector2<f64>) -> f64 {
    let mut best = f64::INFINITY;
    for i in -2..=2 {
        for j in -2..=2 {
            best = best.min((b - a + Vector2::new(i as f64, j as f64)).norm());
        }
    }
    best
}

/// Point at distance `delta` from `a` along a random tangent direction.
fn sphere_nudge<R: Rng>(rng: &mut R, a: &Vector3<f64>, delta: f64) -> Vector3<f64> {
    let v = random_unit(rng);
    let u = (v - a * a.dot(&v)).normalize();
    (a * delta.cos() + u * delta.sin()).normalize()
}

fn torus_nudge<R: Rng>(rng: &mut R, a: &Vector2<f64>, delta: f64) -> Vector2<f64> {
    let t: f64 = rng.random_range(0.0..2.0 * PI);
    Vector2::new(wrap(a.x + delta * t.cos()), wrap(a.y + delta * t.sin()))
}

#[test]
fn distance_examples() {
    let sphere = SphereBackend::default();
    let d = sphere.distance(&Vector3::z(), &Vector3::x()).unwrap();
    assert_relative_eq!(d, FRAC_PI_2, epsilon = 1e-15);
    let torus = TorusBackend::default();
    let d = torus
        .distance(&Vector2::new(0.0, 0.0), &Vector2::new(0.9, 0.0))
        .unwrap();
    assert_relative_eq!(d, 0.1, epsilon = 1e-15);
    assert_eq!(sphere.distance(&Vector3::y(), &Vector3::y()).unwrap(), 0.0);
    let p = Vector2::new(0.3, 0.7);
    assert_eq!(torus.distance(&p, &p).unwrap(), 0.0);
}

#[test]
fn shortest_path_examples() {
    let sphere = SphereBackend::default();
    let path = shortest_path(&sphere, &Vector3::z(), &Vector3::x(), 3).unwrap();
    let h = 0.5_f64.sqrt();
    assert!((path.points()[1] - Vector3::new(h, 0.0, h)).norm() < 1e-15);
    assert_eq!(path.source(), &Vector3::z());
    assert_eq!(path.target(), &Vector3::x());

    let p = Vector3::new(0.6, 0.0, 0.8);
    let constant = shortest_path(&sphere, &p, &p, 4).unwrap();
    assert!(constant.points().iter().all(|q| *q == p));
    assert_eq!(curve_length(&sphere, constant.as_curve()).unwrap(), 0.0);

    let torus = TorusBackend::default();
    let path = shortest_path(&torus, &Vector2::new(0.9, 0.0), &Vector2::new(0.1, 0.0), 3).unwrap();
    assert!((path.points()[1] - Vector2::new(0.0, 0.0)).norm() < 1e-15);
    assert_relative_eq!(
        curve_length(&torus, path.as_curve()).unwrap(),
        0.2,
        epsilon = 1e-15
    );

    assert!(matches!(
        shortest_path(&sphere, &Vector3::z(), &Vector3::x(), 1),
        Err(SpaceError::InvalidCurve(_))
    ));
    // Just past a quarter circle, beyond the default radius.
    assert!(matches!(
        shortest_path(
            &sphere,
            &Vector3::z(),
            &Vector3::new(0.0, -1.0, -0.1).normalize(),
            3
        ),
        Err(SpaceError::TooFar { .. })
    ));
}

#[test]
fn metric_axioms_on_the_sphere() {
    let sphere = SphereBackend::default();
    let mut rng = rng(11);
    for _ in 0..1000 {
        let (a, b, c) = (
            random_unit(&mut rng),
            random_unit(&mut rng),
            random_unit(&mut rng),
        );
        let (Ok(ab), Ok(ba), Ok(bc), Ok(ac)) = (
            sphere.distance(&a, &b),
            sphere.distance(&b, &a),
            sphere.distance(&b, &c),
            sphere.distance(&a, &c),
        ) else {
            continue;
        };
        assert!(ab >= 0.0);
        assert!((ab - ba).abs() <= 1e-12);
        assert!(ac <= ab + bc + 1e-9);
        assert!((ab - sphere_oracle(&a, &b)).abs() < 1e-7, "{ab}");
    }
}

#[test]
fn metric_axioms_on_the_torus() {
    let torus = TorusBackend::default();
    let mut rng = rng(12);
    for _ in 0..1000 {
        let (a, b, c) = (
            random_torus_point(&mut rng),
            random_torus_point(&mut rng),
            random_torus_point(&mut rng),
        );
        let ab = torus.distance(&a, &b).unwrap();
        let ba = torus.distance(&b, &a).unwrap();
        let bc = torus.distance(&b, &c).unwrap();
        let ac = torus.distance(&a, &c).unwrap();
        assert!(ab >= 0.0);
        assert!((ab - ba).abs() <= 1e-12);
        assert!(ac <= ab + bc + 1e-9);
        assert!((ab - torus_oracle(&a, &b)).abs() < 1e-12);
    }
}

#[test]
fn torus_distance_is_translation_invariant() {
    let torus = TorusBackend::default();
    let mut rng = rng(13);
    for _ in 0..1000 {
        let (a, b) = (random_torus_point(&mut rng), random_torus_point(&mut rng));
        let s = random_torus_point(&mut rng);
        let shift = |p: &Vector2<f64>| Vector2::new(wrap(p.x + s.x), wrap(p.y + s.y));
        let d0 = torus.distance(&a, &b).unwrap();
        let d1 = torus.distance(&shift(&a), &shift(&b)).unwrap();
        assert!((d0 - d1).abs() < 1e-12, "{d0} vs {d1}");
    }
}

#[test]
fn sphere_path_length_matches_distance() {
    let sphere = SphereBackend::default();
    let mut rng = rng(14);
    let mut checked = 0;
    while checked < 200 {
        let (a, b) = (random_unit(&mut rng), random_unit(&mut rng));
        let d = sphere.distance(&a, &b).unwrap();
        if d > sphere.epsilon() {
            continue;
        }
        let m = rng.random_range(2..200);
        let path = shortest_path(&sphere, &a, &b, m).unwrap();
        let length = curve_length(&sphere, path.as_curve()).unwrap();
        assert!(
            (length - d).abs() <= 1e-12 * m as f64,
            "{length} vs {d} at m = {m}"
        );
        checked += 1;
    }
}

/// Sup distance between the sampled shortest paths before and after moving
/// both endpoints by `delta`.
fn path_shift<S, N>(space: &S, a: &S::Point, b: &S::Point, delta: f64, nudge: &mut N) -> f64
where
    S: GeodesicSpace,
    N: FnMut(&S::Point, f64) -> S::Point,
{
    let p = shortest_path(space, a, b, 33).unwrap();
    let q = shortest_path(space, &nudge(a, delta), &nudge(b, delta), 33).unwrap();
    p.points()
        .iter()
        .zip(q.points())
        .map(|(x, y)| space.distance(x, y).unwrap())
        .fold(0.0, f64::max)
}

const DELTAS: [f64; 3] = [1e-2, 1e-3, 1e-4];

fn continuity_suite<S, P, N>(space: &S, mut pair: P, mut nudge: N)
where
    S: GeodesicSpace,
    P: FnMut() -> (S::Point, S::Point),
    N: FnMut(&S::Point, f64) -> S::Point,
{
    for _ in 0..200 {
        let (a, b) = loop {
            let (a, b) = pair();
            if space
                .distance(&a, &b)
                .is_ok_and(|d| d <= space.epsilon() / 2.0)
            {
                break (a, b);
            }
        };
        let shifts: Vec<f64> = DELTAS
            .iter()
            .map(|&delta| path_shift(space, &a, &b, delta, &mut nudge))
            .collect();
        for w in shifts.windows(2) {
            assert!(w[1] <= 2.0 * w[0], "not shrinking with delta: {shifts:?}");
        }
        assert!(shifts[2] < 10.0 * 1e-4, "{shifts:?}");
    }
}

#[test]
fn shortest_paths_depend_continuously_on_endpoints_sphere() {
    let sphere = SphereBackend::default();
    let mut r1 = rng(15);
    let mut r2 = rng(16);
    continuity_suite(
        &sphere,
        || (random_unit(&mut r1), random_unit(&mut r1)),
        |p, delta| sphere_nudge(&mut r2, p, delta),
    );
}

#[test]
fn shortest_paths_depend_continuously_on_endpoints_torus() {
    let torus = TorusBackend::default();
    let mut r1 = rng(17);
    let mut r2 = rng(18);
    continuity_suite(
        &torus,
        || (random_torus_point(&mut r1), random_torus_point(&mut r1)),
        |p, delta| torus_nudge(&mut r2, p, delta),
    );
}

#[test]
fn short_loops_contract_to_their_base_point() {
    let sphere = SphereBackend::default();
    let torus = TorusBackend::default();
    let mut rng = rng(19);
    for _ in 0..50 {
        // Circumference 2 pi sin(colat) <= epsilon.
        let colat = rng.random_range(0.01..(sphere.epsilon() / (2.0 * PI)).asin());
        let c = latitude(colat, 64);
        assert!(curve_length(&sphere, &c).unwrap() <= sphere.epsilon());
        for q in c.points() {
            shortest_path(&sphere, c.at(0), q, 5).unwrap();
        }

        let r = rng.random_range(0.001..torus.epsilon() / (2.0 * PI));
        let c = torus_circle(
            (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)),
            r,
            64,
        );
        assert!(curve_length(&torus, &c).unwrap() <= torus.epsilon());
        for q in c.points() {
            shortest_path(&torus, c.at(0), q, 5).unwrap();
        }
    }
}
