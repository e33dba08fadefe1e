//! Executes a [`RunConfig`] and writes its artifacts.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use geodesic_core::space::GeodesicSpace;
use geodesic_core::sweepout::SystoleWarning;
use geodesic_core::torus::wrap;
use geodesic_core::{
    build_family, certify_geodesic, curve_length, minimax_run, shorten_to_limit, systole_search,
    CertifyParams, CurveDocument, PolyCurve, ShorteningError, ShorteningParams, SpaceError,
    SphereBackend, SweepError, TorusBackend,
};
use geodesic_mesh::{load_mesh, MeshBackend};
use nalgebra::{Rotation3, Vector3};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{BackendConfig, Mode, RunConfig, SeedSpec, SweepMap};

/// Exit status for a certified result.
pub const EXIT_OK: i32 = 0;
/// Exit status for configuration and I/O errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit status for runs that finished without a certified geodesic.
pub const EXIT_NO_GEODESIC: i32 = 2;

/// The extra hooks the front end needs from a backend.
pub trait CliSpace: GeodesicSpace {
    /// Image of a unit vector of the domain sphere under the identity map.
    fn embed(&self, v: &Vector3<f64>) -> Result<Self::Point, SpaceError>;

    /// Image of a unit vector under a map into a ball of radius `radius`.
    fn cap(&self, v: &Vector3<f64>, radius: f64) -> Result<Self::Point, SpaceError>;

    /// Point of the surface for a 3D position (ring seeds).
    fn point_near(&self, x: &Vector3<f64>) -> Result<Self::Point, SpaceError>;

    /// Point for torus coordinates (torus loop seeds).
    fn torus_point(&self, _x: f64, _y: f64) -> Result<Self::Point, SpaceError> {
        Err(SpaceError::InvalidPoint(format!(
            "torus_loop seeds need the torus backend, not {}",
            self.name()
        )))
    }

    /// 3D position for polyline export, where there is one.
    fn to_3d(&self, _p: &Self::Point) -> Option<Vector3<f64>> {
        None
    }

    fn info(&self) -> Value;
}

impl CliSpace for SphereBackend {
    fn embed(&self, v: &Vector3<f64>) -> Result<Self::Point, SpaceError> {
        self.project(*v)
    }

    fn cap(&self, v: &Vector3<f64>, radius: f64) -> Result<Self::Point, SpaceError> {
        // Exponential map at the north pole of the in-plane part of v.
        let u = Vector3::new(v.x, v.y, 0.0);
        let n = u.norm();
        if n == 0.0 {
            return Ok(Vector3::z());
        }
        let angle = radius / self.radius() * n;
        self.project(Vector3::z() * angle.cos() + u / n * angle.sin())
    }

    fn point_near(&self, x: &Vector3<f64>) -> Result<Self::Point, SpaceError> {
        self.project(*x)
    }

    fn to_3d(&self, p: &Self::Point) -> Option<Vector3<f64>> {
        Some(p * self.radius())
    }

    fn info(&self) -> Value {
        json!({ "name": self.name(), "radius": self.radius(), "epsilon": self.epsilon() })
    }
}

impl CliSpace for TorusBackend {
    fn embed(&self, _v: &Vector3<f64>) -> Result<Self::Point, SpaceError> {
        Err(SpaceError::InvalidPoint(
            "the torus backend only supports the cap sweep map".into(),
        ))
    }

    fn cap(&self, v: &Vector3<f64>, radius: f64) -> Result<Self::Point, SpaceError> {
        let s = radius / self.side();
        Ok(TorusBackend::point(0.5 + s * v.x, 0.5 + s * v.y))
    }

    fn point_near(&self, x: &Vector3<f64>) -> Result<Self::Point, SpaceError> {
        Ok(TorusBackend::point(x.x, x.y))
    }

    fn torus_point(&self, x: f64, y: f64) -> Result<Self::Point, SpaceError> {
        Ok(TorusBackend::point(x, y))
    }

    fn info(&self) -> Value {
        json!({ "name": self.name(), "side": self.side(), "epsilon": self.epsilon() })
    }
}

/// Mesh plus the sphere it is swept against: the vertex centroid and the
/// mean vertex distance to it.
pub struct MeshSpace {
    pub backend: MeshBackend,
    center: Vector3<f64>,
    radius: f64,
}

impl MeshSpace {
    pub fn new(backend: MeshBackend) -> Self {
        let positions = backend.mesh().positions();
        let center = positions.iter().sum::<Vector3<f64>>() / positions.len() as f64;
        let radius =
            positions.iter().map(|p| (p - center).norm()).sum::<f64>() / positions.len() as f64;
        Self {
            backend,
            center,
            radius,
        }
    }
}

impl GeodesicSpace for MeshSpace {
    type Point = geodesic_mesh::MeshPoint;

    fn name(&self) -> &'static str {
        self.backend.name()
    }
    fn epsilon(&self) -> f64 {
        self.backend.epsilon()
    }
    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<f64, SpaceError> {
        self.backend.distance(a, b)
    }
    fn geodesic_points(
        &self,
        a: &Self::Point,
        b: &Self::Point,
        fractions: &[f64],
    ) -> Result<Vec<Self::Point>, SpaceError> {
        self.backend.geodesic_points(a, b, fractions)
    }
    fn check_point(&self, p: &Self::Point) -> Result<(), SpaceError> {
        self.backend.check_point(p)
    }
    fn encode_point(&self, p: &Self::Point) -> Vec<f64> {
        self.backend.encode_point(p)
    }
    fn decode_point(&self, coords: &[f64]) -> Result<Self::Point, SpaceError> {
        self.backend.decode_point(coords)
    }
}

impl CliSpace for MeshSpace {
    fn embed(&self, v: &Vector3<f64>) -> Result<Self::Point, SpaceError> {
        Ok(self.backend.closest_point(&(self.center + v * self.radius)))
    }

    fn cap(&self, v: &Vector3<f64>, radius: f64) -> Result<Self::Point, SpaceError> {
        let base = self.backend.mesh().position(0);
        Ok(self.backend.closest_point(&(base + v * radius)))
    }

    fn point_near(&self, x: &Vector3<f64>) -> Result<Self::Point, SpaceError> {
        Ok(self.backend.closest_point(x))
    }

    fn to_3d(&self, p: &Self::Point) -> Option<Vector3<f64>> {
        Some(self.backend.position(p))
    }

    fn info(&self) -> Value {
        let mesh = self.backend.mesh();
        json!({
            "name": self.name(),
            "epsilon": self.epsilon(),
            "estimated_epsilon": self.backend.estimated_epsilon(),
            "steiner_subdivisions": self.backend.graph().subdivisions(),
            "vertices": mesh.vertex_count(),
            "faces": mesh.face_count(),
            "ambiguities": self.backend.ambiguity_count(),
        })
    }
}

/// A CSV table.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Everything a run produces before it is written out.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: String,
    pub exit_code: i32,
    pub error: Option<String>,
    pub backend: Value,
    pub result: Value,
    pub trace: Table,
    pub candidate: Option<CurveDocument>,
    pub candidate_obj: Option<String>,
}

#[derive(Debug, Serialize)]
struct Report<'a> {
    tool: &'static str,
    version: &'static str,
    mode: Mode,
    status: &'a str,
    exit_code: i32,
    error: &'a Option<String>,
    config: &'a RunConfig,
    effective: Value,
    backend: &'a Value,
    result: &'a Value,
    timestamp: String,
    runtime_seconds: f64,
}

/// Paths of the files written by [`run`].
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub exit_code: i32,
    pub status: String,
    pub report: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Runs the configuration and writes `report.json`, `trace.csv`,
/// `candidate.curve.json` and, for meshes, `candidate.obj` into the
/// output directory.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    let start = Instant::now();
    let (outcome, effective) = execute(config)?;
    let runtime = start.elapsed().as_secs_f64();
    write_outputs(config, &outcome, effective, runtime)
}

/// Effective values that the config leaves to defaults.
fn effective_values<S: GeodesicSpace>(space: &S, config: &RunConfig) -> Value {
    let params = shortening_params(config);
    json!({
        "epsilon": space.epsilon(),
        "tol_move": params.tol_move_for(space.epsilon()),
        "cap_radius": config.sweep.cap_fraction * space.epsilon(),
    })
}

/// Runs the configuration without touching the file system.
pub fn execute(config: &RunConfig) -> Result<(Outcome, Value)> {
    match &config.backend {
        BackendConfig::Sphere { radius, epsilon } => {
            let space = match epsilon {
                Some(e) => SphereBackend::with_epsilon(*radius, *e),
                None => SphereBackend::new(*radius),
            }
            .context("sphere::new")?;
            Ok((
                execute_on(&space, config)?,
                effective_values(&space, config),
            ))
        }
        BackendConfig::Torus { side, epsilon } => {
            let space = match epsilon {
                Some(e) => TorusBackend::with_epsilon(*side, *e),
                None => TorusBackend::new(*side),
            }
            .context("torus::new")?;
            Ok((
                execute_on(&space, config)?,
                effective_values(&space, config),
            ))
        }
        BackendConfig::Mesh {
            path,
            epsilon,
            steiner_subdivisions,
        } => {
            let mesh = load_mesh(path).with_context(|| format!("reading {}", path.display()))?;
            let backend = match epsilon {
                Some(e) => MeshBackend::with_epsilon(mesh, *steiner_subdivisions, *e)
                    .context("mesh::with_epsilon")?,
                None => MeshBackend::new(mesh, *steiner_subdivisions),
            };
            let space = MeshSpace::new(backend);
            Ok((
                execute_on(&space, config)?,
                effective_values(&space, config),
            ))
        }
    }
}

fn shortening_params(config: &RunConfig) -> ShorteningParams {
    ShorteningParams {
        k: None,
        tol_length: config.tolerances.tol_length,
        tol_move: config.tolerances.tol_move,
        max_iter: config.limits.max_iter,
        m_max: config.limits.m_max,
    }
}

fn certify_params(config: &RunConfig) -> CertifyParams {
    CertifyParams {
        tol: config.tolerances.certify_tol,
        window: config.tolerances.certify_window,
    }
}

fn is_no_convergence(e: &SweepError) -> bool {
    matches!(
        e,
        SweepError::Space(SpaceError::NoConvergence { .. })
            | SweepError::Shortening(ShorteningError::Space(SpaceError::NoConvergence { .. }))
    )
}

/// Status label for errors that end a run without a geodesic (exit 2).
fn soft_failure(e: &SweepError) -> Option<&'static str> {
    match e {
        SweepError::FamilyCollapsed { .. } => Some("family_collapsed"),
        SweepError::NoneConverged { .. } => Some("none_converged"),
        e if is_no_convergence(e) => Some("no_convergence"),
        _ => None,
    }
}

fn failure<S: CliSpace>(space: &S, status: &str, message: String) -> Outcome {
    Outcome {
        status: status.to_string(),
        exit_code: EXIT_NO_GEODESIC,
        error: Some(message),
        backend: space.info(),
        result: Value::Null,
        trace: Table::default(),
        candidate: None,
        candidate_obj: None,
    }
}

/// Turns a library error into either a failed outcome (exit 2) or a hard
/// error (exit 1), naming the operation that raised it.
fn classify<S: CliSpace, T>(
    space: &S,
    op: &str,
    r: Result<T, SweepError>,
) -> Result<Result<T, Outcome>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) => match soft_failure(&e) {
            Some(status) => Ok(Err(failure(space, status, format!("{op}: {e}")))),
            None => Err(anyhow!("{op}: {e}")),
        },
    }
}

fn execute_on<S: CliSpace>(space: &S, config: &RunConfig) -> Result<Outcome> {
    match config.mode {
        Mode::Sweepout => sweepout(space, config),
        Mode::Systole => systole(space, config),
        Mode::Shorten => shorten(space, config),
        Mode::Certify => certify(space, config),
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn polyline_obj<S: CliSpace>(space: &S, c: &PolyCurve<S::Point>) -> Option<String> {
    let mut text = String::new();
    for p in c.points() {
        let x = space.to_3d(p)?;
        writeln!(text, "v {} {} {}", x.x, x.y, x.z).unwrap();
    }
    text.push('l');
    for i in 1..=c.len() {
        write!(text, " {i}").unwrap();
    }
    if c.is_closed() {
        text.push_str(" 1");
    }
    text.push('\n');
    Some(text)
}

/// OBJ export only for meshes; the analytic backends are not surfaces in a
/// fixed embedding the user asked for.
fn candidate_obj<S: CliSpace>(
    space: &S,
    config: &RunConfig,
    c: &PolyCurve<S::Point>,
) -> Option<String> {
    match config.backend {
        BackendConfig::Mesh { .. } => polyline_obj(space, c),
        _ => None,
    }
}

fn sweepout<S: CliSpace>(space: &S, config: &RunConfig) -> Result<Outcome> {
    let rotation = {
        let [r, p, y] = config.sweep.rotation;
        Rotation3::from_euler_angles(r, p, y)
    };
    let cap_radius = config.sweep.cap_fraction * space.epsilon();
    let map = |v: &[f64]| -> Result<S::Point, SpaceError> {
        let v = Vector3::new(v[0], v[1], v[2]);
        match config.sweep.map {
            SweepMap::Identity => space.embed(&v),
            SweepMap::Rotation => space.embed(&(rotation * v)),
            SweepMap::Cap => space.cap(&v, cap_radius),
        }
    };
    let d = &config.discretization;
    let family = match classify(
        space,
        "sweepout::build_family",
        build_family(space, map, 2, d.grid_res, d.m),
    )? {
        Ok(f) => f,
        Err(outcome) => return Ok(outcome),
    };
    let report = match classify(
        space,
        "sweepout::minimax_run",
        minimax_run(
            space,
            &family,
            &shortening_params(config),
            config.limits.max_sweep_iters,
            &certify_params(config),
        ),
    )? {
        Ok(r) => r,
        Err(outcome) => return Ok(outcome),
    };

    let candidate = CurveDocument::from_curve(space, &report.candidate);
    let certified = report.certified.passed;
    let result = json!({
        "family": {
            "n": family.n,
            "grid_res": family.grid_res,
            "curves": family.len(),
            "degenerate": family.degenerate.iter().filter(|&&d| d).count(),
        },
        "non_contractible": config.non_contractible,
        "status": report.status,
        "iterations": report.iterations(),
        "k": report.k,
        "m": report.m,
        "c_seq": report.c_seq,
        "lipschitz_seq": report.lipschitz_seq,
        "argmax_moves": report.argmax_moves,
        "argmax_index": report.argmax_index,
        "argmax_grid_point": report.argmax_grid_point,
        "candidate_length": report.candidate_length,
        "epsilon_check": report.epsilon_check,
        "certification": report.certified,
        "candidate": candidate,
    });
    let trace = Table {
        header: vec!["iteration", "c_k", "lipschitz", "argmax_move"],
        rows: (0..report.c_seq.len())
            .map(|i| {
                vec![
                    i.to_string(),
                    num(report.c_seq[i]),
                    num(report.lipschitz_seq[i]),
                    num(report.argmax_moves[i]),
                ]
            })
            .collect(),
    };
    Ok(Outcome {
        status: if certified {
            "certified"
        } else {
            "uncertified"
        }
        .to_string(),
        exit_code: if certified { EXIT_OK } else { EXIT_NO_GEODESIC },
        error: None,
        backend: space.info(),
        result,
        trace,
        candidate_obj: candidate_obj(space, config, &report.candidate),
        candidate: Some(candidate),
    })
}

/// Builds the seed curves of the config.
pub fn build_seeds<S: CliSpace>(space: &S, config: &RunConfig) -> Result<Vec<PolyCurve<S::Point>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    config
        .seeds
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            build_seed(space, spec, &mut rng).with_context(|| format!("cli::build_seeds: seed {i}"))
        })
        .collect()
}

fn build_seed<S: CliSpace>(
    space: &S,
    spec: &SeedSpec,
    rng: &mut ChaCha8Rng,
) -> Result<PolyCurve<S::Point>> {
    let curve = match spec {
        SeedSpec::File { path } => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let doc: CurveDocument = serde_json::from_str(&text)
                .with_context(|| format!("{} is not a curve document", path.display()))?;
            doc.to_curve(space)?
        }
        SeedSpec::Inline { curve } => curve.to_curve(space)?,
        SeedSpec::TorusLoop {
            class,
            offset,
            wiggle,
            m,
        } => {
            let len = class[0].hypot(class[1]);
            let normal = [-class[1] / len, class[0] / len];
            let points = (0..*m)
                .map(|i| {
                    let t = i as f64 / *m as f64;
                    let w = wiggle * (2.0 * PI * t).sin();
                    space.torus_point(
                        wrap(offset[0] + t * class[0] + w * normal[0]),
                        wrap(offset[1] + t * class[1] + w * normal[1]),
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            PolyCurve::closed(points)?
        }
        SeedSpec::Ring {
            center,
            radius,
            normal,
            wiggle,
            frequency,
            jitter,
            m,
        } => {
            let n = Vector3::from(*normal);
            if n.norm() == 0.0 {
                bail!("ring normal must be non-zero");
            }
            let n = n.normalize();
            // Any unit vector orthogonal to n, chosen deterministically.
            let helper = if n.x.abs() < 0.9 {
                Vector3::x()
            } else {
                Vector3::y()
            };
            let e1 = (helper - n * n.dot(&helper)).normalize();
            let e2 = n.cross(&e1);
            let c = Vector3::from(*center);
            let points = (0..*m)
                .map(|i| {
                    let t = 2.0 * PI * i as f64 / *m as f64;
                    let mut x = c
                        + (e1 * t.cos() + e2 * t.sin()) * *radius
                        + n * (wiggle * (frequency * t).sin());
                    if *jitter > 0.0 {
                        for k in 0..3 {
                            x[k] += rng.random_range(-jitter..*jitter);
                        }
                    }
                    space.point_near(&x)
                })
                .collect::<Result<Vec<_>, _>>()?;
            PolyCurve::closed(points)?
        }
    };
    if !curve.is_closed() {
        bail!("seed curves must be closed");
    }
    Ok(curve)
}

fn single_seed<S: CliSpace>(space: &S, config: &RunConfig) -> Result<PolyCurve<S::Point>> {
    let mut seeds = build_seeds(space, config)?;
    if seeds.len() != 1 {
        bail!(
            "cli::load_config: field `seeds`: {:?} mode takes exactly one seed, got {}",
            config.mode,
            seeds.len()
        );
    }
    Ok(seeds.remove(0))
}

fn systole<S: CliSpace>(space: &S, config: &RunConfig) -> Result<Outcome> {
    let seeds = build_seeds(space, config)?;
    let report = match classify(
        space,
        "sweepout::systole_search",
        systole_search(
            space,
            &seeds,
            &shortening_params(config),
            &certify_params(config),
        ),
    )? {
        Ok(r) => r,
        Err(outcome) => return Ok(outcome),
    };
    let seed_results: Vec<Value> = report
        .seeds
        .iter()
        .map(|o| {
            json!({
                "status": o.trace.as_ref().map(|t| t.status),
                "iterations": o.trace.as_ref().map(|t| t.iterations()),
                "k": o.trace.as_ref().map(|t| t.k),
                "initial_length": o.trace.as_ref().map(|t| t.lengths[0]),
                "length": o.length,
                "contractible": o.contractible,
                "certification": o.certification,
                "error": o.error,
            })
        })
        .collect();
    let warnings: Vec<Value> = report
        .warnings
        .iter()
        .map(|w| match w {
            SystoleWarning::ContractibleSeed { seed, length } => {
                json!({ "kind": "contractible_seed", "seed": seed, "length": length })
            }
            SystoleWarning::UncertifiedLimit { seed, max_defect } => {
                json!({ "kind": "uncertified_limit", "seed": seed, "max_defect": max_defect })
            }
        })
        .collect();
    let candidate = report
        .best
        .as_ref()
        .map(|b| CurveDocument::from_curve(space, &b.curve));
    let result = json!({
        "non_contractible": config.non_contractible,
        "seeds": seed_results,
        "best": report.best.as_ref().map(|b| json!({
            "seed": b.seed,
            "length": b.length,
            "certification": b.certification,
        })),
        "warnings": warnings,
        "candidate": candidate,
    });
    let mut trace = Table {
        header: vec!["seed", "iteration", "length", "sup_move"],
        rows: Vec::new(),
    };
    for (i, o) in report.seeds.iter().enumerate() {
        if let Some(t) = &o.trace {
            for (it, l, mv) in t.rows() {
                trace
                    .rows
                    .push(vec![i.to_string(), it.to_string(), num(l), num(mv)]);
            }
        }
    }
    let found = report.best.is_some();
    Ok(Outcome {
        status: if found { "certified" } else { "no_geodesic" }.to_string(),
        exit_code: if found { EXIT_OK } else { EXIT_NO_GEODESIC },
        error: None,
        backend: space.info(),
        result,
        trace,
        candidate_obj: report
            .best
            .as_ref()
            .and_then(|b| candidate_obj(space, config, &b.curve)),
        candidate,
    })
}

fn shorten<S: CliSpace>(space: &S, config: &RunConfig) -> Result<Outcome> {
    let seed = single_seed(space, config)?;
    let (limit, trace) = match classify(
        space,
        "shortening::shorten_to_limit",
        shorten_to_limit(space, &seed, &shortening_params(config)).map_err(SweepError::from),
    )? {
        Ok(r) => r,
        Err(outcome) => return Ok(outcome),
    };
    let certification = match classify(
        space,
        "sweepout::certify_geodesic",
        certify_geodesic(space, &limit, &certify_params(config)),
    )? {
        Ok(c) => c,
        Err(outcome) => return Ok(outcome),
    };
    let length = curve_length(space, &limit).context("space::curve_length")?;
    let converged = trace.status == geodesic_core::ShorteningStatus::Converged;
    let ok = converged && certification.passed && length >= space.epsilon();
    let candidate = CurveDocument::from_curve(space, &limit);
    let result = json!({
        "status": trace.status,
        "iterations": trace.iterations(),
        "k": trace.k,
        "m": limit.len(),
        "initial_length": trace.lengths[0],
        "length": length,
        "contractible": converged && length < space.epsilon(),
        "certification": certification,
        "candidate": candidate,
    });
    let table = Table {
        header: vec!["iteration", "length", "sup_move"],
        rows: trace
            .rows()
            .map(|(i, l, mv)| vec![i.to_string(), num(l), num(mv)])
            .collect(),
    };
    let status = if ok {
        "certified"
    } else if !converged {
        "not_converged"
    } else if length < space.epsilon() {
        "contractible"
    } else {
        "uncertified"
    };
    Ok(Outcome {
        status: status.to_string(),
        exit_code: if ok { EXIT_OK } else { EXIT_NO_GEODESIC },
        error: None,
        backend: space.info(),
        result,
        trace: table,
        candidate_obj: candidate_obj(space, config, &limit),
        candidate: Some(candidate),
    })
}

fn certify<S: CliSpace>(space: &S, config: &RunConfig) -> Result<Outcome> {
    let seed = single_seed(space, config)?;
    let certification = match classify(
        space,
        "sweepout::certify_geodesic",
        certify_geodesic(space, &seed, &certify_params(config)),
    )? {
        Ok(c) => c,
        Err(outcome) => return Ok(outcome),
    };
    let length = curve_length(space, &seed).context("space::curve_length")?;
    let candidate = CurveDocument::from_curve(space, &seed);
    let trace = Table {
        header: vec!["window", "max_defect", "worst_start", "passed"],
        rows: vec![vec![
            num(certification.window),
            num(certification.max_defect),
            certification.worst_start.to_string(),
            certification.passed.to_string(),
        ]],
    };
    let passed = certification.passed;
    Ok(Outcome {
        status: if passed { "certified" } else { "uncertified" }.to_string(),
        exit_code: if passed { EXIT_OK } else { EXIT_NO_GEODESIC },
        error: None,
        backend: space.info(),
        result: json!({ "length": length, "certification": certification, "candidate": candidate }),
        trace,
        candidate_obj: candidate_obj(space, config, &seed),
        candidate: Some(candidate),
    })
}

/// Serializes the report; `timestamp` and `runtime_seconds` are the only
/// fields that differ between identical runs.
pub fn report_json(
    config: &RunConfig,
    outcome: &Outcome,
    effective: Value,
    runtime: f64,
) -> Result<String> {
    let report = Report {
        tool: "geodesic",
        version: env!("CARGO_PKG_VERSION"),
        mode: config.mode,
        status: &outcome.status,
        exit_code: outcome.exit_code,
        error: &outcome.error,
        config,
        effective,
        backend: &outcome.backend,
        result: &outcome.result,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        runtime_seconds: runtime,
    };
    let mut text = serde_json::to_string_pretty(&report).context("cli::write_report")?;
    text.push('\n');
    Ok(text)
}

fn write_file(path: &Path, contents: &[u8], files: &mut Vec<PathBuf>) -> Result<()> {
    std::fs::write(path, contents)
        .with_context(|| format!("cli::write_outputs: cannot write {}", path.display()))?;
    files.push(path.to_path_buf());
    Ok(())
}

fn write_outputs(
    config: &RunConfig,
    outcome: &Outcome,
    effective: Value,
    runtime: f64,
) -> Result<RunSummary> {
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cli::write_outputs: cannot create {}", dir.display()))?;
    let mut files = Vec::new();
    let report = dir.join("report.json");
    write_file(
        &report,
        report_json(config, outcome, effective, runtime)?.as_bytes(),
        &mut files,
    )?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    if !outcome.trace.header.is_empty() {
        csv.write_record(&outcome.trace.header)?;
    }
    for row in &outcome.trace.rows {
        csv.write_record(row)?;
    }
    let bytes = csv
        .into_inner()
        .map_err(|e| anyhow!("cli::write_outputs: {e}"))?;
    write_file(&dir.join("trace.csv"), &bytes, &mut files)?;

    // Stale artifacts from an earlier run must not survive a failed one.
    for (name, contents) in [
        (
            "candidate.curve.json",
            outcome
                .candidate
                .as_ref()
                .map(|c| serde_json::to_string_pretty(c).map(|s| s + "\n"))
                .transpose()?,
        ),
        ("candidate.obj", outcome.candidate_obj.clone()),
    ] {
        let path = dir.join(name);
        match contents {
            Some(text) => write_file(&path, text.as_bytes(), &mut files)?,
            None => {
                if path.exists() {
                    std::fs::remove_file(&path).with_context(|| {
                        format!("cli::write_outputs: cannot remove stale {}", path.display())
                    })?;
                }
            }
        }
    }
    Ok(RunSummary {
        exit_code: outcome.exit_code,
        status: outcome.status.clone(),
        report,
        files,
    })
}
