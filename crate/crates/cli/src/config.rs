//! Run configuration: one JSON document plus dotted `key=value` overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use geodesic_core::CurveDocument;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sweepout,
    Systole,
    Shorten,
    Certify,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BackendConfig {
    Sphere {
        #[serde(default = "one")]
        radius: f64,
        /// Defaults to `pi/2 * radius`.
        #[serde(default)]
        epsilon: Option<f64>,
    },
    Torus {
        #[serde(default = "one")]
        side: f64,
        /// Defaults to `side / 4`.
        #[serde(default)]
        epsilon: Option<f64>,
    },
    Mesh {
        /// OBJ file, relative to the config file.
        path: PathBuf,
        /// Overrides the estimated epsilon.
        #[serde(default)]
        epsilon: Option<f64>,
        #[serde(default = "default_subdivisions")]
        steiner_subdivisions: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Discretization {
    /// Lattice resolution of the base disk.
    #[serde(default = "default_grid_res")]
    pub grid_res: usize,
    /// Samples per family curve.
    #[serde(default = "default_m")]
    pub m: usize,
}

impl Default for Discretization {
    fn default() -> Self {
        Self {
            grid_res: default_grid_res(),
            m: default_m(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tol_length")]
    pub tol_length: f64,
    /// Defaults to `1e-7 * epsilon`.
    #[serde(default)]
    pub tol_move: Option<f64>,
    #[serde(default = "default_certify_tol")]
    pub certify_tol: f64,
    /// Defaults to `min(epsilon / (2 L), 1/8)`.
    #[serde(default)]
    pub certify_window: Option<f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_length: default_tol_length(),
            tol_move: None,
            certify_tol: default_certify_tol(),
            certify_window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_max_sweep_iters")]
    pub max_sweep_iters: usize,
    #[serde(default = "default_m_max")]
    pub m_max: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_iter: default_max_iter(),
            max_sweep_iters: default_max_sweep_iters(),
            m_max: default_m_max(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMap {
    /// The domain sphere itself (sphere backend) or its nearest-point image
    /// (mesh backend).
    Identity,
    /// Identity after a fixed rotation.
    Rotation,
    /// Everything squeezed into a ball of radius `cap_fraction * epsilon`.
    Cap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_map")]
    pub map: SweepMap,
    /// Euler angles (roll, pitch, yaw) for the rotation map.
    #[serde(default)]
    pub rotation: [f64; 3],
    #[serde(default = "default_cap_fraction")]
    pub cap_fraction: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            map: default_map(),
            rotation: [0.0; 3],
            cap_fraction: default_cap_fraction(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeedSpec {
    /// A curve document on disk, relative to the config file.
    File {
        path: PathBuf,
    },
    Inline {
        curve: CurveDocument,
    },
    /// Torus loop `t -> offset + t * class + wiggle * sin(2 pi t) * normal`.
    TorusLoop {
        class: [f64; 2],
        #[serde(default)]
        offset: [f64; 2],
        #[serde(default)]
        wiggle: f64,
        m: usize,
    },
    /// A circle in 3D, bent out of its plane by `wiggle * sin(frequency t)`
    /// and jittered, then moved onto the surface (normalized on the sphere,
    /// nearest point on a mesh).
    Ring {
        center: [f64; 3],
        radius: f64,
        #[serde(default = "default_normal")]
        normal: [f64; 3],
        #[serde(default)]
        wiggle: f64,
        #[serde(default)]
        frequency: f64,
        /// Uniform random displacement per coordinate, drawn from `rng_seed`.
        #[serde(default)]
        jitter: f64,
        m: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub backend: BackendConfig,
    #[serde(default)]
    pub discretization: Discretization,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub seeds: Vec<SeedSpec>,
    /// The caller's claim that the sweep-out (or every seed) is not
    /// contractible. Echoed, never checked.
    #[serde(default)]
    pub non_contractible: Option<bool>,
    #[serde(default)]
    pub rng_seed: u64,
    /// Relative to the working directory.
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn one() -> f64 {
    1.0
}
fn default_subdivisions() -> usize {
    geodesic_mesh::DEFAULT_SUBDIVISIONS
}
fn default_grid_res() -> usize {
    16
}
fn default_m() -> usize {
    128
}
fn default_tol_length() -> f64 {
    1e-7
}
fn default_certify_tol() -> f64 {
    1e-4
}
fn default_max_iter() -> usize {
    10_000
}
fn default_max_sweep_iters() -> usize {
    200
}
fn default_m_max() -> usize {
    4096
}
fn default_map() -> SweepMap {
    SweepMap::Identity
}
fn default_cap_fraction() -> f64 {
    0.25
}
fn default_normal() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Sets `path` (dot separated) in a JSON object tree, creating objects on
/// the way. The value is parsed as JSON when possible, else taken as a
/// string.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<()> {
    let Some((key, raw)) = assignment.split_once('=') else {
        bail!("cli::apply_override: expected key=value, got `{assignment}`");
    };
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            bail!("cli::apply_override: empty path segment in `{key}`");
        }
        let last = i + 1 == parts.len();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                map.entry(part.to_string())
                    .or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let index: usize = part.parse().with_context(|| {
                    format!("cli::apply_override: `{part}` in `{key}` is not an array index")
                })?;
                let len = items.len();
                let slot = items.get_mut(index).with_context(|| {
                    format!("cli::apply_override: index {index} in `{key}` is out of range ({len} items)")
                })?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => bail!("cli::apply_override: `{key}` runs through a non-object value"),
        };
    }
    unreachable!("the loop returns on the last segment")
}

/// Parses a config document after applying overrides.
pub fn parse_config(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut doc: Value =
        serde_json::from_str(text).context("cli::load_config: config is not valid JSON")?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let config: RunConfig = serde_path_to_error::deserialize(doc)
        .map_err(|e| anyhow::anyhow!("cli::load_config: field `{}`: {}", e.path(), e.inner()))?;
    config.validate()?;
    Ok(config)
}

/// Reads and parses a config file. Relative paths inside it are resolved
/// against its directory.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cli::load_config: cannot read {}", path.display()))?;
    let mut config = parse_config(&text, overrides)?;
    let base = path.parent().unwrap_or(Path::new(""));
    config.resolve_paths(base);
    Ok(config)
}

fn check(ok: bool, field: &str, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        bail!("cli::load_config: field `{field}`: {message}")
    }
}

fn positive(value: f64) -> bool {
    value.is_finite() && value > 0.0
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        match &self.backend {
            BackendConfig::Sphere { radius, epsilon } => {
                check(positive(*radius), "backend.radius", "must be positive")?;
                if let Some(e) = epsilon {
                    check(
                        positive(*e) && *e < std::f64::consts::PI * radius,
                        "backend.epsilon",
                        "must lie in (0, pi * radius)",
                    )?;
                }
            }
            BackendConfig::Torus { side, epsilon } => {
                check(positive(*side), "backend.side", "must be positive")?;
                if let Some(e) = epsilon {
                    check(
                        positive(*e) && *e < side / 2.0,
                        "backend.epsilon",
                        "must lie in (0, side / 2)",
                    )?;
                }
            }
            BackendConfig::Mesh {
                epsilon,
                steiner_subdivisions,
                ..
            } => {
                if let Some(e) = epsilon {
                    check(positive(*e), "backend.epsilon", "must be positive")?;
                }
                check(
                    *steiner_subdivisions >= 1,
                    "backend.steiner_subdivisions",
                    "must be at least 1",
                )?;
            }
        }
        check(
            self.discretization.grid_res >= 1,
            "discretization.grid_res",
            "must be at least 1",
        )?;
        check(
            self.discretization.m >= 3,
            "discretization.m",
            "must be at least 3",
        )?;
        check(
            positive(self.tolerances.tol_length),
            "tolerances.tol_length",
            "must be positive",
        )?;
        if let Some(t) = self.tolerances.tol_move {
            check(positive(t), "tolerances.tol_move", "must be positive")?;
        }
        check(
            positive(self.tolerances.certify_tol),
            "tolerances.certify_tol",
            "must be positive",
        )?;
        if let Some(w) = self.tolerances.certify_window {
            check(
                positive(w) && w <= 1.0,
                "tolerances.certify_window",
                "must lie in (0, 1]",
            )?;
        }
        check(
            self.limits.max_iter >= 1,
            "limits.max_iter",
            "must be at least 1",
        )?;
        check(
            self.limits.max_sweep_iters >= 1,
            "limits.max_sweep_iters",
            "must be at least 1",
        )?;
        check(self.limits.m_max >= 2, "limits.m_max", "must be at least 2")?;
        check(
            positive(self.sweep.cap_fraction) && self.sweep.cap_fraction <= 1.0,
            "sweep.cap_fraction",
            "must lie in (0, 1]",
        )?;
        if self.mode != Mode::Sweepout {
            check(
                !self.seeds.is_empty(),
                "seeds",
                "this mode needs at least one seed curve",
            )?;
        }
        for (i, seed) in self.seeds.iter().enumerate() {
            match seed {
                SeedSpec::TorusLoop { m, class, .. } => {
                    check(*m >= 3, &format!("seeds.{i}.m"), "must be at least 3")?;
                    check(
                        class[0] != 0.0 || class[1] != 0.0,
                        &format!("seeds.{i}.class"),
                        "must be non-zero",
                    )?;
                }
                SeedSpec::Ring { m, radius, .. } => {
                    check(*m >= 3, &format!("seeds.{i}.m"), "must be at least 3")?;
                    check(
                        positive(*radius),
                        &format!("seeds.{i}.radius"),
                        "must be positive",
                    )?;
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn resolve_paths(&mut self, base: &Path) {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let BackendConfig::Mesh { path, .. } = &mut self.backend {
            resolve(path);
        }
        for seed in &mut self.seeds {
            if let SeedSpec::File { path } = seed {
                resolve(path);
            }
        }
    }
}
