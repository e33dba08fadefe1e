use std::path::Path;
use std::process::{Command, Output};

use geodesic_cli::config::{apply_override, BackendConfig, Mode, SeedSpec};
use geodesic_cli::{execute, parse_config, EXIT_ERROR, EXIT_NO_GEODESIC, EXIT_OK};
use serde_json::{json, Value};

fn geodesic(config: &Path, sets: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_geodesic"));
    cmd.arg("run").arg("--config").arg(config);
    for s in sets {
        cmd.arg("--set").arg(s);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, doc: &Value) -> std::path::PathBuf {
    let path = dir.join("cfg.json");
    std::fs::write(&path, serde_json::to_string_pretty(doc).unwrap()).unwrap();
    path
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn misspelled_mode_exits_1_naming_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        &json!({ "mode": "sweepuot", "backend": { "kind": "sphere" } }),
    );
    let out = geodesic(&cfg, &[]);
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
    assert!(stderr(&out).contains("field `mode`"), "{}", stderr(&out));
}

#[test]
fn unknown_fields_are_rejected_with_their_path() {
    let err = parse_config(
        r#"{"mode": "sweepout", "backend": {"kind": "sphere", "radus": 2}}"#,
        &[],
    )
    .unwrap_err()
    .to_string();
    assert!(
        err.contains("field `backend`") && err.contains("radus"),
        "{err}"
    );
    let err = parse_config(r#"{"mode": "sweepout", "backend": {"kind": "cone"}}"#, &[])
        .unwrap_err()
        .to_string();
    assert!(err.contains("backend.kind"), "{err}");
}

#[test]
fn range_errors_name_the_field() {
    let base = r#"{"mode": "sweepout", "backend": {"kind": "torus"}}"#;
    for (set, field) in [
        ("discretization.m=2", "discretization.m"),
        ("tolerances.tol_length=-1", "tolerances.tol_length"),
        ("backend.epsilon=0.6", "backend.epsilon"),
        ("mode=systole", "seeds"),
    ] {
        let err = parse_config(base, &[set.to_string()])
            .unwrap_err()
            .to_string();
        assert!(err.contains(&format!("`{field}`")), "{set}: {err}");
    }
}

#[test]
fn missing_config_exits_1() {
    let out = geodesic(Path::new("/nonexistent/cfg.json"), &[]);
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
    assert!(stderr(&out).contains("cli::load_config"));
}

#[test]
fn overrides_set_nested_fields_and_array_items() {
    let mut doc = json!({ "seeds": [{ "m": 8 }] });
    apply_override(&mut doc, "discretization.m=256").unwrap();
    apply_override(&mut doc, "seeds.0.m=16").unwrap();
    apply_override(&mut doc, "output_dir=runs/a").unwrap();
    assert_eq!(doc["discretization"]["m"], 256);
    assert_eq!(doc["seeds"][0]["m"], 16);
    assert_eq!(doc["output_dir"], "runs/a");
    assert!(apply_override(&mut doc, "seeds.3.m=1").is_err());
    assert!(apply_override(&mut doc, "no_equals_sign").is_err());
    assert!(apply_override(&mut doc, "output_dir.x=1").is_err());
}

#[test]
fn defaults_are_filled_in() {
    let cfg = parse_config(
        r#"{"mode": "sweepout", "backend": {"kind": "sphere"}}"#,
        &[],
    )
    .unwrap();
    assert_eq!(cfg.mode, Mode::Sweepout);
    assert_eq!(
        cfg.backend,
        BackendConfig::Sphere {
            radius: 1.0,
            epsilon: None
        }
    );
    assert_eq!(
        (cfg.discretization.grid_res, cfg.discretization.m),
        (16, 128)
    );
    assert_eq!(cfg.tolerances.tol_length, 1e-7);
    assert_eq!(cfg.tolerances.certify_tol, 1e-4);
    assert_eq!(cfg.limits.max_iter, 10_000);
    assert_eq!(cfg.limits.m_max, 4096);
    assert_eq!(cfg.rng_seed, 0);
}

#[test]
fn report_echoes_every_parameter() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let cfg = write_config(
        tmp.path(),
        &json!({ "mode": "sweepout", "backend": { "kind": "sphere" }, "output_dir": out_dir }),
    );
    let out = geodesic(&cfg, &[]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", stderr(&out));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    let echo = &report["config"];
    for path in [
        "/backend/radius",
        "/backend/epsilon",
        "/discretization/grid_res",
        "/discretization/m",
        "/tolerances/tol_length",
        "/tolerances/tol_move",
        "/tolerances/certify_tol",
        "/tolerances/certify_window",
        "/limits/max_iter",
        "/limits/max_sweep_iters",
        "/limits/m_max",
        "/sweep/map",
        "/rng_seed",
        "/output_dir",
    ] {
        assert!(echo.pointer(path).is_some(), "{path} missing from the echo");
    }
    // Defaults resolved against the backend.
    assert_eq!(
        report["effective"]["epsilon"],
        json!(std::f64::consts::FRAC_PI_2)
    );
    assert_eq!(
        report["effective"]["tol_move"],
        json!(1e-7 * std::f64::consts::FRAC_PI_2)
    );
    assert!(report["timestamp"].is_string() && report["runtime_seconds"].is_number());

    let csv = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert!(csv.starts_with("iteration,c_k,lipschitz,argmax_move\n"));
    let doc: Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("candidate.curve.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(doc["backend"], "sphere");
    // OBJ export is for meshes only.
    assert!(!out_dir.join("candidate.obj").exists());
}

#[test]
fn contractible_seed_shortens_to_exit_2() {
    let cfg = parse_config(
        r#"{"mode": "shorten", "backend": {"kind": "sphere"},
            "seeds": [{"kind": "ring", "center": [0, 0, 1], "radius": 0.1, "m": 64}]}"#,
        &[],
    )
    .unwrap();
    let (outcome, _) = execute(&cfg).unwrap();
    assert_eq!(outcome.exit_code, EXIT_NO_GEODESIC);
    assert_eq!(outcome.status, "contractible");
}

#[test]
fn unconverged_systole_exits_2() {
    let cfg = parse_config(
        r#"{"mode": "systole", "backend": {"kind": "torus"}, "limits": {"max_iter": 1},
            "seeds": [{"kind": "torus_loop", "class": [1, 0], "wiggle": 0.05, "m": 64}]}"#,
        &[],
    )
    .unwrap();
    let (outcome, _) = execute(&cfg).unwrap();
    assert_eq!(outcome.exit_code, EXIT_NO_GEODESIC);
    assert_eq!(outcome.status, "none_converged");
    assert!(outcome
        .error
        .unwrap()
        .starts_with("sweepout::systole_search"));
}

#[test]
fn certify_mode_checks_an_inline_curve() {
    let points: Vec<[f64; 2]> = (0..64).map(|i| [i as f64 / 64.0, 0.25]).collect();
    let doc = json!({
        "mode": "certify",
        "backend": { "kind": "torus" },
        "seeds": [{ "kind": "inline", "curve": { "backend": "torus", "closed": true, "points": points } }],
    });
    let cfg = parse_config(&doc.to_string(), &[]).unwrap();
    assert!(matches!(cfg.seeds[0], SeedSpec::Inline { .. }));
    let (outcome, _) = execute(&cfg).unwrap();
    assert_eq!(outcome.exit_code, EXIT_OK);
    assert_eq!(outcome.result["length"], json!(1.0));
}

#[test]
fn torus_seeds_need_the_torus_backend() {
    let cfg = parse_config(
        r#"{"mode": "shorten", "backend": {"kind": "sphere"},
            "seeds": [{"kind": "torus_loop", "class": [1, 0], "m": 64}]}"#,
        &[],
    )
    .unwrap();
    let err = format!("{:#}", execute(&cfg).unwrap_err());
    assert!(
        err.contains("cli::build_seeds") && err.contains("torus backend"),
        "{err}"
    );
}

#[test]
fn seed_files_resolve_against_the_config_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let sub = tmp.path().join("cfgs");
    std::fs::create_dir(&sub).unwrap();
    let points: Vec<[f64; 2]> = (0..48).map(|i| [0.4, i as f64 / 48.0]).collect();
    std::fs::write(
        sub.join("loop.json"),
        json!({ "backend": "torus", "closed": true, "points": points }).to_string(),
    )
    .unwrap();
    let out_dir = tmp.path().join("out");
    let cfg = write_config(
        &sub,
        &json!({
            "mode": "shorten",
            "backend": { "kind": "torus" },
            "seeds": [{ "kind": "file", "path": "loop.json" }],
            "output_dir": out_dir,
        }),
    );
    let out = geodesic(&cfg, &[]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", stderr(&out));
    let csv = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert!(csv.starts_with("iteration,length,sup_move\n"));
}

#[test]
fn mesh_runs_export_an_obj_polyline() {
    let tmp = tempfile::tempdir().unwrap();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/cube.obj");
    let out_dir = tmp.path().join("out");
    let cfg = write_config(
        tmp.path(),
        &json!({
            "mode": "shorten",
            "backend": { "kind": "mesh", "path": fixtures },
            "seeds": [{ "kind": "ring", "center": [0.5, 0.5, 0.5], "radius": 0.8, "m": 120 }],
            "output_dir": out_dir,
        }),
    );
    let out = geodesic(&cfg, &[]);
    assert_eq!(out.status.code(), Some(EXIT_OK), "{}", stderr(&out));
    let obj = std::fs::read_to_string(out_dir.join("candidate.obj")).unwrap();
    let vertices = obj.lines().filter(|l| l.starts_with("v ")).count();
    let line: Vec<&str> = obj.lines().filter(|l| l.starts_with("l ")).collect();
    assert_eq!(line.len(), 1);
    let indices: Vec<usize> = line[0][2..]
        .split(' ')
        .map(|s| s.parse().unwrap())
        .collect();
    // Closed: the first index repeats at the end.
    assert_eq!(indices.len(), vertices + 1);
    assert_eq!(indices.first(), indices.last());
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert!(report["backend"]["ambiguities"].is_number());
    assert!(report["backend"]["estimated_epsilon"].is_number());
}
