use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wavespread(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavespread"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn strip_timestamp(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("generated_at");
    v
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn evolve_matches_oracle_and_variance_law() {
    let out = wavespread(&["evolve", "--omega-t", "0,1,2", "--p0", "0"]);
    assert!(out.status.success());
    let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(
        &header[..7],
        [
            "t",
            "x",
            "re_psi",
            "im_psi",
            "density_analytic",
            "density_oracle",
            "abs_dev"
        ]
    );
    let dev = column(&header, "abs_dev");
    assert!(rows.iter().all(|r| r[dev] < 1e-8));

    let (t, x, dens) = (
        column(&header, "t"),
        column(&header, "x"),
        column(&header, "density_analytic"),
    );
    for r in rows.iter().filter(|r| r[t] == 0.0) {
        let gaussian = (-r[x] * r[x]).exp() / std::f64::consts::PI.sqrt();
        assert!((r[dens] - gaussian).abs() < 1e-15);
    }
    let var = column(&header, "var_analytic");
    let at_two = rows.iter().find(|r| r[t] == 2.0).unwrap();
    assert!((at_two[var] - 2.5).abs() < 1e-15);
}

#[test]
fn rows_are_sorted_by_time_then_position() {
    let out = wavespread(&["evolve", "--omega-t", "0,1", "--grid-points", "256"]);
    let (_, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert!(rows
        .windows(2)
        .all(|w| (w[0][0], w[0][1]) < (w[1][0], w[1][1])));
}

#[test]
fn tolerance_breach_exits_with_three() {
    let out = wavespread(&["evolve", "--omega-t", "1", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stdout.is_empty());
}

#[test]
fn configuration_errors_exit_with_two() {
    for args in [
        &["evolve", "--omega", "1", "--sigma", "1"][..],
        &["evolve", "--mass", "-1"],
        &["evolve", "--omega-t", "-1"],
        &["tof", "--format", "csv"],
        &["tof", "--fock-n", "3"],
        &["evolve", "--grid-points", "1000"],
    ] {
        assert_eq!(wavespread(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_default_run_passes() {
    let out = wavespread(&["verify", "--k", "0.1,0.25"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["result"]["pass"], true);
    let checks = report["result"]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["identity"] == "braiding"));
    assert!(checks.iter().all(|c| c["pass"] == true));
}

#[test]
fn verify_zero_k_is_exact() {
    let out = wavespread(&["verify", "--k", "0"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["result"]["checks"].as_array().unwrap();
    let dis: Vec<&Value> = checks
        .iter()
        .filter(|c| c["identity"] == "disentangling (truncated operators)")
        .collect();
    assert_eq!(dis.len(), 2);
    for c in dis {
        assert_eq!(c["residual"].as_str().unwrap().parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn verify_commutators_only() {
    let out = wavespread(&["verify", "--commutators"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["result"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 2);
    for c in checks {
        assert_eq!(c["residual"], "0.0000000000000000e0");
    }
}

#[test]
fn tof_variance_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let out = wavespread(&[
            "tof",
            "--omega-t",
            "10",
            "--samples",
            "100000",
            "--seed",
            "5",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        runs.push(read_json(&path));
    }
    let (ja, jb) = (runs[0].clone(), runs[1].clone());
    assert_eq!(strip_timestamp(ja.clone()), strip_timestamp(jb));

    let run = &ja["result"]["runs"][0];
    let f = |key: &str| run[key].as_str().unwrap().parse::<f64>().unwrap();
    assert_eq!(f("expected_inferred_variance"), 0.505);
    assert!((f("inferred_variance") - 0.505).abs() < f("variance_band"));
    assert_eq!(run["rng"].as_str().unwrap(), wavespread::tof::RNG_ID);
}

#[test]
fn tof_first_level_has_empty_centre_bin() {
    let out = wavespread(&[
        "tof",
        "--fock-n",
        "1",
        "--omega-t",
        "10",
        "--samples",
        "50000",
    ]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts = report["result"]["runs"][0]["histogram"]["counts"]
        .as_array()
        .unwrap();
    let centre = counts[counts.len() / 2].as_u64().unwrap();
    let peak = counts.iter().map(|c| c.as_u64().unwrap()).max().unwrap();
    assert!(centre * 20 < peak, "centre {centre}, peak {peak}");
}

#[test]
fn embedded_config_reproduces_the_payload() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.csv");
    let out = wavespread(&[
        "fock",
        "--fock-n",
        "1",
        "--p0",
        "0.5",
        "--omega-t",
        "0.5,1",
        "--grid-points",
        "1024",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&first).unwrap();
    let config_line = text
        .lines()
        .find_map(|l| l.strip_prefix("# config: "))
        .unwrap();
    let mut config: Value = serde_json::from_str(config_line).unwrap();
    let second = dir.path().join("second.csv");
    config["out"] = Value::String(second.to_str().unwrap().into());
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, config.to_string()).unwrap();
    assert!(wavespread(&["fock", "--config", cfg.to_str().unwrap()])
        .status
        .success());
    let body = |p: &Path| {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .skip(2)
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(body(&first), body(&second));
}

#[test]
fn toml_config_and_sigma() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "sigma = 0.5\nmass = 2.0\nomega_t = [1.0]\ngrid_points = 512\n",
    )
    .unwrap();
    let out = wavespread(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"omega\":1.0"));
}

#[test]
fn momentum_levels_match_closed_forms() {
    for n in ["0", "1", "2"] {
        let out = wavespread(&["momentum", "--fock-n", n, "--omega-t", "0,2"]);
        assert!(out.status.success(), "level {n}");
    }
}

#[test]
fn json_tables_use_string_numbers() {
    let out = wavespread(&[
        "momentum",
        "--omega-t",
        "1",
        "--grid-points",
        "512",
        "--format",
        "json",
    ]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &report["result"]["rows"][0];
    assert!(row["p"].is_string());
    assert_eq!(report["config"]["command"], "momentum");
}

#[test]
fn si_demo_config_runs() {
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/si_tof.toml");
    let out = wavespread(&["tof", "--config", cfg, "--samples", "20000"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let omega = report["config"]["omega"].as_f64().unwrap();
    assert!((omega - 2.273e3).abs() < 1.0);
    let run = &report["result"]["runs"][0];
    let t = run["flight_time"].as_str().unwrap().parse::<f64>().unwrap();
    assert!((t - 1e-5).abs() < 1e-15);
}
