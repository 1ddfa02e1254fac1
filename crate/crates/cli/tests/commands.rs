use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(dir: &Path, args: &[&str], config: Option<&Value>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_boostwave"));
    cmd.args(args).arg("--out").arg(dir.join("out")).arg("--quiet");
    if let Some(cfg) = config {
        let path = dir.join("config.json");
        std::fs::write(&path, serde_json::to_string(cfg).unwrap()).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap()
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn massless() -> Value {
    json!({"family": "massless", "k0": 5.0, "sigma": 1.0, "k_min": 0.0, "k_max": 10.0, "n_k": 1024})
}

fn two_mode() -> Value {
    json!({"family": "eigen_modes", "omega_e": 2.0, "k_min": 1.0, "k_max": 2.1780972450961724,
           "amplitudes": [0.8, 0.6], "well": [0.0, 16.0]})
}

#[test]
fn missing_key_exits_2_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"model": massless(), "t": {"min": 0.0, "max": 0.0, "n": 1}});
    let out = run(dir.path(), &["packet"], Some(&cfg));
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn unknown_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"model": massless(), "t": {"min": 0.0, "max": 0.0, "n": 1},
                     "x": {"min": 0.0, "max": 1.0, "n": 2}, "colour": "red"});
    assert_eq!(run(dir.path(), &["packet"], Some(&cfg)).status.code(), Some(2));
}

#[test]
fn eigen_path_normalization_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"model": two_mode(), "v": 0.5, "mode": "path_normalized",
                     "t": {"min": 0.0, "max": 0.0, "n": 1}, "x": {"min": 0.0, "max": 1.0, "n": 2}});
    assert_eq!(run(dir.path(), &["boost"], Some(&cfg)).status.code(), Some(2));
}

#[test]
fn packet_columns_and_rigidity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"model": massless(), "t": {"min": 0.0, "max": 1.0, "n": 2},
                     "x": {"min": -5.0, "max": 5.0, "n": 101}});
    assert!(run(dir.path(), &["packet"], Some(&cfg)).status.success());
    let r = rows(&dir.path().join("out/packet.csv"));
    assert_eq!(r.len(), 202);
    for row in &r {
        assert!((row[2] * row[2] + row[3] * row[3] - row[4]).abs() < 1e-15);
    }
    // x spacing is 0.1, so a shift of 1 is ten rows
    for j in 0..91 {
        let (at0, at1) = (&r[j], &r[101 + j + 10]);
        assert!((at0[4] - at1[4]).abs() < 1e-12, "{j}");
    }
}

#[test]
fn packet_single_instant_matches_library_density() {
    use boostwave::{Event, Wavefunction};
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"model": two_mode(), "t": {"min": 3.0, "max": 3.0, "n": 1},
                     "x": {"min": 0.0, "max": 16.0, "n": 33}});
    assert!(run(dir.path(), &["packet"], Some(&cfg)).status.success());
    let model: boostwave::fixtures::ModelSpec = serde_json::from_value(two_mode()).unwrap();
    let model = model.build().unwrap();
    for row in rows(&dir.path().join("out/packet.csv")) {
        assert_eq!(row[0], 3.0);
        assert_eq!(row[4], model.density(Event::new(row[0], row[1])));
    }
}

fn boost_summary(model: Value, v: f64) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({"model": model, "v": v, "t": {"min": 0.0, "max": 0.0, "n": 1},
                     "x": {"min": -1.0, "max": 1.0, "n": 3}});
    let out = run(dir.path(), &["boost"], Some(&cfg));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/boost.json")).unwrap()).unwrap()
}

#[test]
fn boost_summaries() {
    let rest = boost_summary(massless(), 0.0);
    for key in ["A_momentum_scalar", "A_path_normalized", "A_slice_normalized"] {
        assert!((rest[key].as_f64().unwrap() - 1.0).abs() < 1e-9, "{key}");
    }

    let s = boost_summary(massless(), 0.5);
    assert!((s["A_momentum_scalar"].as_f64().unwrap() - 0.5773502691896257).abs() < 1e-12);
    assert!((s["A_path_normalized"].as_f64().unwrap() - 0.7598356856515925).abs() < 1e-6);
    assert!((s["gamma"].as_f64().unwrap() - 1.1547005383792517).abs() < 1e-15);
    assert_eq!(s["extension"], json!(false));

    let e = boost_summary(two_mode(), 0.6);
    assert!((e["A_momentum_scalar"].as_f64().unwrap() - 1.25).abs() < 1e-12);
    assert!(e["A_path_normalized"].is_null());

    let off = json!({"family": "off_shell", "k0": 2.0, "sigma_k": 0.5, "n_k": 32,
                     "omega0": 3.0, "sigma_omega": 0.5, "n_omega": 32});
    assert_eq!(boost_summary(off, 0.5)["extension"], json!(true));
}

#[test]
fn tomo_reports_slice_times() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = json!({
        "model": {"family": "eigen_gaussian", "omega_e": 2.5, "k0": 2.0, "sigma": 0.5, "n_k": 256,
                  "center": 8.0, "well": [0.0, 16.0]},
        "tomography": {"samples": 2000, "rows": 16, "dt_d": 0.25, "dx": 0.5, "length": 16.0, "seed": 3},
        "slices": [{"q": 1, "s": -1}, {"q": 1, "s": 1}]
    });
    let out = run(dir.path(), &["tomo"], Some(&cfg));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let gamma = 1.0 / (1.0f64 - 0.25).sqrt();
    for (s, sign) in [("-1", -1.0), ("1", 1.0)] {
        let path = dir.path().join(format!("out/slice_q1_s{s}.json"));
        let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert!((report["t_prime"].as_f64().unwrap() - sign * gamma * 0.25).abs() < 1e-12);
        assert!(report["comparison"]["l1"].as_f64().is_some());
        assert_eq!(report["version"], json!(env!("CARGO_PKG_VERSION")));
    }
    let counts = std::fs::read_to_string(dir.path().join("out/counts.csv")).unwrap();
    assert!(counts.contains("# seed=3"));
}

#[test]
fn verify_names_a_broken_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let mut fixtures = serde_json::to_value(boostwave::verify::Fixtures::default()).unwrap();
    fixtures["massless"]["norm_scale"] = json!(2.0);
    let cfg = json!({"velocities": [0.5], "kinematics_samples": 100, "tomography": null, "fixtures": fixtures});
    let out = run(dir.path(), &["verify"], Some(&cfg));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dual_normalization/massless"));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/verify.json")).unwrap()).unwrap();
    let failed: Vec<_> = report["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "FAIL").collect();
    assert!(!failed.is_empty());
}
