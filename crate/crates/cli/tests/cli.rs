use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ptkdv(dir: &Path, args: &[&str]) -> Out {
    ptkdv_env(dir, args, &[])
}

fn ptkdv_env(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Out {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ptkdv"));
    cmd.current_dir(dir).args(args).env_remove("PTKDV_OUT_ROOT").env_remove("PTKDV_CONFIG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Out {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn read_csv(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

/// Every regular file in `dir` other than the manifest is listed in it and
/// every listed file exists.
fn assert_manifest_complete(dir: &Path) {
    let m = json(&dir.join("manifest.json"));
    let listed: Vec<PathBuf> = m["outputs"].as_array().unwrap().iter().map(|p| PathBuf::from(p.as_str().unwrap())).collect();
    for p in &listed {
        assert!(dir.join(p).exists(), "{} listed but missing", p.display());
    }
    for entry in std::fs::read_dir(dir).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name == "manifest.json" {
            continue;
        }
        assert!(listed.iter().any(|p| p.file_name().unwrap() == name.as_str()), "{name} not in manifest");
    }
}

#[test]
fn specfun_values() {
    let tmp = tempfile::tempdir().unwrap();
    let dn = ptkdv(tmp.path(), &["specfun", "dn", "0", "0.5"]);
    assert_eq!(dn.code, 0);
    assert_eq!(dn.stdout.trim(), "1.0000000000000000e0");

    // Γ(3/4)Γ(1/2)/Γ(5/4)
    let b = ptkdv(tmp.path(), &["specfun", "betainc", "1", "0.75", "0.5"]);
    assert_eq!(b.code, 0);
    let re: f64 = b.stdout.split('+').next().unwrap().parse().unwrap();
    assert!((re - 2.396_280_469_471_184_6).abs() < 1e-13, "{}", b.stdout);

    let f1 = ptkdv(tmp.path(), &["specfun", "f1", "0.75", "0.25", "0.25", "1.75", "-0.4", "-0.2"]);
    assert_eq!(f1.code, 0);
    let re: f64 = f1.stdout.split('+').next().unwrap().parse().unwrap();
    assert!((re - 0.943_938_290_398_906_2).abs() < 1e-13, "{}", f1.stdout);

    let digits = f1.stdout.trim().split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(digits.len(), 17);

    let g = ptkdv(tmp.path(), &["specfun", "gamma", "0"]);
    assert_eq!(g.code, 2);
    assert!(g.stderr.contains("pole"));
    assert_eq!(ptkdv(tmp.path(), &["specfun", "nope", "1"]).code, 2);
}

#[test]
fn cnoidal_curve_matches_elliptic_integral() {
    let tmp = tempfile::tempdir().unwrap();
    let r = ptkdv(tmp.path(), &["curve", "--eps", "1", "--n", "0", "--k", "1/sqrt2", "--m", "0.9", "--anchor", "-1", "--samples", "201"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = read_csv(&tmp.path().join("runs/curve/curve_00_eps1_n0.csv"));
    let at = |v: f64| rows.iter().find(|row| (row[0] - v).abs() < 1e-12).unwrap().clone();
    // ∫_{-1}^{-1/2} dv / sqrt(2 v (v + 0.1)(v + 1)) with v = -1 + s²
    let g = |s: f64| {
        let v = -1.0 + s * s;
        2.0 / (2.0 * v * (v + 0.1)).sqrt()
    };
    let (n, h) = (2000, 0.5f64.sqrt() / 2000.0);
    let mut integral = g(0.0) + g(n as f64 * h);
    for i in 1..n {
        integral += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    integral *= h / 3.0;
    let (a, b) = (at(-1.0), at(-0.5));
    assert!(((b[1] - a[1]).abs() - integral).abs() < 1e-8, "{} vs {integral}", b[1] - a[1]);
    assert!(b[2].abs() < 1e-10);
    assert!(r.stdout.contains("[-1.0000, -0.1000]"), "{}", r.stdout);
    assert_manifest_complete(&tmp.path().join("runs/curve"));
}

#[test]
fn curve_reports_real_intervals_and_rejects_poles() {
    let tmp = tempfile::tempdir().unwrap();
    let r = ptkdv(tmp.path(), &["curve", "--eps", "3", "--n", "2", "--n", "4", "--k", "i/sqrt2", "--m", "1", "--vrange", "0:1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout.matches("[0.0000, 1.0000]").count(), 2, "{}", r.stdout);
    let side = json(&tmp.path().join("runs/curve/curve_01_eps3_n4.json"));
    assert_eq!(side["branch_n"], 4);
    assert_eq!(side["real_intervals"][0][1], 1.0);

    let bad = ptkdv(tmp.path(), &["curve", "--eps", "-1", "--m", "0.5"]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("pole"), "{}", bad.stderr);
    assert_eq!(ptkdv(tmp.path(), &["curve", "--eps", "3", "--m", "1.5"]).code, 2);
    assert_eq!(ptkdv(tmp.path(), &["curve", "--eps", "3", "--m", "0.5", "--k", "two"]).code, 2);
    assert_eq!(ptkdv(tmp.path(), &["curve", "--preset", "fig9"]).code, 2);
}

#[test]
fn presets_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let r = ptkdv(tmp.path(), &["curve", "--preset", "fig2", "--samples", "301", "--out", out]);
        assert_eq!(r.code, 0, "{}", r.stderr);
    }
    let names: Vec<_> = std::fs::read_dir(tmp.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n.to_string_lossy().ends_with(".csv"))
        .collect();
    assert_eq!(names.len(), 8);
    for n in names {
        let a = std::fs::read(tmp.path().join("a").join(&n)).unwrap();
        let b = std::fs::read(tmp.path().join("b").join(&n)).unwrap();
        assert_eq!(a, b, "{n:?}");
    }
    assert_manifest_complete(&tmp.path().join("a"));
}

#[test]
fn cnoidal_period_run() {
    let tmp = tempfile::tempdir().unwrap();
    let r = ptkdv(tmp.path(), &["evolve", "--eps", "1", "--init", "cnoidal", "--k", "1/sqrt2", "--m", "0.9", "--T", "period"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let run = tmp.path().join("runs/evolve");
    let info = json(&run.join("evolve.json"));
    for c in info["charges"].as_array().unwrap() {
        assert!(c["drift"].as_f64().unwrap() < 1e-8, "{c}");
    }
    // one period translates by exactly one wavelength
    let traj = json(&run.join("trajectory.json"));
    let snaps = traj["snapshots"].as_array().unwrap();
    let first = read_csv(&run.join(snaps[0]["file"].as_str().unwrap()));
    let last = read_csv(&run.join(snaps.last().unwrap()["file"].as_str().unwrap()));
    let err = first.iter().zip(&last).map(|(a, b)| (a[1] - b[1]).hypot(a[2] - b[2])).fold(0.0, f64::max);
    assert!(err < 1e-5, "{err}");
    assert_manifest_complete(&run);

    let ch = ptkdv(tmp.path(), &["charges", "runs/evolve"]);
    assert_eq!(ch.code, 0, "{}", ch.stderr);
    assert_eq!(ch.stdout.matches("conservation residual").count(), 3);
    let summary = json(&tmp.path().join("runs/charges/charges.json"));
    assert_eq!(summary.as_array().unwrap().len(), 3);
    assert_manifest_complete(&tmp.path().join("runs/charges"));
}

#[test]
fn zero_horizon_and_aborts() {
    let tmp = tempfile::tempdir().unwrap();
    let r = ptkdv(tmp.path(), &["evolve", "--eps", "1", "--init", "sine", "--T", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let traj = json(&tmp.path().join("runs/evolve/trajectory.json"));
    assert_eq!(traj["snapshots"].as_array().unwrap().len(), 1);
    let info = json(&tmp.path().join("runs/evolve/evolve.json"));
    assert!(info["charges"].as_array().unwrap().iter().all(|c| c["drift"] == 0.0));

    let s = ptkdv(tmp.path(), &["evolve", "--eps", "1.5", "--init", "sine", "--clamp", "off", "--T", "0.01", "--out", "sing"]);
    assert_eq!(s.code, 4);
    let abort = json(&tmp.path().join("sing/abort.json"));
    assert_eq!(abort["kind"], "singularity");
    assert!(abort["grid_index"].as_u64().is_some());
    let m = json(&tmp.path().join("sing/manifest.json"));
    assert_eq!(m["exit_code"], 4);
    assert_manifest_complete(&tmp.path().join("sing"));

    let clamped = ptkdv(tmp.path(), &["evolve", "--eps", "1.5", "--init", "sine", "--amplitude", "0.1", "--clamp", "1e-6", "--T", "1e-3", "--out", "cl"]);
    assert!(!clamped.stderr.contains("singular derivative"), "{}", clamped.stderr);

    let blow = ptkdv(tmp.path(), &["evolve", "--eps", "3", "--init", "sine", "--T", "0.1", "--out", "blow"]);
    assert_eq!(blow.code, 4);
    assert_eq!(json(&tmp.path().join("blow/abort.json"))["kind"], "blow-up");

    assert_eq!(ptkdv(tmp.path(), &["evolve", "--init", "sine", "--T", "period"]).code, 2);
    assert_eq!(ptkdv(tmp.path(), &["evolve", "--grid", "100", "--T", "0"]).code, 2);
}

#[test]
fn charges_rejects_malformed_runs() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(ptkdv(tmp.path(), &["charges", "missing"]).code, 2);
    let bad = tmp.path().join("bad");
    std::fs::create_dir(&bad).unwrap();
    std::fs::write(bad.join("trajectory.json"), "{ not json").unwrap();
    assert_eq!(ptkdv(tmp.path(), &["charges", "bad"]).code, 2);
    let r = ptkdv(tmp.path(), &["evolve", "--T", "0.01", "--out", "ok"]);
    assert_eq!(r.code, 0);
    std::fs::write(tmp.path().join("ok/snapshot_00001.csv"), "x,re,im\n0,1\n").unwrap();
    assert_eq!(ptkdv(tmp.path(), &["charges", "ok"]).code, 2);
}

#[test]
fn verify_runs_filters_and_catches_mutation() {
    let tmp = tempfile::tempdir().unwrap();
    let all = ptkdv(tmp.path(), &["verify"]);
    assert_eq!(all.code, 0, "{}{}", all.stdout, all.stderr);
    assert_eq!(all.stdout.lines().filter(|l| l.starts_with("PASS")).count(), 12);
    let junit = std::fs::read_to_string(tmp.path().join("runs/verify/junit.xml")).unwrap();
    assert!(junit.contains("tests=\"12\" failures=\"0\""), "{junit}");

    let waves = ptkdv(tmp.path(), &["verify", "--filter", "waves", "--out", "w"]);
    assert_eq!(waves.code, 0);
    assert_eq!(waves.stdout.lines().filter(|l| l.starts_with("PASS")).count(), 5);

    let mutated = ptkdv(tmp.path(), &["verify", "--mutation", "flip-x3-sign", "--out", "m", "--junit", "m.xml"]);
    assert_eq!(mutated.code, 1);
    assert!(mutated.stderr.contains("flux_laws"), "{}", mutated.stderr);
    let failing: Vec<&str> = mutated.stdout.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1, "{}", mutated.stdout);
    assert!(failing[0].contains("flux_laws"));
    assert!(tmp.path().join("m.xml").exists());

    assert_eq!(ptkdv(tmp.path(), &["verify", "--filter", "nothing-matches"]).code, 2);
}

#[test]
fn config_and_output_root() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("cfg.json"),
        r#"{ "curve": { "eps": [3], "n": [2], "k": "i/sqrt2", "m": 1.0, "vrange": "0:1", "samples": 51 } }"#,
    )
    .unwrap();
    let r = ptkdv_env(tmp.path(), &["--config", "cfg.json", "curve", "--n", "4"], &[("PTKDV_OUT_ROOT", "root")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let m = json(&tmp.path().join("root/curve/manifest.json"));
    assert_eq!(m["parameters"]["n"], serde_json::json!([4]));
    assert_eq!(m["parameters"]["samples"], 51);
    assert_eq!(read_csv(&tmp.path().join("root/curve/curve_00_eps3_n4.csv")).len(), 51);

    std::fs::write(tmp.path().join("bad.json"), r#"{ "curve": { "epsilon": 3 } }"#).unwrap();
    assert_eq!(ptkdv(tmp.path(), &["--config", "bad.json", "curve"]).code, 2);
}

#[test]
fn rerun_into_the_same_directory_leaves_no_stale_files() {
    let tmp = tempfile::tempdir().unwrap();
    let run = tmp.path().join("run");
    let r = run.to_str().unwrap();
    assert_eq!(ptkdv(tmp.path(), &["evolve", "--init", "sine", "--amplitude", "0.1", "--T", "0.01", "--out", r]).code, 0);
    assert!(run.join("snapshot_00100.csv").exists());
    assert_eq!(ptkdv(tmp.path(), &["evolve", "--eps", "1.5", "--init", "sine", "--out", r]).code, 4);
    assert!(run.join("abort.json").exists());
    assert!(!run.join("snapshot_00001.csv").exists());
    assert_eq!(ptkdv(tmp.path(), &["evolve", "--init", "sine", "--amplitude", "0.1", "--T", "0", "--out", r]).code, 0);
    assert!(!run.join("abort.json").exists());
    assert_manifest_complete(&run);
    assert_eq!(ptkdv(tmp.path(), &["charges", r]).code, 0);
}
