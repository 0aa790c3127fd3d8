use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn minlab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_minlab"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("MINLAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn small_config(dir: &Path, extra: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, format!("# small run\ngrid = 64\nsamples = 6\nhorizons = 1..8\n{extra}")).unwrap();
    path.display().to_string()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn decay_is_byte_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "distribution = uniform:0.05\n");
    let mut outputs = Vec::new();
    for (k, threads) in [Some("1"), Some("4"), None].into_iter().enumerate() {
        let out = dir.path().join(format!("out{k}"));
        let o = minlab(&["decay", "--config", &cfg, "--seed", "42", "--out", out.to_str().unwrap(), "--dump-values"], threads);
        assert!(o.status.success() || o.status.code() == Some(3), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push((
            fs::read(out.join("decay.csv")).unwrap(),
            fs::read(out.join("omega.csv")).unwrap(),
            fs::read(out.join("fit.json")).unwrap(),
        ));
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(csv.starts_with("sample,horizon,diameter\n0,1,"));
    assert_eq!(csv.lines().count(), 1 + 6 * 8);
}

#[test]
fn zero_sigma_reports_no_decay() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out = dir.path().join("out");
    let o = minlab(&["decay", "--config", &cfg, "--sigma", "0", "--out", out.to_str().unwrap()], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let fit = json(&out.join("fit.json"));
    assert_eq!(fit["status"], "no-decay");
    assert_eq!(fit["lambda_hat"].as_f64().unwrap(), 0.0);
    assert_eq!(fit["n_samples"], 6);
    assert_eq!(fit["burn_in"], 1);
}

#[test]
fn fit_rereads_decay_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "distribution = uniform:0.01\nburn_in = 0\n");
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let o = minlab(&["decay", "--config", &cfg, "--horizons", "1..20", "--out", out], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = fs::read(Path::new(out).join("fit.json")).unwrap();
    let o = minlab(&["fit", "--config", &cfg, "--horizons", "1..20", "--out", out], None);
    assert!(o.status.success());
    assert_eq!(fs::read(Path::new(out).join("fit.json")).unwrap(), first);
    assert_eq!(json(&Path::new(out).join("fit.json"))["status"], "decay");
}

#[test]
fn strong_forcing_fit_exits_numeric() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let out = dir.path().join("out");
    let o = minlab(&["decay", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(out.join("decay.csv").exists());
    assert_eq!(json(&out.join("fit.json"))["status"], "too-few-points");
}

#[test]
fn config_errors_exit_2_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "colour = blue\n");
    let out = dir.path().join("out");
    let o = minlab(&["decay", "--config", &cfg, "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key"));
    assert!(!out.exists());
    for args in [["decay", "--grid", "4"], ["decay", "--mode", "white:x"], ["halving", "--t-halving", "0"]] {
        assert_eq!(minlab(&args, None).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(minlab(&["decay"], Some("zero")).status.code(), Some(2));
}

#[test]
fn embed_reports_witness() {
    let o = minlab(&["embed", "--basis", "fourier:2c,2s"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("same image"));
    assert!(minlab(&["embed", "--basis", "fourier:1c,1s,2c"], None).status.success());
}

#[test]
fn separation_auto3_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = minlab(&["separation", "--basis", "fourier:1c,1s", "--auto3", "--out", out], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cert = json(&dir.path().join("certificate.json"));
    assert_eq!(cert["coefficients"].as_array().unwrap().len(), 3);
    assert!(cert["alpha0"].as_f64().unwrap() > 0.0);
    assert_eq!(cert["x"][0].as_f64().unwrap(), 0.0);
    let o = minlab(&["separation", "--candidates", "1,0;1,0;1,0", "--out", out], None);
    assert_eq!(o.status.code(), Some(1));
    let o = minlab(&["constants", "--auto3", "--out", out], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let k = json(&dir.path().join("constants.json"));
    assert!(k["alpha"].as_f64().unwrap() < 1.0 / 30.0);
}

#[test]
fn oracle_passes() {
    let o = minlab(&["oracle", "--max-m", "16", "--max-steps", "4", "--seeds", "50"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn halving_convergence_and_lyapunov_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "halving_pasts = 2\nhalving_futures = 5\n");
    let out = dir.path().join("out");
    let out_s = out.to_str().unwrap();
    assert!(minlab(&["halving", "--config", &cfg, "--t-halving", "2", "--out", out_s], None).status.success());
    let h = json(&out.join("halving.json"));
    assert_eq!(h["scan"][0]["T"], 2);
    assert!(minlab(&["convergence", "--config", &cfg, "--out", out_s], None).status.success());
    let csv = fs::read_to_string(out.join("convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6 * 8);
    assert!(minlab(&["lyapunov", "--config", &cfg, "--kicks", "40", "--out", out_s], None).status.success());
    let l = json(&out.join("lyapunov.json"));
    assert_eq!(l["kicks"], 40);
    assert_eq!(minlab(&["lyapunov", "--config", &cfg, "--kicks", "5", "--out", out_s], None).status.code(), Some(3));
}
