use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn sumdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumdiff"))
        .args(args)
        .env_remove("SUMDIFF_TOLERANCE")
        .output()
        .expect("spawn sumdiff")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn extract_to(dir: &TempDir, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["extract"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = sumdiff(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

const AD2: &[&str] = &[
    "--channel", "ad2", "--gamma", "1.0", "--gamma12", "0.4", "--omega12", "0.3", "--omega0", "2.0", "--t", "0.7",
];

#[test]
fn gad_extract_small_set_with_tiny_residuals() {
    let dir = TempDir::new().unwrap();
    let path = extract_to(&dir, "gad.json", &["--channel", "gad", "--p", "0.5", "--lam", "0.36"]);
    let v = read_json(&path);
    let n = v["positive"].as_array().unwrap().len() + v["negative"].as_array().unwrap().len();
    assert!((4..=6).contains(&n), "{n} operators");
    assert!(v["residuals"]["completeness"].as_f64().unwrap() < 1e-10);
    assert!(v["residuals"]["reconstruction"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["report"]["is_cp"], Value::Bool(true));
}

#[test]
fn ad2_symbolic_split_counts() {
    let dir = TempDir::new().unwrap();
    let mut args = AD2.to_vec();
    args.extend_from_slice(&["--partition", "split-real-imag"]);
    let v = read_json(&extract_to(&dir, "ad2.json", &args));
    let pos = v["positive"].as_array().unwrap();
    let neg = v["negative"].as_array().unwrap();
    // 9 diagonal operators, then a +/- pair for each of the 10 off-diagonal elements
    assert_eq!(neg.len(), 10);
    assert_eq!(pos.len(), 19);
    assert!(v["residuals"]["reconstruction"].as_f64().unwrap() < 1e-10);
}

#[test]
fn identity_point_cleans_up_to_one_operator() {
    let dir = TempDir::new().unwrap();
    let v = read_json(&extract_to(
        &dir,
        "id.json",
        &["--channel", "ad2", "--gamma", "1.0", "--t", "0", "--cleanup"],
    ));
    assert_eq!(v["positive"].as_array().unwrap().len(), 1);
    assert!(v["negative"].as_array().unwrap().is_empty());
}

#[test]
fn fresh_exports_verify_against_both_oracles() {
    let dir = TempDir::new().unwrap();
    let gad = extract_to(&dir, "gad.json", &["--channel", "gad", "--p", "0.2", "--lam", "0.7"]);
    let ad2 = extract_to(&dir, "ad2.json", AD2);
    for path in [&gad, &ad2] {
        for oracle in ["direct-action", "standard-kraus"] {
            let out = sumdiff(&["verify", path.to_str().unwrap(), "--against", oracle]);
            assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
            assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"));
        }
    }
}

#[test]
fn corrupted_entry_fails_verification() {
    let dir = TempDir::new().unwrap();
    let path = extract_to(&dir, "gad.json", &["--channel", "gad", "--p", "0.5", "--lam", "0.36"]);
    let mut v = read_json(&path);
    let entry = &mut v["positive"][0]["matrix"][0][0][0];
    *entry = Value::from(entry.as_f64().unwrap() + 1e-3);
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();

    let out = sumdiff(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("FAIL"), "{stdout}");
    let dev: f64 = stdout
        .split("max deviation ")
        .nth(1)
        .and_then(|s| s.split(',').next())
        .and_then(|s| s.parse().ok())
        .expect("deviation in output");
    assert!(dev > 1e-5 && dev < 1e-2, "deviation {dev}");
}

#[test]
fn export_round_trips_through_the_library() {
    use sumdiff_cli::export::KrausExport;
    let dir = TempDir::new().unwrap();
    let path = extract_to(&dir, "ad2.json", AD2);
    let export = KrausExport::load(&path).unwrap();
    let again = KrausExport::from_json(&export.to_json()).unwrap();
    assert_eq!(export, again);
    let ks = again.kraus_set().unwrap();
    assert_eq!(ks.dim(), 4);
    assert!(ks.completeness_residual() < 1e-10);
}

#[test]
fn output_is_deterministic_apart_from_timestamp() {
    let dir = TempDir::new().unwrap();
    let a = read_json(&extract_to(&dir, "a.json", AD2));
    let b = read_json(&extract_to(&dir, "b.json", AD2));
    let strip = |mut v: Value| {
        v["metadata"]["timestamp"] = Value::Null;
        v
    };
    assert_eq!(strip(a), strip(b));
}

#[test]
fn sweep_csv_has_expected_columns_and_limits() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = sumdiff(&[
        "sweep", "--channel", "ad2", "--gamma", "1.0", "--gamma12", "0.2", "--t-max", "50", "--steps", "11",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    for col in ["t", "A", "F", "G", "H", "abs_j", "abs_l", "completeness_residual", "pdc_concurrence", "mdc_ppt"] {
        assert!(headers.iter().any(|h| h == col), "missing {col}");
    }
    let idx = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 11);
    let num = |r: &csv::StringRecord, c: &str| r[idx(c)].parse::<f64>().unwrap();
    let ts: Vec<f64> = rows.iter().map(|r| num(r, "t")).collect();
    assert!(ts.windows(2).all(|w| w[0] < w[1]));
    let last = rows.last().unwrap();
    for c in ["F", "G", "H"] {
        assert!((num(last, c) - 1.0).abs() < 1e-8, "{c} = {}", num(last, c));
    }
    assert!(num(last, "pdc_concurrence") < 1e-8);
    for r in &rows {
        assert!(num(r, "completeness_residual") < 1e-10);
        assert!(num(r, "reconstruction_residual") < 1e-10);
    }
}

#[test]
fn usage_and_io_errors_have_distinct_codes() {
    assert_eq!(code(&sumdiff(&["extract", "--channel", "gad", "--p", "1.5", "--lam", "0.3"])), 1);
    assert_eq!(code(&sumdiff(&["extract", "--bogus"])), 1);
    assert_eq!(code(&sumdiff(&["sweep", "--channel", "gad", "--p", "0.5", "--lam", "0.3", "--t-max", "1"])), 1);
    assert_eq!(code(&sumdiff(&["verify", "/nonexistent/export.json"])), 3);

    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&sumdiff(&["verify", bad.to_str().unwrap()])), 3);
    assert_eq!(code(&sumdiff(&["--help"])), 0);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"channel": "gad", "gad": {"p": 0.3, "lam": 0.5}, "tolerance": 1e-9}"#).unwrap();
    let v = read_json(&extract_to(&dir, "g.json", &["--config", cfg.to_str().unwrap(), "--lam", "0.25"]));
    assert_eq!(v["metadata"]["gad"]["p"].as_f64(), Some(0.3));
    assert_eq!(v["metadata"]["gad"]["lam"].as_f64(), Some(0.25));
    assert_eq!(v["metadata"]["tolerance"].as_f64(), Some(1e-9));
}
