use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nc"))
        .args(args)
        .env_remove("NC_DEFAULT_TOL")
        .output()
        .expect("nc runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Data rows of a report CSV as (solution_id, rel_diff, status).
fn rows(csv: &str) -> Vec<(String, f64, String)> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("pair_id"))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[2].to_string(), f[6].parse().unwrap(), f[7].to_string())
        })
        .collect()
}

#[test]
fn standard_pair_passes_all_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = nc(&["mv", "run", "--pairs", "standard", "--solutions", "builtin", "--out", path(&out), "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&fs::read_to_string(&out).unwrap());
    assert_eq!(r.len(), 20);
    for (id, rel, status) in r {
        assert_eq!(status, "OK", "{id}");
        assert!(rel <= 1e-9, "{id}: {rel}");
    }
}

#[test]
fn reports_are_reproducible_without_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = nc(&[
            "mv", "run", "--pairs", "random:circles:2", "--solutions", "quad_0,wave_gauss_0", "--seed", "7", "--out",
            path(p), "--no-timestamp",
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(!text.contains("# generated"));
    assert_eq!(rows(&text).len(), 4);
}

#[test]
fn line_empty_trials_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = nc(&["mv", "run", "--pairs", "line_empty", "--solutions", "quad_0", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# generated:"));
    assert_eq!(rows(&text)[0].2, "SkippedLineEmpty");
}

#[test]
fn tolerance_comes_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let args = ["mv", "run", "--pairs", "standard", "--solutions", "wave_gauss_0", "--out", path(&out)];
    let o = Command::new(env!("CARGO_BIN_EXE_nc")).args(args).env("NC_DEFAULT_TOL", "-1").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_nc")).args(args).env("NC_DEFAULT_TOL", "x").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--tol", "1e-6"]);
    let o = Command::new(env!("CARGO_BIN_EXE_nc")).args(&with_flag).env("NC_DEFAULT_TOL", "-1").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn ruled_surface_of_standard_pair() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("lines.csv");
    let surface = dir.path().join("surface.csv");
    let o = nc(&[
        "ruled", "verify", "--pair", "standard", "--samples", "16", "--lines-out", path(&lines), "--surface-out",
        path(&surface),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["hyperboloid"], true);
    assert!(v["deviation_from_h0"].as_f64().unwrap() <= 1e-8);
    let l = fs::read_to_string(&lines).unwrap();
    assert!(l.starts_with("side,theta,A,B,C,D"));
    assert_eq!(l.lines().count(), 33);
    assert!(fs::read_to_string(&surface).unwrap().starts_with("side,theta,z,X,Y,Z"));
}

#[test]
fn dpc_roundtrip() {
    let o = nc(&["dpc", "encode", "--json", r#"{"kind":"proper","center":[1,0,0,0],"radius_sq":2}"#]);
    assert_eq!(o.status.code(), Some(0));
    let coords: Vec<f64> = json(&o)["dpc"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_f64().unwrap())
        .collect();
    assert_eq!(coords.len(), 6);
    let arg = coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    let o = nc(&["dpc", "decode", "--coords", &arg]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["kind"], "proper");
    assert!((v["radius_sq"].as_f64().unwrap() - 2.0).abs() <= 1e-12);
    assert!((v["center"][0].as_f64().unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn generated_pairs_classify() {
    let dir = tempfile::tempdir().unwrap();
    for class in ["circles", "hyperbolae", "parabolae", "line_empty"] {
        let file = dir.path().join(format!("{class}.json"));
        let o = nc(&["pair", "gen", "--class", class, "--seed", "3", "--out", path(&file)]);
        assert_eq!(o.status.code(), Some(0));
        let o = nc(&["pair", "classify", "--in", path(&file)]);
        assert_eq!(o.status.code(), Some(0), "{class}");
        let v = json(&o);
        assert_eq!(v["class"], class);
        assert_eq!(v["classifiers_agree"], true);
    }
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"V\": [[1, 0").unwrap();
    assert_eq!(nc(&["pair", "classify", "--in", path(&bad)]).status.code(), Some(2));
    assert_eq!(nc(&["mv", "run", "--pairs", path(&bad)]).status.code(), Some(2));
    assert_eq!(nc(&["dpc", "decode", "--coords", "1,2,3"]).status.code(), Some(2));
    assert_eq!(nc(&["pair", "gen", "--class", "ellipses"]).status.code(), Some(2));
    assert_eq!(nc(&["mv", "run", "--bogus"]).status.code(), Some(2));
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(nc(&["pair", "classify", "--in", path(&missing)]).status.code(), Some(3));
    let unwritable = dir.path().join("no/such/dir/r.csv");
    let o = nc(&["mv", "run", "--solutions", "quad_0", "--out", path(&unwritable)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn xray_certificates_pass() {
    let o = nc(&["xray", "check", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), 5);
}
