use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ainf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ainf"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// A scratch directory unique to one test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ainf-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const PL2: &str = r#"{"family": "power_law", "beta": 2.0}"#;

#[test]
fn phi_and_singular_point() {
    let dir = scratch("phi");
    let cfg = write(&dir, "pl2.json", PL2);
    let v = json(&ainf(&["phi", "--config", &cfg, "--point", "0,0,0"]));
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - std::f64::consts::PI.powi(2) / 24.0).abs() < 1e-12);
    assert_eq!(v["manifest"]["command"], "phi");
    assert_eq!(v["manifest"]["inputs"][0][1].as_str().unwrap().len(), 64);

    let out = ainf(&["phi", "--config", &cfg, "--point", "-9,0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("SingularPoint"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ainf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ainf(&["phi", "--point", "0,0,0"]).status.code(), Some(2));
    let out = ainf(&["validate", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("File schemas"));
}

#[test]
fn invalid_configuration_is_a_domain_error() {
    let dir = scratch("invalid");
    let cfg = write(&dir, "bad.json", r#"{"family": "power_law", "beta": 0.5}"#);
    let out = ainf(&["validate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidConfig"));
}

#[test]
fn verify_charts_suite() {
    let out = ainf(&["verify", "--suite", "charts", "--seed", "7"]);
    let v = json(&out);
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["manifest"]["seed"], 7);
}

#[test]
fn chart_output_feeds_invert() {
    let dir = scratch("chart");
    let cfg = write(&dir, "pl2.json", PL2);
    let v = json(&ainf(&[
        "chart", "--config", &cfg, "--point", "-6,0,0", "--theta", "1.25",
    ]));
    let section = write(&dir, "s.json", &v["result"]["section"].to_string());
    let p = &v["result"]["p"];
    let p = format!("{},{}", p[0], p[1]);
    let back = json(&ainf(&[
        "invert",
        "--config",
        &cfg,
        "--section",
        &section,
        "--p",
        &p,
        "--q",
        "0,0",
    ]));
    let zeta = &back["result"]["zeta"];
    assert!((zeta[0].as_f64().unwrap() + 6.0).abs() < 1e-9);
    assert!((back["result"]["theta"].as_f64().unwrap() - 1.25).abs() < 1e-9);
    // Through the base chart the point is not reachable.
    let base = write(&dir, "base.json", "{}");
    let out = ainf(&["chart", "--config", &cfg, "--point", "-6,0,0", "--section", &base]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn isom_and_map_point() {
    let dir = scratch("isom");
    let a = write(&dir, "a.json", PL2);
    let b = write(&dir, "b.json", r#"{"family": "power_law", "beta": 3.0}"#);
    let two = write(
        &dir,
        "two.json",
        r#"{"family": "finite", "centers": [[1, 0, 0], [4, 0, 0]]}"#,
    );
    let v = json(&ainf(&["isom", "--config-a", &a, "--config-b", &b]));
    assert_eq!(v["result"]["isomorphic"], true);
    assert_eq!(v["result"]["matching"][2][1], 3);
    assert_eq!(v["result"]["matching"][2][2], 3);
    let v = json(&ainf(&["isom", "--config-a", &a, "--config-b", &two]));
    assert_eq!(v["result"]["isomorphic"], false);

    let iso = write(
        &dir,
        "iso.json",
        &format!(r#"{{"source": {PL2}, "target": {{"family": "power_law", "beta": 3.0}}, "disk": 50}}"#),
    );
    let v = json(&ainf(&[
        "map-point",
        "--iso",
        &iso,
        "--point",
        "-2,0.5,-0.25",
        "--theta",
        "0.3",
    ]));
    assert_eq!(v["result"]["zeta"][1], 0.5);
    assert_eq!(v["result"]["zeta"][2], -0.25);
}

#[test]
fn growth_csv_is_reproducible() {
    let dir = scratch("growth");
    let (o1, o2) = (dir.join("a.csv"), dir.join("b.csv"));
    for o in [&o1, &o2] {
        let out = ainf(&["growth", "--beta", "2", "--points", "9", "--out", o.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let (t1, t2) = (std::fs::read(&o1).unwrap(), std::fs::read(&o2).unwrap());
    assert_eq!(t1, t2);
    let text = String::from_utf8(t1).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# manifest: {"));
    assert_eq!(lines[1], "rho,W,logrho,logW");
    assert_eq!(lines.len(), 2 + 9 + 1);
    let slope: f64 = lines[11]
        .trim_start_matches("# slope=")
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 10.0 / 3.0).abs() < 0.1, "slope {slope}");
}
