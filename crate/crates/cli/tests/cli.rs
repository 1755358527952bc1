use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn transmute(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transmute"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_samples(path: &Path, m: usize, f: impl Fn(f64) -> f64) {
    let mut text = String::from("x,value\n");
    for j in 0..m {
        let x = PI * j as f64 / (m - 1) as f64;
        text.push_str(&format!("{x:e},{:e}\n", f(x)));
    }
    fs::write(path, text).unwrap();
}

fn read_column(path: &Path, col: usize) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(col).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn spectrum_of_unit_potential() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("spec.json");
    let res = transmute(&[
        "spectrum",
        "--preset",
        "one",
        "--h",
        "0",
        "--H",
        "0",
        "--nmax",
        "20",
        "--out",
        path_str(&out),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let modes = json["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 21);
    for (n, mode) in modes.iter().enumerate() {
        let lambda = mode["lambda"].as_f64().unwrap();
        assert!(
            (lambda - (n * n + 1) as f64).abs() <= 1e-8,
            "n = {n}: {lambda}"
        );
    }
}

#[test]
fn zero_potential_kernel_vanishes() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.csv");
    let res = transmute(&[
        "kernel",
        "--preset",
        "zero",
        "--which",
        "G",
        "--N",
        "50",
        "--m",
        "51",
        "--out",
        path_str(&out),
    ]);
    assert!(res.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,t,value\n"));
    let values = read_column(&out, 2);
    assert_eq!(values.len(), 51 * 52 / 2);
    assert!(values.iter().all(|v| v.abs() <= 1e-10));
}

#[test]
fn exit_codes() {
    assert_eq!(transmute(&["--help"]).status.code(), Some(0));
    assert_eq!(transmute(&["spectrum", "--bogus"]).status.code(), Some(1));
    assert_eq!(transmute(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        transmute(&["kernel", "--which", "Q"]).status.code(),
        Some(1)
    );

    let dir = TempDir::new().unwrap();
    let huge = dir.path().join("q.csv");
    fs::write(&huge, format!("x,q\n0,1e300\n{PI},1e300\n")).unwrap();
    let res = transmute(&["spectrum", "--potential", path_str(&huge), "--nmax", "2"]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn failed_run_leaves_no_output() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("bad.csv");
    fs::write(&input, "x,value\n0,1\n1,2\n").unwrap();
    let out = dir.path().join("result.csv");
    let res = transmute(&[
        "apply",
        "--which",
        "Gexact",
        "--input",
        path_str(&input),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn exact_kernel_maps_one_to_cosh() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("one.csv");
    write_samples(&input, 401, |_| 1.0);
    let out = dir.path().join("t1.csv");
    let res = transmute(&[
        "apply",
        "--which",
        "Gexact",
        "--input",
        path_str(&input),
        "--out",
        path_str(&out),
    ]);
    assert!(res.status.success());
    let xs = read_column(&out, 0);
    let vs = read_column(&out, 1);
    let err = xs
        .iter()
        .zip(&vs)
        .map(|(x, v)| (v - x.cosh()).abs())
        .fold(0.0, f64::max);
    assert!(err <= 1e-3, "{err}");
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let run = |threads: &str, name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_transmute"))
            .env("TRANSMUTE_THREADS", threads)
            .args([
                "kernel",
                "--preset",
                "one",
                "--which",
                "H",
                "--N",
                "40",
                "--m",
                "41",
                "--out",
                path_str(&out),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        fs::read(out).unwrap()
    };
    let a = run("1", "a.csv");
    let b = run("4", "b.csv");
    let c = run("4", "c.csv");
    assert_eq!(a, b);
    assert_eq!(b, c);

    let bad = Command::new(env!("CARGO_BIN_EXE_transmute"))
        .env("TRANSMUTE_THREADS", "zero")
        .args(["spectrum", "--nmax", "1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn reproduce_writes_table_and_profiles() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("run");
    let res = transmute(&["reproduce", "--out", path_str(&out)]);
    assert!(res.status.success());
    let table = fs::read_to_string(out.join("error_table.csv")).unwrap();
    let rows: Vec<Vec<f64>> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let published = [
        [10.0, 9.5e-2, 5.5e-4, 3.3e-4],
        [100.0, 9.9e-3, 4.0e-6, 3.8e-7],
        [1000.0, 1.0e-3, 9.8e-9, 3.9e-10],
    ];
    assert_eq!(rows.len(), 3);
    for (row, expected) in rows.iter().zip(&published) {
        assert_eq!(row[0], expected[0]);
        for k in 1..4 {
            let rel = (row[k] - expected[k]).abs() / expected[k];
            assert!(
                rel <= 0.3,
                "N = {}, kind {k}: {} vs {}",
                row[0],
                row[k],
                expected[k]
            );
        }
    }
    for kind in 1..=3 {
        for n in [10, 100] {
            let p = out.join(format!("kernel_profile_{kind}_{n}.csv"));
            assert!(fs::read_to_string(p).unwrap().starts_with("t,abs_error\n"));
        }
    }
}

#[test]
fn preimage_of_cosh_is_one() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("cosh.csv");
    write_samples(&input, 401, f64::cosh);
    let out = dir.path().join("pre.csv");
    let res = transmute(&[
        "preimage",
        "--preset",
        "one",
        "--H=-1.5707963267948966",
        "--N",
        "100",
        "--input",
        path_str(&input),
        "--out",
        path_str(&out),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let err = read_column(&out, 1)
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(err <= 1e-3, "{err}");
}

#[test]
fn diagnostics_report_for_unit_potential() {
    let res = transmute(&[
        "diagnostics",
        "--preset",
        "one",
        "--N",
        "200",
        "--m",
        "201",
        "--x",
        "1.5707963267948966",
    ]);
    assert!(res.status.success());
    let json: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(json["reference_G"], "Gexact");
    let point = &json["points"][0];
    assert!(point["gl_residual"].as_f64().unwrap() <= 2e-2);
    assert!(point["h_consistency_residual"].as_f64().unwrap() <= 2e-2);
    assert!(json["diagonal_residual_H"].as_f64().unwrap() <= 2e-2);
}
