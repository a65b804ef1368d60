use std::path::Path;
use std::process::{Command, Output};

fn weakval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_output(args: &[&str], path: &Path) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--output", path.to_str().unwrap()]);
    weakval(&all)
}

fn sidecar(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(format!("{}.json", path.display())).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn threebox_prints_table() {
    let out = weakval(&["threebox"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        csv,
        "observable,weak_value_re,weak_value_im,abl_probability\n\
         A,1,0,1\nB,1,0,1\nC,-1,0,0.2\nsum,1,0,\n"
    );
    let summary: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(summary["config"]["command"], "threebox");
}

#[test]
fn interferometer_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let out = with_output(&["interferometer", "--p_A", "-1", "--G", "0.29"], &path);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let get = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    assert!((get("output_angle_deg") - 21.03).abs() < 0.01);
    assert!((get("shift_exact_deg") + 15.54).abs() < 0.01);
    assert!((get("postselect_prob") - 0.1172).abs() < 1e-4);
    assert!(!csv.contains('\r'));

    let summary = sidecar(&path);
    assert_eq!(summary["config"]["p_A"], -1.0);
    assert_eq!(summary["config"]["G"], 0.29);
    assert_eq!(summary["config"]["command"], "interferometer");
}

#[test]
fn readout_sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("sweep.csv");
    let out = with_output(
        &["readout-sweep", "--p_A", "-0.87", "--G", "0.05:0.95:0.05"],
        &sweep,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&sweep).unwrap().lines().count(), 20);

    let fitted = dir.path().join("fit.csv");
    let out = with_output(&["fit", "--input", sweep.to_str().unwrap()], &fitted);
    assert_eq!(out.status.code(), Some(0));
    let p = sidecar(&fitted)["results"]["p_A_hat"].as_f64().unwrap();
    assert!((p + 0.87).abs() < 1e-6, "{p}");
}

#[test]
fn counts_sweep_records_seeds_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("counts.csv");
    let args = [
        "readout-sweep",
        "--p_A",
        "-1.14",
        "--G",
        "0.1:0.9:0.1",
        "--trials",
        "100000",
        "--seed",
        "77",
    ];
    assert_eq!(with_output(&args, &sweep).status.code(), Some(0));
    let csv = std::fs::read_to_string(&sweep).unwrap();
    assert!(csv.starts_with("G,counts_H,counts_V,trials,seed\n"));
    assert!(csv.lines().nth(1).unwrap().ends_with(",100000,77"));
    assert_eq!(sidecar(&sweep)["config"]["seed"], 77);

    let fitted = dir.path().join("fit.csv");
    assert_eq!(
        with_output(&["fit", "--input", sweep.to_str().unwrap()], &fitted)
            .status
            .code(),
        Some(0)
    );
    let r = &sidecar(&fitted)["results"];
    let (p, se) = (
        r["p_A_hat"].as_f64().unwrap(),
        r["std_error"].as_f64().unwrap(),
    );
    assert!((p + 1.14).abs() <= 3.0 * se, "{p} ± {se}");
}

#[test]
fn hom_sweep_reports_marks() {
    let out = weakval(&[
        "hom-sweep",
        "--p_A",
        "-1",
        "--G",
        "0.29",
        "--grid",
        "27:30:0.05",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("hwp5_deg,relative_deg,visibility,p_A2,G,background_ratio\n"));
    let trailer = csv.lines().last().unwrap();
    assert!(trailer.starts_with("# summary p_A2=-1 "), "{trailer}");
    assert!(trailer.contains("argmax_hwp5_deg=28.8"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# archived run\ncommand = interferometer\np_A = -1\nG = 0.5\n",
    )
    .unwrap();
    let path = dir.path().join("out.csv");
    let out = with_output(&["--config", cfg.to_str().unwrap(), "--G", "0.29"], &path);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(sidecar(&path)["config"]["G"], 0.29);
}

#[test]
fn validation_errors_exit_2() {
    let cases: [&[&str]; 7] = [
        &["bogus"],
        &[],
        &["interferometer", "--p_A", "-1"],
        &["interferometer", "--p_A", "-1", "--G", "1.5"],
        &["interferometer", "--p_A", "abc", "--G", "0.3"],
        &["threebox", "--p_A", "1"],
        &["readout-sweep", "--p_A", "-1", "--G", "0.1:0.9"],
    ];
    for args in cases {
        let out = weakval(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let msg = String::from_utf8(out.stderr).unwrap();
        assert!(!msg.trim().is_empty());
    }
    let out = weakval(&["threebox", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = with_output(&["threebox"], &path);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
}

#[test]
fn runtime_errors_exit_3() {
    let out = weakval(&["interferometer", "--p_A", "-1", "--G", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.csv");
    std::fs::write(&input, "G,R\n0.3,-0.8\n").unwrap();
    let out = weakval(&["fit", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_exits_0() {
    assert_eq!(weakval(&["--help"]).status.code(), Some(0));
    assert_eq!(weakval(&["--version"]).status.code(), Some(0));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = [
        "readout-sweep",
        "--p_A",
        "-0.57",
        "--G",
        "0.2:0.8:0.2",
        "--trials",
        "5000",
        "--seed",
        "9",
    ];
    let a = weakval(&args);
    let b = weakval(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = weakval(&[
        "readout-sweep",
        "--p_A",
        "-0.57",
        "--G",
        "0.2:0.8:0.2",
        "--trials",
        "5000",
        "--seed",
        "10",
    ]);
    assert_ne!(a.stdout, c.stdout);
}
