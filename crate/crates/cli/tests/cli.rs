use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellipsoid-traj"))
        .args(args)
        .env_remove("ELLIPSOID_TRAJ_TOL")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_helix_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("helix.csv");
    let o = run(&["generate", "helix", "--k", "0.5", "--metric", "4,9,16", "--samples", "2000", "--out", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2001);
    assert!(text.starts_with("s,x,y,z\n"));
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("helix.json")).unwrap()).unwrap();
    assert_eq!(meta["family"], "helix");
    assert_eq!(meta["params"]["k"], 0.5);
    assert_eq!(meta["metric"], serde_json::json!([4.0, 9.0, 16.0]));
}

#[test]
fn spherical_cycloid_angle_is_set_automatically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = run(&["generate", "cycloid", "--a", "4", "--b", "3", "--omega-mode", "spherical", "--out", path_str(&out)]);
    assert!(o.status.success());
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("c.json")).unwrap()).unwrap();
    let omega = meta["params"]["omega"].as_f64().unwrap();
    assert!((omega - (-0.75f64).acos()).abs() < 1e-15);
}

#[test]
fn frame_columns_and_circle_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("circle.csv");
    let o = run(&["generate", "circle", "--example", "4.1", "--frames", "--samples", "50", "--out", path_str(&out)]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("s,x,y,z,tx,ty,tz,yx,yy,yz,kg\n"));
    let kg: f64 = text.lines().nth(10).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((kg.abs() - 1.0).abs() < 1e-8);
}

#[test]
fn verify_generated_file_then_corrupted_copies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sat.csv");
    assert!(run(&["generate", "satellite", "--alpha", "1.8", "--k", "2", "--out", path_str(&out)]).status.success());
    let o = run(&["verify", "--input", path_str(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));

    let text = fs::read_to_string(&out).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();

    let garbled = dir.path().join("garbled.csv");
    lines[40] = "0.5,not-a-number,0,0".into();
    fs::write(&garbled, lines.join("\n")).unwrap();
    let o = run(&["verify", "--input", path_str(&garbled)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":41"));

    let off = dir.path().join("off.csv");
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let f: Vec<f64> = lines[700].split(',').map(|v| v.parse().unwrap()).collect();
    lines[700] = format!("{:.16e},{:.16e},{:.16e},{:.16e}", f[0], f[1] * 1.01, f[2], f[3]);
    fs::write(&off, lines.join("\n")).unwrap();
    let o = run(&["verify", "--input", path_str(&off)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn missing_file_and_bad_params_exit_one() {
    let o = run(&["verify", "--input", "/nonexistent/curve.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/curve.csv"));
    let o = run(&["generate", "helix", "--k", "1.5", "--out", "/tmp/never.csv"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["verify", "helix"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn family_verification_passes() {
    for args in [
        &["verify", "helix", "--k", "0.5"][..],
        &["verify", "cycloid", "--a", "7", "--b", "3"],
        &["verify", "circle", "--example", "2"],
        &["verify", "linear", "--length", "4"],
        &["verify", "magnetic", "--length", "5"],
    ] {
        let o = run(args);
        assert!(o.status.success(), "{args:?}\n{}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn delta_scan_prints_one_row_per_value() {
    let o = run(&["verify", "magnetic", "--axis", "0,0,1", "--delta-scan", "0:3:0.5", "--length", "5"]);
    assert!(o.status.success());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.lines().filter(|l| l.ends_with("pass")).count(), 7);
}

#[test]
fn tolerance_env_var_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_ellipsoid-traj"))
        .args(["verify", "magnetic", "--length", "2"])
        .env("ELLIPSOID_TRAJ_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("underflow"));
}

#[test]
fn mesh_writes_obj() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.obj");
    assert!(run(&["mesh", "--resolution", "64", "--out", path_str(&out)]).status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 64 * 128);
    assert!(text.lines().all(|l| l.starts_with("v ") || l.starts_with("f ")));
}

#[test]
fn gallery_writes_all_curves() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gallery", "--out", path_str(dir.path()), "--samples", "200"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let csvs = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "csv"))
        .count();
    assert_eq!(csvs, 26);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
}

#[test]
fn negative_values_parse_as_numbers() {
    let o = run(&["verify", "magnetic", "--length", "4", "--delta", "1", "--c1", "0.5", "--c2", "-2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", "magnetic", "--axis", "0,0,-1", "--delta-scan", "-1:1:1", "--length", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().filter(|l| l.ends_with("pass")).count(), 3);
}
