use std::fs;
use std::process::{Command, Output};

fn ptosc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptosc")).args(args).output().expect("run ptosc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spectrum_at_zero_coupling() {
    let o = ptosc(&["spectrum", "--cutoff", "3", "--g", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "g,index,re_lambda,im_lambda\n0,0,1,0\n0,1,3,0\n0,2,5,0\n0,3,7,0\n");
}

#[test]
fn malformed_potential_exits_2_with_position() {
    let o = ptosc(&["spectrum", "--potential", "x1^3 + + x1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("position"), "{err}");
}

#[test]
fn config_errors_are_reported_together() {
    let o = ptosc(&["singular", "--dim", "0", "--format", "yaml", "--g", "abc"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--dim") && err.contains("--format") && err.contains("--g"), "{err}");
}

#[test]
fn solver_errors_exit_3() {
    // (1,0) is a doubly degenerate level in two dimensions
    let o = ptosc(&["perturb", "--dim", "2", "--potential", "x1^2*x2", "--level", "1,0", "--orders", "4"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let o = ptosc(&["perturb", "--cutoff", "5", "--orders", "8"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn henon_heiles_spectrum_json() {
    let o = ptosc(&["spectrum", "--dim", "2", "--cutoff", "8", "--potential", "x1^2*x2", "--g", "0.05", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 45);
    assert!((rows[0]["re"].as_f64().unwrap() - 2.0).abs() < 1e-2);
}

#[test]
fn singular_grid_rows() {
    let o = ptosc(&["singular", "--cutoff", "20", "--g-grid", "0:0.2:3", "--count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 3 * 4);
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        let mu: f64 = f[2].parse().unwrap();
        let signed: f64 = f[3].parse().unwrap();
        assert_eq!(mu, signed.abs());
    }
}

#[test]
fn output_file_and_config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    fs::write(&cfg, "# defaults for this run\ncutoff = 3\ng = 0.5\nformat = json\n").unwrap();
    let o = ptosc(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--g",
        "0",
        "--format",
        "csv",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    // cutoff from the file, g and format from the flags
    assert_eq!(fs::read_to_string(&out).unwrap(), "g,index,re_lambda,im_lambda\n0,0,1,0\n0,1,3,0\n0,2,5,0\n0,3,7,0\n");
}

#[test]
fn dump_matrix_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.txt");
    let o = ptosc(&["singular", "--cutoff", "6", "--g", "0.3", "--dump-matrix", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let f = fs::File::open(&path).unwrap();
    let (h, m) = pt_oscillator::operators::read_matrix_dump(std::io::BufReader::new(f)).unwrap();
    assert_eq!((h.dim, h.cutoff, h.size), (1, 6, 7));
    assert_eq!(h.name, "Q");
    assert_eq!(m[(0, 0)].re, 1.0);
}

#[test]
fn verify_exit_code_tracks_failures() {
    let ok = ptosc(&["verify", "--cutoff", "20", "--g", "0.2", "--checks", "structural_identities,singular_values"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert!(v[0]["passed"].as_bool().unwrap());

    let bad = ptosc(&["verify", "--cutoff", "20", "--g", "0.2", "--checks", "weyl"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn borel_compare_direct() {
    let o = ptosc(&["borel", "--g", "0.05", "--orders", "16", "--pade", "8,8", "--nodes", "64", "--compare-direct"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["q"].as_f64().unwrap(), 0.5);
    assert!(v["relative_deviation"].as_f64().unwrap() < 1e-3);
    assert_eq!(v["pade_degrees"], serde_json::json!([8, 8]));
}

#[test]
fn sweep_is_parallel_but_ordered() {
    let a = ptosc(&["sweep", "--cutoff", "30", "--g-grid", "0:0.5:11", "--threads", "1"]);
    let b = ptosc(&["sweep", "--cutoff", "30", "--g-grid", "0:0.5:11", "--threads", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
