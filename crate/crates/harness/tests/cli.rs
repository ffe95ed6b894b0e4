use std::path::Path;
use std::process::{Command, Output};

use evaqs_core::circuits::{Circuit, IqpCircuit};
use evaqs_core::seed::rng_from_seed;

fn evaqs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evaqs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_iqp_pair(dir: &Path) -> (String, String) {
    let ideal = IqpCircuit::random(5, 15, 2.0, &mut rng_from_seed(3)).unwrap();
    let thetas: Vec<f64> = ideal.rotations().iter().map(|r| r.theta + 0.05).collect();
    let noisy = ideal.with_angles(&thetas).unwrap();
    let (t, m) = (dir.join("target.txt"), dir.join("test.txt"));
    std::fs::write(&t, Circuit::Iqp(ideal).to_text()).unwrap();
    std::fs::write(&m, Circuit::Iqp(noisy).to_text()).unwrap();
    (t.to_string_lossy().into_owned(), m.to_string_lossy().into_owned())
}

#[test]
fn verify_reports_estimate_and_logs_trials() {
    let dir = tempfile::tempdir().unwrap();
    let (t, m) = write_iqp_pair(dir.path());
    let log = dir.path().join("trials.csv");
    let out = stdout(&evaqs(&["verify", "--target", &t, "--test", &m, "--basis", "hadamard", "--shots", "3000", "--trials", log.to_str().unwrap()]));
    assert!(out.contains("fidelity (true)") && out.contains("fidelity (corr.)"), "{out}");
    let trials = std::fs::read_to_string(&log).unwrap();
    assert!(trials.starts_with("x,y,b,w\n"));
    assert_eq!(trials.lines().count(), 3001);
}

#[test]
fn cost_report_for_flat_target() {
    let dir = tempfile::tempdir().unwrap();
    let (t, _) = write_iqp_pair(dir.path());
    let out = stdout(&evaqs(&["cost", "--target", &t, "--basis", "hadamard", "--infidelity", "0.1", "--precision", "0.01"]));
    assert!(out.contains("d * p_coll          1.0000"), "{out}");
    assert!(out.contains("chi-square form   4000"), "{out}");
}

#[test]
fn study_with_config_file_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("study.cfg");
    let csv = dir.path().join("rows.csv");
    std::fs::write(&cfg, format!("qubits = 3\ninfidelity = 0.1, 0.3\ncircuits = 4\nshots = 1000\nout = {}\n", csv.display())).unwrap();
    let o = evaqs(&["study", "random", "--config", cfg.to_str().unwrap(), "--circuits", "2", "--threads", "2"]);
    stdout(&o);
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("schema_version,study,n,circuit,"));
    assert_eq!(rows.lines().count(), 1 + 2 * 2);
    let summary = stdout(&evaqs(&["summarize", csv.to_str().unwrap()]));
    assert_eq!(summary.lines().count(), 3);
    assert!(summary.lines().nth(1).unwrap().starts_with("1,random,3,0.1,2,0,"));
}

#[test]
fn bad_input_exits_nonzero() {
    let o = evaqs(&["study", "random", "--qubits", "1"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert!(!evaqs(&["verify", "--target", "/nonexistent", "--test", "/nonexistent"]).status.success());
    assert!(!evaqs(&["study", "qaoa"]).status.success());
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "").unwrap();
    assert!(!evaqs(&["summarize", bad.to_str().unwrap()]).status.success());
}
