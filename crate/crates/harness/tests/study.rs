use evaqs_harness::config::{Overrides, StudyConfig, StudyKind};
use evaqs_harness::study::{run_study, write_csv};
use evaqs_harness::summary::{read_csv, summarize};
use evaqs_harness::StudyRow;

fn config(kind: StudyKind, qubits: &[usize], infidelities: &[f64], circuits: usize) -> StudyConfig {
    let flags = Overrides {
        qubits: Some(qubits.to_vec()),
        infidelities: Some(infidelities.to_vec()),
        circuits: Some(circuits),
        seed: Some(11),
        ..Default::default()
    };
    StudyConfig::resolve(kind, None, &flags).unwrap()
}

fn csv_bytes(rows: &[StudyRow]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).unwrap();
    buf
}

#[test]
fn single_cell_estimate_is_within_predicted_spread() {
    for kind in [StudyKind::IqpHadamard, StudyKind::IqpComputational, StudyKind::Random] {
        let rows = run_study(&config(kind, &[4], &[0.1], 1)).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.status, "ok");
        assert!((r.true_infidelity - 0.1).abs() < 1e-6);
        assert!((r.est_infidelity_corrected - 0.1).abs() <= 5.0 * r.predicted_var.sqrt(), "{kind}: {r:?}");
    }
}

#[test]
fn identical_configs_give_identical_csv() {
    let mut cfg = config(StudyKind::Random, &[3, 5], &[0.03, 0.3], 4);
    cfg.shots = 2000;
    let a = csv_bytes(&run_study(&cfg).unwrap());
    cfg.threads = 3;
    let b = csv_bytes(&run_study(&cfg).unwrap());
    assert_eq!(a, b);
    cfg.seed += 1;
    assert_ne!(a, csv_bytes(&run_study(&cfg).unwrap()));
}

#[test]
fn supremacy_study_is_deterministic() {
    let mut cfg = config(StudyKind::Supremacy, &[4, 9], &[0.1], 2);
    cfg.shots = 2000;
    let a = run_study(&cfg).unwrap();
    assert_eq!(a.len(), 4);
    assert!(a.iter().all(|r| r.infidelity_target.is_none() && r.is_ok()));
    assert!(a.iter().all(|r| r.true_infidelity > 0.0 && r.true_infidelity < 0.5));
    assert_eq!(csv_bytes(&a), csv_bytes(&run_study(&cfg).unwrap()));
}

#[test]
fn circuits_follow_the_documented_seed_path() {
    use evaqs_core::circuits::{Basis, IqpCircuit};
    use evaqs_core::cost::collision_probability;
    use evaqs_core::seed::sub_rng;
    let rows = run_study(&config(StudyKind::IqpComputational, &[6], &[0.1], 3)).unwrap();
    for r in rows {
        let c = IqpCircuit::random(6, 18, 2.0, &mut sub_rng(11, &[0, 6, r.circuit as u64])).unwrap();
        let p = collision_probability(&c.state(Basis::Computational).unwrap().probabilities());
        assert_eq!(p, r.p_coll);
    }
}

#[test]
fn hadamard_targets_are_flat() {
    let mut cfg = config(StudyKind::IqpHadamard, &[4, 12, 20], &[0.1], 1);
    cfg.shots = 1000;
    for r in run_study(&cfg).unwrap() {
        let d = (1u64 << r.n) as f64;
        assert!((r.p_coll * d - 1.0).abs() < 1e-10, "n={}: {}", r.n, r.p_coll * d);
    }
}

#[test]
fn cost_predictions_agree_under_uniform_sampling() {
    let mut rows = run_study(&config(StudyKind::Random, &[2, 6], &[0.01, 0.3], 5)).unwrap();
    rows.extend(run_study(&config(StudyKind::IqpComputational, &[5], &[0.1], 5)).unwrap());
    for r in &rows {
        assert!((r.predicted_cost_chi2 - r.predicted_cost_uniform).abs() <= 1e-9 * r.predicted_cost_uniform.max(1.0), "{r:?}");
        assert!((r.h2 - (-r.p_coll.log2())).abs() < 1e-12);
        assert!((r.chi2 + 1.0 - r.p_coll * (1u64 << r.n) as f64).abs() < 1e-9);
    }
}

#[test]
fn csv_round_trip_and_summary() {
    let cfg = config(StudyKind::Random, &[3], &[0.1, 0.3], 5);
    let rows = run_study(&cfg).unwrap();
    let bytes = csv_bytes(&rows);
    let back = read_csv(bytes.as_slice()).unwrap();
    assert_eq!(back, rows);
    let cells = summarize(&back).unwrap();
    assert_eq!(cells.len(), 2);
    assert!(cells.iter().all(|c| c.rows == 5 && c.failed == 0));
    assert_eq!(cells[0].infidelity_target, Some(0.1));
}

#[test]
fn summary_of_single_row_is_degenerate() {
    let rows = run_study(&config(StudyKind::Random, &[3], &[0.1], 1)).unwrap();
    let cell = &summarize(&rows).unwrap()[0];
    let v = rows[0].est_infidelity_corrected;
    assert_eq!((cell.est_infidelity.median, cell.est_infidelity.p10, cell.est_infidelity.p90), (v, v, v));
}

#[test]
fn failed_rows_are_skipped_in_summaries() {
    let mut rows = run_study(&config(StudyKind::Random, &[3], &[0.1], 2)).unwrap();
    let mut bad = rows[0].clone();
    bad.status = "error: simulated".into();
    bad.est_infidelity_corrected = f64::NAN;
    rows.push(bad);
    let cell = &summarize(&rows).unwrap()[0];
    assert_eq!((cell.rows, cell.failed), (2, 1));
    assert!(cell.est_infidelity.median.is_finite());
    assert!(summarize(&[]).is_err());
}

#[test]
fn rejects_foreign_csv() {
    assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
    let rows = run_study(&config(StudyKind::Random, &[2], &[0.1], 1)).unwrap();
    let text = String::from_utf8(csv_bytes(&rows)).unwrap().replacen("\n1,", "\n2,", 1);
    assert!(read_csv(text.as_bytes()).is_err());
}

#[test]
fn computational_iqp_cost_grows_slowly() {
    let mut cfg = config(StudyKind::IqpComputational, &[4, 20], &[0.1], 16);
    cfg.threads = 0;
    let cells = summarize(&run_study(&cfg).unwrap()).unwrap();
    let growth = cells[1].empirical_cost.median / cells[0].empirical_cost.median;
    eprintln!("median cost growth n=4 -> n=20: {growth:.2}");
    assert!(growth > 2.5 / 2.0 && growth < 2.5 * 2.0, "{growth}");
}
