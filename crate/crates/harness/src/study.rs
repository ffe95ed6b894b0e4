//! Study runner and the versioned CSV row format.
//!
//! Seeds: for family `f` (both IQP studies share one), qubit count `n` and
//! circuit index `c`, the circuit is drawn from `sub_rng(seed, [f, n, c])`
//! and reused for every infidelity in the list. Noise and shots for
//! infidelity index `k` come from `sub_rng(seed, [f, n, c, k, 1])` and
//! `sub_rng(seed, [f, n, c, k, 2])`; the `seed` column records the first of
//! these. Supremacy gate noise is calibrated once from `sub_rng(seed, [2, u64::MAX])`
//! unless σ₁ and σ₂ are both configured.

use std::io::Write;

use anyhow::{Context, Result};
use evaqs_core::circuits::{Basis, IqpCircuit, RandomCircuit, SupremacyCircuit};
use evaqs_core::cost::{
    chi_square, collision_probability, cost_chi2, cost_uniform, uniform, variance_exact, variance_small_infidelity,
    ErrorDecomposition,
};
use evaqs_core::noise::{
    apply_output_noise, calibrate_gate_noise, perturb_iqp, perturb_supremacy, GateNoise,
    SINGLE_QUBIT_PROCESS_INFIDELITY, TWO_QUBIT_PROCESS_INFIDELITY,
};
use evaqs_core::protocol::{EstimateStatus, Verifier};
use evaqs_core::seed::{derive_seed, rng_from_seed, sub_rng};
use evaqs_core::state::fidelity;
use evaqs_core::StateVector;
use rayon::prelude::*;

use crate::config::{StudyConfig, StudyKind};

pub const SCHEMA_VERSION: u32 = 1;

pub const CSV_HEADER: [&str; 20] = [
    "schema_version",
    "study",
    "n",
    "circuit",
    "infidelity_target",
    "seed",
    "true_infidelity",
    "est_infidelity_simple",
    "est_infidelity_corrected",
    "predicted_var",
    "var_exact",
    "var_plugin",
    "empirical_cost",
    "exact_cost",
    "predicted_cost_chi2",
    "predicted_cost_uniform",
    "p_coll",
    "chi2",
    "h2",
    "status",
];

/// Number of Monte Carlo draws used to calibrate supremacy gate noise.
pub const CALIBRATION_SAMPLES: usize = 10_000;

/// One verification run. Costs are normalized by the precision, i.e. they
/// are `N · Var F̃`; variances are for the configured `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub study: StudyKind,
    pub n: usize,
    pub circuit: usize,
    pub infidelity_target: Option<f64>,
    pub seed: u64,
    pub true_infidelity: f64,
    pub est_infidelity_simple: f64,
    pub est_infidelity_corrected: f64,
    pub predicted_var: f64,
    pub var_exact: f64,
    pub var_plugin: f64,
    pub empirical_cost: f64,
    pub exact_cost: f64,
    pub predicted_cost_chi2: f64,
    pub predicted_cost_uniform: f64,
    pub p_coll: f64,
    pub chi2: f64,
    pub h2: f64,
    /// `ok`, `correction-undefined`, or `error: <message>`.
    pub status: String,
}

impl StudyRow {
    fn failed(study: StudyKind, n: usize, circuit: usize, infidelity_target: Option<f64>, seed: u64, err: &anyhow::Error) -> Self {
        Self {
            study,
            n,
            circuit,
            infidelity_target,
            seed,
            true_infidelity: f64::NAN,
            est_infidelity_simple: f64::NAN,
            est_infidelity_corrected: f64::NAN,
            predicted_var: f64::NAN,
            var_exact: f64::NAN,
            var_plugin: f64::NAN,
            empirical_cost: f64::NAN,
            exact_cost: f64::NAN,
            predicted_cost_chi2: f64::NAN,
            predicted_cost_uniform: f64::NAN,
            p_coll: f64::NAN,
            chi2: f64::NAN,
            h2: f64::NAN,
            status: format!("error: {err:#}").replace(['\n', ','], ";"),
        }
    }

    pub fn is_ok(&self) -> bool {
        !self.status.starts_with("error")
    }

    pub fn record(&self) -> Vec<String> {
        let f = format_float;
        vec![
            SCHEMA_VERSION.to_string(),
            self.study.name().to_string(),
            self.n.to_string(),
            self.circuit.to_string(),
            self.infidelity_target.map(f).unwrap_or_default(),
            self.seed.to_string(),
            f(self.true_infidelity),
            f(self.est_infidelity_simple),
            f(self.est_infidelity_corrected),
            f(self.predicted_var),
            f(self.var_exact),
            f(self.var_plugin),
            f(self.empirical_cost),
            f(self.exact_cost),
            f(self.predicted_cost_chi2),
            f(self.predicted_cost_uniform),
            f(self.p_coll),
            f(self.chi2),
            f(self.h2),
            self.status.clone(),
        ]
    }
}

/// Shortest round-trip form, in exponent notation outside `[1e-4, 1e15)`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&v.abs()) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// Verifies `mu` against `tau` with the basic (uniform-auxiliary) protocol
/// and fills in every prediction from the same pair.
pub fn evaluate(
    study: StudyKind,
    n: usize,
    circuit: usize,
    infidelity_target: Option<f64>,
    seed: u64,
    mu: &StateVector,
    tau: &StateVector,
    shots: usize,
    shot_seed: u64,
) -> Result<StudyRow> {
    let tau_p = tau.probabilities();
    let aux = uniform(tau.dim());
    let true_infidelity = 1.0 - fidelity(mu, tau)?;
    let dec = ErrorDecomposition::new(mu, tau)?;
    let est = Verifier::basic(mu, tau)?.run(shots, &mut rng_from_seed(shot_seed))?;
    let n_shots = shots as f64;
    let var_exact = variance_exact(mu, tau, &aux, n_shots)?;
    let p_coll = collision_probability(&tau_p);
    Ok(StudyRow {
        study,
        n,
        circuit,
        infidelity_target,
        seed,
        true_infidelity,
        est_infidelity_simple: est.infidelity_simple(),
        est_infidelity_corrected: est.infidelity_corrected(),
        predicted_var: variance_small_infidelity(&tau_p, &dec.sigma_probabilities(), true_infidelity, &aux, n_shots)?,
        var_exact,
        var_plugin: est.variance,
        empirical_cost: n_shots * est.variance,
        exact_cost: n_shots * var_exact,
        predicted_cost_chi2: cost_chi2(true_infidelity, 1.0, &tau_p, &aux)?,
        predicted_cost_uniform: cost_uniform(true_infidelity, 1.0, &tau_p),
        p_coll,
        chi2: chi_square(&tau_p, &aux)?.value,
        h2: -p_coll.log2(),
        status: match est.status {
            EstimateStatus::Ok => "ok".into(),
            EstimateStatus::CorrectionUndefined => "correction-undefined".into(),
        },
    })
}

/// Gate-noise strengths used by a supremacy study.
pub fn supremacy_noise(cfg: &StudyConfig) -> Result<GateNoise> {
    match (cfg.sigma1, cfg.sigma2) {
        (Some(s1), Some(s2)) => Ok(GateNoise::new(s1, s2)?),
        (s1, s2) => {
            let cal = calibrate_gate_noise(
                SINGLE_QUBIT_PROCESS_INFIDELITY,
                TWO_QUBIT_PROCESS_INFIDELITY,
                CALIBRATION_SAMPLES,
                &mut sub_rng(cfg.seed, &[StudyKind::Supremacy.family(), u64::MAX]),
            )?;
            Ok(GateNoise::new(s1.unwrap_or(cal.sigma1), s2.unwrap_or(cal.sigma2))?)
        }
    }
}

/// A generated circuit with its ideal output, ready to be perturbed.
enum Prepared {
    Iqp { circuit: IqpCircuit, basis: Basis, tau: StateVector },
    Random { tau: StateVector },
    Supremacy { circuit: SupremacyCircuit, noise: GateNoise, tau: StateVector },
}

impl Prepared {
    fn new(cfg: &StudyConfig, noise: Option<GateNoise>, n: usize, c: usize) -> Result<Self> {
        let mut rng = sub_rng(cfg.seed, &[cfg.kind.family(), n as u64, c as u64]);
        let depth = cfg.depth_factor * n;
        Ok(match cfg.kind {
            StudyKind::IqpHadamard | StudyKind::IqpComputational => {
                let basis = if cfg.kind == StudyKind::IqpHadamard { Basis::Hadamard } else { Basis::Computational };
                let circuit = IqpCircuit::random(n, depth, cfg.mean_weight, &mut rng)?;
                let tau = circuit.state(basis)?;
                Self::Iqp { circuit, basis, tau }
            }
            StudyKind::Random => Self::Random { tau: RandomCircuit::random(n, depth, &mut rng)?.simulate()? },
            StudyKind::Supremacy => {
                let circuit = SupremacyCircuit::random(n, cfg.cycles, &mut rng)?;
                let tau = circuit.simulate()?;
                Self::Supremacy { circuit, noise: noise.context("supremacy noise missing")?, tau }
            }
        })
    }

    fn target(&self) -> &StateVector {
        match self {
            Self::Iqp { tau, .. } | Self::Random { tau } | Self::Supremacy { tau, .. } => tau,
        }
    }

    /// Noisy test state; `infidelity` is ignored by the supremacy study.
    fn noisy(&self, infidelity: Option<f64>, seed: u64) -> Result<StateVector> {
        let mut rng = rng_from_seed(seed);
        let want = || infidelity.context("infidelity target missing");
        Ok(match self {
            Self::Iqp { circuit, basis, .. } => perturb_iqp(circuit, want()?, *basis, &mut rng)?.state,
            Self::Random { tau } => apply_output_noise(tau, want()?, &mut rng)?.0,
            Self::Supremacy { circuit, noise, .. } => perturb_supremacy(circuit, *noise, &mut rng)?,
        })
    }
}

/// All rows for one circuit realization, in infidelity-list order.
fn run_circuit(cfg: &StudyConfig, noise: Option<GateNoise>, n: usize, c: usize) -> Vec<StudyRow> {
    let family = cfg.kind.family();
    let targets: Vec<Option<f64>> = if cfg.kind.has_infidelity_targets() {
        cfg.infidelities.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let prepared = Prepared::new(cfg, noise, n, c);
    targets
        .iter()
        .enumerate()
        .map(|(k, &target)| {
            let path = [family, n as u64, c as u64, k as u64];
            let noise_seed = derive_seed(cfg.seed, &[path[0], path[1], path[2], path[3], 1]);
            let shot_seed = derive_seed(cfg.seed, &[path[0], path[1], path[2], path[3], 2]);
            let result = match &prepared {
                Ok(p) => p.noisy(target, noise_seed).and_then(|mu| {
                    evaluate(cfg.kind, n, c, target, noise_seed, &mu, p.target(), cfg.shots, shot_seed)
                }),
                Err(e) => Err(anyhow::anyhow!("{e:#}")),
            };
            result.unwrap_or_else(|e| {
                eprintln!("{} n={n} circuit={c} infidelity={target:?}: {e:#}", cfg.kind);
                StudyRow::failed(cfg.kind, n, c, target, noise_seed, &e)
            })
        })
        .collect()
}

/// Runs every cell of the study. Output order is (n, circuit, infidelity)
/// regardless of thread count.
pub fn run_study(cfg: &StudyConfig) -> Result<Vec<StudyRow>> {
    cfg.validate()?;
    let noise = if cfg.kind == StudyKind::Supremacy { Some(supremacy_noise(cfg)?) } else { None };
    let units: Vec<(usize, usize)> = cfg.qubits.iter().flat_map(|&n| (0..cfg.circuits).map(move |c| (n, c))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?;
    let rows: Vec<Vec<StudyRow>> = pool.install(|| units.par_iter().map(|&(n, c)| run_circuit(cfg, noise, n, c)).collect());
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(out: W, rows: &[StudyRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the study and writes the CSV to `cfg.out` (or `out` when given).
pub fn run_study_to<W: Write>(cfg: &StudyConfig, out: W) -> Result<Vec<StudyRow>> {
    let rows = run_study(cfg)?;
    write_csv(out, &rows).context("writing study CSV")?;
    Ok(rows)
}
