//! Single-pair verification and target concentration reports.

use std::fmt;
use std::io::Write;

use anyhow::{ensure, Result};
use evaqs_core::circuits::{Basis, Circuit};
use evaqs_core::cost::{
    chi_square, cost_chi2, cost_uniform, uniform, variance_exact, variance_small_infidelity, ConcentrationReport,
    ErrorDecomposition,
};
use evaqs_core::protocol::{estimate_bias_corrected, write_trial_log, EstimateResult, Verifier};
use evaqs_core::seed::rng_from_seed;
use evaqs_core::StateVector;

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub n_qubits: usize,
    pub shots: usize,
    pub seed: u64,
    pub true_fidelity: f64,
    pub estimate: EstimateResult,
    pub predicted_var: f64,
    pub var_exact: f64,
}

/// Verifies the output of `test` against the output of `target` with the
/// basic protocol. When `trial_log` is given every shot is written to it.
pub fn verify(
    target: &Circuit,
    test: &Circuit,
    basis: Basis,
    shots: usize,
    seed: u64,
    trial_log: Option<&mut dyn Write>,
) -> Result<VerifyReport> {
    ensure!(target.n_qubits() == test.n_qubits(), "target has {} qubits, test has {}", target.n_qubits(), test.n_qubits());
    ensure!(shots >= 2, "need at least two shots");
    let tau = target.simulate(basis)?;
    let mu = test.simulate(basis)?;
    verify_states(&mu, &tau, shots, seed, trial_log)
}

pub fn verify_states(
    mu: &StateVector,
    tau: &StateVector,
    shots: usize,
    seed: u64,
    trial_log: Option<&mut dyn Write>,
) -> Result<VerifyReport> {
    let trials = Verifier::basic(mu, tau)?.sample_trials(shots, &mut rng_from_seed(seed));
    if let Some(w) = trial_log {
        write_trial_log(w, &trials)?;
    }
    let estimate = estimate_bias_corrected(&trials)?;
    let dec = ErrorDecomposition::new(mu, tau)?;
    let aux = uniform(tau.dim());
    Ok(VerifyReport {
        n_qubits: tau.n_qubits(),
        shots,
        seed,
        true_fidelity: dec.fidelity,
        estimate,
        predicted_var: variance_small_infidelity(&tau.probabilities(), &dec.sigma_probabilities(), dec.infidelity, &aux, shots as f64)?,
        var_exact: variance_exact(mu, tau, &aux, shots as f64)?,
    })
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.estimate;
        writeln!(f, "qubits              {}", self.n_qubits)?;
        writeln!(f, "shots               {} (seed {})", self.shots, self.seed)?;
        writeln!(f, "fidelity (true)     {:.6}", self.true_fidelity)?;
        writeln!(f, "fidelity (simple)   {:.6}", e.fidelity_simple)?;
        writeln!(f, "fidelity (corr.)    {:.6} ± {:.6}", e.fidelity_corrected, e.variance.sqrt())?;
        writeln!(f, "correction C        {:.3e}", e.correction)?;
        writeln!(f, "predicted std       {:.6} (small-infidelity), {:.6} (full)", self.predicted_var.sqrt(), self.var_exact.sqrt())?;
        write!(f, "status              {:?}", e.status)
    }
}

#[derive(Debug, Clone)]
pub struct CostReport {
    pub concentration: ConcentrationReport,
    pub chi2_uniform: f64,
    pub infidelity: f64,
    pub precision: f64,
    pub cost_chi2: f64,
    pub cost_uniform: f64,
}

pub fn cost(target: &Circuit, basis: Basis, infidelity: f64, precision: f64) -> Result<CostReport> {
    ensure!(infidelity >= 0.0 && infidelity <= 1.0, "infidelity must lie in [0, 1]");
    ensure!(precision > 0.0, "precision must be positive");
    let p = target.simulate(basis)?.probabilities();
    let aux = uniform(p.len());
    Ok(CostReport {
        concentration: ConcentrationReport::of(&p),
        chi2_uniform: chi_square(&p, &aux)?.value,
        infidelity,
        precision,
        cost_chi2: cost_chi2(infidelity, precision, &p, &aux)?,
        cost_uniform: cost_uniform(infidelity, precision, &p),
    })
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.concentration;
        writeln!(f, "dimension           {}", c.dim)?;
        writeln!(f, "collision prob.     {:.6e}", c.p_coll)?;
        writeln!(f, "effective support   {:.1}", c.d_eff)?;
        writeln!(f, "renyi-2 entropy     {:.4} bits", c.h2)?;
        writeln!(f, "d * p_coll          {:.4}", c.d_p_coll)?;
        writeln!(f, "chi2 vs uniform     {:.4}", self.chi2_uniform)?;
        writeln!(f, "shots for I={}, eps={}:", self.infidelity, self.precision)?;
        writeln!(f, "  chi-square form   {:.0}", self.cost_chi2.ceil())?;
        write!(f, "  uniform form      {:.0}", self.cost_uniform.ceil())
    }
}
