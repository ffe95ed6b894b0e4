//! Shot-level simulation of the snippet-comparison verification circuit and
//! the fidelity estimators built on its outcomes.
//!
//! One shot yields basis indices `x, y`, a Bell-measurement outcome
//! `b ∈ {-1, 0, +1}` and the weight
//! `w' = |τ'_x/α'_x|² + |τ'_y/α'_y|²` computed from the (unnormalized)
//! amplitude oracles. `F(μ, τ)` is estimated as `mean(w'b) / mean(w'b²)`.
//!
//! Two circuit versions are simulated:
//! - *general*: the test register is compared against an auxiliary state α
//!   through a controlled swap, so `(x, y)` is drawn from
//!   `(|μ_x|²|α_y|² + |μ_y|²|α_x|²)/2`;
//! - *basic*: no auxiliary register; `y = x ⊕ v` for a uniformly random `v`,
//!   which is the general version with α uniform.
//!
//! The simulator samples `b` from the exact conditional distribution of the
//! two-ancilla state, built from normalized amplitudes. The estimators only
//! ever see oracle values.

use std::io::{self, Write};

use rand::Rng;

use crate::{DiscreteSampler, Error, Result, StateVector, C64};

/// Unnormalized amplitude lookup `x ↦ c·ψ_x` for a fixed unknown `c`.
pub trait AmplitudeOracle {
    fn amplitude(&self, x: usize) -> C64;
}

/// Table lookup of a state's amplitudes times a fixed constant.
#[derive(Debug, Clone, Copy)]
pub struct ScaledLookup<'a> {
    state: &'a StateVector,
    scale: C64,
}

impl<'a> ScaledLookup<'a> {
    pub fn new(state: &'a StateVector, scale: C64) -> Self {
        Self { state, scale }
    }

    pub fn exact(state: &'a StateVector) -> Self {
        Self::new(state, C64::new(1.0, 0.0))
    }

    /// The hidden proportionality constant.
    pub fn scale(&self) -> C64 {
        self.scale
    }
}

impl AmplitudeOracle for ScaledLookup<'_> {
    fn amplitude(&self, x: usize) -> C64 {
        self.state.amplitude(x) * self.scale
    }
}

/// The same value for every basis state: the uniform superposition, up to scale.
#[derive(Debug, Clone, Copy)]
pub struct ConstantOracle(pub C64);

impl AmplitudeOracle for ConstantOracle {
    fn amplitude(&self, _x: usize) -> C64 {
        self.0
    }
}

impl<F: Fn(usize) -> C64> AmplitudeOracle for F {
    fn amplitude(&self, x: usize) -> C64 {
        self(x)
    }
}

/// Outcome of one shot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub x: usize,
    pub y: usize,
    pub b: i8,
    pub weight: f64,
}

impl TrialRecord {
    /// `A_i = w' b`.
    pub fn a(&self) -> f64 {
        self.weight * f64::from(self.b)
    }

    /// `B_i = w' b²`.
    pub fn b_sq(&self) -> f64 {
        self.weight * f64::from(self.b * self.b)
    }
}

/// Probabilities of `b = +1, -1, 0` when the first ancilla holds the
/// unnormalized state `first` and the second ancilla the state `second`
/// (any scale; it is normalized here). Returned as `[p_plus, p_minus, p_zero]`
/// in units of `‖first‖²`, so they sum to `‖first‖²`.
///
/// If `second` is the zero vector the Bell components vanish and all mass
/// goes to `b = 0`.
pub fn bell_outcomes(first: [C64; 2], second: [C64; 2]) -> [f64; 3] {
    let total = first[0].norm_sqr() + first[1].norm_sqr();
    let r2 = second[0].norm_sqr() + second[1].norm_sqr();
    if r2 == 0.0 {
        return [0.0, 0.0, total];
    }
    // ⟨Φ±| (a0|0⟩+a1|1⟩)(r0|0⟩+r1|1⟩) = (a0 r0 ± a1 r1)/√2
    let p = (first[0] * second[0] + first[1] * second[1]).norm_sqr() / (2.0 * r2);
    let m = (first[0] * second[0] - first[1] * second[1]).norm_sqr() / (2.0 * r2);
    [p, m, (total - p - m).max(0.0)]
}

/// `τ_x / α_x`, zero where `τ_x = 0`; error where only `α_x` vanishes.
fn ratio(tau: C64, alpha: C64, x: usize) -> Result<C64> {
    if tau == C64::default() {
        Ok(C64::default())
    } else if alpha == C64::default() {
        Err(Error::SupportViolation(x))
    } else {
        Ok(tau / alpha)
    }
}

fn check_same_dim(states: &[&StateVector]) -> Result<()> {
    let d = states[0].dim();
    for s in states {
        if s.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: s.dim() });
        }
        if !s.is_normalized() {
            return Err(Error::NotNormalized(s.norm_sqr()));
        }
    }
    Ok(())
}

/// Exact joint distribution of `(x, y, b)` with the normalized weights
/// `w_xy = |τ_x/α_x|² + |τ_y/α_y|²`.
#[derive(Debug, Clone)]
pub struct TrialDistribution {
    dim: usize,
    /// `[p_plus, p_minus, p_zero]` at index `x·d + y`.
    probs: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl TrialDistribution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `p(x, y, b)`.
    pub fn prob(&self, x: usize, y: usize, b: i8) -> f64 {
        let p = &self.probs[x * self.dim + y];
        match b {
            1 => p[0],
            -1 => p[1],
            0 => p[2],
            _ => 0.0,
        }
    }

    pub fn weight(&self, x: usize, y: usize) -> f64 {
        self.weights[x * self.dim + y]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().map(|p| p[0] + p[1] + p[2]).sum()
    }

    /// `E[f(w, b)]` over the exact distribution.
    pub fn expectation(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.probs
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| p[0] * f(w, 1.0) + p[1] * f(w, -1.0) + p[2] * f(w, 0.0))
            .sum()
    }

    /// `⟨w b⟩ / ⟨w b²⟩`, which equals `F(μ, τ)`.
    pub fn fidelity_ratio(&self) -> f64 {
        self.expectation(|w, b| w * b) / self.expectation(|w, b| w * b * b)
    }

    /// Leading-order bias `E[Ã/B̃] - F` of the simple ratio estimator after
    /// `shots` i.i.d. shots: `(F/N)(Var B/⟨B⟩² - Cov(A,B)/(⟨A⟩⟨B⟩))`.
    pub fn ratio_bias(&self, shots: f64) -> f64 {
        let ea = self.expectation(|w, b| w * b);
        let eb = self.expectation(|w, b| w * b * b);
        let ebb = self.expectation(|w, b| (w * b * b).powi(2));
        let eab = self.expectation(|w, b| w * b * w * b * b);
        let f = ea / eb;
        let var_b = ebb - eb * eb;
        let cov = eab - ea * eb;
        f / shots * (var_b / (eb * eb) - cov / (ea * eb))
    }

    /// Leading-order `Var(Ã/B̃)` after `shots` shots, from exact moments:
    /// `E[w²(b - b²F)²] / (N ⟨w b²⟩²)`.
    pub fn ratio_variance(&self, shots: f64) -> f64 {
        let eb = self.expectation(|w, b| w * b * b);
        let f = self.fidelity_ratio();
        self.expectation(|w, b| (w * (b - b * b * f)).powi(2)) / (shots * eb * eb)
    }
}

/// Exact `(x, y, b)` distribution of the general version.
pub fn trial_distribution_exact(mu: &StateVector, tau: &StateVector, alpha: &StateVector) -> Result<TrialDistribution> {
    check_same_dim(&[mu, tau, alpha])?;
    let d = mu.dim();
    let r: Vec<C64> = (0..d)
        .map(|x| ratio(tau.amplitude(x), alpha.amplitude(x), x))
        .collect::<Result<_>>()?;
    let mut probs = Vec::with_capacity(d * d);
    let mut weights = Vec::with_capacity(d * d);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for x in 0..d {
        for y in 0..d {
            let first = [
                mu.amplitude(x) * alpha.amplitude(y) * h,
                mu.amplitude(y) * alpha.amplitude(x) * h,
            ];
            probs.push(bell_outcomes(first, [r[y], r[x]]));
            weights.push(r[x].norm_sqr() + r[y].norm_sqr());
        }
    }
    Ok(TrialDistribution { dim: d, probs, weights })
}

/// Exact distribution of the basic version, indexed by `(x, y = x ⊕ v)`.
///
/// Derived from the basic circuit itself: after the CNOT fan-out and
/// measuring `x`, the first ancilla holds `(μ_x|0⟩ + μ_{x⊕v}|1⟩)/√(2^{n+1})`.
pub fn basic_distribution_exact(mu: &StateVector, tau: &StateVector) -> Result<TrialDistribution> {
    check_same_dim(&[mu, tau])?;
    let d = mu.dim();
    let scale = (2.0 * d as f64).sqrt().recip();
    let mut probs = vec![[0.0; 3]; d * d];
    let mut weights = vec![0.0; d * d];
    for x in 0..d {
        for v in 0..d {
            let y = x ^ v;
            let first = [mu.amplitude(x) * scale, mu.amplitude(y) * scale];
            probs[x * d + y] = bell_outcomes(first, [tau.amplitude(y), tau.amplitude(x)]);
            weights[x * d + y] = d as f64 * (tau.amplitude(x).norm_sqr() + tau.amplitude(y).norm_sqr());
        }
    }
    Ok(TrialDistribution { dim: d, probs, weights })
}

/// How the second index `y` is produced.
enum Auxiliary<'a> {
    /// Basic version: `y = x ⊕ v`, `α'` constant.
    Uniform,
    /// General version with auxiliary state α.
    State {
        alpha: &'a StateVector,
        sampler: DiscreteSampler,
        oracle: Box<dyn AmplitudeOracle + Sync + 'a>,
    },
}

/// A configured verification experiment: test state μ, target τ and
/// (optionally) an auxiliary sampler α.
pub struct Verifier<'a> {
    mu: &'a StateVector,
    tau: &'a StateVector,
    mu_sampler: DiscreteSampler,
    target_oracle: Box<dyn AmplitudeOracle + Sync + 'a>,
    aux: Auxiliary<'a>,
}

impl<'a> Verifier<'a> {
    /// Basic version: uniform `v`, exact target lookup.
    pub fn basic(mu: &'a StateVector, tau: &'a StateVector) -> Result<Self> {
        check_same_dim(&[mu, tau])?;
        Ok(Self {
            mu,
            tau,
            mu_sampler: DiscreteSampler::new(&mu.probabilities())?,
            target_oracle: Box::new(ScaledLookup::exact(tau)),
            aux: Auxiliary::Uniform,
        })
    }

    /// General version with auxiliary state `alpha`.
    pub fn general(mu: &'a StateVector, tau: &'a StateVector, alpha: &'a StateVector) -> Result<Self> {
        check_same_dim(&[mu, tau, alpha])?;
        if let Some(x) = (0..tau.dim()).find(|&x| tau.amplitude(x) != C64::default() && alpha.amplitude(x) == C64::default()) {
            return Err(Error::SupportViolation(x));
        }
        Ok(Self {
            mu,
            tau,
            mu_sampler: DiscreteSampler::new(&mu.probabilities())?,
            target_oracle: Box::new(ScaledLookup::exact(tau)),
            aux: Auxiliary::State {
                alpha,
                sampler: DiscreteSampler::new(&alpha.probabilities())?,
                oracle: Box::new(ScaledLookup::exact(alpha)),
            },
        })
    }

    /// Replaces the target oracle (e.g. with an on-the-fly or rescaled one).
    pub fn with_target_oracle(mut self, oracle: impl AmplitudeOracle + Sync + 'a) -> Self {
        self.target_oracle = Box::new(oracle);
        self
    }

    /// Replaces the auxiliary oracle; ignored by the basic version.
    pub fn with_aux_oracle(mut self, oracle: impl AmplitudeOracle + Sync + 'a) -> Self {
        if let Auxiliary::State { oracle: o, .. } = &mut self.aux {
            *o = Box::new(oracle);
        }
        self
    }

    pub fn is_basic(&self) -> bool {
        matches!(self.aux, Auxiliary::Uniform)
    }

    /// Oracle weight `|τ'_x/α'_x|² + |τ'_y/α'_y|²`.
    fn weight(&self, x: usize, y: usize) -> f64 {
        let (tx, ty) = (self.target_oracle.amplitude(x), self.target_oracle.amplitude(y));
        match &self.aux {
            Auxiliary::Uniform => self.mu.dim() as f64 * (tx.norm_sqr() + ty.norm_sqr()),
            Auxiliary::State { oracle, .. } => {
                let q = |t: C64, a: C64| if t == C64::default() { 0.0 } else { (t / a).norm_sqr() };
                q(tx, oracle.amplitude(x)) + q(ty, oracle.amplitude(y))
            }
        }
    }

    /// Draws one shot.
    pub fn sample_trial<R: Rng + ?Sized>(&self, rng: &mut R) -> TrialRecord {
        let (x, y, first, second) = match &self.aux {
            Auxiliary::Uniform => {
                let v = rng.random_range(0..self.mu.dim());
                let m = self.mu_sampler.sample(rng);
                let (x, y) = if rng.random_bool(0.5) { (m, m ^ v) } else { (m ^ v, m) };
                let first = [self.mu.amplitude(x), self.mu.amplitude(y)];
                (x, y, first, [self.tau.amplitude(y), self.tau.amplitude(x)])
            }
            Auxiliary::State { alpha, sampler, .. } => {
                let m = self.mu_sampler.sample(rng);
                let a = sampler.sample(rng);
                let (x, y) = if rng.random_bool(0.5) { (m, a) } else { (a, m) };
                let first = [
                    self.mu.amplitude(x) * alpha.amplitude(y),
                    self.mu.amplitude(y) * alpha.amplitude(x),
                ];
                // support was checked at construction
                let r = |z: usize| ratio(self.tau.amplitude(z), alpha.amplitude(z), z).unwrap_or_default();
                (x, y, first, [r(y), r(x)])
            }
        };
        let [p_plus, p_minus, p_zero] = bell_outcomes(first, second);
        let total = p_plus + p_minus + p_zero;
        let b = if total > 0.0 {
            let u = rng.random::<f64>() * total;
            if u < p_plus {
                1
            } else if u < p_plus + p_minus {
                -1
            } else {
                0
            }
        } else {
            // zero conditional norm cannot be sampled; reported as b = 0
            0
        };
        TrialRecord { x, y, b, weight: self.weight(x, y) }
    }

    pub fn sample_trials<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> Vec<TrialRecord> {
        (0..shots).map(|_| self.sample_trial(rng)).collect()
    }

    /// Runs `shots` shots and returns the bias-corrected estimate.
    pub fn run<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> Result<EstimateResult> {
        if shots < 2 {
            return Err(Error::InvalidParameter("need at least two shots".into()));
        }
        estimate_bias_corrected(&self.sample_trials(shots, rng))
    }
}

/// Runs the basic version (`alpha = None`) or the general version.
pub fn run_verification<R: Rng + ?Sized>(
    mu: &StateVector,
    tau: &StateVector,
    alpha: Option<&StateVector>,
    shots: usize,
    rng: &mut R,
) -> Result<EstimateResult> {
    match alpha {
        None => Verifier::basic(mu, tau)?.run(shots, rng),
        Some(a) => Verifier::general(mu, tau, a)?.run(shots, rng),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleEstimate {
    pub a_mean: f64,
    pub b_mean: f64,
    pub fidelity: f64,
}

/// `Ã = mean(w'b)`, `B̃ = mean(w'b²)`, `F̃ = Ã/B̃`.
pub fn estimate_simple(trials: &[TrialRecord]) -> Result<SimpleEstimate> {
    if trials.is_empty() {
        return Err(Error::InsufficientData);
    }
    let n = trials.len() as f64;
    let a_mean = trials.iter().map(TrialRecord::a).sum::<f64>() / n;
    let b_mean = trials.iter().map(TrialRecord::b_sq).sum::<f64>() / n;
    if !(b_mean > 0.0) {
        return Err(Error::InsufficientData);
    }
    Ok(SimpleEstimate { a_mean, b_mean, fidelity: a_mean / b_mean })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateStatus {
    Ok,
    /// `Ã = 0`: the correction is undefined and `fidelity_corrected` is the simple ratio.
    CorrectionUndefined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub shots: usize,
    pub a_mean: f64,
    pub b_mean: f64,
    pub fidelity_simple: f64,
    pub fidelity_corrected: f64,
    /// `C̃`, the plug-in estimate of the relative `O(1/N)` bias of `Ã/B̃`.
    pub correction: f64,
    /// Plug-in delta-method variance `F̃²/(N(N-1)) Σ (A_i/Ã - B_i/B̃)²`.
    pub variance: f64,
    pub status: EstimateStatus,
}

impl EstimateResult {
    pub fn infidelity_simple(&self) -> f64 {
        1.0 - self.fidelity_simple
    }

    pub fn infidelity_corrected(&self) -> f64 {
        1.0 - self.fidelity_corrected
    }
}

/// Ratio estimator with its `O(1/N)` bias removed.
///
/// `C̃ = 1/(N(N-1)) Σ_i (B_i/B̃ - A_i/Ã)(B_i/B̃ - 1)` estimates
/// `Var B̃/B² - Cov(Ã,B̃)/(AB)`, and to second order
/// `E[Ã/B̃] = F(1 + Var B̃/B² - Cov(Ã,B̃)/(AB))`. The corrected estimate is
/// therefore `(Ã/B̃)(1 - C̃)`; multiplying by `1 + C̃` would double the bias.
pub fn estimate_bias_corrected(trials: &[TrialRecord]) -> Result<EstimateResult> {
    if trials.len() < 2 {
        return Err(Error::InvalidParameter("bias correction needs at least two trials".into()));
    }
    let simple = estimate_simple(trials)?;
    let n = trials.len() as f64;
    let (a, b) = (simple.a_mean, simple.b_mean);
    let norm = 1.0 / (n * (n - 1.0));
    let spread = trials
        .iter()
        .map(|t| (t.b_sq() / b - t.a() / a).powi(2))
        .sum::<f64>()
        * norm;
    let variance = if a == 0.0 {
        norm * trials.iter().map(|t| (t.a() / b).powi(2)).sum::<f64>()
    } else {
        simple.fidelity.powi(2) * spread
    };
    let (correction, status) = if a == 0.0 {
        (0.0, EstimateStatus::CorrectionUndefined)
    } else {
        let c = trials
            .iter()
            .map(|t| (t.b_sq() / b - t.a() / a) * (t.b_sq() / b - 1.0))
            .sum::<f64>()
            * norm;
        (c, EstimateStatus::Ok)
    };
    Ok(EstimateResult {
        shots: trials.len(),
        a_mean: a,
        b_mean: b,
        fidelity_simple: simple.fidelity,
        fidelity_corrected: simple.fidelity * (1.0 - correction),
        correction,
        variance,
        status,
    })
}

/// Writes trials as CSV rows `x,y,b,w` with a header.
pub fn write_trial_log<W: Write>(mut out: W, trials: &[TrialRecord]) -> io::Result<()> {
    writeln!(out, "x,y,b,w")?;
    for t in trials {
        writeln!(out, "{},{},{},{}", t.x, t.y, t.b, t.weight)?;
    }
    Ok(())
}
