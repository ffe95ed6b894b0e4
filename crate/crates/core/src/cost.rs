//! Concentration measures, variance and sample-cost predictors, the optimal
//! auxiliary distribution, and robustness to a mischaracterized auxiliary state.
//!
//! Distributions are plain probability slices; variance predictors take the
//! auxiliary distribution `|α_x|²` only, since phases of α do not matter.

use crate::{Error, Result, StateVector, C64};

/// `Σ_x p_x²`.
pub fn collision_probability(p: &[f64]) -> f64 {
    p.iter().map(|v| v * v).sum()
}

/// Rényi 2-entropy in bits.
pub fn renyi2(p: &[f64]) -> f64 {
    -collision_probability(p).log2()
}

/// `χ²(p, q) = Σ (p_x - q_x)²/q_x`. Infinite, with `support_violation` set,
/// when some `q_x = 0 < p_x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquare {
    pub value: f64,
    pub support_violation: bool,
}

pub fn chi_square(p: &[f64], q: &[f64]) -> Result<ChiSquare> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), actual: q.len() });
    }
    let mut value = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if qi > 0.0 {
            value += (pi - qi).powi(2) / qi;
        } else if pi > 0.0 {
            return Ok(ChiSquare { value: f64::INFINITY, support_violation: true });
        }
    }
    Ok(ChiSquare { value, support_violation: false })
}

pub fn uniform(d: usize) -> Vec<f64> {
    vec![1.0 / d as f64; d]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationReport {
    pub dim: usize,
    pub p_coll: f64,
    /// Effective support size `1/p_coll`.
    pub d_eff: f64,
    pub h2: f64,
    /// `d·p_coll = 2^{n - H₂}`.
    pub d_p_coll: f64,
}

impl ConcentrationReport {
    pub fn of(p: &[f64]) -> Self {
        let p_coll = collision_probability(p);
        Self {
            dim: p.len(),
            p_coll,
            d_eff: 1.0 / p_coll,
            h2: -p_coll.log2(),
            d_p_coll: p.len() as f64 * p_coll,
        }
    }

    pub fn of_state(s: &StateVector) -> Self {
        Self::of(&s.probabilities())
    }
}

/// `μ = e^{iφ}(τ cos θ + σ sin θ)` with `σ ⟂ τ`, `‖σ‖ = 1`.
#[derive(Debug, Clone)]
pub struct ErrorDecomposition {
    /// Phase of `⟨τ|μ⟩`; `None` when the overlap vanishes.
    pub phase: Option<f64>,
    pub theta: f64,
    pub fidelity: f64,
    pub infidelity: f64,
    /// `ε = e^{-iφ}μ - τ` (φ taken as 0 when undefined).
    pub error: Vec<C64>,
    /// Normalized component of μ orthogonal to τ; all zeros when μ ∝ τ.
    pub sigma: Vec<C64>,
}

impl ErrorDecomposition {
    pub fn new(mu: &StateVector, tau: &StateVector) -> Result<Self> {
        let overlap = tau.inner(mu)?;
        let phase = (overlap.norm() > 1e-300).then(|| overlap.arg());
        let rot = C64::from_polar(1.0, -phase.unwrap_or(0.0));
        let aligned: Vec<C64> = mu.amplitudes().iter().map(|m| m * rot).collect();
        let cos = overlap.norm();
        // component orthogonal to τ, computed directly for accuracy near μ = τ
        let orth: Vec<C64> = aligned
            .iter()
            .zip(tau.amplitudes())
            .map(|(m, t)| m - t * cos)
            .collect();
        let sin = orth.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let sigma = if sin > 1e-14 {
            orth.iter().map(|v| v / sin).collect()
        } else {
            vec![C64::default(); mu.dim()]
        };
        let theta = sin.atan2(cos);
        let fidelity = overlap.norm_sqr().min(1.0);
        Ok(Self {
            phase,
            theta,
            fidelity,
            infidelity: 1.0 - fidelity,
            error: aligned.iter().zip(tau.amplitudes()).map(|(m, t)| m - t).collect(),
            sigma,
        })
    }

    /// `e^{iφ}(τ cos θ + σ sin θ)`.
    pub fn reconstruct(&self, tau: &StateVector) -> Vec<C64> {
        let rot = C64::from_polar(1.0, self.phase.unwrap_or(0.0));
        let (s, c) = self.theta.sin_cos();
        tau.amplitudes()
            .iter()
            .zip(&self.sigma)
            .map(|(t, sg)| rot * (t * c + sg * s))
            .collect()
    }

    pub fn sigma_probabilities(&self) -> Vec<f64> {
        self.sigma.iter().map(|v| v.norm_sqr()).collect()
    }
}

fn check_support(tau_p: &[f64], aux_p: &[f64]) -> Result<()> {
    if tau_p.len() != aux_p.len() {
        return Err(Error::DimensionMismatch { expected: tau_p.len(), actual: aux_p.len() });
    }
    match tau_p.iter().zip(aux_p).position(|(&t, &a)| t > 0.0 && a <= 0.0) {
        Some(x) => Err(Error::SupportViolation(x)),
        None => Ok(()),
    }
}

/// Leading-order `Var F̃ ≈ (1/N) Σ_x (|τ_x|²/|α_x|²) Q_x`, with
/// `Q_x = (1+F²)(|μ_x|²+|τ_x|²) - 2F·2Re(τ*_x μ_x ⟨μ|τ⟩)`.
pub fn variance_exact(mu: &StateVector, tau: &StateVector, aux_p: &[f64], shots: f64) -> Result<f64> {
    let tau_p = tau.probabilities();
    check_support(&tau_p, aux_p)?;
    let mu_tau = mu.inner(tau)?;
    let f = mu_tau.norm_sqr();
    let mut total = 0.0;
    for x in 0..tau.dim() {
        if tau_p[x] == 0.0 {
            continue;
        }
        let (m, t) = (mu.amplitude(x), tau.amplitude(x));
        let q = (1.0 + f * f) * (m.norm_sqr() + t.norm_sqr()) - 4.0 * f * (t.conj() * m * mu_tau).re;
        total += tau_p[x] / aux_p[x] * q;
    }
    Ok(total / shots)
}

/// Small-infidelity variance, σ form: `(2I/N) Σ |τ_x|²(|τ_x|²+|σ_x|²)/|α_x|²`.
pub fn variance_small_infidelity(tau_p: &[f64], sigma_p: &[f64], infidelity: f64, aux_p: &[f64], shots: f64) -> Result<f64> {
    check_support(tau_p, aux_p)?;
    if sigma_p.len() != tau_p.len() {
        return Err(Error::DimensionMismatch { expected: tau_p.len(), actual: sigma_p.len() });
    }
    let s: f64 = (0..tau_p.len())
        .filter(|&x| tau_p[x] > 0.0)
        .map(|x| tau_p[x] * (tau_p[x] + sigma_p[x]) / aux_p[x])
        .sum();
    Ok(2.0 * infidelity / shots * s)
}

/// Small-infidelity variance, ε form: `(2/N) Σ (I|τ_x|⁴ + |τ_x|²|ε_x|²)/|α_x|²`.
pub fn variance_small_infidelity_eps(tau_p: &[f64], eps_p: &[f64], infidelity: f64, aux_p: &[f64], shots: f64) -> Result<f64> {
    check_support(tau_p, aux_p)?;
    if eps_p.len() != tau_p.len() {
        return Err(Error::DimensionMismatch { expected: tau_p.len(), actual: eps_p.len() });
    }
    let s: f64 = (0..tau_p.len())
        .filter(|&x| tau_p[x] > 0.0)
        .map(|x| (infidelity * tau_p[x] * tau_p[x] + tau_p[x] * eps_p[x]) / aux_p[x])
        .sum();
    Ok(2.0 / shots * s)
}

/// Heuristic sample count `4I ε⁻² (1 + χ²(|τ|², |α|²))`; infinite if α misses τ's support.
pub fn cost_chi2(infidelity: f64, precision: f64, tau_p: &[f64], aux_p: &[f64]) -> Result<f64> {
    let chi = chi_square(tau_p, aux_p)?;
    Ok(4.0 * infidelity / (precision * precision) * (1.0 + chi.value))
}

/// Heuristic sample count with uniform sampling: `4I ε⁻² d p_coll`.
pub fn cost_uniform(infidelity: f64, precision: f64, tau_p: &[f64]) -> f64 {
    4.0 * infidelity / (precision * precision) * tau_p.len() as f64 * collision_probability(tau_p)
}

/// Variance-minimizing auxiliary distribution `|α_x|² ∝ √(|τ_x|²(|τ_x|²+|σ_x|²))`.
pub fn optimal_alpha(tau_p: &[f64], sigma_p: &[f64]) -> Result<Vec<f64>> {
    if tau_p.len() != sigma_p.len() {
        return Err(Error::DimensionMismatch { expected: tau_p.len(), actual: sigma_p.len() });
    }
    let raw: Vec<f64> = tau_p.iter().zip(sigma_p).map(|(t, s)| (t * (t + s)).sqrt()).collect();
    let total: f64 = raw.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidParameter("target has no support".into()));
    }
    Ok(raw.into_iter().map(|v| v / total).collect())
}

/// Effective target when α is mischaracterized as `alpha_tilde`:
/// `τ̃_x ∝ τ_x α_x / α̃_x`.
pub fn perturbed_target(tau: &StateVector, alpha: &[C64], alpha_tilde: &[C64]) -> Result<StateVector> {
    let d = tau.dim();
    for v in [alpha, alpha_tilde] {
        if v.len() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: v.len() });
        }
    }
    let amps = (0..d)
        .map(|x| {
            let t = tau.amplitude(x);
            if t == C64::default() {
                Ok(C64::default())
            } else if alpha_tilde[x] == C64::default() {
                Err(Error::SupportViolation(x))
            } else {
                Ok(t * alpha[x] / alpha_tilde[x])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    StateVector::normalized_from(amps)
}

/// `δ_x = α_x/α̃_x - 1` on τ's support (zero elsewhere).
pub fn relative_errors(tau: &StateVector, alpha: &[C64], alpha_tilde: &[C64]) -> Result<Vec<C64>> {
    (0..tau.dim())
        .map(|x| {
            if tau.amplitude(x) == C64::default() {
                Ok(C64::default())
            } else if alpha_tilde[x] == C64::default() {
                Err(Error::SupportViolation(x))
            } else {
                Ok(alpha[x] / alpha_tilde[x] - 1.0)
            }
        })
        .collect()
}

/// `δ_rms = (Σ |τ_x|² |α_x/α̃_x - 1|²)^{1/2}`.
pub fn delta_rms(tau: &StateVector, alpha: &[C64], alpha_tilde: &[C64]) -> Result<f64> {
    let delta = relative_errors(tau, alpha, alpha_tilde)?;
    Ok(tau
        .probabilities()
        .iter()
        .zip(&delta)
        .map(|(p, d)| p * d.norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// `2δ/(1-δ)`; `None` when `δ ≥ 1` and the bound is vacuous.
pub fn robustness_bound(delta_rms: f64) -> Option<f64> {
    (delta_rms >= 0.0 && delta_rms < 1.0).then(|| 2.0 * delta_rms / (1.0 - delta_rms))
}

#[derive(Debug, Clone)]
pub struct RobustnessReport {
    pub perturbed_target: StateVector,
    pub delta_rms: f64,
    /// `|τ|²`-weighted mean of `δ_x`.
    pub mean_delta: C64,
    /// `|τ|²`-weighted variance of `δ_x`.
    pub var_delta: f64,
    /// `None` when `δ_rms ≥ 1`.
    pub bound: Option<f64>,
    /// `δ²/(1-δ)²`, the upper bound on `1 - F(τ, τ̃)`.
    pub target_infidelity_bound: Option<f64>,
}

impl RobustnessReport {
    pub fn new(tau: &StateVector, alpha: &[C64], alpha_tilde: &[C64]) -> Result<Self> {
        let delta = relative_errors(tau, alpha, alpha_tilde)?;
        let p = tau.probabilities();
        let mean_delta: C64 = p.iter().zip(&delta).map(|(pi, d)| d * pi).sum();
        let var_delta = p.iter().zip(&delta).map(|(pi, d)| pi * (d - mean_delta).norm_sqr()).sum();
        let drms = p.iter().zip(&delta).map(|(pi, d)| pi * d.norm_sqr()).sum::<f64>().sqrt();
        Ok(Self {
            perturbed_target: perturbed_target(tau, alpha, alpha_tilde)?,
            delta_rms: drms,
            mean_delta,
            var_delta,
            bound: robustness_bound(drms),
            target_infidelity_bound: (drms < 1.0).then(|| (drms / (1.0 - drms)).powi(2)),
        })
    }
}
