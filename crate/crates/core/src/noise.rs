//! Error models that turn an ideal target state into a noisy test state.
//!
//! - [`perturb_iqp`]: random angle errors on an IQP circuit, globally scaled to
//!   hit a prescribed infidelity.
//! - [`apply_output_noise`]: multiplicative plus additive Gaussian noise mixed
//!   directly into the output state.
//! - [`perturb_supremacy`]: coherent per-gate errors on a supremacy circuit.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::circuits::{Basis, IqpCircuit, SupremacyCircuit, NOMINAL_PHI, NOMINAL_THETA};
use crate::state::fidelity;
use crate::{Error, GateMatrix, Result, StateVector, C64};

/// Mean process infidelity targeted per single-qubit operation (0.02%).
pub const SINGLE_QUBIT_PROCESS_INFIDELITY: f64 = 2e-4;
/// Mean process infidelity targeted per two-qubit operation (0.2%).
pub const TWO_QUBIT_PROCESS_INFIDELITY: f64 = 2e-3;

const MAX_REDRAWS: usize = 32;

fn check_infidelity(i: f64) -> Result<()> {
    if i > 0.0 && i < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("target infidelity {i} outside (0, 1)")))
    }
}

/// Angle errors: perturbed angles are `θ_i + scale·δ_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleNoise {
    pub deltas: Vec<f64>,
    pub scale: f64,
}

#[derive(Debug, Clone)]
pub struct AngleCalibration {
    pub state: StateVector,
    pub noise: AngleNoise,
    pub noisy_circuit: IqpCircuit,
    pub achieved_infidelity: f64,
    /// Number of δ draws needed (1 unless a draw failed to bracket the target).
    pub attempts: usize,
}

/// Draws standard-normal angle errors once and bisects on their global scale
/// until the noisy state has infidelity `target` (to 1e-9) with the ideal one.
///
/// Infidelity is basis independent, so the search runs on the Hadamard-basis
/// phases `Σ δ_i (-1)^{x·A_i}` in O(d) per step.
pub fn perturb_iqp<R: Rng + ?Sized>(
    circuit: &IqpCircuit,
    target: f64,
    basis: Basis,
    rng: &mut R,
) -> Result<AngleCalibration> {
    check_infidelity(target)?;
    let n = circuit.n_qubits();
    let d = 1usize << n;
    let ideal_phase: Vec<f64> = (0..d).map(|x| circuit.hadamard_phase(x)).collect();

    for attempt in 1..=MAX_REDRAWS {
        let deltas: Vec<f64> = (0..circuit.depth()).map(|_| rng.sample(StandardNormal)).collect();
        let direction: Vec<f64> = (0..d)
            .map(|x| {
                circuit
                    .rotations()
                    .iter()
                    .zip(&deltas)
                    .map(|(r, dl)| if (x & r.mask).count_ones() % 2 == 0 { *dl } else { -dl })
                    .sum()
            })
            .collect();
        let Some(scale) = solve_scale(&direction, target) else {
            continue;
        };

        let noisy = circuit.with_angles(
            &circuit
                .rotations()
                .iter()
                .zip(&deltas)
                .map(|(r, dl)| r.theta + scale * dl)
                .collect::<Vec<_>>(),
        )?;
        let amp = (d as f64).sqrt().recip();
        let mut state = StateVector::from_amplitudes(
            ideal_phase
                .iter()
                .zip(&direction)
                .map(|(p, g)| C64::from_polar(amp, p + scale * g))
                .collect(),
        )?;
        if basis == Basis::Computational {
            state.apply_hadamard_all();
        }
        let ideal = circuit.state(basis)?;
        let achieved = 1.0 - fidelity(&state, &ideal)?;
        return Ok(AngleCalibration {
            state,
            noise: AngleNoise { deltas, scale },
            noisy_circuit: noisy,
            achieved_infidelity: achieved,
            attempts: attempt,
        });
    }
    Err(Error::Calibration(format!(
        "no angle-error draw reached infidelity {target} after {MAX_REDRAWS} attempts"
    )))
}

/// `1 - |mean_x exp(i s g_x)|²`.
fn phase_infidelity(direction: &[f64], s: f64) -> f64 {
    let sum: C64 = direction.iter().map(|g| C64::from_polar(1.0, s * g)).sum();
    1.0 - (sum / direction.len() as f64).norm_sqr()
}

/// Smallest-bracket root of `phase_infidelity(s) = target`, growing the
/// bracket outward from the small-s quadratic estimate.
fn solve_scale(direction: &[f64], target: f64) -> Option<f64> {
    let mean = direction.iter().sum::<f64>() / direction.len() as f64;
    let var = direction.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / direction.len() as f64;
    if !(var > 1e-24) {
        return None;
    }
    let mut lo = 0.0;
    let mut hi = 0.5 * (target / var).sqrt();
    let mut steps = 0;
    while phase_infidelity(direction, hi) < target {
        lo = hi;
        hi *= 1.25;
        steps += 1;
        if steps > 400 {
            return None;
        }
    }
    // invariant: I(lo) < target <= I(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let i_mid = phase_infidelity(direction, mid);
        if (i_mid - target).abs() <= 1e-12 {
            return Some(mid);
        }
        if i_mid < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let s = 0.5 * (lo + hi);
    ((phase_infidelity(direction, s) - target).abs() <= 1e-9).then_some(s)
}

/// Output-state error `μ ∝ √(1-η) τ + √η ε` with
/// `ε_x ∝ ξ'_x τ_x + λ ξ''_x`, `ξ', ξ''` standard complex Gaussians.
#[derive(Debug, Clone)]
pub struct OutputNoise {
    pub eta: f64,
    /// `λ = mean_x |τ_x|`: equal multiplicative and additive spread at the mean amplitude.
    pub additive_scale: f64,
    /// Normalized error direction (not orthogonalized against τ).
    pub error_state: StateVector,
    pub attempts: usize,
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let half = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid std-dev");
    C64::new(half.sample(rng), half.sample(rng))
}

/// Mixes noise into `tau` so that `F(μ, τ) = 1 - target` within 1e-9.
///
/// `η` is found by bisection on the fidelity of the renormalized mixture
/// `|√(1-η) + √η c|² / (1 + 2√(η(1-η)) Re c)` with `c = ⟨τ|ε⟩`.
pub fn apply_output_noise<R: Rng + ?Sized>(
    tau: &StateVector,
    target: f64,
    rng: &mut R,
) -> Result<(StateVector, OutputNoise)> {
    check_infidelity(target)?;
    let lambda = tau.amplitudes().iter().map(|a| a.norm()).sum::<f64>() / tau.dim() as f64;
    let want = 1.0 - target;
    for attempt in 1..=MAX_REDRAWS {
        let raw: Vec<C64> = tau
            .amplitudes()
            .iter()
            .map(|t| {
                let mult = complex_gaussian(rng);
                let add = complex_gaussian(rng);
                mult * t + add * lambda
            })
            .collect();
        let eps = StateVector::normalized_from(raw)?;
        let c = tau.inner(&eps)?;
        let fid = |eta: f64| {
            let (a, b) = ((1.0 - eta).sqrt(), eta.sqrt());
            (C64::new(a, 0.0) + c * b).norm_sqr() / (1.0 + 2.0 * a * b * c.re)
        };
        if fid(1.0) >= want {
            continue;
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if fid(mid) > want {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-17 {
                break;
            }
        }
        let eta = 0.5 * (lo + hi);
        let (a, b) = ((1.0 - eta).sqrt(), eta.sqrt());
        let mu = StateVector::normalized_from(
            tau.amplitudes()
                .iter()
                .zip(eps.amplitudes())
                .map(|(t, e)| t * a + e * b)
                .collect(),
        )?;
        if (fidelity(&mu, tau)? - want).abs() > 1e-9 {
            continue;
        }
        return Ok((
            mu,
            OutputNoise {
                eta,
                additive_scale: lambda,
                error_state: eps,
                attempts: attempt,
            },
        ));
    }
    Err(Error::Calibration(format!(
        "output noise could not reach infidelity {target} after {MAX_REDRAWS} draws"
    )))
}

/// Per-gate coherent error strengths for supremacy circuits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateNoise {
    /// Std-dev of each of `ε_x, ε_y, ε_z` in `exp(i(ε_x X + ε_y Y + ε_z Z))`.
    pub sigma1: f64,
    /// Std-dev of the perturbations of the entangler angles θ and φ.
    pub sigma2: f64,
}

impl GateNoise {
    pub fn new(sigma1: f64, sigma2: f64) -> Result<Self> {
        if sigma1 >= 0.0 && sigma2 >= 0.0 {
            Ok(Self { sigma1, sigma2 })
        } else {
            Err(Error::InvalidParameter("noise strengths must be nonnegative".into()))
        }
    }
}

/// Simulates `circuit` with an error unitary after every single-qubit gate
/// and jittered entangler angles.
pub fn perturb_supremacy<R: Rng + ?Sized>(
    circuit: &SupremacyCircuit,
    noise: GateNoise,
    rng: &mut R,
) -> Result<StateVector> {
    let n1 = Normal::new(0.0, noise.sigma1).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let n2 = Normal::new(0.0, noise.sigma2).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    // one generator shared by both closures
    let rng = std::cell::RefCell::new(rng);
    circuit.simulate_with(
        || {
            let mut r = rng.borrow_mut();
            let (ex, ey, ez) = (n1.sample(&mut *r), n1.sample(&mut *r), n1.sample(&mut *r));
            Some(GateMatrix::pauli_exp(ex, ey, ez))
        },
        |c| {
            let mut r = rng.borrow_mut();
            let dt = n2.sample(&mut *r);
            let dp = n2.sample(&mut *r);
            GateMatrix::fsim(c.theta + dt, c.phi + dp)
        },
    )
}

/// `1 - |Tr(U_ideal† U_noisy)|² / d²` with `d = 2^arity`.
pub fn process_infidelity(ideal: &GateMatrix, noisy: &GateMatrix) -> Result<f64> {
    ideal.check_unitary()?;
    noisy.check_unitary()?;
    let d = ideal.dim() as f64;
    Ok((1.0 - ideal.overlap_trace(noisy)?.norm_sqr() / (d * d)).max(0.0))
}

/// Monte Carlo mean process infidelity of the single-qubit error at strength `sigma`.
pub fn mean_single_qubit_infidelity(sigma: f64, draws: &[[f64; 3]]) -> f64 {
    let id = GateMatrix::identity1();
    draws
        .iter()
        .map(|z| process_infidelity(&id, &GateMatrix::pauli_exp(sigma * z[0], sigma * z[1], sigma * z[2])).expect("unitary"))
        .sum::<f64>()
        / draws.len() as f64
}

/// Monte Carlo mean process infidelity of the jittered nominal entangler.
pub fn mean_two_qubit_infidelity(sigma: f64, draws: &[[f64; 2]]) -> f64 {
    let ideal = GateMatrix::fsim(NOMINAL_THETA, NOMINAL_PHI);
    draws
        .iter()
        .map(|z| {
            let noisy = GateMatrix::fsim(NOMINAL_THETA + sigma * z[0], NOMINAL_PHI + sigma * z[1]);
            process_infidelity(&ideal, &noisy).expect("unitary")
        })
        .sum::<f64>()
        / draws.len() as f64
}

fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let mut hi = 1e-3;
    while f(hi) < target {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Chooses σ₁, σ₂ so the Monte Carlo mean process infidelity over `samples`
/// error draws equals the given per-operation targets.
pub fn calibrate_gate_noise<R: Rng + ?Sized>(
    single_target: f64,
    two_target: f64,
    samples: usize,
    rng: &mut R,
) -> Result<GateNoise> {
    if samples == 0 || !(single_target > 0.0 && single_target < 0.5 && two_target > 0.0 && two_target < 0.5) {
        return Err(Error::InvalidParameter("targets must lie in (0, 0.5) with samples > 0".into()));
    }
    let d1: Vec<[f64; 3]> = (0..samples)
        .map(|_| std::array::from_fn(|_| rng.sample(StandardNormal)))
        .collect();
    let d2: Vec<[f64; 2]> = (0..samples)
        .map(|_| std::array::from_fn(|_| rng.sample(StandardNormal)))
        .collect();
    let sigma1 = bisect_increasing(|s| mean_single_qubit_infidelity(s, &d1), single_target);
    let sigma2 = bisect_increasing(|s| mean_two_qubit_infidelity(s, &d2), two_target);
    GateNoise::new(sigma1, sigma2)
}
