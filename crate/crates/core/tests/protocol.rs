mod common;

use common::*;
use evaqs_core::circuits::RandomCircuit;
use evaqs_core::cost::{variance_small_infidelity, ErrorDecomposition};
use evaqs_core::protocol::{
    basic_distribution_exact, estimate_bias_corrected, run_verification, trial_distribution_exact, ScaledLookup,
    TrialDistribution, Verifier,
};
use evaqs_core::seed::{rng_from_seed, sub_rng};
use evaqs_core::state::fidelity;
use evaqs_core::{StateVector, C64};

fn histogram(dist_dim: usize, trials: &[evaqs_core::protocol::TrialRecord]) -> Vec<u64> {
    let mut counts = vec![0u64; dist_dim * dist_dim * 3];
    for t in trials {
        let k = match t.b {
            1 => 0,
            -1 => 1,
            _ => 2,
        };
        counts[(t.x * dist_dim + t.y) * 3 + k] += 1;
    }
    counts
}

fn flat_probs(dist: &TrialDistribution) -> Vec<f64> {
    let d = dist.dim();
    let mut p = Vec::with_capacity(d * d * 3);
    for x in 0..d {
        for y in 0..d {
            for b in [1, -1, 0] {
                p.push(dist.prob(x, y, b));
            }
        }
    }
    p
}

#[test]
fn exact_distributions_are_normalized() {
    let mut rng = rng_from_seed(30);
    for n in 1..=4 {
        let (mu, tau, alpha) = (random_state(n, &mut rng), random_state(n, &mut rng), random_full_support_state(n, &mut rng));
        let g = trial_distribution_exact(&mu, &tau, &alpha).unwrap();
        assert!((g.total() - 1.0).abs() < 1e-12);
        let b = basic_distribution_exact(&mu, &tau).unwrap();
        assert!((b.total() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn expectation_identity_recovers_fidelity() {
    let mut rng = rng_from_seed(31);
    for k in 0..60 {
        let n = 1 + k % 6;
        let (mu, tau, alpha) = (random_state(n, &mut rng), random_state(n, &mut rng), random_full_support_state(n, &mut rng));
        let f = fidelity(&mu, &tau).unwrap();
        let dist = trial_distribution_exact(&mu, &tau, &alpha).unwrap();
        assert!((dist.fidelity_ratio() - f).abs() < 1e-10, "n={n}");
    }
}

#[test]
fn two_qubit_weighted_sign_sum_is_fidelity() {
    let mut rng = rng_from_seed(32);
    let (mu, tau, alpha) = (random_state(2, &mut rng), random_state(2, &mut rng), random_full_support_state(2, &mut rng));
    let dist = trial_distribution_exact(&mu, &tau, &alpha).unwrap();
    let mut sum = 0.0;
    for x in 0..4 {
        for y in 0..4 {
            sum += dist.weight(x, y) * (dist.prob(x, y, 1) - dist.prob(x, y, -1));
        }
    }
    assert!((sum - fidelity(&mu, &tau).unwrap()).abs() < 1e-10);
}

#[test]
fn orthogonal_states_split_the_weighted_mass() {
    let mut rng = rng_from_seed(33);
    let tau = random_state(3, &mut rng);
    let mu = state_at_infidelity(&tau, 1.0, &mut rng);
    assert!(fidelity(&mu, &tau).unwrap() < 1e-24);
    let alpha = random_full_support_state(3, &mut rng);
    let dist = trial_distribution_exact(&mu, &tau, &alpha).unwrap();
    let plus = dist.expectation(|w, b| if b > 0.0 { w } else { 0.0 });
    let minus = dist.expectation(|w, b| if b < 0.0 { w } else { 0.0 });
    assert!((plus - 0.5).abs() < 1e-12 && (minus - 0.5).abs() < 1e-12, "{plus} {minus}");
}

#[test]
fn identical_states_never_give_minus() {
    let mut rng = rng_from_seed(34);
    let tau = random_state(3, &mut rng);
    let alpha = random_full_support_state(3, &mut rng);
    let dist = trial_distribution_exact(&tau, &tau, &alpha).unwrap();
    assert!(dist.expectation(|_, b| if b < 0.0 { 1.0 } else { 0.0 }) < 1e-15);
    for v in [Verifier::general(&tau, &tau, &alpha).unwrap(), Verifier::basic(&tau, &tau).unwrap()] {
        let trials = v.sample_trials(20_000, &mut rng);
        assert!(trials.iter().all(|t| t.b != -1));
        let r = estimate_bias_corrected(&trials).unwrap();
        assert_eq!(r.fidelity_simple, 1.0);
        assert_eq!(r.fidelity_corrected, 1.0);
    }
}

#[test]
fn basic_matches_general_with_uniform_auxiliary() {
    let mut rng = rng_from_seed(35);
    for n in 1..=5 {
        let (mu, tau) = (random_state(n, &mut rng), random_state(n, &mut rng));
        let plus = StateVector::plus(n).unwrap();
        let g = trial_distribution_exact(&mu, &tau, &plus).unwrap();
        let b = basic_distribution_exact(&mu, &tau).unwrap();
        let d = 1 << n;
        for x in 0..d {
            for y in 0..d {
                assert!((g.weight(x, y) - b.weight(x, y)).abs() < 1e-12 * g.weight(x, y).max(1.0));
                for s in [1, -1, 0] {
                    assert!((g.prob(x, y, s) - b.prob(x, y, s)).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn uniform_states_in_basic_version() {
    let n = 3;
    let u = StateVector::plus(n).unwrap();
    let dist = basic_distribution_exact(&u, &u).unwrap();
    let d = 1 << n;
    for x in 0..d {
        for v in 0..d {
            let y = x ^ v;
            let tot: f64 = [1, -1, 0].iter().map(|&b| dist.prob(x, y, b)).sum();
            assert!((dist.prob(x, y, 1) / tot - 0.5).abs() < 1e-12);
            assert!((dist.prob(x, y, 0) / tot - 0.5).abs() < 1e-12);
        }
        // v = 0 gives y = x with weight 2|τ_x/α_x|²
        assert!((dist.weight(x, x) - 2.0 * u.amplitude(x).norm_sqr() * d as f64).abs() < 1e-12);
    }
}

#[test]
fn general_histogram_matches_exact_distribution() {
    let mut rng = rng_from_seed(36);
    let n = 4;
    let tau = RandomCircuit::random(n, 12, &mut rng).unwrap().simulate().unwrap();
    let mu = state_at_infidelity(&tau, 0.2, &mut rng);
    let alpha = random_full_support_state(n, &mut rng);
    let dist = trial_distribution_exact(&mu, &tau, &alpha).unwrap();
    let trials = Verifier::general(&mu, &tau, &alpha).unwrap().sample_trials(1_000_000, &mut rng);
    let (stat, p) = chi_square_test(&histogram(16, &trials), &flat_probs(&dist));
    assert!(p > 0.001, "chi2={stat} p={p}");
}

#[test]
fn basic_histogram_matches_general_uniform_distribution() {
    let mut rng = rng_from_seed(37);
    let n = 3;
    let tau = random_state(n, &mut rng);
    let mu = state_at_infidelity(&tau, 0.3, &mut rng);
    let dist = trial_distribution_exact(&mu, &tau, &StateVector::plus(n).unwrap()).unwrap();
    let trials = Verifier::basic(&mu, &tau).unwrap().sample_trials(1_000_000, &mut rng);
    let (stat, p) = chi_square_test(&histogram(8, &trials), &flat_probs(&dist));
    assert!(p > 0.001, "chi2={stat} p={p}");
}

#[test]
fn oracle_rescaling_leaves_estimates_unchanged() {
    let mut rng = rng_from_seed(38);
    let n = 4;
    let tau = random_state(n, &mut rng);
    let mu = state_at_infidelity(&tau, 0.1, &mut rng);
    let alpha = random_full_support_state(n, &mut rng);
    let plain = Verifier::general(&mu, &tau, &alpha).unwrap();
    let scaled = Verifier::general(&mu, &tau, &alpha)
        .unwrap()
        .with_target_oracle(ScaledLookup::new(&tau, C64::new(7.0, 0.0)))
        .with_aux_oracle(ScaledLookup::new(&alpha, C64::new(3.0, 0.0)));
    let a = plain.sample_trials(5000, &mut rng_from_seed(1));
    let b = scaled.sample_trials(5000, &mut rng_from_seed(1));
    assert!(a.iter().zip(&b).all(|(s, t)| (s.x, s.y, s.b) == (t.x, t.y, t.b)));
    let (ra, rb) = (estimate_bias_corrected(&a).unwrap(), estimate_bias_corrected(&b).unwrap());
    assert!((ra.fidelity_simple - rb.fidelity_simple).abs() < 1e-13);
    assert!((ra.fidelity_corrected - rb.fidelity_corrected).abs() < 1e-13);

    // a complex global factor, and the basic version with a rescaled target
    let phased = Verifier::basic(&mu, &tau).unwrap().with_target_oracle(ScaledLookup::new(&tau, C64::new(-2.0, 5.0)));
    let a = Verifier::basic(&mu, &tau).unwrap().sample_trials(5000, &mut rng_from_seed(2));
    let b = phased.sample_trials(5000, &mut rng_from_seed(2));
    let (ra, rb) = (estimate_bias_corrected(&a).unwrap(), estimate_bias_corrected(&b).unwrap());
    assert!((ra.fidelity_corrected - rb.fidelity_corrected).abs() < 1e-13);
}

#[test]
fn simple_estimator_bias_matches_delta_method() {
    let n = 4;
    let shots = 50;
    let reps = 100_000;
    let mut rng = rng_from_seed(39);
    let tau = RandomCircuit::random(n, 12, &mut rng).unwrap().simulate().unwrap();
    let mu = state_at_infidelity(&tau, 0.2, &mut rng);
    let f = fidelity(&mu, &tau).unwrap();
    let verifier = Verifier::basic(&mu, &tau).unwrap();
    let (mut simple, mut corrected) = (Vec::with_capacity(reps), Vec::with_capacity(reps));
    for r in 0..reps {
        let res = verifier.run(shots, &mut sub_rng(39, &[r as u64])).unwrap();
        simple.push(res.fidelity_simple);
        corrected.push(res.fidelity_corrected);
    }
    let (ms, vs) = mean_var(&simple);
    let (mc, _) = mean_var(&corrected);
    let predicted = basic_distribution_exact(&mu, &tau).unwrap().ratio_bias(shots as f64);
    let se = (vs / reps as f64).sqrt();
    eprintln!("bias simple {:.3e} corrected {:.3e} predicted {predicted:.3e} se {se:.1e}", ms - f, mc - f);
    assert!((mc - f).abs() < (ms - f).abs());
    assert!((ms - f) / predicted > 0.5 && (ms - f) / predicted < 2.0);
}

#[test]
fn estimates_fall_within_predicted_spread() {
    let n = 8;
    let infidelity = 0.1;
    let shots = 10_000;
    let mut passes = 0;
    for seed in 0..100u64 {
        let mut rng = sub_rng(40, &[seed]);
        let tau = RandomCircuit::random(n, 3 * n, &mut rng).unwrap().simulate().unwrap();
        let mu = state_at_infidelity(&tau, infidelity, &mut rng);
        let dec = ErrorDecomposition::new(&mu, &tau).unwrap();
        let uniform = evaqs_core::cost::uniform(tau.dim());
        let var = variance_small_infidelity(&tau.probabilities(), &dec.sigma_probabilities(), dec.infidelity, &uniform, shots as f64).unwrap();
        let r = run_verification(&mu, &tau, None, shots, &mut rng).unwrap();
        if (r.fidelity_corrected - dec.fidelity).abs() <= 5.0 * var.sqrt() {
            passes += 1;
        }
    }
    assert!(passes >= 99, "{passes}/100 within 5 sigma");
}
