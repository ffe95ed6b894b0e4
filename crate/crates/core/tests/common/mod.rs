#![allow(dead_code)]

//! Dense-matrix oracles and statistical helpers shared by the integration tests.

use evaqs_core::seed::SimRng;
use evaqs_core::{StateVector, C64};
use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub type Dense = Vec<Vec<C64>>;

pub fn identity(d: usize) -> Dense {
    (0..d).map(|i| (0..d).map(|j| if i == j { C64::new(1.0, 0.0) } else { C64::default() }).collect()).collect()
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![C64::default(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let d = a.len();
    let mut out = vec![vec![C64::default(); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == C64::default() {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Dense, v: &[C64]) -> Vec<C64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn scale(a: &Dense, s: C64) -> Dense {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn expm(a: &Dense) -> Dense {
    let norm: f64 = a.iter().map(|r| r.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max);
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let small = scale(a, C64::new(0.5f64.powi(squarings), 0.0));
    let d = a.len();
    let mut term = identity(d);
    let mut sum = identity(d);
    for k in 1..30 {
        term = scale(&matmul(&term, &small), C64::new(1.0 / k as f64, 0.0));
        sum = add(&sum, &term);
    }
    for _ in 0..squarings {
        sum = matmul(&sum, &sum);
    }
    sum
}

pub fn pauli_x() -> Dense {
    vec![vec![C64::default(), C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0), C64::default()]]
}

pub fn pauli_z() -> Dense {
    vec![vec![C64::new(1.0, 0.0), C64::default()], vec![C64::default(), C64::new(-1.0, 0.0)]]
}

/// Kronecker product of per-qubit factors; qubit 0 is the least significant
/// bit, so it is the rightmost factor.
pub fn kron_qubits(factors: &[Dense]) -> Dense {
    let mut out = vec![vec![C64::new(1.0, 0.0)]];
    for f in factors.iter().rev() {
        out = kron(&out, f);
    }
    out
}

/// `P^A = ⊗_{q ∈ A} P ⊗_{q ∉ A} I`.
pub fn pauli_string(n: usize, mask: usize, p: &Dense) -> Dense {
    let factors: Vec<Dense> = (0..n).map(|q| if mask >> q & 1 == 1 { p.clone() } else { identity(2) }).collect();
    kron_qubits(&factors)
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn random_amplitudes(d: usize, rng: &mut SimRng) -> Vec<C64> {
    (0..d).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

pub fn random_state(n: usize, rng: &mut SimRng) -> StateVector {
    StateVector::normalized_from(random_amplitudes(1 << n, rng)).unwrap()
}

/// Random state with full support (no amplitude below `floor` in magnitude
/// before normalization).
pub fn random_full_support_state(n: usize, rng: &mut SimRng) -> StateVector {
    let amps = (0..1 << n)
        .map(|_| C64::from_polar(rng.random_range(0.2..1.0), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    StateVector::normalized_from(amps).unwrap()
}

/// State with fidelity exactly `1 - infidelity` to `tau`, built from a random
/// direction orthogonal to it.
pub fn state_at_infidelity(tau: &StateVector, infidelity: f64, rng: &mut SimRng) -> StateVector {
    let raw = random_amplitudes(tau.dim(), rng);
    let overlap: C64 = tau.amplitudes().iter().zip(&raw).map(|(t, r)| t.conj() * r).sum();
    let orth: Vec<C64> = raw.iter().zip(tau.amplitudes()).map(|(r, t)| r - t * overlap).collect();
    let norm = orth.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let (c, s) = ((1.0 - infidelity).sqrt(), infidelity.sqrt());
    let amps = tau.amplitudes().iter().zip(&orth).map(|(t, o)| t * c + o * (s / norm)).collect();
    StateVector::normalized_from(amps).unwrap()
}

/// Pearson chi-square statistic and its upper-tail p-value, pooling cells
/// whose expected count is below 5 into one cell.
pub fn chi_square_test(observed: &[u64], expected_prob: &[f64]) -> (f64, f64) {
    let total: u64 = observed.iter().sum();
    let total = total as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pooled_obs, mut pooled_exp) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(expected_prob) {
        let e = p * total;
        if e < 5.0 {
            pooled_obs += o as f64;
            pooled_exp += e;
            continue;
        }
        stat += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    if pooled_exp >= 5.0 {
        stat += (pooled_obs - pooled_exp).powi(2) / pooled_exp;
        cells += 1;
    } else {
        assert!(pooled_obs <= 5.0 + 10.0 * pooled_exp.sqrt(), "too many draws in near-empty cells: {pooled_obs}");
    }
    let dof = (cells - 1) as f64;
    let p = 1.0 - ChiSquared::new(dof).unwrap().cdf(stat);
    (stat, p)
}

pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}
