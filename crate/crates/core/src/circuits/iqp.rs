//! Commuting multi-qubit X-rotation circuits on `|0…0⟩`.

use std::f64::consts::TAU;

use rand::Rng;

use crate::{Error, Result, StateVector, C64, MAX_QUBITS};

/// Measurement basis for an IQP output state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Computational,
    /// `H^{⊗n}` applied to the circuit output; every outcome is equally likely.
    Hadamard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    /// Bit `q` set means qubit `q` participates.
    pub mask: usize,
    pub theta: f64,
}

/// `exp(i Σ θ_i X^{A_i}) |0⟩^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IqpCircuit {
    n: usize,
    rotations: Vec<Rotation>,
}

impl IqpCircuit {
    pub fn new(n: usize, rotations: Vec<Rotation>) -> Result<Self> {
        if n == 0 || n > usize::BITS as usize - 1 {
            return Err(Error::InvalidParameter(format!("bad qubit count {n}")));
        }
        if let Some(r) = rotations.iter().find(|r| r.mask >> n != 0) {
            return Err(Error::InvalidParameter(format!(
                "mask {:#b} wider than {n} qubits",
                r.mask
            )));
        }
        Ok(Self { n, rotations })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.rotations.len()
    }

    pub fn rotations(&self) -> &[Rotation] {
        &self.rotations
    }

    /// Rotations with an empty mask contribute only a global phase.
    pub fn zero_mask_count(&self) -> usize {
        self.rotations.iter().filter(|r| r.mask == 0).count()
    }

    /// Rank over GF(2) of the matrix whose columns are the masks.
    pub fn rank(&self) -> usize {
        let mut basis: Vec<usize> = Vec::new();
        for r in &self.rotations {
            let mut v = r.mask;
            for &b in &basis {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis.push(v);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis.len()
    }

    /// Same masks with angles replaced.
    pub fn with_angles(&self, thetas: &[f64]) -> Result<Self> {
        if thetas.len() != self.rotations.len() {
            return Err(Error::DimensionMismatch {
                expected: self.rotations.len(),
                actual: thetas.len(),
            });
        }
        Ok(Self {
            n: self.n,
            rotations: self
                .rotations
                .iter()
                .zip(thetas)
                .map(|(r, &theta)| Rotation { mask: r.mask, theta })
                .collect(),
        })
    }

    /// Random circuit: each mask bit is set with probability `mean_weight / n`,
    /// each angle uniform on `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, mean_weight: f64, rng: &mut R) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidParameter(format!("bad qubit count {n}")));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("depth must be positive".into()));
        }
        if !(mean_weight > 0.0 && mean_weight <= n as f64) {
            return Err(Error::InvalidParameter(format!(
                "mean weight {mean_weight} outside (0, {n}]"
            )));
        }
        let p = mean_weight / n as f64;
        let rotations = (0..m)
            .map(|_| {
                let mask = (0..n).fold(0usize, |acc, q| {
                    if rng.random_bool(p) {
                        acc | (1 << q)
                    } else {
                        acc
                    }
                });
                let theta = rng.random::<f64>() * TAU;
                Rotation { mask, theta }
            })
            .collect();
        Self::new(n, rotations)
    }

    /// Full output state in the requested basis.
    pub fn state(&self, basis: Basis) -> Result<StateVector> {
        if self.n > MAX_QUBITS {
            return Err(Error::TooManyQubits(self.n));
        }
        match basis {
            Basis::Computational => {
                let mut s = StateVector::zero(self.n)?;
                for r in &self.rotations {
                    s.apply_x_rotation(r.mask, r.theta)?;
                }
                Ok(s)
            }
            Basis::Hadamard => {
                let mut s = StateVector::plus(self.n)?;
                for r in &self.rotations {
                    s.apply_z_rotation(r.mask, r.theta)?;
                }
                Ok(s)
            }
        }
    }

    /// Phase `Σ θ_i (-1)^{x·A_i}` of the Hadamard-basis amplitude at `x`.
    pub fn hadamard_phase(&self, x: usize) -> f64 {
        self.rotations
            .iter()
            .map(|r| {
                if (x & r.mask).count_ones() % 2 == 0 {
                    r.theta
                } else {
                    -r.theta
                }
            })
            .sum()
    }

    /// `⟨x|H^{⊗n}|τ⟩ = 2^{-n/2} exp(i Σ θ_i (-1)^{x·A_i})`, in O(m).
    pub fn amplitude_hadamard(&self, x: usize) -> C64 {
        C64::from_polar((0.5f64).powf(self.n as f64 / 2.0), self.hadamard_phase(x))
    }

    /// Computational-basis amplitude by enumerating every `v ∈ {0,1}^m` with
    /// `Av = x`. Exponential in the depth; meant as an independent check.
    pub fn amplitude_computational_bruteforce(&self, x: usize) -> Result<C64> {
        const MAX_ENUM_DEPTH: usize = 24;
        let m = self.rotations.len();
        if m > MAX_ENUM_DEPTH {
            return Err(Error::InvalidParameter(format!(
                "depth {m} too large to enumerate (limit {MAX_ENUM_DEPTH})"
            )));
        }
        let beta: Vec<[C64; 2]> = self
            .rotations
            .iter()
            .map(|r| {
                let (s, c) = r.theta.sin_cos();
                [C64::new(c, 0.0), C64::new(0.0, s)]
            })
            .collect();
        let mut total = C64::default();
        for v in 0usize..(1 << m) {
            let image = (0..m)
                .filter(|i| v >> i & 1 == 1)
                .fold(0usize, |acc, i| acc ^ self.rotations[i].mask);
            if image == x {
                total += (0..m).map(|i| beta[i][v >> i & 1]).product::<C64>();
            }
        }
        Ok(total)
    }
}
