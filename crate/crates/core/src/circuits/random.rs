//! Random two-qubit-unitary circuits.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, GateMatrix, Result, StateVector, C64, MAX_QUBITS};

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedGate {
    pub q1: usize,
    pub q2: usize,
    pub matrix: GateMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomCircuit {
    n: usize,
    gates: Vec<PlacedGate>,
}

/// Column norm below which a Gram–Schmidt draw is thrown away.
const DEGENERATE_NORM: f64 = 1e-8;

/// Random unitary from Gram–Schmidt orthonormalization of the columns of a
/// matrix with i.i.d. standard complex normal entries (Haar distributed).
pub fn random_unitary4<R: Rng + ?Sized>(rng: &mut R) -> GateMatrix {
    loop {
        let mut cols: Vec<[C64; 4]> = (0..4)
            .map(|_| {
                std::array::from_fn(|_| {
                    C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
                })
            })
            .collect();
        if gram_schmidt(&mut cols) {
            let mut m = [[C64::default(); 4]; 4];
            for (j, col) in cols.iter().enumerate() {
                for (i, &v) in col.iter().enumerate() {
                    m[i][j] = v;
                }
            }
            return GateMatrix::Two(m);
        }
    }
}

/// Modified Gram–Schmidt in place; false when a column collapses.
fn gram_schmidt(cols: &mut [[C64; 4]]) -> bool {
    for j in 0..cols.len() {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let proj: C64 = done[k].iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
            for (v, &u) in rest[0].iter_mut().zip(done[k].iter()) {
                *v -= proj * u;
            }
        }
        let norm = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > DEGENERATE_NORM) {
            return false;
        }
        cols[j].iter_mut().for_each(|v| *v /= norm);
    }
    true
}

impl RandomCircuit {
    pub fn new(n: usize, gates: Vec<PlacedGate>) -> Result<Self> {
        if n < 2 || n > MAX_QUBITS {
            return Err(Error::InvalidParameter(format!("random circuits need 2..={MAX_QUBITS} qubits, got {n}")));
        }
        for g in &gates {
            if g.q1 == g.q2 {
                return Err(Error::DuplicateQubit(g.q1));
            }
            if g.q1.max(g.q2) >= n {
                return Err(Error::QubitOutOfRange { index: g.q1.max(g.q2), n_qubits: n });
            }
            if g.matrix.arity() != 2 {
                return Err(Error::GateArity { expected: 2, actual: g.matrix.arity() });
            }
            g.matrix.check_unitary()?;
        }
        Ok(Self { n, gates })
    }

    /// `m` Haar-random gates on uniformly random ordered pairs of distinct qubits.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("random circuits need at least 2 qubits, got {n}")));
        }
        let gates = (0..m)
            .map(|_| {
                let q1 = rng.random_range(0..n);
                let mut q2 = rng.random_range(0..n - 1);
                if q2 >= q1 {
                    q2 += 1;
                }
                PlacedGate { q1, q2, matrix: random_unitary4(rng) }
            })
            .collect();
        Self::new(n, gates)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[PlacedGate] {
        &self.gates
    }

    pub fn simulate(&self) -> Result<StateVector> {
        let mut s = StateVector::zero(self.n)?;
        for g in &self.gates {
            s.apply_two_qubit(g.q1, g.q2, &g.matrix)?;
        }
        Ok(s)
    }
}
