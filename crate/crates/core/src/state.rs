//! Dense statevector with in-place gate kernels.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::{Error, GateMatrix, Result, C64, MAX_QUBITS};

const NORM_TOL: f64 = 1e-12;

/// Pure state of `n_qubits` qubits as `2^n` complex amplitudes.
///
/// Index `x` holds the amplitude of the basis state whose bit `q` is
/// `(x >> q) & 1`; qubit 0 is the least significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
    normalized: bool,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("need at least one qubit".into()))
    } else if n > MAX_QUBITS {
        Err(Error::TooManyQubits(n))
    } else {
        Ok(())
    }
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let d = 1usize << n_qubits;
        if index >= d {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {d}"
            )));
        }
        let mut amplitudes = vec![C64::default(); d];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
            normalized: true,
        })
    }

    /// Uniform superposition `|+⟩^n`.
    pub fn plus(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let d = 1usize << n_qubits;
        let a = C64::new((d as f64).sqrt().recip(), 0.0);
        Ok(Self {
            n_qubits,
            amplitudes: vec![a; d],
            normalized: true,
        })
    }

    /// Wraps raw amplitudes. The normalized flag is set when the norm is 1
    /// within 1e-12; unnormalized vectors are allowed.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let d = amplitudes.len();
        if d < 2 || !d.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(d));
        }
        let n_qubits = d.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        let mut s = Self {
            n_qubits,
            amplitudes,
            normalized: false,
        };
        s.normalized = (s.norm_sqr() - 1.0).abs() <= NORM_TOL;
        Ok(s)
    }

    /// Wraps raw amplitudes and rescales them to unit norm.
    pub fn normalized_from(amplitudes: Vec<C64>) -> Result<Self> {
        let mut s = Self::from_amplitudes(amplitudes)?;
        s.normalize()?;
        Ok(s)
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let inv = norm.recip();
        self.amplitudes.iter_mut().for_each(|a| *a *= inv);
        self.normalized = true;
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, x: usize) -> C64 {
        self.amplitudes[x]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Computational-basis outcome probabilities `|a_x|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    fn check_mask(&self, mask: usize) -> Result<()> {
        if mask >= self.dim() {
            Err(Error::InvalidParameter(format!(
                "mask {mask:#b} has bits beyond {} qubits",
                self.n_qubits
            )))
        } else {
            Ok(())
        }
    }

    pub fn apply_single_qubit(&mut self, qubit: usize, gate: &GateMatrix) -> Result<()> {
        self.check_qubit(qubit)?;
        let GateMatrix::One(m) = gate else {
            return Err(Error::GateArity {
                expected: 1,
                actual: gate.arity(),
            });
        };
        let stride = 1usize << qubit;
        // blocks of 2·stride: lower half has the bit clear, upper half set
        for block in self.amplitudes.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = m[0][0] * x0 + m[0][1] * x1;
                *a1 = m[1][0] * x0 + m[1][1] * x1;
            }
        }
        Ok(())
    }

    /// Applies a 4×4 gate whose local index is `2·bit(q1) + bit(q2)`.
    pub fn apply_two_qubit(&mut self, q1: usize, q2: usize, gate: &GateMatrix) -> Result<()> {
        self.check_qubit(q1)?;
        self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(Error::DuplicateQubit(q1));
        }
        let GateMatrix::Two(m) = gate else {
            return Err(Error::GateArity {
                expected: 2,
                actual: gate.arity(),
            });
        };
        let (b1, b2) = (1usize << q1, 1usize << q2);
        let both = b1 | b2;
        for base in 0..self.dim() {
            if base & both != 0 {
                continue;
            }
            let idx = [base, base | b2, base | b1, base | both];
            let v = idx.map(|i| self.amplitudes[i]);
            for (r, &i) in idx.iter().enumerate() {
                self.amplitudes[i] = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
            }
        }
        Ok(())
    }

    /// Applies `exp(iθ X^A)`: `a'_x = cos θ · a_x + i sin θ · a_{x⊕A}`.
    /// A zero mask is the global phase `e^{iθ}`.
    pub fn apply_x_rotation(&mut self, mask: usize, theta: f64) -> Result<()> {
        self.check_mask(mask)?;
        if mask == 0 {
            let phase = C64::from_polar(1.0, theta);
            self.amplitudes.iter_mut().for_each(|a| *a *= phase);
            return Ok(());
        }
        let (s, c) = theta.sin_cos();
        let is = C64::new(0.0, s);
        // visit each pair once: the partner of x has the top mask bit flipped
        let top = 1usize << (usize::BITS - 1 - mask.leading_zeros());
        for x in 0..self.dim() {
            if x & top != 0 {
                continue;
            }
            let y = x ^ mask;
            let (ax, ay) = (self.amplitudes[x], self.amplitudes[y]);
            self.amplitudes[x] = ax * c + is * ay;
            self.amplitudes[y] = ay * c + is * ax;
        }
        Ok(())
    }

    /// Applies `exp(iθ Z^A)`: `a'_x = e^{iθ(-1)^{x·A}} a_x`.
    pub fn apply_z_rotation(&mut self, mask: usize, theta: f64) -> Result<()> {
        self.check_mask(mask)?;
        let plus = C64::from_polar(1.0, theta);
        let minus = plus.conj();
        for (x, a) in self.amplitudes.iter_mut().enumerate() {
            *a *= if (x & mask).count_ones() % 2 == 0 { plus } else { minus };
        }
        Ok(())
    }

    /// Applies `H` to every qubit (in-place fast Walsh–Hadamard transform).
    pub fn apply_hadamard_all(&mut self) {
        let d = self.dim();
        let mut half = 1;
        while half < d {
            for block in self.amplitudes.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = x + y;
                    *b = x - y;
                }
            }
            half *= 2;
        }
        let scale = FRAC_1_SQRT_2.powi(self.n_qubits as i32);
        self.amplitudes.iter_mut().for_each(|a| *a *= scale);
    }
}

/// `|⟨a|b⟩|²` for normalized states of equal size.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    for s in [a, b] {
        if !s.is_normalized() {
            return Err(Error::NotNormalized(s.norm_sqr()));
        }
    }
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}
