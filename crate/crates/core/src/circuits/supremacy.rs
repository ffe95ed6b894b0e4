//! Grid circuits in the style of random-circuit-sampling supremacy experiments:
//! cycles of random single-qubit gates followed by two-qubit entanglers on a
//! rotating set of nearest-neighbour couplers.
//!
//! Gate set, entangler and coupler pattern are implementation choices kept in
//! this module:
//! - single-qubit gates drawn uniformly from {√X, √Y, √W}, never repeating the
//!   previous cycle's gate on the same qubit;
//! - entangler `fsim(θ, φ)` with nominal θ = π/2, φ = π/6;
//! - coupler layers A, B, C, D = horizontal links from even columns, from odd
//!   columns, vertical links from even rows, from odd rows, used in the
//!   repeating order A B C D C D A B.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

use rand::Rng;

use crate::{Error, GateMatrix, Result, StateVector};

pub const NOMINAL_THETA: f64 = FRAC_PI_2;
pub const NOMINAL_PHI: f64 = FRAC_PI_6;
pub const SUPPORTED_SIZES: [usize; 5] = [4, 9, 12, 16, 20];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingleQubitGate {
    SqrtX,
    SqrtY,
    SqrtW,
}

impl SingleQubitGate {
    pub const ALL: [SingleQubitGate; 3] = [Self::SqrtX, Self::SqrtY, Self::SqrtW];

    pub fn matrix(self) -> GateMatrix {
        match self {
            Self::SqrtX => GateMatrix::sqrt_x(),
            Self::SqrtY => GateMatrix::sqrt_y(),
            Self::SqrtW => GateMatrix::sqrt_w(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::SqrtX => "sx",
            Self::SqrtY => "sy",
            Self::SqrtW => "sw",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupler {
    pub q1: usize,
    pub q2: usize,
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    /// One gate per qubit.
    pub singles: Vec<SingleQubitGate>,
    pub couplers: Vec<Coupler>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupremacyCircuit {
    rows: usize,
    cols: usize,
    cycles: Vec<Cycle>,
}

/// Grid shape with sides differing by at most one.
pub fn grid_shape(n: usize) -> Result<(usize, usize)> {
    match n {
        4 => Ok((2, 2)),
        9 => Ok((3, 3)),
        12 => Ok((3, 4)),
        16 => Ok((4, 4)),
        20 => Ok((4, 5)),
        _ => Err(Error::InvalidParameter(format!(
            "supremacy circuits support n in {SUPPORTED_SIZES:?}, got {n}"
        ))),
    }
}

/// Qubit pairs in coupler layer `layer` (0..4) of a `rows × cols` grid.
pub fn coupler_layer(rows: usize, cols: usize, layer: usize) -> Vec<(usize, usize)> {
    let q = |r: usize, c: usize| r * cols + c;
    let mut out = Vec::new();
    match layer % 4 {
        0 | 1 => {
            let parity = layer % 2;
            for r in 0..rows {
                for c in (parity..cols.saturating_sub(1)).step_by(2) {
                    out.push((q(r, c), q(r, c + 1)));
                }
            }
        }
        _ => {
            let parity = layer % 2;
            for r in (parity..rows.saturating_sub(1)).step_by(2) {
                for c in 0..cols {
                    out.push((q(r, c), q(r + 1, c)));
                }
            }
        }
    }
    out
}

const LAYER_ORDER: [usize; 8] = [0, 1, 2, 3, 2, 3, 0, 1];

impl SupremacyCircuit {
    pub fn new(rows: usize, cols: usize, cycles: Vec<Cycle>) -> Result<Self> {
        let n = rows * cols;
        if n == 0 || n > crate::MAX_QUBITS || rows.abs_diff(cols) > 1 {
            return Err(Error::InvalidParameter(format!("bad grid {rows}x{cols}")));
        }
        for cy in &cycles {
            if cy.singles.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: cy.singles.len() });
            }
            for c in &cy.couplers {
                if c.q1 == c.q2 {
                    return Err(Error::DuplicateQubit(c.q1));
                }
                if c.q1.max(c.q2) >= n {
                    return Err(Error::QubitOutOfRange { index: c.q1.max(c.q2), n_qubits: n });
                }
            }
        }
        Ok(Self { rows, cols, cycles })
    }

    pub fn random<R: Rng + ?Sized>(n: usize, cycles: usize, rng: &mut R) -> Result<Self> {
        let (rows, cols) = grid_shape(n)?;
        let mut previous: Option<Vec<SingleQubitGate>> = None;
        let mut out = Vec::with_capacity(cycles);
        for k in 0..cycles {
            let singles: Vec<SingleQubitGate> = (0..n)
                .map(|q| match &previous {
                    None => SingleQubitGate::ALL[rng.random_range(0..3)],
                    Some(prev) => {
                        let choices: Vec<_> =
                            SingleQubitGate::ALL.into_iter().filter(|g| *g != prev[q]).collect();
                        choices[rng.random_range(0..2)]
                    }
                })
                .collect();
            let couplers = coupler_layer(rows, cols, LAYER_ORDER[k % LAYER_ORDER.len()])
                .into_iter()
                .map(|(q1, q2)| Coupler { q1, q2, theta: NOMINAL_THETA, phi: NOMINAL_PHI })
                .collect();
            previous = Some(singles.clone());
            out.push(Cycle { singles, couplers });
        }
        Self::new(rows, cols, out)
    }

    pub fn n_qubits(&self) -> usize {
        self.rows * self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn single_qubit_op_count(&self) -> usize {
        self.cycles.iter().map(|c| c.singles.len()).sum()
    }

    pub fn two_qubit_op_count(&self) -> usize {
        self.cycles.iter().map(|c| c.couplers.len()).sum()
    }

    pub fn simulate(&self) -> Result<StateVector> {
        self.simulate_with(|| None, |c| GateMatrix::fsim(c.theta, c.phi))
    }

    /// Runs the circuit, inserting `after_single()` (when `Some`) after every
    /// single-qubit gate and using `entangler(coupler)` for each two-qubit gate.
    pub fn simulate_with(
        &self,
        mut after_single: impl FnMut() -> Option<GateMatrix>,
        mut entangler: impl FnMut(&Coupler) -> GateMatrix,
    ) -> Result<StateVector> {
        let mut s = StateVector::zero(self.n_qubits())?;
        let mats = SingleQubitGate::ALL.map(|g| g.matrix());
        for cycle in &self.cycles {
            for (q, g) in cycle.singles.iter().enumerate() {
                let idx = SingleQubitGate::ALL.iter().position(|x| x == g).expect("known gate");
                s.apply_single_qubit(q, &mats[idx])?;
                if let Some(err) = after_single() {
                    s.apply_single_qubit(q, &err)?;
                }
            }
            for c in &cycle.couplers {
                s.apply_two_qubit(c.q1, c.q2, &entangler(c))?;
            }
        }
        Ok(s)
    }
}
