//! Small unitary matrices for one- and two-qubit gates.
//!
//! Two-qubit matrices act on the local basis `|q1 q2⟩` with local index
//! `2·bit(q1) + bit(q2)`, i.e. `U = A ⊗ B` puts `A` on the first qubit argument.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use crate::{Error, Result, C64};

const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix {
    One([[C64; 2]; 2]),
    Two([[C64; 4]; 4]),
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

impl GateMatrix {
    /// Builds a checked single-qubit gate.
    pub fn one(m: [[C64; 2]; 2]) -> Result<Self> {
        let g = GateMatrix::One(m);
        g.check_unitary()?;
        Ok(g)
    }

    /// Builds a checked two-qubit gate.
    pub fn two(m: [[C64; 4]; 4]) -> Result<Self> {
        let g = GateMatrix::Two(m);
        g.check_unitary()?;
        Ok(g)
    }

    /// Builds a gate from a row-major entry list of length 4 or 16.
    pub fn from_row_major(entries: &[C64]) -> Result<Self> {
        match entries.len() {
            4 => Self::one([[entries[0], entries[1]], [entries[2], entries[3]]]),
            16 => {
                let mut m = [[C64::default(); 4]; 4];
                for (k, &e) in entries.iter().enumerate() {
                    m[k / 4][k % 4] = e;
                }
                Self::two(m)
            }
            len => Err(Error::InvalidParameter(format!(
                "gate needs 4 or 16 entries, got {len}"
            ))),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateMatrix::One(_) => 1,
            GateMatrix::Two(_) => 2,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.arity()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        match self {
            GateMatrix::One(m) => m[row][col],
            GateMatrix::Two(m) => m[row][col],
        }
    }

    pub fn row_major(&self) -> Vec<C64> {
        let d = self.dim();
        (0..d * d).map(|k| self.entry(k / d, k % d)).collect()
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let mut s = C64::default();
                for k in 0..d {
                    s += self.entry(k, i).conj() * self.entry(k, j);
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    pub fn check_unitary(&self) -> Result<()> {
        let err = self.unitarity_error();
        if err.is_finite() && err <= UNITARY_TOL {
            Ok(())
        } else {
            Err(Error::NotUnitary(err))
        }
    }

    /// `Tr(self† · other)`.
    pub fn overlap_trace(&self, other: &GateMatrix) -> Result<C64> {
        if self.arity() != other.arity() {
            return Err(Error::GateArity {
                expected: self.arity(),
                actual: other.arity(),
            });
        }
        let d = self.dim();
        let mut t = C64::default();
        for i in 0..d {
            for k in 0..d {
                t += self.entry(k, i).conj() * other.entry(k, i);
            }
        }
        Ok(t)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &GateMatrix) -> Result<GateMatrix> {
        if self.arity() != other.arity() {
            return Err(Error::GateArity {
                expected: self.arity(),
                actual: other.arity(),
            });
        }
        let d = self.dim();
        let mut out = vec![C64::default(); d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = (0..d).map(|k| self.entry(i, k) * other.entry(k, j)).sum();
            }
        }
        Ok(match d {
            2 => GateMatrix::One([[out[0], out[1]], [out[2], out[3]]]),
            _ => {
                let mut m = [[C64::default(); 4]; 4];
                for (k, e) in out.into_iter().enumerate() {
                    m[k / 4][k % 4] = e;
                }
                GateMatrix::Two(m)
            }
        })
    }

    pub fn identity1() -> Self {
        GateMatrix::One([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]])
    }

    pub fn identity2() -> Self {
        let mut m = [[C64::default(); 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = c(1.0, 0.0);
        }
        GateMatrix::Two(m)
    }

    pub fn pauli_x() -> Self {
        GateMatrix::One([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
    }

    pub fn pauli_y() -> Self {
        GateMatrix::One([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
    }

    pub fn pauli_z() -> Self {
        GateMatrix::One([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
    }

    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        GateMatrix::One([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]])
    }

    /// `√X = exp(-iπ/4 X)` up to global phase.
    pub fn sqrt_x() -> Self {
        let h = FRAC_1_SQRT_2;
        GateMatrix::One([[c(h, 0.0), c(0.0, -h)], [c(0.0, -h), c(h, 0.0)]])
    }

    pub fn sqrt_y() -> Self {
        let h = FRAC_1_SQRT_2;
        GateMatrix::One([[c(h, 0.0), c(-h, 0.0)], [c(h, 0.0), c(h, 0.0)]])
    }

    /// Square root of `W = (X + Y)/√2`.
    pub fn sqrt_w() -> Self {
        let h = FRAC_1_SQRT_2;
        let up = C64::from_polar(h, FRAC_PI_4);
        let down = C64::from_polar(h, -FRAC_PI_4);
        GateMatrix::One([[c(h, 0.0), -up], [down, c(h, 0.0)]])
    }

    pub fn swap() -> Self {
        let mut m = [[C64::default(); 4]; 4];
        m[0][0] = c(1.0, 0.0);
        m[1][2] = c(1.0, 0.0);
        m[2][1] = c(1.0, 0.0);
        m[3][3] = c(1.0, 0.0);
        GateMatrix::Two(m)
    }

    /// Two-parameter entangler: iSWAP-like mixing by `theta` in the
    /// single-excitation subspace and a conditional phase `phi` on `|11⟩`.
    pub fn fsim(theta: f64, phi: f64) -> Self {
        let mut m = [[C64::default(); 4]; 4];
        m[0][0] = c(1.0, 0.0);
        m[1][1] = c(theta.cos(), 0.0);
        m[1][2] = c(0.0, -theta.sin());
        m[2][1] = c(0.0, -theta.sin());
        m[2][2] = c(theta.cos(), 0.0);
        m[3][3] = C64::from_polar(1.0, -phi);
        GateMatrix::Two(m)
    }

    /// `exp(i(ex·X + ey·Y + ez·Z))`.
    pub fn pauli_exp(ex: f64, ey: f64, ez: f64) -> Self {
        let r = (ex * ex + ey * ey + ez * ez).sqrt();
        if r == 0.0 {
            return Self::identity1();
        }
        let (s, co) = r.sin_cos();
        let (nx, ny, nz) = (ex / r, ey / r, ez / r);
        // cos r · I + i sin r · (n·σ)
        GateMatrix::One([
            [c(co, s * nz), c(s * ny, s * nx)],
            [c(-s * ny, s * nx), c(co, -s * nz)],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_gates_are_unitary() {
        for g in [
            GateMatrix::identity1(),
            GateMatrix::pauli_x(),
            GateMatrix::pauli_y(),
            GateMatrix::pauli_z(),
            GateMatrix::hadamard(),
            GateMatrix::sqrt_x(),
            GateMatrix::sqrt_y(),
            GateMatrix::sqrt_w(),
            GateMatrix::swap(),
            GateMatrix::identity2(),
            GateMatrix::fsim(1.3, 0.4),
            GateMatrix::pauli_exp(0.1, -0.2, 0.3),
        ] {
            assert!(g.unitarity_error() < 1e-14, "{g:?}");
        }
    }

    #[test]
    fn square_roots_square_to_paulis() {
        let x2 = GateMatrix::sqrt_x().mul(&GateMatrix::sqrt_x()).unwrap();
        let y2 = GateMatrix::sqrt_y().mul(&GateMatrix::sqrt_y()).unwrap();
        let w2 = GateMatrix::sqrt_w().mul(&GateMatrix::sqrt_w()).unwrap();
        let w = {
            let h = FRAC_1_SQRT_2;
            let (x, y) = (GateMatrix::pauli_x(), GateMatrix::pauli_y());
            let e: Vec<C64> = x
                .row_major()
                .iter()
                .zip(y.row_major())
                .map(|(a, b)| (a + b) * h)
                .collect();
            e
        };
        // each squares to the Pauli up to a global phase of -i
        let phase = c(0.0, -1.0);
        for (sq, p) in [
            (x2, GateMatrix::pauli_x().row_major()),
            (y2, GateMatrix::pauli_y().row_major()),
            (w2, w),
        ] {
            for (a, b) in sq.row_major().iter().zip(&p) {
                assert!((a - phase * b).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn pauli_exp_matches_small_angle_x() {
        let eps = 0.3_f64;
        let g = GateMatrix::pauli_exp(eps, 0.0, 0.0);
        assert!((g.entry(0, 0) - c(eps.cos(), 0.0)).norm() < 1e-15);
        assert!((g.entry(0, 1) - c(0.0, eps.sin())).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_unitary() {
        let m = [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(GateMatrix::one(m), Err(Error::NotUnitary(_))));
        assert!(GateMatrix::from_row_major(&[c(1.0, 0.0); 3]).is_err());
    }
}
