//! Circuit families and their plain-text serialization.
//!
//! Text format, one item per line; blank lines and `#` comments are ignored.
//! The first line names the family:
//!
//! ```text
//! iqp <n>
//! rot <mask> <theta>                 # one per rotation
//!
//! random <n>
//! gate <q1> <q2> <re> <im> x16       # 4x4 matrix, row-major
//!
//! supremacy <rows> <cols>
//! cycle                              # starts a cycle
//! single <g_0> ... <g_{n-1}>         # sx | sy | sw, one per qubit
//! fsim <q1> <q2> <theta> <phi>       # zero or more per cycle
//! ```
//!
//! Masks are bitstrings written qubit 0 first (`"100"` is qubit 0 only).
//! Angles are radians. Floats are written in shortest round-trip form, so
//! `parse(format(c)) == c` exactly.

mod iqp;
mod random;
mod supremacy;

pub use iqp::{Basis, IqpCircuit, Rotation};
pub use random::{random_unitary4, PlacedGate, RandomCircuit};
pub use supremacy::{
    coupler_layer, grid_shape, Coupler, Cycle, SingleQubitGate, SupremacyCircuit, NOMINAL_PHI,
    NOMINAL_THETA, SUPPORTED_SIZES,
};

use std::fmt::Write as _;

use crate::{Error, GateMatrix, Result, StateVector, C64};

/// Any of the three circuit families.
#[derive(Debug, Clone, PartialEq)]
pub enum Circuit {
    Iqp(IqpCircuit),
    Random(RandomCircuit),
    Supremacy(SupremacyCircuit),
}

impl Circuit {
    pub fn n_qubits(&self) -> usize {
        match self {
            Circuit::Iqp(c) => c.n_qubits(),
            Circuit::Random(c) => c.n_qubits(),
            Circuit::Supremacy(c) => c.n_qubits(),
        }
    }

    /// Ideal output state. `basis` only affects IQP circuits.
    pub fn simulate(&self, basis: Basis) -> Result<StateVector> {
        match self {
            Circuit::Iqp(c) => c.state(basis),
            Circuit::Random(c) => c.simulate(),
            Circuit::Supremacy(c) => c.simulate(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Circuit::Iqp(c) => {
                let _ = writeln!(out, "iqp {}", c.n_qubits());
                for r in c.rotations() {
                    let _ = writeln!(out, "rot {} {}", format_bitstring(r.mask, c.n_qubits()), r.theta);
                }
            }
            Circuit::Random(c) => {
                let _ = writeln!(out, "random {}", c.n_qubits());
                for g in c.gates() {
                    let _ = write!(out, "gate {} {}", g.q1, g.q2);
                    for e in g.matrix.row_major() {
                        let _ = write!(out, " {} {}", e.re, e.im);
                    }
                    out.push('\n');
                }
            }
            Circuit::Supremacy(c) => {
                let _ = writeln!(out, "supremacy {} {}", c.rows(), c.cols());
                for cy in c.cycles() {
                    out.push_str("cycle\nsingle");
                    for g in &cy.singles {
                        let _ = write!(out, " {}", g.name());
                    }
                    out.push('\n');
                    for cp in &cy.couplers {
                        let _ = writeln!(out, "fsim {} {} {} {}", cp.q1, cp.q2, cp.theta, cp.phi);
                    }
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty circuit".into() })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let num = |line: usize, tok: Option<&&str>| -> Result<usize> {
            tok.ok_or_else(|| perr(line, "missing integer".into()))?
                .parse()
                .map_err(|e| perr(line, format!("{e}")))
        };
        let float = |line: usize, tok: &str| -> Result<f64> { tok.parse().map_err(|e| perr(line, format!("{e}: {tok:?}"))) };

        match head[0] {
            "iqp" => {
                let n = num(hl, head.get(1))?;
                let mut rotations = Vec::new();
                for (ln, l) in lines {
                    let t: Vec<&str> = l.split_whitespace().collect();
                    if t.len() != 3 || t[0] != "rot" {
                        return Err(perr(ln, format!("expected `rot <mask> <theta>`, got {l:?}")));
                    }
                    let mask = parse_bitstring(t[1], n).map_err(|m| perr(ln, m))?;
                    rotations.push(Rotation { mask, theta: float(ln, t[2])? });
                }
                Ok(Circuit::Iqp(IqpCircuit::new(n, rotations)?))
            }
            "random" => {
                let n = num(hl, head.get(1))?;
                let mut gates = Vec::new();
                for (ln, l) in lines {
                    let t: Vec<&str> = l.split_whitespace().collect();
                    if t.len() != 35 || t[0] != "gate" {
                        return Err(perr(ln, "expected `gate q1 q2` and 32 numbers".into()));
                    }
                    let (q1, q2) = (num(ln, t.get(1))?, num(ln, t.get(2))?);
                    let entries = t[3..]
                        .chunks(2)
                        .map(|p| Ok(C64::new(float(ln, p[0])?, float(ln, p[1])?)))
                        .collect::<Result<Vec<_>>>()?;
                    let matrix = GateMatrix::from_row_major(&entries)?;
                    gates.push(PlacedGate { q1, q2, matrix });
                }
                Ok(Circuit::Random(RandomCircuit::new(n, gates)?))
            }
            "supremacy" => {
                let (rows, cols) = (num(hl, head.get(1))?, num(hl, head.get(2))?);
                let mut cycles: Vec<Cycle> = Vec::new();
                for (ln, l) in lines {
                    let t: Vec<&str> = l.split_whitespace().collect();
                    match t[0] {
                        "cycle" => cycles.push(Cycle { singles: Vec::new(), couplers: Vec::new() }),
                        "single" => {
                            let cy = cycles.last_mut().ok_or_else(|| perr(ln, "`single` before `cycle`".into()))?;
                            cy.singles = t[1..]
                                .iter()
                                .map(|s| SingleQubitGate::from_name(s).ok_or_else(|| perr(ln, format!("unknown gate {s:?}"))))
                                .collect::<Result<_>>()?;
                        }
                        "fsim" if t.len() == 5 => {
                            let cy = cycles.last_mut().ok_or_else(|| perr(ln, "`fsim` before `cycle`".into()))?;
                            cy.couplers.push(Coupler {
                                q1: num(ln, t.get(1))?,
                                q2: num(ln, t.get(2))?,
                                theta: float(ln, t[3])?,
                                phi: float(ln, t[4])?,
                            });
                        }
                        _ => return Err(perr(ln, format!("unexpected line {l:?}"))),
                    }
                }
                Ok(Circuit::Supremacy(SupremacyCircuit::new(rows, cols, cycles)?))
            }
            other => Err(perr(hl, format!("unknown circuit family {other:?}"))),
        }
    }
}

/// Bitstring with qubit 0 first.
pub fn format_bitstring(mask: usize, n: usize) -> String {
    (0..n).map(|q| if mask >> q & 1 == 1 { '1' } else { '0' }).collect()
}

pub fn parse_bitstring(s: &str, n: usize) -> std::result::Result<usize, String> {
    if s.len() != n {
        return Err(format!("bitstring {s:?} should have {n} characters"));
    }
    s.chars().enumerate().try_fold(0usize, |acc, (q, ch)| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << q),
        _ => Err(format!("bad character {ch:?} in bitstring")),
    })
}
