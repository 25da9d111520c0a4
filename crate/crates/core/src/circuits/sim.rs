//! Dense simulation of circuits.

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::matrix::{pow3, trit_index, trits, Matrix};
use crate::phase::{int, omega_pow};

fn omega_int(k: i64) -> Complex64 {
    omega_pow(&int(k.rem_euclid(3)))
}

fn perm(f: impl Fn(usize) -> usize) -> Matrix {
    Matrix::permutation(3, f)
}

/// The `3^k × 3^k` unitary of a gate kind, first wire most significant.
pub fn gate_matrix(kind: &GateKind) -> Matrix {
    match kind {
        GateKind::Xp1 => perm(|t| (t + 1) % 3),
        GateKind::Xm1 => perm(|t| (t + 2) % 3),
        GateKind::X01 => perm(|t| [1, 0, 2][t]),
        GateKind::X12 => perm(|t| [0, 2, 1][t]),
        GateKind::X02 => perm(|t| [2, 1, 0][t]),
        GateKind::H | GateKind::Hdag => {
            let s = if *kind == GateKind::H { 1 } else { -1 };
            Matrix::from_fn(3, 3, |r, c| omega_int(s * (r * c) as i64) / 3f64.sqrt())
        }
        GateKind::CX => Matrix::permutation(9, |i| {
            let (c, t) = (i / 3, i % 3);
            c * 3 + (c + t) % 3
        }),
        GateKind::CXdag => Matrix::permutation(9, |i| {
            let (c, t) = (i / 3, i % 3);
            c * 3 + (t + 3 - c) % 3
        }),
        GateKind::Zphase(p) => Matrix::diagonal(&p.diagonal()),
        GateKind::Controlled { level, inner } => {
            let u = gate_matrix(inner);
            let d = u.rows();
            Matrix::from_fn(3 * d, 3 * d, |r, c| {
                let (cr, rr, cc, rc) = (r / d, r % d, c / d, c % d);
                if cr != cc {
                    Complex64::zero()
                } else if cr == *level as usize {
                    u.get(rr, rc)
                } else if rr == rc {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::zero()
                }
            })
        }
    }
}

/// Apply `gate` to every column of `m`, an operator on `n` qutrits.
pub fn apply_gate(m: &Matrix, gate: &Gate, n: usize) -> Result<Matrix> {
    if m.rows() != pow3(n) {
        return Err(Error::Shape(format!("{} rows is not 3^{n}", m.rows())));
    }
    if let Some(w) = gate.wires.iter().find(|&&w| w >= n) {
        return Err(Error::Arity(format!("gate {gate} uses wire {w} of {n}")));
    }
    let g = gate_matrix(&gate.kind);
    let k = gate.wires.len();
    let rows = m.rows();
    // Split each row index into the gate's local index and the other trits.
    let local: Vec<usize> = (0..rows)
        .map(|i| {
            let t = trits(i, n);
            trit_index(&gate.wires.iter().map(|&w| t[w]).collect::<Vec<_>>())
        })
        .collect();
    let with_local = |i: usize, j: usize| -> usize {
        let mut t = trits(i, n);
        for (pos, v) in gate.wires.iter().zip(trits(j, k)) {
            t[*pos] = v;
        }
        trit_index(&t)
    };
    let sibling: Vec<Vec<usize>> = (0..rows).map(|i| (0..pow3(k)).map(|j| with_local(i, j)).collect()).collect();
    let cols: Vec<Vec<Complex64>> = (0..m.cols())
        .into_par_iter()
        .map(|c| {
            (0..rows)
                .map(|r| {
                    let lr = local[r];
                    sibling[r]
                        .iter()
                        .enumerate()
                        .map(|(j, &src)| g.get(lr, j) * m.get(src, c))
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(Matrix::from_fn(rows, m.cols(), |r, c| cols[c][r]))
}

/// The unitary of the whole circuit.
pub fn circuit_matrix(c: &Circuit) -> Result<Matrix> {
    c.validate()?;
    let mut m = Matrix::identity(pow3(c.n_wires));
    for g in &c.gates {
        m = apply_gate(&m, g, c.n_wires)?;
    }
    Ok(m)
}
