//! Brute-force reference unitaries, built by enumerating basis states.
//!
//! Nothing here goes through diagram evaluation or circuit simulation, so
//! these targets are an independent check on both.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{pow3, scalar_equiv_tol, trit_index, trits, EquivMode, Matrix};
use crate::phase::{int, omega_pow, Phase, Rational};

/// A diagonal unitary `|x⟩ ↦ ω^{f(x)}|x⟩` on `n` qutrits, tabulated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSpec {
    pub name: String,
    pub n: usize,
    /// `f` at every basis state, indexed like the matrix rows.
    pub exponents: Vec<Rational>,
}

impl DiagonalSpec {
    pub fn from_fn(name: impl Into<String>, n: usize, f: impl Fn(&[usize]) -> Rational) -> Self {
        let exponents = (0..pow3(n)).map(|i| f(&trits(i, n))).collect();
        DiagonalSpec { name: name.into(), n, exponents }
    }

    pub fn exponent(&self, x: &[usize]) -> &Rational {
        &self.exponents[trit_index(x)]
    }
}

pub fn diag_matrix(spec: &DiagonalSpec) -> Matrix {
    let entries: Vec<Complex64> = spec.exponents.iter().map(omega_pow).collect();
    Matrix::diagonal(&entries)
}

fn label(p: &Phase, t: usize) -> Rational {
    match t {
        0 => Rational::zero(),
        1 => p.a().clone(),
        _ => p.b().clone(),
    }
}

/// `α · (x₁⋯xₙ mod 3)`.
pub fn multiplier_spec(n: usize, alpha: &Rational) -> DiagonalSpec {
    DiagonalSpec::from_fn(format!("multiplier(n={n})"), n, |x| {
        alpha * int((x.iter().product::<usize>() % 3) as i64)
    })
}

/// `f(Σxᵢ mod 3)` with `f = (0, α, β)`.
pub fn gadget_spec(n: usize, alpha: &Rational, beta: &Rational) -> DiagonalSpec {
    let p = Phase::new(alpha.clone(), beta.clone());
    DiagonalSpec::from_fn(format!("gadget(n={n})"), n, |x| label(&p, x.iter().sum::<usize>() % 3))
}

/// `α · ((y + x²)² mod 3)` on two qutrits.
pub fn square_pair_spec(alpha: &Rational) -> DiagonalSpec {
    DiagonalSpec::from_fn("square-pair", 2, |x| {
        let v = (x[1] + x[0] * x[0]) % 3;
        alpha * int((v * v % 3) as i64)
    })
}

/// `Z(θ,φ)` on the target when the control is `|level⟩`.
pub fn controlled_phase_spec(level: usize, theta: &Rational, phi: &Rational) -> DiagonalSpec {
    let p = Phase::new(theta.clone(), phi.clone());
    DiagonalSpec::from_fn(format!("controlled-phase(level={level})"), 2, |x| {
        if x[0] == level {
            label(&p, x[1])
        } else {
            Rational::zero()
        }
    })
}

/// `|x, y⟩ ↦ |x, y + x² mod 3⟩`.
pub fn square_control_matrix() -> Matrix {
    Matrix::permutation(9, |i| {
        let (x, y) = (i / 3, i % 3);
        x * 3 + (y + x * x) % 3
    })
}

fn sq3(v: i64) -> i64 {
    v * v % 3
}

/// Exhaustive checks of the identities behind the multiplier:
///
/// * `n = 2`: `xy mod 3 = [x²] + [y²] − [(x+y)²]` as integers, `[v]` meaning `v mod 3`;
/// * `n = 3`: the seven-term expansion of `xyz` holds mod 3;
/// * `x⁴ ≡ x² (mod 3)` on every trit.
pub fn sum_square_identity_check(n: usize) -> bool {
    let tr = 0..3i64;
    match n {
        1 => tr.clone().all(|x| x.pow(4) % 3 == x * x % 3),
        2 => tr.clone().all(|x| tr.clone().all(|y| x * y % 3 == sq3(x) + sq3(y) - sq3(x + y))),
        3 => tr.clone().all(|x| {
            tr.clone().all(|y| {
                tr.clone().all(|z| {
                    let terms = sq3(x) + sq3(y) + sq3(z) - sq3(x + y) - sq3(sq3(x) + z) - sq3(sq3(y) + z)
                        + sq3(sq3(x + y) + z);
                    (x * y * z - terms).rem_euclid(3) == 0
                })
            })
        }),
        _ => false,
    }
}

/// `|1…1⟩ ↦ −|1…1⟩` on `n` qubits.
pub fn qubit_multi_cz(n: usize) -> Matrix {
    let mut d = vec![Complex64::one(); 1 << n];
    d[(1 << n) - 1] = -Complex64::one();
    Matrix::diagonal(&d)
}

pub fn qubit_ccz() -> Matrix {
    qubit_multi_cz(3)
}

/// Doubly controlled `u` on qubits, `u` a 2×2 matrix.
pub fn qubit_ccu(u: &Matrix) -> Result<Matrix> {
    if u.rows() != 2 || u.cols() != 2 {
        return Err(Error::Shape(format!("{}x{} is not a qubit gate", u.rows(), u.cols())));
    }
    Ok(Matrix::from_fn(8, 8, |r, c| {
        if r >> 1 != c >> 1 {
            Complex64::zero()
        } else if r >> 1 == 3 {
            u.get(r & 1, c & 1)
        } else if r == c {
            Complex64::one()
        } else {
            Complex64::zero()
        }
    }))
}

/// `diag(ω^{α₀}, …)` on `log₂ len` qubits.
pub fn qubit_diag(alphas: &[Rational]) -> Matrix {
    let entries: Vec<Complex64> = alphas.iter().map(omega_pow).collect();
    Matrix::diagonal(&entries)
}

/// `|2⟩`-controlled `diag(1, ω^η)`: a qutrit control on a qubit target (6×6).
pub fn ket2_qubit_phase(eta: &Rational) -> Matrix {
    let mut d = vec![Complex64::one(); 6];
    d[5] = omega_pow(eta);
    Matrix::diagonal(&d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmulationReport {
    pub passed: bool,
    /// Largest amplitude leaving the emulated subspace.
    pub leakage: f64,
    /// Residual of the restricted block against the target, after the global phase.
    pub residual: f64,
    pub global_phase: [f64; 2],
}

/// Emulation check on qubits embedded as `{|0⟩,|1⟩}` of every qutrit.
pub fn check_emulation(m: &Matrix, qubit_target: &Matrix, tol: f64) -> Result<EmulationReport> {
    let n = (0..=12).find(|&n| pow3(n) == m.rows()).ok_or_else(|| Error::Shape(format!("{} rows is not a power of 3", m.rows())))?;
    check_emulation_dims(m, qubit_target, &vec![2; n], tol)
}

/// As [`check_emulation`], with wire `i` restricted to its lowest `dims[i]` levels.
pub fn check_emulation_dims(m: &Matrix, target: &Matrix, dims: &[usize], tol: f64) -> Result<EmulationReport> {
    let n = dims.len();
    if !m.is_square() || m.rows() != pow3(n) {
        return Err(Error::Shape(format!("{}x{} is not an operator on {n} qutrits", m.rows(), m.cols())));
    }
    let sub: Vec<usize> = (0..m.rows()).filter(|&i| trits(i, n).iter().zip(dims).all(|(t, d)| t < d)).collect();
    if !target.is_square() || target.rows() != sub.len() {
        return Err(Error::Shape(format!("target is {}x{}, subspace has dimension {}", target.rows(), target.cols(), sub.len())));
    }
    let inside: Vec<bool> = {
        let mut v = vec![false; m.rows()];
        for &i in &sub {
            v[i] = true;
        }
        v
    };
    let leakage = sub
        .iter()
        .flat_map(|&c| (0..m.rows()).filter(|&r| !inside[r]).map(move |r| (r, c)))
        .map(|(r, c)| m.get(r, c).norm())
        .fold(0.0, f64::max);
    let block = Matrix::from_fn(sub.len(), sub.len(), |r, c| m.get(sub[r], sub[c]));
    let eq = scalar_equiv_tol(&block, target, EquivMode::AnyNonzero, tol)?;
    let unimodular = (eq.c.norm() - 1.0).abs() <= tol;
    Ok(EmulationReport {
        passed: leakage <= tol && eq.is_equivalent() && unimodular,
        leakage,
        residual: eq.residual,
        global_phase: [eq.c.re, eq.c.im],
    })
}
