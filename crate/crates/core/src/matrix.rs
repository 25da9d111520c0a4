//! Dense complex matrices and equivalence checks.

use std::fmt;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Big-endian trit decomposition of `index` into `n` digits.
pub fn trits(mut index: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = index % 3;
        index /= 3;
    }
    out
}

/// Inverse of [`trits`].
pub fn trit_index(digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * 3 + d)
}

pub fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Complex64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = *e;
        }
        m
    }

    /// Permutation matrix sending basis column `c` to row `f(c)`.
    pub fn permutation(n: usize, f: impl Fn(usize) -> usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for c in 0..n {
            m.data[f(c) * n + c] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Matrix::zeros(rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out.data[(r1 * other.rows + r2) * cols + c1 * other.cols + c2] = a * other.get(r2, c2);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn dagger(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_diff(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).norm() <= tol))
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .dagger()
                .mul(self)
                .map(|p| p.max_diff(&Matrix::identity(self.rows)) <= tol)
                .unwrap_or(false)
    }

    /// One line per entry, `row,col,re,im`, after a `rows,cols` header.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{},{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                writeln!(w, "{r},{c},{:e},{:e}", v.re, v.im)?;
            }
        }
        Ok(())
    }

    pub fn read_csv(r: impl BufRead) -> Result<Matrix> {
        let bad = |msg: &str| Error::Parse(format!("matrix csv: {msg}"));
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| bad("empty input"))??;
        let (rows, cols) = header.split_once(',').ok_or_else(|| bad("bad header"))?;
        let rows: usize = rows.trim().parse().map_err(|_| bad("bad header"))?;
        let cols: usize = cols.trim().parse().map_err(|_| bad("bad header"))?;
        let mut m = Matrix::zeros(rows, cols);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 4 {
                return Err(bad("expected row,col,re,im"));
            }
            let r: usize = f[0].parse().map_err(|_| bad("bad row"))?;
            let c: usize = f[1].parse().map_err(|_| bad("bad column"))?;
            if r >= rows || c >= cols {
                return Err(bad("index out of range"));
            }
            let re: f64 = f[2].parse().map_err(|_| bad("bad real part"))?;
            let im: f64 = f[3].parse().map_err(|_| bad("bad imaginary part"))?;
            m.set(r, c, Complex64::new(re, im));
        }
        Ok(m)
    }

    /// NumPy `.npy` version 1.0, little-endian complex128, C order.
    pub fn write_npy(&self, mut w: impl Write) -> std::io::Result<()> {
        let dict = format!("{{'descr': '<c16', 'fortran_order': False, 'shape': ({}, {}), }}", self.rows, self.cols);
        let unpadded = 10 + dict.len() + 1;
        let pad = (64 - unpadded % 64) % 64;
        let header = format!("{dict}{}\n", " ".repeat(pad));
        w.write_all(b"\x93NUMPY\x01\x00")?;
        w.write_all(&(header.len() as u16).to_le_bytes())?;
        w.write_all(header.as_bytes())?;
        for v in &self.data {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_npy(bytes: &[u8]) -> Result<Matrix> {
        let bad = |msg: &str| Error::Parse(format!("npy: {msg}"));
        if bytes.len() < 10 || &bytes[..6] != b"\x93NUMPY" {
            return Err(bad("missing magic"));
        }
        let hlen = u16::from_le_bytes([bytes[8], bytes[9]]) as usize;
        let header = std::str::from_utf8(bytes.get(10..10 + hlen).ok_or_else(|| bad("truncated header"))?)
            .map_err(|_| bad("header is not utf-8"))?;
        if !header.contains("'<c16'") || header.contains("'fortran_order': True") {
            return Err(bad("only little-endian complex128 in C order is supported"));
        }
        let shape = header
            .split("'shape': (")
            .nth(1)
            .and_then(|s| s.split(')').next())
            .ok_or_else(|| bad("missing shape"))?;
        let dims: Vec<usize> = shape
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| bad("bad shape")))
            .collect::<Result<_>>()?;
        let (rows, cols) = match dims.as_slice() {
            [r, c] => (*r, *c),
            _ => return Err(bad("expected a 2-d array")),
        };
        let body = &bytes[10 + hlen..];
        if body.len() != rows * cols * 16 {
            return Err(bad("payload size does not match shape"));
        }
        let data = body
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        Matrix::from_vec(rows, cols, data)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let v = self.get(r, c);
                    format!("{:+.4}{:+.4}i", v.re, v.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivMode {
    AnyNonzero,
    PositiveReal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Verdict {
    EqualExact,
    EqualUpToScalar(Complex64),
    Inequivalent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarEquivalence {
    pub verdict: Verdict,
    /// Candidate factor with `m1 ≈ c·m2`.
    pub c: Complex64,
    /// `max |m1 - c·m2|` relative to `max |m1|`.
    pub residual: f64,
}

impl ScalarEquivalence {
    pub fn is_equivalent(&self) -> bool {
        self.verdict != Verdict::Inequivalent
    }
}

pub fn scalar_equiv(m1: &Matrix, m2: &Matrix, mode: EquivMode) -> Result<ScalarEquivalence> {
    scalar_equiv_tol(m1, m2, mode, DEFAULT_TOL)
}

/// Look for `c ≠ 0` with `m1 = c·m2`, pivoting on the largest entry of `m2`.
pub fn scalar_equiv_tol(m1: &Matrix, m2: &Matrix, mode: EquivMode, tol: f64) -> Result<ScalarEquivalence> {
    if m1.rows != m2.rows || m1.cols != m2.cols {
        return Err(Error::Shape(format!(
            "{}x{} vs {}x{}",
            m1.rows, m1.cols, m2.rows, m2.cols
        )));
    }
    let fail = |c, residual| ScalarEquivalence { verdict: Verdict::Inequivalent, c, residual };
    let pivot = m2
        .data
        .iter()
        .enumerate()
        .fold((0, 0.0), |best, (i, x)| if x.norm() > best.1 { (i, x.norm()) } else { best });
    let scale1 = m1.max_abs();
    if pivot.1 == 0.0 || scale1 == 0.0 {
        // Zero maps are never scalar multiples with c ≠ 0 of a nonzero map.
        let both = pivot.1 == 0.0 && scale1 == 0.0;
        return Ok(if both {
            ScalarEquivalence { verdict: Verdict::EqualExact, c: Complex64::new(1.0, 0.0), residual: 0.0 }
        } else {
            fail(Complex64::zero(), f64::INFINITY)
        });
    }
    let c = m1.data[pivot.0] / m2.data[pivot.0];
    let residual = m1
        .data
        .iter()
        .zip(&m2.data)
        .map(|(a, b)| (a - c * b).norm())
        .fold(0.0, f64::max)
        / scale1;
    if residual > tol {
        return Ok(fail(c, residual));
    }
    if mode == EquivMode::PositiveReal && (c.im.abs() > tol * c.norm() || c.re <= 0.0) {
        return Ok(fail(c, residual));
    }
    let exact = (c - Complex64::new(1.0, 0.0)).norm() <= tol;
    let verdict = if exact { Verdict::EqualExact } else { Verdict::EqualUpToScalar(c) };
    Ok(ScalarEquivalence { verdict, c, residual })
}

/// Restriction of an `n`-qutrit operator to the `{|0⟩,|1⟩}^n` subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Restriction {
    pub matrix: Matrix,
    /// Largest amplitude sent from a qubit-subspace column outside the subspace.
    pub leakage: f64,
}

pub fn qubit_subspace_restrict(m: &Matrix, n: usize) -> Result<Restriction> {
    if !m.is_square() {
        return Err(Error::Shape(format!("{}x{} is not square", m.rows, m.cols)));
    }
    if m.rows != pow3(n) {
        return Err(Error::Shape(format!("{} rows is not 3^{n}", m.rows)));
    }
    let qubit_indices: Vec<usize> = (0..1usize << n)
        .map(|b| trit_index(&(0..n).map(|k| (b >> (n - 1 - k)) & 1).collect::<Vec<_>>()))
        .collect();
    let inside: Vec<bool> = (0..m.rows).map(|i| trits(i, n).iter().all(|&t| t < 2)).collect();
    let matrix = Matrix::from_fn(1 << n, 1 << n, |r, c| m.get(qubit_indices[r], qubit_indices[c]));
    let mut leakage: f64 = 0.0;
    for &c in &qubit_indices {
        for (r, &ok) in inside.iter().enumerate() {
            if !ok {
                leakage = leakage.max(m.get(r, c).norm());
            }
        }
    }
    Ok(Restriction { matrix, leakage })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> Matrix {
        Matrix::from_fn(3, 3, |r, k| c(r as f64 + 1.0, k as f64 - 0.5))
    }

    #[test]
    fn trit_roundtrip() {
        for i in 0..81 {
            assert_eq!(trit_index(&trits(i, 4)), i);
        }
        assert_eq!(trits(5, 2), vec![1, 2]);
    }

    #[test]
    fn kron_and_mul() {
        let x = Matrix::permutation(3, |k| (k + 1) % 3);
        let x3 = x.mul(&x).unwrap().mul(&x).unwrap();
        assert_eq!(x3, Matrix::identity(3));
        let k = x.kron(&Matrix::identity(3));
        assert_eq!(k.get(3, 0), c(1.0, 0.0));
        assert!(x.mul(&Matrix::identity(2)).is_err());
    }

    #[test]
    fn half_scalar() {
        let m = sample();
        let r = scalar_equiv(&m, &m.scale(c(2.0, 0.0)), EquivMode::AnyNonzero).unwrap();
        match r.verdict {
            Verdict::EqualUpToScalar(k) => assert!((k - c(0.5, 0.0)).norm() < 1e-12),
            v => panic!("{v:?}"),
        }
        let same = scalar_equiv(&m, &m, EquivMode::PositiveReal).unwrap();
        assert_eq!(same.verdict, Verdict::EqualExact);
    }

    #[test]
    fn omega_scalar_is_not_positive_real() {
        let m = sample();
        let w = crate::phase::omega_pow(&crate::phase::int(1));
        let r = scalar_equiv(&m, &m.scale(w), EquivMode::PositiveReal).unwrap();
        assert_eq!(r.verdict, Verdict::Inequivalent);
        let r = scalar_equiv(&m, &m.scale(w), EquivMode::AnyNonzero).unwrap();
        assert!(r.is_equivalent());
    }

    #[test]
    fn shape_mismatch() {
        assert!(scalar_equiv(&Matrix::identity(3), &Matrix::identity(9), EquivMode::AnyNonzero).is_err());
    }

    #[test]
    fn restrict_identity_and_shift() {
        let r = qubit_subspace_restrict(&Matrix::identity(3), 1).unwrap();
        assert_eq!(r.matrix, Matrix::identity(2));
        assert_eq!(r.leakage, 0.0);
        let xp1 = Matrix::permutation(3, |k| (k + 1) % 3);
        assert_eq!(qubit_subspace_restrict(&xp1, 1).unwrap().leakage, 1.0);
        assert!(qubit_subspace_restrict(&Matrix::zeros(3, 9), 1).is_err());
    }

    #[test]
    fn csv_and_npy_roundtrip() {
        let m = sample().kron(&Matrix::identity(3)).scale(c(0.3, -1.7));
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        assert_eq!(Matrix::read_csv(buf.as_slice()).unwrap(), m);
        let mut npy = Vec::new();
        m.write_npy(&mut npy).unwrap();
        assert_eq!((npy.len() - m.data.len() * 16) % 64, 0);
        assert_eq!(Matrix::read_npy(&npy).unwrap(), m);
    }
}
