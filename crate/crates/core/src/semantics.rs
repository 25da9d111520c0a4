//! Tensor semantics of diagrams.
//!
//! Every generator is read as an all-output tensor; because cups and caps are
//! the Z-basis `Σ|kk⟩`, bending a leg does not change any entry, so the map
//! with `m` outputs and `n` inputs is the same array reshaped to `3^m × 3^n`.
//!
//! * `Z(α,β)` on `k` legs: `Σ_j ω^{φ_j} |j…j⟩` with `φ = (0, α, β)`.
//! * `X(α,β)` on `k` legs: entry `x` is `⅓ Σ_j ω^{φ_j − j·Σx}`. With this
//!   normalization `X(0,0)` is exactly the indicator of `Σx ≡ 0`, so the
//!   one-in one-out X spider is the permutation `X₁₂`.
//! * `H`: `ω^{ab}/√3`; `H†`: its conjugate.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::diagram::{Diagram, Generator, VertexId};
use crate::error::{Error, Result};
use crate::matrix::{pow3, trits, Matrix};
use crate::phase::{int, omega_pow, Phase, Rational};

fn omega_int(k: i64) -> Complex64 {
    omega_pow(&int(k.rem_euclid(3)))
}

fn spider_z(p: &Phase, degree: usize) -> Vec<Complex64> {
    let mut data = vec![Complex64::zero(); pow3(degree)];
    if degree == 0 {
        data[0] = (0..3).map(|j| omega_pow(&p.component(j))).sum();
        return data;
    }
    let all_ones: usize = (0..degree).fold(0, |acc, _| acc * 3 + 1);
    for j in 0..3 {
        data[j * all_ones] = omega_pow(&p.component(j as i64));
    }
    data
}

fn spider_x(p: &Phase, degree: usize) -> Vec<Complex64> {
    let w: Vec<Complex64> = (0..3).map(|j| omega_pow(&p.component(j))).collect();
    // Entries depend only on the digit sum mod 3.
    let by_sum: Vec<Complex64> = (0..3)
        .map(|s| (0..3).map(|j| w[j as usize] * omega_int(-j * s)).sum::<Complex64>() / 3.0)
        .collect();
    (0..pow3(degree))
        .map(|i| by_sum[trits(i, degree).iter().sum::<usize>() % 3])
        .collect()
}

fn hadamard(dagger: bool) -> Vec<Complex64> {
    let s = if dagger { -1 } else { 1 };
    let norm = 3f64.sqrt();
    (0..9).map(|i| omega_int(s * (i / 3) as i64 * (i % 3) as i64) / norm).collect()
}

fn generator_data(g: &Generator, degree: usize) -> Result<Vec<Complex64>> {
    match g {
        Generator::Z(p) => Ok(spider_z(p, degree)),
        Generator::X(p) => Ok(spider_x(p, degree)),
        Generator::H | Generator::HDag => {
            if degree != 2 {
                return Err(Error::Arity(format!("{} box needs degree 2, got {degree}", g.kind_name())));
            }
            Ok(hadamard(*g == Generator::HDag))
        }
        Generator::Boundary => Err(Error::Arity("boundary vertices have no standalone tensor".into())),
    }
}

/// The generator as an all-output state: a `3^degree × 1` column.
pub fn generator_tensor(g: &Generator, degree: usize) -> Result<Matrix> {
    let data = generator_data(g, degree)?;
    Matrix::from_vec(data.len(), 1, data)
}

/// The generator read as a map from `n_in` legs to `n_out` legs.
pub fn generator_matrix(g: &Generator, n_in: usize, n_out: usize) -> Result<Matrix> {
    let data = generator_data(g, n_in + n_out)?;
    Matrix::from_vec(pow3(n_out), pow3(n_in), data)
}

/// Labelled dense tensor, big-endian over `labels`, every index of dimension 3.
#[derive(Clone, Debug)]
struct Tensor {
    labels: Vec<usize>,
    data: Vec<Complex64>,
}

impl Tensor {
    fn scalar(v: Complex64) -> Self {
        Tensor { labels: Vec::new(), data: vec![v] }
    }

    /// Reorder axes so that the labels read `order`.
    fn permuted(&self, order: &[usize]) -> Tensor {
        if order == self.labels.as_slice() {
            return self.clone();
        }
        let k = self.labels.len();
        let mut strides = vec![0usize; k];
        for (pos, stride) in strides.iter_mut().enumerate() {
            *stride = pow3(k - 1 - pos);
        }
        let src_stride: Vec<usize> = order
            .iter()
            .map(|l| strides[self.labels.iter().position(|x| x == l).expect("label present")])
            .collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut digits = vec![0usize; k];
        let mut src = 0usize;
        for _ in 0..self.data.len() {
            data.push(self.data[src]);
            // Odometer increment over the destination order.
            for pos in (0..k).rev() {
                digits[pos] += 1;
                src += src_stride[pos];
                if digits[pos] < 3 {
                    break;
                }
                digits[pos] = 0;
                src -= 3 * src_stride[pos];
            }
        }
        Tensor { labels: order.to_vec(), data }
    }

    /// Trace out every label that occurs twice.
    fn trace_repeats(self) -> Tensor {
        let mut t = self;
        loop {
            let dup = t.labels.iter().enumerate().find_map(|(i, l)| {
                t.labels[i + 1..].iter().position(|m| m == l).map(|j| (i, i + 1 + j))
            });
            let Some((i, j)) = dup else { return t };
            let k = t.labels.len();
            let keep: Vec<usize> = (0..k).filter(|&p| p != i && p != j).collect();
            let mut data = vec![Complex64::zero(); pow3(k - 2)];
            for (idx, v) in t.data.iter().enumerate() {
                let d = trits(idx, k);
                if d[i] == d[j] {
                    let out = keep.iter().fold(0, |acc, &p| acc * 3 + d[p]);
                    data[out] += v;
                }
            }
            t = Tensor { labels: keep.iter().map(|&p| t.labels[p]).collect(), data };
        }
    }
}

fn contract(a: &Tensor, b: &Tensor) -> Tensor {
    let shared: Vec<usize> = a.labels.iter().copied().filter(|l| b.labels.contains(l)).collect();
    let free_a: Vec<usize> = a.labels.iter().copied().filter(|l| !shared.contains(l)).collect();
    let free_b: Vec<usize> = b.labels.iter().copied().filter(|l| !shared.contains(l)).collect();
    let ap = a.permuted(&[free_a.clone(), shared.clone()].concat());
    let bp = b.permuted(&[shared.clone(), free_b.clone()].concat());
    let (m, k, n) = (pow3(free_a.len()), pow3(shared.len()), pow3(free_b.len()));
    let mut data = vec![Complex64::zero(); m * n];
    for r in 0..m {
        let dst = &mut data[r * n..(r + 1) * n];
        for s in 0..k {
            let x = ap.data[r * k + s];
            if x.is_zero() {
                continue;
            }
            for (d, y) in dst.iter_mut().zip(&bp.data[s * n..(s + 1) * n]) {
                *d += x * y;
            }
        }
    }
    Tensor { labels: [free_a, free_b].concat(), data }
}

fn result_rank(a: &Tensor, b: &Tensor) -> usize {
    let shared = a.labels.iter().filter(|l| b.labels.contains(l)).count();
    a.labels.len() + b.labels.len() - 2 * shared
}

/// Greedy pairwise contraction: among pairs sharing an index, contract the
/// one with the smallest result (lowest positions on ties); disconnected
/// pieces are joined smallest first by outer product.
fn contract_all(mut tensors: Vec<Tensor>) -> Tensor {
    if tensors.is_empty() {
        return Tensor::scalar(Complex64::one());
    }
    while tensors.len() > 1 {
        let mut owners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, t) in tensors.iter().enumerate() {
            for &l in &t.labels {
                owners.entry(l).or_default().push(i);
            }
        }
        let mut candidates = BTreeSet::new();
        for own in owners.values() {
            if let [i, j] = own.as_slice() {
                if i != j {
                    candidates.insert((*i.min(j), *i.max(j)));
                }
            }
        }
        let pair = candidates
            .iter()
            .min_by_key(|&&(i, j)| (result_rank(&tensors[i], &tensors[j]), i, j))
            .copied()
            .unwrap_or_else(|| {
                let mut idx: Vec<usize> = (0..tensors.len()).collect();
                idx.sort_by_key(|&i| (tensors[i].labels.len(), i));
                (idx[0].min(idx[1]), idx[0].max(idx[1]))
            });
        let b = tensors.remove(pair.1);
        let a = tensors.remove(pair.0);
        tensors.push(contract(&a, &b));
    }
    tensors.pop().unwrap()
}

/// Evaluate a diagram to its `3^|outputs| × 3^|inputs|` matrix, including
/// the stored scalar.
pub fn eval(d: &Diagram) -> Result<Matrix> {
    d.validate()?;
    // Edge labels are 0..E; open boundary labels follow.
    let edges = d.edges();
    let mut legs: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (e, &(a, b)) in edges.iter().enumerate() {
        legs.entry(a).or_default().push(e);
        legs.entry(b).or_default().push(e);
    }
    let mut next_label = edges.len();
    let mut open: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut tensors = Vec::new();
    for (v, g) in d.vertices() {
        let my_legs = legs.get(&v).cloned().unwrap_or_default();
        if *g == Generator::Boundary {
            let l = next_label;
            next_label += 1;
            open.insert(v, l);
            let identity: Vec<Complex64> =
                (0..9).map(|i| if i / 3 == i % 3 { Complex64::one() } else { Complex64::zero() }).collect();
            tensors.push(Tensor { labels: vec![l, my_legs[0]], data: identity });
        } else {
            let data = generator_data(g, my_legs.len())?;
            tensors.push(Tensor { labels: my_legs, data }.trace_repeats());
        }
    }
    let result = contract_all(tensors);
    let order: Vec<usize> = d.outputs().iter().chain(d.inputs()).map(|v| open[v]).collect();
    let t = result.permuted(&order);
    let s = d.scalar().to_complex();
    let data = t.data.into_iter().map(|x| x * s).collect();
    Matrix::from_vec(pow3(d.outputs().len()), pow3(d.inputs().len()), data)
}

/// Evaluate independent diagrams in parallel; results keep the input order.
pub fn eval_batch(ds: &[Diagram]) -> Vec<Result<Matrix>> {
    ds.par_iter().map(eval).collect()
}

/// `Z(a,b)` as a one-qutrit diagonal matrix.
pub fn phase_matrix(p: &Phase) -> Matrix {
    Matrix::diagonal(&p.diagonal())
}

/// `ω^r` for exact `r`.
pub fn omega(r: &Rational) -> Complex64 {
    omega_pow(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{scalar_equiv, EquivMode, Verdict};
    use crate::phase::rat;

    fn x12() -> Matrix {
        Matrix::permutation(3, |k| (3 - k) % 3)
    }

    #[test]
    fn z_identity_state() {
        let t = generator_tensor(&Generator::Z(Phase::zero()), 2).unwrap();
        for i in 0..9 {
            let want = if i / 3 == i % 3 { 1.0 } else { 0.0 };
            assert!((t.get(i, 0) - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn one_one_x_spider_is_x12() {
        let d = Diagram::single(Generator::X(Phase::zero()), 1, 1);
        assert!(eval(&d).unwrap().max_diff(&x12()) < 1e-12);
    }

    #[test]
    fn hadamard_matrix() {
        let h = eval(&Diagram::single(Generator::H, 1, 1)).unwrap();
        let w = omega(&int(1));
        let s = 1.0 / 3f64.sqrt();
        let want = Matrix::from_fn(3, 3, |r, c| {
            let table = [[1, 1, 1], [1, 0, 0], [1, 0, 0]];
            if table[r][c] == 1 {
                Complex64::new(s, 0.0)
            } else if (r * c) % 3 == 1 {
                w * s
            } else {
                w.conj() * s
            }
        });
        assert!(h.max_diff(&want) < 1e-12);
        assert!(generator_tensor(&Generator::H, 3).is_err());
    }

    #[test]
    fn four_hadamards_are_identity() {
        let h = Diagram::single(Generator::H, 1, 1);
        let h4 = h.compose(&h).unwrap().compose(&h).unwrap().compose(&h).unwrap();
        assert!(eval(&h4).unwrap().max_diff(&Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn hdag_is_h_cubed() {
        let h = Diagram::single(Generator::H, 1, 1);
        let h3 = h.compose(&h).unwrap().compose(&h).unwrap();
        let hd = eval(&h.adjoint()).unwrap();
        assert!(eval(&h3).unwrap().max_diff(&hd) < 1e-12);
    }

    #[test]
    fn self_loop_is_traced() {
        let mut d = Diagram::new();
        let i = d.add_input();
        let z = d.add_vertex(Generator::Z(Phase::t()));
        let o = d.add_output();
        d.connect(i, z);
        d.connect(z, o);
        d.connect(z, z);
        let m = eval(&d).unwrap();
        assert!(m.max_diff(&phase_matrix(&Phase::t())) < 1e-12);
    }

    #[test]
    fn closed_diagram_scalar() {
        let d = Diagram::single(Generator::Z(Phase::ratios((1, 2), (1, 5))), 0, 0);
        let m = eval(&d).unwrap();
        let want: Complex64 = [int(0), rat(1, 2), rat(1, 5)].iter().map(omega).sum();
        assert!((m.get(0, 0) - want).norm() < 1e-12);
    }

    #[test]
    fn bare_wires_and_swap() {
        let mut d = Diagram::new();
        let i0 = d.add_input();
        let i1 = d.add_input();
        let o0 = d.add_output();
        let o1 = d.add_output();
        d.connect(i0, o1);
        d.connect(i1, o0);
        let m = eval(&d).unwrap();
        let swap = Matrix::permutation(9, |c| (c % 3) * 3 + c / 3);
        assert_eq!(m, swap);
    }

    #[test]
    fn batch_matches_serial() {
        let ds: Vec<Diagram> = (0..6)
            .map(|k| Diagram::single(Generator::X(Phase::ratios((k, 5), (2, 7))), 1, 2))
            .collect();
        let batch = eval_batch(&ds);
        for (d, m) in ds.iter().zip(batch) {
            let m = m.unwrap();
            assert_eq!(scalar_equiv(&m, &eval(d).unwrap(), EquivMode::PositiveReal).unwrap().verdict, Verdict::EqualExact);
        }
    }
}
