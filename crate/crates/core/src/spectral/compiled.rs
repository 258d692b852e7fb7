//! Matrix-free form of a Pauli sum, plus the decomposition into sectors of
//! qubits on which every term acts diagonally.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex;
use num_traits::Zero;

use crate::pauli::{PauliString, PauliSum};
use crate::scalar::Real;
use crate::spectral::{ipow, CMatrix};

/// `offset·I + Σ c_t X^{x_t} Z^{z_t}` with the `i^{|x∧z|}` phase folded into `c_t`.
#[derive(Clone, Debug)]
pub struct CompiledOperator<T: Real> {
    n_qubits: usize,
    offset: T,
    terms: Vec<(u64, u64, Complex<T>)>,
}

impl<T: Real> CompiledOperator<T> {
    pub fn new(h: &PauliSum<T>, n_qubits: usize) -> Self {
        let terms = h
            .terms()
            .iter()
            .map(|t| {
                let (x, z) = t.string.masks();
                (x, z, ipow(t.coefficient, (x & z).count_ones()))
            })
            .collect();
        Self {
            n_qubits,
            offset: h.offset(),
            terms,
        }
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `out = H v`.
    pub fn apply(&self, v: &DVector<Complex<T>>, out: &mut DVector<Complex<T>>) {
        let off = Complex::new(self.offset, T::zero());
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o = *x * off;
        }
        for &(x, z, c) in &self.terms {
            for i in 0..v.len() {
                let vi = v[i];
                if vi.is_zero() {
                    continue;
                }
                let amp = if (i as u64 & z).count_ones() % 2 == 1 {
                    -c
                } else {
                    c
                };
                out[i ^ x as usize] += amp * vi;
            }
        }
    }

    pub fn dense(&self) -> CMatrix<T> {
        let dim = self.dimension();
        let mut m = CMatrix::<T>::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(self.offset, T::zero());
        }
        for &(x, z, c) in &self.terms {
            for i in 0..dim {
                let amp = if (i as u64 & z).count_ones() % 2 == 1 {
                    -c
                } else {
                    c
                };
                m[(i ^ x as usize, i)] += amp;
            }
        }
        m
    }

    /// Upper bound on the operator norm.
    pub fn norm_bound(&self) -> T {
        self.terms
            .iter()
            .fold(num_traits::Float::abs(self.offset), |acc, t| {
                acc + t.2.norm()
            })
    }
}

/// Block structure of a Pauli sum with respect to its classical qubits.
///
/// A qubit is classical when every term acts on it with I or Z, so its
/// computational-basis value is conserved. Fixing those values splits the
/// Hamiltonian into independent sectors acting on the remaining qubits.
pub(crate) struct SectorDecomposition<T: Real> {
    pub classical: Vec<usize>,
    pub quantum: Vec<usize>,
    offset: T,
    // (sign mask over classical bits, reduced string on compact quantum indices, coefficient)
    terms: Vec<(u64, PauliString, T)>,
}

impl<T: Real> SectorDecomposition<T> {
    pub fn new(h: &PauliSum<T>) -> Self {
        let support = h.support();
        let quantum: Vec<usize> = support
            .iter()
            .copied()
            .filter(|&q| h.terms().iter().any(|t| t.string.flips(q)))
            .collect();
        let classical: Vec<usize> = support
            .iter()
            .copied()
            .filter(|q| !quantum.contains(q))
            .collect();
        let cidx: BTreeMap<usize, usize> =
            classical.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let qidx: BTreeMap<usize, usize> =
            quantum.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let terms = h
            .terms()
            .iter()
            .map(|t| {
                let mut mask = 0u64;
                let mut letters = Vec::new();
                for &(q, p) in t.string.letters() {
                    if let Some(&ci) = cidx.get(&q) {
                        mask |= 1 << ci;
                    } else {
                        letters.push((qidx[&q], p));
                    }
                }
                (
                    mask,
                    PauliString::new(letters).expect("distinct qubits"),
                    t.coefficient,
                )
            })
            .collect();
        Self {
            classical,
            quantum,
            offset: h.offset(),
            terms,
        }
    }

    pub fn sector_count(&self) -> usize {
        1usize << self.classical.len()
    }

    /// Hamiltonian of the sector where classical qubit `classical[i]` holds
    /// bit `i` of `sector`, on compact quantum indices.
    pub fn sector(&self, sector: usize) -> PauliSum<T> {
        PauliSum::from_terms(
            self.terms.iter().map(|(mask, s, c)| {
                let c = if (sector as u64 & mask).count_ones() % 2 == 1 {
                    -*c
                } else {
                    *c
                };
                (c, s.clone())
            }),
            self.offset,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{max_abs, to_matrix_unchecked};

    #[test]
    fn matvec_matches_dense() {
        let h = PauliSum::<f64>::term(0.3, "X0 Y2")
            + PauliSum::term(-1.1, "Z1 Y0")
            + PauliSum::constant(0.25);
        let op = CompiledOperator::new(&h, 3);
        let dense = to_matrix_unchecked(&h, 3);
        assert!(max_abs(&(op.dense() - &dense)) < 1e-14);
        let v = DVector::from_fn(8, |i, _| Complex::new(i as f64, 1.0 - i as f64));
        let mut out = DVector::zeros(8);
        op.apply(&v, &mut out);
        let expect = &dense * &v;
        assert!((out - expect).norm() < 1e-12);
    }

    #[test]
    fn sectors_cover_diagonal_qubits() {
        let h = PauliSum::<f64>::term(1.0, "Z0 X1") + PauliSum::term(2.0, "Z0 Z2");
        let dec = SectorDecomposition::new(&h);
        assert_eq!(dec.classical, vec![0, 2]);
        assert_eq!(dec.quantum, vec![1]);
        // sector 0b01: qubit 0 in |1>, qubit 2 in |0>
        let s = dec.sector(0b01);
        assert_eq!(s, PauliSum::term(-1.0, "X0") + PauliSum::constant(-2.0));
    }
}
