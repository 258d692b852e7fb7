//! Exact numerical backend.
//!
//! Qubit 0 is the least-significant bit of the computational-basis index.

mod compiled;
mod expm;
mod ground;
mod split;

pub use compiled::CompiledOperator;
pub use expm::{conjugate_by_exp, conjugate_dense, exp_anti_hermitian, pauli_decompose};
pub use ground::{ground_energy, GroundStateResult, Method};
pub use split::{block_extract, Blocks, ProjectorSplit};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::scalar::Real;

pub type CMatrix<T> = DMatrix<Complex<T>>;

/// Size limits for the numerical routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest register realized as a dense matrix.
    pub dense: usize,
    /// Largest register handled by the iterative eigensolver.
    pub iterative: usize,
    /// Matrix-vector products allowed to the iterative eigensolver.
    pub max_iterations: usize,
    /// Krylov dimension between restarts.
    pub krylov: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            dense: 10,
            iterative: 20,
            max_iterations: 2000,
            krylov: 80,
        }
    }
}

/// Dense complex matrix on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator<T: Real> {
    pub matrix: CMatrix<T>,
    pub n_qubits: usize,
    pub hermitian: bool,
}

impl<T: Real> DenseOperator<T> {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |M - M†|` entrywise.
    pub fn hermiticity_residual(&self) -> T {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    pub fn spectral_norm(&self) -> T {
        if self.hermitian {
            hermitian_norm(&self.matrix)
        } else {
            spectral_norm(&self.matrix)
        }
    }

    /// Eigenvalues in ascending order; requires a Hermitian operator.
    pub fn eigenvalues(&self) -> Vec<T> {
        sorted_eigenvalues(&self.matrix)
    }
}

/// Kronecker realization of `h` on `n_qubits` qubits.
pub fn to_matrix<T: Real>(
    h: &PauliSum<T>,
    n_qubits: usize,
    caps: &Caps,
) -> Result<DenseOperator<T>> {
    if n_qubits < h.min_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.min_qubits(),
            found: n_qubits,
        });
    }
    if n_qubits > caps.dense {
        return Err(Error::CapExceeded {
            support: n_qubits,
            cap: caps.dense,
        });
    }
    Ok(DenseOperator {
        matrix: to_matrix_unchecked(h, n_qubits),
        n_qubits,
        hermitian: true,
    })
}

pub(crate) fn to_matrix_unchecked<T: Real>(h: &PauliSum<T>, n_qubits: usize) -> CMatrix<T> {
    let dim = 1usize << n_qubits;
    let mut m = CMatrix::<T>::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = Complex::new(h.offset(), T::zero());
    }
    for t in h.terms() {
        let (x, z) = t.string.masks();
        let base = ipow(T::one(), (x & z).count_ones()) * t.coefficient;
        for i in 0..dim {
            let j = i ^ x as usize;
            let v = if (i as u64 & z).count_ones() % 2 == 1 {
                -base
            } else {
                base
            };
            m[(j, i)] += v;
        }
    }
    m
}

/// `scale · i^k`.
pub(crate) fn ipow<T: Real>(scale: T, k: u32) -> Complex<T> {
    match k % 4 {
        0 => Complex::new(scale, T::zero()),
        1 => Complex::new(T::zero(), scale),
        2 => Complex::new(-scale, T::zero()),
        _ => Complex::new(T::zero(), -scale),
    }
}

pub(crate) fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().map(|c| c.norm()).fold(T::zero(), Float::max)
}

/// Largest |eigenvalue| of a Hermitian matrix.
pub fn hermitian_norm<T: Real>(m: &CMatrix<T>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    m.symmetric_eigenvalues()
        .iter()
        .map(|&e| Float::abs(e))
        .fold(T::zero(), Float::max)
}

/// Largest singular value of any complex matrix.
pub fn spectral_norm<T: Real>(m: &CMatrix<T>) -> T {
    if m.is_empty() || m.iter().all(|c| c.is_zero()) {
        return T::zero();
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(T::zero(), Float::max)
}

pub fn sorted_eigenvalues<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let mut ev: Vec<T> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    ev
}
