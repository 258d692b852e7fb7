//! Exact conjugation `e^S H e^{-S}` through the eigendecomposition of the
//! Hermitian matrix `iS`. No series truncation anywhere.

use num_complex::Complex;
use num_traits::Float;

use super::{max_abs, to_matrix, CMatrix, Caps, DenseOperator};
use crate::error::{Error, Result};
use crate::pauli::{AntiHermitian, PauliString, PauliSum};
use crate::scalar::Real;

const ANTI_HERMITIAN_TOL: f64 = 1e-10;
const UNITARITY_TOL: f64 = 1e-10;

/// `V` and `λ` with `G = V diag(λ) V†`.
fn hermitian_eigen<T: Real>(g: &CMatrix<T>) -> Result<(CMatrix<T>, Vec<T>)> {
    let eig = g.clone().symmetric_eigen();
    let v = eig.eigenvectors;
    let dim = v.nrows();
    let residual = max_abs(&(v.adjoint() * &v - CMatrix::<T>::identity(dim, dim)));
    if residual > T::tolerance(UNITARITY_TOL) {
        return Err(Error::Invalid(format!(
            "eigenvector basis not unitary (residual {:e})",
            residual.as_f64()
        )));
    }
    Ok((v, eig.eigenvalues.iter().copied().collect()))
}

/// `e^{-iG} H e^{iG}` given the Hermitian `G = iS`.
fn conjugate_with_generator<T: Real>(g: &CMatrix<T>, h: &CMatrix<T>) -> Result<CMatrix<T>> {
    let (v, lambda) = hermitian_eigen(g)?;
    let mut w = v.adjoint() * h * &v;
    for a in 0..w.nrows() {
        for b in 0..w.ncols() {
            let phase = -(lambda[a] - lambda[b]);
            w[(a, b)] *= Complex::new(Float::cos(phase), Float::sin(phase));
        }
    }
    Ok(&v * w * v.adjoint())
}

/// `e^S H e^{-S}` for a symbolic generator.
pub fn conjugate_by_exp<T: Real>(
    s: &AntiHermitian<T>,
    h: &PauliSum<T>,
    n_qubits: usize,
    caps: &Caps,
) -> Result<DenseOperator<T>> {
    let g = to_matrix(s.i_times(), n_qubits, caps)?;
    let hm = to_matrix(h, n_qubits, caps)?;
    let matrix = conjugate_with_generator(&g.matrix, &hm.matrix)?;
    Ok(DenseOperator {
        matrix,
        n_qubits,
        hermitian: true,
    })
}

/// `e^S H e^{-S}` for dense matrices; rejects `S` with `‖S + S†‖_max > 1e-10`.
pub fn conjugate_dense<T: Real>(s: &CMatrix<T>, h: &CMatrix<T>) -> Result<CMatrix<T>> {
    let residual = max_abs(&(s + s.adjoint()));
    if residual > T::tolerance(ANTI_HERMITIAN_TOL) {
        return Err(Error::NotAntiHermitian(residual.as_f64()));
    }
    if s.nrows() != h.nrows() {
        return Err(Error::DimensionMismatch {
            expected: s.nrows(),
            found: h.nrows(),
        });
    }
    let g = s * Complex::new(T::zero(), T::one());
    let g = (&g + g.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    conjugate_with_generator(&g, h)
}

/// The unitary `e^S`.
pub fn exp_anti_hermitian<T: Real>(
    s: &AntiHermitian<T>,
    n_qubits: usize,
    caps: &Caps,
) -> Result<CMatrix<T>> {
    let g = to_matrix(s.i_times(), n_qubits, caps)?;
    let (v, lambda) = hermitian_eigen(&g.matrix)?;
    let mut d = v.clone();
    for (j, &l) in lambda.iter().enumerate() {
        let ph = Complex::new(Float::cos(-l), Float::sin(-l));
        for i in 0..d.nrows() {
            d[(i, j)] *= ph;
        }
    }
    Ok(d * v.adjoint())
}

/// Pauli expansion of the Hermitian part of `m`, dropping coefficients with
/// magnitude `<= tol`. Uses one Walsh-Hadamard transform per flip pattern.
pub fn pauli_decompose<T: Real>(m: &CMatrix<T>, n_qubits: usize, tol: T) -> PauliSum<T> {
    let dim = 1usize << n_qubits;
    assert_eq!(m.nrows(), dim, "matrix does not match the register");
    let norm = T::lit(dim as f64);
    let mut terms = Vec::new();
    let mut offset = T::zero();
    for x in 0..dim {
        let mut w: Vec<Complex<T>> = (0..dim).map(|i| m[(i, i ^ x)]).collect();
        walsh_hadamard(&mut w);
        for (z, wz) in w.into_iter().enumerate() {
            let k = (x & z).count_ones();
            let c = (super::ipow(T::one(), k) * wz).re / norm;
            if Float::abs(c) <= tol {
                continue;
            }
            if x == 0 && z == 0 {
                offset = c;
                continue;
            }
            let letters = (0..n_qubits).filter_map(|q| {
                let (xb, zb) = ((x >> q) & 1 == 1, (z >> q) & 1 == 1);
                let p = match (xb, zb) {
                    (false, false) => return None,
                    (true, false) => crate::Pauli::X,
                    (false, true) => crate::Pauli::Z,
                    (true, true) => crate::Pauli::Y,
                };
                Some((q, p))
            });
            terms.push((c, PauliString::new(letters).expect("distinct qubits")));
        }
    }
    PauliSum::from_terms(terms, offset)
}

fn walsh_hadamard<T: Real>(v: &mut [Complex<T>]) {
    let mut h = 1;
    while h < v.len() {
        for block in (0..v.len()).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}
