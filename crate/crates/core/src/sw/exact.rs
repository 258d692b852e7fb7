//! Dense constructions: the exact (direct-rotation) generator, dense `L₀⁻¹`,
//! and effective Hamiltonians `P e^S H e^{−S} P`.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Float;

use super::{SWGenerator, SwOrder};
use crate::error::{Error, Result};
use crate::pauli::{AntiHermitian, PauliSum};
use crate::scalar::Real;
use crate::spectral::{
    block_extract, conjugate_by_exp, pauli_decompose, spectral_norm, to_matrix, CMatrix, Caps,
    DenseOperator, ProjectorSplit,
};

/// Relative gap below which the low-energy subspace is considered degenerate
/// with the rest of the spectrum.
const GAP_TOL: f64 = 1e-9;

/// Dense `L₀⁻¹` for a diagonal `h0`: `S_ij = x_ij / (E_i − E_j)`.
pub fn l0_inverse_dense<T: Real>(
    h0: &PauliSum<T>,
    x: &PauliSum<T>,
    split: &ProjectorSplit,
    caps: &Caps,
) -> Result<CMatrix<T>> {
    if let Some(t) = h0.terms().iter().find(|t| !t.string.is_diagonal()) {
        return Err(Error::NotDiagonal(t.string.to_string()));
    }
    let n = split.n_qubits;
    let e = to_matrix(h0, n, caps)?.matrix;
    let xm = to_matrix(x, n, caps)?.matrix;
    let scale = Float::max(T::one(), crate::spectral::max_abs(&xm));
    let tiny = T::tolerance(1e-12) * scale;
    let mut s = CMatrix::<T>::zeros(xm.nrows(), xm.ncols());
    for i in 0..xm.nrows() {
        for j in 0..xm.ncols() {
            let xij = xm[(i, j)];
            if xij.norm() <= tiny {
                continue;
            }
            if split.in_p(i) == split.in_p(j) {
                return Err(Error::BlockDiagonalPart(format!("element ({i}, {j})")));
            }
            let gap = e[(i, i)].re - e[(j, j)].re;
            if Float::abs(gap) <= tiny {
                return Err(Error::DegenerateDenominator(format!("element ({i}, {j})")));
            }
            s[(i, j)] = xij / Complex::new(gap, T::zero());
        }
    }
    Ok(s)
}

/// Unitary polar factor `X (X†X)^{−1/2}` of a well-conditioned matrix,
/// polished by Newton-Schulz steps `U ← U (3 − U†U)/2`.
fn polar_unitary<T: Real>(x: &CMatrix<T>) -> CMatrix<T> {
    let gram = x.adjoint() * x;
    let gram = (&gram + gram.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let e = gram.symmetric_eigen();
    let mut inv_sqrt = CMatrix::<T>::zeros(x.nrows(), x.ncols());
    for (j, &l) in e.eigenvalues.iter().enumerate() {
        let v = e.eigenvectors.column(j);
        inv_sqrt += v * v.adjoint() * Complex::new(T::one() / Float::sqrt(l), T::zero());
    }
    let mut u = x * inv_sqrt;
    let three = CMatrix::<T>::identity(x.nrows(), x.ncols()) * Complex::new(T::lit(3.0), T::zero());
    for _ in 0..3 {
        u = &u * (&three - u.adjoint() * &u) * Complex::new(T::lit(0.5), T::zero());
    }
    u
}

/// Direct-rotation generator. With `P̃` the projector onto the `rank(P)`
/// lowest eigenvectors of `h`, `U` is the unitary polar factor of
/// `P P̃ + Q Q̃`; then `U P̃ U† = P`, and `S = log U` is block-off-diagonal
/// with eigenphases inside `(−π/2, π/2)`.
pub fn sw_exact<T: Real>(
    h: &PauliSum<T>,
    split: &ProjectorSplit,
    caps: &Caps,
) -> Result<SWGenerator<T>> {
    let n = split.n_qubits;
    let hm = to_matrix(h, n, caps)?.matrix;
    let dim = hm.nrows();
    let rank = split.rank();
    let eig = hm.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("finite")
    });
    if rank < dim {
        let below = eig.eigenvalues[order[rank - 1]];
        let above = eig.eigenvalues[order[rank]];
        let scale = Float::max(T::one(), crate::spectral::hermitian_norm(&hm));
        if above - below <= T::tolerance(GAP_TOL) * scale {
            return Err(Error::GapClosure(below.as_f64(), above.as_f64()));
        }
    }
    let mut low = CMatrix::<T>::zeros(dim, rank);
    for (c, &idx) in order.iter().take(rank).enumerate() {
        low.set_column(c, &eig.eigenvectors.column(idx));
    }
    let p_tilde = &low * low.adjoint();
    let id = CMatrix::<T>::identity(dim, dim);
    let p = split.projector_p::<T>();
    let q = &id - &p;
    let distance = spectral_norm(&(&p - &p_tilde));
    if distance >= T::one() - T::tolerance(1e-12) {
        return Err(Error::RotationUndefined(distance.as_f64()));
    }
    let x = &p * &p_tilde + &q * (&id - &p_tilde);
    let u = polar_unitary(&x);

    // U = e^{−iG}: sin G = i(U − U†)/2, and every eigenvalue of G lies in (−π/2, π/2).
    let k = (&u - u.adjoint()) * Complex::new(T::zero(), T::lit(0.5));
    let k = (&k + k.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let ke = k.symmetric_eigen();
    let mut g = CMatrix::<T>::zeros(dim, dim);
    for (j, &s) in ke.eigenvalues.iter().enumerate() {
        let angle = Float::asin(Float::min(Float::max(s, -T::one()), T::one()));
        let v = ke.eigenvectors.column(j);
        g += v * v.adjoint() * Complex::new(angle, T::zero());
    }
    let g_sum = pauli_decompose(&g, n, T::tolerance(1e-14));
    // Remove the (vanishing) block-diagonal part left by rounding.
    let g_sum = g_sum.filter(|t| split.mediators.iter().any(|&m| t.string.flips(m)));
    Ok(SWGenerator::new(
        AntiHermitian::from_i_times(g_sum.without_offset()),
        SwOrder::Exact,
        split.clone(),
    ))
}

/// `P e^S H e^{−S} P` together with the diagnostics used by the checks.
#[derive(Clone, Debug)]
pub struct EffectiveHamiltonian<T: Real> {
    /// Operator on the non-mediator qubits, relabeled `0..n−m` in ascending order.
    pub h_eff: DenseOperator<T>,
    /// `‖P L³(H) P‖/6 + ‖L⁴(H)‖/24`, bounding the second-order truncation error.
    pub truncation_error_bound: T,
    /// `‖P (e^S H e^{−S} − H − L(H) − L²(H)/2) P‖`.
    pub truncation_error: T,
    /// `‖P e^S H e^{−S} Q‖`.
    pub offdiag_residual: T,
    /// Smallest eigenvalue of the `QQ` block.
    pub qq_min_eigenvalue: T,
    pub split: ProjectorSplit,
}

impl<T: Real> EffectiveHamiltonian<T> {
    /// `‖h_eff − target‖` for a target acting on the non-mediator qubits.
    pub fn distance_to(&self, target: &PauliSum<T>) -> Result<T> {
        let map: BTreeMap<usize, usize> = (0..self.split.n_qubits)
            .filter(|q| !self.split.mediators.contains(q))
            .enumerate()
            .map(|(i, q)| (q, i))
            .collect();
        let relabeled = target.embed(&map)?;
        let n = self.h_eff.n_qubits;
        let t = crate::spectral::to_matrix_unchecked(&relabeled, n);
        Ok(spectral_norm(&(&self.h_eff.matrix - t)))
    }
}

fn dense_commutator<T: Real>(s: &CMatrix<T>, x: &CMatrix<T>) -> CMatrix<T> {
    s * x - x * s
}

fn p_block<T: Real>(m: &CMatrix<T>, split: &ProjectorSplit) -> CMatrix<T> {
    let p = split.p_indices();
    CMatrix::from_fn(p.len(), p.len(), |i, j| m[(p[i], p[j])])
}

pub fn effective_hamiltonian<T: Real>(
    h: &PauliSum<T>,
    s: &SWGenerator<T>,
    caps: &Caps,
) -> Result<EffectiveHamiltonian<T>> {
    let split = &s.split;
    let n = split.n_qubits;
    let rotated = conjugate_by_exp(&s.s, h, n, caps)?;
    let blocks = block_extract(&rotated, split)?;

    let hm = to_matrix(h, n, caps)?.matrix;
    let sm = s.dense(caps)?;
    let l1 = dense_commutator(&sm, &hm);
    let l2 = dense_commutator(&sm, &l1);
    let l3 = dense_commutator(&sm, &l2);
    let l4 = dense_commutator(&sm, &l3);
    let half = Complex::new(T::lit(0.5), T::zero());
    let series = &hm + &l1 + &l2 * half;
    let truncation_error = spectral_norm(&p_block(&(&rotated.matrix - series), split));
    let truncation_error_bound =
        spectral_norm(&p_block(&l3, split)) / T::lit(6.0) + spectral_norm(&l4) / T::lit(24.0);

    let qq_min_eigenvalue = if blocks.qq.is_empty() {
        T::infinity()
    } else {
        crate::spectral::sorted_eigenvalues(&blocks.qq)[0]
    };
    let m = split.mediators.len();
    Ok(EffectiveHamiltonian {
        h_eff: DenseOperator {
            matrix: blocks.pp,
            n_qubits: n - m,
            hermitian: true,
        },
        truncation_error_bound,
        truncation_error,
        offdiag_residual: blocks.pq_norm,
        qq_min_eigenvalue,
        split: split.clone(),
    })
}
