//! Ground-state energies.
//!
//! The Hamiltonian is first split into sectors of its classical qubits (see
//! [`SectorDecomposition`]); each sector is diagonalized densely when it fits
//! under the dense cap and with restarted Lanczos otherwise. The minimum over
//! sectors is the ground energy of the full operator.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::compiled::{CompiledOperator, SectorDecomposition};
use super::Caps;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Dense,
    Iterative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateResult<T> {
    pub energy: T,
    /// `‖Hψ − λψ‖` for the returned eigenpair.
    pub residual: T,
    pub method: Method,
    /// Number of classical-qubit sectors that were diagonalized.
    pub sectors: usize,
}

/// Residual acceptance threshold, relative to the norm bound of the operator.
const RESIDUAL_TOL: f64 = 1e-8;
const SEED: u64 = 0x5eed_1a2c;

pub fn ground_energy<T: Real>(
    h: &PauliSum<T>,
    n_qubits: usize,
    caps: &Caps,
) -> Result<GroundStateResult<T>> {
    ground_energy_with(h, n_qubits, caps, None)
}

/// As [`ground_energy`], optionally forcing one method for every sector.
pub fn ground_energy_with<T: Real>(
    h: &PauliSum<T>,
    n_qubits: usize,
    caps: &Caps,
    force: Option<Method>,
) -> Result<GroundStateResult<T>> {
    if n_qubits < h.min_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.min_qubits(),
            found: n_qubits,
        });
    }
    if n_qubits > caps.iterative {
        return Err(Error::CapExceeded {
            support: n_qubits,
            cap: caps.iterative,
        });
    }
    let dec = SectorDecomposition::new(h);
    let nq = dec.quantum.len();
    let method = force.unwrap_or(if nq <= caps.dense {
        Method::Dense
    } else {
        Method::Iterative
    });
    if method == Method::Dense && nq > caps.dense {
        return Err(Error::CapExceeded {
            support: nq,
            cap: caps.dense,
        });
    }
    let mut best: Option<(T, T)> = None;
    for s in 0..dec.sector_count() {
        let sector = dec.sector(s);
        let op = CompiledOperator::new(&sector, nq);
        let (energy, residual) = match method {
            Method::Dense => dense_ground(&op),
            Method::Iterative => lanczos_ground(&op, caps)?,
        };
        let tol = T::tolerance(RESIDUAL_TOL) * Float::max(T::one(), op.norm_bound());
        if residual > tol {
            return Err(Error::NonConvergence {
                iterations: 0,
                residual: residual.as_f64(),
            });
        }
        if best.is_none_or(|(e, _)| energy < e) {
            best = Some((energy, residual));
        }
    }
    let (energy, residual) = best.expect("at least one sector");
    Ok(GroundStateResult {
        energy,
        residual,
        method,
        sectors: dec.sector_count(),
    })
}

fn residual_of<T: Real>(op: &CompiledOperator<T>, v: &DVector<Complex<T>>, energy: T) -> T {
    let mut hv = DVector::zeros(v.len());
    op.apply(v, &mut hv);
    (hv - v * Complex::new(energy, T::zero())).norm()
}

fn dense_ground<T: Real>(op: &CompiledOperator<T>) -> (T, T) {
    let eig = op.dense().symmetric_eigen();
    let (idx, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite eigenvalues"))
        .expect("non-empty spectrum");
    let v = eig.eigenvectors.column(idx).into_owned();
    (energy, residual_of(op, &v, energy))
}

fn random_unit<T: Real>(dim: usize, rng: &mut ChaCha8Rng) -> DVector<Complex<T>> {
    let v = DVector::from_fn(dim, |_, _| {
        Complex::new(
            T::lit(rng.gen::<f64>() - 0.5),
            T::lit(rng.gen::<f64>() - 0.5),
        )
    });
    let n = v.norm();
    v / Complex::new(n, T::zero())
}

/// Restarted Lanczos with full reorthogonalization. Each cycle builds a
/// Krylov basis of at most `caps.krylov` vectors and restarts from the
/// lowest Ritz vector.
fn lanczos_ground<T: Real>(op: &CompiledOperator<T>, caps: &Caps) -> Result<(T, T)> {
    let dim = op.dimension();
    let m = caps.krylov.min(dim).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut start = random_unit::<T>(dim, &mut rng);
    let tol = T::tolerance(RESIDUAL_TOL) * Float::max(T::one(), op.norm_bound());
    let mut matvecs = 0usize;
    let mut last_residual = T::infinity();

    while matvecs < caps.max_iterations {
        let mut basis: Vec<DVector<Complex<T>>> = vec![start.clone()];
        let mut alphas: Vec<T> = Vec::new();
        let mut betas: Vec<T> = Vec::new();
        let mut w = DVector::zeros(dim);
        for j in 0..m {
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            let alpha = basis[j].dotc(&w).re;
            alphas.push(alpha);
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for b in &basis {
                    let proj = b.dotc(&w);
                    w.axpy(-proj, b, Complex::new(T::one(), T::zero()));
                }
            }
            let beta = w.norm();
            if j + 1 == m || beta <= T::tolerance(1e-13) * Float::max(T::one(), Float::abs(alpha)) {
                break;
            }
            betas.push(beta);
            basis.push(&w / Complex::new(beta, T::zero()));
            if matvecs >= caps.max_iterations {
                break;
            }
        }
        let k = alphas.len();
        let mut tri = DMatrix::<T>::zeros(k, k);
        for i in 0..k {
            tri[(i, i)] = alphas[i];
            if i + 1 < k {
                tri[(i, i + 1)] = betas[i];
                tri[(i + 1, i)] = betas[i];
            }
        }
        let eig = tri.symmetric_eigen();
        let (idx, &theta) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite Ritz values"))
            .expect("non-empty tridiagonal");
        let y = eig.eigenvectors.column(idx);
        let mut ritz = DVector::<Complex<T>>::zeros(dim);
        for (i, b) in basis.iter().take(k).enumerate() {
            ritz.axpy(
                Complex::new(y[i], T::zero()),
                b,
                Complex::new(T::one(), T::zero()),
            );
        }
        let norm = ritz.norm();
        ritz /= Complex::new(norm, T::zero());
        let residual = residual_of(op, &ritz, theta);
        matvecs += 1;
        if residual <= tol {
            return Ok((theta, residual));
        }
        last_residual = residual;
        start = ritz;
    }
    Err(Error::NonConvergence {
        iterations: matvecs,
        residual: last_residual.as_f64(),
    })
}
