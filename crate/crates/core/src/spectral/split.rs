use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use super::{spectral_norm, CMatrix, DenseOperator};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Low/high-energy split induced by a set of mediator qubits: `P` projects
/// every mediator onto |0>, `Q = I − P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectorSplit {
    pub n_qubits: usize,
    pub mediators: BTreeSet<usize>,
}

impl ProjectorSplit {
    pub fn new(n_qubits: usize, mediators: impl IntoIterator<Item = usize>) -> Self {
        Self {
            n_qubits,
            mediators: mediators.into_iter().collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        1 << self.n_qubits
    }

    fn mediator_mask(&self) -> usize {
        self.mediators.iter().fold(0, |m, &u| m | (1 << u))
    }

    pub fn in_p(&self, index: usize) -> bool {
        index & self.mediator_mask() == 0
    }

    /// Basis indices spanning range(P), ascending.
    pub fn p_indices(&self) -> Vec<usize> {
        (0..self.dimension()).filter(|&i| self.in_p(i)).collect()
    }

    pub fn q_indices(&self) -> Vec<usize> {
        (0..self.dimension()).filter(|&i| !self.in_p(i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.dimension() >> self.mediators.len()
    }

    pub fn projector_p<T: Real>(&self) -> CMatrix<T> {
        let dim = self.dimension();
        CMatrix::from_fn(dim, dim, |i, j| {
            if i == j && self.in_p(i) {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    pub fn projector_q<T: Real>(&self) -> CMatrix<T> {
        let dim = self.dimension();
        CMatrix::<T>::identity(dim, dim) - self.projector_p::<T>()
    }
}

/// The four blocks of an operator in the P/Q-ordered basis, with their
/// spectral norms.
#[derive(Clone, Debug)]
pub struct Blocks<T: Real> {
    pub pp: CMatrix<T>,
    pub pq: CMatrix<T>,
    pub qp: CMatrix<T>,
    pub qq: CMatrix<T>,
    pub pp_norm: T,
    pub pq_norm: T,
    pub qp_norm: T,
    pub qq_norm: T,
}

fn submatrix<T: Real>(m: &CMatrix<T>, rows: &[usize], cols: &[usize]) -> CMatrix<T> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

pub fn block_extract<T: Real>(m: &DenseOperator<T>, split: &ProjectorSplit) -> Result<Blocks<T>> {
    if m.dimension() != split.dimension() {
        return Err(Error::DimensionMismatch {
            expected: split.dimension(),
            found: m.dimension(),
        });
    }
    let (p, q) = (split.p_indices(), split.q_indices());
    let pp = submatrix(&m.matrix, &p, &p);
    let pq = submatrix(&m.matrix, &p, &q);
    let qp = submatrix(&m.matrix, &q, &p);
    let qq = submatrix(&m.matrix, &q, &q);
    Ok(Blocks {
        pp_norm: spectral_norm(&pp),
        pq_norm: spectral_norm(&pq),
        qp_norm: spectral_norm(&qp),
        qq_norm: spectral_norm(&qq),
        pp,
        pq,
        qp,
        qq,
    })
}
