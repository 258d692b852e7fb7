use std::collections::BTreeSet;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::pauli::{operator_norm_local, PauliString, PauliSum, PauliTerm, LOCAL_NORM_CAP};
use crate::scalar::Real;

/// `J · A ⊗ B` or `J · A ⊗ B ⊗ C` with pairwise-disjoint factor supports and
/// `‖factor‖ ≤ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizedInteraction<T> {
    pub j: T,
    pub factors: Vec<PauliSum<T>>,
}

/// How many factors to split a term into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arity {
    Two,
    Three,
}

impl<T: Real> FactorizedInteraction<T> {
    pub fn new(j: T, factors: Vec<PauliSum<T>>) -> Result<Self> {
        if !(j > T::zero()) || !Float::is_finite(j) {
            return Err(Error::InvalidInteraction(format!(
                "strength must be positive and finite, found {j}"
            )));
        }
        if !(2..=3).contains(&factors.len()) {
            return Err(Error::InvalidInteraction(format!(
                "expected 2 or 3 factors, found {}",
                factors.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for f in &factors {
            let support = f.support();
            if support.is_empty() {
                return Err(Error::InvalidInteraction("factor acts trivially".into()));
            }
            for q in support {
                if !seen.insert(q) {
                    return Err(Error::InvalidInteraction(format!(
                        "overlapping supports on qubit {q}"
                    )));
                }
            }
            let norm = operator_norm_local(f, LOCAL_NORM_CAP)?;
            if norm > T::one() + T::tolerance(1e-12) {
                return Err(Error::InvalidInteraction(format!(
                    "factor norm {norm} exceeds 1"
                )));
            }
        }
        Ok(Self { j, factors })
    }

    pub fn a(&self) -> &PauliSum<T> {
        &self.factors[0]
    }

    pub fn b(&self) -> &PauliSum<T> {
        &self.factors[1]
    }

    pub fn c(&self) -> Option<&PauliSum<T>> {
        self.factors.get(2)
    }

    /// `J · Π factors`.
    pub fn product(&self) -> PauliSum<T> {
        self.factors
            .iter()
            .skip(1)
            .fold(self.factors[0].clone(), |acc, f| acc.commuting_product(f))
            .scale(self.j)
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.factors.iter().flat_map(|f| f.support()).collect()
    }

    /// `−A + B`.
    pub fn difference(&self) -> PauliSum<T> {
        self.b().clone() - self.a().clone()
    }
}

/// Splits a Pauli term of weight ≥ 3. A two-way split puts the lowest
/// `⌈k/2⌉` support qubits in `A`; a three-way split (weight exactly 3) uses
/// one letter per factor in ascending qubit order. `J = |c|` and a negative
/// coefficient flips the sign of `A`.
pub fn factorize_term<T: Real>(
    term: &PauliTerm<T>,
    arity: Arity,
) -> Result<FactorizedInteraction<T>> {
    let k = term.string.weight();
    if k < 3 {
        return Err(Error::NotFactorizable {
            weight: k,
            reason: "terms of weight below 3 stay in the remainder Hamiltonian".into(),
        });
    }
    if term.coefficient == T::zero() {
        return Err(Error::InvalidInteraction("zero coefficient".into()));
    }
    let letters = term.string.letters();
    let chunks: Vec<&[(usize, crate::Pauli)]> = match arity {
        Arity::Two => {
            let cut = k.div_ceil(2);
            vec![&letters[..cut], &letters[cut..]]
        }
        Arity::Three => {
            if k != 3 {
                return Err(Error::NotFactorizable {
                    weight: k,
                    reason: "three-way split needs exactly 3 letters".into(),
                });
            }
            letters.chunks(1).collect()
        }
    };
    let sign = if term.coefficient < T::zero() {
        -T::one()
    } else {
        T::one()
    };
    let factors = chunks
        .iter()
        .enumerate()
        .map(|(i, chunk)| {
            let s = PauliString::new(chunk.iter().copied()).expect("distinct qubits");
            PauliSum::from_string(if i == 0 { sign } else { T::one() }, s)
        })
        .collect();
    FactorizedInteraction::new(Float::abs(term.coefficient), factors)
}
