use rand::Rng;

use crate::error::Result;
use crate::pauli::{AntiHermitian, Pauli, PauliString, PauliSum};
use crate::scalar::Real;
use crate::spectral::{hermitian_norm, to_matrix, Caps};

const LETTERS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

fn random_string(rng: &mut impl Rng, n_qubits: usize) -> PauliString {
    loop {
        let mut letters = Vec::new();
        for q in 0..n_qubits {
            if rng.gen_bool(0.5) {
                letters.push((q, LETTERS[rng.gen_range(0..3)]));
            }
        }
        let s = PauliString::new(letters).expect("distinct qubits");
        if !s.is_identity() {
            return s;
        }
    }
}

/// Sum of `terms` random non-identity strings with coefficients uniform in
/// `[−scale, scale]`.
pub fn random_pauli_sum<T: Real>(
    rng: &mut impl Rng,
    n_qubits: usize,
    terms: usize,
    scale: f64,
) -> PauliSum<T> {
    let t: Vec<_> = (0..terms)
        .map(|_| {
            (
                T::lit(rng.gen_range(-scale..=scale)),
                random_string(rng, n_qubits),
            )
        })
        .collect();
    PauliSum::from_terms(t, T::zero())
}

/// Random anti-Hermitian generator rescaled to operator norm `norm`.
pub fn random_generator<T: Real>(
    rng: &mut impl Rng,
    n_qubits: usize,
    terms: usize,
    norm: f64,
    caps: &Caps,
) -> Result<AntiHermitian<T>> {
    let g = random_pauli_sum::<T>(rng, n_qubits, terms, 1.0);
    let current = hermitian_norm(&to_matrix(&g, n_qubits, caps)?.matrix);
    let g = if current > T::zero() {
        g.scale(T::lit(norm) / current)
    } else {
        g
    };
    Ok(AntiHermitian::from_i_times(g))
}
