//! Line-oriented Hamiltonian text format.
//!
//! ```text
//! # comment
//! 1.0 Z0 Z1 Z2 Z3
//! -0.5 X0
//! 2.0 I
//! ```
//!
//! Each line is a coefficient followed by `<letter><qubit>` tokens. Blank
//! lines and `#` comments are skipped; `<coefficient> I` is an identity term.
//! Repeated strings are merged on parse.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::scalar::Real;

pub fn parse_hamiltonian<T: Real>(source: &str) -> Result<PauliSum<T>> {
    let mut terms = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let mut tokens = line.split_whitespace();
        let coef_tok = tokens.next().expect("non-empty line has a token");
        let coefficient: T = coef_tok
            .parse()
            .map_err(|_| err(format!("non-numeric coefficient `{coef_tok}`")))?;
        if !num_traits::Float::is_finite(coefficient) {
            return Err(err(format!("coefficient `{coef_tok}` is not finite")));
        }
        let mut letters = Vec::new();
        let mut saw_any = false;
        for tok in tokens {
            saw_any = true;
            if tok == "I" {
                continue;
            }
            let mut chars = tok.chars();
            let first = chars.next().unwrap_or(' ');
            let rest = chars.as_str();
            let index: usize = rest
                .parse()
                .map_err(|_| err(format!("malformed Pauli token `{tok}`")))?;
            if first == 'I' {
                continue;
            }
            let letter = Pauli::from_char(first)
                .ok_or_else(|| err(format!("unknown Pauli letter in `{tok}`")))?;
            letters.push((index, letter));
        }
        if !saw_any {
            return Err(err(
                "term has no Pauli letters (write `I` for identity)".into()
            ));
        }
        let string = PauliString::new(letters).map_err(|e| match e {
            Error::DuplicateQubit(q) => err(format!("qubit {q} appears twice in one term")),
            other => other,
        })?;
        terms.push((coefficient, string));
    }
    Ok(PauliSum::from_terms(terms, T::zero()))
}

pub fn parse_hamiltonian_file<T: Real>(path: impl AsRef<Path>) -> Result<PauliSum<T>> {
    let path = path.as_ref();
    let source = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_hamiltonian(&source)
}

/// Serializes in normalized order; the identity offset, when nonzero, comes
/// first as `<c> I`. Coefficients use the shortest round-tripping decimal form.
pub fn to_text<T: Real>(h: &PauliSum<T>) -> String {
    let mut out = String::new();
    if !h.offset().is_zero() {
        writeln!(out, "{} I", h.offset()).unwrap();
    }
    for t in h.terms() {
        writeln!(out, "{} {}", t.coefficient, t.string).unwrap();
    }
    out
}
