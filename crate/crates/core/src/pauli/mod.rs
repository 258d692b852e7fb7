//! Symbolic algebra for real-weighted Pauli strings.
//!
//! A [`PauliSum`] is a Hermitian operator `offset·I + Σ c_j P_j` with real
//! coefficients. It is kept in normalized form at all times: one term per
//! distinct string, no zero coefficients, terms ordered by
//! (support, letters). The identity component is tracked separately in
//! `offset` so constant shifts never show up in the locality profile.
//!
//! Anti-Hermitian operators are represented by [`AntiHermitian`], which stores
//! the Hermitian operator `G = iS` and stands for `S = -iG`. With that
//! convention [`commutator`] returns `-i[a, b]`, so `[S, X] = commutator(G, X)`
//! and nested commutators stay in real arithmetic.

mod text;

pub use text::{parse_hamiltonian, parse_hamiltonian_file, to_text};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Single-qubit Pauli letter. The identity is never stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// True for X and Y, which exchange |0> and |1>.
    pub fn flips(self) -> bool {
        !matches!(self, Pauli::Z)
    }

    /// Product `self · other` as a phase and a letter (`None` for identity).
    pub fn mul(self, other: Pauli) -> (Phase, Option<Pauli>) {
        use Pauli::*;
        match (self, other) {
            (a, b) if a == b => (Phase::ONE, None),
            (X, Y) => (Phase::I, Some(Z)),
            (Y, Z) => (Phase::I, Some(X)),
            (Z, X) => (Phase::I, Some(Y)),
            (Y, X) => (Phase::MINUS_I, Some(Z)),
            (Z, Y) => (Phase::MINUS_I, Some(X)),
            (X, Z) => (Phase::MINUS_I, Some(Y)),
            _ => unreachable!(),
        }
    }
}

/// A phase `i^k`, `k ∈ {0, 1, 2, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn from_power(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// `(re, im)` of the phase as small integers.
    pub fn parts(self) -> (i8, i8) {
        match self.0 {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Tensor product of single-qubit Pauli letters; qubits not listed carry the
/// identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    // sorted by qubit, no repeats
    letters: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(qubit: usize, letter: Pauli) -> Self {
        Self {
            letters: vec![(qubit, letter)],
        }
    }

    /// Builds a string from `(qubit, letter)` pairs in any order.
    pub fn new(letters: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, p) in letters {
            if map.insert(q, p).is_some() {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(Self {
            letters: map.into_iter().collect(),
        })
    }

    /// Parses compact notation such as `"X0 Z1"` or `"I"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "I" {
                continue;
            }
            let mut chars = tok.chars();
            let letter = chars
                .next()
                .and_then(Pauli::from_char)
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("bad Pauli token `{tok}`"),
                })?;
            let q: usize = chars.as_str().parse().map_err(|_| Error::Parse {
                line: 0,
                message: format!("bad qubit index in `{tok}`"),
            })?;
            letters.push((q, letter));
        }
        Self::new(letters)
    }

    pub fn letters(&self) -> &[(usize, Pauli)] {
        &self.letters
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters.iter().map(|&(q, _)| q)
    }

    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn get(&self, qubit: usize) -> Option<Pauli> {
        self.letters
            .binary_search_by_key(&qubit, |&(q, _)| q)
            .ok()
            .map(|i| self.letters[i].1)
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.letters.last().map(|&(q, _)| q)
    }

    /// True when every letter is Z.
    pub fn is_diagonal(&self) -> bool {
        self.letters.iter().all(|&(_, p)| p == Pauli::Z)
    }

    pub fn flips(&self, qubit: usize) -> bool {
        self.get(qubit).is_some_and(Pauli::flips)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let (mut i, mut j, mut clashes) = (0, 0, 0usize);
        let (a, b) = (&self.letters, &other.letters);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    if a[i].1 != b[j].1 {
                        clashes += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        clashes % 2 == 0
    }

    /// Bit masks `(x, z)` of the symplectic representation; Y sets both.
    pub fn masks(&self) -> (u64, u64) {
        let (mut x, mut z) = (0u64, 0u64);
        for &(q, p) in &self.letters {
            match p {
                Pauli::X => x |= 1 << q,
                Pauli::Z => z |= 1 << q,
                Pauli::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
            }
        }
        (x, z)
    }

    pub fn relabel(&self, map: &BTreeMap<usize, usize>) -> Result<Self> {
        let mut out = Vec::with_capacity(self.letters.len());
        for &(q, p) in &self.letters {
            let target = *map.get(&q).ok_or(Error::UnmappedQubit(q))?;
            out.push((target, p));
        }
        Self::new(out)
    }

    /// Drops the letters on `qubits`.
    pub fn without(&self, qubits: &BTreeSet<usize>) -> Self {
        Self {
            letters: self
                .letters
                .iter()
                .copied()
                .filter(|(q, _)| !qubits.contains(q))
                .collect(),
        }
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support().cmp(other.support()).then_with(|| {
            self.letters
                .iter()
                .map(|l| l.1)
                .cmp(other.letters.iter().map(|l| l.1))
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        for (i, (q, p)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", p.as_char(), q)?;
        }
        Ok(())
    }
}

/// Operator product `a · b = phase · product`, qubit by qubit.
pub fn multiply(a: &PauliString, b: &PauliString) -> (Phase, PauliString) {
    let (x, y) = (&a.letters, &b.letters);
    let mut out = Vec::with_capacity(x.len() + y.len());
    let mut phase = Phase::ONE;
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let ord = match (x.get(i), y.get(j)) {
            (Some(l), Some(r)) => l.0.cmp(&r.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(x[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(y[j]);
                j += 1;
            }
            Ordering::Equal => {
                let (ph, letter) = x[i].1.mul(y[j].1);
                phase = phase * ph;
                if let Some(l) = letter {
                    out.push((x[i].0, l));
                }
                i += 1;
                j += 1;
            }
        }
    }
    (phase, PauliString { letters: out })
}

/// One weighted Pauli string.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm<T> {
    pub coefficient: T,
    pub string: PauliString,
}

impl<T: Real> PauliTerm<T> {
    pub fn new(coefficient: T, string: PauliString) -> Self {
        Self {
            coefficient,
            string,
        }
    }
}

/// Maximal support size `k`, maximal number of terms touching one qubit `m`
/// and maximal coefficient magnitude `j`, identity offset excluded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalityProfile<T> {
    pub k: usize,
    pub m: usize,
    pub j: T,
}

/// Hermitian operator as a real-weighted sum of Pauli strings.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum<T> {
    terms: Vec<PauliTerm<T>>,
    offset: T,
}

impl<T: Real> Default for PauliSum<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> PauliSum<T> {
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            offset: T::zero(),
        }
    }

    pub fn constant(offset: T) -> Self {
        Self {
            terms: Vec::new(),
            offset,
        }
    }

    pub fn from_string(coefficient: T, string: PauliString) -> Self {
        Self::from_terms([(coefficient, string)], T::zero())
    }

    /// `coefficient` times a string given in compact notation, e.g. `"Z0 Z1"`.
    /// Panics on malformed input; intended for literals in code and tests.
    pub fn term(coefficient: T, s: &str) -> Self {
        Self::from_string(
            coefficient,
            PauliString::parse(s).expect("valid Pauli literal"),
        )
    }

    pub fn single(coefficient: T, qubit: usize, letter: Pauli) -> Self {
        Self::from_string(coefficient, PauliString::single(qubit, letter))
    }

    /// Normalizing constructor. Identity strings are folded into the offset.
    pub fn from_terms(terms: impl IntoIterator<Item = (T, PauliString)>, offset: T) -> Self {
        let mut acc: BTreeMap<PauliString, T> = BTreeMap::new();
        let mut offset = offset;
        for (c, s) in terms {
            if s.is_identity() {
                offset += c;
            } else {
                let e = acc.entry(s).or_insert_with(T::zero);
                *e += c;
            }
        }
        Self::from_map(acc, offset)
    }

    fn from_map(acc: BTreeMap<PauliString, T>, offset: T) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(string, coefficient)| PauliTerm {
                coefficient,
                string,
            })
            .collect();
        Self { terms, offset }
    }

    /// Re-runs normalization. Values are always normalized, so this is the
    /// identity on well-formed input.
    pub fn normalize(&self) -> Self {
        Self::from_terms(
            self.terms.iter().map(|t| (t.coefficient, t.string.clone())),
            self.offset,
        )
    }

    pub fn terms(&self) -> &[PauliTerm<T>] {
        &self.terms
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// No non-identity terms (the offset may be nonzero).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The zero operator.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.offset.is_zero()
    }

    pub fn coefficient_of(&self, s: &PauliString) -> T {
        if s.is_identity() {
            return self.offset;
        }
        self.terms
            .binary_search_by(|t| t.string.cmp(s))
            .map(|i| self.terms[i].coefficient)
            .unwrap_or_else(|_| T::zero())
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.terms.iter().flat_map(|t| t.string.support()).collect()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.terms.iter().filter_map(|t| t.string.max_qubit()).max()
    }

    /// Smallest register that holds every support qubit.
    pub fn min_qubits(&self) -> usize {
        self.max_qubit().map_or(0, |q| q + 1)
    }

    pub fn scale(&self, factor: T) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| (t.coefficient * factor, t.string.clone())),
            self.offset * factor,
        )
    }

    pub fn without_offset(&self) -> Self {
        Self {
            terms: self.terms.clone(),
            offset: T::zero(),
        }
    }

    /// Keeps only the terms accepted by `keep`; the offset is retained.
    pub fn filter(&self, mut keep: impl FnMut(&PauliTerm<T>) -> bool) -> Self {
        Self {
            terms: self.terms.iter().filter(|t| keep(t)).cloned().collect(),
            offset: self.offset,
        }
    }

    /// Drops terms with `|c| <= tol` (and an offset below `tol`).
    pub fn prune(&self, tol: T) -> Self {
        let offset = if Float::abs(self.offset) <= tol {
            T::zero()
        } else {
            self.offset
        };
        Self {
            terms: self
                .terms
                .iter()
                .filter(|t| Float::abs(t.coefficient) > tol)
                .cloned()
                .collect(),
            offset,
        }
    }

    /// Largest absolute coefficient difference, offset included.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let diff = self.clone() - other.clone();
        diff.terms
            .iter()
            .map(|t| Float::abs(t.coefficient))
            .fold(Float::abs(diff.offset), Float::max)
    }

    /// Coefficient-wise equality up to `tol`.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// `Σ |c_j|` over non-identity terms plus `|offset|`; an upper bound on
    /// the operator norm.
    pub fn one_norm(&self) -> T {
        self.terms.iter().fold(Float::abs(self.offset), |acc, t| {
            acc + Float::abs(t.coefficient)
        })
    }

    /// Relabels qubits through an injective map defined on the support.
    pub fn embed(&self, qubit_map: &BTreeMap<usize, usize>) -> Result<Self> {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for q in self.support() {
            let t = *qubit_map.get(&q).ok_or(Error::UnmappedQubit(q))?;
            if let Some(prev) = seen.insert(t, q) {
                return Err(Error::NonInjectiveMap(prev, q, t));
            }
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            terms.push((t.coefficient, t.string.relabel(qubit_map)?));
        }
        Ok(Self::from_terms(terms, self.offset))
    }

    /// Maps the support onto `0..s` in ascending order; returns the compact
    /// operator and the original qubit of each new index.
    pub fn compact(&self) -> (Self, Vec<usize>) {
        let support: Vec<usize> = self.support().into_iter().collect();
        let map: BTreeMap<usize, usize> =
            support.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let compact = self
            .embed(&map)
            .expect("support map is injective and total");
        (compact, support)
    }

    pub fn locality_profile(&self) -> LocalityProfile<T> {
        let mut k = 0;
        let mut j = T::zero();
        let mut per_qubit: BTreeMap<usize, usize> = BTreeMap::new();
        for t in &self.terms {
            k = k.max(t.string.weight());
            j = Float::max(j, Float::abs(t.coefficient));
            for q in t.string.support() {
                *per_qubit.entry(q).or_insert(0) += 1;
            }
        }
        LocalityProfile {
            k,
            m: per_qubit.values().copied().max().unwrap_or(0),
            j,
        }
    }

    /// Splits into the terms that commute with `Z_qubit` and those that flip it.
    pub fn split_by_flip(&self, qubit: usize) -> (Self, Self) {
        let diag = self.filter(|t| !t.string.flips(qubit));
        let mut off = self.filter(|t| t.string.flips(qubit));
        off.offset = T::zero();
        (diag, off)
    }

    /// Symbolic compression `P · self · P` where `P` projects every qubit in
    /// `mediators` onto |0>. Strings flipping a mediator vanish; Z on a
    /// mediator becomes the identity. The result lives on the remaining qubits
    /// with their original labels.
    pub fn project_low(&self, mediators: &BTreeSet<usize>) -> Self {
        let kept = self
            .terms
            .iter()
            .filter(|t| !mediators.iter().any(|&u| t.string.flips(u)))
            .map(|t| (t.coefficient, t.string.without(mediators)));
        Self::from_terms(kept, self.offset)
    }

    /// Number of terms touching each qubit.
    pub fn qubit_degrees(&self) -> BTreeMap<usize, usize> {
        let mut deg = BTreeMap::new();
        for t in &self.terms {
            for q in t.string.support() {
                *deg.entry(q).or_insert(0) += 1;
            }
        }
        deg
    }
}

impl<T: Real> Add for PauliSum<T> {
    type Output = PauliSum<T>;
    fn add(self, rhs: PauliSum<T>) -> PauliSum<T> {
        let offset = self.offset + rhs.offset;
        PauliSum::from_terms(
            self.terms
                .into_iter()
                .chain(rhs.terms)
                .map(|t| (t.coefficient, t.string)),
            offset,
        )
    }
}

impl<T: Real> Sub for PauliSum<T> {
    type Output = PauliSum<T>;
    fn sub(self, rhs: PauliSum<T>) -> PauliSum<T> {
        self + (-rhs)
    }
}

impl<T: Real> Neg for PauliSum<T> {
    type Output = PauliSum<T>;
    fn neg(self) -> PauliSum<T> {
        PauliSum {
            terms: self
                .terms
                .into_iter()
                .map(|t| PauliTerm {
                    coefficient: -t.coefficient,
                    string: t.string,
                })
                .collect(),
            offset: -self.offset,
        }
    }
}

impl<T: Real> std::iter::Sum for PauliSum<T> {
    fn sum<I: Iterator<Item = PauliSum<T>>>(iter: I) -> Self {
        let mut acc: BTreeMap<PauliString, T> = BTreeMap::new();
        let mut offset = T::zero();
        for s in iter {
            offset += s.offset;
            for t in s.terms {
                let e = acc.entry(t.string).or_insert_with(T::zero);
                *e += t.coefficient;
            }
        }
        PauliSum::from_map(acc, offset)
    }
}

impl<T: Real> fmt::Display for PauliSum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.offset.is_zero() || self.terms.is_empty() {
            write!(f, "{}·I", self.offset)?;
            first = false;
        }
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}·{}", t.coefficient, t.string)?;
            first = false;
        }
        Ok(())
    }
}

/// Real and imaginary Hermitian parts of a general operator product.
#[derive(Clone, Debug, PartialEq)]
pub struct Product<T> {
    pub re: PauliSum<T>,
    pub im: PauliSum<T>,
}

/// `a · b = re + i·im` with `re`, `im` real-weighted Pauli sums.
pub fn product<T: Real>(a: &PauliSum<T>, b: &PauliSum<T>) -> Product<T> {
    let mut re: BTreeMap<PauliString, T> = BTreeMap::new();
    let mut im: BTreeMap<PauliString, T> = BTreeMap::new();
    let a_terms = a.iter_with_identity();
    let b_terms: Vec<_> = b.iter_with_identity().collect();
    for (ca, sa) in a_terms {
        for &(cb, ref sb) in &b_terms {
            let (phase, s) = multiply(&sa, sb);
            let c = ca * cb;
            let (pr, pi) = phase.parts();
            if pr != 0 {
                let e = re.entry(s.clone()).or_insert_with(T::zero);
                *e += T::lit(pr as f64) * c;
            }
            if pi != 0 {
                let e = im.entry(s).or_insert_with(T::zero);
                *e += T::lit(pi as f64) * c;
            }
        }
    }
    let split = |m: BTreeMap<PauliString, T>| {
        let mut offset = T::zero();
        let terms: Vec<_> = m
            .into_iter()
            .filter_map(|(s, c)| {
                if s.is_identity() {
                    offset += c;
                    None
                } else {
                    Some((c, s))
                }
            })
            .collect();
        PauliSum::from_terms(terms, offset)
    };
    Product {
        re: split(re),
        im: split(im),
    }
}

impl<T: Real> PauliSum<T> {
    fn iter_with_identity(&self) -> impl Iterator<Item = (T, PauliString)> + '_ {
        let id = if self.offset.is_zero() {
            None
        } else {
            Some((self.offset, PauliString::identity()))
        };
        id.into_iter()
            .chain(self.terms.iter().map(|t| (t.coefficient, t.string.clone())))
    }

    /// Product of two operators known to commute, which is again Hermitian.
    /// Panics if an imaginary part survives beyond rounding.
    pub fn commuting_product(&self, other: &Self) -> Self {
        let p = product(self, other);
        let scale = Float::max(self.one_norm() * other.one_norm(), T::one());
        assert!(
            p.im.one_norm() <= T::tolerance(1e-12) * scale,
            "commuting_product called on non-commuting operators"
        );
        p.re
    }

    pub fn square(&self) -> Self {
        self.commuting_product(self)
    }
}

/// Hermitian representation `-i[a, b]` of the commutator of two Hermitian
/// operators. The actual commutator is `i` times the returned sum.
pub fn commutator<T: Real>(a: &PauliSum<T>, b: &PauliSum<T>) -> PauliSum<T> {
    let mut acc: BTreeMap<PauliString, T> = BTreeMap::new();
    for ta in &a.terms {
        for tb in &b.terms {
            if ta.string.commutes_with(&tb.string) {
                continue;
            }
            // [P, Q] = 2PQ = 2 i^k R with k odd; -i · 2 i^k = 2 i^(k-1) is real.
            let (phase, s) = multiply(&ta.string, &tb.string);
            let sign = if phase == Phase::I { 2.0 } else { -2.0 };
            let e = acc.entry(s).or_insert_with(T::zero);
            *e += T::lit(sign) * ta.coefficient * tb.coefficient;
        }
    }
    PauliSum::from_map(acc, T::zero())
}

/// Anti-Hermitian operator `S = -i·G`, stored through the Hermitian `G = iS`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiHermitian<T> {
    i_times: PauliSum<T>,
}

impl<T: Real> AntiHermitian<T> {
    pub fn zero() -> Self {
        Self {
            i_times: PauliSum::zero(),
        }
    }

    /// Wraps `G` so that the represented operator is `S = -iG`.
    pub fn from_i_times(g: PauliSum<T>) -> Self {
        Self { i_times: g }
    }

    /// The Hermitian operator `iS`.
    pub fn i_times(&self) -> &PauliSum<T> {
        &self.i_times
    }

    pub fn is_zero(&self) -> bool {
        self.i_times.is_zero()
    }

    pub fn scale(&self, t: T) -> Self {
        Self::from_i_times(self.i_times.scale(t))
    }

    /// `[S, x]`, returned as a Hermitian sum.
    pub fn apply(&self, x: &PauliSum<T>) -> PauliSum<T> {
        commutator(&self.i_times, x)
    }
}

impl<T: Real> Add for AntiHermitian<T> {
    type Output = AntiHermitian<T>;
    fn add(self, rhs: Self) -> Self {
        Self::from_i_times(self.i_times + rhs.i_times)
    }
}

impl<T: Real> std::iter::Sum for AntiHermitian<T> {
    fn sum<I: Iterator<Item = AntiHermitian<T>>>(iter: I) -> Self {
        Self::from_i_times(iter.map(|s| s.i_times).sum())
    }
}

/// Largest singular value of `op` on its own support. Fails when the support
/// is wider than `cap` qubits.
pub fn operator_norm_local<T: Real>(op: &PauliSum<T>, cap: usize) -> Result<T> {
    let (compact, support) = op.compact();
    if support.len() > cap {
        return Err(Error::CapExceeded {
            support: support.len(),
            cap,
        });
    }
    if compact.is_empty() {
        return Ok(Float::abs(compact.offset()));
    }
    // Single strings and sums of pairwise-commuting strings with disjoint
    // supports have closed forms, but the dense route is exact and cheap here.
    let m = crate::spectral::to_matrix_unchecked(&compact, support.len());
    Ok(crate::spectral::hermitian_norm(&m))
}

/// Default qubit cap for [`operator_norm_local`].
pub const LOCAL_NORM_CAP: usize = 12;

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn single_qubit_products() {
        assert_eq!(multiply(&ps("X0"), &ps("Y0")), (Phase::I, ps("Z0")));
        assert_eq!(
            multiply(&ps("X0"), &ps("X0")),
            (Phase::ONE, PauliString::identity())
        );
        assert_eq!(multiply(&ps("X0"), &ps("Z1")), (Phase::ONE, ps("X0 Z1")));
        assert_eq!(multiply(&ps("Z0"), &ps("X0")), (Phase::I, ps("Y0")));
        assert_eq!(multiply(&ps("X0"), &ps("Z0")), (Phase::MINUS_I, ps("Y0")));
    }

    #[test]
    fn string_equality_is_letter_map_equality() {
        assert_eq!(ps("Z1 X0"), ps("X0 Z1"));
        assert_ne!(ps("X0 Z1"), ps("X0 Z2"));
        assert!(PauliString::new([(0, Pauli::X), (0, Pauli::Z)]).is_err());
    }

    #[test]
    fn commutators_follow_su2() {
        let z0 = PauliSum::<f64>::term(1.0, "Z0");
        let z0z1 = PauliSum::term(1.0, "Z0 Z1");
        assert!(commutator(&z0, &z0z1).is_zero());

        let x0 = PauliSum::<f64>::term(1.0, "X0");
        let c = commutator(&x0, &z0);
        assert_eq!(c, PauliSum::term(-2.0, "Y0"));
    }

    #[test]
    fn embed_relabels() {
        let map: BTreeMap<usize, usize> = [(0, 5)].into();
        assert_eq!(
            PauliSum::<f64>::term(1.0, "Z0").embed(&map).unwrap(),
            PauliSum::term(1.0, "Z5")
        );
        let map: BTreeMap<usize, usize> = [(0, 2), (1, 0)].into();
        assert_eq!(
            PauliSum::<f64>::term(1.0, "X0 Z1").embed(&map).unwrap(),
            PauliSum::term(1.0, "X2 Z0")
        );
        let c = PauliSum::<f64>::constant(1.0);
        assert_eq!(c.embed(&BTreeMap::new()).unwrap(), c);
    }

    #[test]
    fn embed_rejects_bad_maps() {
        let h = PauliSum::<f64>::term(1.0, "X0 Z1");
        let collide: BTreeMap<usize, usize> = [(0, 3), (1, 3)].into();
        assert!(matches!(
            h.embed(&collide),
            Err(Error::NonInjectiveMap(0, 1, 3))
        ));
        let partial: BTreeMap<usize, usize> = [(0, 3)].into();
        assert_eq!(h.embed(&partial), Err(Error::UnmappedQubit(1)));
    }

    #[test]
    fn locality_profiles() {
        let p = PauliSum::<f64>::term(1.0, "Z0 Z1 Z2 Z3").locality_profile();
        assert_eq!((p.k, p.m, p.j), (4, 1, 1.0));

        let empty = PauliSum::<f64>::constant(3.0).locality_profile();
        assert_eq!((empty.k, empty.m, empty.j), (0, 0, 0.0));

        // open Heisenberg chain on 4 qubits: interior qubits touch 2 bonds × 3 letters
        let mut terms = Vec::new();
        for i in 0..3 {
            for l in ["X", "Y", "Z"] {
                terms.push((1.0, ps(&format!("{l}{i} {l}{}", i + 1))));
            }
        }
        let h = PauliSum::from_terms(terms, 0.0);
        let p = h.locality_profile();
        let brute = (0..4)
            .map(|q| {
                h.terms()
                    .iter()
                    .filter(|t| t.string.get(q).is_some())
                    .count()
            })
            .max()
            .unwrap();
        assert_eq!((p.k, p.m, p.j), (2, brute, 1.0));
        assert_eq!(p.m, 6);
    }

    #[test]
    fn offset_excluded_from_profile() {
        let h = PauliSum::<f64>::from_terms([(0.5, ps("Z0"))], 10.0);
        assert_eq!(h.locality_profile().j, 0.5);
    }

    #[test]
    fn local_norms() {
        let n = |h: PauliSum<f64>| operator_norm_local(&h, LOCAL_NORM_CAP).unwrap();
        assert!((n(PauliSum::term(1.0, "Z0 Z1")) - 1.0).abs() < 1e-12);
        let zx = PauliSum::term(1.0, "Z0") + PauliSum::term(1.0, "X0");
        assert!((n(zx) - 2f64.sqrt()).abs() < 1e-12);
        let diff = PauliSum::term(-1.0, "Z0") + PauliSum::term(1.0, "Z1");
        assert!((n(diff) - 2.0).abs() < 1e-12);
        let wide = PauliSum::<f64>::term(1.0, "Z0 Z13");
        assert!(matches!(
            operator_norm_local(&wide, 1),
            Err(Error::CapExceeded { support: 2, cap: 1 })
        ));
    }

    #[test]
    fn normalized_order_is_support_then_letters() {
        let h = PauliSum::<f64>::from_terms(
            [
                (1.0, ps("Z0 Z1")),
                (1.0, ps("X0")),
                (1.0, ps("Z0")),
                (1.0, ps("X1")),
            ],
            0.0,
        );
        let order: Vec<String> = h.terms().iter().map(|t| t.string.to_string()).collect();
        assert_eq!(order, ["X0", "Z0", "Z0 Z1", "X1"]);
    }

    #[test]
    fn zero_terms_are_removed() {
        let h = PauliSum::<f64>::term(1.0, "X0") - PauliSum::term(1.0, "X0");
        assert!(h.is_zero());
    }

    #[test]
    fn project_low_drops_flips_and_traces_z() {
        let h = PauliSum::<f64>::from_terms(
            [(2.0, ps("X4 Z0")), (3.0, ps("Z4 Z1")), (5.0, ps("Z0"))],
            1.0,
        );
        let p = h.project_low(&[4].into());
        assert_eq!(
            p,
            PauliSum::from_terms([(3.0, ps("Z1")), (5.0, ps("Z0"))], 1.0)
        );
    }

    #[test]
    fn anti_hermitian_apply_matches_commutator() {
        let g = PauliSum::<f64>::term(0.5, "Y4 Z1");
        let s = AntiHermitian::from_i_times(g.clone());
        let h = PauliSum::term(1.0, "X4");
        assert_eq!(s.apply(&h), commutator(&g, &h));
    }

    #[test]
    fn works_in_single_precision() {
        let a = PauliSum::<f32>::term(1.0, "X0");
        let b = PauliSum::<f32>::term(1.0, "Z0");
        assert_eq!(commutator(&a, &b), PauliSum::term(-2.0, "Y0"));
    }
}
