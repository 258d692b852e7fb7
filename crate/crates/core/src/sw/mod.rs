//! Schrieffer-Wolff generators.
//!
//! Three constructions of an anti-Hermitian, block-off-diagonal `S`:
//!
//! * [`sw_gadget_closed_form`] – the closed forms for the two gadgets;
//! * [`sw_perturbative`] – the systematic series `S₁ + S₂ + S₃`, built
//!   symbolically from `L₀⁻¹` and nested commutators;
//! * [`sw_exact`] – the direct rotation between `P` and the low-energy
//!   spectral projector of `H`, computed densely.
//!
//! Throughout, `L₀(X) = [H₀, X]` and `L_j(X) = [S_j, X]`.

mod exact;

pub use exact::{effective_hamiltonian, l0_inverse_dense, sw_exact, EffectiveHamiltonian};

use num_traits::Float;

use crate::error::{Error, Result};
use crate::gadget::{GadgetInstance, GadgetKind};
use crate::pauli::{multiply, AntiHermitian, Pauli, PauliSum, Phase};
use crate::scalar::Real;
use crate::spectral::{block_extract, to_matrix, CMatrix, Caps, DenseOperator, ProjectorSplit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwOrder {
    First,
    Second,
    Third,
    Exact,
}

impl SwOrder {
    pub fn from_order(k: usize) -> Option<Self> {
        match k {
            1 => Some(SwOrder::First),
            2 => Some(SwOrder::Second),
            3 => Some(SwOrder::Third),
            _ => None,
        }
    }

    /// Truncation order, `None` for the exact generator.
    pub fn order(self) -> Option<usize> {
        match self {
            SwOrder::First => Some(1),
            SwOrder::Second => Some(2),
            SwOrder::Third => Some(3),
            SwOrder::Exact => None,
        }
    }
}

/// Anti-Hermitian generator together with the split it block-off-diagonalizes.
#[derive(Clone, Debug, PartialEq)]
pub struct SWGenerator<T> {
    pub s: AntiHermitian<T>,
    pub order: SwOrder,
    pub split: ProjectorSplit,
}

/// Dense structural residuals of a generator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorResiduals<T> {
    /// `‖S + S†‖`.
    pub anti_hermitian: T,
    /// `‖PSP‖`.
    pub pp: T,
    /// `‖QSQ‖`.
    pub qq: T,
}

impl<T: Real> GeneratorResiduals<T> {
    pub fn within(&self, tol: T) -> bool {
        self.anti_hermitian <= tol && self.pp <= tol && self.qq <= tol
    }
}

impl<T: Real> SWGenerator<T> {
    pub fn new(s: AntiHermitian<T>, order: SwOrder, split: ProjectorSplit) -> Self {
        Self { s, order, split }
    }

    /// Same generator on a larger register.
    pub fn with_register(mut self, n_qubits: usize) -> Self {
        self.split.n_qubits = n_qubits;
        self
    }

    /// Dense `S = −iG`.
    pub fn dense(&self, caps: &Caps) -> Result<CMatrix<T>> {
        let g = to_matrix(self.s.i_times(), self.split.n_qubits, caps)?;
        Ok(g.matrix * num_complex::Complex::new(T::zero(), -T::one()))
    }

    pub fn residuals(&self, caps: &Caps) -> Result<GeneratorResiduals<T>> {
        let s = self.dense(caps)?;
        let anti_hermitian = crate::spectral::spectral_norm(&(&s + s.adjoint()));
        let blocks = block_extract(
            &DenseOperator {
                matrix: s,
                n_qubits: self.split.n_qubits,
                hermitian: false,
            },
            &self.split,
        )?;
        Ok(GeneratorResiduals {
            anti_hermitian,
            pp: blocks.pp_norm,
            qq: blocks.qq_norm,
        })
    }

    /// Every term flips a mediator: `PSP = 0` without any numerics.
    pub fn flips_mediators(&self) -> bool {
        self.s
            .i_times()
            .terms()
            .iter()
            .all(|t| self.split.mediators.iter().any(|&u| t.string.flips(u)))
            && self.s.i_times().offset() == T::zero()
    }
}

/// `h0` as `offset + Σ h_k Z_k`; fails unless every term is a Z-string.
fn diagonal_terms<T: Real>(h0: &PauliSum<T>) -> Result<Vec<(T, crate::pauli::PauliString)>> {
    h0.terms()
        .iter()
        .map(|t| {
            if t.string.is_diagonal() {
                Ok((t.coefficient, t.string.clone()))
            } else {
                Err(Error::NotDiagonal(t.string.to_string()))
            }
        })
        .collect()
}

/// Symbolic `L₀⁻¹`: the anti-Hermitian `S` with `[h0, S] = x`, for `h0` a sum
/// of Z-strings. Each string `P` of `x` must anticommute with exactly one
/// term `h_k Z_k` of `h0`; it then maps to `−i g Z_kP`-type terms with
/// `g = c φ i/(2h_k)`, where `Z_k P = φ Q`.
pub fn l0_inverse<T: Real>(h0: &PauliSum<T>, x: &PauliSum<T>) -> Result<AntiHermitian<T>> {
    let diag = diagonal_terms(h0)?;
    if x.offset() != T::zero() {
        return Err(Error::BlockDiagonalPart("identity component".into()));
    }
    let mut out = Vec::with_capacity(x.len());
    for t in x.terms() {
        let mut hits = diag.iter().filter(|(_, z)| !z.commutes_with(&t.string));
        let (hk, zk) = match (hits.next(), hits.next()) {
            (None, _) => return Err(Error::BlockDiagonalPart(t.string.to_string())),
            (Some(_), Some(_)) => return Err(Error::DegenerateDenominator(t.string.to_string())),
            (Some(hit), None) => hit,
        };
        if *hk == T::zero() {
            return Err(Error::DegenerateDenominator(t.string.to_string()));
        }
        let (phase, q) = multiply(zk, &t.string);
        // anticommuting strings multiply with phase ±i, so φ i = ∓1
        let phi_i = if phase == Phase::I {
            -T::one()
        } else {
            T::one()
        };
        out.push((t.coefficient * phi_i / (T::lit(2.0) * *hk), q));
    }
    Ok(AntiHermitian::from_i_times(PauliSum::from_terms(
        out,
        T::zero(),
    )))
}

fn single_mediator(split: &ProjectorSplit) -> Result<usize> {
    match split.mediators.len() {
        1 => Ok(*split.mediators.iter().next().expect("one mediator")),
        n => Err(Error::UnsupportedSplit(n)),
    }
}

/// Drops rounding debris below `1e-13` of the largest coefficient.
fn clean<T: Real>(x: PauliSum<T>) -> PauliSum<T> {
    let scale = x.locality_profile().j;
    x.prune(scale * T::tolerance(1e-13))
}

/// The individual orders `S₁, S₂, S₃` of the systematic expansion.
pub fn sw_orders<T: Real>(
    h0: &PauliSum<T>,
    v: &PauliSum<T>,
    split: &ProjectorSplit,
    order: usize,
) -> Result<Vec<AntiHermitian<T>>> {
    if !(1..=3).contains(&order) {
        return Err(Error::OrderCap(order, 3));
    }
    let u = single_mediator(split)?;
    let (v_d, v_od) = v.split_by_flip(u);
    let s1 = l0_inverse(h0, &v_od)?;
    let mut out = vec![s1.clone()];
    if order >= 2 {
        // S₂ = L₀⁻¹ L₁(V_d)
        out.push(l0_inverse(h0, &clean(s1.apply(&v_d)))?);
    }
    if order >= 3 {
        // S₃ = −⅓ L₀⁻¹ L₁³(H₀) + L₀⁻¹ L₂(V_d)
        let l1_cubed = s1.apply(&s1.apply(&s1.apply(h0)));
        let l2 = out[1].apply(&v_d);
        let rhs = l1_cubed.scale(-T::one() / T::lit(3.0)) + l2;
        out.push(l0_inverse(h0, &clean(rhs))?);
    }
    Ok(out)
}

/// `S = S₁ [+ S₂ [+ S₃]]`.
pub fn sw_perturbative<T: Real>(
    h0: &PauliSum<T>,
    v: &PauliSum<T>,
    split: &ProjectorSplit,
    order: usize,
) -> Result<SWGenerator<T>> {
    let parts = sw_orders(h0, v, split, order)?;
    let s =
        AntiHermitian::from_i_times(clean(parts.into_iter().map(|p| p.i_times().clone()).sum()));
    Ok(SWGenerator::new(
        s,
        SwOrder::from_order(order).expect("validated order"),
        split.clone(),
    ))
}

/// Split with the gadget's mediator on the smallest register holding the gadget.
pub fn gadget_split<T: Real>(g: &GadgetInstance<T>) -> ProjectorSplit {
    let n = g.qubits().into_iter().max().map_or(0, |q| q + 1);
    ProjectorSplit::new(n, [g.mediator])
}

/// Closed-form generator of a gadget.
///
/// * subdivision: `S = −i √(J/2Δ) Y_u(−A+B)`;
/// * three-to-two: `S = −i (x/√2) Y_u D [I + xC + x²C² − (2x²/3) D²]`
///   with `D = −A+B` and `x = (J/Δ)^{1/3}`.
pub fn sw_gadget_closed_form<T: Real>(g: &GadgetInstance<T>) -> SWGenerator<T> {
    let f = &g.source;
    let d = f.difference();
    let y = PauliSum::single(T::one(), g.mediator, Pauli::Y);
    let two = T::lit(2.0);
    let (i_times, order) = match g.kind {
        GadgetKind::Subdivision => (
            y.commuting_product(&d)
                .scale(Float::sqrt(f.j / (two * g.gap))),
            SwOrder::First,
        ),
        GadgetKind::ThreeToTwo => {
            let x = g.x.unwrap_or_else(|| Float::cbrt(f.j / g.gap));
            let c = f.c().expect("three-to-two gadget has three factors");
            let bracket = PauliSum::constant(T::one()) + c.scale(x) + c.square().scale(x * x)
                - d.square().scale(two * x * x / T::lit(3.0));
            let g_op = y
                .commuting_product(&d)
                .commuting_product(&bracket)
                .scale(x / Float::sqrt(two));
            (g_op, SwOrder::Third)
        }
    };
    SWGenerator::new(AntiHermitian::from_i_times(i_times), order, gadget_split(g))
}

/// `[S₁, H₀] + V_od` for a gadget's first-order generator; zero when the
/// first-order identity holds.
pub fn first_order_defect<T: Real>(g: &GadgetInstance<T>) -> Result<PauliSum<T>> {
    let s1 = l0_inverse(&g.h0, &g.v_od)?;
    Ok(s1.apply(&g.h0) + g.v_od.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{
        factorize_term, subdivision_gadget, three_to_two_gadget, three_to_two_gadget_with_gap,
        Arity, FactorizedInteraction,
    };
    use crate::pauli::{commutator, PauliString, PauliTerm};

    fn penalty(u: usize, delta: f64) -> PauliSum<f64> {
        crate::gadget::mediator_penalty(u, delta)
    }

    #[test]
    fn l0_inverse_single_flip() {
        let delta = 7.0;
        let c = 0.3;
        let s = l0_inverse(&penalty(0, delta), &PauliSum::term(c, "X0")).unwrap();
        // S = −i(c/Δ) Y
        assert!(s
            .i_times()
            .approx_eq(&PauliSum::term(c / delta, "Y0"), 1e-15));
        // [h0, S] = x, i.e. −[S, h0] = x
        let back = s.apply(&penalty(0, delta)).scale(-1.0);
        assert!(back.approx_eq(&PauliSum::term(c, "X0"), 1e-14));
    }

    #[test]
    fn l0_inverse_zero_and_errors() {
        assert!(l0_inverse(&penalty(0, 5.0), &PauliSum::zero())
            .unwrap()
            .is_zero());
        assert!(matches!(
            l0_inverse(&penalty(0, 5.0), &PauliSum::term(1.0, "Z0 X1")),
            Err(Error::BlockDiagonalPart(_))
        ));
        assert!(matches!(
            l0_inverse(
                &(penalty(0, 5.0) + penalty(1, 5.0)),
                &PauliSum::term(1.0, "X0 X1")
            ),
            Err(Error::DegenerateDenominator(_))
        ));
        assert!(matches!(
            l0_inverse(&PauliSum::term(1.0, "X0"), &PauliSum::term(1.0, "X0")),
            Err(Error::NotDiagonal(_))
        ));
    }

    #[test]
    fn l0_inverse_recovers_subdivision_generator() {
        let g = subdivision_gadget(
            &FactorizedInteraction::new(
                1.0,
                vec![PauliSum::term(1.0, "Z1"), PauliSum::term(1.0, "Z2")],
            )
            .unwrap(),
            0.1,
            0,
        )
        .unwrap();
        let s = l0_inverse(&g.h0, &g.v_od).unwrap();
        let closed = sw_gadget_closed_form(&g);
        assert!(s.i_times().approx_eq(closed.s.i_times(), 1e-14));
        let c = closed.s.i_times().terms()[0].coefficient.abs();
        assert!((c - 0.070711).abs() < 1e-6);
        assert!(first_order_defect(&g).unwrap().prune(1e-12).is_zero());
    }

    fn random_letter_gadget(seed: u64, kind: GadgetKind) -> GadgetInstance<f64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let letters = [Pauli::X, Pauli::Y, Pauli::Z];
        let weight = match kind {
            GadgetKind::Subdivision => rng.gen_range(3..=5),
            GadgetKind::ThreeToTwo => 3,
        };
        let s =
            PauliString::new((0..weight).map(|q| (q + 1, letters[rng.gen_range(0..3)]))).unwrap();
        let c = rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let eps = rng.gen_range(0.05..0.5);
        match kind {
            GadgetKind::Subdivision => subdivision_gadget(
                &factorize_term(&PauliTerm::new(c, s), Arity::Two).unwrap(),
                eps,
                0,
            ),
            GadgetKind::ThreeToTwo => three_to_two_gadget(
                &factorize_term(&PauliTerm::new(c, s), Arity::Three).unwrap(),
                eps,
                0,
            ),
        }
        .unwrap()
    }

    #[test]
    fn closed_forms_match_series() {
        for seed in 0..20 {
            for kind in [GadgetKind::Subdivision, GadgetKind::ThreeToTwo] {
                let g = random_letter_gadget(seed, kind);
                let order = if kind == GadgetKind::Subdivision {
                    1
                } else {
                    3
                };
                let series =
                    sw_perturbative(&g.h0, &g.perturbation(), &gadget_split(&g), order).unwrap();
                let closed = sw_gadget_closed_form(&g);
                let scale = closed.s.i_times().locality_profile().j;
                assert!(
                    series
                        .s
                        .i_times()
                        .approx_eq(closed.s.i_times(), 1e-12 * scale),
                    "seed {seed} {kind}: {} vs {}",
                    series.s.i_times(),
                    closed.s.i_times()
                );
                let strings = |s: &PauliSum<f64>| {
                    s.terms()
                        .iter()
                        .map(|t| t.string.clone())
                        .collect::<Vec<_>>()
                };
                assert_eq!(strings(series.s.i_times()), strings(closed.s.i_times()));
            }
        }
    }

    #[test]
    fn three_to_two_orders_supply_the_expected_terms() {
        // S₂ carries the xC term, S₃ the x²C² and D² terms
        let f = FactorizedInteraction::new(
            1.0,
            vec![
                PauliSum::term(1.0, "X1"),
                PauliSum::term(1.0, "X2"),
                PauliSum::term(1.0, "Z3"),
            ],
        )
        .unwrap();
        let g = three_to_two_gadget_with_gap(&f, 8.0, 0).unwrap();
        let parts = sw_orders(&g.h0, &g.perturbation(), &gadget_split(&g), 3).unwrap();
        let x = 0.5;
        let lead = x / 2f64.sqrt();
        let s1 = PauliSum::term(-lead, "Y0 X1") + PauliSum::term(lead, "Y0 X2");
        assert!(
            parts[0].i_times().approx_eq(&s1, 1e-14),
            "{}",
            parts[0].i_times()
        );
        let s2 =
            (PauliSum::term(-1.0, "Y0 X1 Z3") + PauliSum::term(1.0, "Y0 X2 Z3")).scale(lead * x);
        assert!(
            parts[1].i_times().approx_eq(&s2, 1e-14),
            "{}",
            parts[1].i_times()
        );
        assert!(parts[2].i_times().support().contains(&0));
    }

    #[test]
    fn diagonal_perturbation_gives_zero_generator() {
        let h0 = penalty(0, 10.0);
        let v = PauliSum::term(0.4, "Z0 Z1") + PauliSum::term(0.2, "X1");
        for order in 1..=3 {
            let s = sw_perturbative(&h0, &v, &ProjectorSplit::new(2, [0]), order).unwrap();
            assert!(s.s.is_zero());
        }
        assert!(matches!(
            sw_perturbative(&h0, &v, &ProjectorSplit::new(2, [0]), 4),
            Err(Error::OrderCap(4, 3))
        ));
        assert!(matches!(
            sw_perturbative(&h0, &v, &ProjectorSplit::new(2, [0, 1]), 1),
            Err(Error::UnsupportedSplit(2))
        ));
    }

    #[test]
    fn generators_are_block_off_diagonal() {
        let caps = Caps::default();
        for kind in [GadgetKind::Subdivision, GadgetKind::ThreeToTwo] {
            let g = random_letter_gadget(3, kind);
            let s = sw_gadget_closed_form(&g);
            assert!(s.flips_mediators());
            assert!(s.residuals(&caps).unwrap().within(1e-10));
        }
    }

    #[test]
    fn first_order_identity_for_every_gadget() {
        for seed in 0..10 {
            for kind in [GadgetKind::Subdivision, GadgetKind::ThreeToTwo] {
                let g = random_letter_gadget(seed, kind);
                let scale = g.v_od.locality_profile().j;
                assert!(first_order_defect(&g)
                    .unwrap()
                    .prune(1e-12 * scale)
                    .is_zero());
            }
        }
        // and the symbolic commutator agrees with the dense one
        let g = random_letter_gadget(1, GadgetKind::ThreeToTwo);
        let s1 = l0_inverse(&g.h0, &g.v_od).unwrap();
        let c = commutator(s1.i_times(), &g.h0);
        assert!((c + g.v_od.clone()).prune(1e-9).is_zero());
    }
}
