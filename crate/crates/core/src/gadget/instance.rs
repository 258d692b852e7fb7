use std::collections::BTreeSet;

use num_traits::Float;

use super::factor::FactorizedInteraction;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliSum};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// `J·AB` with `(⌈k/2⌉+1)`-local couplings through one mediator.
    Subdivision,
    /// `J·ABC` with 2-local couplings through one mediator.
    ThreeToTwo,
}

impl GadgetKind {
    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::Subdivision => "subdivision",
            GadgetKind::ThreeToTwo => "three-to-two",
        }
    }

    /// Exponent of Δ in the leading error term of the gadget.
    pub fn error_exponent(self) -> f64 {
        match self {
            GadgetKind::Subdivision => -0.5,
            GadgetKind::ThreeToTwo => -1.0 / 3.0,
        }
    }

    /// Gap giving relative precision `eps`: `J ε⁻²` or `J ε⁻³`.
    pub fn gap_for<T: Real>(self, j: T, eps: T) -> T {
        match self {
            GadgetKind::Subdivision => j / (eps * eps),
            GadgetKind::ThreeToTwo => j / (eps * eps * eps),
        }
    }

    /// Inverse of [`GadgetKind::gap_for`].
    pub fn epsilon_for<T: Real>(self, j: T, gap: T) -> T {
        match self {
            GadgetKind::Subdivision => Float::sqrt(j / gap),
            GadgetKind::ThreeToTwo => Float::cbrt(j / gap),
        }
    }
}

impl std::fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One mediator qubit `u` with its unperturbed penalty `H0 = Δ|1><1|_u`
/// and the perturbation `V = V_d + V_od + V_extra`.
#[derive(Clone, Debug, PartialEq)]
pub struct GadgetInstance<T> {
    pub kind: GadgetKind,
    pub mediator: usize,
    pub gap: T,
    pub h0: PauliSum<T>,
    pub v_d: PauliSum<T>,
    pub v_od: PauliSum<T>,
    pub v_extra: PauliSum<T>,
    /// `(J/Δ)^{1/3}`, three-to-two gadgets only.
    pub x: Option<T>,
    pub source: FactorizedInteraction<T>,
}

/// `Δ|1><1|_u = (Δ/2)(I − Z_u)`.
pub fn mediator_penalty<T: Real>(mediator: usize, gap: T) -> PauliSum<T> {
    let half = gap / T::lit(2.0);
    PauliSum::single(-half, mediator, Pauli::Z) + PauliSum::constant(half)
}

/// `|1><1|_u`.
fn excited_projector<T: Real>(mediator: usize) -> PauliSum<T> {
    mediator_penalty(mediator, T::one())
}

fn check_gap<T: Real>(gap: T) -> Result<()> {
    if gap > T::zero() && Float::is_finite(gap) {
        Ok(())
    } else {
        Err(Error::InvalidGap(gap.as_f64()))
    }
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if eps > T::zero() && eps < T::one() {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(eps.as_f64()))
    }
}

fn check_mediator<T: Real>(f: &FactorizedInteraction<T>, mediator: usize) -> Result<()> {
    if f.support().contains(&mediator) {
        Err(Error::InvalidInteraction(format!(
            "mediator {mediator} overlaps the interaction support"
        )))
    } else {
        Ok(())
    }
}

impl<T: Real> GadgetInstance<T> {
    /// `H0 + V`.
    pub fn hamiltonian(&self) -> PauliSum<T> {
        [&self.h0, &self.v_d, &self.v_od, &self.v_extra]
            .into_iter()
            .cloned()
            .sum()
    }

    pub fn perturbation(&self) -> PauliSum<T> {
        [&self.v_d, &self.v_od, &self.v_extra]
            .into_iter()
            .cloned()
            .sum()
    }

    /// The interaction this gadget simulates.
    pub fn target(&self) -> PauliSum<T> {
        self.source.product()
    }

    pub fn j(&self) -> T {
        self.source.j
    }

    pub fn qubits(&self) -> BTreeSet<usize> {
        let mut q = self.source.support();
        q.insert(self.mediator);
        q
    }

    /// Relative precision implied by the gap.
    pub fn epsilon(&self) -> T {
        self.kind.epsilon_for(self.j(), self.gap)
    }
}

/// Subdivision gadget with an explicit gap:
/// `V_od = √(ΔJ/2) X_u(−A+B)`, `V_extra = (J/2)(A² + B²)`.
pub fn subdivision_gadget_with_gap<T: Real>(
    f: &FactorizedInteraction<T>,
    gap: T,
    mediator: usize,
) -> Result<GadgetInstance<T>> {
    if f.factors.len() != 2 {
        return Err(Error::InvalidInteraction(format!(
            "subdivision gadget needs 2 factors, found {}",
            f.factors.len()
        )));
    }
    check_gap(gap)?;
    check_mediator(f, mediator)?;
    let j = f.j;
    let flip = PauliSum::single(T::one(), mediator, Pauli::X);
    let v_od = flip
        .commuting_product(&f.difference())
        .scale(Float::sqrt(gap * j / T::lit(2.0)));
    let v_extra = (f.a().square() + f.b().square()).scale(j / T::lit(2.0));
    Ok(GadgetInstance {
        kind: GadgetKind::Subdivision,
        mediator,
        gap,
        h0: mediator_penalty(mediator, gap),
        v_d: PauliSum::zero(),
        v_od,
        v_extra,
        x: None,
        source: f.clone(),
    })
}

/// Subdivision gadget at precision `eps`, with `Δ = J ε⁻²`.
pub fn subdivision_gadget<T: Real>(
    f: &FactorizedInteraction<T>,
    eps: T,
    mediator: usize,
) -> Result<GadgetInstance<T>> {
    check_eps(eps)?;
    subdivision_gadget_with_gap(f, GadgetKind::Subdivision.gap_for(f.j, eps), mediator)
}

/// 3-to-2-local gadget with an explicit gap:
/// `V_d = −Δ^{2/3}J^{1/3}|1><1|_u C`, `V_od = Δ^{2/3}J^{1/3}/√2 X_u(−A+B)`,
/// `V_extra = Δ^{1/3}J^{2/3}(−A+B)²/2 + J(A² + B²)C/2`.
pub fn three_to_two_gadget_with_gap<T: Real>(
    f: &FactorizedInteraction<T>,
    gap: T,
    mediator: usize,
) -> Result<GadgetInstance<T>> {
    if f.factors.len() != 3 {
        return Err(Error::InvalidInteraction(format!(
            "three-to-two gadget needs 3 factors, found {}",
            f.factors.len()
        )));
    }
    if f.factors.iter().any(|g| g.support().len() != 1) {
        return Err(Error::InvalidInteraction(
            "three-to-two gadget needs single-qubit factors".into(),
        ));
    }
    check_gap(gap)?;
    check_mediator(f, mediator)?;
    let j = f.j;
    let c = f.c().expect("three factors");
    let gap_third = Float::cbrt(gap);
    let j_third = Float::cbrt(j);
    let strong = gap_third * gap_third * j_third;
    let x = Float::cbrt(j / gap);

    let v_d = excited_projector::<T>(mediator)
        .commuting_product(c)
        .scale(-strong);
    let diff = f.difference();
    let v_od = PauliSum::single(T::one(), mediator, Pauli::X)
        .commuting_product(&diff)
        .scale(strong / Float::sqrt(T::lit(2.0)));
    let v_extra = diff
        .square()
        .scale(gap_third * j_third * j_third / T::lit(2.0))
        + (f.a().square() + f.b().square())
            .commuting_product(c)
            .scale(j / T::lit(2.0));
    Ok(GadgetInstance {
        kind: GadgetKind::ThreeToTwo,
        mediator,
        gap,
        h0: mediator_penalty(mediator, gap),
        v_d,
        v_od,
        v_extra,
        x: Some(x),
        source: f.clone(),
    })
}

/// 3-to-2-local gadget at precision `eps`, with `Δ = J ε⁻³` (so `x = ε`).
pub fn three_to_two_gadget<T: Real>(
    f: &FactorizedInteraction<T>,
    eps: T,
    mediator: usize,
) -> Result<GadgetInstance<T>> {
    check_eps(eps)?;
    three_to_two_gadget_with_gap(f, GadgetKind::ThreeToTwo.gap_for(f.j, eps), mediator)
}
