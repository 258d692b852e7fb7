use std::collections::BTreeSet;

use num_traits::Float;

use super::factor::{factorize_term, Arity};
use super::instance::{
    subdivision_gadget_with_gap, three_to_two_gadget_with_gap, GadgetInstance, GadgetKind,
};
use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm};
use crate::scalar::Real;
use crate::spectral::ProjectorSplit;

/// Which gadget to apply to terms of weight ≥ 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindChoice {
    /// Every term of weight ≥ 3 gets a subdivision gadget.
    Subdivision,
    /// Every term of weight exactly 3 gets a 3-to-2 gadget; heavier terms are an error.
    ThreeToTwo,
    /// Weight ≥ 4 → subdivision, weight 3 → 3-to-2.
    Auto,
}

impl KindChoice {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "subdivision" => Some(KindChoice::Subdivision),
            "three-to-two" | "3to2" => Some(KindChoice::ThreeToTwo),
            "auto" => Some(KindChoice::Auto),
            _ => None,
        }
    }

    fn route(self, weight: usize) -> Result<Option<GadgetKind>> {
        Ok(match (self, weight) {
            (_, 0..=2) => None,
            (KindChoice::Subdivision, _) => Some(GadgetKind::Subdivision),
            (KindChoice::ThreeToTwo, 3) | (KindChoice::Auto, 3) => Some(GadgetKind::ThreeToTwo),
            (KindChoice::Auto, _) => Some(GadgetKind::Subdivision),
            (KindChoice::ThreeToTwo, k) => {
                return Err(Error::NotGadgetizable {
                    term: format!("weight-{k} term"),
                    kind: GadgetKind::ThreeToTwo.name().into(),
                })
            }
        })
    }
}

/// How each gadget's gap is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GapPolicy<T> {
    /// Per-term `Δ = |J_u| ε⁻²` or `|J_u| ε⁻³`.
    Epsilon(T),
    /// One gap for every gadget.
    Fixed(T),
}

/// `H = Σ_u (H0ᵘ + Vᵘ) + H_else`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulatorHamiltonian<T> {
    pub gadgets: Vec<GadgetInstance<T>>,
    pub h_else: PauliSum<T>,
    /// The Hamiltonian being simulated (system qubits only).
    pub target: PauliSum<T>,
    pub n_system: usize,
    pub total_qubits: usize,
    pub assembled: PauliSum<T>,
}

impl<T: Real> SimulatorHamiltonian<T> {
    /// Mediator index of each gadget, in allocation order.
    pub fn mediators(&self) -> Vec<usize> {
        self.gadgets.iter().map(|g| g.mediator).collect()
    }

    pub fn split(&self) -> ProjectorSplit {
        ProjectorSplit::new(self.total_qubits, self.mediators())
    }

    /// Largest gap among this level's gadgets.
    pub fn max_gap(&self) -> Option<T> {
        self.gadgets.iter().map(|g| g.gap).reduce(Float::max)
    }

    /// Locality promised for the assembled operator.
    pub fn advertised_locality(&self) -> usize {
        let else_k = self.h_else.locality_profile().k;
        self.gadgets
            .iter()
            .map(|g| match g.kind {
                GadgetKind::Subdivision => {
                    let k = g.source.support().len();
                    k.div_ceil(2) + 1
                }
                GadgetKind::ThreeToTwo => 2,
            })
            .chain(std::iter::once(else_k))
            .max()
            .unwrap_or(0)
    }
}

/// Single-level assembly at precision `eps` with mediators starting right
/// after the target's qubits.
pub fn assemble_simulator<T: Real>(
    target: &PauliSum<T>,
    eps: T,
    kind: KindChoice,
) -> Result<SimulatorHamiltonian<T>> {
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::EpsilonOutOfRange(eps.as_f64()));
    }
    assemble_with(target, GapPolicy::Epsilon(eps), kind, target.min_qubits())
}

/// Single-level assembly with an explicit gap policy and first mediator index.
pub fn assemble_with<T: Real>(
    target: &PauliSum<T>,
    gap: GapPolicy<T>,
    kind: KindChoice,
    n_system: usize,
) -> Result<SimulatorHamiltonian<T>> {
    assemble_routed(target, gap, n_system, |w| kind.route(w))
}

pub(crate) fn assemble_routed<T: Real>(
    target: &PauliSum<T>,
    gap: GapPolicy<T>,
    n_system: usize,
    route: impl Fn(usize) -> Result<Option<GadgetKind>>,
) -> Result<SimulatorHamiltonian<T>> {
    if n_system < target.min_qubits() {
        return Err(Error::DimensionMismatch {
            expected: target.min_qubits(),
            found: n_system,
        });
    }
    let mut planned: Vec<(GadgetKind, &PauliTerm<T>)> = Vec::new();
    let mut rest = Vec::new();
    for term in target.terms() {
        match route(term.string.weight())? {
            Some(kind) => planned.push((kind, term)),
            None => rest.push((term.coefficient, term.string.clone())),
        }
    }
    let h_else = PauliSum::from_terms(rest, target.offset());
    // mediators are fixed before any gadget is built
    let gadgets = planned
        .into_iter()
        .enumerate()
        .map(|(i, (kind, term))| build(kind, term, gap, n_system + i))
        .collect::<Result<Vec<_>>>()?;
    let assembled = gadgets
        .iter()
        .map(GadgetInstance::hamiltonian)
        .chain(std::iter::once(h_else.clone()))
        .sum();
    Ok(SimulatorHamiltonian {
        total_qubits: n_system + gadgets.len(),
        gadgets,
        h_else,
        target: target.clone(),
        n_system,
        assembled,
    })
}

fn build<T: Real>(
    kind: GadgetKind,
    term: &PauliTerm<T>,
    gap: GapPolicy<T>,
    mediator: usize,
) -> Result<GadgetInstance<T>> {
    let arity = match kind {
        GadgetKind::Subdivision => Arity::Two,
        GadgetKind::ThreeToTwo => Arity::Three,
    };
    let f = factorize_term(term, arity)?;
    let delta = match gap {
        GapPolicy::Epsilon(eps) => kind.gap_for(f.j, eps),
        GapPolicy::Fixed(d) => d,
    };
    match kind {
        GadgetKind::Subdivision => subdivision_gadget_with_gap(&f, delta, mediator),
        GadgetKind::ThreeToTwo => three_to_two_gadget_with_gap(&f, delta, mediator),
    }
}

/// Qubits touched by at least two gadgets (system qubits only).
pub fn shared_qubits<T: Real>(sim: &SimulatorHamiltonian<T>) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut shared = BTreeSet::new();
    for g in &sim.gadgets {
        for q in g.source.support() {
            if !seen.insert(q) {
                shared.insert(q);
            }
        }
    }
    shared
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_local_target_untouched() {
        let t = PauliSum::<f64>::term(1.0, "Z0 Z1");
        let sim = assemble_simulator(&t, 0.1, KindChoice::Auto).unwrap();
        assert!(sim.gadgets.is_empty());
        assert_eq!(sim.h_else, t);
        assert_eq!(sim.assembled, t);
        assert_eq!(sim.total_qubits, 2);
    }

    #[test]
    fn one_subdivision_gadget() {
        let t = PauliSum::<f64>::term(1.0, "Z0 Z1 Z2 Z3") + PauliSum::term(0.5, "Z0 Z1");
        let sim = assemble_simulator(&t, 0.1, KindChoice::Subdivision).unwrap();
        assert_eq!(sim.mediators(), vec![4]);
        assert_eq!(sim.h_else, PauliSum::term(0.5, "Z0 Z1"));
        assert_eq!(sim.total_qubits, 5);
        assert_eq!(sim.assembled.locality_profile().k, 3);
        assert_eq!(sim.advertised_locality(), 3);
    }

    #[test]
    fn disjoint_three_local_terms() {
        let t = PauliSum::<f64>::term(1.0, "Z0 Z1 Z2") + PauliSum::term(1.0, "X3 X4 X5");
        let sim = assemble_simulator(&t, 0.2, KindChoice::ThreeToTwo).unwrap();
        assert_eq!(sim.mediators(), vec![6, 7]);
        let a: BTreeSet<_> = sim.gadgets[0].v_od.support();
        let b: BTreeSet<_> = sim.gadgets[1].v_od.support();
        assert!(a.is_disjoint(&b));
        assert_eq!(sim.assembled.locality_profile().k, 2);
        assert!(shared_qubits(&sim).is_empty());
    }

    #[test]
    fn offsets_accumulate() {
        let t = PauliSum::<f64>::term(1.0, "Z0 Z1 Z2 Z3") + PauliSum::constant(0.25);
        let sim = assemble_simulator(&t, 0.1, KindChoice::Subdivision).unwrap();
        // H0 offset Δ/2 = 50, V_extra = J, target offset 0.25
        assert!((sim.assembled.offset() - 51.25).abs() < 1e-12);
    }

    #[test]
    fn three_to_two_rejects_heavy_terms() {
        let t = PauliSum::<f64>::term(1.0, "Z0 Z1 Z2 Z3");
        assert!(matches!(
            assemble_simulator(&t, 0.1, KindChoice::ThreeToTwo),
            Err(Error::NotGadgetizable { .. })
        ));
    }

    #[test]
    fn auto_routes_by_weight() {
        let t = PauliSum::<f64>::term(1.0, "Z0 Z1 Z2 Z3")
            + PauliSum::term(1.0, "X4 X5 X6")
            + PauliSum::term(1.0, "Z7");
        let sim = assemble_simulator(&t, 0.3, KindChoice::Auto).unwrap();
        let kinds: Vec<_> = sim.gadgets.iter().map(|g| g.kind).collect();
        assert_eq!(kinds, vec![GadgetKind::Subdivision, GadgetKind::ThreeToTwo]);
        assert_eq!(sim.h_else, PauliSum::term(1.0, "Z7"));
    }

    #[test]
    fn assembly_is_deterministic() {
        let t = PauliSum::<f64>::term(0.3, "X0 Y1 Z2 X3") + PauliSum::term(-0.7, "Z1 Z2 Z4");
        let a = assemble_simulator(&t, 0.1, KindChoice::Subdivision).unwrap();
        let b = assemble_simulator(&t, 0.1, KindChoice::Subdivision).unwrap();
        assert_eq!(a, b);
        assert_eq!(format!("{}", a.assembled), format!("{}", b.assembled));
    }
}
