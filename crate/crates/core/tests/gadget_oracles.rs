//! Gadgets and reductions checked against exact diagonalization.

use gadgetlab_core::gadget::{
    assemble_simulator, factorize_term, reduce_to_two_local, subdivision_gadget,
    three_to_two_gadget, Arity,
};
use gadgetlab_core::spectral::ground_energy;
use gadgetlab_core::{
    Caps, GadgetKind, KindChoice, LevelSchedule64, PauliString, PauliSum64, PauliTerm64,
};

fn term(c: f64, s: &str) -> PauliTerm64 {
    PauliTerm64::new(c, PauliString::parse(s).unwrap())
}

fn energy(h: &PauliSum64, n: usize) -> f64 {
    ground_energy(h, n, &Caps::default()).unwrap().energy
}

#[test]
fn subdivision_gadget_energy_within_budget() {
    for eps in [0.2, 0.1, 0.05] {
        let f = factorize_term(&term(1.0, "Z0 Z1 Z2 Z3"), Arity::Two).unwrap();
        let g = subdivision_gadget(&f, eps, 4).unwrap();
        assert_eq!(g.gap, 1.0 / (eps * eps));
        let err = (energy(&g.hamiltonian(), 5) - energy(&g.target(), 4)).abs();
        assert!(err <= eps * 4.0, "eps {eps}: {err}");
    }
}

#[test]
fn three_to_two_gadget_energy_within_budget() {
    for eps in [0.2, 0.1] {
        let f = factorize_term(&term(-0.7, "X0 Z1 Y2"), Arity::Three).unwrap();
        let g = three_to_two_gadget(&f, eps, 3).unwrap();
        let err = (energy(&g.hamiltonian(), 4) - energy(&g.target(), 3)).abs();
        assert!(err <= eps * 0.7 * 3.0, "eps {eps}: {err}");
    }
}

#[test]
fn two_local_targets_pass_through() {
    let t = PauliSum64::term(1.0, "Z0 Z1") + PauliSum64::term(0.5, "X1");
    let sim = assemble_simulator(&t, 0.1, KindChoice::Auto).unwrap();
    assert!(sim.gadgets.is_empty());
    assert_eq!(sim.assembled, t);
    let r = reduce_to_two_local(&t, 0.1).unwrap();
    assert_eq!(r.hamiltonian(), &t);
    assert_eq!(r.schedule.level_count(), 0);
}

#[test]
fn auto_routes_by_weight() {
    let t = PauliSum64::term(1.0, "Z0 Z1 Z2 Z3")
        + PauliSum64::term(1.0, "X4 X5 X6")
        + PauliSum64::term(1.0, "Z6 Z7");
    let sim = assemble_simulator(&t, 0.1, KindChoice::Auto).unwrap();
    let kinds: Vec<GadgetKind> = sim.gadgets.iter().map(|g| g.kind).collect();
    assert_eq!(kinds, vec![GadgetKind::Subdivision, GadgetKind::ThreeToTwo]);
    assert_eq!(sim.h_else, PauliSum64::term(1.0, "Z6 Z7"));
    assert_eq!(sim.total_qubits, 10);
}

#[test]
fn full_reduction_is_two_local_and_accurate() {
    let t = PauliSum64::term(1.0, "Z0 Z1 Z2 Z3");
    let r = reduce_to_two_local(&t, 0.1).unwrap();
    assert!(r.hamiltonian().locality_profile().k <= 2);
    assert_eq!(r.total_qubits(), 7);
    let err = (energy(r.hamiltonian(), 7) - energy(&t, 4)).abs();
    assert!(err <= 0.4, "{err}");
}

#[test]
fn schedule_recursion_for_wide_terms() {
    for k in 4..=9 {
        let s: String = (0..k).map(|q| format!("Z{q} ")).collect();
        let r = reduce_to_two_local(&PauliSum64::term(1.0, &s), 0.1).unwrap();
        let (sub, close) = LevelSchedule64::plan(k);
        assert_eq!(
            r.schedule.level_count(),
            sub + usize::from(close),
            "k = {k}"
        );
        assert!(r.schedule.recursion_holds(), "k = {k}");
        assert!(r.hamiltonian().locality_profile().k <= 2, "k = {k}");
    }
}

#[test]
fn factorization_rejects_short_terms() {
    assert!(factorize_term(&term(1.0, "Z0"), Arity::Two).is_err());
    assert!(factorize_term(&term(1.0, "Z0 Z1"), Arity::Three).is_err());
}
