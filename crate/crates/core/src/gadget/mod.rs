//! Term factorization, the subdivision and 3-to-2-local gadgets, single-level
//! assembly and the multi-level reduction to a 2-local Hamiltonian.

mod assemble;
mod factor;
mod instance;
mod schedule;

pub use assemble::{
    assemble_simulator, assemble_with, shared_qubits, GapPolicy, KindChoice, SimulatorHamiltonian,
};
pub use factor::{factorize_term, Arity, FactorizedInteraction};
pub use instance::{
    mediator_penalty, subdivision_gadget, subdivision_gadget_with_gap, three_to_two_gadget,
    three_to_two_gadget_with_gap, GadgetInstance, GadgetKind,
};
pub use schedule::{
    final_gap, next_strength, reduce_to_two_local, LevelRecord, LevelSchedule, Reduction,
};
