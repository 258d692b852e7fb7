//! Perturbation-gadget compiler and numerical laboratory.
//!
//! Maps k-local qubit Hamiltonians onto 2-local simulator Hamiltonians with
//! bounded interaction strength, using the subdivision and 3-to-2-local
//! mediator gadgets, and checks the resulting error bounds by exact
//! diagonalization:
//!
//! * [`pauli`] – symbolic algebra over real-weighted Pauli strings.
//! * [`spectral`] – dense and Lanczos eigensolvers, exact conjugation, P/Q blocks.
//! * [`gadget`] – factorization, the two gadgets, assembly and the multi-level schedule.
//! * [`sw`] – Schrieffer-Wolff generators (closed form, perturbative, exact).
//! * [`bounds`] – nested-commutator remainder bounds and cross-gadget reports.
//!
//! Everything is generic over the scalar type through [`Real`]; the `*64`
//! aliases below are what the command-line harness uses.

pub mod bounds;
pub mod error;
pub mod gadget;
pub mod pauli;
pub mod scalar;
pub mod spectral;
pub mod sw;

pub use error::{Error, Result};
pub use scalar::Real;

pub use gadget::{
    FactorizedInteraction, GadgetInstance, GadgetKind, KindChoice, LevelSchedule, Reduction,
    SimulatorHamiltonian,
};
pub use pauli::{AntiHermitian, LocalityProfile, Pauli, PauliString, PauliSum, PauliTerm, Phase};
pub use spectral::{Caps, DenseOperator, GroundStateResult, ProjectorSplit};
pub use sw::{EffectiveHamiltonian, SWGenerator, SwOrder};

pub type PauliSum64 = PauliSum<f64>;
pub type PauliSum32 = PauliSum<f32>;
pub type PauliTerm64 = PauliTerm<f64>;
pub type AntiHermitian64 = AntiHermitian<f64>;
pub type DenseOperator64 = DenseOperator<f64>;
pub type GroundStateResult64 = GroundStateResult<f64>;
pub type FactorizedInteraction64 = FactorizedInteraction<f64>;
pub type GadgetInstance64 = GadgetInstance<f64>;
pub type SimulatorHamiltonian64 = SimulatorHamiltonian<f64>;
pub type LevelSchedule64 = LevelSchedule<f64>;
pub type Reduction64 = Reduction<f64>;
pub type SWGenerator64 = SWGenerator<f64>;
pub type EffectiveHamiltonian64 = EffectiveHamiltonian<f64>;
