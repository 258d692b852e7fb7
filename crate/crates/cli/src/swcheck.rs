//! Per-gadget and global Schrieffer-Wolff checks.

use std::collections::BTreeMap;

use gadgetlab_core::bounds::{cross_gadget_report, CrossGadgetReport};
use gadgetlab_core::gadget::assemble_simulator;
use gadgetlab_core::sw::{
    effective_hamiltonian, gadget_split, sw_exact, sw_gadget_closed_form, sw_perturbative,
};
use gadgetlab_core::{
    AntiHermitian, Caps, GadgetInstance64, GadgetKind, KindChoice, PauliSum64, ProjectorSplit,
    SWGenerator, SwOrder,
};

use crate::HarnessError;

/// Slack on the truncation-bound inequality.
const TRUNCATION_SLACK: f64 = 1e-9;
/// Exact block-diagonalization tolerance.
const EXACT_TOL: f64 = 1e-10;
/// Relative tolerance for closed-form vs series generator equality.
const GENERATOR_TOL: f64 = 1e-12;
/// Constant `c` in the global budget `c ε n J`. The 3-to-2 gadget at
/// `Δ = J ε⁻³` reaches about `3 ε J` per gadget at `ε = 0.1`.
pub const GLOBAL_BUDGET_CONSTANT: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub struct GadgetCheck {
    pub mediator: usize,
    pub kind: GadgetKind,
    /// Largest coefficient difference between closed-form and series generators.
    pub generator_mismatch: f64,
    /// `‖P e^S H e^{−S} Q‖` with the closed-form generator.
    pub offdiag_residual: f64,
    /// `‖P e^S H e^{−S} P − H_target‖` with the closed-form generator.
    pub target_error: f64,
    pub truncation_error: f64,
    pub truncation_bound: f64,
    /// `‖P e^S H e^{−S} Q‖` with the exact generator.
    pub exact_offdiag_residual: f64,
}

impl GadgetCheck {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let u = self.mediator;
        if self.generator_mismatch > GENERATOR_TOL {
            out.push(format!(
                "gadget {u}: closed-form and series generators differ by {:e}",
                self.generator_mismatch
            ));
        }
        if !(self.offdiag_residual.is_finite() && self.target_error.is_finite()) {
            out.push(format!("gadget {u}: non-finite block residual"));
        }
        if self.truncation_error > self.truncation_bound + TRUNCATION_SLACK {
            out.push(format!(
                "gadget {u}: truncation error {:e} exceeds bound {:e}",
                self.truncation_error, self.truncation_bound
            ));
        }
        if self.exact_offdiag_residual > EXACT_TOL {
            out.push(format!(
                "gadget {u}: exact residual {:e}",
                self.exact_offdiag_residual
            ));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SwCheckReport {
    pub epsilon: f64,
    pub gadgets: Vec<GadgetCheck>,
    /// `‖P e^S H e^{−S} P − H_target‖` for `S = Σ_u Sᵘ` on the whole register.
    pub global_residual: Option<f64>,
    /// `c ε n J` with `c = GLOBAL_BUDGET_CONSTANT`.
    pub global_budget: f64,
    pub cross: CrossGadgetReport<f64>,
    pub notes: Vec<String>,
}

impl SwCheckReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .gadgets
            .iter()
            .flat_map(GadgetCheck::failures)
            .collect();
        if let Some(r) = self.global_residual {
            if !(r <= self.global_budget) {
                out.push(format!(
                    "global residual {r:e} exceeds budget {:e}",
                    self.global_budget
                ));
            }
        }
        out.extend(self.cross.violations.iter().cloned());
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// A gadget relabeled onto its own support `0..m`.
struct Local {
    h: PauliSum64,
    target: PauliSum64,
    closed: SWGenerator<f64>,
}

fn localize(g: &GadgetInstance64) -> Result<Local, HarnessError> {
    let support: Vec<usize> = g.qubits().into_iter().collect();
    let map: BTreeMap<usize, usize> = support.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let closed = sw_gadget_closed_form(g);
    let split = ProjectorSplit::new(support.len(), [map[&g.mediator]]);
    Ok(Local {
        h: g.hamiltonian().embed(&map)?,
        target: g.target().embed(&map)?,
        closed: SWGenerator::new(
            AntiHermitian::from_i_times(closed.s.i_times().embed(&map)?),
            closed.order,
            split,
        ),
    })
}

pub fn check_gadget(g: &GadgetInstance64, caps: &Caps) -> Result<GadgetCheck, HarnessError> {
    let order = match g.kind {
        GadgetKind::Subdivision => 1,
        GadgetKind::ThreeToTwo => 3,
    };
    let closed = sw_gadget_closed_form(g);
    let series = sw_perturbative(&g.h0, &g.perturbation(), &gadget_split(g), order)?;
    let scale = closed.s.i_times().locality_profile().j.max(1e-300);
    let generator_mismatch = series.s.i_times().max_abs_diff(closed.s.i_times()) / scale;

    let local = localize(g)?;
    let eff = effective_hamiltonian(&local.h, &local.closed, caps)?;
    let exact = sw_exact(&local.h, &local.closed.split, caps)?;
    let exact_eff = effective_hamiltonian(&local.h, &exact, caps)?;
    Ok(GadgetCheck {
        mediator: g.mediator,
        kind: g.kind,
        generator_mismatch,
        offdiag_residual: eff.offdiag_residual,
        target_error: eff.distance_to(&local.target)?,
        truncation_error: eff.truncation_error,
        truncation_bound: eff.truncation_error_bound,
        exact_offdiag_residual: exact_eff.offdiag_residual,
    })
}

pub fn swcheck_target(
    target: &PauliSum64,
    eps: f64,
    kind: KindChoice,
    caps: &Caps,
) -> Result<SwCheckReport, HarnessError> {
    let sim = assemble_simulator(target, eps, kind)?;
    let gadgets = sim
        .gadgets
        .iter()
        .map(|g| check_gadget(g, caps))
        .collect::<Result<Vec<_>, _>>()?;
    let generators: Vec<SWGenerator<f64>> = sim
        .gadgets
        .iter()
        .map(|g| sw_gadget_closed_form(g).with_register(sim.total_qubits))
        .collect();
    let cross = cross_gadget_report(&sim, &generators)?;
    let n = sim.n_system as f64;
    let j = target.locality_profile().j;
    let mut notes = Vec::new();
    let global_residual = if sim.gadgets.is_empty() {
        notes.push("no gadgets: vacuous pass".to_string());
        None
    } else if sim.total_qubits > caps.dense {
        notes.push(format!(
            "global residual skipped: {} qubits exceed the dense cap {}",
            sim.total_qubits, caps.dense
        ));
        None
    } else {
        let s = generators
            .iter()
            .map(|g| g.s.clone())
            .sum::<AntiHermitian<f64>>();
        let total = SWGenerator::new(s, SwOrder::Third, sim.split());
        let eff = effective_hamiltonian(&sim.assembled, &total, caps)?;
        Some(eff.distance_to(&sim.target)?)
    };
    Ok(SwCheckReport {
        epsilon: eps,
        gadgets,
        global_residual,
        global_budget: GLOBAL_BUDGET_CONSTANT * eps * n * j,
        cross,
        notes,
    })
}
