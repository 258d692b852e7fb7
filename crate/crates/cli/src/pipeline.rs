//! compile / energy / verify / sweep pipelines.

use std::fmt::Write as _;
use std::time::Instant;

use gadgetlab_core::bounds::linear_fit;
use gadgetlab_core::gadget::{assemble_simulator, assemble_with, reduce_to_two_local, GapPolicy};
use gadgetlab_core::pauli::to_text;
use gadgetlab_core::spectral::ground_energy;
use gadgetlab_core::sw::{effective_hamiltonian, sw_exact};
use gadgetlab_core::{Caps, KindChoice, PauliSum64, Reduction64, SimulatorHamiltonian64};
use rayon::prelude::*;

use crate::config::{Axis, GadgetMode};
use crate::record::ScalingRecord;
use crate::HarnessError;

/// Output of a compile step.
#[derive(Clone, Debug)]
pub enum Compilation {
    Full(Reduction64),
    Single(SimulatorHamiltonian64),
}

impl Compilation {
    pub fn hamiltonian(&self) -> &PauliSum64 {
        match self {
            Compilation::Full(r) => r.hamiltonian(),
            Compilation::Single(s) => &s.assembled,
        }
    }

    pub fn total_qubits(&self) -> usize {
        match self {
            Compilation::Full(r) => r.total_qubits(),
            Compilation::Single(s) => s.total_qubits,
        }
    }

    pub fn mediators(&self) -> Vec<usize> {
        match self {
            Compilation::Full(r) => r.mediators(),
            Compilation::Single(s) => s.mediators(),
        }
    }

    /// Largest gap used anywhere, 0 when nothing was gadgetized.
    pub fn max_gap(&self) -> f64 {
        match self {
            Compilation::Full(r) => r
                .stages
                .iter()
                .filter_map(|s| s.max_gap())
                .fold(0.0, f64::max),
            Compilation::Single(s) => s.max_gap().unwrap_or(0.0),
        }
    }

    /// The slowest decay exponent among the gadget kinds in use.
    pub fn bound_exponent(&self) -> Option<f64> {
        let stages: Vec<&SimulatorHamiltonian64> = match self {
            Compilation::Full(r) => r.stages.iter().collect(),
            Compilation::Single(s) => vec![s],
        };
        stages
            .iter()
            .flat_map(|s| s.gadgets.iter().map(|g| g.kind.error_exponent()))
            .reduce(f64::max)
    }

    pub fn to_text(&self) -> String {
        match self {
            Compilation::Full(r) => r.to_text(),
            Compilation::Single(s) => single_level_text(s),
        }
    }
}

fn single_level_text(s: &SimulatorHamiltonian64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# levels: 1");
    let _ = writeln!(out, "# system qubits: {}", s.n_system);
    let _ = writeln!(out, "# total qubits: {}", s.total_qubits);
    for g in &s.gadgets {
        let _ = writeln!(
            out,
            "# gadget: kind={} J={} gap={} mediator={}",
            g.kind,
            g.j(),
            g.gap,
            g.mediator
        );
    }
    let _ = writeln!(out, "# identity offset: {}", s.assembled.offset());
    out.push_str(&to_text(&s.assembled));
    out
}

pub fn compile(
    target: &PauliSum64,
    eps: f64,
    mode: GadgetMode,
) -> Result<Compilation, HarnessError> {
    Ok(match mode {
        GadgetMode::Full => Compilation::Full(reduce_to_two_local(target, eps)?),
        GadgetMode::Single(kind) => Compilation::Single(assemble_simulator(target, eps, kind)?),
    })
}

/// Ground energy of `h` on `n` qubits.
pub fn energy(h: &PauliSum64, n: usize, caps: &Caps) -> Result<f64, HarnessError> {
    Ok(ground_energy(h, n.max(h.min_qubits()).max(1), caps)?.energy)
}

fn elapsed(start: Instant, deterministic: bool) -> f64 {
    if deterministic {
        0.0
    } else {
        start.elapsed().as_secs_f64()
    }
}

/// Compiles `target` at precision `eps` and compares ground energies.
/// The budget is `ε J n` with `n` the number of system qubits.
pub fn verify_target(
    target: &PauliSum64,
    eps: f64,
    mode: GadgetMode,
    caps: &Caps,
    deterministic: bool,
) -> Result<ScalingRecord, HarnessError> {
    let start = Instant::now();
    let compiled = compile(target, eps, mode)?;
    let n_system = target.min_qubits();
    let lambda_target = energy(target, n_system, caps)?;
    let lambda_simulator = energy(compiled.hamiltonian(), compiled.total_qubits(), caps)?;
    let j = target.locality_profile().j;
    Ok(ScalingRecord {
        n_system,
        n_total: compiled.total_qubits(),
        epsilon: eps,
        delta: compiled.max_gap(),
        j,
        lambda_target,
        lambda_simulator,
        abs_error: (lambda_target - lambda_simulator).abs(),
        budget: eps * j * n_system as f64,
        bound_exponent_context: compiled.bound_exponent(),
        heff_error: None,
        wall_time_seconds: elapsed(start, deterministic),
    })
}

/// `‖P e^S H e^{−S} P − H_target‖` with the exact direct-rotation generator.
pub fn exact_heff_error(sim: &SimulatorHamiltonian64, caps: &Caps) -> Result<f64, HarnessError> {
    if sim.gadgets.is_empty() {
        return Ok(0.0);
    }
    let split = sim.split();
    let s = sw_exact(&sim.assembled, &split, caps)?;
    let eff = effective_hamiltonian(&sim.assembled, &s, caps)?;
    Ok(eff.distance_to(&sim.target)?)
}

/// Energies below this fraction of the gap are indistinguishable from zero.
const ERROR_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub records: Vec<ScalingRecord>,
    /// Points that failed, with their axis value.
    pub failures: Vec<(f64, String)>,
    /// Log-log slope of `abs_error` against Δ; absent for fewer than two
    /// points or when any error sits at the numerical floor.
    pub energy_slope: Option<f64>,
    /// Log-log slope of `heff_error` against Δ.
    pub heff_slope: Option<f64>,
    pub energy_monotone: bool,
    pub heff_monotone: bool,
}

fn slope(records: &[ScalingRecord], value: impl Fn(&ScalingRecord) -> Option<f64>) -> Option<f64> {
    let points: Option<Vec<(f64, f64)>> = records
        .iter()
        .map(|r| {
            let v = value(r)?;
            (v > ERROR_FLOOR * r.delta.max(1.0)).then(|| (r.delta.ln(), v.ln()))
        })
        .collect();
    linear_fit(&points?).map(|f| f.0)
}

/// Strictly decreasing along increasing Δ.
fn decreasing(records: &[ScalingRecord], value: impl Fn(&ScalingRecord) -> Option<f64>) -> bool {
    let mut sorted: Vec<&ScalingRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    sorted.windows(2).all(|w| match (value(w[0]), value(w[1])) {
        (Some(a), Some(b)) => b < a,
        _ => false,
    })
}

/// One verify per axis value, run independently and merged in axis order.
/// A failing point is reported without aborting the others.
pub fn sweep_target(
    target: &PauliSum64,
    axis: Axis,
    values: &[f64],
    kind: KindChoice,
    caps: &Caps,
    deterministic: bool,
) -> Result<SweepReport, HarnessError> {
    crate::config::validate_axis(axis, values)?;
    let results: Vec<Result<ScalingRecord, HarnessError>> = values
        .par_iter()
        .map(|&v| sweep_point(target, axis, v, kind, caps, deterministic))
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (v, r) in values.iter().zip(results) {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push((*v, e.to_string())),
        }
    }
    Ok(SweepReport {
        energy_slope: slope(&records, |r| Some(r.abs_error)),
        heff_slope: slope(&records, |r| r.heff_error),
        energy_monotone: decreasing(&records, |r| Some(r.abs_error)),
        heff_monotone: decreasing(&records, |r| r.heff_error),
        records,
        failures,
    })
}

fn sweep_point(
    target: &PauliSum64,
    axis: Axis,
    value: f64,
    kind: KindChoice,
    caps: &Caps,
    deterministic: bool,
) -> Result<ScalingRecord, HarnessError> {
    let start = Instant::now();
    let n_system = target.min_qubits();
    let sim = match axis {
        Axis::Delta => assemble_with(target, GapPolicy::Fixed(value), kind, n_system)?,
        Axis::Epsilon => assemble_simulator(target, value, kind)?,
    };
    let lambda_target = energy(target, n_system, caps)?;
    let lambda_simulator = energy(&sim.assembled, sim.total_qubits, caps)?;
    let heff_error = if sim.total_qubits <= caps.dense {
        Some(exact_heff_error(&sim, caps)?)
    } else {
        None
    };
    let j = target.locality_profile().j;
    let delta = sim.max_gap().unwrap_or(0.0);
    let eps = match axis {
        Axis::Epsilon => value,
        Axis::Delta => sim.gadgets.iter().map(|g| g.epsilon()).fold(0.0, f64::max),
    };
    Ok(ScalingRecord {
        n_system,
        n_total: sim.total_qubits,
        epsilon: eps,
        delta,
        j,
        lambda_target,
        lambda_simulator,
        abs_error: (lambda_target - lambda_simulator).abs(),
        budget: eps * j * n_system as f64,
        bound_exponent_context: sim
            .gadgets
            .iter()
            .map(|g| g.kind.error_exponent())
            .reduce(f64::max),
        heff_error,
        wall_time_seconds: elapsed(start, deterministic),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_local_target_is_exact() {
        let t = PauliSum64::term(1.0, "Z0 Z1");
        let r = verify_target(&t, 0.1, GadgetMode::Full, &Caps::default(), true).unwrap();
        assert_eq!(r.abs_error, 0.0);
        assert_eq!(r.n_total, 2);
        assert_eq!(r.bound_exponent_context, None);
    }

    #[test]
    fn single_point_sweep_has_no_slope() {
        let t = PauliSum64::term(1.0, "Z0 Z1 Z2 Z3");
        let r = sweep_target(
            &t,
            Axis::Delta,
            &[100.0],
            KindChoice::Subdivision,
            &Caps::default(),
            true,
        )
        .unwrap();
        assert_eq!(r.records.len(), 1);
        assert!(r.energy_slope.is_none());
        assert!(r.heff_slope.is_none());
    }

    #[test]
    fn failing_point_does_not_abort() {
        let t = PauliSum64::term(1.0, "Z0 Z1 Z2 Z3");
        let caps = Caps {
            dense: 4,
            iterative: 4,
            ..Caps::default()
        };
        let r = sweep_target(
            &t,
            Axis::Delta,
            &[100.0, 1000.0],
            KindChoice::Subdivision,
            &caps,
            true,
        )
        .unwrap();
        assert_eq!(r.failures.len(), 2);
        assert!(r.records.is_empty());
    }
}
