use std::fmt::Write as _;
use std::ops::Range;

use num_traits::Float;

use super::assemble::{assemble_routed, GapPolicy, SimulatorHamiltonian};
use super::instance::GadgetKind;
use crate::error::{Error, Result};
use crate::pauli::{to_text, PauliSum};
use crate::scalar::Real;

/// One level of the reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelRecord<T> {
    pub kind: GadgetKind,
    /// Realized interaction strength `J_i` of the Hamiltonian entering the level.
    pub strength: T,
    /// Per-level error budget `δ`.
    pub delta: T,
    /// Gap `Δ_i` shared by every gadget of the level.
    pub gap: T,
    pub mediators: Range<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelSchedule<T> {
    pub epsilon: T,
    pub levels: Vec<LevelRecord<T>>,
    /// Realized interaction strength of the final 2-local Hamiltonian.
    pub final_strength: T,
}

/// Gap of a subdivision level, `Δ = J³ δ⁻²`; also the next level's strength.
pub fn next_strength<T: Real>(j: T, delta: T) -> T {
    j * j * j / (delta * delta)
}

/// Gap of the closing 3-to-2 level, `Δ = J δ⁻³`.
pub fn final_gap<T: Real>(j: T, delta: T) -> T {
    j / (delta * delta * delta)
}

impl<T: Real> LevelSchedule<T> {
    /// Number of subdivision levels a term of weight `k` needs before the
    /// 3-to-2 level, and whether that closing level is needed at all.
    pub fn plan(k: usize) -> (usize, bool) {
        let mut w = k;
        let mut sub = 0;
        while w >= 4 {
            w = w.div_ceil(2) + 1;
            sub += 1;
        }
        (sub, k >= 3)
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// `δ = ε 2^{−levels}`.
    pub fn delta(&self) -> T {
        self.levels.first().map_or(self.epsilon, |l| l.delta)
    }

    /// `J_{i+1} = δ⁻² J_i³` after every subdivision level, bit for bit.
    pub fn recursion_holds(&self) -> bool {
        self.levels.windows(2).all(|w| {
            w[0].kind != GadgetKind::Subdivision
                || w[1].strength == next_strength(w[0].strength, w[0].delta)
        }) && self.levels.last().is_none_or(|l| {
            l.kind != GadgetKind::Subdivision
                || self.final_strength == next_strength(l.strength, l.delta)
        })
    }

    pub fn mediator_count(&self) -> usize {
        self.levels.iter().map(|l| l.mediators.len()).sum()
    }
}

/// Full k-local → 2-local reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction<T> {
    pub target: PauliSum<T>,
    pub n_system: usize,
    /// One simulator per level; each level's target is the previous level's output.
    pub stages: Vec<SimulatorHamiltonian<T>>,
    pub schedule: LevelSchedule<T>,
}

impl<T: Real> Reduction<T> {
    /// The final 2-local Hamiltonian.
    pub fn hamiltonian(&self) -> &PauliSum<T> {
        self.stages.last().map_or(&self.target, |s| &s.assembled)
    }

    pub fn total_qubits(&self) -> usize {
        self.stages.last().map_or(self.n_system, |s| s.total_qubits)
    }

    pub fn mediators(&self) -> Vec<usize> {
        self.stages.iter().flat_map(|s| s.mediators()).collect()
    }

    /// Serialized Hamiltonian preceded by `#` headers describing the schedule.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.schedule;
        let _ = writeln!(out, "# levels: {}", s.level_count());
        let _ = writeln!(out, "# epsilon: {}", s.epsilon);
        let _ = writeln!(out, "# system qubits: {}", self.n_system);
        let _ = writeln!(out, "# total qubits: {}", self.total_qubits());
        for (i, l) in s.levels.iter().enumerate() {
            let _ = writeln!(
                out,
                "# level {}: kind={} J={} delta={} gap={} mediators={}",
                i + 1,
                l.kind,
                l.strength,
                l.delta,
                l.gap,
                format_range(&l.mediators)
            );
        }
        let _ = writeln!(out, "# final strength: {}", s.final_strength);
        let _ = writeln!(out, "# identity offset: {}", self.hamiltonian().offset());
        out.push_str(&to_text(self.hamiltonian()));
        out
    }
}

fn format_range(r: &Range<usize>) -> String {
    match r.len() {
        0 => "none".into(),
        1 => r.start.to_string(),
        _ => format!("{}..{}", r.start, r.end - 1),
    }
}

/// Realized interaction strength of a level's output: the largest local
/// coefficient or penalty gap seen so far.
fn realized_strength<T: Real>(h: &PauliSum<T>, penalties: &[T]) -> T {
    penalties
        .iter()
        .copied()
        .fold(h.locality_profile().j, Float::max)
}

/// Subdivision levels until every term is at most 3-local, then one 3-to-2
/// level. All levels share `δ = ε 2^{−levels}`; subdivision gaps are
/// `J_i³ δ⁻²` and the closing 3-to-2 gap is `J_L δ⁻³`.
pub fn reduce_to_two_local<T: Real>(target: &PauliSum<T>, eps: T) -> Result<Reduction<T>> {
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::EpsilonOutOfRange(eps.as_f64()));
    }
    let profile = target.locality_profile();
    let (sub, closing) = LevelSchedule::<T>::plan(profile.k);
    let count = sub + usize::from(closing);
    let delta = eps / T::lit(2f64.powi(count as i32));
    let n_system = target.min_qubits();

    let mut stages: Vec<SimulatorHamiltonian<T>> = Vec::new();
    let mut levels = Vec::new();
    let mut penalties: Vec<T> = Vec::new();
    let mut strength = profile.j;
    let mut current = target.clone();
    let mut n = n_system;

    for level in 0..count {
        let (kind, gap) = if level < sub {
            (GadgetKind::Subdivision, next_strength(strength, delta))
        } else {
            (GadgetKind::ThreeToTwo, final_gap(strength, delta))
        };
        let sim = assemble_routed(&current, GapPolicy::Fixed(gap), n, |w| {
            Ok(match kind {
                GadgetKind::Subdivision if w >= 4 => Some(kind),
                GadgetKind::ThreeToTwo if w == 3 => Some(kind),
                GadgetKind::ThreeToTwo if w > 3 => {
                    return Err(Error::NotGadgetizable {
                        term: format!("weight-{w} term"),
                        kind: kind.name().into(),
                    })
                }
                _ => None,
            })
        })?;
        levels.push(LevelRecord {
            kind,
            strength,
            delta,
            gap,
            mediators: sim.n_system..sim.total_qubits,
        });
        if !sim.gadgets.is_empty() {
            penalties.push(gap);
        }
        strength = realized_strength(&sim.assembled, &penalties);
        n = sim.total_qubits;
        current = sim.assembled.clone();
        stages.push(sim);
    }

    Ok(Reduction {
        target: target.clone(),
        n_system,
        stages,
        schedule: LevelSchedule {
            epsilon: eps,
            levels,
            final_strength: strength,
        },
    })
}
