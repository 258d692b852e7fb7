//! The bounds command: remainder bound on random instances, growth along a
//! chain family, and cross-gadget terms.

use gadgetlab_core::bounds::{
    chain_family, commutator_growth, cross_gadget_report, random_generator, random_pauli_sum,
    remainder_r_k,
};
use gadgetlab_core::gadget::assemble_simulator;
use gadgetlab_core::sw::sw_gadget_closed_form;
use gadgetlab_core::{Caps, KindChoice, PauliSum64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::record::BoundRecord;
use crate::HarnessError;

pub const REMAINDER_ORDERS: [usize; 4] = [1, 2, 3, 4];
pub const REMAINDER_SCALES: [f64; 3] = [0.25, 0.5, 1.0];
pub const GROWTH_SIZES: [usize; 4] = [4, 6, 8, 10];
/// Operator norm of the random generators.
pub const GENERATOR_NORM: f64 = 0.3;

#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub records: Vec<BoundRecord>,
}

impl BoundsReport {
    pub fn violations(&self) -> Vec<&BoundRecord> {
        self.records.iter().filter(|r| !r.satisfied).collect()
    }

    pub fn suite(&self, name: &str) -> impl Iterator<Item = &BoundRecord> {
        let name = name.to_string();
        self.records.iter().filter(move |r| r.suite == name)
    }
}

/// `trials` random `(S, H)` pairs on 1–4 qubits; every order and scale.
pub fn remainder_suite(
    trials: usize,
    seed: u64,
    caps: &Caps,
) -> Result<Vec<BoundRecord>, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for trial in 0..trials {
        let n = rng.gen_range(1..=4);
        let s_terms = rng.gen_range(1..=6);
        let h_terms = rng.gen_range(1..=8);
        let s = random_generator::<f64>(&mut rng, n, s_terms, GENERATOR_NORM, caps)?;
        let h: PauliSum64 = random_pauli_sum(&mut rng, n, h_terms, 1.0);
        for k in REMAINDER_ORDERS {
            for t in REMAINDER_SCALES {
                let r = remainder_r_k(&s.scale(t), &h, k, n, caps)?;
                out.push(BoundRecord {
                    suite: "remainder".into(),
                    instance: trial,
                    k,
                    t,
                    value: r.r_k,
                    bound: r.bound,
                    satisfied: r.satisfied,
                });
            }
        }
    }
    Ok(out)
}

/// `‖L^k(H)‖/(n J_S^k J_H)` on the periodic ZZ ring with `S = −i Σ X`.
pub fn growth_suite(caps: &Caps) -> Result<Vec<BoundRecord>, HarnessError> {
    let mut out = Vec::new();
    for k in 1..=3 {
        let report = commutator_growth(chain_family::<f64>, &GROWTH_SIZES, k, caps)?;
        let mut prev: Option<f64> = None;
        for s in &report.samples {
            let ok = prev.is_none_or(|p| s.ratio <= 1.2 * p + 1e-12);
            out.push(BoundRecord {
                suite: "growth".into(),
                instance: s.n,
                k,
                t: 1.0,
                value: s.ratio,
                bound: prev.map_or(s.ratio, |p| 1.2 * p),
                satisfied: ok,
            });
            prev = Some(s.ratio);
        }
    }
    Ok(out)
}

/// Two gadgets sharing system qubit 2, for both gadget kinds, at `eps`.
pub fn cross_suite(eps: f64) -> Result<Vec<BoundRecord>, HarnessError> {
    let target = PauliSum64::term(1.0, "Z0 Z1 Z2") + PauliSum64::term(1.0, "Z2 Z3 Z4");
    let mut out = Vec::new();
    for (i, kind) in [KindChoice::Subdivision, KindChoice::ThreeToTwo]
        .into_iter()
        .enumerate()
    {
        let sim = assemble_simulator(&target, eps, kind)?;
        let gens: Vec<_> = sim
            .gadgets
            .iter()
            .map(|g| sw_gadget_closed_form(g).with_register(sim.total_qubits))
            .collect();
        let r = cross_gadget_report(&sim, &gens)?;
        out.push(BoundRecord {
            suite: "cross".into(),
            instance: i,
            k: 2,
            t: eps,
            value: r.total,
            bound: r.budget,
            satisfied: r.passed(),
        });
    }
    Ok(out)
}

pub fn run_bounds(trials: usize, seed: u64, caps: &Caps) -> Result<BoundsReport, HarnessError> {
    let mut records = remainder_suite(trials, seed, caps)?;
    records.extend(growth_suite(caps)?);
    records.extend(cross_suite(0.2)?);
    Ok(BoundsReport { records })
}
