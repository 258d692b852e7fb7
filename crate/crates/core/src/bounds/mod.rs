//! Executable inequality checks: the nested-commutator remainder bound, the
//! linear-in-n growth of nested commutators, cross-gadget terms and operator
//! inequalities.

mod random;

pub use random::{random_generator, random_pauli_sum};

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gadget::{GadgetKind, SimulatorHamiltonian};
use crate::pauli::{
    commutator, multiply, operator_norm_local, AntiHermitian, PauliString, PauliSum, Phase,
    LOCAL_NORM_CAP,
};
use crate::scalar::Real;
use crate::spectral::{conjugate_by_exp, ground_energy, hermitian_norm, to_matrix, Caps};
use crate::sw::SWGenerator;

/// Largest nested-commutator depth computed symbolically.
pub const MAX_NESTING: usize = 6;

/// Slack added to every remainder comparison.
pub const REMAINDER_SLACK: f64 = 1e-9;

/// `L^k(h)` with `L(X) = [S, X]`.
pub fn nested_commutator<T: Real>(
    s: &AntiHermitian<T>,
    h: &PauliSum<T>,
    k: usize,
) -> Result<PauliSum<T>> {
    if k > MAX_NESTING {
        return Err(Error::OrderCap(k, MAX_NESTING));
    }
    Ok((0..k).fold(h.clone(), |acc, _| s.apply(&acc)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RemainderReport<T> {
    pub k: usize,
    /// `‖e^S H e^{−S} − Σ_{p<k} L^p(H)/p!‖`.
    pub r_k: T,
    /// `‖L^k(H)‖/k!`.
    pub bound: T,
    pub satisfied: bool,
    pub slack: T,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Remainder of the commutator series after `k` terms, against its bound.
pub fn remainder_r_k<T: Real>(
    s: &AntiHermitian<T>,
    h: &PauliSum<T>,
    k: usize,
    n_qubits: usize,
    caps: &Caps,
) -> Result<RemainderReport<T>> {
    let exact = conjugate_by_exp(s, h, n_qubits, caps)?;
    let mut partial = PauliSum::zero();
    let mut term = h.clone();
    for p in 0..k {
        if p > 0 {
            term = s.apply(&term);
        }
        partial = partial + term.scale(T::lit(1.0 / factorial(p)));
    }
    let lk = nested_commutator(s, h, k)?;
    let diff = exact.matrix - to_matrix(&partial, n_qubits, caps)?.matrix;
    let herm = (&diff + diff.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let r_k = hermitian_norm(&herm);
    let bound = hermitian_norm(&to_matrix(&lk, n_qubits, caps)?.matrix) / T::lit(factorial(k));
    Ok(RemainderReport {
        k,
        r_k,
        bound,
        satisfied: r_k <= bound + T::lit(REMAINDER_SLACK),
        slack: bound - r_k,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalingModel {
    LinearInN,
    PowerLaw,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingSample<T> {
    pub n: usize,
    /// `‖L^k(H)‖` by dense diagonalization, when the register fits.
    pub dense_norm: Option<T>,
    /// Sum of elementary-commutator norms (an upper bound).
    pub counting_norm: T,
    /// Number of nonzero elementary commutators.
    pub elementary_count: usize,
    /// `‖L^k(H)‖ / (n J_S^k J_H)`, from the dense norm when available.
    pub ratio: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport<T> {
    pub k: usize,
    pub samples: Vec<ScalingSample<T>>,
    /// Log-log slope of the norm against `n`.
    pub fitted_slope: Option<T>,
    pub fit_residuals: Vec<T>,
    pub model: ScalingModel,
    /// Every ratio is at most 1.2× its predecessor.
    pub bounded: bool,
}

/// Least-squares line through `(x, y)`; returns `(slope, intercept, residuals)`.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<(f64, f64, Vec<f64>)> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = points
        .iter()
        .map(|p| p.1 - (intercept + slope * p.0))
        .collect();
    Some((slope, intercept, residuals))
}

/// Largest local-term magnitude of a generator, `J_S`.
fn generator_strength<T: Real>(s: &AntiHermitian<T>) -> T {
    s.i_times().locality_profile().j
}

/// Every nonzero `[s_{a1}, [s_{a2}, … [s_{ak}, h_b]]]` over local terms, as
/// (coefficient, string). For Pauli strings each is a single signed string.
pub fn elementary_commutators<T: Real>(
    s: &AntiHermitian<T>,
    h: &PauliSum<T>,
    k: usize,
) -> Vec<(T, PauliString)> {
    let mut layer: Vec<(T, PauliString)> = h
        .terms()
        .iter()
        .map(|t| (t.coefficient, t.string.clone()))
        .collect();
    for _ in 0..k {
        let mut next = Vec::new();
        for (c, p) in &layer {
            for t in s.i_times().terms() {
                if t.string.commutes_with(p) {
                    continue;
                }
                let (phase, q) = multiply(&t.string, p);
                let sign = if phase == Phase::I { 2.0 } else { -2.0 };
                next.push((T::lit(sign) * t.coefficient * *c, q));
            }
        }
        layer = next;
    }
    layer
}

/// Growth of `‖L^k(H)‖` along a family of instances.
pub fn commutator_growth<T: Real>(
    family: impl Fn(usize) -> (AntiHermitian<T>, PauliSum<T>),
    sizes: &[usize],
    k: usize,
    caps: &Caps,
) -> Result<ScalingReport<T>> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 3 {
        return Err(Error::Invalid(format!(
            "need at least 3 sizes, found {}",
            sizes.len()
        )));
    }
    let mut samples = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let (s, h) = family(n);
        let lk = nested_commutator(&s, &h, k)?;
        let n_reg = lk
            .min_qubits()
            .max(h.min_qubits())
            .max(s.i_times().min_qubits());
        let dense_norm = if n_reg <= caps.dense {
            Some(hermitian_norm(&to_matrix(&lk, n_reg, caps)?.matrix))
        } else {
            None
        };
        let elementary = elementary_commutators(&s, &h, k);
        let counting_norm = elementary
            .iter()
            .map(|(c, _)| Float::abs(*c))
            .fold(T::zero(), |a, b| a + b);
        let denom = T::lit(n as f64)
            * Float::powi(generator_strength(&s), k as i32)
            * h.locality_profile().j;
        let ratio = if denom > T::zero() {
            dense_norm.unwrap_or(counting_norm) / denom
        } else {
            T::zero()
        };
        samples.push(ScalingSample {
            n,
            dense_norm,
            counting_norm,
            elementary_count: elementary.len(),
            ratio,
        });
    }
    let points: Vec<(f64, f64)> = samples
        .iter()
        .filter_map(|s| {
            let v = s.dense_norm.unwrap_or(s.counting_norm).as_f64();
            (v > 0.0).then(|| ((s.n as f64).ln(), v.ln()))
        })
        .collect();
    let fit = if points.len() == samples.len() {
        linear_fit(&points)
    } else {
        None
    };
    let bounded = samples
        .windows(2)
        .all(|w| w[1].ratio <= w[0].ratio * T::lit(1.2) + T::tolerance(1e-12));
    Ok(ScalingReport {
        k,
        fitted_slope: fit.as_ref().map(|f| T::lit(f.0)),
        fit_residuals: fit
            .map(|f| f.2.into_iter().map(T::lit).collect())
            .unwrap_or_default(),
        samples,
        model: ScalingModel::PowerLaw,
        bounded,
    })
}

/// Periodic ZZ ring `h = Σ Z_i Z_{i+1}` with `s = Σ X_i` (stored as `G = s`).
pub fn chain_family<T: Real>(n: usize) -> (AntiHermitian<T>, PauliSum<T>) {
    let mut h = PauliSum::zero();
    let mut g = PauliSum::zero();
    for i in 0..n {
        let s = PauliString::new([(i, crate::Pauli::Z), ((i + 1) % n, crate::Pauli::Z)])
            .expect("ring edge");
        h = h + PauliSum::from_string(T::one(), s);
        g = g + PauliSum::single(T::one(), i, crate::Pauli::X);
    }
    (AntiHermitian::from_i_times(g), h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossPair<T> {
    /// Gadget whose `V_extra` is acted on.
    pub u: usize,
    /// Gadget whose generator acts.
    pub v: usize,
    /// `‖P [Sᵛ, [Sᵛ, V_extraᵘ]] P‖`.
    pub norm: T,
    /// `‖P[Sᵛ,[Sᵛ,Vᵘ]]P − P[Sᵛ,[Sᵛ,V_extraᵘ]]P‖`, zero when the reduction holds.
    pub identity_residual: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossGadgetReport<T> {
    pub pairs: Vec<CrossPair<T>>,
    /// `‖Σ pairs‖`.
    pub total: T,
    /// `Σ ‖pair‖`.
    pub pair_sum: T,
    pub budget: T,
    /// Number of cross terms that the gadget properties force to vanish.
    pub forced_zero_checks: usize,
    /// Descriptions of forced-zero terms that did not vanish exactly.
    pub violations: Vec<String>,
}

impl<T: Real> CrossGadgetReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
            && self.total <= self.pair_sum + T::tolerance(1e-12)
            && self.total <= self.budget + T::tolerance(1e-12)
    }
}

fn norm_or_sum<T: Real>(op: &PauliSum<T>) -> T {
    operator_norm_local(op, LOCAL_NORM_CAP).unwrap_or_else(|_| op.one_norm())
}

/// Cross-gadget analysis for a single-level simulator and one generator per
/// gadget (in gadget order).
///
/// Checks, exactly and symbolically:
/// 1. every `Sᵘ` flips mediator `u` and touches no other mediator;
/// 2. `Hᵛ` and `Sᵛ` do not touch mediator `u ≠ v`;
/// 3. `P[Sᵛ, Hᵘ]P = 0` and `P[S^{u₁}, [S^{u₂}, Hᵛ]]P = 0` for `u₁ ≠ u₂`.
///
/// Then evaluates the surviving `P[Sᵛ,[Sᵛ,V_extraᵘ]]P` for `u ≠ v`.
pub fn cross_gadget_report<T: Real>(
    sim: &SimulatorHamiltonian<T>,
    generators: &[SWGenerator<T>],
) -> Result<CrossGadgetReport<T>> {
    if generators.len() != sim.gadgets.len() {
        return Err(Error::DimensionMismatch {
            expected: sim.gadgets.len(),
            found: generators.len(),
        });
    }
    let mediators: BTreeSet<usize> = sim.mediators().into_iter().collect();
    let mut violations = Vec::new();
    let mut checks = 0usize;
    let gs: Vec<&PauliSum<T>> = generators.iter().map(|g| g.s.i_times()).collect();
    let hs: Vec<PauliSum<T>> = sim.gadgets.iter().map(|g| g.hamiltonian()).collect();

    for (i, g) in sim.gadgets.iter().enumerate() {
        let u = g.mediator;
        checks += 1;
        let flips_own =
            gs[i].terms().iter().all(|t| t.string.flips(u)) && gs[i].offset() == T::zero();
        let others = mediators.iter().filter(|&&m| m != u);
        let touches_other = others
            .clone()
            .any(|&m| gs[i].support().contains(&m) || hs[i].support().contains(&m));
        if !flips_own {
            violations.push(format!(
                "generator {u} has a term that does not flip its mediator"
            ));
        }
        if touches_other {
            violations.push(format!("gadget {u} touches another mediator"));
        }
    }

    let n = sim.gadgets.len();
    for v in 0..n {
        for u in 0..n {
            if u == v {
                continue;
            }
            checks += 1;
            let c = commutator(gs[v], &hs[u]).project_low(&mediators);
            if !c.is_zero() {
                violations.push(format!(
                    "P[S^{},H^{}]P = {c}",
                    sim.gadgets[v].mediator, sim.gadgets[u].mediator
                ));
            }
        }
    }
    for u1 in 0..n {
        for u2 in 0..n {
            if u1 == u2 {
                continue;
            }
            for v in 0..n {
                checks += 1;
                let c = commutator(gs[u1], &commutator(gs[u2], &hs[v])).project_low(&mediators);
                if !c.is_zero() {
                    violations.push(format!(
                        "P[S^{},[S^{},H^{}]]P = {c}",
                        sim.gadgets[u1].mediator, sim.gadgets[u2].mediator, sim.gadgets[v].mediator
                    ));
                }
            }
        }
    }

    let mut pairs = Vec::new();
    let mut sum = PauliSum::zero();
    let mut budget = T::zero();
    for v in 0..n {
        for u in 0..n {
            if u == v {
                continue;
            }
            let (gu, gv) = (&sim.gadgets[u], &sim.gadgets[v]);
            let extra = commutator(gs[v], &commutator(gs[v], &gu.v_extra)).project_low(&mediators);
            let full =
                commutator(gs[v], &commutator(gs[v], &gu.perturbation())).project_low(&mediators);
            let scale = Float::max(T::one(), full.one_norm());
            let identity_residual = (full - extra.clone())
                .prune(T::tolerance(1e-13) * scale)
                .one_norm();
            let j = Float::max(gu.j(), gv.j());
            let eps = gv.epsilon();
            budget += match gv.kind {
                GadgetKind::Subdivision => eps * eps * j,
                GadgetKind::ThreeToTwo => eps * j,
            };
            pairs.push(CrossPair {
                u: gu.mediator,
                v: gv.mediator,
                norm: norm_or_sum(&extra),
                identity_residual,
            });
            sum = sum + extra;
        }
    }
    let pair_sum = pairs.iter().map(|p| p.norm).fold(T::zero(), |a, b| a + b);
    for p in &pairs {
        if p.identity_residual > T::tolerance(1e-9) {
            violations.push(format!(
                "P[S^{0},[S^{0},V^{1}]]P differs from its V_extra part",
                p.v, p.u
            ));
        }
    }
    Ok(CrossGadgetReport {
        total: norm_or_sum(&sum),
        pair_sum,
        budget,
        forced_zero_checks: checks,
        violations,
        pairs,
    })
}

/// Smallest eigenvalue of `lhs − rhs`.
pub fn operator_gap<T: Real>(
    lhs: &PauliSum<T>,
    rhs: &PauliSum<T>,
    n_qubits: usize,
    caps: &Caps,
) -> Result<T> {
    let diff = lhs.clone() - rhs.clone();
    Ok(ground_energy(&diff, n_qubits, caps)?.energy)
}

/// `lhs ≥ rhs − slack` in the operator order.
pub fn operator_inequality_check<T: Real>(
    lhs: &PauliSum<T>,
    rhs: &PauliSum<T>,
    slack: T,
    n_qubits: usize,
    caps: &Caps,
) -> Result<bool> {
    Ok(operator_gap(lhs, rhs, n_qubits, caps)? >= -slack)
}

/// Qubits touched by each generator, for reporting.
pub fn generator_supports<T: Real>(
    generators: &[SWGenerator<T>],
) -> BTreeMap<usize, BTreeSet<usize>> {
    generators
        .iter()
        .enumerate()
        .map(|(i, g)| (i, g.s.i_times().support()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{
        assemble_simulator, mediator_penalty, subdivision_gadget, FactorizedInteraction, KindChoice,
    };
    use crate::sw::sw_gadget_closed_form;
    use rand::SeedableRng;

    #[test]
    fn nesting_basics() {
        let h = PauliSum::<f64>::term(1.0, "Z0 Z1");
        let s = AntiHermitian::from_i_times(PauliSum::term(0.3, "X0"));
        assert_eq!(nested_commutator(&s, &h, 0).unwrap(), h);
        let commuting = AntiHermitian::from_i_times(PauliSum::term(0.3, "Z0"));
        assert!(nested_commutator(&commuting, &h, 3).unwrap().is_zero());
        assert!(matches!(
            nested_commutator(&s, &h, 7),
            Err(Error::OrderCap(7, 6))
        ));
    }

    #[test]
    fn second_nesting_matches_dense() {
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
        let s = sw_gadget_closed_form(&g);
        let h = g.hamiltonian();
        let caps = Caps::default();
        let sym = to_matrix(&nested_commutator(&s.s, &h, 2).unwrap(), 3, &caps)
            .unwrap()
            .matrix;
        let sm = s.dense(&caps).unwrap();
        let hm = to_matrix(&h, 3, &caps).unwrap().matrix;
        let l1 = &sm * &hm - &hm * &sm;
        let l2 = &sm * &l1 - &l1 * &sm;
        assert!(crate::spectral::max_abs(&(sym - l2)) < 1e-10);
    }

    #[test]
    fn zero_generator_remainder() {
        let h = PauliSum::<f64>::term(0.4, "X0 Y1");
        let r = remainder_r_k(&AntiHermitian::zero(), &h, 1, 2, &Caps::default()).unwrap();
        assert!(r.r_k < 1e-14);
        assert!(r.satisfied);
    }

    #[test]
    fn remainder_bound_on_random_instances() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let caps = Caps::default();
        for _ in 0..10 {
            let s = random_generator::<f64>(&mut rng, 3, 4, 0.3, &caps).unwrap();
            let h = random_pauli_sum::<f64>(&mut rng, 3, 5, 1.0);
            for k in 1..=4 {
                for t in [0.25, 0.5, 1.0] {
                    let r = remainder_r_k(&s.scale(t), &h, k, 3, &caps).unwrap();
                    assert!(r.satisfied, "k={k} t={t}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn chain_ratios_bounded() {
        let caps = Caps::default();
        for k in 1..=3 {
            let r = commutator_growth(chain_family::<f64>, &[4, 6, 8, 10], k, &caps).unwrap();
            assert!(r.bounded, "k={k}: {:?}", r.samples);
            // elementary commutator count grows linearly
            let counts: Vec<_> = r
                .samples
                .iter()
                .map(|s| s.elementary_count as f64 / s.n as f64)
                .collect();
            assert!(counts.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-12));
            assert!((r.fitted_slope.unwrap() - 1.0).abs() < 0.1);
        }
    }

    #[test]
    fn disjoint_family_is_zero() {
        let fam = |n: usize| {
            let (_, h) = chain_family::<f64>(n);
            let g = PauliSum::single(1.0, n + 1, crate::Pauli::X);
            (AntiHermitian::from_i_times(g), h)
        };
        let r = commutator_growth(fam, &[4, 6, 8], 1, &Caps::default()).unwrap();
        assert!(r
            .samples
            .iter()
            .all(|s| s.ratio == 0.0 && s.elementary_count == 0));
        assert!(commutator_growth(fam, &[4, 6], 1, &Caps::default()).is_err());
    }

    #[test]
    fn cross_terms_for_shared_qubit() {
        let t = PauliSum::<f64>::term(1.0, "Z0 Z1 Z2") + PauliSum::term(1.0, "Z2 Z3 Z4");
        for kind in [KindChoice::Subdivision, KindChoice::ThreeToTwo] {
            let sim = assemble_simulator(&t, 0.2, kind).unwrap();
            let gens: Vec<_> = sim.gadgets.iter().map(sw_gadget_closed_form).collect();
            let r = cross_gadget_report(&sim, &gens).unwrap();
            assert!(r.violations.is_empty(), "{:?}", r.violations);
            assert!(r.passed(), "{r:?}");
            if kind == KindChoice::Subdivision {
                // V_extra is a multiple of the identity for Pauli factors
                assert_eq!(r.total, 0.0);
            }
        }
        let sim = assemble_simulator(&t, 0.2, KindChoice::Subdivision).unwrap();
        assert!(cross_gadget_report(&sim, &[]).is_err());
    }

    #[test]
    fn operator_inequalities() {
        let caps = Caps::default();
        let h = PauliSum::<f64>::term(1.0, "X0 Z1");
        assert!(operator_inequality_check(&h, &h, 0.0, 2, &caps).unwrap());
        let p = mediator_penalty(0, 3.0);
        assert!(!operator_inequality_check(&p, &PauliSum::constant(6.0), 0.0, 1, &caps).unwrap());
    }
}
