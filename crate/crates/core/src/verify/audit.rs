//! Replays solver runs against the objective and checks the per-run
//! guarantees: LAA's acceptance rule and its packing bound
//! `f(x') ≥ f(x^t)/3`, `f(x') ≥ opt₂/18` and `f(s) ≥ opt/19` when the
//! instance is small enough to brute force, and RLA's `(1/5 − ε)` ratio.

use crate::algorithms::{brute_force_opt, suffix_pack, LaaRun, RlaRun};
use crate::error::{Error, Result};
use crate::instance::KnapsackInstance;
use crate::kset::KSet;
use crate::oracle::Objective;

use super::ksub::DEFAULT_TOLERANCE;

/// `lhs ≥ rhs` up to a relative slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

impl Bound {
    pub fn at_least(lhs: f64, rhs: f64) -> Self {
        let slack = DEFAULT_TOLERANCE * rhs.abs().max(lhs.abs()).max(1.0);
        Self {
            lhs,
            rhs,
            ok: lhs >= rhs - slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaaAudit {
    pub accepted: usize,
    pub feasible: bool,
    /// `f(x') ≥ f(x^t) / 3`.
    pub packing: Bound,
    /// `f(s) ≥ opt / 19`.
    pub ratio: Option<Bound>,
    /// `f(x') ≥ opt₂ / 18`, with `opt₂` the optimum over `c(e) ≤ B/2`.
    pub small_items: Option<Bound>,
    pub opt: Option<f64>,
    pub opt_small: Option<f64>,
}

impl LaaAudit {
    pub fn passed(&self) -> bool {
        self.feasible
            && self.packing.ok
            && self.ratio.map_or(true, |b| b.ok)
            && self.small_items.map_or(true, |b| b.ok)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= DEFAULT_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

fn mismatch(msg: String) -> Error {
    Error::TraceMismatch(msg)
}

/// Replays an LAA trace. A trace whose recorded values or decisions differ
/// from what the objective dictates fails with [`Error::TraceMismatch`];
/// violated bounds are reported in the returned audit. Brute-force checks run
/// when `(k+1)^n ≤ brute_cap`.
pub fn audit_laa_trace(
    run: &LaaRun,
    inst: &KnapsackInstance,
    f: &dyn Objective,
    brute_cap: Option<u64>,
) -> Result<LaaAudit> {
    let budget = inst.budget();
    let k = inst.k();
    let mut x = KSet::empty(k);
    let mut fx = 0.0;
    let mut cost = 0.0;
    let mut accepted = Vec::new();

    for ev in &run.trace {
        let c = inst
            .cost(ev.element)
            .ok_or(Error::UnknownElement { element: ev.element })?;
        if c > budget {
            return Err(mismatch(format!("element {} exceeds the budget", ev.element)));
        }
        let singles: Vec<f64> = (1..=k)
            .map(|i| KSet::from_pairs(k, [(ev.element, i)]).map(|s| f.evaluate(&s)))
            .collect::<Result<_>>()?;
        let best = singles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let chosen = singles
            .get(ev.position.wrapping_sub(1))
            .copied()
            .ok_or_else(|| mismatch(format!("position {} out of range", ev.position)))?;
        if !close(chosen, best) {
            return Err(mismatch(format!(
                "element {}: position {} is not a best singleton position",
                ev.element, ev.position
            )));
        }
        if let Some(recorded) = ev.singleton_value {
            if !close(recorded, chosen) {
                return Err(mismatch(format!(
                    "element {}: singleton value {recorded} recorded, {chosen} recomputed",
                    ev.element
                )));
            }
        }

        if c <= budget / 2.0 {
            let extended = x.assign(ev.element, ev.position)?;
            let value = f.evaluate(&extended);
            let marginal = value - fx;
            let threshold = c * fx / budget;
            match ev.marginal {
                Some(m) if close(m, marginal) => {}
                other => {
                    return Err(mismatch(format!(
                        "element {}: marginal {other:?} recorded, {marginal} recomputed",
                        ev.element
                    )))
                }
            }
            let should_accept = marginal >= threshold;
            if ev.accepted != should_accept {
                return Err(mismatch(format!(
                    "element {}: accepted = {} but Δ = {marginal} vs c·f(x)/B = {threshold}",
                    ev.element, ev.accepted
                )));
            }
            if should_accept {
                x = extended;
                fx = value;
                cost += c;
                accepted.push((ev.element, ev.position));
            }
        } else if ev.accepted {
            return Err(mismatch(format!(
                "element {} costs more than B/2 but was accepted",
                ev.element
            )));
        }
        if !close(ev.running_value, fx) || !close(ev.running_cost, cost) {
            return Err(mismatch(format!(
                "element {}: running state diverges from replay",
                ev.element
            )));
        }
    }

    if accepted != run.accepted {
        return Err(mismatch("accepted sequence differs from replay".into()));
    }
    if !close(fx, run.full_value) {
        return Err(mismatch(format!(
            "f(x^t) recorded {}, recomputed {fx}",
            run.full_value
        )));
    }
    let packed = suffix_pack(&accepted, inst)?;
    if packed != run.packed {
        return Err(mismatch("packed suffix differs from replay".into()));
    }
    let packed_value = f.evaluate(&packed);
    let value = f.evaluate(&run.result.solution);
    if !close(value, run.result.value) {
        return Err(mismatch(format!(
            "result value recorded {}, recomputed {value}",
            run.result.value
        )));
    }
    let feasible = run.result.solution.total_cost(inst)? <= budget && packed.total_cost(inst)? <= budget;

    let mut audit = LaaAudit {
        accepted: accepted.len(),
        feasible,
        packing: Bound::at_least(packed_value, fx / 3.0),
        ratio: None,
        small_items: None,
        opt: None,
        opt_small: None,
    };

    if let Some(cap) = brute_cap {
        let states = ((k + 1) as f64).powi(inst.n() as i32);
        if states <= cap as f64 {
            let opt = brute_force_opt(inst, f, cap)?.value;
            let small = inst.restricted(|_, c| c <= budget / 2.0)?;
            let opt_small = brute_force_opt(&small, f, cap)?.value;
            audit.ratio = Some(Bound::at_least(value, opt / 19.0));
            audit.small_items = Some(Bound::at_least(packed_value, opt_small / 18.0));
            audit.opt = Some(opt);
            audit.opt_small = Some(opt_small);
        }
    }
    Ok(audit)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RlaAudit {
    /// `f(s_final) ≥ (1/5 − ε) opt`.
    pub ratio: Bound,
    /// `f(s_final) ≥ f(s_b)`.
    pub dominance: Bound,
    /// Every candidate `s_v` and the final answer fit in the budget.
    pub feasible: bool,
    /// `Γ ≤ v ≤ 19Γ` for every guess `v`.
    pub bracket_ok: bool,
    pub guesses: usize,
}

impl RlaAudit {
    pub fn passed(&self) -> bool {
        self.ratio.ok && self.dominance.ok && self.feasible && self.bracket_ok
    }
}

/// Checks an RLA run against a known optimum `opt`.
pub fn audit_rla(
    run: &RlaRun,
    inst: &KnapsackInstance,
    f: &dyn Objective,
    epsilon: f64,
    opt: f64,
) -> Result<RlaAudit> {
    let budget = inst.budget();
    let final_value = f.evaluate(&run.result.solution);
    let base_value = f.evaluate(&run.laa.result.solution);
    let mut feasible = run.result.solution.total_cost(inst)? <= budget;
    for g in &run.guesses {
        feasible &= g.solution.total_cost(inst)? <= budget;
        if !close(f.evaluate(&g.solution), g.value) {
            return Err(mismatch(format!("guess {}: recorded value diverges", g.guess)));
        }
    }
    let gamma = run.gamma;
    let bracket_ok = run
        .guesses
        .iter()
        .all(|g| g.guess >= gamma && g.guess <= 19.0 * gamma);
    Ok(RlaAudit {
        ratio: Bound::at_least(final_value, (0.2 - epsilon) * opt),
        dominance: Bound::at_least(final_value, base_value),
        feasible,
        bracket_ok,
        guesses: run.guesses.len(),
    })
}
