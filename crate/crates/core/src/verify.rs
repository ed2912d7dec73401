//! Theorem checks on a single model and on seeded random corpora.
//!
//! Each check yields a [`CheckResult`]; a construction whose hypotheses do
//! not hold is reported as [`CheckStatus::Skip`], never as a failure.

use std::fmt;

use rayon::prelude::*;

use crate::boolmodel::{BoolFn, Model, Utility};
use crate::error::{Error, Result};
use crate::random::{random_measurements, random_model, stream_rng};
use crate::search::{best_measurement_set, Criterion, Pool, MAX_ENUMERATION_STATES};
use crate::theory::{
    find_sufficient_action, pivotal_indicator, prop41_quantities, thm_set_construction,
    thm_single_construction, SetConstructionOutcome,
};
use crate::value::{
    action_value, action_value_upper_bound, optimal_policy, policy_bruteforce_oracle,
};

/// Interior costs at which cost-dependent statements are checked.
pub const INTERIOR_COSTS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Absolute slack for inequalities between computed values.
pub const VALUE_TOLERANCE: f64 = 1e-9;

/// States up to which the exhaustive single-measurement maximum is computed.
const CONVERSE_MAX_STATES: usize = 3;
/// States up to which pairs of measurements go through the policy oracle.
const ORACLE_PAIR_MAX_STATES: usize = 3;
/// Companion sets checked for the set construction.
const MAX_COMPANION_SETS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, status: CheckStatus, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }

    fn pass_if(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckResult::new(name, status, detail)
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.status, self.name, self.detail)
    }
}

/// True when no check failed.
pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status != CheckStatus::Fail)
}

/// The costs used for cost-dependent checks: the model's own uniform cost
/// when it is interior, then the standard interior grid.
fn check_costs(model: &Model) -> Vec<f64> {
    let mut costs = Vec::new();
    if let Some(c) = model.costs().uniform_cost() {
        if c > 0.0 && c < 1.0 && !INTERIOR_COSTS.contains(&c) {
            costs.push(c);
        }
    }
    costs.extend_from_slice(&INTERIOR_COSTS);
    costs
}

/// `model` with `u(y) = y` and uniform cost `c`.
fn at_cost(model: &Model, c: f64) -> Result<Model> {
    model.with_utility(Utility::identity()).with_uniform_cost(c)
}

fn fmt_costs(costs: &[f64]) -> String {
    format!("{} costs in [{}, {}]", costs.len(), costs.iter().copied().fold(f64::INFINITY, f64::min), costs.iter().copied().fold(0.0, f64::max))
}

fn sufficiency_check(model: &Model) -> CheckResult {
    let report = find_sufficient_action(model);
    match report.sufficient_action {
        None => CheckResult::new("sufficiency", CheckStatus::Pass, "no sufficient action"),
        Some(a) => CheckResult::pass_if(
            "sufficiency",
            report.fully_improvable,
            if report.fully_improvable {
                format!("sufficient action {a}; outcome fully improvable")
            } else {
                format!("sufficient action {a} but outcome not fully improvable")
            },
        ),
    }
}

/// Forward direction of the single-measurement theorem: a constructed
/// measurement beats `Y` at every checked cost.
fn thm42_forward(model: &Model, costs: &[f64]) -> Result<CheckResult> {
    const NAME: &str = "thm42 construction beats Y";
    let y = std::slice::from_ref(model.outcome());
    let mut worst: Option<(f64, f64)> = None;
    for &c in costs {
        let m = at_cost(model, c)?;
        let construction = match thm_single_construction(&m) {
            Ok(k) => k,
            Err(Error::NotApplicable(why)) => {
                return Ok(CheckResult::new(NAME, CheckStatus::Skip, format!("not applicable at c={c}: {why}")))
            }
            Err(e) => return Err(e),
        };
        let v_m = action_value(&m, std::slice::from_ref(&construction.measurement))?;
        let v_y = action_value(&m, y)?;
        let margin = v_m - v_y;
        if margin <= 1e-12 {
            return Ok(CheckResult::new(
                NAME,
                CheckStatus::Fail,
                format!("at c={c}: V(M)={v_m:.12} V(Y)={v_y:.12} using {}", construction.action),
            ));
        }
        if worst.is_none_or(|(_, w)| margin < w) {
            worst = Some((c, margin));
        }
    }
    let (c, margin) = worst.expect("at least one cost");
    Ok(CheckResult::new(
        NAME,
        CheckStatus::Pass,
        format!("{}; smallest margin {margin:.9} at c={c}", fmt_costs(costs)),
    ))
}

/// Converse: with a sufficient action, `Y` attains `Pr(Y=0)(1-c)`, the
/// maximum over all single measurements.
fn thm42_converse(model: &Model, costs: &[f64]) -> Result<CheckResult> {
    const NAME: &str = "thm42 converse";
    let exhaustive = model.states() <= CONVERSE_MAX_STATES;
    let pr_y0 = model.dist().event_probability(&model.outcome().not())?;
    for &c in costs {
        let m = at_cost(model, c)?;
        let v_y = action_value(&m, std::slice::from_ref(model.outcome()))?;
        let bound = pr_y0 * (1.0 - c);
        if (v_y - bound).abs() > VALUE_TOLERANCE {
            return Ok(CheckResult::new(
                NAME,
                CheckStatus::Fail,
                format!("at c={c}: V(Y)={v_y:.12} but Pr(Y=0)(1-c)={bound:.12}"),
            ));
        }
        if exhaustive {
            let best = best_measurement_set(&m, 1, Criterion::Act, Pool::All)?;
            if (best.value - v_y).abs() > VALUE_TOLERANCE {
                return Ok(CheckResult::new(
                    NAME,
                    CheckStatus::Fail,
                    format!("at c={c}: V(Y)={v_y:.12} but {} reaches {:.12}", best.members[0].hex(), best.value),
                ));
            }
        }
    }
    let scope = if exhaustive {
        "V(Y) = Pr(Y=0)(1-c) = max over all measurements"
    } else {
        "V(Y) = Pr(Y=0)(1-c); exhaustive maximum skipped for s > 3"
    };
    Ok(CheckResult::new(NAME, CheckStatus::Pass, format!("{scope}; {}", fmt_costs(costs))))
}

/// Threshold outcome `1{sum X >= k}` detection.
fn threshold_k(model: &Model) -> Option<usize> {
    let s = model.states();
    (1..=s).find(|&k| BoolFn::threshold(s, k).is_ok_and(|t| &t == model.outcome()))
}

fn prop41_check(model: &Model, costs: &[f64]) -> Result<Option<CheckResult>> {
    const NAME: &str = "prop41 pivotal beats Y";
    let Some(k) = threshold_k(model) else {
        return Ok(None);
    };
    let Some(pr_one) = model.dist().iid_marginal(1e-12) else {
        return Ok(None);
    };
    let p = 1.0 - pr_one;
    let s = model.states();
    if p <= 0.0 || p >= 1.0 {
        return Ok(Some(CheckResult::new(NAME, CheckStatus::Skip, "degenerate marginal")));
    }
    let piv = pivotal_indicator(model.outcome(), 1)?;
    let strict = k > 1;
    for &c in costs {
        let m = at_cost(model, c)?;
        let v_piv = action_value(&m, std::slice::from_ref(&piv))?;
        let v_y = action_value(&m, std::slice::from_ref(model.outcome()))?;
        let ok = if strict {
            v_piv - v_y > VALUE_TOLERANCE
        } else {
            v_piv >= v_y - VALUE_TOLERANCE
        };
        if !ok {
            return Ok(Some(CheckResult::new(
                NAME,
                CheckStatus::Fail,
                format!("s={s} k={k} p={p} c={c}: V(piv)={v_piv:.12} V(Y)={v_y:.12}"),
            )));
        }
    }
    let q = prop41_quantities(s, k, p)?;
    let mut detail = format!(
        "s={s} k={k} p={p}: {} over {}",
        if strict { "strict" } else { "weak" },
        fmt_costs(costs)
    );
    if !q.pivotal_formula_agrees() {
        detail.push_str("; binomial Pr(pivotal) disagrees with enumeration");
    }
    Ok(Some(CheckResult::new(NAME, CheckStatus::Pass, detail)))
}

/// Engine policy against brute-force enumeration for the empty set, `Y`,
/// each declared measurement and, for small models, each declared pair.
fn oracle_check(model: &Model) -> Result<CheckResult> {
    const NAME: &str = "oracle equivalence";
    let mut sets: Vec<Vec<BoolFn>> = vec![Vec::new(), vec![model.outcome().clone()]];
    let declared = model.measurements();
    sets.extend(declared.iter().map(|f| vec![f.clone()]));
    if model.states() <= ORACLE_PAIR_MAX_STATES {
        for i in 0..declared.len() {
            for j in i + 1..declared.len() {
                sets.push(vec![declared[i].clone(), declared[j].clone()]);
            }
        }
    }
    for set in &sets {
        let engine = optimal_policy(model, set)?;
        let oracle = policy_bruteforce_oracle(model, set)?;
        let names: Vec<String> = set.iter().map(BoolFn::label).collect();
        if engine.value != oracle.value {
            return Ok(CheckResult::new(
                NAME,
                CheckStatus::Fail,
                format!("[{}]: engine {:.17} oracle {:.17}", names.join(","), engine.value, oracle.value),
            ));
        }
        if engine.actions != oracle.actions {
            return Ok(CheckResult::new(
                NAME,
                CheckStatus::Fail,
                format!("[{}]: policies differ", names.join(",")),
            ));
        }
    }
    Ok(CheckResult::new(NAME, CheckStatus::Pass, format!("{} measurement sets agree exactly", sets.len())))
}

fn upper_bound_check(model: &Model) -> Result<CheckResult> {
    const NAME: &str = "upper bound";
    let bound = action_value_upper_bound(model)?;
    let mut sets: Vec<Vec<BoolFn>> = vec![Vec::new(), vec![model.outcome().clone()]];
    sets.extend(model.measurements().iter().map(|f| vec![f.clone()]));
    if !model.measurements().is_empty() {
        sets.push(model.measurements().iter().take(crate::value::MAX_JOINT_BITS).cloned().collect());
    }
    for set in &sets {
        let v = action_value(model, set)?;
        if v < 0.0 || v > bound + VALUE_TOLERANCE {
            let names: Vec<String> = set.iter().map(BoolFn::label).collect();
            return Ok(CheckResult::new(
                NAME,
                CheckStatus::Fail,
                format!("[{}]: value {v:.12} outside [0, {bound:.12}]", names.join(",")),
            ));
        }
    }
    Ok(CheckResult::new(NAME, CheckStatus::Pass, format!("{} sets within [0, {bound:.9}]", sets.len())))
}

fn combinations(n: usize, k: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        out.push(combo.clone());
        if out.len() >= limit {
            return out;
        }
        let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
            return out;
        };
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

/// Set construction against `Y ++ S`, reporting the improvement against the
/// guaranteed `Pr(X_NI) * cost`.
pub fn thm43_check(model: &Model, set: &[BoolFn]) -> Result<CheckResult> {
    let names: Vec<String> = set.iter().map(BoolFn::label).collect();
    let name = format!("thm43 S=[{}]", names.join(","));
    match thm_set_construction(model, set)? {
        SetConstructionOutcome::NotApplicable(reason) => Ok(CheckResult::new(
            name,
            CheckStatus::Skip,
            format!("not applicable: {reason}"),
        )),
        SetConstructionOutcome::Constructed(k) => {
            let mut with_y = vec![model.outcome().clone()];
            with_y.extend_from_slice(set);
            let mut with_m = vec![k.measurement.clone()];
            with_m.extend_from_slice(set);
            let gain = action_value(model, &with_m)? - action_value(model, &with_y)?;
            let ok = gain >= k.guaranteed_improvement - VALUE_TOLERANCE && gain > 0.0;
            Ok(CheckResult::pass_if(
                name,
                ok,
                format!(
                    "improvement {gain:.9} vs guaranteed {:.9} on branch {} with {}",
                    k.guaranteed_improvement, k.branch, k.action
                ),
            ))
        }
    }
}

/// Runs every applicable check on one model.
pub fn verify_model(model: &Model) -> Result<Vec<CheckResult>> {
    let costs = check_costs(model);
    let mut out = vec![sufficiency_check(model)];
    let y_constant = model.dist().support().all(|a| model.outcome().get(a.index()))
        || model.dist().support().all(|a| !model.outcome().get(a.index()));
    if find_sufficient_action(model).sufficient_action.is_some() {
        out.push(thm42_converse(model, &costs)?);
    } else if y_constant {
        out.push(CheckResult::new(
            "thm42 construction beats Y",
            CheckStatus::Skip,
            "outcome constant on the support",
        ));
    } else {
        out.push(thm42_forward(model, &costs)?);
    }
    if let Some(r) = prop41_check(model, &costs)? {
        out.push(r);
    }
    out.push(oracle_check(model)?);
    out.push(upper_bound_check(model)?);
    let companions = model.budget() - 1;
    let declared = model.measurements();
    if companions <= declared.len() && companions < crate::value::MAX_JOINT_BITS {
        for combo in combinations(declared.len(), companions, MAX_COMPANION_SETS) {
            let set: Vec<BoolFn> = combo.iter().map(|&i| declared[i].clone()).collect();
            out.push(thm43_check(model, &set)?);
        }
    }
    Ok(out)
}

/// Per-model outcome of the random corpus, one entry per check.
struct Sample {
    thm42: CheckResult,
    oracle: CheckResult,
    upper: CheckResult,
    thm43: CheckResult,
}

fn verify_sample(model: &Model, seed: u64, index: u64) -> Result<Sample> {
    let costs = INTERIOR_COSTS.to_vec();
    let thm42 = if find_sufficient_action(model).sufficient_action.is_some() {
        thm42_converse(model, &costs)?
    } else {
        thm42_forward(model, &costs)?
    };
    let s = model.states();
    let mut rng = stream_rng(seed ^ 0x5eed_5eed, index);
    let extra = random_measurements(&mut rng, s, 2)?;
    let probe = model.with_measurements(
        extra
            .iter()
            .enumerate()
            .map(|(i, f)| f.clone().with_name(format!("R{}", i + 1)))
            .collect(),
    )?;
    let oracle = if s <= ORACLE_PAIR_MAX_STATES || s <= MAX_ENUMERATION_STATES {
        oracle_check(&probe)?
    } else {
        CheckResult::new("oracle equivalence", CheckStatus::Skip, "s too large")
    };
    let upper = upper_bound_check(&probe)?;
    let thm43 = thm43_check(model, &extra[..1])?;
    Ok(Sample {
        thm42,
        oracle,
        upper,
        thm43,
    })
}

fn summarize(name: &str, results: &[(u64, CheckResult)]) -> CheckResult {
    let pass = results.iter().filter(|r| r.1.status == CheckStatus::Pass).count();
    let skip = results.iter().filter(|r| r.1.status == CheckStatus::Skip).count();
    let failures: Vec<&(u64, CheckResult)> =
        results.iter().filter(|r| r.1.status == CheckStatus::Fail).collect();
    let mut detail = format!("{pass} passed, {skip} not applicable, {} failed", failures.len());
    if let Some((k, r)) = failures.first() {
        detail.push_str(&format!("; first failure model {k}: {}", r.detail));
    }
    let status = if !failures.is_empty() {
        CheckStatus::Fail
    } else if pass == 0 {
        CheckStatus::Skip
    } else {
        CheckStatus::Pass
    };
    CheckResult::new(name, status, detail)
}

/// Checks on `samples` seeded random models with `states` states. Results
/// do not depend on the number of workers.
pub fn verify_random(states: usize, seed: u64, samples: usize, zero_cells: bool) -> Result<Vec<CheckResult>> {
    let per_model: Vec<Result<Sample>> = (0..samples as u64)
        .into_par_iter()
        .map(|k| {
            let model = random_model(&mut stream_rng(seed, k), states, zero_cells)?;
            verify_sample(&model, seed, k)
        })
        .collect();
    let mut thm42 = Vec::new();
    let mut oracle = Vec::new();
    let mut upper = Vec::new();
    let mut thm43 = Vec::new();
    for (k, r) in per_model.into_iter().enumerate() {
        let r = r?;
        let k = k as u64;
        thm42.push((k, r.thm42));
        oracle.push((k, r.oracle));
        upper.push((k, r.upper));
        thm43.push((k, r.thm43));
    }
    let label = |what: &str| format!("random s={states} seed={seed} {what}");
    Ok(vec![
        summarize(&label("thm42"), &thm42),
        summarize(&label("oracle equivalence"), &oracle),
        summarize(&label("upper bound"), &upper),
        summarize(&label("thm43"), &thm43),
    ])
}
