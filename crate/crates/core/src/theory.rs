//! Pivotal measurements, sufficiency and improvability checks, and the two
//! constructions that produce a measurement with strictly more action value
//! than measuring the outcome itself.
//!
//! Every check is restricted to positive-probability assignments.

use std::fmt;

use crate::boolmodel::{joint_keys, Action, Assignment, BoolFn, JointDist, Model};
use crate::error::{Error, Result};
use crate::value::{optimal_policy, Policy};

/// Event that flipping `X_i` raises the outcome from 0 to 1.
pub fn pivotal_indicator(y: &BoolFn, state: usize) -> Result<BoolFn> {
    if state == 0 || state > y.states() {
        return Err(Error::param(format!(
            "state X{state} out of range for {} states",
            y.states()
        )));
    }
    Ok(
        BoolFn::from_fn(y.states(), |a| !y.get(a.index()) && y.get(a.flipped(state).index()))?
            .with_name(format!("piv{state}")),
    )
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Quantities for the threshold outcome `Y = 1{X_1 + ... + X_s >= k}` with
/// i.i.d. states of failure rate `p`.
///
/// `pr_pivotal` and `pr_y0` come from enumerating assignments; the binomial
/// expressions are kept alongside for comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop41Quantities {
    pub states: usize,
    pub k: usize,
    pub p: f64,
    /// `Pr(X_1 pivotal)` by enumeration.
    pub pr_pivotal: f64,
    /// `Pr(Y = 0)` by enumeration.
    pub pr_y0: f64,
    /// `C(s-1, k-1) p^(s-k+1) q^(k-1)`.
    pub pr_pivotal_binomial: f64,
    /// `sum_{m=0}^{k-1} C(s, m) q^m p^(s-m)`, counting ones below the threshold.
    pub pr_y0_binomial: f64,
    /// `sum_{m=k}^{s} C(s, m) p^m q^(s-m)`, the sum with zeros counted from `k`.
    pub pr_y0_zero_count_sum: f64,
}

impl Prop41Quantities {
    pub fn pivotal_formula_agrees(&self) -> bool {
        (self.pr_pivotal - self.pr_pivotal_binomial).abs() <= 1e-12
    }

    pub fn y0_formula_agrees(&self) -> bool {
        (self.pr_y0 - self.pr_y0_binomial).abs() <= 1e-12
    }

    /// Whether the zero-count sum happens to equal `Pr(Y = 0)`.
    pub fn zero_count_sum_agrees(&self) -> bool {
        (self.pr_y0 - self.pr_y0_zero_count_sum).abs() <= 1e-12
    }

    /// Lower bound on the pivotal measurement's action value at cost `c`.
    pub fn pivotal_lower_bound(&self, c: f64) -> f64 {
        self.pr_pivotal * (1.0 - c)
    }

    /// Action value of measuring `Y` at cost `c`.
    pub fn outcome_action_value(&self, c: f64) -> f64 {
        (self.pr_pivotal - c * self.pr_y0).max(0.0)
    }
}

pub fn prop41_quantities(states: usize, k: usize, p: f64) -> Result<Prop41Quantities> {
    if !(1..=states).contains(&k) {
        return Err(Error::param(format!("threshold {k} outside 1..={states}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(format!("failure rate {p} outside (0, 1)")));
    }
    let q = 1.0 - p;
    let dist = JointDist::iid(states, q)?;
    let y = BoolFn::threshold(states, k)?;
    let pr_pivotal = dist.event_probability(&pivotal_indicator(&y, 1)?)?;
    let pr_y0 = dist.event_probability(&y.not())?;
    let pow = |b: f64, e: usize| b.powi(e as i32);
    Ok(Prop41Quantities {
        states,
        k,
        p,
        pr_pivotal,
        pr_y0,
        pr_pivotal_binomial: binomial(states - 1, k - 1) * pow(p, states - k + 1) * pow(q, k - 1),
        pr_y0_binomial: (0..k)
            .map(|m| binomial(states, m) * pow(q, m) * pow(p, states - m))
            .sum(),
        pr_y0_zero_count_sum: (k..=states)
            .map(|m| binomial(states, m) * pow(p, m) * pow(q, states - m))
            .sum(),
    })
}

/// Whether one action, or some action per realization, fixes the outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SufficiencyReport {
    /// First sufficient action in tie-break order.
    pub sufficient_action: Option<Action>,
    pub sufficient_actions: Vec<Action>,
    pub fully_improvable: bool,
    /// For each non-sufficient action, the first support assignment where
    /// the outcome is 0 after the action.
    pub action_witnesses: Vec<(Action, Assignment)>,
    /// Bad support assignments that no single action fixes.
    pub unimprovable: Vec<Assignment>,
}

fn fixes(y: &BoolFn, act: Action, a: Assignment) -> bool {
    y.get(act.apply(a).index())
}

pub fn find_sufficient_action(model: &Model) -> SufficiencyReport {
    let y = model.outcome();
    let support: Vec<Assignment> = model.dist().support().collect();
    let ops = Action::do_operations(model.states());
    let mut sufficient_actions = Vec::new();
    let mut action_witnesses = Vec::new();
    for &act in &ops {
        match support.iter().find(|&&a| !fixes(y, act, a)) {
            Some(&w) => action_witnesses.push((act, w)),
            None => sufficient_actions.push(act),
        }
    }
    let unimprovable: Vec<Assignment> = support
        .iter()
        .copied()
        .filter(|a| !y.get(a.index()))
        .filter(|&a| !ops.iter().any(|&act| fixes(y, act, a)))
        .collect();
    SufficiencyReport {
        sufficient_action: sufficient_actions.first().copied(),
        sufficient_actions,
        fully_improvable: unimprovable.is_empty(),
        action_witnesses,
        unimprovable,
    }
}

/// True iff every positive-probability assignment in `{event = 1}` has
/// outcome 1 after `act`.
pub fn sufficient_on_event(model: &Model, act: Action, event: &BoolFn) -> Result<bool> {
    act.validate(model.states())?;
    if model.dist().event_probability(event)? <= 0.0 {
        return Err(Error::ZeroProbabilityEvent);
    }
    let y = model.outcome();
    Ok(model
        .dist()
        .support()
        .filter(|a| event.get(a.index()))
        .all(|a| fixes(y, act, a)))
}

/// Result of the single-measurement construction.
#[derive(Debug, Clone)]
pub struct SingleConstruction {
    /// Zero exactly on `{Y = 0} & {Y^a = 1}`.
    pub measurement: BoolFn,
    pub action: Action,
    /// `Pr(M = 0)`.
    pub region_probability: f64,
    pub pr_y0: f64,
    /// Set when acting on `{Y = 0}` does not pay at the model's cost, so the
    /// action was chosen as the best one at zero cost.
    pub zero_cost_choice: bool,
}

/// Builds a measurement with more action value than `Y` for an outcome
/// without a sufficient action.
pub fn thm_single_construction(model: &Model) -> Result<SingleConstruction> {
    let y = model.outcome();
    let dist = model.dist();
    let s = model.states();
    if dist.support().all(|a| y.get(a.index())) {
        return Err(Error::NotApplicable(
            "outcome is identically 1 on the support".into(),
        ));
    }
    if dist.support().all(|a| !y.get(a.index())) {
        return Err(Error::NotApplicable(
            "outcome is identically 0 on the support".into(),
        ));
    }
    if let Some(act) = find_sufficient_action(model).sufficient_action {
        return Err(Error::NotApplicable(format!(
            "outcome has a sufficient action ({act})"
        )));
    }

    let policy = optimal_policy(model, std::slice::from_ref(y))?;
    let mut action = policy.action_for(0);
    let mut zero_cost_choice = false;
    if action.is_noop() {
        zero_cost_choice = true;
        let free = model.with_uniform_cost(0.0)?;
        action = optimal_policy(&free, std::slice::from_ref(y))?.action_for(0);
        if action.is_noop() {
            return Err(Error::NotApplicable(
                "no single action improves the outcome on {Y = 0}".into(),
            ));
        }
    }

    let measurement =
        BoolFn::from_fn(s, |a| y.get(a.index()) || !fixes(y, action, a))?.with_name("thm_single");
    let region_probability = dist.event_probability(&measurement.not())?;
    let pr_y0 = dist.event_probability(&y.not())?;
    if region_probability >= pr_y0 {
        return Err(Error::NotApplicable(format!(
            "{action} fixes every positive-probability state with Y = 0"
        )));
    }
    Ok(SingleConstruction {
        measurement,
        action,
        region_probability,
        pr_y0,
        zero_cost_choice,
    })
}

/// Values of a companion set `S` at which learning `Y = 0` changes the
/// optimal action.
#[derive(Debug, Clone)]
pub struct YRelevance {
    pub set: Vec<BoolFn>,
    /// Joint values of `S`, ascending.
    pub relevant_values: Vec<usize>,
    pub nonredundant: bool,
    /// Optimal policy for `[Y] ++ S`; bit 0 of its joint value is `Y`.
    pub policy: Policy,
}

pub fn y_relevant_set(model: &Model, set: &[BoolFn]) -> Result<YRelevance> {
    let mut mset = Vec::with_capacity(set.len() + 1);
    mset.push(model.outcome().clone());
    mset.extend_from_slice(set);
    let policy = optimal_policy(model, &mset)?;
    let relevant_values: Vec<usize> = (0..1usize << set.len())
        .filter(|&sbar| {
            let b = &policy.branches[sbar << 1];
            b.probability > 0.0 && !b.action.is_noop()
        })
        .collect();
    Ok(YRelevance {
        set: set.to_vec(),
        nonredundant: !relevant_values.is_empty(),
        relevant_values,
        policy,
    })
}

/// Why [`thm_set_construction`] produced nothing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotApplicableReason {
    /// The relevant set is empty.
    RedundantOutcome,
    /// Some action is sufficient on every relevant branch.
    SufficientOnEveryRelevantBranch,
    /// On every relevant branch without a sufficient action, the optimal
    /// action still fixes every bad state.
    NoUnimprovedState,
}

impl fmt::Display for NotApplicableReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotApplicableReason::RedundantOutcome => "redundant Y",
            NotApplicableReason::SufficientOnEveryRelevantBranch => {
                "sufficiency on every relevant branch"
            }
            NotApplicableReason::NoUnimprovedState => {
                "optimal action fixes every bad state on the remaining relevant branches"
            }
        })
    }
}

/// Output of the measurement-set construction.
#[derive(Debug, Clone)]
pub struct SetConstruction {
    /// 1 on `{Y = 1}` and on the unimproved states, 0 elsewhere.
    pub measurement: BoolFn,
    /// Joint value of `S` the construction targets.
    pub branch: usize,
    pub action: Action,
    /// Positive-probability states with `S = branch` and `Y = 0` that the
    /// action leaves at `Y = 0`.
    pub unimproved: Vec<Assignment>,
    pub unimproved_probability: f64,
    /// `Pr(unimproved) * cost(action)`.
    pub guaranteed_improvement: f64,
}

#[derive(Debug, Clone)]
pub enum SetConstructionOutcome {
    Constructed(SetConstruction),
    NotApplicable(NotApplicableReason),
}

impl SetConstructionOutcome {
    pub fn constructed(&self) -> Option<&SetConstruction> {
        match self {
            SetConstructionOutcome::Constructed(c) => Some(c),
            SetConstructionOutcome::NotApplicable(_) => None,
        }
    }
}

/// Replaces `Y` in `[Y] ++ S` by a measurement with strictly more action
/// value, when `Y` is non-redundant and some relevant branch lacks a
/// sufficient action. The smallest qualifying joint value of `S` is used.
pub fn thm_set_construction(model: &Model, set: &[BoolFn]) -> Result<SetConstructionOutcome> {
    let relevance = y_relevant_set(model, set)?;
    if !relevance.nonredundant {
        return Ok(SetConstructionOutcome::NotApplicable(
            NotApplicableReason::RedundantOutcome,
        ));
    }
    let s = model.states();
    let y = model.outcome();
    let dist = model.dist();
    let keys = joint_keys(set, s)?;
    let ops = Action::do_operations(s);
    let mut all_sufficient = true;
    for &sbar in &relevance.relevant_values {
        let event = BoolFn::from_fn(s, |a| keys[a.index()] == sbar)?;
        let mut has_sufficient = false;
        for &act in &ops {
            if sufficient_on_event(model, act, &event)? {
                has_sufficient = true;
                break;
            }
        }
        if has_sufficient {
            continue;
        }
        all_sufficient = false;
        let action = relevance.policy.action_for(sbar << 1);
        let unimproved: Vec<Assignment> = dist
            .support()
            .filter(|a| keys[a.index()] == sbar && !y.get(a.index()) && !fixes(y, action, *a))
            .collect();
        if unimproved.is_empty() {
            continue;
        }
        let measurement = BoolFn::from_fn(s, |a| {
            y.get(a.index()) || unimproved.binary_search(&a).is_ok()
        })?
        .with_name("thm_set");
        let unimproved_probability =
            crate::boolmodel::ordered_sum(unimproved.iter().map(|a| dist.prob(a.index())));
        return Ok(SetConstructionOutcome::Constructed(SetConstruction {
            measurement,
            branch: sbar,
            action,
            guaranteed_improvement: unimproved_probability * model.costs().cost(action),
            unimproved,
            unimproved_probability,
        }));
    }
    Ok(SetConstructionOutcome::NotApplicable(if all_sufficient {
        NotApplicableReason::SufficientOnEveryRelevantBranch
    } else {
        NotApplicableReason::NoUnimprovedState
    }))
}
