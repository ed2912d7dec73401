//! Exhaustive policy search used to cross-check the branch-wise engine.
//!
//! Nothing here shares code with [`super::engine`]: every candidate mapping
//! from joint values to actions is scored directly from the do-operation
//! semantics in [`crate::boolmodel`].

use super::engine::{BranchDecision, Policy, TIE_TOLERANCE};
use crate::boolmodel::{apply_do, joint_value, Action, Assignment, BoolFn, Model};
use crate::error::{Error, Result};

/// Largest number of candidate policies the oracle will enumerate.
pub const ORACLE_POLICY_LIMIT: f64 = 1e7;

/// Net utility of an arbitrary policy, `E[u(Y^{a(M)})] - E[u(Y)] - E[c(a(M))]`.
pub fn policy_net_utility(model: &Model, mset: &[BoolFn], policy: &[Action]) -> Result<f64> {
    let u = model.utility();
    let y = model.outcome();
    let probs = model.dist().probs();
    let mut e_act = 0.0;
    let mut e_base = 0.0;
    let mut e_cost = 0.0;
    for a in Assignment::all(model.states()) {
        let p = probs[a.index()];
        let act = policy[joint_value(mset, a)?];
        e_act += p * u.of(apply_do(y, act, a)?);
        e_base += p * u.of(y.eval(a)?);
        e_cost += p * model.costs().cost(act);
    }
    Ok(e_act - e_base - e_cost)
}

/// Enumerates every total mapping from joint values to actions and returns a
/// maximizer. Mappings are visited in lexicographic order of the action
/// tie-break order, and a later mapping replaces the incumbent only when it
/// is better by more than the tie tolerance.
pub fn policy_bruteforce_oracle(model: &Model, mset: &[BoolFn]) -> Result<Policy> {
    let actions = Action::all(model.states());
    let branches = 1usize
        .checked_shl(mset.len() as u32)
        .filter(|_| mset.len() < 32)
        .ok_or_else(|| Error::Capacity("measurement set too large for the oracle".into()))?;
    let count = (actions.len() as f64).powf(branches as f64);
    if count > ORACLE_POLICY_LIMIT {
        return Err(Error::Capacity(format!(
            "oracle would enumerate {count:.3e} policies (limit {ORACLE_POLICY_LIMIT:.0e})"
        )));
    }
    let tolerance = TIE_TOLERANCE * model.utility().span();

    // digits[v] indexes `actions`; branch 0 is the most significant digit.
    let mut digits = vec![0usize; branches];
    let mut current = vec![Action::Noop; branches];
    let mut best = current.clone();
    let mut best_value = policy_net_utility(model, mset, &current)?;
    'outer: loop {
        let mut pos = branches;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < actions.len() {
                current[pos] = actions[digits[pos]];
                break;
            }
            digits[pos] = 0;
            current[pos] = actions[0];
        }
        let value = policy_net_utility(model, mset, &current)?;
        if value > best_value + tolerance {
            best_value = value;
            best.copy_from_slice(&current);
        }
    }

    let branches_out = branch_decisions(model, mset, &best)?;
    Ok(Policy {
        measurements: mset.len(),
        actions: best,
        branches: branches_out,
        value: best_value,
    })
}

fn branch_decisions(model: &Model, mset: &[BoolFn], policy: &[Action]) -> Result<Vec<BranchDecision>> {
    let u = model.utility();
    let y = model.outcome();
    let mut mass = vec![0.0; policy.len()];
    let mut gain = vec![0.0; policy.len()];
    for a in Assignment::all(model.states()) {
        let p = model.dist().prob(a.index());
        let v = joint_value(mset, a)?;
        mass[v] += p;
        gain[v] += p * (u.of(apply_do(y, policy[v], a)?) - u.of(y.eval(a)?));
    }
    Ok(policy
        .iter()
        .enumerate()
        .map(|(v, &action)| BranchDecision {
            joint_value: v,
            probability: mass[v],
            action,
            conditional_gain: if mass[v] > 0.0 { gain[v] / mass[v] } else { 0.0 },
            cost: model.costs().cost(action),
        })
        .collect())
}
