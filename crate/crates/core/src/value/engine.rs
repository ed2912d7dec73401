use crate::boolmodel::{joint_keys, ordered_sum, Action, Assignment, BoolFn, Model};
use crate::error::{Error, Result};

/// Largest measurement-set size with a dense joint-value table.
pub const MAX_JOINT_BITS: usize = 16;

/// Relative tolerance under which two net gains count as tied.
pub(crate) const TIE_TOLERANCE: f64 = 1e-12;

/// Optimal 0-1 loss predictor of the outcome from a measurement set.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictorTable {
    /// Number of measurements observed.
    pub measurements: usize,
    /// Predicted bit for each joint value.
    pub predict: Vec<bool>,
    /// Prediction value: minus the expected 0-1 loss.
    pub value: f64,
}

/// Decision taken on one observed joint value.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchDecision {
    pub joint_value: usize,
    pub probability: f64,
    pub action: Action,
    /// `E[u(Y^a) | v] - E[u(Y) | v]`; zero on probability-zero branches.
    pub conditional_gain: f64,
    pub cost: f64,
}

impl BranchDecision {
    /// Net gain conditional on this branch.
    pub fn conditional_net(&self) -> f64 {
        self.conditional_gain - self.cost
    }
}

/// Optimal action policy for a measurement set and its action value.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    pub measurements: usize,
    pub actions: Vec<Action>,
    pub branches: Vec<BranchDecision>,
    pub value: f64,
}

impl Policy {
    pub fn action_for(&self, joint_value: usize) -> Action {
        self.actions[joint_value]
    }
}

fn check_joint_bits(bits: usize) -> Result<()> {
    if bits > MAX_JOINT_BITS {
        return Err(Error::Capacity(format!(
            "measurement sets are limited to {MAX_JOINT_BITS} members, got {bits}"
        )));
    }
    Ok(())
}

/// Per-model tables shared by every policy evaluation: utilities before and
/// after each action at each assignment, and per-action costs.
pub struct PolicySolver<'m> {
    model: &'m Model,
    actions: Vec<Action>,
    costs: Vec<f64>,
    u_base: Vec<f64>,
    u_after: Vec<Vec<f64>>,
    tolerance: f64,
}

/// Reusable buffers for [`PolicySolver::solve`].
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    mass: Vec<f64>,
    gain: Vec<f64>,
    choice: Vec<usize>,
    y_mass: Vec<[f64; 2]>,
}

impl<'m> PolicySolver<'m> {
    pub fn new(model: &'m Model) -> Self {
        let s = model.states();
        let u = model.utility();
        let outcome = model.outcome();
        let actions = Action::all(s);
        let costs = actions.iter().map(|&a| model.costs().cost(a)).collect();
        let u_base = (0..1usize << s).map(|x| u.of(outcome.get(x))).collect();
        let u_after = actions
            .iter()
            .map(|&a| {
                Assignment::all(s)
                    .map(|x| u.of(outcome.get(a.apply(x).index())))
                    .collect()
            })
            .collect();
        PolicySolver {
            model,
            actions,
            costs,
            u_base,
            u_after,
            tolerance: TIE_TOLERANCE * u.span(),
        }
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    /// Picks the best action for every joint value and returns the action
    /// value. `keys[x]` is the joint value observed at assignment `x`.
    ///
    /// Branch choices are left in `scratch` for [`Self::policy_from`].
    pub fn solve(&self, keys: &[usize], branches: usize, scratch: &mut Scratch) -> f64 {
        let probs = self.model.dist().probs();
        let n_act = self.actions.len();
        scratch.mass.clear();
        scratch.mass.resize(branches, 0.0);
        scratch.gain.clear();
        scratch.gain.resize(branches * n_act, 0.0);
        for (x, &v) in keys.iter().enumerate() {
            let p = probs[x];
            scratch.mass[v] += p;
            let row = &mut scratch.gain[v * n_act..(v + 1) * n_act];
            for (a, g) in row.iter_mut().enumerate().skip(1) {
                *g += p * (self.u_after[a][x] - self.u_base[x]);
            }
        }
        scratch.choice.clear();
        scratch.choice.resize(branches, 0);
        for v in 0..branches {
            let mass = scratch.mass[v];
            if mass <= 0.0 {
                continue;
            }
            let row = &scratch.gain[v * n_act..(v + 1) * n_act];
            let mut best = 0;
            let mut best_net = 0.0;
            for (a, &gain) in row.iter().enumerate().skip(1) {
                let net = gain - mass * self.costs[a];
                if net > best_net + self.tolerance * mass {
                    best = a;
                    best_net = net;
                }
            }
            scratch.choice[v] = best;
        }
        self.evaluate(keys, &scratch.choice)
    }

    /// `E[u(Y^{a(M)})] - E[u(Y)] - E[c(a(M))]`, each expectation summed in
    /// assignment order. `choice[v]` indexes [`Self::actions`].
    fn evaluate(&self, keys: &[usize], choice: &[usize]) -> f64 {
        let probs = self.model.dist().probs();
        let mut e_act = 0.0;
        let mut e_base = 0.0;
        let mut e_cost = 0.0;
        for (x, &v) in keys.iter().enumerate() {
            let p = probs[x];
            let a = choice[v];
            e_act += p * self.u_after[a][x];
            e_base += p * self.u_base[x];
            e_cost += p * self.costs[a];
        }
        e_act - e_base - e_cost
    }

    /// Materializes the policy left in `scratch` by the last [`Self::solve`].
    pub fn policy_from(&self, scratch: &Scratch, measurements: usize, value: f64) -> Policy {
        let n_act = self.actions.len();
        let branches = scratch.choice.len();
        let mut actions = Vec::with_capacity(branches);
        let mut decisions = Vec::with_capacity(branches);
        for v in 0..branches {
            let a = scratch.choice[v];
            let mass = scratch.mass[v];
            let action = self.actions[a];
            actions.push(action);
            decisions.push(BranchDecision {
                joint_value: v,
                probability: mass,
                action,
                conditional_gain: if mass > 0.0 && a > 0 {
                    scratch.gain[v * n_act + a] / mass
                } else {
                    0.0
                },
                cost: self.costs[a],
            });
        }
        Policy {
            measurements,
            actions,
            branches: decisions,
            value,
        }
    }

    pub fn optimal_policy(&self, mset: &[BoolFn]) -> Result<Policy> {
        check_joint_bits(mset.len())?;
        let keys = joint_keys(mset, self.model.states())?;
        let mut scratch = Scratch::default();
        let value = self.solve(&keys, 1 << mset.len(), &mut scratch);
        Ok(self.policy_from(&scratch, mset.len(), value))
    }

    pub fn action_value(&self, mset: &[BoolFn]) -> Result<f64> {
        check_joint_bits(mset.len())?;
        let keys = joint_keys(mset, self.model.states())?;
        Ok(self.solve(&keys, 1 << mset.len(), &mut Scratch::default()))
    }

    /// Prediction value for the joint values in `keys`; the predicted bit per
    /// branch is left in `scratch`.
    pub fn predict(&self, keys: &[usize], branches: usize, scratch: &mut Scratch) -> f64 {
        let probs = self.model.dist().probs();
        let outcome = self.model.outcome();
        scratch.y_mass.clear();
        scratch.y_mass.resize(branches, [0.0; 2]);
        for (x, &v) in keys.iter().enumerate() {
            scratch.y_mass[v][usize::from(outcome.get(x))] += probs[x];
        }
        scratch.choice.clear();
        scratch.choice.extend(
            scratch
                .y_mass
                .iter()
                .map(|[p0, p1]| usize::from(*p1 >= *p0 - TIE_TOLERANCE)),
        );
        let loss = ordered_sum(keys.iter().enumerate().map(|(x, &v)| {
            if (scratch.choice[v] == 1) != outcome.get(x) {
                probs[x]
            } else {
                0.0
            }
        }));
        0.0 - loss
    }
}

/// The prediction-optimal table for `mset`.
pub fn optimal_predictor(model: &Model, mset: &[BoolFn]) -> Result<PredictorTable> {
    check_joint_bits(mset.len())?;
    let keys = joint_keys(mset, model.states())?;
    let solver = PolicySolver::new(model);
    let mut scratch = Scratch::default();
    let value = solver.predict(&keys, 1 << mset.len(), &mut scratch);
    Ok(PredictorTable {
        measurements: mset.len(),
        predict: scratch.choice.iter().map(|&c| c == 1).collect(),
        value,
    })
}

pub fn prediction_value(model: &Model, mset: &[BoolFn]) -> Result<f64> {
    Ok(optimal_predictor(model, mset)?.value)
}

/// Best measurement-conditioned action policy. Ties go to the no-op, then
/// the lower state index, then the value 1.
pub fn optimal_policy(model: &Model, mset: &[BoolFn]) -> Result<Policy> {
    PolicySolver::new(model).optimal_policy(mset)
}

pub fn action_value(model: &Model, mset: &[BoolFn]) -> Result<f64> {
    PolicySolver::new(model).action_value(mset)
}

/// `Pr(Y = 0) * max(0, (u1 - u0) - c_min)`: no measurement set can beat
/// fixing every bad outcome at the cheapest price.
pub fn action_value_upper_bound(model: &Model) -> Result<f64> {
    let s = model.states();
    let pr_y0 = model.dist().event_probability(&model.outcome().not())?;
    let c = model.costs().min_cost(s);
    Ok(pr_y0 * (model.utility().span() - c).max(0.0))
}
