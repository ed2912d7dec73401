use std::collections::HashSet;

use super::{BoolFn, CostModel, JointDist, Utility};
use crate::error::{Error, Result};

/// A complete planner model: state distribution, outcome, candidate
/// measurements, action costs, utility and measurement budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    dist: JointDist,
    outcome: BoolFn,
    measurements: Vec<BoolFn>,
    costs: CostModel,
    utility: Utility,
    budget: usize,
}

impl Model {
    /// Measurements must carry unique names.
    pub fn new(
        dist: JointDist,
        outcome: BoolFn,
        measurements: Vec<BoolFn>,
        costs: CostModel,
        utility: Utility,
        budget: usize,
    ) -> Result<Self> {
        let s = dist.states();
        outcome.check_same(s)?;
        let mut names = HashSet::new();
        for m in &measurements {
            m.check_same(s)?;
            let name = m
                .name()
                .ok_or_else(|| Error::param("declared measurements must be named"))?;
            if !names.insert(name.to_string()) {
                return Err(Error::param(format!("duplicate measurement name {name}")));
            }
        }
        costs.validate(s)?;
        if budget == 0 {
            return Err(Error::param("budget must be at least 1"));
        }
        Ok(Model {
            dist,
            outcome,
            measurements,
            costs,
            utility,
            budget,
        })
    }

    /// Model with no declared measurements, `u(y) = y`, uniform cost and budget 1.
    pub fn simple(dist: JointDist, outcome: BoolFn, cost: f64) -> Result<Self> {
        Model::new(
            dist,
            outcome,
            Vec::new(),
            CostModel::uniform(cost)?,
            Utility::identity(),
            1,
        )
    }

    pub fn states(&self) -> usize {
        self.dist.states()
    }

    pub fn dist(&self) -> &JointDist {
        &self.dist
    }

    pub fn outcome(&self) -> &BoolFn {
        &self.outcome
    }

    pub fn measurements(&self) -> &[BoolFn] {
        &self.measurements
    }

    pub fn measurement(&self, name: &str) -> Option<&BoolFn> {
        self.measurements.iter().find(|m| m.name() == Some(name))
    }

    pub fn costs(&self) -> &CostModel {
        &self.costs
    }

    pub fn utility(&self) -> Utility {
        self.utility
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn with_costs(&self, costs: CostModel) -> Result<Model> {
        costs.validate(self.states())?;
        Ok(Model {
            costs,
            ..self.clone()
        })
    }

    pub fn with_uniform_cost(&self, c: f64) -> Result<Model> {
        self.with_costs(CostModel::uniform(c)?)
    }

    pub fn with_utility(&self, utility: Utility) -> Model {
        Model {
            utility,
            ..self.clone()
        }
    }

    pub fn with_budget(&self, budget: usize) -> Result<Model> {
        if budget == 0 {
            return Err(Error::param("budget must be at least 1"));
        }
        Ok(Model {
            budget,
            ..self.clone()
        })
    }

    pub fn with_outcome(&self, outcome: BoolFn) -> Result<Model> {
        outcome.check_same(self.states())?;
        Ok(Model {
            outcome,
            ..self.clone()
        })
    }

    pub fn with_measurements(&self, measurements: Vec<BoolFn>) -> Result<Model> {
        Model::new(
            self.dist.clone(),
            self.outcome.clone(),
            measurements,
            self.costs.clone(),
            self.utility,
            self.budget,
        )
    }

    /// Relabels states by `perm` throughout the model.
    pub fn permuted(&self, perm: &[usize]) -> Result<Model> {
        let costs = match self.costs.mode() {
            super::CostMode::Uniform(_) => self.costs.clone(),
            super::CostMode::PerAction(m) => CostModel::per_action(
                m.iter()
                    .map(|(a, c)| {
                        let a = match *a {
                            super::Action::Set { state, value } => {
                                super::Action::set(perm[state - 1] + 1, value)
                            }
                            noop => noop,
                        };
                        (a, *c)
                    })
                    .collect(),
            )?
            .with_cap(self.costs.cap())?,
        };
        Ok(Model {
            dist: self.dist.permuted(perm)?,
            outcome: self.outcome.permuted(perm)?,
            measurements: self
                .measurements
                .iter()
                .map(|m| m.permuted(perm))
                .collect::<Result<_>>()?,
            costs,
            utility: self.utility,
            budget: self.budget,
        })
    }

    /// Non-fatal modelling issues worth surfacing to a user.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.dist.support().all(|a| self.outcome.get(a.index())) {
            out.push("outcome is identically 1 on the support; no action can improve it".into());
        }
        if self.budget > self.measurements.len() {
            out.push(format!(
                "budget {} exceeds the {} declared measurements",
                self.budget,
                self.measurements.len()
            ));
        }
        out
    }
}
