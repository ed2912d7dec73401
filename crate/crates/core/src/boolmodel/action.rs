use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::Assignment;
use crate::error::{Error, Result};

/// A planner action: do nothing, or the do-operation `[X_i <- x]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Noop,
    Set { state: usize, value: bool },
}

impl Action {
    pub fn set(state: usize, value: bool) -> Self {
        Action::Set { state, value }
    }

    /// Every action on `s` states in tie-break order: no-op, then by state
    /// index, with the value 1 before 0.
    pub fn all(states: usize) -> Vec<Action> {
        std::iter::once(Action::Noop)
            .chain((1..=states).flat_map(|i| [Action::set(i, true), Action::set(i, false)]))
            .collect()
    }

    /// The `2s` state-setting actions in tie-break order.
    pub fn do_operations(states: usize) -> Vec<Action> {
        Action::all(states).into_iter().skip(1).collect()
    }

    pub fn is_noop(self) -> bool {
        matches!(self, Action::Noop)
    }

    pub fn validate(self, states: usize) -> Result<()> {
        match self {
            Action::Set { state, .. } if state == 0 || state > states => Err(Error::param(
                format!("action targets X{state} but there are {states} states"),
            )),
            _ => Ok(()),
        }
    }

    /// Assignment after the do-operation.
    #[inline]
    pub fn apply(self, a: Assignment) -> Assignment {
        match self {
            Action::Noop => a,
            Action::Set { state, value } => a.with_state(state, value),
        }
    }

    fn tie_key(self) -> (u8, usize, u8) {
        match self {
            Action::Noop => (0, 0, 0),
            Action::Set { state, value } => (1, state, u8::from(!value)),
        }
    }
}

impl Ord for Action {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tie_key().cmp(&other.tie_key())
    }
}

impl PartialOrd for Action {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Noop => write!(f, "noop"),
            Action::Set { state, value } => write!(f, "set X{state}<-{}", u8::from(*value)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CostMode {
    /// Every state-setting action costs the same.
    Uniform(f64),
    /// Listed actions carry their own price; unlisted ones are free.
    PerAction(BTreeMap<Action, f64>),
}

/// Prices each action. The no-op is always free and every cost lies in `[0, cap]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    mode: CostMode,
    cap: f64,
}

fn check_cost(c: f64) -> Result<()> {
    if !c.is_finite() || c < 0.0 {
        return Err(Error::param(format!("action cost {c} must be finite and >= 0")));
    }
    Ok(())
}

impl CostModel {
    pub fn uniform(c: f64) -> Result<Self> {
        check_cost(c)?;
        Ok(CostModel {
            mode: CostMode::Uniform(c),
            cap: if c > 0.0 { c } else { 1.0 },
        })
    }

    pub fn per_action(costs: BTreeMap<Action, f64>) -> Result<Self> {
        for (a, &c) in &costs {
            check_cost(c)?;
            if a.is_noop() && c != 0.0 {
                return Err(Error::param("the no-op action must be free"));
            }
        }
        let max = costs.values().copied().fold(0.0, f64::max);
        Ok(CostModel {
            mode: CostMode::PerAction(costs),
            cap: if max > 0.0 { max } else { 1.0 },
        })
    }

    /// Replaces the cap; every cost must fit under it.
    pub fn with_cap(mut self, cap: f64) -> Result<Self> {
        if !cap.is_finite() || cap <= 0.0 {
            return Err(Error::param(format!("cost cap {cap} must be positive")));
        }
        let max = match &self.mode {
            CostMode::Uniform(c) => *c,
            CostMode::PerAction(m) => m.values().copied().fold(0.0, f64::max),
        };
        if max > cap {
            return Err(Error::param(format!("cost {max} exceeds cap {cap}")));
        }
        self.cap = cap;
        Ok(self)
    }

    pub fn mode(&self) -> &CostMode {
        &self.mode
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// The common cost when the model is uniform.
    pub fn uniform_cost(&self) -> Option<f64> {
        match self.mode {
            CostMode::Uniform(c) => Some(c),
            CostMode::PerAction(_) => None,
        }
    }

    #[inline]
    pub fn cost(&self, action: Action) -> f64 {
        match (&self.mode, action) {
            (_, Action::Noop) => 0.0,
            (CostMode::Uniform(c), _) => *c,
            (CostMode::PerAction(m), a) => m.get(&a).copied().unwrap_or(0.0),
        }
    }

    /// Cheapest state-setting action on `s` states.
    pub fn min_cost(&self, states: usize) -> f64 {
        Action::do_operations(states)
            .into_iter()
            .map(|a| self.cost(a))
            .fold(f64::INFINITY, f64::min)
    }

    /// All costs, and the cap, multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(Error::param("scale factor must be positive"));
        }
        let mode = match &self.mode {
            CostMode::Uniform(c) => CostMode::Uniform(c * factor),
            CostMode::PerAction(m) => {
                CostMode::PerAction(m.iter().map(|(a, c)| (*a, c * factor)).collect())
            }
        };
        Ok(CostModel {
            mode,
            cap: self.cap * factor,
        })
    }

    pub(crate) fn validate(&self, states: usize) -> Result<()> {
        if let CostMode::PerAction(m) = &self.mode {
            for a in m.keys() {
                a.validate(states)?;
            }
        }
        Ok(())
    }
}

/// Planner utility of the outcome: `u(0) = u0`, `u(1) = u1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Utility {
    u0: f64,
    u1: f64,
}

impl Utility {
    pub fn new(u0: f64, u1: f64) -> Result<Self> {
        if !u0.is_finite() || !u1.is_finite() || u1 <= u0 {
            return Err(Error::param(format!(
                "utility needs finite u1 > u0, got u0={u0}, u1={u1}"
            )));
        }
        Ok(Utility { u0, u1 })
    }

    /// `u(y) = y`.
    pub fn identity() -> Self {
        Utility { u0: 0.0, u1: 1.0 }
    }

    pub fn u0(self) -> f64 {
        self.u0
    }

    pub fn u1(self) -> f64 {
        self.u1
    }

    #[inline]
    pub fn of(self, y: bool) -> f64 {
        if y {
            self.u1
        } else {
            self.u0
        }
    }

    /// `u1 - u0`.
    pub fn span(self) -> f64 {
        self.u1 - self.u0
    }

    pub fn scaled(self, factor: f64) -> Result<Self> {
        Utility::new(self.u0 * factor, self.u1 * factor)
    }
}

impl Default for Utility {
    fn default() -> Self {
        Utility::identity()
    }
}
