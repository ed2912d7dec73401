//! The two-state model: `X_1, X_2` i.i.d. with failure rate `p`
//! (`Pr(X_i = 0) = p`), outcome `Y = X_1 & X_2`, uniform action cost `c`,
//! and `u(y) = y`.

use std::fmt;
use std::str::FromStr;

use crate::boolmodel::{BoolFn, CostModel, JointDist, Model, Utility};
use crate::error::{Error, Result};

/// The measurements of the two-state model with known action values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwoStateMeasurement {
    /// `M_1 = X_1`.
    M1,
    /// `M_Y = X_1 & X_2`, the outcome itself.
    MY,
    /// `M_piv = X_1 & !X_2`.
    Mpiv,
    /// No measurement.
    Baseline,
}

impl TwoStateMeasurement {
    pub const ALL: [TwoStateMeasurement; 4] = [
        TwoStateMeasurement::M1,
        TwoStateMeasurement::MY,
        TwoStateMeasurement::Mpiv,
        TwoStateMeasurement::Baseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TwoStateMeasurement::M1 => "M1",
            TwoStateMeasurement::MY => "MY",
            TwoStateMeasurement::Mpiv => "Mpiv",
            TwoStateMeasurement::Baseline => "baseline",
        }
    }

    /// Truth table, or `None` for the baseline.
    pub fn function(self) -> Option<BoolFn> {
        let x1 = BoolFn::var(2, 1).expect("two states");
        let x2 = BoolFn::var(2, 2).expect("two states");
        let f = match self {
            TwoStateMeasurement::M1 => x1,
            TwoStateMeasurement::MY => x1.and(&x2).expect("same arity"),
            TwoStateMeasurement::Mpiv => x1.and(&x2.not()).expect("same arity"),
            TwoStateMeasurement::Baseline => return None,
        };
        Some(f.with_name(self.name()))
    }
}

impl fmt::Display for TwoStateMeasurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TwoStateMeasurement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TwoStateMeasurement::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param(format!("unknown two-state measurement {s}")))
    }
}

fn check_params(p: f64, c: f64) -> Result<()> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::param(format!("failure rate {p} outside (0, 0.5]")));
    }
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::param(format!("cost {c} outside [0, 1]")));
    }
    Ok(())
}

/// Closed-form action value of a two-state measurement, with `q = 1 - p`:
///
/// ```text
/// M1:       max(0, pq - pc) + max(0, pq - qc)
/// MY:       max(0, pq - (1 - q^2) c)
/// Mpiv:     max(0, pq (1 - c)) + max(0, pq - (1 - pq) c)
/// baseline: max(0, pq - c)
/// ```
pub fn closed_form_two_state(which: TwoStateMeasurement, p: f64, c: f64) -> Result<f64> {
    check_params(p, c)?;
    let q = 1.0 - p;
    let pq = p * q;
    Ok(match which {
        TwoStateMeasurement::M1 => (pq - p * c).max(0.0) + (pq - q * c).max(0.0),
        TwoStateMeasurement::MY => (pq - (1.0 - q * q) * c).max(0.0),
        TwoStateMeasurement::Mpiv => (pq * (1.0 - c)).max(0.0) + (pq - (1.0 - pq) * c).max(0.0),
        TwoStateMeasurement::Baseline => (pq - c).max(0.0),
    })
}

/// Cost at which `M_Y` stops being worth acting on: `pq / (1 - q^2)`.
pub fn outcome_cutoff_cost(p: f64) -> f64 {
    let q = 1.0 - p;
    p * q / (1.0 - q * q)
}

/// Largest cost at which `M_1` and `M_piv` have the same action value:
/// `pq / (1 - pq)`.
pub fn pivotal_tie_cost(p: f64) -> f64 {
    let pq = p * (1.0 - p);
    pq / (1.0 - pq)
}

/// The two-state model with `M1`, `MY` and `Mpiv` declared. `c` may be any
/// nonnegative cost; only the closed forms restrict it to `[0, 1]`.
pub fn two_state_model(p: f64, c: f64) -> Result<Model> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::param(format!("failure rate {p} outside (0, 1)")));
    }
    let dist = JointDist::iid(2, 1.0 - p)?;
    let outcome = TwoStateMeasurement::MY
        .function()
        .expect("outcome")
        .with_name("Y");
    let measurements = [
        TwoStateMeasurement::M1,
        TwoStateMeasurement::MY,
        TwoStateMeasurement::Mpiv,
    ]
    .iter()
    .filter_map(|m| m.function())
    .collect();
    Model::new(
        dist,
        outcome,
        measurements,
        CostModel::uniform(c)?,
        Utility::identity(),
        1,
    )
}
