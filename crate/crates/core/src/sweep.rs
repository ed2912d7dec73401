//! Action value of each declared measurement across a grid of uniform costs.

use rayon::prelude::*;

use crate::boolmodel::Model;
use crate::error::{Error, Result};
use crate::value::action_value;

/// Name of the no-measurement row in sweep output.
pub const BASELINE: &str = "baseline";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub cost: f64,
    pub measurement: String,
    pub action_value: f64,
}

/// `steps` evenly spaced costs from `min` to `max`, both inclusive.
pub fn cost_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() || min < 0.0 || max < min {
        return Err(Error::param(format!(
            "cost range [{min}, {max}] must satisfy 0 <= min <= max"
        )));
    }
    match steps {
        0 => Err(Error::param("a sweep needs at least one step")),
        1 => Ok(vec![min]),
        _ => Ok((0..steps)
            .map(|k| {
                if k == steps - 1 {
                    max
                } else {
                    min + (max - min) * (k as f64) / ((steps - 1) as f64)
                }
            })
            .collect()),
    }
}

/// One row per (cost, declared measurement) plus a baseline row per cost.
/// Every state-setting action is priced at the grid cost.
pub fn sweep(model: &Model, costs: &[f64]) -> Result<Vec<SweepRow>> {
    let per_cost: Vec<Result<Vec<SweepRow>>> = costs
        .par_iter()
        .map(|&c| {
            let m = model.with_uniform_cost(c)?;
            let mut rows = Vec::with_capacity(m.measurements().len() + 1);
            rows.push(SweepRow {
                cost: c,
                measurement: BASELINE.to_string(),
                action_value: action_value(&m, &[])?,
            });
            for f in m.measurements() {
                rows.push(SweepRow {
                    cost: c,
                    measurement: f.label(),
                    action_value: action_value(&m, std::slice::from_ref(f))?,
                });
            }
            Ok(rows)
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_cost {
        out.extend(rows?);
    }
    Ok(out)
}
