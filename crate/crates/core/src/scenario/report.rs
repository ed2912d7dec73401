use std::fmt::Write as _;

use crate::boolmodel::{Action, Model};
use crate::error::Result;
use crate::search::{rank_measurements, reversal_from_ranking, RankedEntry, ReversalReport};
use crate::theory::find_sufficient_action;
use crate::value::action_value;

/// Everything `vact analyze` prints.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    /// Declared measurements sorted by name.
    pub entries: Vec<RankedEntry>,
    pub baseline_act: f64,
    pub sufficient_action: Option<Action>,
    pub fully_improvable: bool,
    pub reversal: ReversalReport,
}

pub fn analyze(model: &Model) -> Result<Analysis> {
    let mut entries = rank_measurements(model, model.measurements())?;
    let reversal = reversal_from_ranking(&entries);
    entries.sort_by(|a, b| a.label.as_bytes().cmp(b.label.as_bytes()));
    let sufficiency = find_sufficient_action(model);
    Ok(Analysis {
        entries,
        baseline_act: action_value(model, &[])?,
        sufficient_action: sufficiency.sufficient_action,
        fully_improvable: sufficiency.fully_improvable,
        reversal,
    })
}

pub fn emit_report(analysis: &Analysis) -> String {
    let mut out = String::new();
    for e in &analysis.entries {
        let _ = writeln!(
            out,
            "measurement {} predict={:.9} act={:.9}",
            e.label,
            e.predict_value + 0.0,
            e.act_value + 0.0
        );
    }
    let _ = writeln!(out, "baseline act={:.9}", analysis.baseline_act + 0.0);
    match analysis.sufficient_action {
        Some(a) => {
            let _ = writeln!(out, "sufficient_action {a}");
        }
        None => out.push_str("sufficient_action none\n"),
    }
    let _ = writeln!(out, "fully_improvable {}", analysis.fully_improvable);
    for (a, b) in &analysis.reversal.reversed_pairs {
        let _ = writeln!(out, "reversed_pair {a} {b}");
    }
    if let Some(top) = &analysis.reversal.top_predict {
        let _ = writeln!(
            out,
            "top_predict {top} act_optimal={}",
            analysis.reversal.top_predict_act_optimal
        );
    }
    out
}
