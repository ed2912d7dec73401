use std::fmt::Write as _;

use super::expr::expr_for_table;
use super::parse::ScenarioDoc;
use crate::boolmodel::{Action, CostMode};
use crate::sweep::SweepRow;

/// Canonical text for a scenario: the prior as a full table and every
/// function as its minterm disjunction. Reparsing gives an equal model.
pub fn emit_scenario(doc: &ScenarioDoc) -> String {
    let m = &doc.model;
    let mut out = String::new();
    let _ = writeln!(out, "states {}", m.states());
    let probs: Vec<String> = m.dist().probs().iter().map(|p| format!("{p}")).collect();
    let _ = writeln!(out, "prior table {}", probs.join(" "));
    let _ = writeln!(out, "outcome {} = {}", doc.outcome_name, expr_for_table(m.outcome()));
    for f in m.measurements() {
        let _ = writeln!(out, "measure {} = {}", f.label(), expr_for_table(f));
    }
    match m.costs().mode() {
        CostMode::Uniform(c) => {
            let _ = writeln!(out, "cost set {c}");
        }
        CostMode::PerAction(costs) => {
            for (a, c) in costs {
                if let Action::Set { state, value } = a {
                    let _ = writeln!(out, "cost action {state} {} {c}", u8::from(*value));
                }
            }
            if costs.keys().all(|a| a.is_noop()) {
                // no listed do-operation: keep the mode explicit
                let _ = writeln!(out, "cost action 1 1 0");
            }
        }
    }
    let u = m.utility();
    let _ = writeln!(out, "utility {} {}", u.u0(), u.u1());
    let _ = writeln!(out, "budget {}", m.budget());
    if let Some(s) = doc.sweep {
        let _ = writeln!(out, "sweep {} {} {}", s.min, s.max, s.steps);
    }
    out
}

/// `cost,measurement,action_value` rows sorted by cost then name, with six
/// and nine decimals and LF line endings.
pub fn emit_sweep_csv(rows: &[SweepRow]) -> String {
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        a.cost
            .total_cmp(&b.cost)
            .then_with(|| a.measurement.as_bytes().cmp(b.measurement.as_bytes()))
    });
    let mut out = String::from("cost,measurement,action_value\n");
    for r in sorted {
        // adding 0.0 turns -0.0 into 0.0
        let _ = writeln!(
            out,
            "{:.6},{},{:.9}",
            r.cost + 0.0,
            r.measurement,
            r.action_value + 0.0
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_scenario;
    use crate::sweep::{sweep, BASELINE};

    const TWO_STATE: &str = "states 2\nprior product 0.75 0.75\noutcome Y = X1 & X2\nmeasure M1 = X1\nmeasure MY = X1 & X2\nmeasure Mpiv = X1 & !X2\ncost set 0.3\n";

    #[test]
    fn round_trip() {
        let doc = parse_scenario(TWO_STATE).unwrap();
        let text = emit_scenario(&doc);
        let again = parse_scenario(&text).unwrap();
        assert_eq!(again.model, doc.model);
        assert_eq!(again.names, doc.names);
        assert_eq!(emit_scenario(&again), text);
    }

    #[test]
    fn per_action_round_trip() {
        let doc = parse_scenario(
            "states 3\nprior table 0 0.1 0.1 0.2 0.1 0.2 0.2 0.1\noutcome Z = X1 ^ X2 ^ X3\ncost action 3 0 0.25\ncost action 1 1 0\nutility 0.5 2.5\nbudget 2\nsweep 0.1 0.9 5\n",
        )
        .unwrap();
        let again = parse_scenario(&emit_scenario(&doc)).unwrap();
        assert_eq!(again, ScenarioDoc { source: again.source.clone(), ..doc });
    }

    #[test]
    fn csv_rows() {
        let doc = parse_scenario(TWO_STATE).unwrap();
        let rows = sweep(&doc.model, &[0.3, 0.1]).unwrap();
        let csv = emit_sweep_csv(&rows);
        assert!(csv.starts_with("cost,measurement,action_value\n0.100000,M1,"));
        assert!(csv.contains("0.300000,Mpiv,0.131250000\n"));
        assert!(csv.contains("0.300000,MY,0.056250000\n"));
        assert!(csv.contains("0.100000,baseline,0.087500000\n"));
        assert!(!csv.contains('\r'));
        let lines: Vec<&str> = csv.lines().collect();
        // byte order puts upper-case names before "baseline"
        assert_eq!(lines[1..5].iter().map(|l| l.split(',').nth(1).unwrap()).collect::<Vec<_>>(), ["M1", "MY", "Mpiv", BASELINE]);
    }

    #[test]
    fn empty_csv() {
        assert_eq!(emit_sweep_csv(&[]), "cost,measurement,action_value\n");
    }

    #[test]
    fn negative_zero_is_printed_as_zero() {
        let rows = [SweepRow {
            cost: -0.0,
            measurement: "A".into(),
            action_value: -0.0,
        }];
        assert_eq!(emit_sweep_csv(&rows), "cost,measurement,action_value\n0.000000,A,0.000000000\n");
    }
}
