//! Scenario files, CSV sweeps and text reports.
//!
//! A scenario is line-oriented, one declaration per line, `#` starting a
//! comment:
//!
//! ```text
//! states 2
//! prior product 0.75 0.75        # Pr(X_i = 1); or: prior table <2^s values>
//! outcome Y = X1 & X2
//! measure Mpiv = X1 & !X2        # repeatable
//! cost set 0.3                   # or: cost action <i> <0|1> <c>, repeatable
//! utility 0 1                    # optional, default 0 1
//! budget 1                       # optional, default 1
//! sweep 0 1 101                  # optional default grid for `vact sweep`
//! ```

mod emit;
mod expr;
mod parse;
mod report;

pub use emit::{emit_scenario, emit_sweep_csv};
pub use expr::{compile_expr, expr_for_table, parse_expr, BoolExpr};
pub use parse::{parse_scenario, ScenarioDoc, SweepDefaults};
pub use report::{analyze, emit_report, Analysis};
