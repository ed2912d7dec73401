//! Exact prediction value and action value by enumeration.
//!
//! The engine decides each observed joint value independently, which is
//! optimal because the objective separates across branches. The oracle in
//! [`oracle`] checks that claim by enumerating whole policies.

pub mod closed_form;
mod engine;
pub mod oracle;

pub use closed_form::{closed_form_two_state, two_state_model, TwoStateMeasurement};
pub use engine::{
    action_value, action_value_upper_bound, optimal_policy, optimal_predictor, prediction_value,
    BranchDecision, Policy, PolicySolver, PredictorTable, Scratch, MAX_JOINT_BITS,
};
pub use oracle::{policy_bruteforce_oracle, policy_net_utility};
