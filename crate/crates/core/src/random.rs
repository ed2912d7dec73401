//! Seeded random models for property checks.
//!
//! Instance `k` of seed `s` draws from its own ChaCha stream, so a corpus can
//! be split across workers in any way and still produce the same models.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolmodel::{Action, BoolFn, JointDist, Model};
use crate::error::Result;
use crate::search::enumerate_measurements;

/// Independent generator for instance `index` of `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random distribution; with `zero_cells` about a quarter of the cells are
/// given probability zero.
pub fn random_dist<R: Rng>(rng: &mut R, states: usize, zero_cells: bool) -> Result<JointDist> {
    let n = 1usize << states;
    let mut weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    if zero_cells {
        for w in weights.iter_mut() {
            if rng.gen_bool(0.25) {
                *w = 0.0;
            }
        }
        if weights.iter().all(|&w| w == 0.0) {
            weights[rng.gen_range(0..n)] = 1.0;
        }
    }
    let total: f64 = weights.iter().sum();
    JointDist::new(states, weights.into_iter().map(|w| w / total).collect())
}

/// Uniformly random truth table.
pub fn random_function<R: Rng>(rng: &mut R, states: usize) -> Result<BoolFn> {
    BoolFn::from_fn(states, |_| rng.gen_bool(0.5))
}

/// Random outcome that is 1 on the half-cube `{X_i = x}` for a random
/// do-operation, so that operation is a sufficient action.
pub fn random_outcome_with_sufficient_action<R: Rng>(rng: &mut R, states: usize) -> Result<BoolFn> {
    let ops = Action::do_operations(states);
    let act = *ops.choose(rng).expect("at least one state");
    let Action::Set { state, value } = act else {
        unreachable!("do-operations only")
    };
    BoolFn::from_fn(states, |a| a.bit(state) == value || rng.gen_bool(0.5))
}

/// One of the interior costs used by randomized checks.
pub fn random_interior_cost<R: Rng>(rng: &mut R) -> f64 {
    const COSTS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
    *COSTS.choose(rng).expect("nonempty")
}

/// A random model on `states` states with uniform cost, `u(y) = y`, and
/// outcome drawn either uniformly or with a planted sufficient action.
pub fn random_model<R: Rng>(rng: &mut R, states: usize, zero_cells: bool) -> Result<Model> {
    let dist = random_dist(rng, states, zero_cells)?;
    let outcome = if rng.gen_bool(0.5) {
        random_function(rng, states)?
    } else {
        random_outcome_with_sufficient_action(rng, states)?
    };
    let c = random_interior_cost(rng);
    Model::simple(dist, outcome.with_name("Y"), c)
}

/// `count` functions drawn from all functions of `states` states (with
/// replacement). Needs `states <= 4`.
pub fn random_measurements<R: Rng>(rng: &mut R, states: usize, count: usize) -> Result<Vec<BoolFn>> {
    if states <= crate::search::MAX_ENUMERATION_STATES {
        let all = enumerate_measurements(states)?;
        Ok((0..count)
            .map(|_| all.choose(rng).expect("nonempty").clone())
            .collect())
    } else {
        (0..count).map(|_| random_function(rng, states)).collect()
    }
}
