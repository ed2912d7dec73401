//! Ranking measurements by prediction value and action value, and
//! exhaustive search for the best measurement set of a given size.
//!
//! Candidate evaluation runs on the current rayon pool. Every value is
//! computed by the same sequential arithmetic whichever worker evaluates
//! it, and reductions use a total order, so results are identical for any
//! number of workers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::boolmodel::{BoolFn, Model};
use crate::error::{Error, Result};
use crate::value::{PolicySolver, Scratch, MAX_JOINT_BITS};

/// Largest state count for enumerating every Boolean function.
pub const MAX_ENUMERATION_STATES: usize = 4;
/// Candidate limit for [`rank_measurements`].
pub const MAX_RANK_CANDIDATES: usize = 1_000_000;
/// Limit on the number of subsets [`best_measurement_set`] will score.
pub const MAX_SET_COMBINATIONS: u64 = 3_000_000;

/// Values closer than this (relative to the utility span) share a rank.
const RANK_RESOLUTION: f64 = 1e-12;

fn value_key(model: &Model, v: f64) -> i64 {
    (v / model.utility().span() / RANK_RESOLUTION).round() as i64
}

/// Every Boolean function of `s` states in ascending table order.
pub fn enumerate_measurements(states: usize) -> Result<Vec<BoolFn>> {
    if states == 0 || states > MAX_ENUMERATION_STATES {
        return Err(Error::Capacity(format!(
            "enumerating all functions needs 1..={MAX_ENUMERATION_STATES} states, got {states}"
        )));
    }
    let count = 1u64 << (1u32 << states);
    (0..count).map(|bits| BoolFn::from_u64(states, bits)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    Act,
    Predict,
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "act" => Ok(Criterion::Act),
            "predict" => Ok(Criterion::Predict),
            other => Err(Error::param(format!("unknown criterion {other}"))),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Act => "act",
            Criterion::Predict => "predict",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pool {
    /// The model's named measurements.
    Declared,
    /// Every Boolean function of the states.
    All,
}

impl FromStr for Pool {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "declared" => Ok(Pool::Declared),
            "all" => Ok(Pool::All),
            other => Err(Error::param(format!("unknown pool {other}"))),
        }
    }
}

impl fmt::Display for Pool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pool::Declared => "declared",
            Pool::All => "all",
        })
    }
}

/// One candidate with both values and its rank under each.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub label: String,
    pub measurement: BoolFn,
    pub predict_value: f64,
    pub act_value: f64,
    /// 1-based dense rank; tied values share a rank.
    pub rank_predict: usize,
    pub rank_act: usize,
}

fn dense_ranks(keys: &[i64], tables: &[&BoolFn]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| {
        keys[b]
            .cmp(&keys[a])
            .then_with(|| tables[a].cmp(tables[b]))
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0; keys.len()];
    let mut rank = 0;
    let mut last = None;
    for i in order {
        if last != Some(keys[i]) {
            rank += 1;
            last = Some(keys[i]);
        }
        ranks[i] = rank;
    }
    ranks
}

/// Single-measurement prediction and action values with rank columns.
/// Entries come back in candidate order.
pub fn rank_measurements(model: &Model, candidates: &[BoolFn]) -> Result<Vec<RankedEntry>> {
    if candidates.len() > MAX_RANK_CANDIDATES {
        return Err(Error::Capacity(format!(
            "{} candidates exceed the ranking limit of {MAX_RANK_CANDIDATES}",
            candidates.len()
        )));
    }
    let s = model.states();
    for c in candidates {
        c.check_same(s)?;
    }
    let solver = PolicySolver::new(model);
    let values: Vec<(f64, f64)> = candidates
        .par_iter()
        .map_init(Scratch::default, |scratch, f| {
            let keys: Vec<usize> = (0..1usize << s).map(|x| usize::from(f.get(x))).collect();
            let predict = solver.predict(&keys, 2, scratch);
            let act = solver.solve(&keys, 2, scratch);
            (predict, act)
        })
        .collect();
    let tables: Vec<&BoolFn> = candidates.iter().collect();
    let predict_keys: Vec<i64> = values.iter().map(|v| value_key(model, v.0)).collect();
    let act_keys: Vec<i64> = values.iter().map(|v| value_key(model, v.1)).collect();
    let rank_predict = dense_ranks(&predict_keys, &tables);
    let rank_act = dense_ranks(&act_keys, &tables);
    Ok(candidates
        .iter()
        .enumerate()
        .map(|(i, f)| RankedEntry {
            label: f.label(),
            measurement: f.clone(),
            predict_value: values[i].0,
            act_value: values[i].1,
            rank_predict: rank_predict[i],
            rank_act: rank_act[i],
        })
        .collect())
}

/// Candidate pairs ordered one way by prediction value and the other way by
/// action value.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversalReport {
    /// `(better by prediction, better by action)`.
    pub reversed_pairs: Vec<(String, String)>,
    /// Canonically first candidate with the best prediction value.
    pub top_predict: Option<String>,
    pub top_predict_act_optimal: bool,
}

pub fn reversal_from_ranking(entries: &[RankedEntry]) -> ReversalReport {
    let mut by_predict: Vec<&RankedEntry> = entries.iter().collect();
    by_predict.sort_by(|a, b| {
        a.rank_predict
            .cmp(&b.rank_predict)
            .then_with(|| a.measurement.cmp(&b.measurement))
    });
    let mut reversed_pairs = Vec::new();
    if entries.len() >= 2 {
        for (i, a) in by_predict.iter().enumerate() {
            for b in &by_predict[i + 1..] {
                if a.rank_predict < b.rank_predict && a.rank_act > b.rank_act {
                    reversed_pairs.push((a.label.clone(), b.label.clone()));
                }
            }
        }
    }
    let top = if entries.len() >= 2 {
        by_predict.first().copied()
    } else {
        None
    };
    ReversalReport {
        reversed_pairs,
        top_predict: top.map(|e| e.label.clone()),
        top_predict_act_optimal: top.is_some_and(|e| e.rank_act == 1),
    }
}

pub fn reversal_report(model: &Model, candidates: &[BoolFn]) -> Result<ReversalReport> {
    Ok(reversal_from_ranking(&rank_measurements(model, candidates)?))
}

/// Winner of an exhaustive set search.
#[derive(Debug, Clone, PartialEq)]
pub struct BestSet {
    /// Members in canonical (ascending table) order.
    pub members: Vec<BoolFn>,
    pub value: f64,
    /// Number of subsets scored.
    pub evaluated: u64,
}

fn choose(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Best size-`budget` subset of the model's declared measurements, or of
/// every Boolean function of its states.
pub fn best_measurement_set(
    model: &Model,
    budget: usize,
    criterion: Criterion,
    pool: Pool,
) -> Result<BestSet> {
    let candidates = match pool {
        Pool::Declared => model.measurements().to_vec(),
        Pool::All => enumerate_measurements(model.states())?,
    };
    best_set_among(model, &candidates, budget, criterion)
}

/// Exhaustive maximization over size-`budget` subsets of `pool`. Duplicate
/// tables are dropped and ties go to the lexicographically smallest
/// canonical set.
pub fn best_set_among(
    model: &Model,
    pool: &[BoolFn],
    budget: usize,
    criterion: Criterion,
) -> Result<BestSet> {
    let s = model.states();
    let mut pool: Vec<BoolFn> = pool.to_vec();
    for f in &pool {
        f.check_same(s)?;
    }
    pool.sort();
    pool.dedup();
    let n = pool.len();
    if budget > n {
        return Err(Error::param(format!(
            "budget {budget} exceeds the {n} distinct candidates"
        )));
    }
    if budget > MAX_JOINT_BITS {
        return Err(Error::Capacity(format!(
            "measurement sets are limited to {MAX_JOINT_BITS} members"
        )));
    }
    let total = choose(n as u64, budget as u64)
        .filter(|&c| c <= MAX_SET_COMBINATIONS)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "choosing {budget} of {n} candidates exceeds {MAX_SET_COMBINATIONS} subsets"
            ))
        })?;

    let solver = PolicySolver::new(model);
    let rows = 1usize << s;
    let bits: Vec<Vec<usize>> = pool
        .iter()
        .map(|f| (0..rows).map(|x| usize::from(f.get(x))).collect())
        .collect();
    let branches = 1usize << budget;
    let score = |combo: &[usize], keys: &mut Vec<usize>, scratch: &mut Scratch| -> f64 {
        keys.clear();
        keys.resize(rows, 0);
        for (j, &c) in combo.iter().enumerate() {
            for (k, b) in keys.iter_mut().zip(&bits[c]) {
                *k |= b << j;
            }
        }
        match criterion {
            Criterion::Act => solver.solve(keys, branches, scratch),
            Criterion::Predict => solver.predict(keys, branches, scratch),
        }
    };

    if budget == 0 {
        let value = score(&[], &mut Vec::new(), &mut Scratch::default());
        return Ok(BestSet {
            members: Vec::new(),
            value,
            evaluated: 1,
        });
    }

    // One task per leading member; each scans its suffix combinations in
    // lexicographic order.
    let per_first: Vec<Option<(i64, f64, Vec<usize>)>> = (0..=n - budget)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Scratch::default()),
            |(keys, scratch), first| {
                let mut combo: Vec<usize> = (first..first + budget).collect();
                let mut best: Option<(i64, f64, Vec<usize>)> = None;
                loop {
                    let v = score(&combo, keys, scratch);
                    let key = value_key(model, v);
                    if best.as_ref().is_none_or(|b| key > b.0) {
                        best = Some((key, v, combo.clone()));
                    }
                    if !next_suffix_combination(&mut combo, n) {
                        break;
                    }
                }
                best
            },
        )
        .collect();

    let (_, value, combo) = per_first
        .into_iter()
        .flatten()
        .reduce(|a, b| match b.0.cmp(&a.0) {
            Ordering::Greater => b,
            _ => a,
        })
        .expect("at least one subset");
    Ok(BestSet {
        members: combo.into_iter().map(|i| pool[i].clone()).collect(),
        value,
        evaluated: total,
    })
}

/// Advances `combo[1..]` to the next lexicographic combination of indices
/// below `n`, keeping `combo[0]` fixed.
fn next_suffix_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 1 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
