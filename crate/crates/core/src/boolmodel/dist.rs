use super::assignment::{check_permutation, check_states, Assignment};
use super::BoolFn;
use crate::error::{Error, Result};

/// Input tables may miss summing to one by at most this much.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Tables this close to summing to one are taken as already normalized.
const SETTLED_TOLERANCE: f64 = 1e-15;

/// Sum in index order. Every probability sum in the crate goes through here
/// so results do not depend on evaluation schedule.
#[inline]
pub(crate) fn ordered_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |acc, v| acc + v)
}

/// Probability table over all `2^s` assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    states: usize,
    probs: Vec<f64>,
}

impl JointDist {
    /// Validates and renormalizes a table given in assignment index order.
    pub fn new(states: usize, probs: Vec<f64>) -> Result<Self> {
        check_states(states)?;
        if probs.len() != 1 << states {
            return Err(Error::InvalidDistribution(format!(
                "table has {} entries, expected {}",
                probs.len(),
                1usize << states
            )));
        }
        if let Some((i, p)) = probs
            .iter()
            .enumerate()
            .find(|(_, p)| !p.is_finite() || **p < 0.0)
        {
            return Err(Error::InvalidDistribution(format!(
                "entry {i} is {p}, expected a finite nonnegative number"
            )));
        }
        let total = ordered_sum(probs.iter().copied());
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "entries sum to {total}, expected 1"
            )));
        }
        let mut dist = JointDist { states, probs };
        dist.normalize(total);
        Ok(dist)
    }

    /// Divides by the total, then moves the largest entry until the ordered
    /// sum is one. A table already within [`SETTLED_TOLERANCE`] of one is
    /// left alone, which keeps normalization idempotent.
    fn normalize(&mut self, mut total: f64) {
        if (total - 1.0).abs() <= SETTLED_TOLERANCE {
            return;
        }
        for p in &mut self.probs {
            *p /= total;
        }
        let largest = self
            .probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        for _ in 0..8 {
            total = ordered_sum(self.probs.iter().copied());
            if total == 1.0 {
                return;
            }
            self.probs[largest] = (self.probs[largest] + (1.0 - total)).max(0.0);
        }
        // the ordered sum is monotone in each entry: finish one ulp at a time
        for _ in 0..1024 {
            total = ordered_sum(self.probs.iter().copied());
            let p = &mut self.probs[largest];
            match total.partial_cmp(&1.0) {
                Some(std::cmp::Ordering::Less) => *p = p.next_up(),
                Some(std::cmp::Ordering::Greater) if *p > 0.0 => *p = p.next_down(),
                _ => return,
            }
        }
    }

    /// Independent states with `Pr(X_i = 1) = pr_one[i - 1]`.
    pub fn product(pr_one: &[f64]) -> Result<Self> {
        let states = pr_one.len();
        check_states(states)?;
        if let Some(p) = pr_one.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidDistribution(format!(
                "marginal {p} outside [0, 1]"
            )));
        }
        let probs = Assignment::all(states)
            .map(|a| {
                (1..=states).fold(1.0, |acc, i| {
                    let p1 = pr_one[i - 1];
                    acc * if a.bit(i) { p1 } else { 1.0 - p1 }
                })
            })
            .collect();
        Self::new(states, probs)
    }

    /// I.i.d. states, each equal to 1 with probability `pr_one`.
    pub fn iid(states: usize, pr_one: f64) -> Result<Self> {
        Self::product(&vec![pr_one; states])
    }

    pub fn point_mass(a: Assignment) -> Self {
        let mut probs = vec![0.0; 1 << a.states()];
        probs[a.index()] = 1.0;
        JointDist {
            states: a.states(),
            probs,
        }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    /// Assignments with positive probability, in index order.
    pub fn support(&self) -> impl Iterator<Item = Assignment> + '_ {
        Assignment::all(self.states).filter(move |a| self.probs[a.index()] > 0.0)
    }

    pub fn is_full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    pub fn event_probability(&self, event: &BoolFn) -> Result<f64> {
        event.check_same(self.states)?;
        Ok(ordered_sum(event.ones().map(|i| self.probs[i])))
    }

    /// Restriction to `{event = 1}`, renormalized.
    pub fn condition(&self, event: &BoolFn) -> Result<JointDist> {
        let mass = self.event_probability(event)?;
        if mass <= 0.0 {
            return Err(Error::ZeroProbabilityEvent);
        }
        let probs = (0..self.probs.len())
            .map(|i| {
                if event.get(i) {
                    self.probs[i] / mass
                } else {
                    0.0
                }
            })
            .collect();
        let mut out = JointDist {
            states: self.states,
            probs,
        };
        let total = ordered_sum(out.probs.iter().copied());
        out.normalize(total);
        Ok(out)
    }

    /// `Pr(X_i = 1)`.
    pub fn marginal(&self, state: usize) -> f64 {
        ordered_sum(
            Assignment::all(self.states)
                .filter(|a| a.bit(state))
                .map(|a| self.probs[a.index()]),
        )
    }

    /// When the states are i.i.d. (to within `tol`), the common `Pr(X_i = 1)`.
    pub fn iid_marginal(&self, tol: f64) -> Option<f64> {
        let p1 = self.marginal(1);
        if (2..=self.states).any(|i| (self.marginal(i) - p1).abs() > tol) {
            return None;
        }
        let reference = JointDist::iid(self.states, p1).ok()?;
        self.probs
            .iter()
            .zip(reference.probs())
            .all(|(a, b)| (a - b).abs() <= tol)
            .then_some(p1)
    }

    /// Relabels states so that `X_{i+1}` becomes `X_{perm[i]+1}`.
    pub fn permuted(&self, perm: &[usize]) -> Result<JointDist> {
        check_permutation(perm, self.states)?;
        let mut probs = vec![0.0; self.probs.len()];
        for a in Assignment::all(self.states) {
            probs[a.permuted(perm).index()] = self.probs[a.index()];
        }
        Ok(JointDist {
            states: self.states,
            probs,
        })
    }
}
