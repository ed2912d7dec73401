//! States, distributions, Boolean functions, actions and do-operation
//! semantics.
//!
//! All states are binary. An [`Assignment`] packs one realization of the
//! states into an index with `X_1` as the least significant bit; a
//! [`BoolFn`] is a truth table over those indices, and a [`JointDist`] is a
//! probability table over them.

mod action;
mod assignment;
mod boolfn;
mod dist;
mod model;

pub use action::{Action, CostMode, CostModel, Utility};
pub use assignment::Assignment;
pub use boolfn::BoolFn;
pub use dist::{JointDist, NORMALIZATION_TOLERANCE};
pub use model::Model;

pub(crate) use dist::ordered_sum;

use crate::error::{Error, Result};

pub fn eval(f: &BoolFn, a: Assignment) -> Result<bool> {
    f.eval(a)
}

/// Value of `f` after the do-operation `act` is applied to `a`.
pub fn apply_do(f: &BoolFn, act: Action, a: Assignment) -> Result<bool> {
    act.validate(f.states())?;
    f.eval(act.apply(a))
}

pub fn event_probability(d: &JointDist, e: &BoolFn) -> Result<f64> {
    d.event_probability(e)
}

pub fn condition(d: &JointDist, e: &BoolFn) -> Result<JointDist> {
    d.condition(e)
}

/// Observed joint value of a measurement list: bit `j` holds measurement `j`.
pub fn joint_value(mset: &[BoolFn], a: Assignment) -> Result<usize> {
    if mset.len() >= usize::BITS as usize {
        return Err(Error::Capacity(format!(
            "{} measurements cannot be packed into a joint value",
            mset.len()
        )));
    }
    mset.iter().enumerate().try_fold(0usize, |acc, (j, m)| {
        Ok(acc | (usize::from(m.eval(a)?) << j))
    })
}

/// Joint value for every assignment, in index order.
pub(crate) fn joint_keys(mset: &[BoolFn], states: usize) -> Result<Vec<usize>> {
    for m in mset {
        m.check_same(states)?;
    }
    if mset.len() >= usize::BITS as usize {
        return Err(Error::Capacity(format!(
            "{} measurements cannot be packed into a joint value",
            mset.len()
        )));
    }
    Ok((0..1usize << states)
        .map(|x| {
            mset.iter()
                .enumerate()
                .fold(0usize, |acc, (j, m)| acc | (usize::from(m.get(x)) << j))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: usize, i: usize) -> BoolFn {
        BoolFn::var(s, i).unwrap()
    }

    fn at(bits: &[bool]) -> Assignment {
        Assignment::from_bits(bits).unwrap()
    }

    #[test]
    fn eval_examples() {
        let and = x(2, 1).and(&x(2, 2)).unwrap();
        assert!(eval(&and, Assignment::new(3, 2).unwrap()).unwrap());
        assert!(!eval(&and, Assignment::new(1, 2).unwrap()).unwrap());
        let zero = BoolFn::constant(3, false).unwrap();
        assert!(Assignment::all(3).all(|a| !eval(&zero, a).unwrap()));
        assert!(matches!(
            eval(&and, Assignment::new(0, 3).unwrap()),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn apply_do_examples() {
        let and = x(2, 1).and(&x(2, 2)).unwrap();
        assert!(apply_do(&and, Action::set(2, true), at(&[true, false])).unwrap());
        assert!(!apply_do(&and, Action::Noop, at(&[true, false])).unwrap());
        let xor = x(2, 1).xor(&x(2, 2)).unwrap();
        assert!(!apply_do(&xor, Action::set(1, true), at(&[true, true])).unwrap());
        assert!(apply_do(&xor, Action::set(3, true), at(&[true, true])).is_err());
    }

    #[test]
    fn apply_do_ignores_overwritten_bit() {
        let xor = x(3, 1).xor(&x(3, 3)).unwrap();
        for a in Assignment::all(3) {
            let act = Action::set(1, false);
            assert_eq!(
                apply_do(&xor, act, a).unwrap(),
                apply_do(&xor, act, a.flipped(1)).unwrap()
            );
        }
    }

    #[test]
    fn event_probability_examples() {
        let d = JointDist::iid(2, 0.75).unwrap();
        let not_y = x(2, 1).and(&x(2, 2)).unwrap().not();
        // 1 - q^2 with q = 0.75, cross-checked against the explicit table sum.
        let by_table = d.probs()[0] + d.probs()[1] + d.probs()[2];
        assert_eq!(event_probability(&d, &not_y).unwrap(), by_table);
        assert!((by_table - 0.4375).abs() < 1e-15);
        let one = BoolFn::constant(2, true).unwrap();
        assert_eq!(event_probability(&d, &one).unwrap(), 1.0);
        assert_eq!(event_probability(&d, &one.not()).unwrap(), 0.0);
    }

    #[test]
    fn condition_examples() {
        let d = JointDist::iid(2, 0.75).unwrap();
        let c = condition(&d, &x(2, 1)).unwrap();
        assert_eq!(c.probs(), &[0.0, 0.25, 0.0, 0.75]);
        let sure = BoolFn::constant(2, true).unwrap();
        assert_eq!(condition(&d, &sure).unwrap(), d);
        let single = BoolFn::from_fn(2, |a| a.index() == 2).unwrap();
        assert_eq!(condition(&d, &single).unwrap().probs(), &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(
            condition(&d, &sure.not()),
            Err(Error::ZeroProbabilityEvent)
        );
    }

    #[test]
    fn joint_value_examples() {
        let y = x(2, 1).and(&x(2, 2)).unwrap();
        let piv = x(2, 1).and(&x(2, 2).not()).unwrap();
        assert_eq!(joint_value(&[y, piv], at(&[true, false])).unwrap(), 2);
        for a in Assignment::all(2) {
            assert_eq!(joint_value(&[], a).unwrap(), 0);
            assert_eq!(
                joint_value(&[BoolFn::constant(2, true).unwrap()], a).unwrap(),
                1
            );
        }
    }
}
