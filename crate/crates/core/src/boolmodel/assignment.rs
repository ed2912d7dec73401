use std::fmt;

use crate::error::{Error, Result};
use crate::MAX_STATES;

/// Checks that `states` is within the supported range.
pub(crate) fn check_states(states: usize) -> Result<()> {
    if states == 0 || states > MAX_STATES {
        return Err(Error::StateCount(states));
    }
    Ok(())
}

/// One realization of the `s` binary latent states.
///
/// Bit `i - 1` of the index holds the value of state `X_i`, so `X_1` is the
/// least significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    index: usize,
    states: usize,
}

impl Assignment {
    pub fn new(index: usize, states: usize) -> Result<Self> {
        check_states(states)?;
        if index >= 1 << states {
            return Err(Error::param(format!(
                "assignment index {index} out of range for {states} states"
            )));
        }
        Ok(Assignment { index, states })
    }

    /// Builds an assignment from state values listed as `X_1, X_2, ...`.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        check_states(bits.len())?;
        let index = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &b)| acc | (usize::from(b) << i));
        Ok(Assignment {
            index,
            states: bits.len(),
        })
    }

    /// All `2^s` assignments in ascending index order.
    pub fn all(states: usize) -> impl Iterator<Item = Assignment> {
        (0..1usize << states).map(move |index| Assignment { index, states })
    }

    pub fn index(self) -> usize {
        self.index
    }

    pub fn states(self) -> usize {
        self.states
    }

    /// Value of state `X_i` (1-based).
    pub fn bit(self, state: usize) -> bool {
        debug_assert!((1..=self.states).contains(&state));
        (self.index >> (state - 1)) & 1 == 1
    }

    /// Copy of this assignment with `X_i` overwritten to `value`.
    pub fn with_state(self, state: usize, value: bool) -> Self {
        debug_assert!((1..=self.states).contains(&state));
        let mask = 1usize << (state - 1);
        let index = if value {
            self.index | mask
        } else {
            self.index & !mask
        };
        Assignment { index, ..self }
    }

    /// Copy of this assignment with `X_i` flipped.
    pub fn flipped(self, state: usize) -> Self {
        debug_assert!((1..=self.states).contains(&state));
        Assignment {
            index: self.index ^ (1usize << (state - 1)),
            ..self
        }
    }

    /// Relabels states: the value of `X_{i+1}` moves to `X_{perm[i]+1}`.
    pub fn permuted(self, perm: &[usize]) -> Self {
        let mut index = 0;
        for (i, &target) in perm.iter().enumerate() {
            if (self.index >> i) & 1 == 1 {
                index |= 1 << target;
            }
        }
        Assignment { index, ..self }
    }
}

impl fmt::Display for Assignment {
    /// Prints the state values as `X1X2...Xs`, e.g. `(1,0)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 1..=self.states {
            if i > 1 {
                write!(f, ",")?;
            }
            write!(f, "{}", u8::from(self.bit(i)))?;
        }
        write!(f, ")")
    }
}

/// Validates a permutation of `0..states`.
pub(crate) fn check_permutation(perm: &[usize], states: usize) -> Result<()> {
    if perm.len() != states {
        return Err(Error::Dimension {
            expected: states,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; states];
    for &p in perm {
        if p >= states || seen[p] {
            return Err(Error::param("not a permutation of the state indices"));
        }
        seen[p] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x1_is_least_significant() {
        let a = Assignment::from_bits(&[true, false]).unwrap();
        assert_eq!(a.index(), 1);
        assert!(a.bit(1));
        assert!(!a.bit(2));
        assert_eq!(a.to_string(), "(1,0)");
    }

    #[test]
    fn guards() {
        assert!(Assignment::new(4, 2).is_err());
        assert!(Assignment::new(0, 0).is_err());
        assert!(Assignment::new(0, 13).is_err());
        assert!(Assignment::new(4095, 12).is_ok());
    }

    #[test]
    fn overwrite_and_flip() {
        let a = Assignment::new(0b101, 3).unwrap();
        assert_eq!(a.with_state(2, true).index(), 0b111);
        assert_eq!(a.with_state(1, false).index(), 0b100);
        assert_eq!(a.flipped(3).index(), 0b001);
    }

    #[test]
    fn permutation() {
        let a = Assignment::new(0b001, 3).unwrap();
        assert_eq!(a.permuted(&[2, 0, 1]).index(), 0b100);
        assert!(check_permutation(&[0, 0, 1], 3).is_err());
    }
}
