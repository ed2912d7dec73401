use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use super::assignment::{check_permutation, check_states, Assignment};
use crate::error::{Error, Result};

/// Truth table of a Boolean function of the latent states.
///
/// Used both for the outcome `Y` and for measurements. Entry `a` of the table
/// is the function value on assignment index `a`. Equality, ordering and
/// hashing look only at the table; the optional name is a label.
///
/// The canonical order compares tables as `2^s`-bit integers whose bit `a` is
/// the value on assignment `a`.
#[derive(Clone)]
pub struct BoolFn {
    states: usize,
    words: Vec<u64>,
    name: Option<String>,
}

fn word_count(states: usize) -> usize {
    (1usize << states).div_ceil(64)
}

impl BoolFn {
    pub fn from_fn(states: usize, mut f: impl FnMut(Assignment) -> bool) -> Result<Self> {
        check_states(states)?;
        let mut words = vec![0u64; word_count(states)];
        for a in Assignment::all(states) {
            if f(a) {
                words[a.index() / 64] |= 1 << (a.index() % 64);
            }
        }
        Ok(BoolFn {
            states,
            words,
            name: None,
        })
    }

    /// Table given in assignment index order.
    pub fn from_table(states: usize, table: &[bool]) -> Result<Self> {
        check_states(states)?;
        if table.len() != 1 << states {
            return Err(Error::param(format!(
                "truth table has {} entries, expected {}",
                table.len(),
                1usize << states
            )));
        }
        Self::from_fn(states, |a| table[a.index()])
    }

    /// Function whose table, read as an integer, equals `bits`. Needs `s <= 6`.
    pub fn from_u64(states: usize, bits: u64) -> Result<Self> {
        check_states(states)?;
        if states > 6 {
            return Err(Error::param("integer truth tables need at most 6 states"));
        }
        let len = 1u32 << states;
        if len < 64 && bits >> len != 0 {
            return Err(Error::param(format!(
                "truth table {bits:#x} too wide for {states} states"
            )));
        }
        Ok(BoolFn {
            states,
            words: vec![bits],
            name: None,
        })
    }

    pub fn constant(states: usize, value: bool) -> Result<Self> {
        Self::from_fn(states, |_| value)
    }

    /// The coordinate function `X_i` (1-based).
    pub fn var(states: usize, state: usize) -> Result<Self> {
        if state == 0 || state > states {
            return Err(Error::param(format!(
                "state X{state} out of range for {states} states"
            )));
        }
        Self::from_fn(states, |a| a.bit(state))
    }

    /// Threshold function `1{X_1 + ... + X_s >= k}`.
    pub fn threshold(states: usize, k: usize) -> Result<Self> {
        Self::from_fn(states, |a| a.index().count_ones() as usize >= k)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn states(&self) -> usize {
        self.states
    }

    /// Number of table entries, `2^s`.
    pub fn len(&self) -> usize {
        1 << self.states
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Table entry at `index`; panics when out of range.
    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len(), "assignment index out of range");
        (self.words[index / 64] >> (index % 64)) & 1 == 1
    }

    pub fn eval(&self, a: Assignment) -> Result<bool> {
        self.check_same(a.states())?;
        Ok(self.get(a.index()))
    }

    /// The table as an integer, when `s <= 6`.
    pub fn as_u64(&self) -> Option<u64> {
        (self.states <= 6).then(|| self.words[0])
    }

    pub fn table(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Indices of assignments where the function is 1.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hex rendering of the table, most significant assignment first.
    pub fn hex(&self) -> String {
        let digits = (self.len() / 4).max(1);
        let mut out = String::with_capacity(digits + 2);
        out.push_str("0x");
        for d in (0..digits).rev() {
            let mut nibble = 0u8;
            for b in 0..4 {
                let idx = d * 4 + b;
                if idx < self.len() && self.get(idx) {
                    nibble |= 1 << b;
                }
            }
            out.push(char::from_digit(u32::from(nibble), 16).unwrap());
        }
        out
    }

    /// Name when present, otherwise the hex table.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.hex())
    }

    pub(crate) fn check_same(&self, states: usize) -> Result<()> {
        if self.states != states {
            return Err(Error::Dimension {
                expected: self.states,
                found: states,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &BoolFn, op: impl Fn(u64, u64) -> u64) -> Result<BoolFn> {
        self.check_same(other.states)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(BoolFn {
            states: self.states,
            words,
            name: None,
        })
    }

    pub fn and(&self, other: &BoolFn) -> Result<BoolFn> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn or(&self, other: &BoolFn) -> Result<BoolFn> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &BoolFn) -> Result<BoolFn> {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn not(&self) -> BoolFn {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        let len = self.len();
        if len < 64 {
            words[0] &= (1u64 << len) - 1;
        }
        BoolFn {
            states: self.states,
            words,
            name: None,
        }
    }

    /// Relabels states so that `X_{i+1}` becomes `X_{perm[i]+1}`.
    pub fn permuted(&self, perm: &[usize]) -> Result<BoolFn> {
        check_permutation(perm, self.states)?;
        let mut out = BoolFn::constant(self.states, false)?;
        for a in Assignment::all(self.states) {
            if self.get(a.index()) {
                let b = a.permuted(perm).index();
                out.words[b / 64] |= 1 << (b % 64);
            }
        }
        out.name = self.name.clone();
        Ok(out)
    }
}

impl PartialEq for BoolFn {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states && self.words == other.words
    }
}

impl Eq for BoolFn {}

impl Hash for BoolFn {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.states.hash(state);
        self.words.hash(state);
    }
}

impl Ord for BoolFn {
    fn cmp(&self, other: &Self) -> Ordering {
        self.states
            .cmp(&other.states)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BoolFn {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BoolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(n) => write!(f, "BoolFn({n}: {})", self.hex()),
            None => write!(f, "BoolFn({})", self.hex()),
        }
    }
}
