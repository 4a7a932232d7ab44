//! Depth-bounded exhaustive test of information losslessness.
//!
//! An encoder is IL when the initial state, the output string and the final
//! state determine the input. We enumerate every input string up to a depth
//! and look for two strings that agree on all three. A collision refutes IL;
//! the absence of one is evidence only up to the checked depth.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{digits, Encoder, State, Symbol};
use crate::error::{Error, Result};

pub const IL_VERDICT_NOTE: &str =
    "exhaustive up to checked_depth only; a clean verdict does not establish losslessness for all lengths";

/// Two distinct inputs from `state` with identical output and final state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ILWitness {
    pub state: State,
    pub depth: usize,
    pub first: Vec<Symbol>,
    pub second: Vec<Symbol>,
    /// Side-information word held fixed for both inputs, when applicable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub si_word: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ILVerdict {
    pub checked_depth: usize,
    pub is_il_up_to_depth: bool,
    pub witness: Option<ILWitness>,
    pub note: String,
}

/// Packed bit string used as a hash key.
#[derive(Default)]
pub(crate) struct BitBuf {
    words: Vec<u64>,
    len: usize,
}

impl BitBuf {
    fn push_all(&mut self, bits: &[bool]) {
        for &b in bits {
            let (w, o) = (self.len / 64, self.len % 64);
            if w == self.words.len() {
                self.words.push(0);
            }
            if b {
                self.words[w] |= 1 << o;
            }
            self.len += 1;
        }
    }

    fn truncate(&mut self, len: usize) {
        self.len = len;
        let keep = len.div_ceil(64);
        self.words.truncate(keep);
        if len % 64 != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
    }

    fn key(&self) -> (Vec<u64>, usize) {
        (self.words.clone(), self.len)
    }
}

type CollisionMap = HashMap<((Vec<u64>, usize), State), u64>;

/// Enumerates every length-`n` input from `start` in lexicographic order and
/// returns the first string (in that order) whose output and final state
/// coincide with an earlier one, as `(earlier, later)` input strings.
///
/// `step(position, state, symbol)` returns the emitted bits and the next state.
pub(crate) fn first_collision<'a, F>(alphabet: usize, n: usize, start: State, step: &F) -> Option<(Vec<Symbol>, Vec<Symbol>)>
where
    F: Fn(usize, State, Symbol) -> (&'a [bool], State),
{
    fn dfs<'a, F>(
        pos: usize,
        n: usize,
        alphabet: usize,
        state: State,
        buf: &mut BitBuf,
        counter: &mut u64,
        seen: &mut CollisionMap,
        step: &F,
    ) -> Option<(u64, u64)>
    where
        F: Fn(usize, State, Symbol) -> (&'a [bool], State),
    {
        if pos == n {
            let idx = *counter;
            *counter += 1;
            let key = (buf.key(), state);
            if let Some(&prev) = seen.get(&key) {
                return Some((prev, idx));
            }
            seen.insert(key, idx);
            return None;
        }
        let mark = buf.len;
        for x in 0..alphabet {
            let (bits, next) = step(pos, state, x);
            buf.push_all(bits);
            let hit = dfs(pos + 1, n, alphabet, next, buf, counter, seen, step);
            buf.truncate(mark);
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    let mut seen = CollisionMap::new();
    let mut counter = 0;
    let mut buf = BitBuf::default();
    dfs(0, n, alphabet, start, &mut buf, &mut counter, &mut seen, step).map(|(a, b)| {
        (
            digits(a as usize, alphabet, n),
            digits(b as usize, alphabet, n),
        )
    })
}

/// Cumulative number of strings enumerated by checking depths `1..=d` from
/// `roots` start configurations with `branching` choices per step.
pub(crate) fn affordable_depth(roots: u64, branching: u64, max_depth: usize, budget: u64) -> usize {
    let mut total: u64 = 0;
    let mut layer: u64 = roots;
    for n in 1..=max_depth {
        layer = match layer.checked_mul(branching) {
            Some(v) => v,
            None => return n - 1,
        };
        match total.checked_add(layer) {
            Some(t) if t <= budget => total = t,
            _ => return n - 1,
        }
    }
    max_depth
}

/// Minimal-depth witness from a single start state, searching depths `1..=max_depth`.
pub fn check_il_from(e: &Encoder, z: State, max_depth: usize) -> Option<ILWitness> {
    let step = |_pos: usize, state: State, x: Symbol| (e.output(state, x).bits(), e.next_state(state, x));
    (1..=max_depth).find_map(|n| {
        first_collision(e.alphabet_size(), n, z, &step).map(|(first, second)| ILWitness {
            state: z,
            depth: n,
            first,
            second,
            si_word: None,
        })
    })
}

/// Start states in reporting order: the encoder's initial state, then the rest.
pub(crate) fn state_order(initial: State, count: usize) -> Vec<State> {
    std::iter::once(initial).chain((0..count).filter(|&z| z != initial)).collect()
}

/// Checks every start state up to `max_depth` (`budget` caps the total number
/// of enumerated strings). States are scanned starting from the initial
/// state; the reported witness is the shallowest one for the first state in
/// that order that has any.
pub fn check_il(e: &Encoder, max_depth: usize, budget: u64) -> Result<ILVerdict> {
    if max_depth == 0 {
        return Err(Error::InvalidParameter("IL check depth must be at least 1".into()));
    }
    let s = e.state_count() as u64;
    let depth = affordable_depth(s, e.alphabet_size() as u64, max_depth, budget);
    let order = state_order(e.initial_state(), e.state_count());
    let found: Vec<Option<ILWitness>> = order.par_iter().map(|&z| check_il_from(e, z, depth)).collect();
    let witness = found.into_iter().flatten().next();
    if witness.is_none() && depth < max_depth {
        return Err(Error::BudgetExceeded {
            budget,
            completed_depth: depth,
        });
    }
    Ok(ILVerdict {
        checked_depth: depth,
        is_il_up_to_depth: witness.is_none(),
        witness,
        note: IL_VERDICT_NOTE.to_string(),
    })
}
