//! Converse bounds: empirical entropies of individual sequences and the
//! compression and prediction lower bounds they imply for finite-state
//! machines.

mod lz;
mod predict;

pub use lz::{default_epsilon, lz78_parse, lz_rate_bound, lz_rate_bound_min, Lz78Parse, LzBound, EPSILON_MODEL_NOTE};
pub use predict::{
    delta_function, partition_function, prediction_lower_bound, predictive_code_length, run_predictor, BaseRegime,
    LossFunction, PredictionBound, PredictionRun, PredictiveCode, PredictorDocument, PredictorSpec,
    PredictorTransition,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::encoder::{Encoder, State, Symbol};
use crate::error::{Error, Result};

/// Cyclic empirical distribution of `(state, window)` pairs: `counts[(z, w)]`
/// is the number of positions `i` with `z_i = z` and
/// `x_i, x_{i+1}, ..., x_{i+l-1} = w`, indices taken modulo `n`.
/// The weight of a pair is `count / n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalDist {
    pub ell: usize,
    /// Length of the (extended) sequence the windows run over.
    pub n: u64,
    /// Length of the sequence before cyclic extension.
    pub original_len: u64,
    pub counts: BTreeMap<(State, Vec<Symbol>), u64>,
}

impl EmpiricalDist {
    /// Window counts with the state summed out.
    pub fn window_marginal(&self) -> BTreeMap<Vec<Symbol>, u64> {
        let mut m = BTreeMap::new();
        for ((_, w), c) in &self.counts {
            *m.entry(w.clone()).or_insert(0) += c;
        }
        m
    }

    /// Counts of the coordinates `range` of the window, state summed out.
    pub fn coordinate_marginal(&self, range: std::ops::Range<usize>) -> BTreeMap<Vec<Symbol>, u64> {
        let mut m = BTreeMap::new();
        for ((_, w), c) in &self.counts {
            *m.entry(w[range.clone()].to_vec()).or_insert(0) += c;
        }
        m
    }

    /// Marginal of the states.
    pub fn state_marginal(&self) -> BTreeMap<State, u64> {
        let mut m = BTreeMap::new();
        for ((z, _), c) in &self.counts {
            *m.entry(*z).or_insert(0) += c;
        }
        m
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// The first `l-1` coordinates and the last `l-1` coordinates have the
    /// same marginal, compared as exact counts.
    pub fn is_shift_invariant(&self) -> bool {
        if self.ell <= 1 {
            return true;
        }
        self.coordinate_marginal(0..self.ell - 1) == self.coordinate_marginal(1..self.ell)
    }
}

fn window_counts(states: &[State], x: &[Symbol], ell: usize) -> BTreeMap<(State, Vec<Symbol>), u64> {
    let n = x.len();
    let mut counts = BTreeMap::new();
    for i in 0..n {
        let w: Vec<Symbol> = (0..ell).map(|j| x[(i + j) % n]).collect();
        *counts.entry((states[i], w)).or_insert(0) += 1;
    }
    counts
}

fn check_window(ell: usize, n: usize) -> Result<()> {
    if ell == 0 || ell >= n {
        return Err(Error::InvalidParameter(format!("window length {ell} must satisfy 1 <= l < n = {n}")));
    }
    Ok(())
}

/// Cyclic empirical distribution of an irreducible encoder's states and
/// input windows. The input is first extended so that the state sequence
/// returns to `z1`, which makes the windows exactly shift invariant.
pub fn empirical_joint(e: &Encoder, z1: State, x: &[Symbol], ell: usize) -> Result<EmpiricalDist> {
    if !e.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    let (ext, _) = e.cyclic_extend(z1, x)?;
    check_window(ell, ext.len())?;
    let trace = e.encode(z1, &ext)?;
    Ok(EmpiricalDist {
        ell,
        n: ext.len() as u64,
        original_len: x.len() as u64,
        counts: window_counts(&trace.states, &ext, ell),
    })
}

/// Cyclic empirical distribution of the windows of `x` alone (a single
/// dummy state).
pub fn empirical_windows(x: &[Symbol], ell: usize) -> Result<EmpiricalDist> {
    check_window(ell, x.len())?;
    Ok(EmpiricalDist {
        ell,
        n: x.len() as u64,
        original_len: x.len() as u64,
        counts: window_counts(&vec![0; x.len()], x, ell),
    })
}

/// Entropy in bits of a count vector with total `n`.
fn entropy_of_counts<'a>(counts: impl Iterator<Item = &'a u64>, n: u64) -> f64 {
    let n = n as f64;
    let s: f64 = counts.filter(|&&c| c > 0).map(|&c| (c as f64) * (c as f64).log2()).sum();
    (n.log2() - s / n).max(0.0)
}

/// `H(X_l | X^{l-1})` in bits: the entropy of the window marginal minus that
/// of its first `l-1` coordinates, states summed out.
pub fn empirical_cond_entropy(p: &EmpiricalDist) -> f64 {
    let n = p.total();
    if n == 0 {
        return 0.0;
    }
    let full = entropy_of_counts(p.window_marginal().values(), n);
    let prefix = if p.ell <= 1 {
        0.0
    } else {
        entropy_of_counts(p.coordinate_marginal(0..p.ell - 1).values(), n)
    };
    (full - prefix).max(0.0)
}

/// `H - (2 log2 s + (s-1) L_max) / l` in bits per symbol.
pub fn stochastic_rate_bound(h_cond: f64, s: u64, l_max: u64, ell: u64) -> f64 {
    h_cond - state_penalty(s, l_max) / ell as f64
}

fn state_penalty(s: u64, l_max: u64) -> f64 {
    2.0 * (s as f64).log2() + ((s - 1) as f64) * l_max as f64
}

/// Best of [`stochastic_rate_bound`] over `(l, H(X_l|X^{l-1}))` pairs, as
/// `(l, bound)`.
pub fn sup_stochastic_rate_bound(entries: &[(u64, f64)], s: u64, l_max: u64) -> Option<(u64, f64)> {
    entries
        .iter()
        .map(|&(ell, h)| (ell, stochastic_rate_bound(h, s, l_max, ell)))
        .fold(None, |best: Option<(u64, f64)>, cur| match best {
            Some(b) if b.1 >= cur.1 => Some(b),
            _ => Some(cur),
        })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowTerm {
    pub ell: u64,
    pub h_cond: f64,
    pub bound: f64,
}

/// Both sides of the individual-sequence compression bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndividualBound {
    /// Bits per symbol actually spent on `x` from `z1`.
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub best_ell: Option<u64>,
    pub terms: Vec<WindowTerm>,
    pub n_original: u64,
    pub n_extended: u64,
    /// `(s-1) L_max / n` subtracted for the cyclic extension.
    pub correction: f64,
}

/// `(1/n) sum L[f(z_i,x_i)] >= max_l {H(X_l|X^{l-1}) - (2 log2 s + (s-1) L_max)/l} - (s-1) L_max / n`.
///
/// The entropies come from the cyclically extended sequence; window lengths
/// not below the extended length are skipped.
pub fn individual_rate_bound(e: &Encoder, z1: State, x: &[Symbol], ells: &[u64]) -> Result<IndividualBound> {
    if !e.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    if x.is_empty() {
        return Err(Error::InvalidParameter("sequence is empty".into()));
    }
    let s = e.state_count() as u64;
    let l_max = e.l_max();
    let (ext, _) = e.cyclic_extend(z1, x)?;
    let trace = e.encode(z1, &ext)?;
    let lhs = e.encode(z1, x)?.total_bits as f64 / x.len() as f64;
    let mut terms = Vec::new();
    for &ell in ells {
        let l = ell as usize;
        if l == 0 || l >= ext.len() {
            continue;
        }
        let p = EmpiricalDist {
            ell: l,
            n: ext.len() as u64,
            original_len: x.len() as u64,
            counts: window_counts(&trace.states, &ext, l),
        };
        let h = empirical_cond_entropy(&p);
        terms.push(WindowTerm {
            ell,
            h_cond: h,
            bound: stochastic_rate_bound(h, s, l_max, ell),
        });
    }
    let best = terms
        .iter()
        .fold(None, |b: Option<&WindowTerm>, t| match b {
            Some(b) if b.bound >= t.bound => Some(b),
            _ => Some(t),
        })
        .cloned();
    let correction = ((s - 1) * l_max) as f64 / x.len() as f64;
    let rhs = best.as_ref().map_or(f64::NEG_INFINITY, |t| t.bound) - correction;
    Ok(IndividualBound {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-12,
        best_ell: best.map(|t| t.ell),
        terms,
        n_original: x.len() as u64,
        n_extended: ext.len() as u64,
        correction,
    })
}
