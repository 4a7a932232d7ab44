//! Incremental (LZ78) parsing and the compression lower bound built on
//! Ziv's inequality.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::encoder::Symbol;

pub const EPSILON_MODEL_NOTE: &str =
    "heuristic epsilon model eps_l(n) = log2(log2 n) / log2 n; only the order of the true term is known";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lz78Parse {
    pub phrases: Vec<Vec<Symbol>>,
    /// Number of distinct phrases.
    pub c: usize,
    /// Whether the last phrase repeats an earlier one.
    pub trailing_repeat: bool,
}

impl Lz78Parse {
    pub fn concat(&self) -> Vec<Symbol> {
        self.phrases.concat()
    }
}

/// Each phrase is the shortest prefix of the remaining input that is not yet
/// a phrase; the final phrase may be a repeat when the input runs out.
pub fn lz78_parse(x: &[Symbol]) -> Lz78Parse {
    // trie over phrases: (node, symbol) -> child node; node 0 is the root
    let mut trie: HashMap<(usize, Symbol), usize> = HashMap::new();
    let mut phrases = Vec::new();
    let mut start = 0;
    let mut node = 0;
    for (i, &sym) in x.iter().enumerate() {
        match trie.get(&(node, sym)) {
            Some(&child) => node = child,
            None => {
                let id = trie.len() + 1;
                trie.insert((node, sym), id);
                phrases.push(x[start..=i].to_vec());
                start = i + 1;
                node = 0;
            }
        }
    }
    let c = phrases.len();
    let trailing_repeat = start < x.len();
    if trailing_repeat {
        phrases.push(x[start..].to_vec());
    }
    Lz78Parse {
        phrases,
        c,
        trailing_repeat,
    }
}

/// Default `eps_l(n)`: `log2(log2 n) / log2 n`, zero when `n < 4`.
pub fn default_epsilon(_ell: u64, n: u64) -> f64 {
    if n < 4 {
        return 0.0;
    }
    let l = (n as f64).log2();
    l.log2() / l
}

/// `c log2 c / n - [eps + (2 log2 s + (s-1) L_max) / l] - (s-1) L_max / n`.
pub fn lz_rate_bound(c: u64, n: u64, ell: u64, s: u64, l_max: u64, epsilon: f64) -> f64 {
    let n = n.max(1) as f64;
    let main = if c == 0 { 0.0 } else { c as f64 * (c as f64).log2() / n };
    let penalty = epsilon + (2.0 * (s as f64).log2() + ((s - 1) * l_max) as f64) / ell as f64;
    main - penalty - ((s - 1) * l_max) as f64 / n
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LzBound {
    pub c: u64,
    pub n: u64,
    pub main_term: f64,
    pub best_ell: u64,
    pub epsilon: f64,
    pub bound: f64,
    pub note: String,
}

/// [`lz_rate_bound`] with the bracket minimized over `ells`, using
/// `epsilon(l, n)`.
pub fn lz_rate_bound_min(
    c: u64,
    n: u64,
    ells: &[u64],
    s: u64,
    l_max: u64,
    epsilon: impl Fn(u64, u64) -> f64,
    note: &str,
) -> Option<LzBound> {
    let mut best: Option<LzBound> = None;
    for &ell in ells.iter().filter(|&&l| l > 0) {
        let eps = epsilon(ell, n);
        let bound = lz_rate_bound(c, n, ell, s, l_max, eps);
        if best.as_ref().is_none_or(|b| bound > b.bound) {
            best = Some(LzBound {
                c,
                n,
                main_term: lz_rate_bound(c, n, 1, 1, 0, 0.0),
                best_ell: ell,
                epsilon: eps,
                bound,
                note: note.to_string(),
            });
        }
    }
    best
}
