//! Finite-state encoders: a state set, an input alphabet, an output function
//! emitting variable-length binary strings (possibly empty) and a next-state
//! function.

mod il;
mod schema;

pub use il::{check_il, check_il_from, ILVerdict, ILWitness, IL_VERDICT_NOTE};
pub(crate) use il::{affordable_depth, first_collision, state_order};
pub use schema::{EncoderDocument, TransitionRecord};
pub(crate) use schema::{index_names, lookup};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph;

pub type State = usize;
pub type Symbol = usize;

/// A binary output string; the empty string is the null output.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword(Vec<bool>);

impl Codeword {
    pub fn null() -> Self {
        Codeword(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Codeword(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(parts: &[Codeword]) -> Codeword {
        Codeword(parts.iter().flat_map(|c| c.0.iter().copied()).collect())
    }
}

impl FromStr for Codeword {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::NonBinaryOutput(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Codeword)
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for Codeword {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Codeword {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Finite-state encoder with integer state and symbol ids. Human-readable
/// names from the source document are kept for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoder {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: State,
    out: Vec<Codeword>,
    next: Vec<State>,
}

/// State sequence `z_1..z_{n+1}` and outputs `y_1..y_n` of one run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodeTrace {
    pub states: Vec<State>,
    pub outputs: Vec<Codeword>,
    pub total_bits: u64,
}

impl EncodeTrace {
    pub fn final_state(&self) -> State {
        *self.states.last().expect("trace always holds the initial state")
    }

    pub fn output(&self) -> Codeword {
        Codeword::concat(&self.outputs)
    }
}

impl Encoder {
    /// Builds an encoder from tables indexed by `state * alphabet_size + symbol`,
    /// with numeric default names.
    pub fn new(
        state_count: usize,
        alphabet_size: usize,
        initial: State,
        out: Vec<Codeword>,
        next: Vec<State>,
    ) -> Result<Self> {
        let states = (0..state_count).map(|z| z.to_string()).collect();
        let alphabet = (0..alphabet_size).map(|x| x.to_string()).collect();
        Self::with_names(states, alphabet, initial, out, next)
    }

    pub fn with_names(
        states: Vec<String>,
        alphabet: Vec<String>,
        initial: State,
        out: Vec<Codeword>,
        next: Vec<State>,
    ) -> Result<Self> {
        let (s, a) = (states.len(), alphabet.len());
        if s == 0 {
            return Err(Error::Schema("encoder needs at least one state".into()));
        }
        if a == 0 {
            return Err(Error::Schema("alphabet must be non-empty".into()));
        }
        if initial >= s {
            return Err(Error::StateOutOfRange {
                state: initial,
                states: s,
            });
        }
        if out.len() != s * a {
            return Err(Error::DimensionMismatch {
                expected: s * a,
                got: out.len(),
            });
        }
        if next.len() != s * a {
            return Err(Error::DimensionMismatch {
                expected: s * a,
                got: next.len(),
            });
        }
        if let Some(&bad) = next.iter().find(|&&z| z >= s) {
            return Err(Error::StateOutOfRange {
                state: bad,
                states: s,
            });
        }
        Ok(Encoder {
            states,
            alphabet,
            initial,
            out,
            next,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        schema::parse_encoder(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&EncoderDocument::from(self)).expect("document serializes")
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn initial_state(&self) -> State {
        self.initial
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, z: State) -> &str {
        &self.states[z]
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_id(&self, name: &str) -> Option<State> {
        self.states.iter().position(|s| s == name)
    }

    pub fn output(&self, z: State, x: Symbol) -> &Codeword {
        &self.out[z * self.alphabet.len() + x]
    }

    pub fn next_state(&self, z: State, x: Symbol) -> State {
        self.next[z * self.alphabet.len() + x]
    }

    /// `L_max`: the longest single-step output in bits.
    pub fn l_max(&self) -> u64 {
        self.out.iter().map(|c| c.len() as u64).max().unwrap_or(0)
    }

    /// The same machine read `ell` symbols at a time: super-symbols are
    /// `ell`-blocks indexed lexicographically, outputs are concatenated.
    pub fn block_extension(&self, ell: usize) -> Result<Encoder> {
        let a = self.alphabet.len();
        let blocks = checked_pow(a, ell).filter(|_| ell > 0).ok_or(Error::Overflow("block alphabet"))?;
        let mut out = Vec::with_capacity(self.states.len() * blocks);
        let mut next = Vec::with_capacity(self.states.len() * blocks);
        for z in 0..self.states.len() {
            for_each_word(a, ell, |w| {
                let trace = self.encode(z, w).expect("symbols in range");
                out.push(trace.output());
                next.push(trace.final_state());
            });
        }
        let alphabet = (0..blocks)
            .map(|i| digits(i, a, ell).iter().map(|&x| self.alphabet[x].as_str()).collect::<Vec<_>>().join(""))
            .collect();
        Encoder::with_names(self.states.clone(), alphabet, self.initial, out, next)
    }

    pub fn with_output(&self, z: State, x: Symbol, c: Codeword) -> Encoder {
        let mut e = self.clone();
        let a = e.alphabet.len();
        e.out[z * a + x] = c;
        e
    }

    fn check_symbols(&self, x: &[Symbol]) -> Result<()> {
        match x.iter().find(|&&v| v >= self.alphabet.len()) {
            Some(&bad) => Err(Error::SymbolOutOfRange {
                symbol: bad,
                alphabet: self.alphabet.len(),
            }),
            None => Ok(()),
        }
    }

    fn check_state(&self, z: State) -> Result<()> {
        if z >= self.states.len() {
            return Err(Error::StateOutOfRange {
                state: z,
                states: self.states.len(),
            });
        }
        Ok(())
    }

    pub fn encode(&self, z1: State, x: &[Symbol]) -> Result<EncodeTrace> {
        self.check_state(z1)?;
        self.check_symbols(x)?;
        let mut states = Vec::with_capacity(x.len() + 1);
        let mut outputs = Vec::with_capacity(x.len());
        let mut z = z1;
        let mut total_bits = 0u64;
        states.push(z);
        for &sym in x {
            let y = self.output(z, sym);
            total_bits += y.len() as u64;
            outputs.push(y.clone());
            z = self.next_state(z, sym);
            states.push(z);
        }
        Ok(EncodeTrace {
            states,
            outputs,
            total_bits,
        })
    }

    /// Total output length and final state, without materializing the trace.
    /// Symbols must already be in range.
    pub fn run_length(&self, z1: State, x: &[Symbol]) -> (u64, State) {
        x.iter().fold((0u64, z1), |(bits, z), &sym| {
            (bits + self.output(z, sym).len() as u64, self.next_state(z, sym))
        })
    }

    /// State digraph: an edge `z -> z'` whenever some symbol drives `z` to `z'`.
    pub fn adjacency(&self) -> Vec<Vec<State>> {
        (0..self.states.len())
            .map(|z| {
                let mut targets: Vec<State> =
                    (0..self.alphabet.len()).map(|x| self.next_state(z, x)).collect();
                targets.sort_unstable();
                targets.dedup();
                targets
            })
            .collect()
    }

    pub fn is_irreducible(&self) -> bool {
        graph::is_strongly_connected(&self.adjacency())
    }

    /// Shortest input string driving `from` to `to`; among equally short
    /// strings the lexicographically smallest one.
    pub fn shortest_path_input(&self, from: State, to: State) -> Result<Vec<Symbol>> {
        self.check_state(from)?;
        self.check_state(to)?;
        let s = self.states.len();
        // BFS with symbols expanded in increasing order: the first discovery of
        // each state is along its lexicographically least shortest path.
        let mut parent: Vec<Option<(State, Symbol)>> = vec![None; s];
        let mut seen = vec![false; s];
        seen[from] = true;
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for x in 0..self.alphabet.len() {
                let v = self.next_state(u, x);
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, x));
                    queue.push_back(v);
                }
            }
        }
        if !seen[to] {
            return Err(Error::Unreachable { from, to });
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, x) = parent[cur].expect("visited states have parents");
            path.push(x);
            cur = p;
        }
        path.reverse();
        Ok(path)
    }

    /// Appends the shortest suffix that returns the state sequence to `z1`.
    /// Returns the extended sequence and the suffix length `m <= s - 1`.
    pub fn cyclic_extend(&self, z1: State, x: &[Symbol]) -> Result<(Vec<Symbol>, usize)> {
        self.check_state(z1)?;
        self.check_symbols(x)?;
        let (_, last) = self.run_length(z1, x);
        let suffix = self.shortest_path_input(last, z1).map_err(|_| Error::NotIrreducible)?;
        let m = suffix.len();
        let mut extended = x.to_vec();
        extended.extend(suffix);
        Ok((extended, m))
    }
}

/// Tree-structured encoder for a fixed-to-variable block code of length `k`:
/// the state is the part of the current block read so far, the encoder idles
/// until the block completes and then emits the whole codeword.
///
/// `codebook[i]` is the codeword of the block whose base-`alphabet_size`
/// digits (most significant first) spell `i`.
pub fn build_block_encoder(alphabet_size: usize, k: usize, codebook: &[Codeword]) -> Result<Encoder> {
    if alphabet_size == 0 || k == 0 {
        return Err(Error::InvalidParameter("block length and alphabet size must be positive".into()));
    }
    let blocks = checked_pow(alphabet_size, k).ok_or(Error::Overflow("block count"))?;
    if codebook.len() != blocks {
        return Err(Error::Schema(format!(
            "codebook incomplete: expected {blocks} codewords, got {}",
            codebook.len()
        )));
    }
    // prefixes of length j occupy ids offset(j) .. offset(j) + alphabet_size^j
    let offsets: Vec<usize> = (0..k)
        .scan(0usize, |acc, j| {
            let off = *acc;
            *acc += alphabet_size.pow(j as u32);
            Some(off)
        })
        .collect();
    let state_count = offsets[k - 1] + alphabet_size.pow((k - 1) as u32);
    let mut states = Vec::with_capacity(state_count);
    for j in 0..k {
        for v in 0..alphabet_size.pow(j as u32) {
            states.push(if j == 0 {
                "root".to_string()
            } else {
                digits(v, alphabet_size, j).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
            });
        }
    }
    let mut out = Vec::with_capacity(state_count * alphabet_size);
    let mut next = Vec::with_capacity(state_count * alphabet_size);
    for j in 0..k {
        for v in 0..alphabet_size.pow(j as u32) {
            for x in 0..alphabet_size {
                let extended = v * alphabet_size + x;
                if j + 1 < k {
                    out.push(Codeword::null());
                    next.push(offsets[j + 1] + extended);
                } else {
                    out.push(codebook[extended].clone());
                    next.push(0);
                }
            }
        }
    }
    let alphabet = (0..alphabet_size).map(|x| x.to_string()).collect();
    Encoder::with_names(states, alphabet, 0, out, next)
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

/// Calls `f` on every length-`len` word over `0..alphabet` in lexicographic order.
pub(crate) fn for_each_word(alphabet: usize, len: usize, mut f: impl FnMut(&[Symbol])) {
    let mut word = vec![0; len];
    loop {
        f(&word);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            word[i] += 1;
            if word[i] < alphabet {
                break;
            }
            word[i] = 0;
        }
    }
}

/// Base-`radix` digits of `value`, most significant first, padded to `len`.
pub(crate) fn digits(mut value: usize, radix: usize, len: usize) -> Vec<Symbol> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = value % radix;
        value /= radix;
    }
    out
}
