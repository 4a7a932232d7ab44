//! Lossy extension: a block quantizer followed by a lossless finite-state
//! coder of the reproduction blocks.

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::encoder::{checked_pow, digits, for_each_word, Encoder, Symbol};
use crate::error::{Error, Result};
use crate::kraft::{kraft_matrix, spectral_radius, RHO_TOLERANCE};
use crate::matrix::DyadicMatrix;
use crate::optimize::golden_section_min;
use crate::report::{GKIReport, InequalityRecord, Witness};

/// Slack on `d(x^l, x_hat^l) <= l D` absorbing float rounding in the sum.
pub const DISTORTION_SLACK: f64 = 1e-9;

/// Additive single-letter distortion `d(x, x_hat)`, rows indexed by source
/// letters and columns by reproduction letters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distortion {
    table: Vec<Vec<f64>>,
}

impl Distortion {
    pub fn new(table: Vec<Vec<f64>>) -> Result<Self> {
        let cols = table.first().map_or(0, Vec::len);
        if table.is_empty() || cols == 0 {
            return Err(Error::Schema("distortion table is empty".into()));
        }
        for row in &table {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            if let Some(v) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::InvalidParameter(format!("distortion value {v} is not finite and non-negative")));
            }
        }
        Ok(Distortion { table })
    }

    /// `d(x, x_hat) = [x != x_hat]` on a common alphabet.
    pub fn hamming(alpha: usize) -> Self {
        Distortion {
            table: (0..alpha)
                .map(|x| (0..alpha).map(|y| if x == y { 0.0 } else { 1.0 }).collect())
                .collect(),
        }
    }

    pub fn source_size(&self) -> usize {
        self.table.len()
    }

    pub fn reproduction_size(&self) -> usize {
        self.table[0].len()
    }

    pub fn get(&self, x: Symbol, x_hat: Symbol) -> f64 {
        self.table[x][x_hat]
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    /// `sum_i d(x_i, x_hat_i)`.
    pub fn word(&self, x: &[Symbol], x_hat: &[Symbol]) -> f64 {
        x.iter().zip(x_hat).map(|(&a, &b)| self.table[a][b]).sum()
    }

    fn max_value(&self) -> f64 {
        self.table.iter().flatten().copied().fold(0.0, f64::max)
    }

    fn min_value(&self) -> f64 {
        self.table.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }

    /// Smallest denominator `q <= 64` making every value `q d` an integer.
    fn integer_scale(&self) -> Option<(u64, Vec<Vec<u64>>)> {
        (1..=64u64).find_map(|q| {
            let scaled: Option<Vec<Vec<u64>>> = self
                .table
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&v| {
                            let t = v * q as f64;
                            let r = t.round();
                            ((t - r).abs() <= 1e-9 * r.max(1.0)).then_some(r as u64)
                        })
                        .collect()
                })
                .collect();
            scaled.map(|s| (q, s))
        })
    }
}

fn within(total: f64, ell: usize, level: f64) -> bool {
    total <= ell as f64 * level + DISTORTION_SLACK
}

/// `|{x^l : d(x^l, x_hat^l) <= l D}|` by enumerating the source words.
pub fn ball_size_enumerate(d: &Distortion, x_hat: &[Symbol], level: f64, budget: u64) -> Result<u128> {
    let ell = x_hat.len();
    let words = checked_pow(d.source_size(), ell).filter(|&w| w as u64 <= budget);
    if words.is_none() {
        return Err(Error::BudgetExceeded {
            budget,
            completed_depth: 0,
        });
    }
    let mut count = 0u128;
    for_each_word(d.source_size(), ell, |x| {
        if within(d.word(x, x_hat), ell, level) {
            count += 1;
        }
    });
    Ok(count)
}

/// The same count by dynamic programming over the running distortion,
/// available when every table value is a multiple of `1/q` for some
/// `q <= 64`.
pub fn ball_size_dp(d: &Distortion, x_hat: &[Symbol], level: f64) -> Option<Result<u128>> {
    let (q, scaled) = d.integer_scale()?;
    let ell = x_hat.len();
    let limit = ell as f64 * level * q as f64 + DISTORTION_SLACK * q as f64;
    if limit < 0.0 {
        return Some(Ok(0));
    }
    let per_letter_max = scaled.iter().flatten().copied().max().unwrap_or(0);
    let cap = (limit.floor() as u64).min(per_letter_max * ell as u64) as usize;
    let mut ways = vec![0u128; cap + 1];
    ways[0] = 1;
    for &y in x_hat {
        let mut next = vec![0u128; cap + 1];
        for (t, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for row in &scaled {
                let u = t + row[y] as usize;
                if u <= cap {
                    next[u] = match next[u].checked_add(w) {
                        Some(v) => v,
                        None => return Some(Err(Error::Overflow("ball size"))),
                    };
                }
            }
        }
        ways = next;
    }
    let mut total = 0u128;
    for w in ways {
        total = match total.checked_add(w) {
            Some(v) => v,
            None => return Some(Err(Error::Overflow("ball size"))),
        };
    }
    Some(Ok(total))
}

/// Ball size by enumeration when `alpha^l` fits in `budget`, by dynamic
/// programming otherwise.
pub fn ball_size(d: &Distortion, x_hat: &[Symbol], level: f64, budget: u64) -> Result<u128> {
    if x_hat.iter().any(|&y| y >= d.reproduction_size()) {
        return Err(Error::SymbolOutOfRange {
            symbol: *x_hat.iter().max().unwrap_or(&0),
            alphabet: d.reproduction_size(),
        });
    }
    match ball_size_enumerate(d, x_hat, level, budget) {
        Err(Error::BudgetExceeded { .. }) => ball_size_dp(d, x_hat, level).unwrap_or(Err(Error::BudgetExceeded {
            budget,
            completed_depth: 0,
        })),
        other => other,
    }
}

/// Non-decreasing words of length `ell` over `0..b`, i.e. one representative
/// per multiset.
fn multisets(b: usize, ell: usize) -> Vec<Vec<Symbol>> {
    fn rec(b: usize, ell: usize, start: usize, cur: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
        if cur.len() == ell {
            out.push(cur.clone());
            return;
        }
        for y in start..b {
            cur.push(y);
            rec(b, ell, y, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(b, ell, 0, &mut Vec::with_capacity(ell), &mut out);
    out
}

/// `B_l = max_{x_hat^l} |ball(x_hat^l)|` with a maximizing reproduction word.
/// The ball size of an additive distortion depends only on the letter
/// multiset of `x_hat^l`, so one word per multiset is examined.
pub fn b_ell(d: &Distortion, ell: usize, level: f64, budget: u64) -> Result<(u128, Vec<Symbol>)> {
    let mut best = (0u128, vec![0; ell]);
    for w in multisets(d.reproduction_size(), ell) {
        let size = ball_size(d, &w, level, budget)?;
        if size > best.0 {
            best = (size, w);
        }
    }
    Ok(best)
}

/// Block quantizer `Q: X^l -> X_hat^l` at distortion level `D`. Words are
/// indexed lexicographically (most significant letter first).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantizer {
    pub block_length: usize,
    pub distortion: Distortion,
    pub level: f64,
    /// `map[i]` is the index of `Q(x^l)` for the source word of index `i`.
    pub map: Vec<usize>,
    #[serde(skip)]
    names: (Vec<String>, Vec<String>),
}

/// JSON form; `map` lists explicit block images, `codebook` asks for the
/// nearest codeword (first on ties).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizerDocument {
    pub block_length: usize,
    pub source_alphabet: Vec<String>,
    pub reproduction_alphabet: Vec<String>,
    pub distortion: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    pub level: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<BlockImage>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codebook: Option<Vec<Vec<Symbol>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockImage {
    pub input: Vec<Symbol>,
    pub output: Vec<Symbol>,
}

fn word_index(w: &[Symbol], radix: usize) -> usize {
    w.iter().fold(0, |acc, &s| acc * radix + s)
}

impl Quantizer {
    /// Validates `d(x^l, Q(x^l)) <= l D` for every source block.
    pub fn new(block_length: usize, distortion: Distortion, level: f64, map: Vec<usize>) -> Result<Self> {
        if block_length == 0 {
            return Err(Error::InvalidParameter("block length must be positive".into()));
        }
        if !(level >= 0.0) {
            return Err(Error::InvalidParameter(format!("distortion level {level} must be non-negative")));
        }
        let (a, b) = (distortion.source_size(), distortion.reproduction_size());
        let inputs = checked_pow(a, block_length).ok_or(Error::Overflow("source blocks"))?;
        let outputs = checked_pow(b, block_length).ok_or(Error::Overflow("reproduction blocks"))?;
        if map.len() != inputs {
            return Err(Error::DimensionMismatch {
                expected: inputs,
                got: map.len(),
            });
        }
        for (i, &o) in map.iter().enumerate() {
            if o >= outputs {
                return Err(Error::SymbolOutOfRange {
                    symbol: o,
                    alphabet: outputs,
                });
            }
            let x = digits(i, a, block_length);
            let y = digits(o, b, block_length);
            if !within(distortion.word(&x, &y), block_length, level) {
                return Err(Error::InvalidParameter(format!(
                    "block {x:?} maps to {y:?} with distortion above l*D = {}",
                    block_length as f64 * level
                )));
            }
        }
        let names = (
            (0..a).map(|i| i.to_string()).collect(),
            (0..b).map(|i| i.to_string()).collect(),
        );
        Ok(Quantizer {
            block_length,
            distortion,
            level,
            map,
            names,
        })
    }

    /// Maps every block to its nearest codeword under `d` (first on ties).
    pub fn nearest_codeword(block_length: usize, distortion: Distortion, level: f64, codebook: &[Vec<Symbol>]) -> Result<Self> {
        if codebook.is_empty() {
            return Err(Error::Schema("codebook is empty".into()));
        }
        let (a, b) = (distortion.source_size(), distortion.reproduction_size());
        for c in codebook {
            if c.len() != block_length {
                return Err(Error::DimensionMismatch {
                    expected: block_length,
                    got: c.len(),
                });
            }
            if let Some(&bad) = c.iter().find(|&&y| y >= b) {
                return Err(Error::SymbolOutOfRange { symbol: bad, alphabet: b });
            }
        }
        let inputs = checked_pow(a, block_length).ok_or(Error::Overflow("source blocks"))?;
        let map = (0..inputs)
            .map(|i| {
                let x = digits(i, a, block_length);
                let mut best = 0;
                for (j, c) in codebook.iter().enumerate() {
                    if distortion.word(&x, c) < distortion.word(&x, &codebook[best]) {
                        best = j;
                    }
                }
                word_index(&codebook[best], b)
            })
            .collect();
        Quantizer::new(block_length, distortion, level, map)
    }

    /// `Q(x^l) = x^l` on a common alphabet.
    pub fn identity(block_length: usize, distortion: Distortion, level: f64) -> Result<Self> {
        let inputs = checked_pow(distortion.source_size(), block_length).ok_or(Error::Overflow("source blocks"))?;
        Quantizer::new(block_length, distortion, level, (0..inputs).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: QuantizerDocument = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let distortion = Distortion::new(doc.distortion)?;
        if distortion.source_size() != doc.source_alphabet.len()
            || distortion.reproduction_size() != doc.reproduction_alphabet.len()
        {
            return Err(Error::Schema("distortion table does not match the alphabets".into()));
        }
        let l = doc.block_length;
        let mut q = match (doc.map, doc.codebook) {
            (Some(images), None) => {
                let (a, b) = (distortion.source_size(), distortion.reproduction_size());
                let inputs = checked_pow(a, l).ok_or(Error::Overflow("source blocks"))?;
                let mut map = vec![None; inputs];
                for img in &images {
                    if img.input.len() != l || img.output.len() != l {
                        return Err(Error::Schema(format!("block image {:?} has the wrong length", img.input)));
                    }
                    if let Some(&bad) = img.input.iter().find(|&&x| x >= a) {
                        return Err(Error::SymbolOutOfRange { symbol: bad, alphabet: a });
                    }
                    if let Some(&bad) = img.output.iter().find(|&&y| y >= b) {
                        return Err(Error::SymbolOutOfRange { symbol: bad, alphabet: b });
                    }
                    let slot = &mut map[word_index(&img.input, a)];
                    if slot.is_some() {
                        return Err(Error::Schema(format!("block {:?} is mapped twice", img.input)));
                    }
                    *slot = Some(word_index(&img.output, b));
                }
                let map = map
                    .into_iter()
                    .enumerate()
                    .map(|(i, m)| m.ok_or_else(|| Error::Schema(format!("block {:?} has no image", digits(i, a, l)))))
                    .collect::<Result<Vec<_>>>()?;
                Quantizer::new(l, distortion, doc.level, map)?
            }
            (None, Some(book)) => Quantizer::nearest_codeword(l, distortion, doc.level, &book)?,
            _ => return Err(Error::Schema("exactly one of `map` and `codebook` is required".into())),
        };
        q.names = (doc.source_alphabet, doc.reproduction_alphabet);
        Ok(q)
    }

    pub fn to_json(&self) -> String {
        let (a, b) = (self.distortion.source_size(), self.distortion.reproduction_size());
        let images = self
            .map
            .iter()
            .enumerate()
            .map(|(i, &o)| BlockImage {
                input: digits(i, a, self.block_length),
                output: digits(o, b, self.block_length),
            })
            .collect();
        let doc = QuantizerDocument {
            block_length: self.block_length,
            source_alphabet: self.names.0.clone(),
            reproduction_alphabet: self.names.1.clone(),
            distortion: self.distortion.table.clone(),
            level: self.level,
            map: Some(images),
            codebook: None,
        };
        serde_json::to_string_pretty(&doc).expect("document serializes")
    }

    /// Number of reproduction blocks, the coder's alphabet size.
    pub fn reproduction_blocks(&self) -> usize {
        checked_pow(self.distortion.reproduction_size(), self.block_length).unwrap_or(usize::MAX)
    }

    /// Largest preimage `|Q^{-1}(x_hat^l)|`.
    pub fn max_preimage(&self) -> u64 {
        let mut counts = vec![0u64; self.reproduction_blocks()];
        for &o in &self.map {
            counts[o] += 1;
        }
        counts.into_iter().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossyKraft {
    /// `K[z][z'] = sum over {x^l : g(z, Q(x^l)) = z'} of 2^{-L[f(z, Q(x^l))]}`.
    pub k: DyadicMatrix,
    /// Kraft matrix of the coder over reproduction blocks.
    pub k_hat: DyadicMatrix,
    pub b_ell: u128,
    /// Reproduction block attaining `b_ell`.
    pub b_ell_word: Vec<Symbol>,
    /// `K <= B_l K_hat` entrywise.
    pub dominated: bool,
}

fn check_coder(q: &Quantizer, e: &Encoder) -> Result<()> {
    if e.alphabet_size() != q.reproduction_blocks() {
        return Err(Error::DimensionMismatch {
            expected: q.reproduction_blocks(),
            got: e.alphabet_size(),
        });
    }
    Ok(())
}

/// Builds `K` by summing over source blocks, `K_hat` from the coder alone,
/// and checks `K <= B_l K_hat` exactly.
pub fn lossy_kraft_matrix(q: &Quantizer, e: &Encoder, budget: u64) -> Result<LossyKraft> {
    check_coder(q, e)?;
    if (q.map.len() as u64).saturating_mul(e.state_count() as u64) > budget {
        return Err(Error::BudgetExceeded {
            budget,
            completed_depth: 0,
        });
    }
    let s = e.state_count();
    let mut k = DyadicMatrix::zeros(s);
    for z in 0..s {
        for &y in &q.map {
            k.add_to(z, e.next_state(z, y), &Dyadic::pow2_neg(e.output(z, y).len() as u64));
        }
    }
    let k_hat = kraft_matrix(e);
    let (b, word) = b_ell(&q.distortion, q.block_length, q.level, budget)?;
    let b64 = u64::try_from(b).map_err(|_| Error::Overflow("B_l"))?;
    let dominated = k.dominated_by(&k_hat.scale_u64(b64));
    Ok(LossyKraft {
        k,
        k_hat,
        b_ell: b,
        b_ell_word: word,
        dominated,
    })
}

/// `log2 sum_x 2^{-lambda d(x, y)}`, maximized over reproduction letters `y`.
fn worst_log_partition(d: &Distortion, lambda: f64) -> f64 {
    (0..d.reproduction_size())
        .map(|y| {
            let m = (0..d.source_size()).map(|x| d.get(x, y)).fold(f64::INFINITY, f64::min);
            let rest: f64 = (0..d.source_size()).map(|x| (-lambda * (d.get(x, y) - m)).exp2()).sum();
            -lambda * m + rest.log2()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `Phi(D) = max H(X | X_hat)` in bits over joint distributions with
/// `E d(X, X_hat) <= D`, via its Lagrangian dual
/// `min_{lambda >= 0} [lambda D + max_y log2 sum_x 2^{-lambda d(x, y)}]`.
pub fn phi_of_d(d: &Distortion, level: f64) -> Result<f64> {
    if !(level >= d.min_value() - DISTORTION_SLACK) {
        return Err(Error::Infeasible(level));
    }
    let log_a = (d.source_size() as f64).log2();
    if level >= d.max_value() {
        return Ok(log_a);
    }
    let dual = |lambda: f64| lambda * level + worst_log_partition(d, lambda);
    // expand until the convex dual turns upward
    let mut hi = 1.0;
    while hi < 1e6 && dual(2.0 * hi) < dual(hi) {
        hi *= 2.0;
    }
    let (_, value) = golden_section_min(dual, 0.0, 2.0 * hi, 1e-12);
    Ok(value.min(dual(0.0)).clamp(0.0, log_a))
}

/// Chained check `rho(K_hat) <= 1`, `K <= B_l K_hat`, `rho(K) <= B_l` and
/// `B_l <= 2^{l Phi(D)}`.
pub fn lossy_gki_check(q: &Quantizer, e: &Encoder, budget: u64) -> Result<GKIReport> {
    let lk = lossy_kraft_matrix(q, e, budget)?;
    let ell = q.block_length as u64;
    let b = lk.b_ell as f64;
    let mut report = GKIReport::default();

    let rho_hat = spectral_radius(&lk.k_hat.to_float())?.rho;
    report.push(InequalityRecord::float("reproduction_spectral_radius_at_most_one", rho_hat, 1.0, RHO_TOLERANCE));

    let b64 = u64::try_from(lk.b_ell).map_err(|_| Error::Overflow("B_l"))?;
    let scaled = lk.k_hat.scale_u64(b64);
    let s = lk.k.dim();
    let mut pick = (0, 0);
    let mut found_violation = false;
    for r in 0..s {
        for c in 0..s {
            if lk.k.get(r, c) > scaled.get(r, c) {
                pick = (r, c);
                found_violation = true;
                break;
            }
            if lk.k.get(r, c) > lk.k.get(pick.0, pick.1) {
                pick = (r, c);
            }
        }
        if found_violation {
            break;
        }
    }
    report.push(
        InequalityRecord::exact(
            "lossy_kraft_dominated",
            lk.k.get(pick.0, pick.1).clone(),
            scaled.get(pick.0, pick.1).clone(),
        )
        .with_witness(Witness::Entry { row: pick.0, col: pick.1 })
        .with_note(if lk.dominated { "every entry" } else { "first violating entry" }),
    );

    let rho = spectral_radius(&lk.k.to_float())?.rho;
    report.push(InequalityRecord::float("lossy_spectral_radius_at_most_ball", rho, b, RHO_TOLERANCE).at(ell));

    let phi = phi_of_d(&q.distortion, q.level)?;
    report.push(
        InequalityRecord::float("ball_at_most_phi_exponent", b, (ell as f64 * phi).exp2(), 1e-9)
            .at(ell)
            .with_witness(Witness::Word(lk.b_ell_word.clone()))
            .with_note("expected-distortion constraint"),
    );
    Ok(report)
}
