//! Joint spectral radius brackets and common sub-invariant vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{family_product_float, FloatFamily, KraftFamily};
use crate::dyadic::Dyadic;
use crate::encoder::digits;
use crate::kraft::spectral_radius;
use crate::matrix::DEFAULT_BIT_BUDGET;

#[derive(Clone, Debug, PartialEq)]
pub struct JsrOptions {
    pub max_depth: usize,
    /// Cap on the total number of enumerated words.
    pub budget: u64,
    /// Random words tried for the lower bound when the budget cuts the depth.
    pub samples: usize,
    pub sample_max_len: usize,
    pub seed: u64,
}

impl Default for JsrOptions {
    fn default() -> Self {
        JsrOptions {
            max_depth: 8,
            budget: crate::DEFAULT_BUDGET,
            samples: 10_000,
            sample_max_len: 64,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JSRBracket {
    pub lower: f64,
    pub upper: f64,
    /// Deepest word length enumerated exhaustively.
    pub depth: usize,
    /// Word `w^n` with `rho(K(w^n))^{1/n} = lower`.
    pub lower_word: Vec<usize>,
    /// Word length at which `max ||K(w^n)||^{1/n}` attains `upper`.
    pub upper_depth: usize,
    pub norm: String,
    pub sampled_words: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// `(rho(K(w))^{1/n}, ||K(w)||^{1/n})`, or `None` when the spectral radius
/// does not converge.
fn word_rates(fam: &FloatFamily, word: &[usize]) -> Option<(f64, f64)> {
    let n = word.len();
    let p = family_product_float(fam, word).ok()?;
    let rho = spectral_radius(&p.matrix).ok()?.rho;
    let lower = if rho == 0.0 {
        0.0
    } else {
        ((rho.log2() + p.log2_scale) / n as f64).exp2()
    };
    Some((lower, p.norm_root(n)))
}

/// Brackets the joint spectral radius of a family:
/// `lower = max_w rho(K(w^n))^{1/n}` over enumerated (and sampled) words,
/// `upper = min_n max_{w^n} ||K(w^n)||_inf^{1/n}`.
pub fn jsr_bracket(fam: &FloatFamily, opts: &JsrOptions) -> JSRBracket {
    let b = fam.len();
    let mut warnings = Vec::new();
    let mut lower = 0.0f64;
    let mut lower_word = Vec::new();
    let mut upper = f64::INFINITY;
    let mut upper_depth = 0;
    let mut depth = 0;
    let mut spent: u64 = 0;
    let mut skipped = 0usize;

    for n in 1..=opts.max_depth {
        let count = (b as u64).checked_pow(n as u32);
        let affordable = count.and_then(|c| spent.checked_add(c)).filter(|&t| t <= opts.budget);
        let Some(total) = affordable else {
            warnings.push(format!("enumeration budget reached; depth reduced from {} to {}", opts.max_depth, n - 1));
            break;
        };
        spent = total;
        let count = count.unwrap_or(0) as usize;
        let rates: Vec<Option<(f64, f64)>> = (0..count)
            .into_par_iter()
            .map(|i| word_rates(fam, &digits(i, b, n)))
            .collect();
        let mut worst_norm = 0.0f64;
        for (i, r) in rates.iter().enumerate() {
            match r {
                Some((lo, nr)) => {
                    if *lo > lower {
                        lower = *lo;
                        lower_word = digits(i, b, n);
                    }
                    worst_norm = worst_norm.max(*nr);
                }
                None => {
                    skipped += 1;
                    worst_norm = f64::INFINITY;
                }
            }
        }
        if worst_norm < upper {
            upper = worst_norm;
            upper_depth = n;
        }
        depth = n;
    }

    let mut sampled_words = 0;
    if depth < opts.max_depth && opts.samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let words: Vec<Vec<usize>> = (0..opts.samples)
            .map(|_| {
                let len = rng.gen_range(1..=opts.sample_max_len.max(1));
                (0..len).map(|_| rng.gen_range(0..b)).collect()
            })
            .collect();
        let rates: Vec<Option<(f64, f64)>> = words.par_iter().map(|w| word_rates(fam, w)).collect();
        for (w, r) in words.into_iter().zip(rates) {
            match r {
                Some((lo, _)) if lo > lower => {
                    lower = lo;
                    lower_word = w;
                }
                Some(_) => {}
                None => skipped += 1,
            }
        }
        sampled_words = opts.samples;
    }
    if skipped > 0 {
        warnings.push(format!("{skipped} products skipped: spectral radius did not converge"));
    }
    JSRBracket {
        lower,
        upper,
        depth,
        lower_word,
        upper_depth,
        norm: "infinity".into(),
        sampled_words,
        warnings,
    }
}

/// Outcome of the sub-invariant vector search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SubInvariant {
    /// `K(w) v <= v` exactly for every `w`.
    Exact { vector: Vec<Dyadic>, iterations: usize },
    /// `K(w) v <= v (1 + 1e-12)` for every `w`.
    Float { vector: Vec<f64>, iterations: usize },
    /// Inconclusive: no vector was found.
    NoneFound { iterations: usize, reason: String },
}

impl SubInvariant {
    pub fn vector(&self) -> Option<Vec<f64>> {
        match self {
            SubInvariant::Exact { vector, .. } => Some(vector.iter().map(Dyadic::to_f64).collect()),
            SubInvariant::Float { vector, .. } => Some(vector.clone()),
            SubInvariant::NoneFound { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        !matches!(self, SubInvariant::NoneFound { .. })
    }
}

const FLOAT_TOLERANCE: f64 = 1e-12;
const EXACT_ROUNDS: usize = 64;

/// Float search shared by both entry points, starting from `v`.
fn float_search(fam: &FloatFamily, mut v: Vec<f64>, cap: f64, first: usize, max_iter: usize) -> SubInvariant {
    for it in first..=max_iter {
        let mut next = v.clone();
        for k in &fam.matrices {
            for (a, b) in next.iter_mut().zip(k.mul_vec(&v)) {
                *a = a.max(b);
            }
        }
        if next.iter().any(|&x| x > cap) {
            return SubInvariant::NoneFound {
                iterations: it,
                reason: format!("iterate exceeded cap {cap}"),
            };
        }
        let settled = next.iter().zip(&v).all(|(a, b)| *a <= b * (1.0 + FLOAT_TOLERANCE));
        if settled {
            return SubInvariant::Float { vector: v, iterations: it };
        }
        v = next;
    }
    SubInvariant::NoneFound {
        iterations: max_iter,
        reason: "no fixed point within the iteration limit".into(),
    }
}

fn float_cap(s: usize, l_max: u64) -> f64 {
    s as f64 * ((s as f64 - 1.0) * l_max as f64).exp2()
}

/// Searches for `v > 0` with `K(w) v <= v` for all `w` by iterating
/// `v <- max(v, max_w K(w) v)` from the all-ones vector. Iterates above
/// `s 2^{(s-1) L_max}` end the search without a vector.
pub fn find_subinvariant_vector(fam: &KraftFamily, max_iter: usize) -> SubInvariant {
    let s = fam.dim();
    if fam.matrices.iter().all(|k| k.row_sums().iter().all(|r| *r <= Dyadic::one())) {
        return SubInvariant::Exact {
            vector: vec![Dyadic::one(); s],
            iterations: 0,
        };
    }
    let cap = Dyadic::pow2((s as u64 - 1) * fam.l_max).mul_u64(s as u64);
    let mut v = vec![Dyadic::one(); s];
    let exact_rounds = max_iter.min(EXACT_ROUNDS);
    for it in 1..=exact_rounds {
        let mut next = v.clone();
        for k in &fam.matrices {
            for (a, b) in next.iter_mut().zip(k.mul_vec(&v)) {
                if b > *a {
                    *a = b;
                }
            }
        }
        if next == v {
            return SubInvariant::Exact { vector: v, iterations: it };
        }
        if next.iter().any(|x| *x > cap) {
            return SubInvariant::NoneFound {
                iterations: it,
                reason: format!("iterate exceeded cap {cap}"),
            };
        }
        let too_wide = next.iter().any(|x| x.bits() > DEFAULT_BIT_BUDGET);
        v = next;
        if too_wide {
            break;
        }
    }
    let start = v.iter().map(Dyadic::to_f64).collect();
    float_search(&fam.to_float(), start, cap.to_f64(), exact_rounds + 1, max_iter)
}

/// Float-family variant; the cap uses `L_max = ceil(-log2(min positive entry))`.
pub fn find_subinvariant_vector_float(fam: &FloatFamily, max_iter: usize) -> SubInvariant {
    let s = fam.dim();
    if fam.matrices.iter().all(|k| k.rows().iter().all(|r| r.iter().sum::<f64>() <= 1.0)) {
        return SubInvariant::Float {
            vector: vec![1.0; s],
            iterations: 0,
        };
    }
    let min_pos = fam
        .matrices
        .iter()
        .flat_map(|k| k.data().iter().copied())
        .filter(|&x| x > 0.0)
        .fold(f64::INFINITY, f64::min);
    let l_max = if min_pos.is_finite() {
        (-min_pos.log2()).ceil().max(0.0) as u64
    } else {
        0
    };
    float_search(fam, vec![1.0; s], float_cap(s, l_max), 1, max_iter)
}
