//! Seeded random generators for encoders, codes, matrices and sequences.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::converse::{LossFunction, PredictorSpec};
use crate::encoder::{Codeword, Encoder, Symbol};
use crate::matrix::FloatMatrix;
use crate::si::SIEncoder;

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for item `index` of a corpus seeded by `seed`, so
/// parallel consumers see the same items regardless of scheduling.
pub fn item_rng(seed: u64, index: u64) -> CorpusRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

/// Random prefix code with `k` codewords of length at most `max_len`: leaves
/// of a random binary tree, some of them pushed deeper so the code is not
/// always complete. A single codeword may be empty.
pub fn random_prefix_code(rng: &mut impl Rng, k: usize, max_len: usize) -> Vec<Codeword> {
    assert!(k >= 1 && (k == 1 || (max_len < usize::BITS as usize && (1usize << max_len) >= k)));
    let mut leaves: Vec<Vec<bool>> = vec![Vec::new()];
    while leaves.len() < k {
        let splittable: Vec<usize> = (0..leaves.len()).filter(|&i| leaves[i].len() < max_len).collect();
        let i = *splittable.choose(rng).expect("max_len admits k leaves");
        let leaf = leaves.swap_remove(i);
        let mut left = leaf.clone();
        left.push(false);
        let mut right = leaf;
        right.push(true);
        leaves.push(left);
        leaves.push(right);
    }
    for leaf in &mut leaves {
        while leaf.len() < max_len && rng.gen_bool(0.2) {
            leaf.push(rng.gen());
        }
    }
    leaves.shuffle(rng);
    leaves.into_iter().map(Codeword::from_bits).collect()
}

/// Random codeword (not part of any code) of length `0..=max_len`.
pub fn random_codeword(rng: &mut impl Rng, max_len: usize) -> Codeword {
    let len = rng.gen_range(0..=max_len);
    Codeword::from_bits((0..len).map(|_| rng.gen()).collect())
}

fn random_next(rng: &mut impl Rng, s: usize, a: usize, irreducible: bool) -> Vec<usize> {
    let mut next: Vec<usize> = (0..s * a).map(|_| rng.gen_range(0..s)).collect();
    if irreducible && s > 1 {
        // a random Hamiltonian cycle makes the state graph strongly connected
        let mut order: Vec<usize> = (0..s).collect();
        order.shuffle(rng);
        for i in 0..s {
            let z = order[i];
            let x = rng.gen_range(0..a);
            next[z * a + x] = order[(i + 1) % s];
        }
    }
    next
}

/// Encoder whose outputs from every state form a prefix code; such an
/// encoder is information lossless.
pub fn per_state_prefix_encoder(rng: &mut impl Rng, s: usize, a: usize, max_len: usize, irreducible: bool) -> Encoder {
    let out = (0..s).flat_map(|_| random_prefix_code(rng, a, max_len)).collect();
    let next = random_next(rng, s, a, irreducible);
    Encoder::new(s, a, 0, out, next).expect("well-formed tables")
}

/// Encoder with arbitrary outputs, usually not information lossless.
pub fn random_encoder(rng: &mut impl Rng, s: usize, a: usize, max_len: usize, irreducible: bool) -> Encoder {
    let out = (0..s * a).map(|_| random_codeword(rng, max_len)).collect();
    let next = random_next(rng, s, a, irreducible);
    Encoder::new(s, a, 0, out, next).expect("well-formed tables")
}

/// Side-information encoder with a separate prefix code for every `(z, w)`.
pub fn per_state_si_prefix_encoder(rng: &mut impl Rng, s: usize, a: usize, b: usize, max_len: usize) -> SIEncoder {
    let mut out = vec![Codeword::null(); s * a * b];
    let mut next = vec![0; s * a * b];
    for z in 0..s {
        for w in 0..b {
            let book = random_prefix_code(rng, a, max_len);
            for x in 0..a {
                out[(z * a + x) * b + w] = book[x].clone();
                next[(z * a + x) * b + w] = rng.gen_range(0..s);
            }
        }
    }
    SIEncoder::new(s, a, b, 0, out, next).expect("well-formed tables")
}

/// Float Kraft matrix of a random irreducible encoder (arbitrary outputs).
pub fn random_irreducible_kraft_matrix(rng: &mut impl Rng, s: usize, a: usize, max_len: usize) -> FloatMatrix {
    crate::kraft::kraft_matrix(&random_encoder(rng, s, a, max_len, true)).to_float()
}

pub fn bernoulli_sequence(rng: &mut impl Rng, n: usize, p: f64) -> Vec<Symbol> {
    (0..n).map(|_| usize::from(rng.gen_bool(p))).collect()
}

pub fn uniform_sequence(rng: &mut impl Rng, n: usize, a: usize) -> Vec<Symbol> {
    (0..n).map(|_| rng.gen_range(0..a)).collect()
}

/// Sequence from a random first-order Markov chain, giving some memory.
pub fn markov_sequence(rng: &mut impl Rng, n: usize, a: usize) -> Vec<Symbol> {
    let stay: Vec<f64> = (0..a).map(|_| rng.gen_range(0.5..0.95)).collect();
    let mut x = Vec::with_capacity(n);
    let mut cur = rng.gen_range(0..a);
    for _ in 0..n {
        x.push(cur);
        if !rng.gen_bool(stay[cur]) {
            cur = rng.gen_range(0..a);
        }
    }
    x
}

/// Loss with `rho(0) = 0` and other values uniform in `(0, 2]`.
pub fn random_loss(rng: &mut impl Rng, a: usize) -> LossFunction {
    let values = (0..a).map(|e| if e == 0 { 0.0 } else { rng.gen_range(0.01..=2.0) }).collect();
    LossFunction::new(values).expect("non-negative values")
}

pub fn random_predictor(rng: &mut impl Rng, q: usize, a: usize) -> PredictorSpec {
    let predict = (0..q * a).map(|_| rng.gen_range(0..a)).collect();
    let next = (0..q * a).map(|_| rng.gen_range(0..q)).collect();
    PredictorSpec::new(q, a, 0, rng.gen_range(0..a), predict, next).expect("well-formed tables")
}
