//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::HashMap;
use std::time::Instant;

use kraftlab::converse::{
    default_epsilon, delta_function, empirical_cond_entropy, empirical_joint, empirical_windows,
    individual_rate_bound, lz78_parse, lz_rate_bound_min, partition_function, predictive_code_length, BaseRegime,
    EPSILON_MODEL_NOTE,
};
use kraftlab::corpus::{self, item_rng};
use kraftlab::encoder::{check_il, check_il_from};
use kraftlab::kraft::{
    collatz_wielandt, gki_check, kraft_matrix, matrix_power, min_state_kraft_sum, perron_vectors, spectral_radius,
    zl_baseline, Bound,
};
use kraftlab::lossy::{
    b_ell, ball_size_dp, ball_size_enumerate, lossy_gki_check, phi_of_d, Distortion, Quantizer,
};
use kraftlab::matrix::DEFAULT_BIT_BUDGET;
use kraftlab::si::{
    family_product, find_subinvariant_vector, jsr_bracket, kraft_family, FloatFamily, JsrOptions, SubInvariant,
};
use kraftlab::{Codeword, Dyadic, DyadicMatrix, Encoder, FloatMatrix, DEFAULT_BUDGET};
use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;

const SEED: u64 = 1;

const EXAMPLE1: &str = r#"{
    "alphabet": ["0", "1"],
    "states": ["S", "O", "I"],
    "initial": "S",
    "transitions": [
        {"state": "S", "symbol": "0", "output": "",   "next": "O"},
        {"state": "S", "symbol": "1", "output": "11", "next": "I"},
        {"state": "O", "symbol": "0", "output": "0",  "next": "S"},
        {"state": "O", "symbol": "1", "output": "10", "next": "S"},
        {"state": "I", "symbol": "0", "output": "0",  "next": "S"},
        {"state": "I", "symbol": "1", "output": "1",  "next": "S"}
    ]
}"#;

fn example1() -> Encoder {
    Encoder::from_json(EXAMPLE1).unwrap()
}

fn d(m: u64, e: u64) -> Dyadic {
    Dyadic::new(BigUint::from(m), e)
}

fn matrix(rows: &[[(u64, u64); 3]]) -> DyadicMatrix {
    DyadicMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(m, e)| d(m, e)).collect()).collect()).unwrap()
}

fn h2(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let e = example1();
    let k = kraft_matrix(&e);
    let expected = matrix(&[[(0, 0), (1, 0), (1, 2)], [(3, 2), (0, 0), (0, 0)], [(1, 0), (0, 0), (0, 0)]]);
    ensure(k == expected, || format!("K = {k:?}"))?;
    let rho = spectral_radius(&k.to_float()).map_err(|e| e.to_string())?.rho;
    ensure((rho - 1.0).abs() <= 1e-9, || format!("rho = {rho}"))?;
    let k100 = matrix_power(&k, 100, DEFAULT_BIT_BUDGET).map_err(|e| e.to_string())?;
    let expected = matrix(&[[(1, 0), (0, 0), (0, 0)], [(0, 0), (3, 2), (3, 4)], [(0, 0), (1, 0), (1, 2)]]);
    ensure(k100 == expected, || format!("K^100 = {k100:?}"))?;
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.3} s"))?;
    Ok(format!("K, rho = {rho}, K^100 exact in {secs:.3} s"))
}

fn criterion_2() -> Outcome {
    let failures: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = item_rng(SEED, 2_000 + i);
            let k = rng.gen_range(1..=16);
            let book = corpus::random_prefix_code(&mut rng, k, 8);
            let e = Encoder::new(1, k, 0, book.clone(), vec![0; k]).unwrap();
            // sum 2^{-L} as an integer over 2^8
            let num: u64 = book.iter().map(|c| 1u64 << (8 - c.len())).sum();
            let sum = d(num, 8);
            let entry = kraft_matrix(&e).get(0, 0).clone();
            let rho = spectral_radius(&kraft_matrix(&e).to_float()).ok()?.rho;
            let report = gki_check(&e, &[1, 2, 3]).ok()?;
            let scalar_ok = sum <= Dyadic::one();
            let ok = entry == sum && rho == sum.to_f64() && report.all_hold() == scalar_ok && scalar_ok;
            (!ok).then(|| format!("code {i}: {book:?}"))
        })
        .collect();
    ensure(failures.is_empty(), || format!("{} failures, first {}", failures.len(), failures[0]))?;
    Ok("1000 prefix codes, rho = Kraft sum exactly, 0 failures".into())
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let failures: Vec<String> = (0..500u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = item_rng(SEED, 3_000 + i);
            let s = rng.gen_range(1..=5);
            let a = rng.gen_range(2..=4);
            let e = corpus::per_state_prefix_encoder(&mut rng, s, a, 5, i % 2 == 0);
            let k = kraft_matrix(&e);
            let rho = spectral_radius(&k.to_float()).ok()?.rho;
            if rho > 1.0 + 1e-9 {
                return Some(format!("encoder {i}: rho = {rho}"));
            }
            let (s64, l_max) = (s as u64, e.l_max());
            let cap = Dyadic::pow2((s64 - 1) * l_max);
            let irreducible = e.is_irreducible();
            let mut p = DyadicMatrix::identity(s);
            for n in 1..=50u64 {
                p = p.mul(&k);
                if n <= 20 {
                    let limit = Dyadic::from_u64(s64 * (1 + n * l_max));
                    if p.row_sums().iter().any(|r| r > &limit) {
                        return Some(format!("encoder {i}: row sum of K^{n} above s(1+nL)"));
                    }
                }
                if irreducible && p.entries().iter().any(|x| x > &cap) {
                    return Some(format!("encoder {i}: entry of K^{n} above 2^((s-1)L)"));
                }
            }
            None
        })
        .collect();
    let secs = t.elapsed().as_secs_f64();
    ensure(failures.is_empty(), || format!("{} failures, first {}", failures.len(), failures[0]))?;
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("500 per-state prefix encoders, 0 failures in {secs:.2} s"))
}

/// Shallowest depth at which two inputs from `z` share output and end state.
fn brute_force_collision_depth(e: &Encoder, z: usize, max_depth: usize) -> Option<usize> {
    let a = e.alphabet_size();
    (1..=max_depth).find(|&n| {
        let mut seen: HashMap<(Vec<bool>, usize), ()> = HashMap::new();
        (0..a.pow(n as u32)).any(|mut idx| {
            let mut word = vec![0; n];
            for slot in word.iter_mut().rev() {
                *slot = idx % a;
                idx /= a;
            }
            let t = e.encode(z, &word).unwrap();
            seen.insert((t.output().bits().to_vec(), t.final_state()), ()).is_some()
        })
    })
}

fn criterion_4() -> Outcome {
    let null = Encoder::new(1, 2, 0, vec![Codeword::null(), Codeword::null()], vec![0, 0]).unwrap();
    let v = check_il(&null, 6, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let depth = v.witness.as_ref().map(|w| w.depth);
    ensure(depth == Some(1), || format!("null/null witness depth {depth:?}"))?;
    let mutated = example1().with_output(1, 1, "0".parse().unwrap());
    let v = check_il(&mutated, 6, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let w = v.witness.clone().ok_or("no witness for the mutated encoder")?;
    ensure(w.depth == 2 && w.state == 0, || format!("mutated witness {w:?}"))?;
    let mut encoders = vec![null, mutated, example1()];
    for i in 0..100u64 {
        let mut rng = item_rng(SEED, 4_000 + i);
        let s = rng.gen_range(1..=3);
        let a = rng.gen_range(2..=3);
        encoders.push(corpus::random_encoder(&mut rng, s, a, 3, false));
    }
    let depth = 5;
    for (i, e) in encoders.iter().enumerate() {
        for z in 0..e.state_count() {
            let fast = check_il_from(e, z, depth).map(|w| w.depth);
            let slow = brute_force_collision_depth(e, z, depth);
            ensure(fast == slow, || format!("encoder {i} state {z}: {fast:?} vs enumeration {slow:?}"))?;
        }
    }
    Ok(format!("depth-1 and depth-2 witnesses; minimal depth matches enumeration on {} encoders", encoders.len()))
}

fn criterion_5() -> Outcome {
    let failures: Vec<String> = (0..200u64)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = item_rng(SEED, 5_000 + i);
            let s = rng.gen_range(2..=6);
            let a = rng.gen_range(2..=3);
            let k = corpus::random_irreducible_kraft_matrix(&mut rng, s, a, 3);
            let rho = spectral_radius(&k).ok()?.rho;
            let tol = 1e-9 * rho.max(1.0);
            for _ in 0..20 {
                let w: Vec<f64> = (0..s).map(|_| rng.gen_range(0.01..1.0)).collect();
                let lo = collatz_wielandt(&k, &w, Bound::Lower).ok()?;
                let hi = collatz_wielandt(&k, &w, Bound::Upper).ok()?;
                if lo > rho + tol || hi < rho - tol {
                    return Some(format!("matrix {i}: {lo} <= {rho} <= {hi} fails"));
                }
            }
            let p = perron_vectors(&k).ok()?;
            let lo = collatz_wielandt(&k, &p.right, Bound::Lower).ok()?;
            let hi = collatz_wielandt(&k, &p.right, Bound::Upper).ok()?;
            if (lo - rho).abs() > 1e-6 || (hi - rho).abs() > 1e-6 {
                return Some(format!("matrix {i}: Perron ratios {lo}, {hi} vs {rho}"));
            }
            None
        })
        .collect();
    ensure(failures.is_empty(), || format!("{} failures, first {}", failures.len(), failures[0]))?;
    for i in 0..100u64 {
        let mut rng = item_rng(SEED, 5_500 + i);
        let s = rng.gen_range(1..=4);
        let a = rng.gen_range(2..=3);
        let e = corpus::per_state_prefix_encoder(&mut rng, s, a, 4, true);
        for ell in 1..=10u32 {
            let k = matrix_power(&kraft_matrix(&e), ell as u64, DEFAULT_BIT_BUDGET).map_err(|e| e.to_string())?;
            let rows = k.row_sums();
            if ell <= 4 {
                // row z of K^l sums 2^{-L} over all l-blocks from z
                for (z, row) in rows.iter().enumerate() {
                    let mut direct = Dyadic::zero();
                    for idx in 0..a.pow(ell) {
                        let word: Vec<usize> = (0..ell).rev().map(|j| idx / a.pow(j) % a).collect();
                        direct += &Dyadic::pow2_neg(e.run_length(z, &word).0);
                    }
                    ensure(&direct == row, || format!("encoder {i}, l = {ell}, state {z}: {direct} vs {row}"))?;
                }
            }
            let min_row = rows.into_iter().min().unwrap();
            ensure(min_row <= Dyadic::one(), || format!("encoder {i}, l = {ell}: min row sum {min_row}"))?;
        }
    }
    Ok("200 matrices x 20 weights bracket rho; Perron ratios within 1e-6; 100 IL encoders have a row sum <= 1 up to l = 10".into())
}

fn criterion_6() -> Outcome {
    let eps: f64 = 0.1;
    let a = FloatMatrix::from_rows(&[vec![eps, 1.0 / eps], vec![0.0, eps]]).unwrap();
    let b = a.transpose();
    let ra = spectral_radius(&a).map_err(|e| e.to_string())?.rho;
    let rb = spectral_radius(&b).map_err(|e| e.to_string())?.rho;
    ensure((ra - eps).abs() <= 1e-12 && (rb - eps).abs() <= 1e-12, || format!("rho(A) = {ra}, rho(B) = {rb}"))?;
    let rab = spectral_radius(&a.mul(&b)).map_err(|e| e.to_string())?.rho;
    let closed = eps * eps + 1.0 / (2.0 * eps * eps) + (1.0 + 1.0 / (4.0 * eps.powi(4))).sqrt();
    ensure((rab - closed).abs() <= 1e-6, || format!("rho(AB) = {rab}, closed form {closed}"))?;
    let fam = FloatFamily::new(vec![a, b], Some(vec!["A".into(), "B".into()])).map_err(|e| e.to_string())?;
    let bracket = jsr_bracket(&fam, &JsrOptions::default());
    ensure(bracket.lower >= rab.sqrt() - 1e-9 && rab.sqrt() > 1.0, || {
        format!("lower {} vs rho(AB)^(1/2) = {}", bracket.lower, rab.sqrt())
    })?;
    let sub = kraftlab::si::find_subinvariant_vector_float(&fam, 1000);
    ensure(!sub.is_found(), || format!("sub-invariant vector reported: {sub:?}"))?;
    for i in 0..20u64 {
        let mut rng = item_rng(SEED, 6_000 + i);
        let s = rng.gen_range(1..=4);
        let (x, w) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
        let fam = kraft_family(&corpus::per_state_si_prefix_encoder(&mut rng, s, x, w, 4));
        match find_subinvariant_vector(&fam, 64) {
            SubInvariant::Exact { vector, .. } if vector.iter().all(|v| *v == Dyadic::one()) => {}
            other => return Err(format!("family {i}: {other:?}")),
        }
        if i == 0 {
            for j in 0..100 {
                let word: Vec<usize> = (0..100).map(|_| rng.gen_range(0..w)).collect();
                let p = family_product(&fam, &word, DEFAULT_BIT_BUDGET).map_err(|e| e.to_string())?;
                ensure(p.row_sums().iter().all(|r| r <= &Dyadic::one()), || format!("product {j} exceeds 1"))?;
            }
        }
    }
    Ok(format!(
        "rho(AB) = {rab:.9}, JSR lower = {:.9} > 1 via {:?}; all-ones certificate on 20 prefix families, 100 products bounded",
        bracket.lower,
        bracket.lower_word
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = corpus::rng(SEED);
    let x = corpus::bernoulli_sequence(&mut rng, 100_000, 0.2);
    let h1 = empirical_cond_entropy(&empirical_windows(&x, 1).map_err(|e| e.to_string())?);
    ensure((h1 - h2(0.2)).abs() <= 0.02, || format!("H(X_1) = {h1}"))?;
    let e = example1();
    let mut prev = f64::INFINITY;
    for ell in 1..=5 {
        let p = empirical_windows(&x, ell).map_err(|e| e.to_string())?;
        let q = empirical_joint(&e, 0, &x, ell).map_err(|e| e.to_string())?;
        ensure(p.is_shift_invariant() && q.is_shift_invariant(), || format!("not shift invariant at l = {ell}"))?;
        let h = empirical_cond_entropy(&p);
        ensure(h <= prev + 1e-12, || format!("entropy rose at l = {ell}: {prev} -> {h}"))?;
        prev = h;
    }
    Ok(format!("H(X_1) = {h1:.5} vs {:.5}; shift invariant and non-increasing for l <= 5", h2(0.2)))
}

fn corpus_sequences() -> Vec<(Encoder, Vec<usize>)> {
    (0..100u64)
        .map(|i| {
            let mut rng = item_rng(SEED, 8_000 + i);
            let s = rng.gen_range(1..=4);
            let a = rng.gen_range(2..=3);
            let e = corpus::per_state_prefix_encoder(&mut rng, s, a, 4, true);
            let n = rng.gen_range(50..=2000);
            let x = match i % 3 {
                0 => corpus::uniform_sequence(&mut rng, n, a),
                1 => corpus::markov_sequence(&mut rng, n, a),
                _ => corpus::bernoulli_sequence(&mut rng, n, 0.1),
            };
            (e, x)
        })
        .collect()
}

fn criterion_8() -> Outcome {
    let e = example1();
    let zeros = vec![0; 1000];
    let rate = e.encode(0, &zeros).map_err(|e| e.to_string())?.total_bits as f64 / 1000.0;
    ensure(rate == 0.5, || format!("rate {rate}"))?;
    let ells: Vec<u64> = (1..=8).collect();
    let b = individual_rate_bound(&e, 0, &zeros, &ells).map_err(|e| e.to_string())?;
    ensure(b.rhs <= 0.5 && b.lhs == 0.5, || format!("lhs {} rhs {}", b.lhs, b.rhs))?;
    let mut violations = 0;
    for (e, x) in corpus_sequences() {
        let b = individual_rate_bound(&e, 0, &x, &ells).map_err(|e| e.to_string())?;
        if b.lhs < b.rhs {
            violations += 1;
        }
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("Example 1 rate 0.5 >= RHS {:.4}; 100-case corpus, 0 violations", b.rhs))
}

fn criterion_9() -> Outcome {
    let mut seqs: Vec<Vec<usize>> = corpus_sequences().into_iter().map(|(_, x)| x).collect();
    seqs.push(vec![0; 10_000]);
    for (i, x) in seqs.iter().enumerate() {
        ensure(lz78_parse(x).phrases.concat() == *x, || format!("sequence {i} does not round-trip"))?;
    }
    let n = 10_000u64;
    let c = lz78_parse(&vec![0; n as usize]).c as u64;
    ensure(c * (c + 1) / 2 <= n && n < (c + 1) * (c + 2) / 2, || format!("c = {c}"))?;
    let b = lz_rate_bound_min(c, n, &[1, 2, 4, 8, 16], 3, 2, default_epsilon, EPSILON_MODEL_NOTE)
        .ok_or("no bound")?;
    ensure(b.note.contains("heuristic"), || "bound not labelled heuristic".into())?;
    Ok(format!("{} round-trips; c(0^10000) = {c}; Ziv bound {:.4} labelled heuristic", seqs.len(), b.bound))
}

fn criterion_10() -> Outcome {
    let mut rng = corpus::rng(SEED + 10);
    let hamming = kraftlab::converse::LossFunction::hamming(2);
    ensure(delta_function(&hamming, 0.0) == 0.0, || "Delta(0) != 0".into())?;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let a = rng.gen_range(2..=5);
        let loss = corpus::random_loss(&mut rng, a);
        ensure(delta_function(&loss, 0.0) == 0.0, || format!("loss {i}: Delta(0) != 0"))?;
        let r = rng.gen_range(0.05..0.95) * (a as f64).ln();
        let grid = (0..10_000)
            .map(|j| {
                let theta = 10f64.powf(-4.0 + 8.0 * j as f64 / 9_999.0);
                theta * (r - partition_function(&loss, theta).unwrap().ln())
            })
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0);
        let delta = delta_function(&loss, r);
        worst = worst.max((delta - grid).abs());
        ensure((delta - grid).abs() <= 1e-4, || format!("loss {i}: Delta {delta} vs grid {grid}"))?;
    }
    for i in 0..100 {
        let a = rng.gen_range(2..=4);
        let loss = corpus::random_loss(&mut rng, a);
        let q = rng.gen_range(1..=3);
        let p = corpus::random_predictor(&mut rng, q, a);
        let k = rng.gen_range(1..=4);
        let n = k * rng.gen_range(10..200);
        let x = corpus::uniform_sequence(&mut rng, n, a);
        let theta = 10f64.powf(rng.gen_range(-1.0..1.0));
        let code = predictive_code_length(&p, &loss, theta, k, &x, BaseRegime::Converted).map_err(|e| e.to_string())?;
        ensure(code.holds, || format!("triple {i}: {} > {}", code.length, code.converted_bound))?;
    }
    Ok(format!("Delta(0) = 0; grid agreement within {worst:.2e}; converted code-length bound on 100 triples"))
}

/// Maximum of `H(X | X_hat)` over a grid on the 2x2 joint simplex with `E d <= D`.
fn phi_grid(d: &Distortion, level: f64, n: usize) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..=n {
        for j in 0..=n - i {
            for k in 0..=n - i - j {
                let p = [i, j, k, n - i - j - k].map(|v| v as f64 / n as f64);
                let ed: f64 = (0..4).map(|t| p[t] * d.get(t / 2, t % 2)).sum();
                if ed > level + 1e-12 {
                    continue;
                }
                let h: f64 = (0..2)
                    .map(|y| {
                        let py = p[y] + p[2 + y];
                        if py > 0.0 {
                            py * h2(p[y] / py)
                        } else {
                            0.0
                        }
                    })
                    .sum();
                best = best.max(h);
            }
        }
    }
    best
}

fn criterion_11() -> Outcome {
    let d = Distortion::hamming(2);
    for i in 0..8 {
        let y: Vec<usize> = (0..3).map(|b| (i >> (2 - b)) & 1).collect();
        let en = ball_size_enumerate(&d, &y, 1.0 / 3.0, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let dp = ball_size_dp(&d, &y, 1.0 / 3.0).ok_or("no DP")?.map_err(|e| e.to_string())?;
        ensure(en == 4 && dp == 4, || format!("ball around {y:?}: {en} / {dp}"))?;
    }
    let (b3, _) = b_ell(&d, 3, 1.0 / 3.0, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(b3 == 4, || format!("B_3 = {b3}"))?;
    let phi = phi_of_d(&d, 0.11).map_err(|e| e.to_string())?;
    let oracle = phi_grid(&d, 0.11, 200);
    ensure((phi - h2(0.11)).abs() <= 1e-3 && (phi - oracle).abs() <= 1e-3, || {
        format!("Phi(0.11) = {phi}, h = {}, grid = {oracle}", h2(0.11))
    })?;

    let q = Quantizer::nearest_codeword(3, d, 1.0 / 3.0, &[vec![0, 0, 0], vec![1, 1, 1]]).map_err(|e| e.to_string())?;
    let out: Vec<Codeword> = ["0", "11000", "11001", "11010", "11011", "11100", "11101", "10"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let coder = Encoder::new(1, 8, 0, out, vec![0; 8]).unwrap();
    let report = lossy_gki_check(&q, &coder, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(report.all_hold(), || format!("{:?}", report.failures().collect::<Vec<_>>()))?;

    let mut rng = corpus::rng(SEED + 11);
    for i in 0..500 {
        let s = rng.gen_range(1..=5);
        let small: Vec<Vec<f64>> = (0..s)
            .map(|_| (0..s).map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.0..2.0) }).collect())
            .collect();
        let big: Vec<Vec<f64>> = small
            .iter()
            .map(|r| r.iter().map(|v| v + if rng.gen_bool(0.5) { rng.gen_range(0.0..1.0) } else { 0.0 }).collect())
            .collect();
        let lo = spectral_radius(&FloatMatrix::from_rows(&small).unwrap()).map_err(|e| e.to_string())?.rho;
        let hi = spectral_radius(&FloatMatrix::from_rows(&big).unwrap()).map_err(|e| e.to_string())?.rho;
        ensure(lo <= hi + 1e-9, || format!("pair {i}: {lo} > {hi}"))?;
    }
    Ok(format!("B_3 = 4 both ways; Phi(0.11) = {phi:.5} (grid {oracle:.5}); covering chain 3 <= 4 <= 6.75; 500 ordered pairs"))
}

fn criterion_12() -> Outcome {
    let e = example1();
    let mut parts = Vec::new();
    for ell in 1..=8 {
        let m = min_state_kraft_sum(&e, ell, DEFAULT_BUDGET).map_err(|e| e.to_string())?.to_f64();
        let z = zl_baseline(3, 2, ell as u64);
        ensure(m < z, || format!("l = {ell}: {m} vs {z}"))?;
        parts.push(format!("{m:.3}<{z:.2}"));
    }
    Ok(format!("strict for l = 1..8: {}", parts.join(" ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Example-1 golden values", criterion_1),
        ("single-state degeneration to the Kraft sum", criterion_2),
        ("IL necessity sweep", criterion_3),
        ("IL refutation witnesses", criterion_4),
        ("Collatz-Wielandt sandwich", criterion_5),
        ("joint spectral radius counterexample", criterion_6),
        ("empirical entropy oracle", criterion_7),
        ("individual-sequence converse", criterion_8),
        ("LZ78 parsing and bound", criterion_9),
        ("predictor machinery", criterion_10),
        ("lossy chain", criterion_11),
        ("baseline comparison", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2}: PASS  {name}: {msg} [{secs:.2} s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {msg} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
