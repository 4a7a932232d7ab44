//! Kraft matrix of a finite-state encoder and the inequalities it satisfies
//! when the encoder is information lossless.

mod spectral;

pub use spectral::{
    collatz_wielandt, perron_vectors, spectral_radius, Bound, PerronVectors, SpectralMethod, SpectralReport,
    ITERATION_CAP, PERRON_TOLERANCE, RHO_TOLERANCE,
};

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::encoder::{checked_pow, for_each_word, Encoder, State};
use crate::error::{Error, Result};
use crate::matrix::{DyadicMatrix, FloatMatrix, DEFAULT_BIT_BUDGET};
use crate::report::{GKIReport, InequalityRecord, Witness};

/// `K[z][z'] = sum over {x : g(z,x) = z'} of 2^{-L[f(z,x)]}`, exact.
pub fn kraft_matrix(e: &Encoder) -> DyadicMatrix {
    let s = e.state_count();
    let mut k = DyadicMatrix::zeros(s);
    for z in 0..s {
        for x in 0..e.alphabet_size() {
            k.add_to(z, e.next_state(z, x), &Dyadic::pow2_neg(e.output(z, x).len() as u64));
        }
    }
    k
}

/// Exact `K^n`; fails with [`Error::BitBudgetExceeded`] when mantissas grow
/// past `bit_budget` bits.
pub fn matrix_power(k: &DyadicMatrix, n: u64, bit_budget: u64) -> Result<DyadicMatrix> {
    k.pow(n, bit_budget)
}

/// `K^n` in floating point by repeated squaring.
pub fn float_power(k: &FloatMatrix, n: u64) -> FloatMatrix {
    let mut result = FloatMatrix::identity(k.dim());
    let mut base = k.clone();
    let mut m = n;
    while m > 0 {
        if m & 1 == 1 {
            result = result.mul(&base);
        }
        m >>= 1;
        if m > 0 {
            base = base.mul(&base);
        }
    }
    result
}

fn enumeration_size(e: &Encoder, ell: usize, budget: u64) -> Result<usize> {
    let words = checked_pow(e.alphabet_size(), ell);
    match words.and_then(|w| w.checked_mul(e.state_count())) {
        Some(total) if total as u64 <= budget => Ok(total),
        _ => Err(Error::BudgetExceeded {
            budget,
            completed_depth: 0,
        }),
    }
}

/// Block Kraft matrix of the super-alphabet encoder, by enumerating every
/// `x^ell` from every state.
pub fn block_kraft_matrix(e: &Encoder, ell: usize, budget: u64) -> Result<DyadicMatrix> {
    enumeration_size(e, ell, budget)?;
    let s = e.state_count();
    let mut k = DyadicMatrix::zeros(s);
    for z in 0..s {
        for_each_word(e.alphabet_size(), ell, |w| {
            let (bits, last) = e.run_length(z, w);
            k.add_to(z, last, &Dyadic::pow2_neg(bits));
        });
    }
    Ok(k)
}

/// Whether the enumerated block Kraft matrix equals `K^ell` exactly.
pub fn block_kraft_consistency(e: &Encoder, ell: usize, budget: u64) -> Result<bool> {
    let direct = block_kraft_matrix(e, ell, budget)?;
    let power = matrix_power(&kraft_matrix(e), ell as u64, DEFAULT_BIT_BUDGET)?;
    Ok(direct == power)
}

/// `sum over x^ell of 2^{-min_z L[f(z, x^ell)]}`, by enumeration.
pub fn min_state_kraft_sum(e: &Encoder, ell: usize, budget: u64) -> Result<Dyadic> {
    enumeration_size(e, ell, budget)?;
    let mut total = Dyadic::zero();
    for_each_word(e.alphabet_size(), ell, |w| {
        let shortest = (0..e.state_count()).map(|z| e.run_length(z, w).0).min().unwrap_or(0);
        total += &Dyadic::pow2_neg(shortest);
    });
    Ok(total)
}

/// The Ziv–Lempel bound `s^2 [1 + log2(1 + alpha^ell / s^2)]` on the
/// min-over-initial-state Kraft sum.
pub fn zl_baseline(s: u64, alpha: u64, ell: u64) -> f64 {
    let s2 = (s * s) as f64;
    let ratio = ((alpha as f64).ln() * ell as f64 - s2.ln()).exp();
    s2 * (1.0 + ratio.ln_1p() / std::f64::consts::LN_2)
}

/// Record comparing the enumerated min-state Kraft sum to [`zl_baseline`].
pub fn zl_baseline_record(e: &Encoder, ell: usize, budget: u64) -> Result<InequalityRecord> {
    let lhs = min_state_kraft_sum(e, ell, budget)?;
    let rhs = zl_baseline(e.state_count() as u64, e.alphabet_size() as u64, ell as u64);
    let equal = lhs.to_f64() == rhs;
    let mut r = InequalityRecord::float("zl_min_state_kraft_sum", lhs, rhs, 1e-12).at(ell as u64);
    if equal {
        r = r.with_note("equality");
    }
    Ok(r)
}

/// Smallest `t` with `2^t >= k` (`k >= 1`).
pub fn ceil_log2(k: u64) -> u64 {
    assert!(k >= 1);
    (64 - (k - 1).leading_zeros()) as u64
}

/// Prefix-code lengths built from an IL encoder's output lengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrefixRepair {
    /// `l'(x^n)` for every `x^n` in lexicographic order.
    pub lengths: Vec<u64>,
    /// Constant added to every encoder output length.
    pub padding: u64,
    pub kraft_sum: Dyadic,
    pub holds: bool,
}

/// `l'(x^n) = l(z1, x^n) + ceil(log2(s(1 + n L_max))) + ceil(log2 s)` and its
/// exact Kraft sum.
pub fn prefix_repair_lengths(e: &Encoder, z1: State, n: usize, budget: u64) -> Result<PrefixRepair> {
    if z1 >= e.state_count() {
        return Err(Error::StateOutOfRange {
            state: z1,
            states: e.state_count(),
        });
    }
    let words = checked_pow(e.alphabet_size(), n).filter(|&w| w as u64 <= budget);
    if words.is_none() {
        return Err(Error::BudgetExceeded {
            budget,
            completed_depth: 0,
        });
    }
    let s = e.state_count() as u64;
    let growth = (n as u64)
        .checked_mul(e.l_max())
        .and_then(|v| v.checked_add(1))
        .and_then(|v| v.checked_mul(s))
        .ok_or(Error::Overflow("s(1 + n L_max)"))?;
    let padding = ceil_log2(growth) + ceil_log2(s);
    let mut lengths = Vec::with_capacity(words.unwrap_or(0));
    let mut kraft_sum = Dyadic::zero();
    for_each_word(e.alphabet_size(), n, |w| {
        let l = e.run_length(z1, w).0 + padding;
        kraft_sum += &Dyadic::pow2_neg(l);
        lengths.push(l);
    });
    let holds = kraft_sum <= Dyadic::one();
    Ok(PrefixRepair {
        lengths,
        padding,
        kraft_sum,
        holds,
    })
}

fn state_witness(e: &Encoder, z: State) -> Witness {
    Witness::State {
        id: z,
        name: e.state_name(z).to_string(),
    }
}

/// First index of the smallest (`min`) or largest value.
fn extreme<T: Ord>(values: &[T], min: bool) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if (min && *v < values[best]) || (!min && *v > values[best]) {
            best = i;
        }
    }
    best
}

enum Power {
    Exact(DyadicMatrix),
    Float(FloatMatrix),
}

/// Evaluates the Kraft-matrix inequalities of an IL encoder at each block
/// length in `ells`:
///
/// * `spectral_radius_at_most_one`: `rho(K) <= 1`
/// * `row_sum_linear_growth`: every row sum of `K^ell` is at most `s(1 + ell L_max)`
/// * `entry_linear_growth`: every entry of `K^ell` is at most `1 + ell L_max`
/// * `entry_log_growth`: every entry of `K^ell` is at most `1 + log2(1 + alpha^ell)`
///
/// and, when the encoder is irreducible,
///
/// * `some_state_kraft_sum_at_most_one`: some row sum of `K^ell` is at most 1
/// * `entry_constant_bound`: entries at most `2^{(s-1) L_max}`
/// * `state_kraft_sum_constant_bound`: row sums at most `s 2^{(s-1) L_max}`
/// * `total_kraft_sum_constant_bound`: total at most `s^2 2^{(s-1) L_max}`
///
/// Powers are exact unless the mantissa budget is exceeded, in which case
/// the affected records are evaluated in floating point.
pub fn gki_check(e: &Encoder, ells: &[u64]) -> Result<GKIReport> {
    let k = kraft_matrix(e);
    let s = e.state_count() as u64;
    let l_max = e.l_max();
    let mut report = GKIReport::default();

    let spec = spectral_radius(&k.to_float())?;
    let method = match spec.method {
        SpectralMethod::PowerIteration => "power-iteration",
        SpectralMethod::RepeatedSquaringGelfand => "repeated-squaring-gelfand",
    };
    report.push(
        InequalityRecord::float("spectral_radius_at_most_one", spec.rho, Dyadic::one(), RHO_TOLERANCE)
            .with_note(format!("{method}, {} iterations", spec.iterations)),
    );

    let irreducible = e.is_irreducible();
    let const_exp = (s - 1)
        .checked_mul(l_max)
        .ok_or(Error::Overflow("(s-1) L_max"))?;
    let entry_const = Dyadic::pow2(const_exp);

    for &ell in ells {
        let linear = ell
            .checked_mul(l_max)
            .and_then(|v| v.checked_add(1))
            .ok_or(Error::Overflow("1 + ell L_max"))?;
        let power = match matrix_power(&k, ell, DEFAULT_BIT_BUDGET) {
            Ok(p) => Power::Exact(p),
            Err(Error::BitBudgetExceeded { .. }) => Power::Float(float_power(&k.to_float(), ell)),
            Err(other) => return Err(other),
        };
        let log_bound = 1.0 + zl_log_term(e.alphabet_size() as u64, ell);
        match power {
            Power::Exact(p) => {
                let sums = p.row_sums();
                let hi = extreme(&sums, false);
                let (max_entry, (r, c)) = p.max_entry();
                report.push(
                    InequalityRecord::exact("row_sum_linear_growth", sums[hi].clone(), Dyadic::from_u64(s).mul_u64(linear))
                        .at(ell)
                        .with_witness(state_witness(e, hi)),
                );
                report.push(
                    InequalityRecord::exact("entry_linear_growth", max_entry.clone(), Dyadic::from_u64(linear))
                        .at(ell)
                        .with_witness(Witness::Entry { row: r, col: c }),
                );
                report.push(
                    InequalityRecord::float("entry_log_growth", max_entry.clone(), log_bound, 1e-12)
                        .at(ell)
                        .with_witness(Witness::Entry { row: r, col: c }),
                );
                if irreducible {
                    let lo = extreme(&sums, true);
                    report.push(
                        InequalityRecord::exact("some_state_kraft_sum_at_most_one", sums[lo].clone(), Dyadic::one())
                            .at(ell)
                            .with_witness(state_witness(e, lo)),
                    );
                    report.push(
                        InequalityRecord::exact("entry_constant_bound", max_entry, entry_const.clone())
                            .at(ell)
                            .with_witness(Witness::Entry { row: r, col: c }),
                    );
                    report.push(
                        InequalityRecord::exact("state_kraft_sum_constant_bound", sums[hi].clone(), entry_const.mul_u64(s))
                            .at(ell)
                            .with_witness(state_witness(e, hi)),
                    );
                    report.push(
                        InequalityRecord::exact("total_kraft_sum_constant_bound", p.total(), entry_const.mul_u64(s * s))
                            .at(ell),
                    );
                }
            }
            Power::Float(p) => {
                let tol = 1e-9;
                let sums: Vec<f64> = p.rows().iter().map(|r| r.iter().sum()).collect();
                let hi = argmax_f(&sums);
                let max_entry = p.max_abs();
                let note = "mantissa budget exceeded; evaluated in floating point";
                report.push(
                    InequalityRecord::float("row_sum_linear_growth", sums[hi], (s as f64) * linear as f64, tol)
                        .at(ell)
                        .with_witness(state_witness(e, hi))
                        .with_note(note),
                );
                report.push(
                    InequalityRecord::float("entry_linear_growth", max_entry, linear as f64, tol).at(ell).with_note(note),
                );
                report.push(InequalityRecord::float("entry_log_growth", max_entry, log_bound, tol).at(ell).with_note(note));
                if irreducible {
                    let lo = argmin_f(&sums);
                    let c = entry_const.to_f64();
                    report.push(
                        InequalityRecord::float("some_state_kraft_sum_at_most_one", sums[lo], 1.0, tol)
                            .at(ell)
                            .with_witness(state_witness(e, lo))
                            .with_note(note),
                    );
                    report.push(InequalityRecord::float("entry_constant_bound", max_entry, c, tol).at(ell).with_note(note));
                    report.push(
                        InequalityRecord::float("state_kraft_sum_constant_bound", sums[hi], c * s as f64, tol)
                            .at(ell)
                            .with_note(note),
                    );
                    report.push(
                        InequalityRecord::float("total_kraft_sum_constant_bound", sums.iter().sum::<f64>(), c * (s * s) as f64, tol)
                            .at(ell)
                            .with_note(note),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// `log2(1 + alpha^ell)` without overflowing for large `ell`.
fn zl_log_term(alpha: u64, ell: u64) -> f64 {
    let log_a = (alpha as f64).log2() * ell as f64;
    if log_a > 60.0 {
        log_a + (-log_a * std::f64::consts::LN_2).exp().ln_1p() / std::f64::consts::LN_2
    } else {
        (1.0 + 2f64.powf(log_a)).log2()
    }
}

fn argmax_f(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b })
}

fn argmin_f(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] < v[b] { i } else { b })
}

/// Per-state single-symbol Kraft sums `sum_x 2^{-L[f(z,x)]}`.
pub fn state_kraft_sums(e: &Encoder) -> Vec<Dyadic> {
    (0..e.state_count())
        .map(|z| (0..e.alphabet_size()).map(|x| Dyadic::pow2_neg(e.output(z, x).len() as u64)).sum())
        .collect()
}
