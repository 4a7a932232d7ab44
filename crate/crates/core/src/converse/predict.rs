//! Finite-state predictors, the partition function `Z(theta)`, the transform
//! `Delta(R)` and the prediction-loss lower bound.

use serde::{Deserialize, Serialize};

use crate::encoder::{index_names, lookup, State, Symbol};
use crate::error::{Error, Result};
use crate::optimize::maximize_unimodal;

/// Loss `rho(e)` of a prediction error `e = x - x_hat (mod alpha)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossFunction {
    pub values: Vec<f64>,
}

impl LossFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("loss needs at least one value".into()));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter(format!("loss value {v} is not a finite non-negative number")));
        }
        Ok(LossFunction { values })
    }

    /// `rho(0) = 0`, `rho(e) = 1` otherwise.
    pub fn hamming(alpha: usize) -> Self {
        LossFunction {
            values: (0..alpha).map(|e| if e == 0 { 0.0 } else { 1.0 }).collect(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.values.len()
    }

    /// Error symbol `x - x_hat` modulo the alphabet size.
    pub fn residual(&self, x: Symbol, x_hat: Symbol) -> Symbol {
        let a = self.values.len();
        (x % a + a - x_hat % a) % a
    }

    pub fn loss(&self, x: Symbol, x_hat: Symbol) -> f64 {
        self.values[self.residual(x, x_hat)]
    }

    fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `ln Z(theta)` computed around the smallest loss to avoid underflow.
fn ln_partition(loss: &LossFunction, theta: f64) -> f64 {
    let m = loss.min_value();
    let rest: f64 = loss.values.iter().map(|&r| (-(r - m) / theta).exp()).sum();
    -m / theta + rest.ln()
}

/// `Z(theta) = sum_x exp(-rho(x) / theta)` (natural exponential).
pub fn partition_function(loss: &LossFunction, theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::InvalidParameter(format!("theta must be positive, got {theta}")));
    }
    Ok(loss.values.iter().map(|&r| (-r / theta).exp()).sum())
}

const LN_THETA_MIN: f64 = -13.815_510_557_964_274; // ln 1e-6
const LN_THETA_MAX: f64 = 18.420_680_743_952_367; // ln 1e8

/// `Delta(R) = sup_{theta >= 0} theta [R - ln Z(theta)]` with `R` in nats.
///
/// The objective is concave in `theta`; it is maximized over `ln theta` by a
/// coarse scan plus golden-section refinement, and compared against the
/// `theta -> 0` limit `min_x rho(x)`. Returns `+inf` when `R > ln alpha`.
pub fn delta_function(loss: &LossFunction, r_nats: f64) -> f64 {
    let alpha = loss.alphabet_size() as f64;
    if r_nats > alpha.ln() {
        return f64::INFINITY;
    }
    let objective = |t: f64| {
        let theta = t.exp();
        theta * (r_nats - ln_partition(loss, theta))
    };
    let (_, best) = maximize_unimodal(objective, LN_THETA_MIN, LN_THETA_MAX, 200, 1e-10);
    let best = best.max(loss.min_value());
    if best <= 0.0 {
        0.0
    } else {
        best
    }
}

/// Predictor `x_hat_{i+1} = u(x_i, sigma_i)`, `sigma_{i+1} = v(x_i, sigma_i)`
/// with fixed `sigma_1` and `x_hat_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictorSpec {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial_state: State,
    initial_prediction: Symbol,
    predict: Vec<Symbol>,
    next: Vec<State>,
}

/// JSON form, mirroring the encoder document with `predict` in place of
/// `output`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PredictorDocument {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub initial_prediction: String,
    pub transitions: Vec<PredictorTransition>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PredictorTransition {
    pub state: String,
    pub symbol: String,
    pub predict: String,
    pub next: String,
}

impl PredictorSpec {
    /// Tables are indexed by `state * alphabet + symbol`.
    pub fn new(
        state_count: usize,
        alphabet_size: usize,
        initial_state: State,
        initial_prediction: Symbol,
        predict: Vec<Symbol>,
        next: Vec<State>,
    ) -> Result<Self> {
        let (q, a) = (state_count, alphabet_size);
        if q == 0 || a == 0 {
            return Err(Error::Schema("predictor needs states and symbols".into()));
        }
        if initial_state >= q {
            return Err(Error::StateOutOfRange {
                state: initial_state,
                states: q,
            });
        }
        for len in [predict.len(), next.len()] {
            if len != q * a {
                return Err(Error::DimensionMismatch { expected: q * a, got: len });
            }
        }
        if let Some(&bad) = predict.iter().chain(std::iter::once(&initial_prediction)).find(|&&x| x >= a) {
            return Err(Error::SymbolOutOfRange { symbol: bad, alphabet: a });
        }
        if let Some(&bad) = next.iter().find(|&&z| z >= q) {
            return Err(Error::StateOutOfRange { state: bad, states: q });
        }
        Ok(PredictorSpec {
            states: (0..q).map(|i| i.to_string()).collect(),
            alphabet: (0..a).map(|i| i.to_string()).collect(),
            initial_state,
            initial_prediction,
            predict,
            next,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PredictorDocument = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let states = index_names(&doc.states, "state")?;
        let symbols = index_names(&doc.alphabet, "symbol")?;
        let (q, a) = (doc.states.len(), doc.alphabet.len());
        let mut predict = vec![None; q * a];
        let mut next = vec![0; q * a];
        for (i, t) in doc.transitions.iter().enumerate() {
            let ctx = format!("transition #{i}");
            let z = lookup(&states, &t.state, &ctx, true)?;
            let x = lookup(&symbols, &t.symbol, &ctx, false)?;
            let p = lookup(&symbols, &t.predict, &ctx, false)?;
            let nz = lookup(&states, &t.next, &ctx, true)?;
            if predict[z * a + x].is_some() {
                return Err(Error::DuplicateTransition {
                    state: t.state.clone(),
                    symbol: t.symbol.clone(),
                });
            }
            predict[z * a + x] = Some(p);
            next[z * a + x] = nz;
        }
        let predict = predict
            .into_iter()
            .enumerate()
            .map(|(k, p)| {
                p.ok_or_else(|| Error::MissingTransition {
                    state: doc.states[k / a].clone(),
                    symbol: doc.alphabet[k % a].clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let initial = lookup(&states, &doc.initial, "initial", true)?;
        let first = lookup(&symbols, &doc.initial_prediction, "initial_prediction", false)?;
        let mut spec = PredictorSpec::new(q, a, initial, first, predict, next)?;
        spec.states = doc.states;
        spec.alphabet = doc.alphabet;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        let a = self.alphabet.len();
        let transitions = (0..self.states.len() * a)
            .map(|k| PredictorTransition {
                state: self.states[k / a].clone(),
                symbol: self.alphabet[k % a].clone(),
                predict: self.alphabet[self.predict[k]].clone(),
                next: self.states[self.next[k]].clone(),
            })
            .collect();
        let doc = PredictorDocument {
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            initial: self.states[self.initial_state].clone(),
            initial_prediction: self.alphabet[self.initial_prediction].clone(),
            transitions,
        };
        serde_json::to_string_pretty(&doc).expect("document serializes")
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.alphabet
    }

    pub fn predict(&self, x: Symbol, sigma: State) -> Symbol {
        self.predict[sigma * self.alphabet.len() + x]
    }

    pub fn next_state(&self, x: Symbol, sigma: State) -> State {
        self.next[sigma * self.alphabet.len() + x]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRun {
    pub predictions: Vec<Symbol>,
    /// `x_i - x_hat_i (mod alpha)`.
    pub residuals: Vec<Symbol>,
    pub total_loss: f64,
    pub average_loss: f64,
}

/// Runs the predictor over `x` and accumulates `rho(x_i - x_hat_i)`.
pub fn run_predictor(p: &PredictorSpec, loss: &LossFunction, x: &[Symbol]) -> Result<PredictionRun> {
    if loss.alphabet_size() != p.alphabet_size() {
        return Err(Error::DimensionMismatch {
            expected: p.alphabet_size(),
            got: loss.alphabet_size(),
        });
    }
    if let Some(&bad) = x.iter().find(|&&v| v >= p.alphabet_size()) {
        return Err(Error::SymbolOutOfRange {
            symbol: bad,
            alphabet: p.alphabet_size(),
        });
    }
    let mut predictions = Vec::with_capacity(x.len());
    let mut residuals = Vec::with_capacity(x.len());
    let mut total_loss = 0.0;
    let (mut sigma, mut x_hat) = (p.initial_state, p.initial_prediction);
    for &xi in x {
        predictions.push(x_hat);
        residuals.push(loss.residual(xi, x_hat));
        total_loss += loss.loss(xi, x_hat);
        x_hat = p.predict(xi, sigma);
        sigma = p.next_state(xi, sigma);
    }
    let average_loss = if x.is_empty() { 0.0 } else { total_loss / x.len() as f64 };
    Ok(PredictionRun {
        predictions,
        residuals,
        total_loss,
        average_loss,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionBound {
    /// `M_k = (alpha^k - 1) / (alpha - 1)`.
    pub m_k: f64,
    /// Argument of `Delta` in bits before clamping at zero.
    pub argument_bits: f64,
    pub clamped: bool,
    /// Lower bound on the average loss.
    pub bound: f64,
}

/// `Delta(H - [2 log2(q M_k) + (q M_k - 1) L_max] / l - L_max / n - 1/k)`,
/// with the argument given in bits, clamped at zero and converted to nats.
#[allow(clippy::too_many_arguments)]
pub fn prediction_lower_bound(
    q: u64,
    k: u64,
    ell: u64,
    n: u64,
    h_hat_bits: f64,
    l_max: u64,
    alpha: u64,
    loss: &LossFunction,
) -> Result<PredictionBound> {
    if q == 0 || k == 0 || ell == 0 || n == 0 || alpha == 0 {
        return Err(Error::InvalidParameter("q, k, l, n and alpha must be positive".into()));
    }
    let m_k: f64 = (0..k).map(|j| (alpha as f64).powi(j as i32)).sum();
    let states = q as f64 * m_k;
    let penalty = (2.0 * states.log2() + (states - 1.0) * l_max as f64) / ell as f64;
    let argument_bits = h_hat_bits - penalty - l_max as f64 / n as f64 - 1.0 / k as f64;
    let clamped = !(argument_bits > 0.0);
    let bound = if clamped {
        0.0
    } else {
        delta_function(loss, argument_bits * std::f64::consts::LN_2)
    };
    Ok(PredictionBound {
        m_k,
        argument_bits,
        clamped,
        bound,
    })
}

/// Which form of the code-length upper bound decides `holds`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseRegime {
    /// `(log2 e / theta) sum rho + n log2 Z + n/k`: lengths in bits with the
    /// natural exponential inside `Q_theta`.
    Converted,
    /// `(1 / theta) sum rho + n log2 Z + n/k`, taken as written.
    Literal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictiveCode {
    /// Total length in bits.
    pub length: u64,
    pub block_lengths: Vec<u64>,
    pub converted_bound: f64,
    pub literal_bound: f64,
    pub regime: BaseRegime,
    pub holds: bool,
}

/// Shannon-code length of `x` in `k`-blocks under
/// `Q_theta(x_i | past) = exp(-rho(x_i - x_hat_i) / theta) / Z(theta)`.
pub fn predictive_code_length(
    p: &PredictorSpec,
    loss: &LossFunction,
    theta: f64,
    k: usize,
    x: &[Symbol],
    regime: BaseRegime,
) -> Result<PredictiveCode> {
    if k == 0 || x.len() % k != 0 {
        return Err(Error::InvalidParameter(format!("block length {k} must divide n = {}", x.len())));
    }
    let z = partition_function(loss, theta)?;
    let log2_z = z.log2();
    let log2_e = std::f64::consts::LOG2_E;
    let run = run_predictor(p, loss, x)?;
    let costs: Vec<f64> = run
        .residuals
        .iter()
        .map(|&r| loss.values[r] / theta * log2_e + log2_z)
        .collect();
    let block_lengths: Vec<u64> = costs
        .chunks(k)
        .map(|c| c.iter().sum::<f64>().ceil().max(0.0) as u64)
        .collect();
    let length = block_lengths.iter().sum();
    let n = x.len() as f64;
    let blocks = n / k as f64;
    let converted_bound = log2_e / theta * run.total_loss + n * log2_z + blocks;
    let literal_bound = run.total_loss / theta + n * log2_z + blocks;
    let limit = match regime {
        BaseRegime::Converted => converted_bound,
        BaseRegime::Literal => literal_bound,
    };
    Ok(PredictiveCode {
        length,
        block_lengths,
        converted_bound,
        literal_bound,
        regime,
        holds: length as f64 <= limit + 1e-9 * limit.abs().max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Predicts `x_hat_{i+1} = x_i + 1 (mod alpha)`; one state.
    fn successor(alpha: usize) -> PredictorSpec {
        PredictorSpec::new(1, alpha, 0, 0, (0..alpha).map(|x| (x + 1) % alpha).collect(), vec![0; alpha]).unwrap()
    }

    fn constant_zero(alpha: usize) -> PredictorSpec {
        PredictorSpec::new(1, alpha, 0, 0, vec![0; alpha], vec![0; alpha]).unwrap()
    }

    /// Dense grid over `theta` in `[1e-4, 1e4]`.
    fn delta_grid(loss: &LossFunction, r: f64) -> f64 {
        (0..10_000)
            .map(|i| {
                let theta = 10f64.powf(-4.0 + 8.0 * i as f64 / 9_999.0);
                theta * (r - partition_function(loss, theta).unwrap().ln())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn partition_values() {
        let h = LossFunction::hamming(2);
        assert!((partition_function(&h, 1.0).unwrap() - (1.0 + (-1.0f64).exp())).abs() < 1e-15);
        assert!((partition_function(&h, 1e-3).unwrap() - 1.0).abs() < 1e-12);
        assert!((partition_function(&h, 1e9).unwrap() - 2.0).abs() < 1e-8);
        assert!(partition_function(&h, 0.0).is_err());
    }

    #[test]
    fn delta_basics() {
        let h = LossFunction::hamming(2);
        assert_eq!(delta_function(&h, 0.0), 0.0);
        assert_eq!(delta_function(&h, 1.0), f64::INFINITY);
        let mut prev = 0.0;
        for i in 1..=20 {
            let r = 2f64.ln() * i as f64 / 21.0;
            let d = delta_function(&h, r);
            assert!(d >= prev);
            assert!((d - delta_grid(&h, r)).abs() < 1e-4, "{r}: {d}");
            prev = d;
        }
    }

    #[test]
    fn delta_matches_grid_on_random_losses() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(10);
        for _ in 0..30 {
            let a = rng.gen_range(2..=5);
            let mut v: Vec<f64> = (0..a).map(|_| rng.gen_range(0.0..3.0)).collect();
            v[0] = 0.0;
            let loss = LossFunction::new(v).unwrap();
            let r = rng.gen_range(0.0..0.9) * (a as f64).ln();
            let d = delta_function(&loss, r);
            assert!((d - delta_grid(&loss, r)).abs() < 1e-4);
        }
    }

    #[test]
    fn predictor_runs() {
        let h = LossFunction::hamming(3);
        let x: Vec<usize> = (0..30).map(|i| i % 3).collect();
        let run = run_predictor(&successor(3), &h, &x).unwrap();
        assert_eq!(run.total_loss, 0.0);
        let x: Vec<usize> = (1..31).map(|i| i % 3).collect();
        // only the first symbol is mispredicted
        assert_eq!(run_predictor(&successor(3), &h, &x).unwrap().total_loss, 1.0);
        assert_eq!(run_predictor(&constant_zero(2), &LossFunction::hamming(2), &[0; 50]).unwrap().average_loss, 0.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let x: Vec<usize> = (0..100_000).map(|_| rng.gen_range(0..2)).collect();
        let avg = run_predictor(&successor(2), &LossFunction::hamming(2), &x).unwrap().average_loss;
        assert!((avg - 0.5).abs() < 0.01);
    }

    #[test]
    fn predictor_json() {
        let doc = r#"{"alphabet":["a","b"],"states":["s"],"initial":"s","initial_prediction":"a","transitions":[
            {"state":"s","symbol":"a","predict":"b","next":"s"},
            {"state":"s","symbol":"b","predict":"a","next":"s"}]}"#;
        let p = PredictorSpec::from_json(doc).unwrap();
        assert_eq!(p.predict(0, 0), 1);
        assert_eq!(PredictorSpec::from_json(&p.to_json()).unwrap(), p);
        assert!(matches!(
            PredictorSpec::from_json(&doc.replace(r#""predict":"a""#, r#""predict":"c""#)),
            Err(Error::DanglingSymbol { .. })
        ));
    }

    #[test]
    fn prediction_bound_cases() {
        let h = LossFunction::hamming(2);
        let b = prediction_lower_bound(1, 1, 10, 100, 0.5, 1, 2, &h).unwrap();
        assert!(b.clamped);
        assert_eq!(b.bound, 0.0);
        let b = prediction_lower_bound(1, 1, 10, 100, 1.0, 0, 2, &h).unwrap();
        assert_eq!(b.m_k, 1.0);
        assert!((b.argument_bits - 0.0).abs() < 1e-15);
        let arg = 0.9;
        let direct = delta_function(&h, arg * std::f64::consts::LN_2);
        let b = prediction_lower_bound(1, 10, u64::MAX, u64::MAX, 0.9 + 0.1, 0, 2, &h).unwrap();
        assert!((b.bound - direct).abs() < 1e-3);
    }

    #[test]
    fn code_length_bounds() {
        let h = LossFunction::hamming(2);
        let x: Vec<usize> = (0..64).map(|i| i % 2).collect();
        let perfect = successor(2);
        let run = run_predictor(&perfect, &h, &x).unwrap();
        assert_eq!(run.total_loss, 0.0);
        let c = predictive_code_length(&perfect, &h, 0.1, 8, &x, BaseRegime::Converted).unwrap();
        assert!(c.holds);
        let per_symbol = partition_function(&h, 0.1).unwrap().log2();
        assert!(c.length as f64 >= 64.0 * per_symbol);
        let one = predictive_code_length(&perfect, &h, 0.5, 64, &x, BaseRegime::Converted).unwrap();
        assert_eq!(one.block_lengths.len(), 1);
        assert!(predictive_code_length(&perfect, &h, 0.5, 5, &x, BaseRegime::Converted).is_err());
    }

    #[test]
    fn converted_bound_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let a = rng.gen_range(2..=4);
            let q = rng.gen_range(1..=3);
            let p = PredictorSpec::new(
                q,
                a,
                0,
                rng.gen_range(0..a),
                (0..q * a).map(|_| rng.gen_range(0..a)).collect(),
                (0..q * a).map(|_| rng.gen_range(0..q)).collect(),
            )
            .unwrap();
            let k = rng.gen_range(1..=8);
            let n = k * rng.gen_range(1..=30);
            let x: Vec<usize> = (0..n).map(|_| rng.gen_range(0..a)).collect();
            let theta = 10f64.powf(rng.gen_range(-2.0..2.0));
            let c = predictive_code_length(&p, &LossFunction::hamming(a), theta, k, &x, BaseRegime::Converted).unwrap();
            assert!(c.holds, "{c:?}");
        }
    }
}
