//! One function per verb, each returning a report.

use std::path::{Path, PathBuf};

use kraftlab::converse::{
    default_epsilon, empirical_cond_entropy, empirical_windows, individual_rate_bound, lz78_parse, lz_rate_bound_min,
    prediction_lower_bound, predictive_code_length, run_predictor, BaseRegime, LossFunction, PredictorSpec,
    EPSILON_MODEL_NOTE,
};
use kraftlab::encoder::check_il;
use kraftlab::io::{parse_sequence, SequenceFormat};
use kraftlab::kraft::{
    collatz_wielandt, gki_check, kraft_matrix, min_state_kraft_sum, perron_vectors, spectral_radius, zl_baseline,
    zl_baseline_record, Bound, RHO_TOLERANCE,
};
use kraftlab::lossy::{lossy_gki_check, lossy_kraft_matrix, phi_of_d, Quantizer};
use kraftlab::si::{
    check_il_si, find_subinvariant_vector, find_subinvariant_vector_float, jsr_bracket, kraft_family, FloatFamily,
    JsrOptions, SIEncoder,
};
use kraftlab::{Encoder, FloatMatrix, InequalityRecord, Symbol, Witness};
use serde_json::Value;

use crate::report::Report;
use crate::{Command, Kind, Regime, Settings};

/// Rounds of the sub-invariant vector search.
const SUBINVARIANT_ROUNDS: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Document { path: PathBuf, source: kraftlab::Error },

    #[error(transparent)]
    Analysis(#[from] kraftlab::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let core = match self {
            CliError::Document { source, .. } | CliError::Analysis(source) => source,
            _ => return 2,
        };
        match core {
            kraftlab::Error::BudgetExceeded { .. } | kraftlab::Error::BitBudgetExceeded { .. } => 3,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read(path)?).map_err(|e| CliError::Document {
        path: path.to_path_buf(),
        source: kraftlab::Error::Schema(e.to_string()),
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> kraftlab::Result<T>) -> Result<T> {
    let text = read_text(path)?;
    parse(&text).map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })
}

fn load_sequence(path: &Path, alphabet: &[String]) -> Result<Vec<Symbol>> {
    let bytes = read(path)?;
    parse_sequence(&bytes, SequenceFormat::from_path(path), alphabet).map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })
}

fn detect(path: &Path) -> Result<Kind> {
    let text = read_text(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Document {
        path: path.to_path_buf(),
        source: kraftlab::Error::Schema(e.to_string()),
    })?;
    let has = |k: &str| v.get(k).is_some();
    Ok(if has("matrices") {
        Kind::Family
    } else if has("block_length") {
        Kind::Quantizer
    } else if has("si_alphabet") {
        Kind::SiEncoder
    } else if has("initial_prediction") {
        Kind::Predictor
    } else {
        Kind::Encoder
    })
}

pub fn run(cmd: &Command, settings: &Settings) -> Result<Report> {
    match cmd {
        Command::Validate { path, kind } => validate(path, *kind),
        Command::Gki { encoder, ells, il_depth } => gki(encoder, ells, *il_depth, settings),
        Command::IlCheck { path, depth } => il_check(path, *depth, settings),
        Command::Spectral { path } => spectral(path),
        Command::Jsr { path, depth, samples } => jsr(path, *depth, *samples, settings),
        Command::Bounds {
            encoder,
            sequence,
            ells,
            initial_state,
        } => bounds(encoder, sequence, ells, initial_state.as_deref()),
        Command::Lz {
            sequence,
            encoder,
            ells,
            epsilon,
        } => lz(sequence, encoder.as_deref(), ells, *epsilon),
        Command::Predict {
            predictor,
            sequence,
            theta,
            k,
            ells,
            loss,
            regime,
        } => predict(predictor, sequence, *theta, *k, ells, loss.as_deref(), *regime),
        Command::Lossy {
            quantizer,
            coder,
            level,
        } => lossy(quantizer, coder, *level, settings),
        Command::Baseline { encoder, ells } => baseline(encoder, ells, settings),
    }
}

fn validate(path: &Path, kind: Kind) -> Result<Report> {
    let kind = if kind == Kind::Auto { detect(path)? } else { kind };
    let mut r = Report::new("validate");
    match kind {
        Kind::Encoder | Kind::Auto => {
            let e = load(path, Encoder::from_json)?;
            r.detail("kind", "encoder");
            r.detail("states", e.state_count());
            r.detail("alphabet", e.alphabet_size());
            r.detail("l_max", e.l_max());
            r.detail("irreducible", e.is_irreducible());
        }
        Kind::SiEncoder => {
            let e = load(path, SIEncoder::from_json)?;
            r.detail("kind", "si-encoder");
            r.detail("states", e.state_count());
            r.detail("alphabet", e.alphabet_size());
            r.detail("si_alphabet", e.si_size());
            r.detail("l_max", e.l_max());
        }
        Kind::Predictor => {
            let p = load(path, PredictorSpec::from_json)?;
            r.detail("kind", "predictor");
            r.detail("states", p.state_count());
            r.detail("alphabet", p.alphabet_size());
        }
        Kind::Quantizer => {
            let q = load(path, Quantizer::from_json)?;
            r.detail("kind", "quantizer");
            r.detail("block_length", q.block_length);
            r.detail("source_alphabet", q.distortion.source_size());
            r.detail("reproduction_alphabet", q.distortion.reproduction_size());
            r.detail("D", q.level);
            r.detail("max_preimage", q.max_preimage());
        }
        Kind::Family => {
            let f = load(path, FloatFamily::from_json)?;
            r.detail("kind", "family");
            r.detail("matrices", f.len());
            r.detail("dim", f.dim());
        }
    }
    r.detail("valid", true);
    Ok(r)
}

fn gki(path: &Path, ells: &[u64], il_depth: usize, settings: &Settings) -> Result<Report> {
    let e = load(path, Encoder::from_json)?;
    let mut r = Report::new("gki");
    r.detail("states", e.state_count());
    r.detail("alphabet", e.alphabet_size());
    r.detail("l_max", e.l_max());
    r.detail("irreducible", e.is_irreducible());
    r.detail("kraft_matrix", kraft_matrix(&e));
    let rho = spectral_radius(&kraft_matrix(&e).to_float())?;
    r.detail("rho", rho.rho);
    r.detail("spectral_method", rho.method);
    if e.is_irreducible() {
        let exponent = (e.state_count() as u64 - 1) * e.l_max();
        r.detail("entry_constant_bound", 2f64.powi(exponent.min(1023) as i32));
    }
    for rec in gki_check(&e, ells)?.records {
        r.record(rec);
    }

    let il = check_il(&e, il_depth, settings.budget)?;
    if !il.is_il_up_to_depth {
        r.refute();
    }
    r.detail("il_check", &il);

    let mut baseline = Vec::new();
    let mut skipped = Vec::new();
    for &ell in ells {
        match zl_baseline_record(&e, ell as usize, settings.budget) {
            Ok(rec) => {
                baseline.push(serde_json::json!({
                    "ell": ell,
                    "min_state_kraft_sum": rec.lhs.to_f64(),
                    "baseline": rec.rhs.to_f64(),
                }));
                r.record(rec);
            }
            Err(kraftlab::Error::BudgetExceeded { .. }) => skipped.push(ell),
            Err(err) => return Err(err.into()),
        }
    }
    r.detail("zl_baseline", baseline);
    if !skipped.is_empty() {
        r.detail("zl_baseline_skipped_over_budget", skipped);
    }
    Ok(r)
}

fn il_check(path: &Path, depth: usize, settings: &Settings) -> Result<Report> {
    let mut r = Report::new("il-check");
    let verdict = match detect(path)? {
        Kind::SiEncoder => check_il_si(&load(path, SIEncoder::from_json)?, depth, settings.budget)?,
        _ => {
            let e = load(path, Encoder::from_json)?;
            let v = check_il(&e, depth, settings.budget)?;
            if let Some(w) = &v.witness {
                r.detail("witness_state", e.state_name(w.state));
            }
            v
        }
    };
    if !verdict.is_il_up_to_depth {
        r.refute();
    }
    r.detail("verdict", verdict);
    Ok(r)
}

/// A matrix file is a JSON array of rows or an object with a `matrix` field.
fn load_matrix(path: &Path) -> Result<Option<FloatMatrix>> {
    let text = read_text(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Document {
        path: path.to_path_buf(),
        source: kraftlab::Error::Schema(e.to_string()),
    })?;
    let rows = match v.get("matrix").unwrap_or(&v) {
        Value::Array(rows) => rows.clone(),
        _ => return Ok(None),
    };
    let rows: Vec<Vec<f64>> = serde_json::from_value(Value::Array(rows)).map_err(|e| CliError::Document {
        path: path.to_path_buf(),
        source: kraftlab::Error::Schema(e.to_string()),
    })?;
    let m = FloatMatrix::from_rows(&rows).map_err(|source| CliError::Document {
        path: path.to_path_buf(),
        source,
    })?;
    m.check_nonnegative()?;
    Ok(Some(m))
}

fn spectral(path: &Path) -> Result<Report> {
    let mut r = Report::new("spectral");
    let (m, from_encoder) = match load_matrix(path)? {
        Some(m) => (m, false),
        None => (kraft_matrix(&load(path, Encoder::from_json)?).to_float(), true),
    };
    let rho = spectral_radius(&m)?;
    if from_encoder {
        r.record(InequalityRecord::float("spectral_radius_at_most_one", rho.rho, 1.0, RHO_TOLERANCE));
    }
    r.detail("matrix", m.rows());
    r.detail("spectral", &rho);
    if let Ok(p) = perron_vectors(&m) {
        if p.right.iter().all(|&x| x > 0.0) {
            r.detail("collatz_wielandt_lower", collatz_wielandt(&m, &p.right, Bound::Lower)?);
            r.detail("collatz_wielandt_upper", collatz_wielandt(&m, &p.right, Bound::Upper)?);
        }
        r.detail("perron", p);
    }
    Ok(r)
}

fn jsr(path: &Path, depth: usize, samples: usize, settings: &Settings) -> Result<Report> {
    let mut r = Report::new("jsr");
    let (family, sub) = match detect(path)? {
        Kind::Family => {
            let f = load(path, FloatFamily::from_json)?;
            let sub = find_subinvariant_vector_float(&f, SUBINVARIANT_ROUNDS);
            (f, sub)
        }
        _ => {
            let e = load(path, SIEncoder::from_json)?;
            let k = kraft_family(&e);
            r.detail("si_names", e.si_names());
            let sub = find_subinvariant_vector(&k, SUBINVARIANT_ROUNDS);
            (k.to_float(), sub)
        }
    };
    for (i, m) in family.matrices.iter().enumerate() {
        let rho = spectral_radius(m)?.rho;
        r.record(
            InequalityRecord::float("member_spectral_radius_at_most_one", rho, 1.0, RHO_TOLERANCE)
                .with_witness(Witness::Word(vec![i])),
        );
    }
    let opts = JsrOptions {
        max_depth: depth,
        budget: settings.budget,
        samples,
        seed: settings.seed,
        ..JsrOptions::default()
    };
    let bracket = jsr_bracket(&family, &opts);
    r.record(
        InequalityRecord::float("jsr_lower_bound_at_most_one", bracket.lower, 1.0, RHO_TOLERANCE)
            .with_witness(Witness::Word(bracket.lower_word.clone())),
    );
    if !family.names.is_empty() {
        let word: Vec<&str> = bracket.lower_word.iter().map(|&i| family.names[i].as_str()).collect();
        r.detail("certificate_word", word);
    }
    r.detail("bracket", &bracket);
    r.detail("subinvariant", &sub);
    Ok(r)
}

fn bounds(enc: &Path, seq: &Path, ells: &[u64], initial: Option<&str>) -> Result<Report> {
    let e = load(enc, Encoder::from_json)?;
    let x = load_sequence(seq, e.symbol_names())?;
    let z1 = match initial {
        Some(name) => e
            .state_id(name)
            .ok_or_else(|| CliError::Usage(format!("unknown initial state `{name}`")))?,
        None => e.initial_state(),
    };
    let b = individual_rate_bound(&e, z1, &x, ells)?;
    let mut r = Report::new("bounds");
    let mut rec = InequalityRecord::float("individual_rate_bound", b.rhs, b.lhs, 1e-12)
        .with_note("lower bound on bits per symbol");
    if let Some(ell) = b.best_ell {
        rec = rec.at(ell);
    }
    r.record(rec);
    r.detail("n", x.len());
    r.detail("rate", b.lhs);
    r.detail("bound", &b);
    Ok(r)
}

fn lz(seq: &Path, enc: Option<&Path>, ells: &[u64], epsilon: Option<f64>) -> Result<Report> {
    let mut r = Report::new("lz");
    let (x, s, l_max, rate) = match enc {
        Some(p) => {
            let e = load(p, Encoder::from_json)?;
            let x = load_sequence(seq, e.symbol_names())?;
            let rate = e.encode(e.initial_state(), &x)?.total_bits as f64 / x.len().max(1) as f64;
            (x, e.state_count() as u64, e.l_max(), Some(rate))
        }
        None => {
            let names: Vec<String> = (0..=255u32).map(|i| i.to_string()).collect();
            let x = match SequenceFormat::from_path(seq) {
                SequenceFormat::Text => {
                    let text = read_text(seq)?;
                    let mut seen: Vec<char> = Vec::new();
                    text.chars()
                        .filter(|c| !c.is_whitespace())
                        .map(|c| match seen.iter().position(|&d| d == c) {
                            Some(i) => i,
                            None => {
                                seen.push(c);
                                seen.len() - 1
                            }
                        })
                        .collect()
                }
                _ => load_sequence(seq, &names)?,
            };
            (x, 1, 0, None)
        }
    };
    let parse = lz78_parse(&x);
    let n = x.len() as u64;
    let (note, bound) = match epsilon {
        Some(eps) => ("fixed epsilon", lz_rate_bound_min(parse.c as u64, n, ells, s, l_max, |_, _| eps, "fixed epsilon")),
        None => (
            EPSILON_MODEL_NOTE,
            lz_rate_bound_min(parse.c as u64, n, ells, s, l_max, default_epsilon, EPSILON_MODEL_NOTE),
        ),
    };
    r.detail("n", n);
    r.detail("c", parse.c);
    r.detail("trailing_repeat", parse.trailing_repeat);
    r.detail("epsilon_model", note);
    r.detail("heuristic", epsilon.is_none());
    if let Some(b) = &bound {
        r.detail("bound", b);
    }
    if let Some(rate) = rate {
        r.detail("rate", rate);
        if let Some(b) = &bound {
            r.detail("rate_at_least_bound", rate >= b.bound);
        }
    }
    Ok(r)
}

fn predict(
    pred: &Path,
    seq: &Path,
    theta: f64,
    k: usize,
    ells: &[u64],
    loss: Option<&[f64]>,
    regime: Regime,
) -> Result<Report> {
    let p = load(pred, PredictorSpec::from_json)?;
    let x = load_sequence(seq, p.symbol_names())?;
    let a = p.alphabet_size();
    let loss = match loss {
        Some(v) => LossFunction::new(v.to_vec())?,
        None => LossFunction::hamming(a),
    };
    if x.is_empty() {
        return Err(CliError::Usage("sequence is empty".into()));
    }
    let regime = match regime {
        Regime::Converted => BaseRegime::Converted,
        Regime::Literal => BaseRegime::Literal,
    };
    let mut r = Report::new("predict");
    let run = run_predictor(&p, &loss, &x)?;

    // longest block the predictive code can emit
    let z = kraftlab::converse::partition_function(&loss, theta)?;
    let worst = loss.values.iter().copied().fold(0.0, f64::max);
    let l_max = (k as f64 * (worst / theta * std::f64::consts::LOG2_E + z.log2())).ceil().max(0.0) as u64;
    let mut best = None;
    for &ell in ells.iter().filter(|&&l| l > 0 && (l as usize) < x.len()) {
        let h = empirical_cond_entropy(&empirical_windows(&x, ell as usize)?);
        let b = prediction_lower_bound(p.state_count() as u64, k as u64, ell, x.len() as u64, h, l_max, a as u64, &loss)?;
        if best.as_ref().is_none_or(|(_, bb): &(u64, kraftlab::converse::PredictionBound)| b.bound > bb.bound) {
            best = Some((ell, b));
        }
    }
    if let Some((ell, b)) = &best {
        r.record(InequalityRecord::float("prediction_loss_lower_bound", b.bound, run.average_loss, 1e-9).at(*ell));
        r.detail("loss_bound", b);
    }

    if x.len() % k == 0 {
        let code = predictive_code_length(&p, &loss, theta, k, &x, regime)?;
        let limit = match regime {
            BaseRegime::Converted => code.converted_bound,
            BaseRegime::Literal => code.literal_bound,
        };
        r.record(
            InequalityRecord::float("predictive_code_length_upper_bound", code.length as f64, limit, 1e-9)
                .with_note(match regime {
                    BaseRegime::Converted => "converted form",
                    BaseRegime::Literal => "literal form",
                }),
        );
        r.detail("code_length", code.length);
        r.detail("converted_bound", code.converted_bound);
        r.detail("literal_bound", code.literal_bound);
    } else {
        r.detail("code_length_skipped", format!("k = {k} does not divide n = {}", x.len()));
    }
    r.detail("n", x.len());
    r.detail("total_loss", run.total_loss);
    r.detail("average_loss", run.average_loss);
    r.detail("block_l_max", l_max);
    Ok(r)
}

fn lossy(qpath: &Path, cpath: &Path, level: Option<f64>, settings: &Settings) -> Result<Report> {
    let mut q = load(qpath, Quantizer::from_json)?;
    if let Some(d) = level {
        q = Quantizer::new(q.block_length, q.distortion.clone(), d, q.map.clone())?;
    }
    let e = load(cpath, Encoder::from_json)?;
    let lk = lossy_kraft_matrix(&q, &e, settings.budget)?;
    let report = lossy_gki_check(&q, &e, settings.budget)?;
    let mut r = Report::new("lossy");
    for rec in report.records {
        r.record(rec);
    }
    r.detail("block_length", q.block_length);
    r.detail("D", q.level);
    r.detail("b_ell", lk.b_ell as f64);
    r.detail("phi", phi_of_d(&q.distortion, q.level)?);
    r.detail("k", &lk.k);
    r.detail("k_hat", &lk.k_hat);
    Ok(r)
}

fn baseline(path: &Path, ells: &[u64], settings: &Settings) -> Result<Report> {
    let e = load(path, Encoder::from_json)?;
    let (s, a) = (e.state_count() as u64, e.alphabet_size() as u64);
    let mut r = Report::new("baseline");
    let mut rows = Vec::new();
    for &ell in ells {
        let rec = zl_baseline_record(&e, ell as usize, settings.budget)?;
        let exact = min_state_kraft_sum(&e, ell as usize, settings.budget)?;
        rows.push(serde_json::json!({
            "ell": ell,
            "min_state_kraft_sum": exact,
            "baseline": zl_baseline(s, a, ell),
            "strict": rec.lhs.to_f64() < rec.rhs.to_f64(),
        }));
        r.record(rec);
    }
    r.detail("comparison", rows);
    Ok(r)
}
