//! Structured inequality verdicts shared by all analyses.

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;

/// Renders a float with 12 significant digits, trimming trailing zeros.
/// Identical inputs always give identical strings.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let body = if (-5..15).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let (int_part, frac) = if split >= digits.len() {
                (format!("{}{}", digits, "0".repeat(split - digits.len())), String::new())
            } else {
                (digits[..split].to_string(), digits[split..].to_string())
            };
            let frac = frac.trim_end_matches('0');
            if frac.is_empty() {
                int_part
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("0.{}{}", zeros, digits.trim_end_matches('0'))
        }
    } else {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{lead}e{exp}")
        } else {
            format!("{lead}.{rest}e{exp}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Either an exact dyadic or a float; serialized as `{"m":..,"e":..}` or as
/// a 12-significant-digit decimal string respectively.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(Dyadic),
    Float(f64),
}

impl Quantity {
    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(d) => d.to_f64(),
            Quantity::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Quantity::Exact(_))
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Exact(d) if d.exponent() == 0 => write!(f, "{d}"),
            Quantity::Exact(d) => write!(f, "{d} (~{})", format_float(d.to_f64())),
            Quantity::Float(x) => f.write_str(&format_float(*x)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum QuantityRepr {
    Exact(Dyadic),
    Float(String),
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Quantity::Exact(d) => QuantityRepr::Exact(d.clone()),
            Quantity::Float(x) => QuantityRepr::Float(format_float(*x)),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Quantity {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match QuantityRepr::deserialize(deserializer)? {
            QuantityRepr::Exact(d) => Ok(Quantity::Exact(d)),
            QuantityRepr::Float(s) => s
                .parse()
                .map(Quantity::Float)
                .map_err(|_| serde::de::Error::custom(format!("bad decimal `{s}`"))),
        }
    }
}

impl From<Dyadic> for Quantity {
    fn from(d: Dyadic) -> Self {
        Quantity::Exact(d)
    }
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Float(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    State { id: usize, name: String },
    Entry { row: usize, col: usize },
    Word(Vec<usize>),
    Vector(Vec<Quantity>),
}

/// One checked inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityRecord {
    pub inequality: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
    pub holds: bool,
    pub regime: Regime,
    /// Block length the inequality was evaluated at, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Quantity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InequalityRecord {
    /// Exact comparison of two dyadics.
    pub fn exact(name: impl Into<String>, lhs: Dyadic, rhs: Dyadic) -> Self {
        let holds = lhs <= rhs;
        InequalityRecord {
            inequality: name.into(),
            lhs: Quantity::Exact(lhs),
            rhs: Quantity::Exact(rhs),
            holds,
            regime: Regime::Exact,
            ell: None,
            tolerance: None,
            witness: None,
            note: None,
        }
    }

    /// Float comparison `lhs <= rhs + tol * max(1, |rhs|)`. Exact operands are
    /// kept in the record but compared as floats.
    pub fn float(name: impl Into<String>, lhs: impl Into<Quantity>, rhs: impl Into<Quantity>, tol: f64) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let (l, r) = (lhs.to_f64(), rhs.to_f64());
        let holds = l <= r + tol * r.abs().max(1.0);
        InequalityRecord {
            inequality: name.into(),
            lhs,
            rhs,
            holds,
            regime: Regime::Float,
            ell: None,
            tolerance: Some(Quantity::Float(tol)),
            witness: None,
            note: None,
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn at(mut self, ell: u64) -> Self {
        self.ell = Some(ell);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Collection of inequality records.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GKIReport {
    pub records: Vec<InequalityRecord>,
}

impl GKIReport {
    pub fn push(&mut self, r: InequalityRecord) {
        self.records.push(r);
    }

    pub fn all_hold(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InequalityRecord> {
        self.records.iter().filter(|r| !r.holds)
    }

    pub fn find(&self, name: &str) -> impl Iterator<Item = &InequalityRecord> {
        let name = name.to_string();
        self.records.iter().filter(move |r| r.inequality == name)
    }
}
