//! Command reports and their JSON/text renderings.

use kraftlab::report::format_float;
use kraftlab::InequalityRecord;
use serde_json::{Map, Value};

#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    /// False when a checked inequality fails or a refuting witness is found.
    pub verdict: bool,
    pub records: Vec<InequalityRecord>,
    pub details: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            verdict: true,
            records: Vec::new(),
            details: Map::new(),
        }
    }

    pub fn record(&mut self, r: InequalityRecord) {
        self.records.push(r);
    }

    pub fn detail(&mut self, key: &str, value: impl serde::Serialize) {
        let v = serde_json::to_value(value).expect("detail serializes");
        self.details.insert(key.to_string(), normalize(v));
    }

    pub fn refute(&mut self) {
        self.verdict = false;
    }

    pub fn holds(&self) -> bool {
        self.verdict && self.records.iter().all(|r| r.holds)
    }

    pub fn exit_code(&self) -> i32 {
        if self.holds() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), Value::from(self.command));
        obj.insert("holds".into(), Value::from(self.holds()));
        obj.insert(
            "records".into(),
            serde_json::to_value(&self.records).expect("records serialize"),
        );
        obj.insert("details".into(), Value::Object(self.details.clone()));
        Value::Object(obj)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, if self.holds() { "PASS" } else { "FAIL" });
        if !self.records.is_empty() {
            let rows: Vec<[String; 5]> = self
                .records
                .iter()
                .map(|r| {
                    let name = match r.ell {
                        Some(l) => format!("{} [l={l}]", r.inequality),
                        None => r.inequality.clone(),
                    };
                    [
                        name,
                        r.lhs.to_string(),
                        r.rhs.to_string(),
                        if r.holds { "yes" } else { "NO" }.to_string(),
                        r.witness
                            .as_ref()
                            .map(|w| serde_json::to_string(w).expect("witness serializes"))
                            .unwrap_or_default(),
                    ]
                })
                .collect();
            let header = ["inequality", "lhs", "rhs", "holds", "witness"];
            let mut widths = header.map(str::len);
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let line = |cells: [&str; 5]| {
                let mut s = String::new();
                for (i, c) in cells.iter().enumerate() {
                    s.push_str(&format!("{:<width$}  ", c, width = widths[i]));
                }
                s.trim_end().to_string() + "\n"
            };
            out.push_str(&line(header));
            for row in &rows {
                out.push_str(&line([&row[0], &row[1], &row[2], &row[3], &row[4]]));
            }
        }
        for (k, v) in &self.details {
            let rendered = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {rendered}\n"));
        }
        out
    }
}

/// Rounds every non-integer number to 12 significant digits so identical
/// runs print identical bytes.
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            format_float(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(normalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}
