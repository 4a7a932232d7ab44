//! Symbol sequences: raw byte files (one byte per symbol index), JSON arrays
//! of names or indices, or text where every non-whitespace character is a
//! one-character symbol name.

use serde_json::Value;

use crate::encoder::Symbol;
use crate::error::{Error, Result};

fn lookup(alphabet: &[String], name: &str) -> Result<Symbol> {
    alphabet.iter().position(|a| a == name).ok_or_else(|| Error::DanglingSymbol {
        name: name.to_string(),
        context: "sequence".into(),
    })
}

/// Parses a JSON array of names or indices.
pub fn parse_json_sequence(text: &str, alphabet: &[String]) -> Result<Vec<Symbol>> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let items = value.as_array().ok_or_else(|| Error::Schema("sequence must be a JSON array".into()))?;
    items
        .iter()
        .map(|v| match v {
            Value::String(s) => lookup(alphabet, s),
            Value::Number(n) => {
                let i = n
                    .as_u64()
                    .ok_or_else(|| Error::Schema(format!("sequence entry {n} is not a symbol index")))? as usize;
                if i >= alphabet.len() {
                    return Err(Error::SymbolOutOfRange {
                        symbol: i,
                        alphabet: alphabet.len(),
                    });
                }
                Ok(i)
            }
            other => Err(Error::Schema(format!("sequence entry {other} is neither a name nor an index"))),
        })
        .collect()
}

/// Parses text where each non-whitespace character names one symbol.
pub fn parse_text_sequence(text: &str, alphabet: &[String]) -> Result<Vec<Symbol>> {
    text.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| lookup(alphabet, c.encode_utf8(&mut [0; 4])))
        .collect()
}

/// One byte per symbol index.
pub fn parse_byte_sequence(bytes: &[u8], alphabet_size: usize) -> Result<Vec<Symbol>> {
    bytes
        .iter()
        .map(|&b| {
            let i = b as usize;
            if i >= alphabet_size {
                return Err(Error::SymbolOutOfRange {
                    symbol: i,
                    alphabet: alphabet_size,
                });
            }
            Ok(i)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceFormat {
    Bytes,
    Json,
    Text,
}

impl SequenceFormat {
    /// `.json` and `.txt` select JSON and text; anything else is raw bytes.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => SequenceFormat::Json,
            Some("txt") => SequenceFormat::Text,
            _ => SequenceFormat::Bytes,
        }
    }
}

pub fn parse_sequence(bytes: &[u8], format: SequenceFormat, alphabet: &[String]) -> Result<Vec<Symbol>> {
    let text = || std::str::from_utf8(bytes).map_err(|e| Error::Schema(e.to_string()));
    match format {
        SequenceFormat::Bytes => parse_byte_sequence(bytes, alphabet.len()),
        SequenceFormat::Json => parse_json_sequence(text()?, alphabet),
        SequenceFormat::Text => parse_text_sequence(text()?, alphabet),
    }
}
