use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Codeword, Encoder};
use crate::error::{Error, Result};

/// JSON form of an encoder:
///
/// ```json
/// { "alphabet": ["0","1"], "states": ["S","O","I"], "initial": "S",
///   "transitions": [ {"state":"S","symbol":"0","output":"","next":"O"} ] }
/// ```
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EncoderDocument {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub transitions: Vec<TransitionRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TransitionRecord {
    pub state: String,
    pub symbol: String,
    pub output: String,
    pub next: String,
}

pub(crate) fn index_names(names: &[String], what: &str) -> Result<HashMap<String, usize>> {
    if names.is_empty() {
        return Err(Error::Schema(format!("{what} list is empty")));
    }
    let mut map = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.clone(), i).is_some() {
            return Err(Error::Schema(format!("duplicate {what} name `{n}`")));
        }
    }
    Ok(map)
}

pub(crate) fn lookup(map: &HashMap<String, usize>, name: &str, context: &str, state: bool) -> Result<usize> {
    map.get(name).copied().ok_or_else(|| {
        if state {
            Error::DanglingState {
                name: name.to_string(),
                context: context.to_string(),
            }
        } else {
            Error::DanglingSymbol {
                name: name.to_string(),
                context: context.to_string(),
            }
        }
    })
}

pub(crate) fn parse_encoder(text: &str) -> Result<Encoder> {
    let doc: EncoderDocument = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    doc.try_into()
}

impl TryFrom<EncoderDocument> for Encoder {
    type Error = Error;

    fn try_from(doc: EncoderDocument) -> Result<Encoder> {
        let states = index_names(&doc.states, "state")?;
        let symbols = index_names(&doc.alphabet, "symbol")?;
        let (s, a) = (doc.states.len(), doc.alphabet.len());
        let initial = lookup(&states, &doc.initial, "initial", true)?;
        let mut out: Vec<Option<Codeword>> = vec![None; s * a];
        let mut next = vec![0usize; s * a];
        for (i, t) in doc.transitions.iter().enumerate() {
            let ctx = format!("transition #{i}");
            let z = lookup(&states, &t.state, &ctx, true)?;
            let x = lookup(&symbols, &t.symbol, &ctx, false)?;
            let nz = lookup(&states, &t.next, &ctx, true)?;
            let c: Codeword = t.output.parse()?;
            let slot = &mut out[z * a + x];
            if slot.is_some() {
                return Err(Error::DuplicateTransition {
                    state: t.state.clone(),
                    symbol: t.symbol.clone(),
                });
            }
            *slot = Some(c);
            next[z * a + x] = nz;
        }
        let mut filled = Vec::with_capacity(s * a);
        for (i, c) in out.into_iter().enumerate() {
            match c {
                Some(c) => filled.push(c),
                None => {
                    return Err(Error::MissingTransition {
                        state: doc.states[i / a].clone(),
                        symbol: doc.alphabet[i % a].clone(),
                    })
                }
            }
        }
        Encoder::with_names(doc.states, doc.alphabet, initial, filled, next)
    }
}

impl From<&Encoder> for EncoderDocument {
    fn from(e: &Encoder) -> Self {
        let mut transitions = Vec::with_capacity(e.state_count() * e.alphabet_size());
        for z in 0..e.state_count() {
            for x in 0..e.alphabet_size() {
                transitions.push(TransitionRecord {
                    state: e.states[z].clone(),
                    symbol: e.alphabet[x].clone(),
                    output: e.output(z, x).to_string(),
                    next: e.states[e.next_state(z, x)].clone(),
                });
            }
        }
        EncoderDocument {
            alphabet: e.alphabet.clone(),
            states: e.states.clone(),
            initial: e.states[e.initial].clone(),
            transitions,
        }
    }
}
