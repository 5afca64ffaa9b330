//! The weight configuration document read by the command-line front end.
//!
//! A document is TOML (or JSON, chosen by file extension or by a leading `{`):
//!
//! ```toml
//! N = 2
//! mode = "periodic"
//! k = 2
//! m = 1
//! arithmetic = "exact"
//!
//! [[weights]]
//! i = 1
//! u = "e"
//! value = "1"
//! ```
//!
//! In periodic mode the table must contain exactly one entry for every
//! `(i, u)` with `|u| < k`. In explicit mode it must cover every `(i, u)` with
//! `|u|` up to the largest length that appears.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::DivisorSequence;
use crate::error::{Error, Result};
use crate::periodicity::{periodic_weight, WeightTop};
use crate::scalar::{parse_rational, rational, Rational};
use crate::shift::{ExplicitWeights, WeightFunction};
use crate::words::Word;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Periodic,
    Explicit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub i: usize,
    pub u: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightDocument {
    #[serde(rename = "N")]
    pub alphabet_size: Option<usize>,
    #[serde(default)]
    pub mode: Mode,
    pub k: Option<usize>,
    pub m: Option<usize>,
    #[serde(rename = "L")]
    pub max_length: Option<usize>,
    #[serde(default)]
    pub arithmetic: Arithmetic,
    #[serde(default)]
    pub weights: Vec<WeightEntry>,
    /// Divisor sequences for classification, e.g. `"2,4,8"`.
    pub seq_a: Option<String>,
    pub seq_b: Option<String>,
}

/// A validated weight source.
#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    Periodic(WeightTop),
    Explicit(ExplicitWeights<Rational>),
}

impl Weights {
    pub fn alphabet_size(&self) -> usize {
        match self {
            Weights::Periodic(top) => top.alphabet_size(),
            Weights::Explicit(w) => w.alphabet_size(),
        }
    }

    pub fn period(&self) -> Option<usize> {
        match self {
            Weights::Periodic(top) => Some(top.period()),
            Weights::Explicit(_) => None,
        }
    }

    pub fn top(&self) -> Option<&WeightTop> {
        match self {
            Weights::Periodic(top) => Some(top),
            Weights::Explicit(_) => None,
        }
    }

    pub fn as_function(&self) -> Box<dyn WeightFunction<Rational> + '_> {
        match self {
            Weights::Periodic(top) => Box::new(periodic_weight(top)),
            Weights::Explicit(w) => Box::new(w.clone()),
        }
    }
}

fn field_error(field: &str, err: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {err}"))
}

impl WeightDocument {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Parses TOML unless the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_toml(text)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let doc = if path.extension().is_some_and(|ext| ext == "json") {
            Self::from_json(&text)
        } else {
            Self::parse(&text)
        };
        doc.map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn entries(&self, alphabet_size: usize) -> Result<Vec<(usize, Word, Rational)>> {
        self.weights
            .iter()
            .enumerate()
            .map(|(pos, entry)| {
                let u = Word::parse(alphabet_size, &entry.u)
                    .map_err(|e| field_error(&format!("weights[{pos}].u"), e))?;
                let value = parse_rational(&entry.value)
                    .map_err(|e| field_error(&format!("weights[{pos}].value"), e))?;
                Ok((entry.i, u, value))
            })
            .collect()
    }

    /// Validates the weight table. Completeness is checked here, before any
    /// command runs.
    pub fn weights(&self) -> Result<Weights> {
        let n = self
            .alphabet_size
            .ok_or_else(|| field_error("N", "missing"))?;
        if self.weights.is_empty() {
            return Err(field_error("weights", "no entries"));
        }
        let entries = self.entries(n)?;
        match self.mode {
            Mode::Periodic => {
                let k = self
                    .k
                    .ok_or_else(|| field_error("k", "required in periodic mode"))?;
                WeightTop::new(n, k, entries).map(Weights::Periodic)
            }
            Mode::Explicit => {
                let depth = entries.iter().map(|(_, u, _)| u.len()).max().unwrap_or(0);
                ExplicitWeights::from_entries(n, depth, entries).map(Weights::Explicit)
            }
        }
    }

    pub fn sequences(&self) -> Result<(Option<DivisorSequence>, Option<DivisorSequence>)> {
        let parse = |field: &str, s: &Option<String>| {
            s.as_deref()
                .map(|s| {
                    s.parse::<DivisorSequence>()
                        .map_err(|e| field_error(field, e))
                })
                .transpose()
        };
        Ok((parse("seq_a", &self.seq_a)?, parse("seq_b", &self.seq_b)?))
    }
}

/// A reproducible random top with weights `p/q`, `0 ≤ p ≤ 8`, `1 ≤ q ≤ 8`.
pub fn random_top(alphabet_size: usize, period: usize, seed: u64) -> Result<WeightTop> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    WeightTop::from_fn(alphabet_size, period, |_, _| {
        rational(rng.gen_range(0..=8), rng.gen_range(1..=8))
    })
}

/// Renders a top back into a periodic-mode document.
pub fn document_for_top(top: &WeightTop) -> WeightDocument {
    WeightDocument {
        alphabet_size: Some(top.alphabet_size()),
        mode: Mode::Periodic,
        k: Some(top.period()),
        weights: top
            .entries()
            .map(|(i, u, v)| WeightEntry {
                i,
                u: u.to_string(),
                value: v.to_string(),
            })
            .collect(),
        ..WeightDocument::default()
    }
}
