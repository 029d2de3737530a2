//! JSON input documents and report envelopes.
//!
//! Every file read or written carries `"schema": 1`. Input documents hold
//! exactly one payload key; reports written by `sum` and `catalog` can be
//! read back as inputs, which is how `validate` re-checks them.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use apw_core::catalog::CatalogEntry;
use apw_core::collardyn::{AffineTorusMap, CollarFamily};
use apw_core::sumcalc::{SumResult, SumSpec, Summand};
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

/// A parsed input file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    pub schema: u32,
    /// Present in reports; accepted and ignored on input.
    #[serde(default, rename = "command")]
    _command: Option<serde::de::IgnoredAny>,
    /// Catalog lookup key (present in catalog reports).
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub summand: Option<Summand>,
    #[serde(default)]
    pub sum: Option<SumSpec>,
    #[serde(default)]
    pub family: Option<CollarFamily>,
    #[serde(default)]
    pub map: Option<AffineTorusMap>,
    #[serde(default)]
    pub result: Option<SumResult>,
    #[serde(default)]
    pub entry: Option<CatalogEntry>,
}

/// What an input document contains.
#[derive(Debug)]
pub enum Payload {
    Summand(Summand),
    Sum(SumSpec),
    Family(CollarFamily),
    Map(AffineTorusMap),
    Result(Box<SumResult>),
    Entry { key: Option<String>, entry: Box<CatalogEntry> },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Summand(_) => "summand",
            Payload::Sum(_) => "sum",
            Payload::Family(_) => "family",
            Payload::Map(_) => "map",
            Payload::Result(_) => "result",
            Payload::Entry { .. } => "entry",
        }
    }
}

/// Parses a document, reporting schema violations with their field path.
pub fn parse_doc(text: &str) -> Result<Payload> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: InputDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        anyhow::anyhow!("schema violation at {path}: {}", e.inner())
    })?;
    if doc.schema != SCHEMA {
        bail!("schema violation at schema: unsupported version {} (expected {SCHEMA})", doc.schema);
    }
    let mut found = Vec::new();
    if let Some(s) = doc.summand {
        found.push(Payload::Summand(s));
    }
    if let Some(s) = doc.sum {
        found.push(Payload::Sum(s));
    }
    if let Some(f) = doc.family {
        found.push(Payload::Family(f));
    }
    if let Some(m) = doc.map {
        found.push(Payload::Map(m));
    }
    if let Some(r) = doc.result {
        found.push(Payload::Result(Box::new(r)));
    }
    if let Some(e) = doc.entry {
        found.push(Payload::Entry { key: doc.name, entry: Box::new(e) });
    }
    match found.len() {
        1 => Ok(found.pop().expect("one payload")),
        0 => bail!("schema violation at .: expected one of summand, sum, family, map, result, entry"),
        _ => bail!("schema violation at .: more than one payload key"),
    }
}

pub fn read_doc(path: &Path) -> Result<Payload> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_doc(&text).with_context(|| format!("in {}", path.display()))
}

/// Wraps a payload as `{"schema": 1, "command": ..., <key>: <value>}`.
pub fn envelope<T: Serialize>(command: &str, key: &str, value: &T) -> Result<serde_json::Value> {
    let mut obj = serde_json::Map::new();
    obj.insert("schema".into(), SCHEMA.into());
    obj.insert("command".into(), command.into());
    obj.insert(key.into(), serde_json::to_value(value)?);
    Ok(serde_json::Value::Object(obj))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}
