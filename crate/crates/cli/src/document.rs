//! The problem document: serde types that mirror the JSON exactly, and a
//! resolved form holding kernel objects.

use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use nmono::consistency::Assessment;
use nmono::gamble::{Event, Gamble, Space};
use nmono::monotone::Order;
use nmono::rational::{parse_rational, Rational};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: &str = "nmono/v1";

/// Everything is kept as written (rationals stay strings) so that a parsed
/// document serializes back to the same text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub space: Vec<String>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub gambles: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub events: IndexMap<String, Vec<String>>,
    /// Reference to a gamble or event, mapped to its lower value.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub assessment: IndexMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub queries: Option<Queries>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Queries {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gambles: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<OrderSpec>,
}

/// An order as written: a positive integer or the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderSpec {
    Number(u64),
    Text(String),
}

impl OrderSpec {
    pub fn to_order(&self) -> Result<Order, String> {
        match self {
            OrderSpec::Number(n) => parse_order(&n.to_string()),
            OrderSpec::Text(s) => parse_order(s),
        }
    }
}

pub fn parse_order(text: &str) -> Result<Order, String> {
    let t = text.trim();
    if matches!(t, "inf" | "infinity" | "∞") {
        return Ok(Order::Complete);
    }
    match t.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(Order::Finite(n)),
        _ => Err(format!("expected a positive integer or \"inf\", found {text:?}")),
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Document, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Document::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

fn invalid(path: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Schema {
        path: path.into(),
        message: message.to_string(),
    }
}

fn rational_at(text: &str, path: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| invalid(path, e))
}

/// A document with every reference resolved against its space.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub space: Space,
    pub gambles: IndexMap<String, Gamble>,
    pub events: IndexMap<String, Event>,
    pub assessment: Assessment,
    pub queries: Queries,
}

impl Resolved {
    pub fn new(doc: &Document) -> Result<Resolved, CliError> {
        if let Some(schema) = &doc.schema {
            if schema != SCHEMA {
                return Err(invalid("schema", format!("unsupported schema {schema:?}, expected {SCHEMA:?}")));
            }
        }
        let space = Space::new(doc.space.iter().cloned()).map_err(|e| invalid("space", e))?;
        let mut gambles = IndexMap::new();
        for (name, values) in &doc.gambles {
            let path = format!("gambles.{name}");
            if values.len() != space.size() {
                return Err(invalid(path, format!("expected {} values, found {}", space.size(), values.len())));
            }
            let values = values
                .iter()
                .enumerate()
                .map(|(i, v)| rational_at(v, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            gambles.insert(name.clone(), Gamble::new(&space, values).map_err(|e| invalid(&path, e))?);
        }
        let mut events = IndexMap::new();
        for (name, labels) in &doc.events {
            let path = format!("events.{name}");
            if gambles.contains_key(name) {
                return Err(invalid(path, "name is used by a gamble as well"));
            }
            for (i, label) in labels.iter().enumerate() {
                if space.index_of(label).is_none() {
                    return Err(invalid(format!("{path}[{i}]"), format!("unknown outcome label {label:?}")));
                }
            }
            events.insert(name.clone(), Event::from_labels(&space, labels).map_err(|e| invalid(&path, e))?);
        }
        let mut resolved = Resolved {
            assessment: Assessment::new(&space),
            space,
            gambles,
            events,
            queries: doc.queries.clone().unwrap_or_default(),
        };
        for (reference, value) in &doc.assessment {
            let path = format!("assessment.{reference}");
            let g = resolved.gamble(reference, &path)?;
            let v = rational_at(value, &path)?;
            resolved.assessment.insert(g, v).map_err(|e| invalid(&path, e))?;
        }
        resolved.check_queries()?;
        Ok(resolved)
    }

    fn check_queries(&self) -> Result<(), CliError> {
        for (i, r) in self.queries.gambles.iter().enumerate() {
            self.gamble(r, &format!("queries.gambles[{i}]"))?;
        }
        for (i, r) in self.queries.events.iter().enumerate() {
            self.event(r, &format!("queries.events[{i}]"))?;
        }
        for (i, [f, g]) in self.queries.pairs.iter().enumerate() {
            self.gamble(f, &format!("queries.pairs[{i}][0]"))?;
            self.gamble(g, &format!("queries.pairs[{i}][1]"))?;
        }
        for (i, n) in self.queries.n.iter().enumerate() {
            n.to_order().map_err(|e| invalid(format!("queries.n[{i}]"), e))?;
        }
        Ok(())
    }

    /// A named gamble, the indicator of a named event, or an inline list
    /// of comma-separated rationals.
    pub fn gamble(&self, reference: &str, path: &str) -> Result<Gamble, CliError> {
        if let Some(g) = self.gambles.get(reference) {
            return Ok(g.clone());
        }
        if let Some(e) = self.events.get(reference) {
            return Ok(e.indicator());
        }
        let parts: Vec<&str> = reference.split(',').map(str::trim).collect();
        if parts.len() != self.space.size() {
            return Err(invalid(
                path,
                format!("{reference:?} is neither a named gamble or event nor a list of {} rationals", self.space.size()),
            ));
        }
        let values = parts
            .iter()
            .map(|p| rational_at(p, path))
            .collect::<Result<Vec<_>, _>>()?;
        Gamble::new(&self.space, values).map_err(|e| invalid(path, e))
    }

    /// A named event, or an inline list of comma-separated outcome labels.
    /// `{}` denotes the empty event.
    pub fn event(&self, reference: &str, path: &str) -> Result<Event, CliError> {
        if let Some(e) = self.events.get(reference) {
            return Ok(e.clone());
        }
        let trimmed = reference.trim();
        if trimmed == "{}" {
            return Event::empty(&self.space).map_err(|e| invalid(path, e));
        }
        let body = trimmed.strip_prefix('{').and_then(|s| s.strip_suffix('}')).unwrap_or(trimmed);
        let labels: Vec<&str> = body.split(',').map(str::trim).collect();
        if let Some(bad) = labels.iter().find(|l| self.space.index_of(l).is_none()) {
            return Err(invalid(path, format!("{reference:?} is not a named event, and {bad:?} is not an outcome")));
        }
        Event::from_labels(&self.space, &labels).map_err(|e| invalid(path, e))
    }

    pub fn orders(&self) -> Vec<Order> {
        self.queries
            .n
            .iter()
            .map(|n| n.to_order().expect("validated on load"))
            .collect()
    }
}
