//! JSON forms of kernel values. Rationals are always strings, gambles are
//! arrays of rationals and events are arrays of outcome labels.

use nmono::consistency::{Assessment, MassFunctional};
use nmono::gamble::{Event, Gamble, Space};
use nmono::monotone::{MonotonicityReport, Violation};
use nmono::rational::{parse_rational, Rational};
use nmono::verdict::{Verdict, Witness};
use serde_json::{json, Map, Value};

use crate::error::CliError;

pub fn rational(v: &Rational) -> Value {
    Value::String(v.to_string())
}

pub fn gamble(g: &Gamble) -> Value {
    Value::Array(g.values().iter().map(rational).collect())
}

pub fn event(e: &Event) -> Value {
    Value::Array(e.labels().into_iter().map(|l| Value::String(l.to_string())).collect())
}

pub fn masses(m: &MassFunctional) -> Value {
    let mut out = Map::new();
    for (label, v) in m.space().labels().iter().zip(m.masses()) {
        out.insert(label.clone(), rational(v));
    }
    Value::Object(out)
}

pub fn assessment(a: &Assessment) -> Value {
    Value::Array(
        a.iter()
            .map(|(g, v)| json!({"gamble": gamble(g), "value": rational(v)}))
            .collect(),
    )
}

pub fn witness(w: &Witness) -> Value {
    match w {
        Witness::Dominating(m) => json!({"kind": "dominating", "masses": masses(m)}),
        Witness::SureLoss {
            gambles,
            multiples,
            sup,
            bound,
        } => json!({
            "kind": "sure-loss",
            "gambles": gambles.iter().map(gamble).collect::<Vec<_>>(),
            "multiples": multiples.iter().map(rational).collect::<Vec<_>>(),
            "sup": rational(sup),
            "bound": rational(bound),
        }),
        Witness::Unavailable => json!({"kind": "unavailable"}),
        Witness::Incoherent {
            gamble: g,
            assessed,
            extension,
        } => json!({
            "kind": "incoherent",
            "gamble": gamble(g),
            "assessed": rational(assessed),
            "extension": rational(extension),
        }),
        Witness::AttainmentInfeasible { gamble: g } => json!({"kind": "attainment-infeasible", "gamble": gamble(g)}),
        Witness::DisjointIntervals {
            lower_gamble,
            lower,
            upper_gamble,
            upper,
        } => json!({
            "kind": "disjoint-intervals",
            "lower_gamble": gamble(lower_gamble),
            "lower": rational(lower),
            "upper_gamble": gamble(upper_gamble),
            "upper": rational(upper),
        }),
        Witness::GamblePair { f, g, left, right } => json!({
            "kind": "gamble-pair",
            "f": gamble(f),
            "g": gamble(g),
            "left": gamble(left),
            "right": gamble(right),
        }),
        Witness::ValuePair { f, g, left, right } => json!({
            "kind": "value-pair",
            "f": gamble(f),
            "g": gamble(g),
            "left": rational(left),
            "right": rational(right),
        }),
        Witness::NegativeMobius { event: e, coefficient } => json!({
            "kind": "negative-mobius",
            "event": event(e),
            "coefficient": rational(coefficient),
        }),
    }
}

/// `decision` plus the witness, when there is one.
pub fn verdict(command: &str, v: &Verdict) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("command".into(), json!(command));
    out.insert("decision".into(), json!(v.decision));
    if let Some(w) = &v.witness {
        out.insert("witness".into(), witness(w));
    }
    out
}

pub fn violation(v: &Violation) -> Value {
    json!({
        "p": v.p,
        "base": gamble(&v.base),
        "tuple": v.tuple.iter().map(gamble).collect::<Vec<_>>(),
        "sum": rational(&v.sum),
    })
}

pub fn monotonicity(command: &str, r: &MonotonicityReport) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("command".into(), json!(command));
    out.insert("n".into(), json!(r.requested.to_string()));
    out.insert("decision".into(), json!(r.holds()));
    out.insert("verified".into(), json!(r.verified.to_string()));
    if let Some(v) = &r.violation {
        out.insert("violation".into(), violation(v));
    }
    out
}

/// Reads back the values written above, against a known space.
pub struct Reader<'a> {
    pub space: &'a Space,
}

fn bad(path: &str, message: impl Into<String>) -> CliError {
    CliError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

impl Reader<'_> {
    pub fn field<'v>(&self, value: &'v Value, key: &str, path: &str) -> Result<&'v Value, CliError> {
        value.get(key).ok_or_else(|| bad(&format!("{path}.{key}"), "missing field"))
    }

    pub fn rational(&self, value: &Value, path: &str) -> Result<Rational, CliError> {
        let text = value.as_str().ok_or_else(|| bad(path, "expected a rational string"))?;
        parse_rational(text).map_err(|e| bad(path, e.to_string()))
    }

    pub fn gamble(&self, value: &Value, path: &str) -> Result<Gamble, CliError> {
        let items = value.as_array().ok_or_else(|| bad(path, "expected an array of rationals"))?;
        let values = items
            .iter()
            .enumerate()
            .map(|(i, v)| self.rational(v, &format!("{path}[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Gamble::new(self.space, values).map_err(|e| bad(path, e.to_string()))
    }

    pub fn gambles(&self, value: &Value, path: &str) -> Result<Vec<Gamble>, CliError> {
        let items = value.as_array().ok_or_else(|| bad(path, "expected an array of gambles"))?;
        items
            .iter()
            .enumerate()
            .map(|(i, v)| self.gamble(v, &format!("{path}[{i}]")))
            .collect()
    }

    pub fn event(&self, value: &Value, path: &str) -> Result<Event, CliError> {
        let items = value.as_array().ok_or_else(|| bad(path, "expected an array of labels"))?;
        let labels = items
            .iter()
            .map(|v| v.as_str().ok_or_else(|| bad(path, "expected label strings")))
            .collect::<Result<Vec<_>, _>>()?;
        Event::from_labels(self.space, &labels).map_err(|e| bad(path, e.to_string()))
    }

    pub fn masses(&self, value: &Value, path: &str) -> Result<MassFunctional, CliError> {
        let object = value.as_object().ok_or_else(|| bad(path, "expected an object of masses"))?;
        let masses = self
            .space
            .labels()
            .iter()
            .map(|l| {
                let v = object.get(l).ok_or_else(|| bad(&format!("{path}.{l}"), "missing mass"))?;
                self.rational(v, &format!("{path}.{l}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        MassFunctional::new(self.space, masses).map_err(|e| bad(path, e.to_string()))
    }

    pub fn witness(&self, value: &Value, path: &str) -> Result<Witness, CliError> {
        let kind = self.field(value, "kind", path)?.as_str().unwrap_or_default();
        let f = |key: &str| self.field(value, key, path);
        let p = |key: &str| format!("{path}.{key}");
        Ok(match kind {
            "dominating" => Witness::Dominating(self.masses(f("masses")?, &p("masses"))?),
            "sure-loss" => Witness::SureLoss {
                gambles: self.gambles(f("gambles")?, &p("gambles"))?,
                multiples: f("multiples")?
                    .as_array()
                    .ok_or_else(|| bad(&p("multiples"), "expected an array"))?
                    .iter()
                    .map(|v| self.rational(v, &p("multiples")))
                    .collect::<Result<Vec<_>, _>>()?,
                sup: self.rational(f("sup")?, &p("sup"))?,
                bound: self.rational(f("bound")?, &p("bound"))?,
            },
            "unavailable" => Witness::Unavailable,
            "incoherent" => Witness::Incoherent {
                gamble: self.gamble(f("gamble")?, &p("gamble"))?,
                assessed: self.rational(f("assessed")?, &p("assessed"))?,
                extension: self.rational(f("extension")?, &p("extension"))?,
            },
            "attainment-infeasible" => Witness::AttainmentInfeasible {
                gamble: self.gamble(f("gamble")?, &p("gamble"))?,
            },
            "disjoint-intervals" => Witness::DisjointIntervals {
                lower_gamble: self.gamble(f("lower_gamble")?, &p("lower_gamble"))?,
                lower: self.rational(f("lower")?, &p("lower"))?,
                upper_gamble: self.gamble(f("upper_gamble")?, &p("upper_gamble"))?,
                upper: self.rational(f("upper")?, &p("upper"))?,
            },
            "gamble-pair" => Witness::GamblePair {
                f: self.gamble(f("f")?, &p("f"))?,
                g: self.gamble(f("g")?, &p("g"))?,
                left: self.gamble(f("left")?, &p("left"))?,
                right: self.gamble(f("right")?, &p("right"))?,
            },
            "value-pair" => Witness::ValuePair {
                f: self.gamble(f("f")?, &p("f"))?,
                g: self.gamble(f("g")?, &p("g"))?,
                left: self.rational(f("left")?, &p("left"))?,
                right: self.rational(f("right")?, &p("right"))?,
            },
            "negative-mobius" => Witness::NegativeMobius {
                event: self.event(f("event")?, &p("event"))?,
                coefficient: self.rational(f("coefficient")?, &p("coefficient"))?,
            },
            other => return Err(bad(&p("kind"), format!("unknown witness kind {other:?}"))),
        })
    }

    pub fn violation(&self, value: &Value, path: &str) -> Result<Violation, CliError> {
        let p = |key: &str| format!("{path}.{key}");
        Ok(Violation {
            p: self
                .field(value, "p", path)?
                .as_u64()
                .ok_or_else(|| bad(&p("p"), "expected an integer"))? as usize,
            base: self.gamble(self.field(value, "base", path)?, &p("base"))?,
            tuple: self.gambles(self.field(value, "tuple", path)?, &p("tuple"))?,
            sum: self.rational(self.field(value, "sum", path)?, &p("sum"))?,
        })
    }
}
