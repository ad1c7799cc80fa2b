use std::env;
use std::fs;
use std::path::Path;

use nmono::choquet::{choquet_integral, is_comonotone_additive};
use nmono::consistency::{
    avoids_sure_loss, conjugate, decompose, find_attaining, is_coherent, is_exact, norm_analysis, verify_witness,
    Assessment, NaturalExtension,
};
use nmono::gamble::{is_comonotone, Gamble, GambleLattice, DEFAULT_CLOSURE_BUDGET};
use nmono::monotone::{
    alternating_sum, inner_extension, inner_set_function, is_completely_monotone, is_n_alternating, is_n_monotone,
    mobius, vacuous_value, Order, SetFunction,
};
use nmono::rational::int;
use nmono::verdict::Verdict;
use serde_json::{json, Map, Value};

use crate::document::{Document, Resolved};
use crate::error::CliError;
use crate::report::{self, Reader};
use crate::{Command, Input, Mode, MonotoneArgs};

pub const BUDGET_VARIABLE: &str = "NMONO_CLOSURE_BUDGET";

pub struct Outcome {
    pub text: String,
    pub success: bool,
}

/// Reports for one or several items. A single flagged item prints as an
/// object, a query list as an array in query order.
struct Reports {
    items: Vec<Value>,
    success: bool,
    single: bool,
}

impl Reports {
    fn one(report: Map<String, Value>, success: bool) -> Self {
        Reports {
            items: vec![Value::Object(report)],
            success,
            single: true,
        }
    }

    fn many(single: bool) -> Self {
        Reports {
            items: Vec::new(),
            success: true,
            single,
        }
    }

    fn push(&mut self, report: Map<String, Value>, success: bool) {
        self.items.push(Value::Object(report));
        self.success &= success;
    }

    fn into_outcome(self) -> Outcome {
        let value = if self.single && self.items.len() == 1 {
            self.items.into_iter().next().expect("one item")
        } else {
            Value::Array(self.items)
        };
        Outcome {
            text: serde_json::to_string_pretty(&value).expect("reports serialize"),
            success: self.success,
        }
    }
}

fn load(input: &Input) -> Result<Resolved, CliError> {
    Resolved::new(&Document::load(&input.document)?)
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

pub fn closure_budget() -> Result<usize, CliError> {
    match env::var(BUDGET_VARIABLE) {
        Ok(text) => text
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| usage(format!("{BUDGET_VARIABLE} must be a positive integer, found {text:?}"))),
        Err(_) => Ok(DEFAULT_CLOSURE_BUDGET),
    }
}

fn closure(doc: &Resolved, generators: &[Gamble]) -> Result<GambleLattice, CliError> {
    GambleLattice::closure(&doc.space, generators, closure_budget()?).map_err(CliError::kernel("lattice closure"))
}

/// Gambles named by a flag, or the query gambles.
fn targets(doc: &Resolved, flag: &Option<String>, what: &str) -> Result<(Vec<Gamble>, bool), CliError> {
    match flag {
        Some(r) => Ok((vec![doc.gamble(r, "--gamble")?], true)),
        None if !doc.queries.gambles.is_empty() => Ok((
            doc.queries
                .gambles
                .iter()
                .enumerate()
                .map(|(i, r)| doc.gamble(r, &format!("queries.gambles[{i}]")))
                .collect::<Result<_, _>>()?,
            false,
        )),
        None => Err(usage(format!("{what} needs --gamble or a non-empty queries.gambles"))),
    }
}

fn exactness_failure(command: &str, ell: &Assessment) -> Outcome {
    let mut out = report::verdict(command, &is_exact(ell));
    out.insert("error".into(), json!("functional is not exact"));
    Reports::one(out, false).into_outcome()
}

fn sure_loss_failure(command: &str, p: &Assessment) -> Outcome {
    let mut out = report::verdict(command, &avoids_sure_loss(p));
    out.insert("error".into(), json!("assessment incurs sure loss"));
    Reports::one(out, false).into_outcome()
}

fn verdict_outcome(command: &str, v: &Verdict, extra: Option<(&str, Value)>) -> Outcome {
    let mut out = report::verdict(command, v);
    if let Some((k, value)) = extra {
        out.insert(k.into(), value);
    }
    Reports::one(out, v.decision).into_outcome()
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    if let Some((input, name)) = verifiable(command) {
        if let Some(path) = &input.verify_witness {
            return verify(command, name, &load(input)?, path);
        }
    } else if let Some(input) = plain_input(command) {
        if input.verify_witness.is_some() {
            return Err(usage("this command prints no witnesses to verify"));
        }
    }
    match command {
        Command::CheckAsl(input) => {
            let doc = load(input)?;
            Ok(verdict_outcome("check-asl", &avoids_sure_loss(&doc.assessment), None))
        }
        Command::CheckCoherent(input) => {
            let doc = load(input)?;
            Ok(verdict_outcome("check-coherent", &is_coherent(&doc.assessment), None))
        }
        Command::CheckExact(input) => {
            let doc = load(input)?;
            let analysis = norm_analysis(&doc.assessment);
            let v = match analysis.witness {
                Some(w) => Verdict::no(w),
                None => is_exact(&doc.assessment),
            };
            Ok(verdict_outcome("check-exact", &v, Some(("norm", json!(analysis.norm.to_string())))))
        }
        Command::Norm(input) => {
            let doc = load(input)?;
            let analysis = norm_analysis(&doc.assessment);
            let mut out = Map::new();
            out.insert("command".into(), json!("norm"));
            out.insert("norm".into(), json!(analysis.norm.to_string()));
            let intervals: Vec<Value> = analysis
                .intervals
                .iter()
                .map(|i| {
                    json!({
                        "gamble": report::gamble(&i.gamble),
                        "lower": report::rational(&i.lower),
                        "upper": i.upper.as_ref().map_or(json!("inf"), report::rational),
                    })
                })
                .collect();
            out.insert("intervals".into(), Value::Array(intervals));
            if let Some(w) = &analysis.witness {
                out.insert("witness".into(), report::witness(w));
            }
            Ok(Reports::one(out, true).into_outcome())
        }
        Command::Decompose(input) => {
            let doc = load(input)?;
            match decompose(&doc.assessment) {
                Ok(d) => {
                    let mut out = Map::new();
                    out.insert("command".into(), json!("decompose"));
                    out.insert("lambda".into(), report::rational(&d.lambda));
                    out.insert("coherent".into(), report::assessment(&d.coherent));
                    out.insert("unique".into(), json!(d.unique));
                    Ok(Reports::one(out, true).into_outcome())
                }
                Err(nmono::Error::NotExact) => Ok(exactness_failure("decompose", &doc.assessment)),
                Err(e) => Err(CliError::kernel("decompose")(e)),
            }
        }
        Command::Natext { input, gamble, mode } => natext(&load(input)?, gamble, *mode),
        Command::Inner { input, event, gamble } => inner(&load(input)?, event, gamble),
        Command::Nmono(args) => monotone(args, "nmono"),
        Command::Nalt(args) => monotone(args, "nalt"),
        Command::Mobius(input) => mobius_command(&load(input)?),
        Command::Choquet { input, gamble } => choquet(&load(input)?, gamble),
        Command::Comadd { input, close } => {
            let doc = load(input)?;
            let Some(ell) = prepared(&doc, false, *close)? else {
                return Ok(exactness_failure("comadd", &doc.assessment));
            };
            let r = is_comonotone_additive(&ell).map_err(CliError::kernel("comonotone additivity"))?;
            let extended: Vec<Value> = r
                .extended
                .iter()
                .map(|(f, g)| json!([report::gamble(f), report::gamble(g)]))
                .collect();
            Ok(verdict_outcome("comadd", &r.verdict, Some(("extended", Value::Array(extended)))))
        }
        Command::Attain { input, f, g } => attain(&load(input)?, f, g),
        Command::Vacuous { input, event, gamble } => {
            let doc = load(input)?;
            let a = doc.event(event, "--event")?;
            let (gambles, single) = match gamble {
                None if doc.queries.gambles.is_empty() => (doc.assessment.gambles().to_vec(), false),
                _ => targets(&doc, gamble, "vacuous")?,
            };
            let mut reports = Reports::many(single);
            for g in &gambles {
                let v = vacuous_value(&a, g).map_err(CliError::kernel("vacuous lower prevision"))?;
                let mut out = Map::new();
                out.insert("command".into(), json!("vacuous"));
                out.insert("event".into(), report::event(&a));
                out.insert("gamble".into(), report::gamble(g));
                out.insert("value".into(), report::rational(&v));
                reports.push(out, true);
            }
            Ok(reports.into_outcome())
        }
        Command::Closure { document } => {
            let doc = Resolved::new(&Document::load(document)?)?;
            let generators = if doc.queries.gambles.is_empty() {
                doc.assessment.gambles().to_vec()
            } else {
                targets(&doc, &None, "closure")?.0
            };
            let lattice = closure(&doc, &generators)?;
            let out = json!({
                "command": "closure",
                "size": lattice.len(),
                "elements": lattice.elements().iter().map(report::gamble).collect::<Vec<_>>(),
            });
            Ok(Outcome {
                text: serde_json::to_string_pretty(&out).expect("reports serialize"),
                success: true,
            })
        }
        Command::Fmt { document } => {
            let doc = Document::load(document)?;
            Resolved::new(&doc)?;
            Ok(Outcome {
                text: doc.to_json(),
                success: true,
            })
        }
    }
}

fn verifiable(command: &Command) -> Option<(&Input, &'static str)> {
    match command {
        Command::CheckAsl(i) => Some((i, "check-asl")),
        Command::CheckCoherent(i) => Some((i, "check-coherent")),
        Command::CheckExact(i) => Some((i, "check-exact")),
        Command::Nmono(a) => Some((&a.input, "nmono")),
        Command::Nalt(a) => Some((&a.input, "nalt")),
        Command::Comadd { input, .. } => Some((input, "comadd")),
        Command::Attain { input, .. } => Some((input, "attain")),
        _ => None,
    }
}

fn plain_input(command: &Command) -> Option<&Input> {
    match command {
        Command::Norm(i) | Command::Decompose(i) | Command::Mobius(i) => Some(i),
        Command::Natext { input, .. }
        | Command::Inner { input, .. }
        | Command::Choquet { input, .. }
        | Command::Vacuous { input, .. } => Some(input),
        _ => None,
    }
}

/// The assessment a lattice command works on: optionally only its event
/// entries, optionally extended to the closure of its domain. `None` when
/// the extension is asked for but the functional is not exact.
fn prepared(doc: &Resolved, events_only: bool, close: bool) -> Result<Option<Assessment>, CliError> {
    let mut ell = if events_only {
        doc.assessment.restrict(|g| g.as_event().is_some())
    } else {
        doc.assessment.clone()
    };
    if close {
        let lattice = closure(doc, ell.gambles())?;
        let ext = match NaturalExtension::exact(&ell) {
            Ok(ext) => ext,
            Err(nmono::Error::NotExact) => return Ok(None),
            Err(e) => return Err(CliError::kernel("natural extension")(e)),
        };
        ell = ext.assessment_on(lattice.elements()).map_err(CliError::kernel("natural extension"))?;
    }
    Ok(Some(ell))
}

fn natext(doc: &Resolved, gamble: &Option<String>, mode: Mode) -> Result<Outcome, CliError> {
    let (gambles, single) = targets(doc, gamble, "natext")?;
    let ext = match mode {
        Mode::Prevision => match NaturalExtension::prevision(&doc.assessment) {
            Ok(ext) => ext,
            Err(_) => return Ok(sure_loss_failure("natext", &doc.assessment)),
        },
        Mode::Exact => match NaturalExtension::exact(&doc.assessment) {
            Ok(ext) => ext,
            Err(_) => return Ok(exactness_failure("natext", &doc.assessment)),
        },
    };
    let mut reports = Reports::many(single);
    for g in &gambles {
        let (value, attained) = ext.minimiser(g).map_err(CliError::kernel("natural extension"))?;
        let mut out = Map::new();
        out.insert("command".into(), json!("natext"));
        out.insert("mode".into(), json!(if mode == Mode::Prevision { "prevision" } else { "exact" }));
        out.insert("gamble".into(), report::gamble(g));
        out.insert("value".into(), report::rational(&value));
        out.insert("attained_by".into(), report::masses(&attained));
        reports.push(out, true);
    }
    Ok(reports.into_outcome())
}

fn inner(doc: &Resolved, event: &Option<String>, gamble: &Option<String>) -> Result<Outcome, CliError> {
    let use_events = event.is_some() || (gamble.is_none() && !doc.queries.events.is_empty());
    if use_events {
        let sf = SetFunction::new(doc.assessment.clone()).map_err(CliError::kernel("set function"))?;
        let (events, single) = match event {
            Some(r) => (vec![doc.event(r, "--event")?], true),
            None => (
                doc.queries
                    .events
                    .iter()
                    .enumerate()
                    .map(|(i, r)| doc.event(r, &format!("queries.events[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?,
                false,
            ),
        };
        let mut reports = Reports::many(single);
        for e in &events {
            let v = inner_set_function(&sf, e).map_err(CliError::kernel("inner set function"))?;
            let mut out = Map::new();
            out.insert("command".into(), json!("inner"));
            out.insert("event".into(), report::event(e));
            out.insert("value".into(), report::rational(&v));
            reports.push(out, true);
        }
        return Ok(reports.into_outcome());
    }
    let (gambles, single) = targets(doc, gamble, "inner")?;
    let mut reports = Reports::many(single);
    for g in &gambles {
        let v = inner_extension(&doc.assessment, g).map_err(CliError::kernel("inner extension"))?;
        let mut out = Map::new();
        out.insert("command".into(), json!("inner"));
        out.insert("gamble".into(), report::gamble(g));
        out.insert("value".into(), report::rational(&v));
        reports.push(out, true);
    }
    Ok(reports.into_outcome())
}

fn orders(doc: &Resolved, n: Option<Order>) -> Result<(Vec<Order>, bool), CliError> {
    match n {
        Some(n) => Ok((vec![n], true)),
        None if !doc.queries.n.is_empty() => Ok((doc.orders(), false)),
        None => Err(usage("needs --n or a non-empty queries.n")),
    }
}

fn monotone(args: &MonotoneArgs, command: &str) -> Result<Outcome, CliError> {
    let doc = load(&args.input)?;
    let (ns, single) = orders(&doc, args.n)?;
    let Some(ell) = prepared(&doc, args.events, args.close)? else {
        return Ok(exactness_failure(command, &doc.assessment));
    };
    let mut reports = Reports::many(single);
    for n in ns {
        let r = if command == "nalt" {
            is_n_alternating(&ell, n)
        } else {
            is_n_monotone(&ell, n)
        }
        .map_err(CliError::kernel(command))?;
        reports.push(report::monotonicity(command, &r), r.holds());
    }
    Ok(reports.into_outcome())
}

/// The assessed set function, or its inner set function on every event
/// when the assessment covers only part of the power set.
fn power_set_function(doc: &Resolved) -> Result<(SetFunction, bool), CliError> {
    let sf = SetFunction::new(doc.assessment.clone()).map_err(CliError::kernel("set function"))?;
    if sf.is_power_set() {
        Ok((sf, false))
    } else {
        Ok((sf.inner_power_set().map_err(CliError::kernel("inner set function"))?, true))
    }
}

fn mobius_command(doc: &Resolved) -> Result<Outcome, CliError> {
    let (sf, inner) = power_set_function(doc)?;
    let transform = mobius(&sf).map_err(CliError::kernel("Möbius transform"))?;
    let coefficients: Vec<Value> = transform
        .iter()
        .map(|(e, c)| json!({"event": report::event(&e), "coefficient": report::rational(c)}))
        .collect();
    let mut out = Map::new();
    out.insert("command".into(), json!("mobius"));
    out.insert("inner".into(), json!(inner));
    out.insert("coefficients".into(), Value::Array(coefficients));
    let complete = match is_completely_monotone(&sf) {
        Ok(v) => Value::Object(report::verdict("complete-monotonicity", &v)),
        Err(nmono::Error::NonzeroOnEmpty) => Value::Null,
        Err(e) => return Err(CliError::kernel("complete monotonicity")(e)),
    };
    out.insert("completely_monotone".into(), complete);
    Ok(Reports::one(out, true).into_outcome())
}

fn choquet(doc: &Resolved, gamble: &Option<String>) -> Result<Outcome, CliError> {
    let (sf, inner) = power_set_function(doc)?;
    let (gambles, single) = targets(doc, gamble, "choquet")?;
    let mut reports = Reports::many(single);
    for g in &gambles {
        let r = choquet_integral(&sf, g).map_err(CliError::kernel("Choquet integral"))?;
        let trace: Vec<Value> = r
            .trace
            .iter()
            .map(|s| {
                json!({
                    "threshold": report::rational(&s.threshold),
                    "event": report::event(&s.event),
                    "level": report::rational(&s.level),
                })
            })
            .collect();
        let mut out = Map::new();
        out.insert("command".into(), json!("choquet"));
        out.insert("gamble".into(), report::gamble(g));
        out.insert("value".into(), report::rational(&r.value));
        out.insert("inner".into(), json!(inner));
        out.insert("trace".into(), Value::Array(trace));
        reports.push(out, true);
    }
    Ok(reports.into_outcome())
}

fn pairs(doc: &Resolved, f: &Option<String>, g: &Option<String>) -> Result<(Vec<(Gamble, Gamble)>, bool), CliError> {
    match (f, g) {
        (Some(f), Some(g)) => Ok((vec![(doc.gamble(f, "--f")?, doc.gamble(g, "--g")?)], true)),
        _ if !doc.queries.pairs.is_empty() => Ok((
            doc.queries
                .pairs
                .iter()
                .enumerate()
                .map(|(i, [f, g])| {
                    Ok((
                        doc.gamble(f, &format!("queries.pairs[{i}][0]"))?,
                        doc.gamble(g, &format!("queries.pairs[{i}][1]"))?,
                    ))
                })
                .collect::<Result<Vec<_>, CliError>>()?,
            false,
        )),
        _ => Err(usage("attain needs --f and --g or a non-empty queries.pairs")),
    }
}

fn attain(doc: &Resolved, f: &Option<String>, g: &Option<String>) -> Result<Outcome, CliError> {
    let (pairs, single) = pairs(doc, f, g)?;
    if NaturalExtension::exact(&doc.assessment).is_err() {
        return Ok(exactness_failure("attain", &doc.assessment));
    }
    let mut reports = Reports::many(single);
    for (f, g) in &pairs {
        let found = find_attaining(&doc.assessment, f, g).map_err(CliError::kernel("attaining functional"))?;
        let mut out = Map::new();
        out.insert("command".into(), json!("attain"));
        out.insert("f".into(), report::gamble(f));
        out.insert("g".into(), report::gamble(g));
        out.insert("found".into(), json!(found.is_some()));
        if let Some(m) = &found {
            out.insert("masses".into(), report::masses(m));
        }
        reports.push(out, found.is_some());
    }
    Ok(reports.into_outcome())
}

/// Re-checks the witnesses of a saved report against the document.
fn verify(command: &Command, name: &str, doc: &Resolved, path: &Path) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Schema {
        path: "report".into(),
        message: e.to_string(),
    })?;
    let items = match value {
        Value::Array(items) => items,
        other => vec![other],
    };
    let reader = Reader { space: &doc.space };
    let mut results = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let at = format!("report[{i}]");
        if item.get("command").and_then(Value::as_str) != Some(name) {
            return Err(CliError::Schema {
                path: format!("{at}.command"),
                message: format!("expected a {name} report"),
            });
        }
        results.push(verify_one(command, doc, &reader, item, &at)?);
    }
    let all = results.iter().all(|&ok| ok);
    let out = json!({"command": name, "verified": results, "all_verified": all});
    Ok(Outcome {
        text: serde_json::to_string_pretty(&out).expect("reports serialize"),
        success: all,
    })
}

fn verify_one(command: &Command, doc: &Resolved, reader: &Reader, item: &Value, at: &str) -> Result<bool, CliError> {
    let kernel = |context: &str| CliError::kernel(format!("verifying {at}: {context}"));
    match command {
        Command::CheckAsl(_) | Command::CheckCoherent(_) | Command::CheckExact(_) => {
            let Some(w) = item.get("witness") else {
                // Exactness is reported without a witness when it holds.
                return Ok(item.get("decision") == Some(&json!(true)) && is_exact(&doc.assessment).decision);
            };
            let w = reader.witness(w, &format!("{at}.witness"))?;
            verify_witness(&doc.assessment, &w).map_err(kernel("witness"))
        }
        Command::Nmono(args) | Command::Nalt(args) => {
            let Some(ell) = prepared(doc, args.events, args.close)? else {
                return Ok(false);
            };
            let ell = if matches!(command, Command::Nalt(_)) { conjugate(&ell) } else { ell };
            let Some(v) = item.get("violation") else {
                // A positive report carries no witness, so check it again.
                let n = reader.field(item, "n", at)?.as_str().unwrap_or_default();
                let n = crate::document::parse_order(n).map_err(|e| CliError::Schema {
                    path: format!("{at}.n"),
                    message: e,
                })?;
                let holds = is_n_monotone(&ell, n).map_err(kernel("monotonicity"))?.holds();
                return Ok(holds && item.get("decision") == Some(&json!(true)));
            };
            let v = reader.violation(v, &format!("{at}.violation"))?;
            Ok(match alternating_sum(&ell, &v.base, &v.tuple) {
                Ok(sum) => sum == v.sum && sum < int(0) && v.tuple.len() == v.p,
                Err(_) => false,
            })
        }
        Command::Comadd { close, .. } => {
            let Some(ell) = prepared(doc, false, *close)? else {
                return Ok(false);
            };
            let Some(w) = item.get("witness") else {
                let holds = is_comonotone_additive(&ell).map_err(kernel("comonotone additivity"))?.verdict.decision;
                return Ok(holds && item.get("decision") == Some(&json!(true)));
            };
            let nmono::verdict::Witness::ValuePair { f, g, left, right } = reader.witness(w, &format!("{at}.witness"))?
            else {
                return Ok(false);
            };
            let (Some(vf), Some(vg)) = (ell.get(&f), ell.get(&g)) else {
                return Ok(false);
            };
            let sum = f.add(&g).map_err(kernel("sum"))?;
            let value = match ell.get(&sum) {
                Some(v) => v.clone(),
                None => NaturalExtension::exact(&ell)
                    .and_then(|e| e.lower(&sum))
                    .map_err(kernel("natural extension"))?,
            };
            Ok(is_comonotone(&f, &g).map_err(kernel("comonotonicity"))?
                && value == left
                && vf + vg == right
                && left != right)
        }
        Command::Attain { .. } => {
            let f = reader.gamble(reader.field(item, "f", at)?, &format!("{at}.f"))?;
            let g = reader.gamble(reader.field(item, "g", at)?, &format!("{at}.g"))?;
            let ext = NaturalExtension::exact(&doc.assessment).map_err(kernel("natural extension"))?;
            let Some(m) = item.get("masses") else {
                // An absent functional is confirmed by solving again.
                return Ok(find_attaining(&doc.assessment, &f, &g).map_err(kernel("attain"))?.is_none());
            };
            let m = reader.masses(m, &format!("{at}.masses"))?;
            let target = |h: &Gamble| match doc.assessment.get(h) {
                Some(v) => Ok(v.clone()),
                None => ext.lower(h),
            };
            let attains = |h: &Gamble| -> Result<bool, CliError> {
                Ok(m.evaluate(h).map_err(kernel("evaluate"))? == target(h).map_err(kernel("target"))?)
            };
            Ok(m.dominates(&doc.assessment).map_err(kernel("dominance"))?
                && m.total() == *ext.norm()
                && attains(&f)?
                && attains(&g)?)
        }
        _ => unreachable!("only verifiable commands get here"),
    }
}
