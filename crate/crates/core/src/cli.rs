//! Command-line front end.
//!
//! Every command builds a JSON value; `--format text` flattens it into
//! `path: value` lines. Exit codes: 0 ok, 1 a law or theorem check failed,
//! 2 malformed input, 3 the enumeration guard was hit.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::builders::{standard_suite, SuiteLevel};
use crate::checks::run_battery;
use crate::descent::{descent_cover, eq_f, verify_cover_window};
use crate::document::{canonical_json, load_document, LoadedDocument, WorkbenchDocument};
use crate::error::{Error, Result};
use crate::factorization::{classify_morphism, em_factorize, is_covering, ml_factorize, Factorization};
use crate::quantale::{validate_quantale, Elem, Quantale};
use crate::report::Report;
use crate::torsion::{check_short_exact, decompose, pretorsion_decompose};
use crate::vgroup::{classify_object, kernel, validate_hom, validate_vgroup, VGroup, VHom};

#[derive(Debug, Parser)]
#[command(name = "vgrp", version, about = "Workbench for groups enriched in a finite quantale")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeedOrder {
    Canonical,
}

#[derive(Debug, clap::Args)]
pub struct Inputs {
    /// Workbench document; repeat to process several.
    #[arg(long = "input", required = true)]
    pub inputs: Vec<PathBuf>,

    /// Morphism to act on, by name.
    #[arg(long)]
    pub morphism: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check quantale, group, structure and morphisms separately.
    Validate(Inputs),
    /// Object class, or the four morphism classes with `--morphism`.
    Classify(Inputs),
    /// Torsion short exact sequence.
    Decompose(Inputs),
    /// Symmetric/separated short Z-exact sequence.
    Pretorsion(Inputs),
    /// (E, M) factorization of a morphism.
    Factorize(Inputs),
    /// (E', M*) factorization of a morphism.
    MlFactorize(Inputs),
    /// Covering verdict with the kernel's classification.
    Cover(Inputs),
    /// Windowed checks of the Z x X descent cover.
    Descent {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 3)]
        window: u32,
    },
    /// Run the theorem-check battery over a generated suite.
    Suite {
        #[arg(long, value_enum, default_value = "smoke")]
        suite_level: Level,
        /// Enumeration order; only the canonical order exists.
        #[arg(long, value_enum, default_value = "canonical")]
        seed_order: SeedOrder,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Smoke,
    Full,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let format = cli.format;
    let (value, code) = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let v = json!({ "error": { "exit_code": e.exit_code(), "message": e.to_string() } });
            if format == Format::Json {
                let _ = out.write_all(canonical_json(&v).as_bytes());
            }
            return e.exit_code();
        }
    };
    let text = match format {
        Format::Json => canonical_json(&value),
        Format::Text => render_text(&value),
    };
    let _ = out.write_all(text.as_bytes());
    code
}

/// Runs one command: the report and its exit code.
pub fn execute(cmd: &Command) -> Result<(Value, i32)> {
    match cmd {
        Command::Validate(i) => {
            let results: Vec<Value> = i.inputs.iter().map(validate_path).collect::<Result<_>>()?;
            let ok = results.iter().all(|v| v["ok"] == json!(true));
            Ok((many(results), if ok { 0 } else { 1 }))
        }
        Command::Classify(i) => per_input(i, |d, m| match m.filter(|_| i.morphism.is_some()) {
            Some(f) => Ok((json!({ "morphism": m_name(i, d)?, "classes": classify_morphism(f)? }), 0)),
            None => Ok((json!({ "object": d.object.to_string(), "class": classify_object(&d.object)? }), 0)),
        }),
        Command::Decompose(i) => per_input(i, |d, _| decompose_json(&d.object)),
        Command::Pretorsion(i) => per_input(i, |d, _| pretorsion_json(&d.object)),
        Command::Factorize(i) => per_input(i, |d, m| {
            let f = m.ok_or_else(|| no_morphism(i))?;
            Ok((factorization_json(&em_factorize(f)?, m_name(i, d)?), 0))
        }),
        Command::MlFactorize(i) => per_input(i, |d, m| {
            let f = m.ok_or_else(|| no_morphism(i))?;
            Ok((factorization_json(&ml_factorize(f)?, m_name(i, d)?), 0))
        }),
        Command::Cover(i) => per_input(i, |d, m| {
            let f = m.ok_or_else(|| no_morphism(i))?;
            let (k, inc) = kernel(f)?;
            Ok((
                json!({
                    "morphism": m_name(i, d)?,
                    "covering": is_covering(f)?,
                    "kernel": { "elements": inc.map(), "class": classify_object(&k)? },
                }),
                0,
            ))
        }),
        Command::Descent { inputs, window } => per_input(inputs, |d, _| descent_json(&d.object, *window)),
        Command::Suite { suite_level, .. } => {
            let level = match suite_level {
                Level::Smoke => SuiteLevel::Smoke,
                Level::Full => SuiteLevel::Full,
            };
            let suite = standard_suite(level)?;
            let outcomes = run_battery(&suite)?;
            let ok = outcomes.iter().all(|o| o.is_ok());
            Ok((
                json!({ "level": level, "objects": suite.objects.len(), "criteria": outcomes, "ok": ok }),
                if ok { 0 } else { 1 },
            ))
        }
    }
}

fn many(mut vs: Vec<Value>) -> Value {
    if vs.len() == 1 {
        vs.pop().unwrap()
    } else {
        Value::Array(vs)
    }
}

fn no_morphism(i: &Inputs) -> Error {
    Error::Structural(match &i.morphism {
        Some(m) => format!("no morphism named `{m}`"),
        None => "this command needs a morphism; pass --morphism".into(),
    })
}

/// The morphism selected by `--morphism`, or the only one in the document.
fn selected<'a>(i: &Inputs, d: &'a LoadedDocument) -> Result<Option<&'a VHom>> {
    match &i.morphism {
        Some(name) => d.morphism(name).map(Some),
        None if d.morphisms.len() == 1 => Ok(Some(&d.morphisms[0].1)),
        None => Ok(None),
    }
}

fn m_name(i: &Inputs, d: &LoadedDocument) -> Result<String> {
    match &i.morphism {
        Some(n) => Ok(n.clone()),
        None => Ok(d.morphisms.first().map(|m| m.0.clone()).ok_or_else(|| no_morphism(i))?),
    }
}

fn per_input(
    i: &Inputs,
    f: impl Fn(&LoadedDocument, Option<&VHom>) -> Result<(Value, i32)>,
) -> Result<(Value, i32)> {
    let mut values = Vec::new();
    let mut code = 0;
    for path in &i.inputs {
        let d = load_document(path)?;
        let (v, c) = f(&d, selected(i, &d)?)?;
        values.push(v);
        code = code.max(c);
    }
    Ok((many(values), code))
}

fn doc_value(g: &VGroup) -> Value {
    serde_json::to_value(WorkbenchDocument::from_vgroup(g)).expect("documents serialize")
}

fn labels(q: &Quantale, xs: &[Elem]) -> Vec<String> {
    xs.iter().map(|&u| q.label(u).to_string()).collect()
}

fn decompose_json(g: &std::sync::Arc<VGroup>) -> Result<(Value, i32)> {
    let d = decompose(g)?;
    let ses = check_short_exact(&d.injection, &d.projection);
    let code = if ses.is_ok() { 0 } else { 1 };
    Ok((
        json!({
            "object": g.to_string(),
            "torsion_part": d.torsion_elements,
            "kernel": doc_value(&d.torsion_part),
            "quotient": doc_value(&d.quotient),
            "injection": d.injection.map(),
            "projection": d.projection.map(),
            "kernel_indiscrete": d.torsion_part.is_indiscrete(),
            "quotient_separated": d.quotient.is_separated(),
            "short_exact": ses,
        }),
        code,
    ))
}

fn pretorsion_json(g: &std::sync::Arc<VGroup>) -> Result<(Value, i32)> {
    let p = pretorsion_decompose(g)?;
    let ok = p.verification.is_ok();
    Ok((
        json!({
            "object": g.to_string(),
            "symmetric_part": doc_value(&p.symmetric_part),
            "quotient": doc_value(&p.quotient),
            "projection": p.projection.map(),
            "verification": p.verification,
            "ok": ok,
        }),
        if ok { 0 } else { 1 },
    ))
}

fn factorization_json(fac: &Factorization, name: String) -> Value {
    json!({
        "morphism": name,
        "system": fac.system,
        "e": fac.e.map(),
        "middle": doc_value(&fac.middle),
        "m": fac.m.map(),
        "verified": true,
    })
}

fn descent_json(g: &std::sync::Arc<VGroup>, n: u32) -> Result<(Value, i32)> {
    let l = descent_cover(g)?;
    let w = verify_cover_window(&l, n)?;
    let e = eq_f(&l, n)?;
    let ok = w.is_ok() && e.is_ok();
    let q = g.quantale();
    Ok((
        json!({
            "base": g.to_string(),
            "radius": n,
            "window": {
                "points": w.points,
                "report": w.report,
                "finality_join": labels(q, &w.finality_join),
                "stable_at_next_radius": w.stable_at_next_radius,
            },
            "eq_f": e,
            "ok": ok,
        }),
        if ok { 0 } else { 1 },
    ))
}

/// Validation that reports each layer separately. Malformed input is still
/// an error; law violations are reported with their witnesses.
fn validate_path(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
    let doc = WorkbenchDocument::parse(&text)?;
    let (name, tables) = doc.quantale.tables()?;
    let qr = validate_quantale(&tables)?;
    let mut out = json!({ "quantale": { "name": name, "report": qr } });
    if !qr.is_ok() {
        out["ok"] = json!(false);
        return Ok(out);
    }
    let q = std::sync::Arc::new(Quantale::new(name, tables)?);
    let group = doc.group.build()?;
    out["group"] = json!({ "name": group.name(), "order": group.size() });
    let a = doc.structure_over(&q, group.size())?;
    let v = validate_vgroup(&group, &a)?;
    let mut ok = v.is_ok();
    out["structure"] = json!({
        "shift_route": v.shift_route,
        "functor_route": v.functor_route,
        "nonabelian_discrepancy": v.nonabelian_discrepancy,
    });
    let mut ms = Vec::new();
    if ok {
        let object = std::sync::Arc::new(VGroup::new(group, a)?);
        let base = path.parent();
        for spec in &doc.morphisms {
            let (target, _) = WorkbenchDocument::resolve_target(spec, base)?;
            let cod = target.object()?;
            if spec.map.len() != object.size() || spec.map.iter().any(|&y| y >= cod.size()) {
                return Err(Error::DimensionMismatch(format!("morphism `{}` has a malformed map", spec.name)));
            }
            let r: Report = validate_hom(&object, &cod, &spec.map)?;
            ok &= r.is_ok();
            ms.push(json!({ "name": spec.name, "report": r }));
        }
    }
    out["morphisms"] = Value::Array(ms);
    out["ok"] = json!(ok);
    Ok(out)
}

/// `path: value` lines, one per scalar or scalar array.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    flatten(v, String::new(), &mut out);
    out
}

fn flatten(v: &Value, path: String, out: &mut String) {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for k in keys {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                flatten(&map[k], p, out);
            }
        }
        Value::Array(items) if !items.is_empty() && !items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(x, format!("{path}[{i}]"), out);
            }
        }
        scalar => {
            let s = match scalar {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{path}: {s}\n"));
        }
    }
}
