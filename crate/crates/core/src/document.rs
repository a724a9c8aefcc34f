//! The JSON workbench document and its canonical printer.
//!
//! Canonical form: object keys sorted, two-space indentation, arrays of
//! scalars on one line, a trailing newline. Parsing a canonical document
//! and emitting it again reproduces the input byte for byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quantale::{builtin_tables, BuiltinQuantale, Elem, Quantale, QuantaleTables};
use crate::vgroup::{VGroup, VHom};
use crate::vrel::VRel;

/// Nesting limit for morphism targets that are themselves documents.
const MAX_TARGET_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchDocument {
    pub quantale: QuantaleSpec,
    pub group: GroupSpec,
    pub structure: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantaleSpec {
    Builtin(BuiltinQuantale),
    Tables(TableSpec),
}

/// Explicit tables. Elements are named by `labels`; `leq[i][j]` compares
/// `labels[i]` with `labels[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub labels: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub tensor: Vec<Vec<String>>,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub table: Vec<Vec<usize>>,
}

/// A structure entry: a quantale label or an index into the carrier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Index(usize),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub target: Target,
    pub map: Vec<usize>,
}

/// A path relative to the referring document, or an inline document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    Path(String),
    Inline(Box<WorkbenchDocument>),
}

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

impl QuantaleSpec {
    /// Name and raw tables, not yet validated.
    pub fn tables(&self) -> Result<(String, QuantaleTables)> {
        match self {
            QuantaleSpec::Builtin(b) => Ok((b.to_string(), builtin_tables(*b)?)),
            QuantaleSpec::Tables(t) => {
                let index = |l: &str| {
                    t.labels
                        .iter()
                        .position(|x| x == l)
                        .ok_or_else(|| doc_err(format!("unknown quantale label `{l}`")))
                };
                for (i, l) in t.labels.iter().enumerate() {
                    if t.labels[..i].contains(l) {
                        return Err(doc_err(format!("duplicate quantale label `{l}`")));
                    }
                }
                let tensor = t
                    .tensor
                    .iter()
                    .map(|row| row.iter().map(|l| index(l)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                let tables = QuantaleTables {
                    labels: t.labels.clone(),
                    leq: t.leq.clone(),
                    tensor,
                    unit: index(&t.unit)?,
                };
                Ok((t.name.clone().unwrap_or_else(|| "custom".into()), tables))
            }
        }
    }

    pub fn build(&self) -> Result<Arc<Quantale>> {
        let (name, tables) = self.tables()?;
        Ok(Arc::new(Quantale::new(name, tables)?))
    }

    /// The builtin spec when `q` is one, explicit tables otherwise.
    pub fn of(q: &Quantale) -> Self {
        let m = (q.size() - 1) as u16;
        let candidates = [
            BuiltinQuantale::Boolean,
            BuiltinQuantale::LawvereChain { m },
            BuiltinQuantale::UltrametricChain { m },
        ];
        for b in candidates {
            if Quantale::builtin(b).map(|c| c == *q).unwrap_or(false) {
                return QuantaleSpec::Builtin(b);
            }
        }
        let t = q.tables();
        QuantaleSpec::Tables(TableSpec {
            name: Some(q.name().to_string()),
            tensor: t
                .tensor
                .iter()
                .map(|row| row.iter().map(|&i| t.labels[i].clone()).collect())
                .collect(),
            unit: t.labels[t.unit].clone(),
            labels: t.labels,
            leq: t.leq,
        })
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        FiniteGroup::from_table(self.name.clone().unwrap_or_else(|| "G".into()), self.table.clone())
    }
}

impl WorkbenchDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_canonical_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("documents serialize"))
    }

    /// The structure matrix over `q`, with shape checked against `n`.
    pub fn structure_over(&self, q: &Arc<Quantale>, n: usize) -> Result<VRel> {
        if self.structure.len() != n || self.structure.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("structure is not {n}x{n}")));
        }
        let entry = |e: &Entry| match e {
            Entry::Index(i) => q.elem_at(*i),
            Entry::Label(l) => q.elem(l).ok_or_else(|| doc_err(format!("unknown quantale label `{l}`"))),
        };
        let rows = self
            .structure
            .iter()
            .map(|r| r.iter().map(entry).collect::<Result<Vec<Elem>>>())
            .collect::<Result<Vec<_>>>()?;
        VRel::from_rows(q.clone(), rows)
    }

    /// Builds and validates the object.
    pub fn object(&self) -> Result<Arc<VGroup>> {
        let q = self.quantale.build()?;
        let g = self.group.build()?;
        let a = self.structure_over(&q, g.size())?;
        Ok(Arc::new(VGroup::new(g, a)?))
    }

    /// The document describing `g`, with structure entries as labels.
    pub fn from_vgroup(g: &VGroup) -> Self {
        let q = g.quantale();
        WorkbenchDocument {
            quantale: QuantaleSpec::of(q),
            group: GroupSpec { name: Some(g.group().name().to_string()), table: g.group().table() },
            structure: (0..g.size())
                .map(|x| (0..g.size()).map(|y| Entry::Label(q.label(g.a(x, y)).to_string())).collect())
                .collect(),
            morphisms: Vec::new(),
        }
    }

    /// Resolves a morphism target, reading paths relative to `base`.
    pub fn resolve_target(spec: &MorphismSpec, base: Option<&Path>) -> Result<(WorkbenchDocument, Option<PathBuf>)> {
        match &spec.target {
            Target::Inline(doc) => Ok(((**doc).clone(), base.map(Path::to_path_buf))),
            Target::Path(p) => {
                let path = base.map(|b| b.join(p)).unwrap_or_else(|| PathBuf::from(p));
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| doc_err(format!("target `{}` of `{}`: {e}", path.display(), spec.name)))?;
                let dir = path.parent().map(Path::to_path_buf);
                Ok((WorkbenchDocument::parse(&text)?, dir))
            }
        }
    }
}

/// A document with its object and morphisms built and validated.
#[derive(Debug, Clone)]
pub struct LoadedDocument {
    pub document: WorkbenchDocument,
    pub object: Arc<VGroup>,
    pub morphisms: Vec<(String, VHom)>,
}

impl LoadedDocument {
    pub fn morphism(&self, name: &str) -> Result<&VHom> {
        self.morphisms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
            .ok_or_else(|| doc_err(format!("no morphism named `{name}`")))
    }
}

pub fn load_document(path: &Path) -> Result<LoadedDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| doc_err(format!("{}: {e}", path.display())))?;
    load_str(&text, path.parent())
}

/// Parses and builds a document; relative targets resolve against `base`.
pub fn load_str(text: &str, base: Option<&Path>) -> Result<LoadedDocument> {
    build(WorkbenchDocument::parse(text)?, base, 0)
}

fn build(document: WorkbenchDocument, base: Option<&Path>, depth: usize) -> Result<LoadedDocument> {
    if depth > MAX_TARGET_DEPTH {
        return Err(doc_err("morphism targets nest too deeply"));
    }
    let object = document.object()?;
    let mut morphisms = Vec::new();
    for spec in &document.morphisms {
        if morphisms.iter().any(|(n, _): &(String, VHom)| *n == spec.name) {
            return Err(doc_err(format!("duplicate morphism name `{}`", spec.name)));
        }
        let (target, dir) = WorkbenchDocument::resolve_target(spec, base)?;
        let cod = build(target, dir.as_deref(), depth + 1)?.object;
        if spec.map.len() != object.size() {
            return Err(Error::DimensionMismatch(format!(
                "morphism `{}` has {} entries for {} elements",
                spec.name,
                spec.map.len(),
                object.size()
            )));
        }
        if let Some(&bad) = spec.map.iter().find(|&&y| y >= cod.size()) {
            return Err(doc_err(format!("morphism `{}` maps to {bad}, out of range", spec.name)));
        }
        let f = VHom::new(object.clone(), cod, spec.map.clone())?;
        morphisms.push((spec.name.clone(), f));
    }
    Ok(LoadedDocument { document, object, morphisms })
}

/// Canonical rendering of any JSON value.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&x.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, x, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), Value::String((*k).clone()));
                write_value(out, &map[*k], indent + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}
