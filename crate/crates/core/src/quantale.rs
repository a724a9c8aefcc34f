//! Finite commutative unital quantales whose underlying lattice is a frame.
//!
//! Elements are opaque indices into explicit tables. The order is stored as a
//! `leq` table; binary joins and meets are derived from it once, when the
//! tables are validated, and every later operation is a lookup.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::Report;

/// An element of a [`Quantale`], identified by its index in the carrier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u16);

impl Elem {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Raw, unvalidated quantale tables as they come from a document or a caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantaleTables {
    pub labels: Vec<String>,
    /// `leq[u][v]` is true when `u <= v`.
    pub leq: Vec<Vec<bool>>,
    /// `tensor[u][v]` is the index of `u ⊗ v`.
    pub tensor: Vec<Vec<usize>>,
    pub unit: usize,
}

/// The built-in families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case")]
pub enum BuiltinQuantale {
    Boolean,
    /// `{0..m}` under reversed numeric order with truncated addition.
    LawvereChain { m: u16 },
    /// `{0..m}` under reversed numeric order with `max` as tensor.
    UltrametricChain { m: u16 },
}

impl fmt::Display for BuiltinQuantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinQuantale::Boolean => write!(f, "boolean"),
            BuiltinQuantale::LawvereChain { m } => write!(f, "lawvere_chain({m})"),
            BuiltinQuantale::UltrametricChain { m } => write!(f, "ultrametric_chain({m})"),
        }
    }
}

/// A validated finite quantale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantale {
    name: String,
    labels: Vec<String>,
    n: usize,
    leq: Vec<bool>,
    tensor: Vec<Elem>,
    join: Vec<Elem>,
    meet: Vec<Elem>,
    unit: Elem,
    bottom: Elem,
    top: Elem,
}

fn check_shape(t: &QuantaleTables) -> Result<()> {
    let n = t.labels.len();
    if n == 0 {
        return Err(Error::Structural("quantale has no elements".into()));
    }
    if n > u16::MAX as usize {
        return Err(Error::Structural(format!("quantale with {n} elements is too large")));
    }
    if t.leq.len() != n || t.leq.iter().any(|row| row.len() != n) {
        return Err(Error::Structural(format!("leq table is not {n}x{n}")));
    }
    if t.tensor.len() != n || t.tensor.iter().any(|row| row.len() != n) {
        return Err(Error::Structural(format!("tensor table is not {n}x{n}")));
    }
    for (u, row) in t.tensor.iter().enumerate() {
        for (v, &w) in row.iter().enumerate() {
            if w >= n {
                return Err(Error::Structural(format!(
                    "tensor[{u}][{v}] = {w} is out of range"
                )));
            }
        }
    }
    if t.unit >= n {
        return Err(Error::Structural(format!("unit index {} is out of range", t.unit)));
    }
    Ok(())
}

/// Least element of `candidates` w.r.t. `leq`, if one exists.
fn least(candidates: &[usize], leq: &dyn Fn(usize, usize) -> bool) -> Option<usize> {
    candidates
        .iter()
        .copied()
        .find(|&c| candidates.iter().all(|&d| leq(c, d)))
}

fn greatest(candidates: &[usize], leq: &dyn Fn(usize, usize) -> bool) -> Option<usize> {
    candidates
        .iter()
        .copied()
        .find(|&c| candidates.iter().all(|&d| leq(d, c)))
}

/// Derived lattice data; `None` entries mean the bound does not exist.
struct Lattice {
    join: Vec<Option<usize>>,
    meet: Vec<Option<usize>>,
    bottom: Option<usize>,
    top: Option<usize>,
}

fn derive_lattice(t: &QuantaleTables) -> Lattice {
    let n = t.labels.len();
    let leq = |u: usize, v: usize| t.leq[u][v];
    let all: Vec<usize> = (0..n).collect();
    let mut join = vec![None; n * n];
    let mut meet = vec![None; n * n];
    for u in 0..n {
        for v in 0..n {
            let upper: Vec<usize> = all.iter().copied().filter(|&w| leq(u, w) && leq(v, w)).collect();
            let lower: Vec<usize> = all.iter().copied().filter(|&w| leq(w, u) && leq(w, v)).collect();
            join[u * n + v] = least(&upper, &leq);
            meet[u * n + v] = greatest(&lower, &leq);
        }
    }
    Lattice { join, meet, bottom: least(&all, &leq), top: greatest(&all, &leq) }
}

/// Exhaustively checks every quantale law on raw tables.
///
/// Returns `Err` only for malformed tables (ragged rows, indices out of
/// range). Law violations are reported in the returned [`Report`], each with
/// the first witness tuple found.
pub fn validate_quantale(t: &QuantaleTables) -> Result<Report> {
    check_shape(t)?;
    let n = t.labels.len();
    let mut report = Report::new();
    let leq = |u: usize, v: usize| t.leq[u][v];
    let ten = |u: usize, v: usize| t.tensor[u][v];

    for u in 0..n {
        if !leq(u, u) {
            report.fail("leq-reflexive", vec![u]);
        }
        for v in 0..n {
            if u != v && leq(u, v) && leq(v, u) {
                report.fail("leq-antisymmetric", vec![u, v]);
            }
            for w in 0..n {
                if leq(u, v) && leq(v, w) && !leq(u, w) {
                    report.fail("leq-transitive", vec![u, v, w]);
                }
            }
        }
    }
    if !report.is_ok() {
        // Bounds are meaningless without a partial order.
        return Ok(report);
    }

    let lat = derive_lattice(t);
    let (bottom, top) = match (lat.bottom, lat.top) {
        (Some(b), Some(t)) => (b, t),
        (b, tp) => {
            if b.is_none() {
                report.fail("bottom-exists", vec![]);
            }
            if tp.is_none() {
                report.fail("top-exists", vec![]);
            }
            return Ok(report);
        }
    };
    let mut lattice_ok = true;
    for u in 0..n {
        for v in 0..n {
            if lat.join[u * n + v].is_none() {
                report.fail("join-exists", vec![u, v]);
                lattice_ok = false;
            }
            if lat.meet[u * n + v].is_none() {
                report.fail("meet-exists", vec![u, v]);
                lattice_ok = false;
            }
        }
    }
    if bottom == top {
        report.fail("non-trivial", vec![bottom]);
    }

    let unit = t.unit;
    for u in 0..n {
        if ten(u, unit) != u || ten(unit, u) != u {
            report.fail("tensor-unit", vec![u]);
        }
        if ten(u, bottom) != bottom || ten(bottom, u) != bottom {
            report.fail("tensor-annihilates-bottom", vec![u]);
        }
        for v in 0..n {
            if ten(u, v) != ten(v, u) {
                report.fail("tensor-commutative", vec![u, v]);
            }
            for w in 0..n {
                if ten(ten(u, v), w) != ten(u, ten(v, w)) {
                    report.fail("tensor-associative", vec![u, v, w]);
                }
            }
        }
    }

    if lattice_ok {
        let join = |u: usize, v: usize| lat.join[u * n + v].unwrap();
        let meet = |u: usize, v: usize| lat.meet[u * n + v].unwrap();
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if ten(u, join(v, w)) != join(ten(u, v), ten(u, w)) {
                        report.fail("tensor-distributes-join", vec![u, v, w]);
                    }
                    if meet(u, join(v, w)) != join(meet(u, v), meet(u, w)) {
                        report.fail("frame-distributive", vec![u, v, w]);
                    }
                }
            }
        }
    }
    Ok(report)
}

impl Quantale {
    /// Validates `tables` and builds the quantale.
    pub fn new(name: impl Into<String>, tables: QuantaleTables) -> Result<Self> {
        let report = validate_quantale(&tables)?;
        if !report.is_ok() {
            return Err(Error::Laws { what: "quantale", report });
        }
        let n = tables.labels.len();
        let lat = derive_lattice(&tables);
        let e = |i: usize| Elem(i as u16);
        Ok(Quantale {
            name: name.into(),
            n,
            leq: tables.leq.iter().flatten().copied().collect(),
            tensor: tables.tensor.iter().flatten().map(|&w| e(w)).collect(),
            join: lat.join.iter().map(|j| e(j.unwrap())).collect(),
            meet: lat.meet.iter().map(|m| e(m.unwrap())).collect(),
            unit: e(tables.unit),
            bottom: e(lat.bottom.unwrap()),
            top: e(lat.top.unwrap()),
            labels: tables.labels,
        })
    }

    pub fn builtin(spec: BuiltinQuantale) -> Result<Self> {
        Self::new(spec.to_string(), builtin_tables(spec)?)
    }

    pub fn boolean() -> Arc<Self> {
        Arc::new(Self::builtin(BuiltinQuantale::Boolean).expect("boolean quantale"))
    }

    pub fn lawvere_chain(m: u16) -> Result<Arc<Self>> {
        Self::builtin(BuiltinQuantale::LawvereChain { m }).map(Arc::new)
    }

    pub fn ultrametric_chain(m: u16) -> Result<Arc<Self>> {
        Self::builtin(BuiltinQuantale::UltrametricChain { m }).map(Arc::new)
    }

    /// Re-exports the validated tables.
    pub fn tables(&self) -> QuantaleTables {
        let n = self.n;
        QuantaleTables {
            labels: self.labels.clone(),
            leq: (0..n).map(|u| self.leq[u * n..(u + 1) * n].to_vec()).collect(),
            tensor: (0..n)
                .map(|u| (0..n).map(|v| self.tensor[u * n + v].index()).collect())
                .collect(),
            unit: self.unit.index(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.n as u16).map(Elem)
    }

    pub fn label(&self, u: Elem) -> &str {
        &self.labels[u.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elem(&self, label: &str) -> Option<Elem> {
        self.labels.iter().position(|l| l == label).map(|i| Elem(i as u16))
    }

    pub fn elem_at(&self, index: usize) -> Result<Elem> {
        if index < self.n {
            Ok(Elem(index as u16))
        } else {
            Err(Error::Structural(format!(
                "element index {index} out of range for a quantale of size {}",
                self.n
            )))
        }
    }

    #[inline]
    pub fn contains(&self, u: Elem) -> bool {
        u.index() < self.n
    }

    #[inline]
    pub fn unit(&self) -> Elem {
        self.unit
    }

    #[inline]
    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    #[inline]
    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, u: Elem, v: Elem) -> bool {
        self.leq[u.index() * self.n + v.index()]
    }

    #[inline]
    pub fn join(&self, u: Elem, v: Elem) -> Elem {
        self.join[u.index() * self.n + v.index()]
    }

    #[inline]
    pub fn meet(&self, u: Elem, v: Elem) -> Elem {
        self.meet[u.index() * self.n + v.index()]
    }

    #[inline]
    pub fn tensor(&self, u: Elem, v: Elem) -> Elem {
        self.tensor[u.index() * self.n + v.index()]
    }

    /// `u >= k`, the threshold used by separation and `N_X`.
    #[inline]
    pub fn above_unit(&self, u: Elem) -> bool {
        self.leq(self.unit, u)
    }

    /// Join of an arbitrary finite family; the empty join is bottom.
    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.bottom, |acc, u| self.join(acc, u))
    }

    /// Meet of a finite family; the empty meet is top.
    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(self.top, |acc, u| self.meet(acc, u))
    }

    pub fn is_integral(&self) -> bool {
        self.unit == self.top
    }
}

impl fmt::Display for Quantale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Tables for a built-in family. `m = 0` would collapse a chain to the
/// trivial quantale and is rejected.
pub fn builtin_tables(spec: BuiltinQuantale) -> Result<QuantaleTables> {
    match spec {
        BuiltinQuantale::Boolean => Ok(QuantaleTables {
            labels: vec!["bot".into(), "top".into()],
            leq: vec![vec![true, true], vec![false, true]],
            tensor: vec![vec![0, 0], vec![0, 1]],
            unit: 1,
        }),
        BuiltinQuantale::LawvereChain { m } | BuiltinQuantale::UltrametricChain { m } => {
            if m == 0 {
                return Err(Error::Structural(format!(
                    "{spec} degenerates to the trivial quantale"
                )));
            }
            let m = m as usize;
            let lawvere = matches!(spec, BuiltinQuantale::LawvereChain { .. });
            Ok(QuantaleTables {
                labels: (0..=m).map(|i| i.to_string()).collect(),
                // Reversed numeric order: 0 is top, m is bottom.
                leq: (0..=m).map(|u| (0..=m).map(|v| u >= v).collect()).collect(),
                tensor: (0..=m)
                    .map(|u| {
                        (0..=m)
                            .map(|v| if lawvere { (u + v).min(m) } else { u.max(v) })
                            .collect()
                    })
                    .collect(),
                unit: 0,
            })
        }
    }
}

/// Accessor bundle for a pair of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairOps {
    pub leq: bool,
    pub join: Elem,
    pub meet: Elem,
    pub tensor: Elem,
}

pub fn q_ops(q: &Quantale, u: Elem, v: Elem) -> Result<PairOps> {
    if !q.contains(u) || !q.contains(v) {
        return Err(Error::Structural(format!("element out of range: {u}, {v}")));
    }
    Ok(PairOps { leq: q.leq(u, v), join: q.join(u, v), meet: q.meet(u, v), tensor: q.tensor(u, v) })
}
