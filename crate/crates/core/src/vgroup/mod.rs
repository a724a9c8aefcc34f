//! V-groups, V-homomorphisms and their classification.
//!
//! A V-group is a finite group carrying a V-relation `a` such that addition
//! is a V-functor. [`validate_vgroup`] decides this twice: once through
//! reflexivity, transitivity and right shift-invariance, once through the
//! direct inequality `a(x1,x2) ⊗ a(y1,y2) ≤ a(x1+y1, x2+y2)`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quantale::{Elem, Quantale};
use crate::report::Report;
use crate::vrel::{same_quantale, VRel};

mod enumerate;
mod iso;
mod limits;

pub use enumerate::{
    candidate_count, delta_candidates, enumerate_homs, enumerate_structures, reflexive_graphs,
    ENUMERATION_LIMIT,
};
pub use iso::{find_isomorphism, is_isomorphism};
pub use limits::{
    classify_hom, coequalizer, cokernel, equalizer, final_structure, image_factorize,
    induced_subobject, is_pullback_square, kernel, product, pullback, quotient_object, HomClass,
    ImageFactorization, Product, Pullback,
};

/// A validated V-group.
#[derive(Debug, Clone)]
pub struct VGroup {
    group: FiniteGroup,
    a: VRel,
}

impl PartialEq for VGroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.a == other.a
    }
}

impl Eq for VGroup {}

/// Outcome of [`validate_vgroup`].
#[derive(Debug, Clone, Default, Serialize)]
pub struct VGroupValidation {
    /// Violations of (R), (T) and right shift-invariance.
    pub shift_route: Report,
    /// Violations of (R) and of `+` being a V-functor.
    pub functor_route: Report,
    /// Set when the two routes disagree on a nonabelian group. On abelian
    /// groups disagreement is a theorem-check failure instead.
    pub nonabelian_discrepancy: bool,
}

impl VGroupValidation {
    /// The direct functor condition decides validity.
    pub fn is_ok(&self) -> bool {
        self.functor_route.is_ok()
    }

    pub fn report(&self) -> Report {
        let mut r = self.shift_route.clone();
        r.extend_prefixed("", self.functor_route.clone());
        r
    }
}

fn check_square(group: &FiniteGroup, a: &VRel) -> Result<()> {
    let n = group.size();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "structure is {}x{} but the group has {n} elements",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

fn reflexivity(group: &FiniteGroup, a: &VRel, report: &mut Report) {
    let q = a.quantale();
    for x in 0..group.size() {
        if !q.above_unit(a.get(x, x)) {
            report.fail("R", vec![x]);
            return;
        }
    }
}

fn transitivity(n: usize, a: &VRel, report: &mut Report) {
    let q = a.quantale();
    for x in 0..n {
        for y in 0..n {
            let axy = a.get(x, y);
            if axy == q.bottom() {
                continue;
            }
            for z in 0..n {
                if !q.leq(q.tensor(axy, a.get(y, z)), a.get(x, z)) {
                    report.fail("T", vec![x, y, z]);
                    return;
                }
            }
        }
    }
}

/// `a(x', x'') = a(x' + x, x'' + x)`; witness `(x, x', x'')`.
fn right_shift(group: &FiniteGroup, a: &VRel, report: &mut Report) {
    let n = group.size();
    for s in 0..n {
        for x in 0..n {
            for y in 0..n {
                if a.get(x, y) != a.get(group.add(x, s), group.add(y, s)) {
                    report.fail("shift-invariance", vec![s, x, y]);
                    return;
                }
            }
        }
    }
}

fn left_shift(group: &FiniteGroup, a: &VRel, report: &mut Report) {
    let n = group.size();
    for s in 0..n {
        for x in 0..n {
            for y in 0..n {
                if a.get(x, y) != a.get(group.add(s, x), group.add(s, y)) {
                    report.fail("left-shift-invariance", vec![s, x, y]);
                    return;
                }
            }
        }
    }
}

/// `a(x1,x2) ⊗ a(y1,y2) ≤ a(x1+y1, x2+y2)`; witness `(x1, x2, y1, y2)`.
fn plus_is_functor(group: &FiniteGroup, a: &VRel, report: &mut Report) {
    let n = group.size();
    let q = a.quantale();
    for x1 in 0..n {
        for x2 in 0..n {
            let ax = a.get(x1, x2);
            if ax == q.bottom() {
                continue;
            }
            for y1 in 0..n {
                let s1 = group.add(x1, y1);
                for y2 in 0..n {
                    if !q.leq(q.tensor(ax, a.get(y1, y2)), a.get(s1, group.add(x2, y2))) {
                        report.fail("plus-functor", vec![x1, x2, y1, y2]);
                        return;
                    }
                }
            }
        }
    }
}

/// Checks a candidate structure by both routes and cross-checks them.
pub fn validate_vgroup(group: &FiniteGroup, a: &VRel) -> Result<VGroupValidation> {
    check_square(group, a)?;
    let mut v = VGroupValidation::default();
    reflexivity(group, a, &mut v.shift_route);
    transitivity(group.size(), a, &mut v.shift_route);
    right_shift(group, a, &mut v.shift_route);
    reflexivity(group, a, &mut v.functor_route);
    plus_is_functor(group, a, &mut v.functor_route);
    if v.shift_route.is_ok() != v.functor_route.is_ok() {
        if group.is_abelian() {
            return Err(Error::theorem(
                "shift-invariance-equivalence",
                format!(
                    "on abelian {group}: shift route {}, functor route {}",
                    v.shift_route, v.functor_route
                ),
            ));
        }
        v.nonabelian_discrepancy = true;
    }
    Ok(v)
}

/// Fast O(n³) validity test for structures produced by constructions:
/// (R), (T) and two-sided shift-invariance, which together are equivalent
/// to `+` being a V-functor on any group.
pub(crate) fn quick_check(group: &FiniteGroup, a: &VRel) -> Report {
    let mut r = Report::new();
    reflexivity(group, a, &mut r);
    transitivity(group.size(), a, &mut r);
    right_shift(group, a, &mut r);
    left_shift(group, a, &mut r);
    r
}

impl VGroup {
    /// Validates and builds a V-group.
    pub fn new(group: FiniteGroup, a: VRel) -> Result<Self> {
        let v = validate_vgroup(&group, &a)?;
        if !v.is_ok() {
            return Err(Error::Laws { what: "V-group", report: v.report() });
        }
        Ok(VGroup { group, a })
    }

    /// Builds an object that a construction guarantees to be a V-group,
    /// re-verifying the guarantee.
    pub(crate) fn derived(group: FiniteGroup, a: VRel, check: &'static str) -> Result<Self> {
        check_square(&group, &a)?;
        let r = quick_check(&group, &a);
        if !r.is_ok() {
            return Err(Error::theorem(check, format!("constructed structure on {group}: {r}")));
        }
        Ok(VGroup { group, a })
    }

    pub fn from_delta(group: FiniteGroup, q: Arc<Quantale>, delta: &[Elem]) -> Result<Self> {
        let a = structure_from_delta(&group, q, delta)?;
        Self::new(group, a)
    }

    pub fn discrete(group: FiniteGroup, q: Arc<Quantale>) -> Self {
        let a = VRel::identity(q, group.size());
        VGroup { group, a }
    }

    /// All entries top. Only a V-group when the quantale is integral or
    /// when `k ≤ ⊤ ⊗ ⊤`; validated.
    pub fn indiscrete(group: FiniteGroup, q: Arc<Quantale>) -> Result<Self> {
        let n = group.size();
        let top = q.top();
        Self::new(group, VRel::constant(q, n, n, top))
    }

    /// The one-element V-group with `a(0,0) = u`.
    pub fn point(q: Arc<Quantale>, u: Elem) -> Result<Self> {
        Self::new(FiniteGroup::trivial(), VRel::constant(q, 1, 1, u))
    }

    /// The zero object over an integral quantale.
    pub fn zero_object(q: Arc<Quantale>) -> Self {
        let top = q.top();
        VGroup { group: FiniteGroup::trivial(), a: VRel::constant(q, 1, 1, top) }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn structure(&self) -> &VRel {
        &self.a
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        self.a.quantale()
    }

    pub fn size(&self) -> usize {
        self.group.size()
    }

    #[inline]
    pub fn a(&self, x: usize, y: usize) -> Elem {
        self.a.get(x, y)
    }

    /// `δ(x) = a(0, x)`.
    pub fn delta(&self) -> Vec<Elem> {
        (0..self.size()).map(|x| self.a(self.group.zero(), x)).collect()
    }

    /// Two-variable separation: `a(x,y) ≥ k` and `a(y,x) ≥ k` imply `x = y`.
    pub fn is_separated(&self) -> bool {
        let q = self.quantale();
        let n = self.size();
        (0..n).all(|x| {
            (0..n).all(|y| x == y || !(q.above_unit(self.a(x, y)) && q.above_unit(self.a(y, x))))
        })
    }

    pub fn is_indiscrete(&self) -> bool {
        let top = self.quantale().top();
        self.a.entries().iter().all(|&u| u == top)
    }

    pub fn is_symmetric(&self) -> bool {
        self.a == self.a.converse()
    }

    pub fn is_discrete(&self) -> bool {
        self.a == VRel::identity(self.quantale().clone(), self.size())
    }

    pub fn same_quantale(&self, other: &VGroup) -> bool {
        same_quantale(self.quantale(), other.quantale())
    }
}

impl fmt::Display for VGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = self.quantale();
        let d: Vec<&str> = self.delta().into_iter().map(|u| q.label(u)).collect();
        write!(f, "({}, delta=[{}], {})", self.group, d.join(","), q)
    }
}

/// `a(x, y) = δ(y + (−x))`. The result still has to be validated.
pub fn structure_from_delta(group: &FiniteGroup, q: Arc<Quantale>, delta: &[Elem]) -> Result<VRel> {
    let n = group.size();
    if delta.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "delta has {} entries for a group of {n} elements",
            delta.len()
        )));
    }
    if let Some(bad) = delta.iter().find(|&&u| !q.contains(u)) {
        return Err(Error::Structural(format!("delta entry {bad} is not in {q}")));
    }
    Ok(VRel::from_fn(q, n, n, |x, y| delta[group.sub(y, x)]))
}

/// The four membership flags of an object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ObjectClass {
    pub indiscrete: bool,
    pub separated: bool,
    pub symmetric: bool,
    pub discrete: bool,
}

/// Computes the object flags. Separation is decided by the shift-reduced
/// test `a(x,0) ≥ k ∧ a(0,x) ≥ k ⇒ x = 0` and cross-checked against the
/// two-variable form.
pub fn classify_object(g: &VGroup) -> Result<ObjectClass> {
    let q = g.quantale();
    let zero = g.group.zero();
    let reduced = (0..g.size())
        .all(|x| x == zero || !(q.above_unit(g.a(x, zero)) && q.above_unit(g.a(zero, x))));
    let full = g.is_separated();
    if reduced != full {
        return Err(Error::theorem(
            "separation-reduction",
            format!("{g}: reduced form {reduced}, two-variable form {full}"),
        ));
    }
    Ok(ObjectClass {
        indiscrete: g.is_indiscrete(),
        separated: full,
        symmetric: g.is_symmetric(),
        discrete: g.is_discrete(),
    })
}

/// A validated V-homomorphism.
#[derive(Debug, Clone)]
pub struct VHom {
    dom: Arc<VGroup>,
    cod: Arc<VGroup>,
    map: Vec<usize>,
}

impl PartialEq for VHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map && *self.dom == *other.dom && *self.cod == *other.cod
    }
}

impl Eq for VHom {}

/// Checks the group-homomorphism and V-functor laws for `map: dom → cod`.
///
/// Malformed input (wrong length, values out of range, different
/// quantales) is an error; failed laws go in the report with witnesses
/// `(x, y)`.
pub fn validate_hom(dom: &VGroup, cod: &VGroup, map: &[usize]) -> Result<Report> {
    if !dom.same_quantale(cod) {
        return Err(Error::QuantaleMismatch);
    }
    if map.len() != dom.size() {
        return Err(Error::DimensionMismatch(format!(
            "map has {} entries for a domain of {} elements",
            map.len(),
            dom.size()
        )));
    }
    if let Some(&bad) = map.iter().find(|&&y| y >= cod.size()) {
        return Err(Error::Structural(format!("map value {bad} outside the codomain")));
    }
    let mut report = Report::new();
    if let Some((x, y)) = dom.group.hom_failure(&cod.group, map) {
        report.fail("group-hom", vec![x, y]);
    }
    let q = dom.quantale();
    'outer: for x in 0..dom.size() {
        for y in 0..dom.size() {
            if !q.leq(dom.a(x, y), cod.a(map[x], map[y])) {
                report.fail("v-functor", vec![x, y]);
                break 'outer;
            }
        }
    }
    Ok(report)
}

impl VHom {
    pub fn new(dom: Arc<VGroup>, cod: Arc<VGroup>, map: Vec<usize>) -> Result<Self> {
        let report = validate_hom(&dom, &cod, &map)?;
        if !report.is_ok() {
            return Err(Error::Laws { what: "V-homomorphism", report });
        }
        Ok(VHom { dom, cod, map })
    }

    /// For maps a construction guarantees to be V-homomorphisms; the
    /// guarantee is re-verified.
    pub(crate) fn derived(
        dom: Arc<VGroup>,
        cod: Arc<VGroup>,
        map: Vec<usize>,
        check: &'static str,
    ) -> Result<Self> {
        let report = validate_hom(&dom, &cod, &map)?;
        if !report.is_ok() {
            return Err(Error::theorem(check, format!("{dom} -> {cod} via {map:?}: {report}")));
        }
        Ok(VHom { dom, cod, map })
    }

    pub(crate) fn new_unchecked(dom: Arc<VGroup>, cod: Arc<VGroup>, map: Vec<usize>) -> Self {
        VHom { dom, cod, map }
    }

    pub fn identity(g: Arc<VGroup>) -> Self {
        let map = (0..g.size()).collect();
        VHom { dom: g.clone(), cod: g, map }
    }

    /// The constant-zero map. A V-homomorphism whenever `cod`'s zero is
    /// related to itself at top, e.g. over an integral quantale.
    pub fn zero(dom: Arc<VGroup>, cod: Arc<VGroup>) -> Result<Self> {
        let map = vec![cod.group.zero(); dom.size()];
        Self::new(dom, cod, map)
    }

    pub fn dom(&self) -> &Arc<VGroup> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<VGroup> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &VHom) -> Result<VHom> {
        if *self.cod != *next.dom {
            return Err(Error::DimensionMismatch("composing non-composable morphisms".into()));
        }
        let map = self.map.iter().map(|&x| next.map[x]).collect();
        Ok(VHom { dom: self.dom.clone(), cod: next.cod.clone(), map })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_zero(&self) -> bool {
        let z = self.cod.group.zero();
        self.map.iter().all(|&y| y == z)
    }

    /// Sorted set image.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// Group-theoretic kernel, sorted.
    pub fn kernel_elements(&self) -> Vec<usize> {
        let z = self.cod.group.zero();
        (0..self.dom.size()).filter(|&x| self.map[x] == z).collect()
    }

    /// Preimage of a subset of the codomain, sorted.
    pub fn preimage(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.dom.size()).filter(|&x| subset.contains(&self.map[x])).collect()
    }

    /// The graph of the map as a V-relation.
    pub fn as_vrel(&self) -> VRel {
        VRel::from_function(self.dom.quantale().clone(), &self.map, self.cod.size())
            .expect("map values are in range")
    }
}

impl fmt::Display for VHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} via {:?}", self.dom, self.cod, self.map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> Arc<Quantale> {
        Quantale::boolean()
    }

    fn delta(q: &Quantale, labels: &[&str]) -> Vec<Elem> {
        labels.iter().map(|l| q.elem(l).unwrap()).collect()
    }

    #[test]
    fn discrete_and_indiscrete_validate() {
        for n in 1..=4 {
            let g = FiniteGroup::cyclic(n);
            let d = VGroup::discrete(g.clone(), b());
            assert!(validate_vgroup(d.group(), d.structure()).unwrap().is_ok());
            VGroup::indiscrete(g, b()).unwrap();
        }
    }

    #[test]
    fn transitivity_failure_on_z3() {
        let q = b();
        let g = FiniteGroup::cyclic(3);
        let a = structure_from_delta(&g, q.clone(), &delta(&q, &["top", "top", "bot"])).unwrap();
        let v = validate_vgroup(&g, &a).unwrap();
        assert!(!v.is_ok());
        assert_eq!(v.shift_route.witness("T"), Some(&[0, 1, 2][..]));
    }

    #[test]
    fn z4_even_preorder_is_valid() {
        let q = b();
        let g = VGroup::from_delta(FiniteGroup::cyclic(4), q.clone(), &delta(&q, &["top", "bot", "top", "bot"]))
            .unwrap();
        let c = classify_object(&g).unwrap();
        assert!(!c.separated && c.symmetric && !c.indiscrete && !c.discrete);
    }

    #[test]
    fn object_classes() {
        let q = b();
        let z2 = FiniteGroup::cyclic(2);
        let d = classify_object(&VGroup::discrete(z2.clone(), q.clone())).unwrap();
        assert_eq!(d, ObjectClass { indiscrete: false, separated: true, symmetric: true, discrete: true });
        let i = classify_object(&VGroup::indiscrete(z2, q).unwrap()).unwrap();
        assert_eq!(i, ObjectClass { indiscrete: true, separated: false, symmetric: true, discrete: false });

        let l = Quantale::lawvere_chain(2).unwrap();
        let g = VGroup::from_delta(FiniteGroup::cyclic(4), l.clone(), &delta(&l, &["0", "1", "2", "2"])).unwrap();
        let c = classify_object(&g).unwrap();
        assert_eq!(c, ObjectClass { indiscrete: false, separated: true, symmetric: false, discrete: false });
    }

    #[test]
    fn homomorphism_checks() {
        let q = b();
        let z4 = Arc::new(
            VGroup::from_delta(FiniteGroup::cyclic(4), q.clone(), &delta(&q, &["top", "bot", "top", "bot"])).unwrap(),
        );
        let z2 = Arc::new(VGroup::discrete(FiniteGroup::cyclic(2), q.clone()));
        VHom::new(z4.clone(), z2.clone(), vec![0, 1, 0, 1]).unwrap();
        VHom::identity(z4.clone());
        VHom::zero(z4.clone(), z2.clone()).unwrap();
        let r = validate_hom(&z4, &z2, &[0, 1, 1, 0]).unwrap();
        assert!(r.has("group-hom"));
        let ind = Arc::new(VGroup::indiscrete(FiniteGroup::cyclic(2), q).unwrap());
        let r = validate_hom(&ind, &z2, &[0, 1]).unwrap();
        assert_eq!(r.witness("v-functor"), Some(&[0, 1][..]));
        assert!(validate_hom(&ind, &z2, &[0]).is_err());
    }

    #[test]
    fn nonabelian_right_invariant_preorder_is_a_finding() {
        // Cone {e, (12)} in S3 is a non-normal subgroup: right-invariant but
        // addition is not monotone.
        let q = b();
        let s3 = FiniteGroup::symmetric3();
        let h = s3.generated(&[1]);
        let d: Vec<Elem> = (0..6).map(|x| if h.contains(&x) { q.top() } else { q.bottom() }).collect();
        let a = structure_from_delta(&s3, q, &d).unwrap();
        let v = validate_vgroup(&s3, &a).unwrap();
        assert!(v.shift_route.is_ok());
        assert!(!v.functor_route.is_ok());
        assert!(v.nonabelian_discrepancy);
        assert!(!v.is_ok());
    }
}
