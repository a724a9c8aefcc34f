//! The theorem-check battery run by `vgrp suite` and by the acceptance
//! tests. Each check quantifies over a [`Suite`] and records every failing
//! instance instead of stopping at the first.

use std::sync::Arc;

use serde::Serialize;

use crate::builders::{HomSet, Suite};
use crate::descent::{action_of_covering, descent_cover, eq_f, verify_cover_window};
use crate::error::{Error, Result};
use crate::factorization::{classify_morphism, em_factorize, is_covering, ml_factorize};
use crate::quantale::{builtin_tables, validate_quantale, BuiltinQuantale, QuantaleTables};
use crate::torsion::{
    check_short_exact, decompose, pretorsion_decompose, reflect_hom, symmetric_coreflect,
};
use crate::vgroup::{
    classify_hom, cokernel, delta_candidates, enumerate_structures, find_isomorphism,
    induced_subobject, is_isomorphism, is_pullback_square, kernel, quotient_object,
    reflexive_graphs, structure_from_delta, validate_vgroup, VGroup, VHom,
};

/// Largest carrier for the exhaustive uniqueness and greatest-element scans.
pub const SMALL_CARRIER: usize = 4;

/// Outcome of one criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub criterion: u8,
    pub name: &'static str,
    pub instances: usize,
    /// Hom-sets or objects left out because an enumeration hit the guard.
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(criterion: u8, name: &'static str) -> Self {
        CheckOutcome { criterion, name, instances: 0, skipped: 0, failures: Vec::new() }
    }

    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    /// Unwraps `r`, recording an error as a failed instance. Capacity errors
    /// count as skipped.
    fn ok<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(Error::Capacity { .. }) => {
                self.skipped += 1;
                None
            }
            Err(e) => {
                self.instances += 1;
                self.failures.push(format!("{}: {e}", what()));
                None
            }
        }
    }
}

/// Precomputed hom-sets of a suite, shared by the hom-quantified checks.
pub struct SuiteHoms<'a> {
    pub suite: &'a Suite,
    pub sets: Vec<HomSet>,
}

impl<'a> SuiteHoms<'a> {
    pub fn new(suite: &'a Suite) -> Result<Self> {
        Ok(SuiteHoms { suite, sets: suite.hom_sets()? })
    }

    fn integral(&self, set: &HomSet) -> bool {
        self.suite.quantales[self.suite.objects[set.dom].quantale].is_integral()
    }

    /// Every enumerated morphism over an integral quantale.
    pub fn integral_morphisms(&self) -> impl Iterator<Item = &VHom> {
        self.sets.iter().filter(|s| self.integral(s)).flat_map(|s| s.homs.iter())
    }

    pub fn morphisms(&self) -> impl Iterator<Item = &VHom> {
        self.sets.iter().flat_map(|s| s.homs.iter())
    }

    pub fn truncated(&self) -> usize {
        self.sets.iter().filter(|s| s.truncated).count()
    }

    fn set(&self, i: usize, j: usize) -> Option<&HomSet> {
        self.sets.iter().find(|s| s.dom == i && s.cod == j)
    }
}

/// Deliberately broken quantale tables with the law each must fail.
pub fn corrupted_quantales() -> Vec<(&'static str, QuantaleTables, &'static str)> {
    let boolean = builtin_tables(BuiltinQuantale::Boolean).expect("boolean tables");
    let chain = builtin_tables(BuiltinQuantale::LawvereChain { m: 2 }).expect("chain tables");

    let mut two_way = boolean.clone();
    two_way.leq[1][0] = true;

    let mut skew = chain.clone();
    skew.tensor[1][2] = 1;

    let mut leaky = boolean.clone();
    leaky.tensor[0][1] = 1;
    leaky.tensor[1][0] = 1;

    // bot < a, b with no common upper bound.
    let no_top = QuantaleTables {
        labels: vec!["bot".into(), "a".into(), "b".into()],
        leq: vec![vec![true, true, true], vec![false, true, false], vec![false, false, true]],
        tensor: vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]],
        unit: 1,
    };

    // M3 diamond with meet as tensor.
    let le = |u: usize, v: usize| u == v || u == 0 || v == 4;
    let meet = |u: usize, v: usize| if u == v { u } else if le(u, v) { u } else if le(v, u) { v } else { 0 };
    let m3 = QuantaleTables {
        labels: ["bot", "a", "b", "c", "top"].iter().map(|s| s.to_string()).collect(),
        leq: (0..5).map(|u| (0..5).map(|v| le(u, v)).collect()).collect(),
        tensor: (0..5).map(|u| (0..5).map(|v| meet(u, v)).collect()).collect(),
        unit: 4,
    };

    vec![
        ("two-way order", two_way, "leq-antisymmetric"),
        ("no top", no_top, "top-exists"),
        ("skew tensor", skew, "tensor-commutative"),
        ("leaky bottom", leaky, "tensor-annihilates-bottom"),
        ("diamond", m3, "frame-distributive"),
    ]
}

/// Criterion 1: builtins pass, corrupted tables fail with the expected law.
pub fn check_quantale_laws() -> CheckOutcome {
    let mut out = CheckOutcome::new(1, "quantale laws");
    let mut builtins = vec![BuiltinQuantale::Boolean];
    for m in 1..=4 {
        builtins.push(BuiltinQuantale::LawvereChain { m });
        builtins.push(BuiltinQuantale::UltrametricChain { m });
    }
    for b in builtins {
        let r = builtin_tables(b).and_then(|t| validate_quantale(&t));
        if let Some(r) = out.ok(r, || b.to_string()) {
            out.check(r.is_ok(), || format!("{b}: {r}"));
        }
    }
    for (name, t, law) in corrupted_quantales() {
        if let Some(r) = out.ok(validate_quantale(&t), || name.to_string()) {
            out.check(r.has(law), || format!("{name}: expected {law}, got {r}"));
        }
    }
    out
}

/// Criterion 2: the shift route and the functor route agree on every
/// shift-invariant candidate, and on every reflexive graph for carriers up
/// to [`SMALL_CARRIER`].
pub fn check_shift_equivalence(suite: &Suite) -> CheckOutcome {
    let mut out = CheckOutcome::new(2, "shift-invariance equivalence");
    for q in &suite.quantales {
        for g in &suite.groups {
            let Some(cands) = out.ok(delta_candidates(g, q), || format!("{g} over {q}")) else {
                continue;
            };
            for d in cands {
                let r = structure_from_delta(g, q.clone(), &d).and_then(|a| validate_vgroup(g, &a));
                if let Some(v) = out.ok(r, || format!("{g} over {q}, delta {d:?}")) {
                    out.check(
                        v.shift_route.is_ok() == v.functor_route.is_ok() || v.nonabelian_discrepancy,
                        || format!("{g} over {q}, delta {d:?}"),
                    );
                }
            }
            if g.size() > SMALL_CARRIER || !g.is_abelian() {
                continue;
            }
            let Some(graphs) = out.ok(reflexive_graphs(g.size(), q), || format!("graphs on {g}")) else {
                continue;
            };
            for a in graphs {
                if let Some(v) = out.ok(validate_vgroup(g, &a), || format!("{g} over {q}")) {
                    out.check(v.shift_route.is_ok() == v.functor_route.is_ok(), || {
                        format!("{g} over {q}: {:?}", a.entries())
                    });
                }
            }
        }
    }
    out
}

/// Criterion 3: torsion theory.
pub fn check_torsion(homs: &SuiteHoms) -> CheckOutcome {
    let suite = homs.suite;
    let mut out = CheckOutcome::new(3, "torsion theory");
    for o in suite.objects.iter().filter(|o| suite.quantales[o.quantale].is_integral()) {
        let x = &o.object;
        let Some(d) = out.ok(decompose(x), || x.to_string()) else { continue };
        let ses = check_short_exact(&d.injection, &d.projection);
        out.check(ses.is_ok(), || format!("{x}: {ses}"));
        out.check(d.torsion_part.is_indiscrete(), || format!("{x}: torsion part not indiscrete"));
        out.check(d.quotient.is_separated(), || format!("{x}: quotient not separated"));
        if x.size() <= SMALL_CARRIER {
            uniqueness(&mut out, x, &d.torsion_elements);
        }
    }
    for set in &homs.sets {
        let (x, y) = (&suite.objects[set.dom].object, &suite.objects[set.cod].object);
        if set.truncated {
            out.skipped += 1;
            continue;
        }
        if x.is_indiscrete() && y.is_separated() {
            out.check(set.homs.len() == 1 && set.homs[0].is_zero(), || {
                format!("hom({x}, {y}) has {} elements", set.homs.len())
            });
        }
    }
    for f in homs.integral_morphisms() {
        naturality(&mut out, f);
    }
    out
}

/// Any normal subgroup with indiscrete induced and separated final
/// structure must be `N_X`, and the two sequences must be isomorphic.
fn uniqueness(out: &mut CheckOutcome, x: &Arc<VGroup>, nx: &[usize]) {
    let Some(normals) = out.ok(x.group().normal_subgroups(), || format!("normal subgroups of {x}")) else {
        return;
    };
    for n in normals {
        let Some((sub, _)) = out.ok(induced_subobject(x, &n), || format!("{x} on {n:?}")) else {
            continue;
        };
        let Some((quot, _)) = out.ok(quotient_object(x, &n), || format!("{x} by {n:?}")) else {
            continue;
        };
        if sub.is_indiscrete() && quot.is_separated() {
            out.check(n == nx, || format!("{x}: alternative torsion part {n:?} vs {nx:?}"));
        }
    }
}

/// `η_Y ∘ f = F(f) ∘ η_X`, and `F` preserves identities.
fn naturality(out: &mut CheckOutcome, f: &VHom) {
    let r = (|| {
        let ff = reflect_hom(f)?;
        let (ex, ey) = (decompose(f.dom())?.projection, decompose(f.cod())?.projection);
        let lhs = f.then(&ey)?;
        let rhs = ex.then(&ff)?;
        let id = reflect_hom(&VHom::identity(f.dom().clone()))?;
        Ok::<_, Error>(lhs.map() == rhs.map() && (0..id.dom().size()).all(|i| id.apply(i) == i))
    })();
    if let Some(ok) = out.ok(r, || f.to_string()) {
        out.check(ok, || format!("{f}: unit not natural"));
    }
}

/// Criterion 4: both routes agree and both factorizations post-verify.
pub fn check_factorizations(homs: &SuiteHoms) -> CheckOutcome {
    let mut out = CheckOutcome::new(4, "factorization characterizations");
    out.skipped += homs.truncated();
    for f in homs.integral_morphisms() {
        if out.ok(classify_morphism(f), || format!("classify {f}")).is_some() {
            out.instances += 1;
        }
        if let Some(fac) = out.ok(em_factorize(f), || format!("em {f}")) {
            out.check(fac.e.then(&fac.m).map(|c| c.map() == f.map()).unwrap_or(false), || {
                format!("em {f}: composite")
            });
        }
        if let Some(fac) = out.ok(ml_factorize(f), || format!("ml {f}")) {
            out.check(fac.e.then(&fac.m).map(|c| c.map() == f.map()).unwrap_or(false), || {
                format!("ml {f}: composite")
            });
        }
    }
    out
}

/// Criterion 5: coverings are the morphisms with separated kernel.
pub fn check_coverings(homs: &SuiteHoms) -> CheckOutcome {
    let mut out = CheckOutcome::new(5, "covering predicate");
    out.skipped += homs.truncated();
    for f in homs.integral_morphisms() {
        let r = is_covering(f).and_then(|c| Ok((c, kernel(f)?.0.is_separated())));
        if let Some((c, sep)) = out.ok(r, || f.to_string()) {
            out.check(c == sep, || format!("{f}: covering {c}, kernel separated {sep}"));
        }
    }
    let z4 = z4_quotient();
    let r = is_covering(&z4).and_then(|c| Ok((c, kernel(&z4)?)));
    if let Some((c, (k, inc))) = out.ok(r, || "Z4 example".into()) {
        out.check(!c && inc.map() == [0, 2] && k.is_indiscrete(), || {
            format!("Z4 example: covering {c}, kernel {:?}", inc.map())
        });
    }
    out
}

/// `q: (Z4, (⊤,⊥,⊤,⊥)) → (Z2, discrete)` over the boolean quantale.
pub fn z4_quotient() -> VHom {
    let b = crate::quantale::Quantale::boolean();
    let d = [b.top(), b.bottom(), b.top(), b.bottom()];
    let g = Arc::new(VGroup::from_delta(crate::group::FiniteGroup::cyclic(4), b.clone(), &d).expect("Z4 object"));
    let h = Arc::new(VGroup::discrete(crate::group::FiniteGroup::cyclic(2), b));
    VHom::new(g, h, vec![0, 1, 0, 1]).expect("Z4 quotient")
}

/// Criterion 6: the descent cover on windows of the given radii, plus
/// `Eq(f)` and the actions of coverings into each base.
pub fn check_descent(homs: &SuiteHoms, radii: std::ops::RangeInclusive<u32>) -> CheckOutcome {
    let suite = homs.suite;
    let mut out = CheckOutcome::new(6, "descent cover");
    for (i, o) in suite.objects.iter().enumerate() {
        if !suite.quantales[o.quantale].is_integral() {
            continue;
        }
        let Some(l) = out.ok(descent_cover(&o.object), || o.object.to_string()) else { continue };
        for n in radii.clone() {
            if let Some(r) = out.ok(verify_cover_window(&l, n), || format!("{} at {n}", o.object)) {
                out.check(r.is_ok(), || format!("{} at radius {n}: {}", o.object, r.report));
            }
        }
        if let Some(r) = out.ok(eq_f(&l, 2), || format!("Eq(f) over {}", o.object)) {
            out.check(r.is_ok(), || format!("Eq(f) over {}: {}", o.object, r.report));
        }
        for j in suite.objects_over(o.quantale) {
            let Some(set) = homs.set(j, i) else { continue };
            for alpha in &set.homs {
                let Some(cov) = out.ok(is_covering(alpha), || alpha.to_string()) else { continue };
                if !cov {
                    continue;
                }
                if let Some(r) = out.ok(action_of_covering(alpha, &l, 1), || alpha.to_string()) {
                    out.check(r.is_ok(), || format!("action of {alpha}: {}", r.report));
                }
            }
        }
    }
    out
}

/// Criterion 7: the pretorsion theory and the symmetric coreflection.
pub fn check_pretorsion(suite: &Suite) -> CheckOutcome {
    let mut out = CheckOutcome::new(7, "pretorsion theory");
    for o in &suite.objects {
        let x = &o.object;
        if let Some(p) = out.ok(pretorsion_decompose(x), || x.to_string()) {
            out.check(p.verification.is_ok(), || {
                let v = &p.verification;
                format!("{x}: kernel {}, cokernel {}, hom {}", v.z_kernel, v.z_cokernel, v.hom_t_f)
            });
        }
        if x.size() > SMALL_CARRIER {
            continue;
        }
        let Some(s) = out.ok(symmetric_coreflect(x), || x.to_string()) else { continue };
        let below = s.structure().leq(x.structure()).unwrap_or(false);
        out.check(s.is_symmetric() && below, || format!("{x}: coreflection {s}"));
        let Some(all) = out.ok(enumerate_structures(x.group(), x.quantale()), || x.to_string()) else {
            continue;
        };
        for t in all.iter().filter(|t| t.is_symmetric()) {
            if t.structure().leq(x.structure()).unwrap_or(false) {
                out.check(t.structure().leq(s.structure()).unwrap_or(false), || {
                    format!("{x}: symmetric {t} not below {s}")
                });
            }
        }
    }
    out
}

/// Criterion 8: the two normal-category lemmas, plus `ker(coker m) ≅ m`
/// for normal monos.
pub fn check_normal_lemmas(homs: &SuiteHoms) -> CheckOutcome {
    let mut out = CheckOutcome::new(8, "normal-category lemmas");
    out.skipped += homs.truncated();
    for f in homs.morphisms() {
        let class = classify_hom(f);
        if class.regular_epi {
            let r = regular_epi_is_cokernel(f);
            if let Some(ok) = out.ok(r, || format!("coker(ker {f})")) {
                out.check(ok, || format!("{f}: not the cokernel of its kernel"));
            }
        }
        if class.normal_mono {
            let r = cokernel(f).and_then(|(_, c)| kernel(&c)).map(|(k, _)| {
                find_isomorphism(&k, f.dom()).is_some()
            });
            if let Some(ok) = out.ok(r, || format!("ker(coker {f})")) {
                out.check(ok, || format!("{f}: not the kernel of its cokernel"));
            }
        }
        if f.dom().size() <= SMALL_CARRIER && f.cod().size() <= SMALL_CARRIER {
            ses_morphisms(&mut out, f);
        }
    }
    out
}

/// The comparison `X/Ker f → Y` of a regular epi is an isomorphism.
fn regular_epi_is_cokernel(f: &VHom) -> Result<bool> {
    let (_, k) = kernel(f)?;
    let (c, p) = cokernel(&k)?;
    let mut map = vec![usize::MAX; c.size()];
    for x in 0..f.dom().size() {
        map[p.apply(x)] = f.apply(x);
    }
    let Ok(phi) = VHom::new(c, f.cod().clone(), map) else { return Ok(false) };
    Ok(is_isomorphism(&phi))
}

/// For every pair of normal subgroups `N ⊆ X`, `N′ ⊆ Y` with `f(N) ⊆ N′`:
/// the left square of the induced morphism of short exact sequences is a
/// pullback iff the induced map on cokernels is mono.
fn ses_morphisms(out: &mut CheckOutcome, f: &VHom) {
    let (x, y) = (f.dom(), f.cod());
    let Some(ns) = out.ok(x.group().normal_subgroups(), || format!("normal subgroups of {x}")) else {
        return;
    };
    let Some(ns2) = out.ok(y.group().normal_subgroups(), || format!("normal subgroups of {y}")) else {
        return;
    };
    for n in &ns {
        for n2 in &ns2 {
            if !n.iter().all(|&e| n2.binary_search(&f.apply(e)).is_ok()) {
                continue;
            }
            let r = (|| {
                let (ns, k) = induced_subobject(x, n)?;
                let (ns2, k2) = induced_subobject(y, n2)?;
                let u_map = (0..ns.size())
                    .map(|i| n2.binary_search(&f.apply(k.apply(i))).expect("f(N) inside N'"))
                    .collect();
                let u = VHom::new(ns, ns2, u_map)?;
                let (qx, px) = quotient_object(x, n)?;
                let (qy, py) = quotient_object(y, n2)?;
                let mut c_map = vec![usize::MAX; qx.size()];
                for e in 0..x.size() {
                    c_map[px.apply(e)] = py.apply(f.apply(e));
                }
                let c = VHom::new(qx, qy, c_map)?;
                let pb = is_pullback_square(&u, &k, &k2, f)?;
                Ok::<_, Error>((pb, classify_hom(&c).mono))
            })();
            if let Some((pb, mono)) = out.ok(r, || format!("{f} with {n:?}, {n2:?}")) {
                out.check(pb == mono, || {
                    format!("{f} with N={n:?}, N'={n2:?}: pullback {pb}, mono {mono}")
                });
            }
        }
    }
}

/// Criteria 1 to 8 in order.
pub fn run_battery(suite: &Suite) -> Result<Vec<CheckOutcome>> {
    let homs = SuiteHoms::new(suite)?;
    Ok(vec![
        check_quantale_laws(),
        check_shift_equivalence(suite),
        check_torsion(&homs),
        check_factorizations(&homs),
        check_coverings(&homs),
        check_descent(&homs, 1..=4),
        check_pretorsion(suite),
        check_normal_lemmas(&homs),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_tables_fail_as_expected() {
        let out = check_quantale_laws();
        assert!(out.is_ok(), "{:?}", out.failures);
        assert_eq!(out.instances, 9 + 5);
    }

    #[test]
    fn z4_example_is_not_a_covering() {
        let f = z4_quotient();
        assert!(!is_covering(&f).unwrap());
    }
}

