//! The (indiscrete, separated) torsion theory and the (symmetric, separated)
//! pretorsion theory.
//!
//! `N_X = {x : a(0,x) ≥ k and a(x,0) ≥ k}` is always a normal subgroup. Over
//! an integral quantale `(N_X, ã) → (X, a) → (X/N_X, ā)` is a short exact
//! sequence with indiscrete kernel and separated cokernel. Without
//! integrality one still gets the short 𝒵-exact sequence
//! `(X, â) → (X, a) → (X/N_X, ā)` with `â = a ∧ a°`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::report::Report;
use crate::vgroup::{
    enumerate_homs, final_structure, enumerate_structures, image_factorize, induced_subobject,
    quotient_object, VGroup, VHom,
};

/// `N_X`, sorted. Checked to be a normal subgroup.
pub fn torsion_part(g: &VGroup) -> Result<Vec<usize>> {
    let q = g.quantale();
    let zero = g.group().zero();
    let n: Vec<usize> = (0..g.size())
        .filter(|&x| q.above_unit(g.a(zero, x)) && q.above_unit(g.a(x, zero)))
        .collect();
    if !g.group().is_subgroup(&n) {
        return Err(Error::theorem("torsion-part-subgroup", format!("{n:?} in {g}")));
    }
    if let Some((e, c)) = g.group().normality_witness(&n) {
        return Err(Error::theorem(
            "torsion-part-normal",
            format!("{n:?} in {g}: conjugating {e} by {c}"),
        ));
    }
    Ok(n)
}

fn require_integral(g: &VGroup, operation: &'static str) -> Result<()> {
    if g.quantale().is_integral() {
        Ok(())
    } else {
        Err(Error::NotIntegral { operation })
    }
}

/// `(X/N_X, ā)` with `η_X`. Needs no integrality.
pub fn separated_quotient(g: &Arc<VGroup>) -> Result<(Arc<VGroup>, VHom)> {
    let n = torsion_part(g)?;
    let (f, eta) = quotient_object(g, &n)?;
    if !f.is_separated() {
        return Err(Error::theorem("quotient-separated", format!("{f} from {g}")));
    }
    Ok((f, eta))
}

/// `T → X → F` for one object.
#[derive(Debug, Clone)]
pub struct TorsionDecomposition {
    pub object: Arc<VGroup>,
    pub torsion_elements: Vec<usize>,
    pub torsion_part: Arc<VGroup>,
    pub injection: VHom,
    pub quotient: Arc<VGroup>,
    pub projection: VHom,
}

/// Checks that `k: K → X → Q: p` is a short exact sequence: `k` is the
/// kernel of `p` with the induced structure and `p` is the cokernel of `k`
/// with the final structure.
pub fn check_short_exact(k: &VHom, p: &VHom) -> Report {
    let mut r = Report::new();
    let x = k.cod();
    let mut ker = p.kernel_elements();
    ker.sort_unstable();
    if !k.is_injective() || k.image() != ker {
        r.fail("kernel-carrier", ker.clone());
    }
    let kd = k.dom();
    'ind: for i in 0..kd.size() {
        for j in 0..kd.size() {
            if kd.a(i, j) != x.a(k.apply(i), k.apply(j)) {
                r.fail("kernel-induced", vec![i, j]);
                break 'ind;
            }
        }
    }
    if !p.is_surjective() {
        r.fail("cokernel-surjective", vec![]);
    }
    let fin = final_structure(x, p.map(), p.cod().size());
    let c = p.cod();
    if let Some(i) = (0..c.size() * c.size()).find(|&i| fin.entries()[i] != c.structure().entries()[i]) {
        r.fail("cokernel-final", vec![i / c.size(), i % c.size()]);
    }
    r
}

/// The canonical torsion decomposition, re-verified.
pub fn decompose(g: &Arc<VGroup>) -> Result<TorsionDecomposition> {
    require_integral(g, "decompose")?;
    let n = torsion_part(g)?;
    let (t, inj) = induced_subobject(g, &n)?;
    let (f, proj) = quotient_object(g, &n)?;
    let ses = check_short_exact(&inj, &proj);
    if !ses.is_ok() {
        return Err(Error::theorem("torsion-short-exact", format!("{g}: {ses}")));
    }
    if !t.is_indiscrete() {
        return Err(Error::theorem("torsion-part-indiscrete", format!("{t} inside {g}")));
    }
    if !f.is_separated() {
        return Err(Error::theorem("quotient-separated", format!("{f} from {g}")));
    }
    Ok(TorsionDecomposition {
        object: g.clone(),
        torsion_elements: n,
        torsion_part: t,
        injection: inj,
        quotient: f,
        projection: proj,
    })
}

/// Reflection into separated V-groups: `(X/N_X, ā)` with unit `η_X`.
pub fn reflect(g: &Arc<VGroup>) -> Result<(Arc<VGroup>, VHom)> {
    let d = decompose(g)?;
    Ok((d.quotient, d.projection))
}

/// Coreflection into indiscrete V-groups: `(N_X, ã)` with counit `k_X`.
pub fn coreflect(g: &Arc<VGroup>) -> Result<(Arc<VGroup>, VHom)> {
    let d = decompose(g)?;
    Ok((d.torsion_part, d.injection))
}

/// `F(f): X/N_X → Y/N_Y`, with `F(f) ∘ η_X = η_Y ∘ f` checked.
pub fn reflect_hom(f: &VHom) -> Result<VHom> {
    require_integral(f.dom(), "reflect")?;
    let (fx, ex) = reflect(f.dom())?;
    let (fy, ey) = reflect(f.cod())?;
    induced_on_quotients(f, &fx, &ex, &fy, &ey)
}

/// The map between quotients induced by `f`, given the two projections.
pub(crate) fn induced_on_quotients(
    f: &VHom,
    fx: &Arc<VGroup>,
    ex: &VHom,
    fy: &Arc<VGroup>,
    ey: &VHom,
) -> Result<VHom> {
    let mut map = vec![usize::MAX; fx.size()];
    for x in 0..f.dom().size() {
        let (c, d) = (ex.apply(x), ey.apply(f.apply(x)));
        if map[c] == usize::MAX {
            map[c] = d;
        } else if map[c] != d {
            return Err(Error::theorem(
                "reflector-well-defined",
                format!("{f}: class {c} goes to {} and {d}", map[c]),
            ));
        }
    }
    VHom::derived(fx.clone(), fy.clone(), map, "reflector-functor")
}

/// `T(f): N_X → N_Y`, with `k_Y ∘ T(f) = f ∘ k_X` checked.
pub fn coreflect_hom(f: &VHom) -> Result<VHom> {
    require_integral(f.dom(), "coreflect")?;
    let (tx, kx) = coreflect(f.dom())?;
    let (ty, ky) = coreflect(f.cod())?;
    let mut map = Vec::with_capacity(tx.size());
    for i in 0..tx.size() {
        let y = f.apply(kx.apply(i));
        let j = ky.map().iter().position(|&v| v == y).ok_or_else(|| {
            Error::theorem("coreflector-well-defined", format!("{f}: {y} is not in N_Y"))
        })?;
        map.push(j);
    }
    VHom::derived(tx, ty, map, "coreflector-functor")
}

/// `â = a ∧ a°` on the same group.
pub fn symmetric_coreflect(g: &VGroup) -> Result<Arc<VGroup>> {
    let ahat = g.structure().meet(&g.structure().converse())?;
    let s = VGroup::derived(g.group().clone(), ahat, "symmetric-coreflection")?;
    if !s.is_symmetric() {
        return Err(Error::theorem("symmetric-coreflection", format!("{s} is not symmetric")));
    }
    Ok(Arc::new(s))
}

/// Symmetric, and `a(x, x') ≥ k` only on the diagonal.
pub fn z_membership(g: &VGroup) -> bool {
    let q = g.quantale();
    let n = g.size();
    g.is_symmetric() && (0..n).all(|x| (0..n).all(|y| x == y || !q.above_unit(g.a(x, y))))
}

/// Whether `f` factors through an object of 𝒵, decided by testing its
/// image. A `true` answer is always correct; a `false` answer only says the
/// image is not in 𝒵.
pub fn n_membership_via_image(f: &VHom) -> Result<bool> {
    Ok(z_membership(&image_factorize(f)?.middle))
}

/// Test objects for universal properties: every structure on the trivial
/// group, on `Z2` and on each of `groups`.
pub fn test_objects(q: &Arc<crate::quantale::Quantale>, groups: &[&FiniteGroup]) -> Result<Vec<Arc<VGroup>>> {
    let mut seen: Vec<FiniteGroup> = Vec::new();
    let mut out = Vec::new();
    let base = [FiniteGroup::trivial(), FiniteGroup::cyclic(2)];
    for g in base.iter().chain(groups.iter().copied()) {
        if seen.contains(g) {
            continue;
        }
        seen.push(g.clone());
        out.extend(enumerate_structures(g, q)?.into_iter().map(Arc::new));
    }
    Ok(out)
}

fn homs_equal(a: &VHom, b: &VHom) -> bool {
    a.map() == b.map()
}

/// Universal property of a 𝒵-kernel `k: K → A` of `f: A → B`, quantified
/// over all morphisms out of `tests`.
///
/// Witnesses are `[test index, morphism index]` in enumeration order.
pub fn verify_z_kernel(k: &VHom, f: &VHom, tests: &[Arc<VGroup>]) -> Result<Report> {
    let mut r = Report::new();
    if **k.cod() != **f.dom() {
        return Err(Error::DimensionMismatch("candidate does not land in the domain".into()));
    }
    if !n_membership_via_image(&k.then(f)?)? {
        r.fail("composite-in-N", vec![]);
    }
    for (ti, t) in tests.iter().enumerate() {
        if !t.same_quantale(f.dom()) {
            continue;
        }
        let into_k = enumerate_homs(t, k.dom())?;
        for (ai, alpha) in enumerate_homs(t, f.dom())?.iter().enumerate() {
            if !n_membership_via_image(&alpha.then(f)?)? {
                continue;
            }
            let factors =
                into_k.iter().filter(|phi| homs_equal(&phi.then(k).expect("composable"), alpha)).count();
            match factors {
                0 => r.fail("factorization-exists", vec![ti, ai]),
                1 => {}
                _ => r.fail("factorization-unique", vec![ti, ai]),
            }
        }
    }
    Ok(r)
}

/// Universal property of a 𝒵-cokernel `c: B → C` of `f: A → B`.
pub fn verify_z_cokernel(c: &VHom, f: &VHom, tests: &[Arc<VGroup>]) -> Result<Report> {
    let mut r = Report::new();
    if **c.dom() != **f.cod() {
        return Err(Error::DimensionMismatch("candidate does not start at the codomain".into()));
    }
    if !n_membership_via_image(&f.then(c)?)? {
        r.fail("composite-in-N", vec![]);
    }
    for (ti, t) in tests.iter().enumerate() {
        if !t.same_quantale(f.cod()) {
            continue;
        }
        let out_of_c = enumerate_homs(c.cod(), t)?;
        for (bi, beta) in enumerate_homs(f.cod(), t)?.iter().enumerate() {
            if !n_membership_via_image(&f.then(beta)?)? {
                continue;
            }
            let factors =
                out_of_c.iter().filter(|phi| homs_equal(&c.then(phi).expect("composable"), beta)).count();
            match factors {
                0 => r.fail("factorization-exists", vec![ti, bi]),
                1 => {}
                _ => r.fail("factorization-unique", vec![ti, bi]),
            }
        }
    }
    Ok(r)
}

/// `(X, â) → (X, a) → (X/N_X, ā)` with its verification reports.
#[derive(Debug, Clone)]
pub struct PretorsionDecomposition {
    pub object: Arc<VGroup>,
    pub symmetric_part: Arc<VGroup>,
    pub comparison: VHom,
    pub quotient: Arc<VGroup>,
    pub projection: VHom,
    pub verification: PretorsionReport,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct PretorsionReport {
    pub z_kernel: Report,
    pub z_cokernel: Report,
    /// Morphisms from symmetric to separated test objects whose image is not
    /// in 𝒵.
    pub hom_t_f: Report,
    pub test_objects: usize,
}

impl PretorsionReport {
    pub fn is_ok(&self) -> bool {
        self.z_kernel.is_ok() && self.z_cokernel.is_ok() && self.hom_t_f.is_ok()
    }
}

/// Builds and verifies the short 𝒵-exact sequence of `g`, quantifying over
/// [`test_objects`] for `g`'s group and its quotient group.
pub fn pretorsion_decompose(g: &Arc<VGroup>) -> Result<PretorsionDecomposition> {
    let s = symmetric_coreflect(g)?;
    if !s.structure().leq(g.structure())? {
        return Err(Error::theorem("symmetric-part-below", format!("{s} against {g}")));
    }
    let comparison = VHom::derived(s.clone(), g.clone(), (0..g.size()).collect(), "symmetric-comparison")?;
    let (f, eta) = separated_quotient(g)?;
    let tests = test_objects(g.quantale(), &[g.group(), f.group()])?;
    let mut verification = PretorsionReport {
        z_kernel: verify_z_kernel(&comparison, &eta, &tests)?,
        z_cokernel: verify_z_cokernel(&eta, &comparison, &tests)?,
        hom_t_f: Report::new(),
        test_objects: tests.len(),
    };
    for (ti, t) in tests.iter().enumerate().filter(|(_, t)| t.is_symmetric()) {
        for (ui, u) in tests.iter().enumerate().filter(|(_, u)| u.is_separated()) {
            for (hi, h) in enumerate_homs(t, u)?.iter().enumerate() {
                if !n_membership_via_image(h)? {
                    verification.hom_t_f.fail("hom-T-F-in-N", vec![ti, ui, hi]);
                }
            }
        }
    }
    Ok(PretorsionDecomposition { object: g.clone(), symmetric_part: s, comparison, quotient: f, projection: eta, verification })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{Elem, Quantale};

    fn obj(q: &Arc<Quantale>, n: usize, labels: &[&str]) -> Arc<VGroup> {
        let d: Vec<Elem> = labels.iter().map(|l| q.elem(l).unwrap()).collect();
        Arc::new(VGroup::from_delta(FiniteGroup::cyclic(n), q.clone(), &d).unwrap())
    }

    #[test]
    fn torsion_parts() {
        let b = Quantale::boolean();
        assert_eq!(torsion_part(&obj(&b, 4, &["top", "bot", "top", "bot"])).unwrap(), vec![0, 2]);
        assert_eq!(torsion_part(&obj(&b, 3, &["top", "bot", "bot"])).unwrap(), vec![0]);
        assert_eq!(torsion_part(&obj(&b, 3, &["top"; 3])).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn z4_decomposition() {
        let b = Quantale::boolean();
        let d = decompose(&obj(&b, 4, &["top", "bot", "top", "bot"])).unwrap();
        assert_eq!(d.injection.map(), &[0, 2]);
        assert!(d.torsion_part.is_indiscrete());
        assert_eq!(d.quotient.size(), 2);
        assert!(d.quotient.is_discrete());
        assert_eq!(d.projection.map(), &[0, 1, 0, 1]);
    }

    #[test]
    fn decompose_refuses_non_integral() {
        let q = Arc::new(
            Quantale::new(
                "three",
                crate::quantale::QuantaleTables {
                    labels: vec!["bot".into(), "k".into(), "top".into()],
                    leq: vec![
                        vec![true, true, true],
                        vec![false, true, true],
                        vec![false, false, true],
                    ],
                    tensor: vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]],
                    unit: 1,
                },
            )
            .unwrap(),
        );
        let g = Arc::new(VGroup::discrete(FiniteGroup::cyclic(2), q));
        assert!(matches!(decompose(&g), Err(Error::NotIntegral { .. })));
        let p = pretorsion_decompose(&g).unwrap();
        assert!(p.verification.is_ok());
    }

    #[test]
    fn symmetric_part_of_lawvere_z4() {
        let l = Quantale::lawvere_chain(2).unwrap();
        let g = obj(&l, 4, &["0", "1", "2", "2"]);
        let s = symmetric_coreflect(&g).unwrap();
        let labels: Vec<&str> = s.delta().into_iter().map(|u| l.label(u)).collect();
        assert_eq!(labels, ["0", "2", "2", "2"]);
        let p = pretorsion_decompose(&g).unwrap();
        assert_eq!(p.quotient.size(), 4);
        assert!(p.verification.is_ok(), "{:?}", p.verification);
    }

    #[test]
    fn z_membership_examples() {
        let l = Quantale::lawvere_chain(2).unwrap();
        assert!(z_membership(&obj(&l, 2, &["0", "1"])));
        assert!(!z_membership(&obj(&l, 2, &["0", "0"])));
        let b = Quantale::boolean();
        assert!(z_membership(&VGroup::discrete(FiniteGroup::cyclic(3), b)));
    }

    #[test]
    fn zero_map_is_not_a_z_kernel_of_eta() {
        let b = Quantale::boolean();
        let g = obj(&b, 2, &["top", "top"]);
        let (_, eta) = separated_quotient(&g).unwrap();
        let zero = VHom::zero(Arc::new(VGroup::zero_object(b.clone())), g.clone()).unwrap();
        let tests = test_objects(&b, &[g.group()]).unwrap();
        let r = verify_z_kernel(&zero, &eta, &tests).unwrap();
        assert!(r.has("factorization-exists"));
    }

    #[test]
    fn functors_on_the_z4_quotient() {
        let b = Quantale::boolean();
        let g = obj(&b, 4, &["top", "bot", "top", "bot"]);
        let h = Arc::new(VGroup::discrete(FiniteGroup::cyclic(2), b));
        let q = VHom::new(g, h, vec![0, 1, 0, 1]).unwrap();
        let ff = reflect_hom(&q).unwrap();
        assert_eq!(ff.map(), &[0, 1]);
        let tf = coreflect_hom(&q).unwrap();
        assert_eq!(tf.map(), &[0, 0]);
    }
}
