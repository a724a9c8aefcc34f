//! Limits, colimits and the (regular epi, mono) factorization.
//!
//! Limits carry the meet of the pulled-back structures, colimits the final
//! structure `c(z1, z2) = ⋁ { a(x1, x2) : q(x1) = z1, q(x2) = z2 }`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quantale::Elem;
use crate::vrel::VRel;

use super::{VGroup, VHom};

/// Final structure on `m` points along the surjection `proj`.
pub fn final_structure(g: &VGroup, proj: &[usize], m: usize) -> VRel {
    let q = g.quantale();
    let mut entries = vec![q.bottom(); m * m];
    for x in 0..g.size() {
        for y in 0..g.size() {
            let cell = &mut entries[proj[x] * m + proj[y]];
            *cell = q.join(*cell, g.a(x, y));
        }
    }
    VRel::new(q.clone(), m, m, entries).expect("entries come from the quantale")
}

/// `(S, a restricted)` for a subgroup `S` (sorted), with its inclusion.
pub fn induced_subobject(g: &Arc<VGroup>, elems: &[usize]) -> Result<(Arc<VGroup>, VHom)> {
    let sub = g.group().subgroup(elems)?;
    let a = g.structure().restrict(elems, elems);
    let obj = Arc::new(VGroup::derived(sub, a, "induced-structure")?);
    let inc = VHom::derived(obj.clone(), g.clone(), elems.to_vec(), "subobject-inclusion")?;
    Ok((obj, inc))
}

/// `G / N` with the final structure, and the projection.
pub fn quotient_object(g: &Arc<VGroup>, normal: &[usize]) -> Result<(Arc<VGroup>, VHom)> {
    let (qg, proj) = g.group().quotient(normal)?;
    let a = final_structure(g, &proj, qg.size());
    let obj = Arc::new(VGroup::derived(qg, a, "final-structure")?);
    let p = VHom::derived(g.clone(), obj.clone(), proj, "quotient-projection")?;
    Ok((obj, p))
}

/// Kernel with the induced structure, and its normal inclusion.
pub fn kernel(f: &VHom) -> Result<(Arc<VGroup>, VHom)> {
    induced_subobject(f.dom(), &f.kernel_elements())
}

/// Cokernel of a morphism with normal image.
pub fn cokernel(f: &VHom) -> Result<(Arc<VGroup>, VHom)> {
    let img = f.image();
    if let Some((element, conjugator)) = f.cod().group().normality_witness(&img) {
        return Err(Error::NotNormal { element, conjugator });
    }
    quotient_object(f.cod(), &img)
}

#[derive(Debug, Clone)]
pub struct Product {
    pub object: Arc<VGroup>,
    pub p1: VHom,
    pub p2: VHom,
}

/// `(X × Y, a ∧ b)`; the pair `(x, y)` sits at index `x * |Y| + y`.
pub fn product(g: &Arc<VGroup>, h: &Arc<VGroup>) -> Result<Product> {
    if !g.same_quantale(h) {
        return Err(Error::QuantaleMismatch);
    }
    let group = FiniteGroup::direct_product(g.group(), h.group());
    let m = h.size();
    let q = g.quantale();
    let a = VRel::from_fn(q.clone(), group.size(), group.size(), |i, j| {
        q.meet(g.a(i / m, j / m), h.a(i % m, j % m))
    });
    let object = Arc::new(VGroup::derived(group, a, "product-structure")?);
    let n = object.size();
    let p1 = VHom::derived(object.clone(), g.clone(), (0..n).map(|i| i / m).collect(), "product-projection")?;
    let p2 = VHom::derived(object.clone(), h.clone(), (0..n).map(|i| i % m).collect(), "product-projection")?;
    Ok(Product { object, p1, p2 })
}

#[derive(Debug, Clone)]
pub struct Pullback {
    pub object: Arc<VGroup>,
    pub p1: VHom,
    pub p2: VHom,
    /// The pairs `(x, y)` in carrier order.
    pub pairs: Vec<(usize, usize)>,
}

/// `X ×_Z Y` with structure `a ∧ b`; pairs ordered lexicographically.
pub fn pullback(f: &VHom, g: &VHom) -> Result<Pullback> {
    if !f.dom().same_quantale(g.dom()) || !f.cod().same_quantale(g.cod()) {
        return Err(Error::QuantaleMismatch);
    }
    if **f.cod() != **g.cod() {
        return Err(Error::DimensionMismatch("pullback legs need a common codomain".into()));
    }
    let (x, y) = (f.dom(), g.dom());
    let m = y.size();
    let pairs: Vec<(usize, usize)> = (0..x.size())
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| f.apply(i) == g.apply(j))
        .collect();
    let full = FiniteGroup::direct_product(x.group(), y.group());
    let idx: Vec<usize> = pairs.iter().map(|&(i, j)| i * m + j).collect();
    let group = full.subgroup(&idx)?;
    let q = x.quantale();
    let a = VRel::from_fn(q.clone(), pairs.len(), pairs.len(), |s, t| {
        q.meet(x.a(pairs[s].0, pairs[t].0), y.a(pairs[s].1, pairs[t].1))
    });
    let object = Arc::new(VGroup::derived(group, a, "pullback-structure")?);
    let p1 = VHom::derived(object.clone(), x.clone(), pairs.iter().map(|p| p.0).collect(), "pullback-projection")?;
    let p2 = VHom::derived(object.clone(), y.clone(), pairs.iter().map(|p| p.1).collect(), "pullback-projection")?;
    Ok(Pullback { object, p1, p2, pairs })
}

/// `{x : f(x) = g(x)}` with the induced structure.
pub fn equalizer(f: &VHom, g: &VHom) -> Result<(Arc<VGroup>, VHom)> {
    if f.map().len() != g.map().len() || **f.dom() != **g.dom() || **f.cod() != **g.cod() {
        return Err(Error::DimensionMismatch("equalizer needs parallel morphisms".into()));
    }
    let elems: Vec<usize> = (0..f.dom().size()).filter(|&x| f.apply(x) == g.apply(x)).collect();
    induced_subobject(f.dom(), &elems)
}

/// Quotient of the codomain by the normal closure of `{f(x) − g(x)}`.
pub fn coequalizer(f: &VHom, g: &VHom) -> Result<(Arc<VGroup>, VHom)> {
    if f.map().len() != g.map().len() || **f.dom() != **g.dom() || **f.cod() != **g.cod() {
        return Err(Error::DimensionMismatch("coequalizer needs parallel morphisms".into()));
    }
    let cod = f.cod().group();
    let diffs: Vec<usize> = (0..f.dom().size()).map(|x| cod.sub(f.apply(x), g.apply(x))).collect();
    quotient_object(f.cod(), &cod.normal_closure(&diffs))
}

#[derive(Debug, Clone)]
pub struct ImageFactorization {
    pub middle: Arc<VGroup>,
    pub e: VHom,
    pub m: VHom,
}

/// `f = m ∘ e` through the set image carrying the final structure along `e`.
pub fn image_factorize(f: &VHom) -> Result<ImageFactorization> {
    let img = f.image();
    let sub = f.cod().group().subgroup(&img)?;
    let e_map: Vec<usize> =
        f.map().iter().map(|y| img.binary_search(y).expect("value lies in the image")).collect();
    let c = final_structure(f.dom(), &e_map, img.len());
    let middle = Arc::new(VGroup::derived(sub, c, "image-structure")?);
    let e = VHom::derived(f.dom().clone(), middle.clone(), e_map, "image-epi")?;
    let m = VHom::derived(middle.clone(), f.cod().clone(), img, "image-mono")?;
    Ok(ImageFactorization { middle, e, m })
}

/// Morphism-class flags read off the concrete characterizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HomClass {
    pub mono: bool,
    pub epi: bool,
    pub regular_epi: bool,
    pub normal_mono: bool,
    /// Regular epis are normal over an integral quantale; `None` otherwise.
    pub normal_epi: Option<bool>,
}

fn is_final(f: &VHom) -> bool {
    let c = final_structure(f.dom(), f.map(), f.cod().size());
    c == *f.cod().structure()
}

fn is_initial(f: &VHom) -> bool {
    let n = f.dom().size();
    (0..n).all(|x| (0..n).all(|y| f.dom().a(x, y) == f.cod().a(f.apply(x), f.apply(y))))
}

pub fn classify_hom(f: &VHom) -> HomClass {
    let mono = f.is_injective();
    let epi = f.is_surjective();
    let regular_epi = epi && is_final(f);
    let normal_mono = mono && f.cod().group().is_normal(&f.image()) && is_initial(f);
    let normal_epi = f.dom().quantale().is_integral().then_some(regular_epi);
    HomClass { mono, epi, regular_epi, normal_mono, normal_epi }
}

/// Whether a commuting square
///
/// ```text
///   P --p2--> B
///   |p1       |g
///   v         v
///   A --f---> C
/// ```
///
/// is a pullback: the comparison into `A ×_C B` is bijective and the
/// structure of `P` is the meet of the pulled-back structures.
pub fn is_pullback_square(p1: &VHom, p2: &VHom, f: &VHom, g: &VHom) -> Result<bool> {
    if **p1.dom() != **p2.dom() || **p1.cod() != **f.dom() || **p2.cod() != **g.dom() {
        return Err(Error::DimensionMismatch("square is not well formed".into()));
    }
    if **f.cod() != **g.cod() {
        return Err(Error::DimensionMismatch("square is not well formed".into()));
    }
    let p = p1.dom();
    let n = p.size();
    if (0..n).any(|i| f.apply(p1.apply(i)) != g.apply(p2.apply(i))) {
        return Ok(false);
    }
    let (a, b) = (f.dom(), g.dom());
    let matching = (0..a.size())
        .map(|x| (0..b.size()).filter(|&y| f.apply(x) == g.apply(y)).count())
        .sum::<usize>();
    let mut seen = std::collections::HashSet::with_capacity(n);
    for i in 0..n {
        if !seen.insert((p1.apply(i), p2.apply(i))) {
            return Ok(false);
        }
    }
    if seen.len() != matching {
        return Ok(false);
    }
    let q = p.quantale();
    Ok((0..n).all(|i| {
        (0..n).all(|j| {
            let expect: Elem =
                q.meet(a.a(p1.apply(i), p1.apply(j)), b.a(p2.apply(i), p2.apply(j)));
            p.a(i, j) == expect
        })
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::Quantale;

    fn z4_even() -> Arc<VGroup> {
        let q = Quantale::boolean();
        let d = [q.top(), q.bottom(), q.top(), q.bottom()];
        Arc::new(VGroup::from_delta(FiniteGroup::cyclic(4), q, &d).unwrap())
    }

    fn z2_discrete() -> Arc<VGroup> {
        Arc::new(VGroup::discrete(FiniteGroup::cyclic(2), Quantale::boolean()))
    }

    #[test]
    fn kernel_and_cokernel_of_the_z4_quotient() {
        let g = z4_even();
        let qmap = VHom::new(g.clone(), z2_discrete(), vec![0, 1, 0, 1]).unwrap();
        let (k, inc) = kernel(&qmap).unwrap();
        assert_eq!(inc.map(), &[0, 2]);
        assert!(k.is_indiscrete());
        let (c, proj) = cokernel(&inc).unwrap();
        assert_eq!(proj.map(), &[0, 1, 0, 1]);
        assert!(c.is_discrete());
        let cls = classify_hom(&qmap);
        assert!(cls.epi && cls.regular_epi && !cls.mono);
        assert_eq!(cls.normal_epi, Some(true));
        let ci = classify_hom(&inc);
        assert!(ci.mono && ci.normal_mono);
    }

    #[test]
    fn trivial_kernels_and_cokernels() {
        let g = z4_even();
        let (k, _) = kernel(&VHom::identity(g.clone())).unwrap();
        assert_eq!(k.size(), 1);
        assert_eq!(k.a(0, 0), g.a(0, 0));
        let (c, _) = cokernel(&VHom::identity(g.clone())).unwrap();
        assert_eq!(c.size(), 1);
        let zero = Arc::new(VGroup::zero_object(g.quantale().clone()));
        let (k, _) = kernel(&VHom::zero(g.clone(), zero.clone()).unwrap()).unwrap();
        assert_eq!(*k, *g);
        let (c, _) = cokernel(&VHom::zero(zero, g.clone()).unwrap()).unwrap();
        assert_eq!(*c.structure(), *g.structure());
    }

    #[test]
    fn cokernel_of_non_normal_image_names_a_witness() {
        let q = Quantale::boolean();
        let s3 = Arc::new(VGroup::discrete(FiniteGroup::symmetric3(), q.clone()));
        let h = s3.group().generated(&[1]);
        let (_, inc) = induced_subobject(&s3, &h).unwrap();
        assert!(matches!(cokernel(&inc), Err(Error::NotNormal { .. })));
    }

    #[test]
    fn limits_of_identities() {
        let g = z4_even();
        let id = VHom::identity(g.clone());
        let pb = pullback(&id, &id).unwrap();
        assert_eq!(pb.object.size(), 4);
        assert!(is_pullback_square(&pb.p1, &pb.p2, &id, &id).unwrap());
        let (e, inc) = equalizer(&id, &id).unwrap();
        assert_eq!(*e, *g);
        assert_eq!(inc.map(), &[0, 1, 2, 3]);
        let triv = Arc::new(VGroup::zero_object(g.quantale().clone()));
        let p = product(&g, &triv).unwrap();
        assert_eq!(*p.object.structure(), *g.structure());
    }

    #[test]
    fn image_of_zero_map_is_single_class_join() {
        let g = z4_even();
        let h = z2_discrete();
        let f = VHom::zero(g.clone(), h).unwrap();
        let fac = image_factorize(&f).unwrap();
        assert_eq!(fac.middle.size(), 1);
        assert_eq!(fac.middle.a(0, 0), g.quantale().top());
        assert_eq!(fac.e.then(&fac.m).unwrap().map(), f.map());
    }

    #[test]
    fn coequalizer_of_identity_and_zero() {
        let g = z4_even();
        let id = VHom::identity(g.clone());
        let z = VHom::new(g.clone(), g.clone(), vec![0; 4]).unwrap();
        let (c, _) = coequalizer(&id, &z).unwrap();
        assert_eq!(c.size(), 1);
    }
}
