//! Randomized invariants over small groups and the builtin quantales.

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use vgrp::descent::{descent_cover, verify_cover_window, CoverPoint};
use vgrp::document::WorkbenchDocument;
use vgrp::factorization::{em_factorize, is_covering, ml_factorize};
use vgrp::quantale::{builtin_tables, validate_quantale, BuiltinQuantale};
use vgrp::torsion::{check_short_exact, decompose, reflect_hom, torsion_part};
use vgrp::vgroup::{enumerate_homs, enumerate_structures, kernel, validate_vgroup};
use vgrp::{FiniteGroup, Quantale, VGroup, VHom, VRel};

fn quantale(i: usize) -> Arc<Quantale> {
    match i % 3 {
        0 => Quantale::boolean(),
        1 => Quantale::lawvere_chain(2).unwrap(),
        _ => Quantale::ultrametric_chain(3).unwrap(),
    }
}

fn group(i: usize) -> FiniteGroup {
    match i % 6 {
        5 => FiniteGroup::klein(),
        k => FiniteGroup::cyclic(k + 1),
    }
}

fn object(qi: usize, gi: usize, pick: usize) -> Arc<VGroup> {
    let all = enumerate_structures(&group(gi), &quantale(qi)).unwrap();
    Arc::new(all[pick % all.len()].clone())
}

fn hom(qi: usize, (g1, p1): (usize, usize), (g2, p2): (usize, usize), pick: usize) -> VHom {
    let (x, y) = (object(qi, g1, p1), object(qi, g2, p2));
    let homs = enumerate_homs(&x, &y).unwrap();
    homs[pick % homs.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chains_satisfy_the_laws(m in 1u16..8) {
        for b in [BuiltinQuantale::LawvereChain { m }, BuiltinQuantale::UltrametricChain { m }] {
            let t = builtin_tables(b).unwrap();
            prop_assert!(validate_quantale(&t).unwrap().is_ok());
            let m = m as usize;
            for u in 0..=m {
                for v in 0..=m {
                    let expect = match b {
                        BuiltinQuantale::LawvereChain { .. } => (u + v).min(m),
                        _ => u.max(v),
                    };
                    prop_assert_eq!(t.tensor[u][v], expect);
                }
            }
        }
    }

    #[test]
    fn routes_agree_on_random_graphs(n in 1usize..6, seed in prop::collection::vec(0u16..4, 36)) {
        let q = Quantale::lawvere_chain(3).unwrap();
        let g = FiniteGroup::cyclic(n);
        // Reflexive by construction, arbitrary elsewhere.
        let a = VRel::from_fn(q.clone(), n, n, |x, y| {
            if x == y { q.unit() } else { q.elem_at(seed[x * 6 + y] as usize).unwrap() }
        });
        let v = validate_vgroup(&g, &a).unwrap();
        prop_assert_eq!(v.shift_route.is_ok(), v.functor_route.is_ok());
    }

    #[test]
    fn documents_round_trip(qi in 0usize..3, gi in 0usize..6, pick in any::<usize>()) {
        let x = object(qi, gi, pick);
        let doc = WorkbenchDocument::from_vgroup(&x);
        let text = doc.to_canonical_json();
        let back = WorkbenchDocument::parse(&text).unwrap();
        prop_assert_eq!(back.to_canonical_json(), text);
        prop_assert_eq!(&*back.object().unwrap(), &*x);
    }

    #[test]
    fn torsion_sequence(qi in 0usize..3, gi in 0usize..6, pick in any::<usize>()) {
        let x = object(qi, gi, pick);
        let d = decompose(&x).unwrap();
        prop_assert!(check_short_exact(&d.injection, &d.projection).is_ok());
        prop_assert!(d.torsion_part.is_indiscrete());
        prop_assert!(d.quotient.is_separated());
        // N_X by definition.
        let q = x.quantale();
        let z = x.group().zero();
        let nx: Vec<usize> = (0..x.size())
            .filter(|&e| q.leq(q.unit(), x.a(z, e)) && q.leq(q.unit(), x.a(e, z)))
            .collect();
        prop_assert_eq!(torsion_part(&x).unwrap(), nx);
        let id = reflect_hom(&VHom::identity(x.clone())).unwrap();
        prop_assert!((0..id.dom().size()).all(|i| id.apply(i) == i));
    }

    #[test]
    fn coverings_and_factorizations(
        qi in 0usize..2,
        a in (0usize..5, any::<usize>()),
        b in (0usize..5, any::<usize>()),
        pick in any::<usize>(),
    ) {
        let f = hom(qi, a, b, pick);
        prop_assert_eq!(is_covering(&f).unwrap(), kernel(&f).unwrap().0.is_separated());
        for fac in [em_factorize(&f).unwrap(), ml_factorize(&f).unwrap()] {
            let composite = fac.e.then(&fac.m).unwrap();
            prop_assert_eq!(composite.map(), f.map());
        }
    }

    #[test]
    fn cover_formula(qi in 0usize..3, gi in 0usize..5, pick in any::<usize>(),
                     z1 in any::<i64>(), z2 in any::<i64>(), x1 in 0usize..8, x2 in 0usize..8) {
        let base = object(qi, gi, pick);
        let l = descent_cover(&base).unwrap();
        let (x1, x2) = (x1 % base.size(), x2 % base.size());
        let q = base.quantale();
        let (p, r) = (CoverPoint::new(z1, x1), CoverPoint::new(z2, x2));
        let expect = if z1 < z2 {
            base.a(x1, x2)
        } else if z1 == z2 && x1 == x2 {
            q.top()
        } else {
            q.bottom()
        };
        prop_assert_eq!(l.eval(&p, &r), expect);
        let sum = l.add(&p, &r);
        prop_assert_eq!(&sum.z, &(BigInt::from(z1) + BigInt::from(z2)));
        prop_assert_eq!(l.project(&sum), base.group().add(x1, x2));
        prop_assert_eq!(l.project(&l.section(x1)), x1);
        prop_assert_eq!(l.add(&p, &l.neg(&p)), l.zero());
    }

    #[test]
    fn windows_are_stable(qi in 0usize..3, gi in 0usize..4, pick in any::<usize>(), n in 1u32..3) {
        let l = descent_cover(&object(qi, gi, pick)).unwrap();
        let (a, b) = (verify_cover_window(&l, n).unwrap(), verify_cover_window(&l, n + 1).unwrap());
        prop_assert!(a.is_ok() && b.is_ok());
        prop_assert_eq!(a.finality_join, b.finality_join);
    }
}

#[test]
fn boolean_structures_are_symmetric() {
    let b = Quantale::boolean();
    for g in vgrp::builders::full_groups() {
        for x in enumerate_structures(&g, &b).unwrap() {
            assert!(x.is_symmetric(), "{x}");
        }
    }
}
