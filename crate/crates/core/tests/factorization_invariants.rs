//! Exhaustive invariants of the two factorization systems over the boolean
//! part of the smoke suite.

use vgrp::builders::{standard_suite, SuiteLevel};
use vgrp::factorization::{classify_morphism, em_factorize, in_e_definitional, ml_factorize};
use vgrp::vgroup::{find_isomorphism, pullback};

#[test]
fn factorizations_are_unique_up_to_iso() {
    let s = standard_suite(SuiteLevel::Smoke).unwrap();
    let objs = s.objects_over(0);
    let mut alternatives = 0;
    for &i in &objs {
        for &j in &objs {
            for f in s.hom_set(i, j).unwrap().homs {
                let em = em_factorize(&f).unwrap();
                let ml = ml_factorize(&f).unwrap();
                for &k in &objs {
                    let ins = s.hom_set(i, k).unwrap().homs;
                    let outs = s.hom_set(k, j).unwrap().homs;
                    for e in &ins {
                        for m in &outs {
                            if e.then(m).unwrap().map() != f.map() {
                                continue;
                            }
                            let (ce, cm) = (classify_morphism(e).unwrap(), classify_morphism(m).unwrap());
                            if ce.in_e.holds && cm.in_m.holds {
                                alternatives += 1;
                                assert!(find_isomorphism(m.dom(), &em.middle).is_some(), "{f} via {}", m.dom());
                            }
                            if ce.in_e_prime.holds && cm.in_m_star.holds {
                                alternatives += 1;
                                assert!(find_isomorphism(m.dom(), &ml.middle).is_some(), "{f} via {}", m.dom());
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(alternatives > 0);
}

#[test]
fn e_prime_is_pullback_stable() {
    let s = standard_suite(SuiteLevel::Smoke).unwrap();
    let objs = s.objects_over(0);
    let mut pulled = 0;
    for &i in &objs {
        for &j in &objs {
            for f in s.hom_set(i, j).unwrap().homs {
                if !classify_morphism(&f).unwrap().in_e_prime.holds {
                    continue;
                }
                for &k in &objs {
                    for g in s.hom_set(k, j).unwrap().homs {
                        let pb = pullback(&f, &g).unwrap();
                        pulled += 1;
                        assert!(in_e_definitional(&pb.p2).unwrap(), "{f} along {g}");
                    }
                }
            }
        }
    }
    assert!(pulled > 0);
}
