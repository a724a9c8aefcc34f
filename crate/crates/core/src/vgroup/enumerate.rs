//! Exhaustive enumeration of structures and homomorphisms.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::quantale::{Elem, Quantale};
use crate::vrel::VRel;

use super::{structure_from_delta, validate_vgroup, VGroup, VHom};

/// Guard on the number of raw candidates any enumeration may visit.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// `base^exp`, saturating.
pub fn candidate_count(base: usize, exp: usize) -> u128 {
    let mut c: u128 = 1;
    for _ in 0..exp {
        c = c.saturating_mul(base as u128);
    }
    c
}

fn guard(candidates: u128) -> Result<()> {
    if candidates > ENUMERATION_LIMIT {
        return Err(Error::Capacity { candidates, limit: ENUMERATION_LIMIT });
    }
    Ok(())
}

/// Mixed-radix counter over `choices[i]` values per digit, most
/// significant digit first.
struct Odometer {
    radix: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl Odometer {
    fn new(radix: Vec<usize>) -> Self {
        let done = radix.iter().any(|&r| r == 0);
        Odometer { digits: vec![0; radix.len()], radix, done }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.digits.clone();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.radix[i] {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// Every δ array over `group` in lexicographic order of element indices.
pub fn delta_candidates(group: &FiniteGroup, q: &Quantale) -> Result<impl Iterator<Item = Vec<Elem>>> {
    guard(candidate_count(q.size(), group.size()))?;
    let elems: Vec<Elem> = q.elements().collect();
    Ok(Odometer::new(vec![q.size(); group.size()])
        .map(move |d| d.into_iter().map(|i| elems[i]).collect()))
}

/// All valid structures on `group`, in lexicographic δ order.
pub fn enumerate_structures(group: &FiniteGroup, q: &Arc<Quantale>) -> Result<Vec<VGroup>> {
    let mut out = Vec::new();
    for d in delta_candidates(group, q)? {
        if !q.above_unit(d[group.zero()]) {
            continue;
        }
        let a = structure_from_delta(group, q.clone(), &d)?;
        if validate_vgroup(group, &a)?.is_ok() {
            out.push(VGroup { group: group.clone(), a });
        }
    }
    Ok(out)
}

/// Every reflexive `n × n` V-matrix (diagonal above `k`), shift-invariant
/// or not, in lexicographic row-major order.
pub fn reflexive_graphs(n: usize, q: &Arc<Quantale>) -> Result<impl Iterator<Item = VRel>> {
    let above: Vec<Elem> = q.elements().filter(|&u| q.above_unit(u)).collect();
    let all: Vec<Elem> = q.elements().collect();
    let count = candidate_count(all.len(), n * n - n).saturating_mul(candidate_count(above.len(), n));
    guard(count)?;
    let radix: Vec<usize> =
        (0..n * n).map(|i| if i / n == i % n { above.len() } else { all.len() }).collect();
    let q = q.clone();
    Ok(Odometer::new(radix).map(move |digits| {
        let entries = digits
            .iter()
            .enumerate()
            .map(|(i, &d)| if i / n == i % n { above[d] } else { all[d] })
            .collect();
        VRel::new(q.clone(), n, n, entries).expect("entries come from the quantale")
    }))
}

/// All V-homomorphisms `g → h`, in lexicographic order of their maps.
pub fn enumerate_homs(g: &Arc<VGroup>, h: &Arc<VGroup>) -> Result<Vec<VHom>> {
    if !g.same_quantale(h) {
        return Err(Error::QuantaleMismatch);
    }
    guard(candidate_count(h.size(), g.size()))?;
    let mut out = Vec::new();
    let mut map = vec![0usize; g.size()];
    extend(g, h, &mut map, 0, &mut out);
    Ok(out)
}

fn consistent(g: &VGroup, h: &VGroup, map: &[usize], x: usize) -> bool {
    let (gg, hg) = (g.group(), h.group());
    let q = g.quantale();
    if x == gg.zero() && map[x] != hg.zero() {
        return false;
    }
    for y in 0..=x {
        if !q.leq(g.a(x, y), h.a(map[x], map[y])) || !q.leq(g.a(y, x), h.a(map[y], map[x])) {
            return false;
        }
        for (s, t) in [(x, y), (y, x)] {
            let st = gg.add(s, t);
            if st <= x && map[st] != hg.add(map[s], map[t]) {
                return false;
            }
        }
    }
    // Sums landing on x from earlier elements.
    for s in 0..x {
        for t in 0..x {
            if gg.add(s, t) == x && map[x] != hg.add(map[s], map[t]) {
                return false;
            }
        }
    }
    true
}

fn extend(g: &Arc<VGroup>, h: &Arc<VGroup>, map: &mut Vec<usize>, x: usize, out: &mut Vec<VHom>) {
    if x == g.size() {
        out.push(VHom::new_unchecked(g.clone(), h.clone(), map.clone()));
        return;
    }
    for y in 0..h.size() {
        map[x] = y;
        if consistent(g, h, map, x) {
            extend(g, h, map, x + 1, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vgroup::validate_hom;

    #[test]
    fn structure_counts() {
        let b = Quantale::boolean();
        let l = Quantale::lawvere_chain(2).unwrap();
        let t = enumerate_structures(&FiniteGroup::trivial(), &b).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].a(0, 0), b.top());
        assert_eq!(enumerate_structures(&FiniteGroup::cyclic(2), &b).unwrap().len(), 2);
        assert_eq!(enumerate_structures(&FiniteGroup::cyclic(2), &l).unwrap().len(), 3);
    }

    #[test]
    fn capacity_guard() {
        let l = Quantale::lawvere_chain(4).unwrap();
        let big = FiniteGroup::cyclic(9);
        assert!(matches!(enumerate_structures(&big, &l), Err(Error::Capacity { .. })));
    }

    #[test]
    fn small_hom_sets() {
        let b = Quantale::boolean();
        let z2 = FiniteGroup::cyclic(2);
        let ind = Arc::new(VGroup::indiscrete(z2.clone(), b.clone()).unwrap());
        let dis = Arc::new(VGroup::discrete(z2, b.clone()));
        let triv = Arc::new(VGroup::zero_object(b));
        let homs = enumerate_homs(&ind, &dis).unwrap();
        assert_eq!(homs.len(), 1);
        assert!(homs[0].is_zero());
        let homs = enumerate_homs(&dis, &dis).unwrap();
        let maps: Vec<&[usize]> = homs.iter().map(|h| h.map()).collect();
        assert_eq!(maps, vec![&[0, 0][..], &[0, 1][..]]);
        assert_eq!(enumerate_homs(&triv, &dis).unwrap().len(), 1);
    }

    #[test]
    fn backtracking_matches_brute_force() {
        let l = Quantale::lawvere_chain(2).unwrap();
        let objs: Vec<Arc<VGroup>> = [FiniteGroup::cyclic(2), FiniteGroup::cyclic(4), FiniteGroup::klein()]
            .iter()
            .flat_map(|g| enumerate_structures(g, &l).unwrap())
            .map(Arc::new)
            .collect();
        for g in objs.iter().step_by(3) {
            for h in objs.iter().step_by(4) {
                let found: Vec<Vec<usize>> =
                    enumerate_homs(g, h).unwrap().into_iter().map(|f| f.map().to_vec()).collect();
                let brute: Vec<Vec<usize>> = Odometer::new(vec![h.size(); g.size()])
                    .filter(|m| validate_hom(g, h, m).unwrap().is_ok())
                    .collect();
                assert_eq!(found, brute);
            }
        }
    }

    #[test]
    fn reflexive_graph_count() {
        let b = Quantale::boolean();
        assert_eq!(reflexive_graphs(2, &b).unwrap().count(), 4);
    }
}
