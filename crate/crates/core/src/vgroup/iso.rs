//! Brute-force isomorphism search.

use std::sync::Arc;

use super::{VGroup, VHom};

/// A bijective homomorphism that preserves and reflects the structure.
pub fn is_isomorphism(f: &VHom) -> bool {
    let n = f.dom().size();
    n == f.cod().size()
        && f.is_injective()
        && (0..n).all(|x| (0..n).all(|y| f.dom().a(x, y) == f.cod().a(f.apply(x), f.apply(y))))
}

/// Some isomorphism `g → h`, found by backtracking over bijections.
pub fn find_isomorphism(g: &Arc<VGroup>, h: &Arc<VGroup>) -> Option<VHom> {
    let n = g.size();
    if n != h.size() || !g.same_quantale(h) {
        return None;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if search(g, h, &mut map, &mut used, 0) {
        Some(VHom::new_unchecked(g.clone(), h.clone(), map))
    } else {
        None
    }
}

fn search(g: &VGroup, h: &VGroup, map: &mut [usize], used: &mut [bool], x: usize) -> bool {
    let n = g.size();
    if x == n {
        return true;
    }
    for y in 0..n {
        if used[y] {
            continue;
        }
        map[x] = y;
        if fits(g, h, map, x) {
            used[y] = true;
            if search(g, h, map, used, x + 1) {
                return true;
            }
            used[y] = false;
        }
    }
    map[x] = usize::MAX;
    false
}

fn fits(g: &VGroup, h: &VGroup, map: &[usize], x: usize) -> bool {
    let (gg, hg) = (g.group(), h.group());
    if x == gg.zero() && map[x] != hg.zero() {
        return false;
    }
    (0..=x).all(|y| {
        g.a(x, y) == h.a(map[x], map[y])
            && g.a(y, x) == h.a(map[y], map[x])
            && [(x, y), (y, x)].iter().all(|&(s, t)| {
                let st = gg.add(s, t);
                st > x || map[st] == hg.add(map[s], map[t])
            })
    }) && (0..x).all(|s| {
        (0..x).all(|t| gg.add(s, t) != x || map[x] == hg.add(map[s], map[t]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::quantale::Quantale;

    #[test]
    fn relabelled_cyclic_groups_are_isomorphic() {
        let b = Quantale::boolean();
        let z4 = Arc::new(VGroup::discrete(FiniteGroup::cyclic(4), b.clone()));
        let k = Arc::new(VGroup::discrete(FiniteGroup::klein(), b.clone()));
        assert!(find_isomorphism(&z4, &k).is_none());
        let iso = find_isomorphism(&z4, &z4).unwrap();
        assert!(is_isomorphism(&iso));
        let ind = Arc::new(VGroup::indiscrete(FiniteGroup::cyclic(4), b).unwrap());
        assert!(find_isomorphism(&z4, &ind).is_none());
    }
}
