//! Finite groups given by Cayley tables.
//!
//! Group elements are plain indices `0..n`. Subgroups are sorted index
//! lists; taking a subgroup or a quotient relabels the elements in ascending
//! order of (least) representative.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_SUBGROUPS: usize = 512;

/// Equality compares Cayley tables only; names are display labels.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Validates a Cayley table (closure, associativity, identity, inverses).
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Structural("a group needs at least one element".into()));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::Structural(format!("Cayley table is not {n}x{n}")));
        }
        if let Some((x, y)) = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| table[x][y] >= n)
        {
            return Err(Error::Structural(format!("table[{x}][{y}] is out of range")));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let op = |x: usize, y: usize| flat[x * n + y];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if op(op(x, y), z) != op(x, op(y, z)) {
                        return Err(Error::Structural(format!(
                            "Cayley table is not associative at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| op(e, x) == x && op(x, e) == x))
            .ok_or_else(|| Error::Structural("Cayley table has no identity".into()))?;
        let mut inv = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| op(x, y) == identity && op(y, x) == identity)
                .ok_or_else(|| Error::Structural(format!("element {x} has no inverse")))?;
            inv.push(y);
        }
        Ok(FiniteGroup { name: name.into(), n, table: flat, identity, inv })
    }

    fn from_fn(name: impl Into<String>, n: usize, op: impl Fn(usize, usize) -> usize) -> Self {
        let table = (0..n).map(|x| (0..n).map(|y| op(x, y)).collect()).collect();
        Self::from_table(name, table).expect("generated table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic groups need n >= 1");
        if n == 1 {
            return Self::from_fn("Z1", 1, |_, _| 0);
        }
        Self::from_fn(format!("Z{n}"), n, |x, y| (x + y) % n)
    }

    /// `G × H`, with `(g, h)` stored at index `g * |H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let m = h.n;
        Self::from_fn(format!("{}x{}", g.name, h.name), g.n * m, |a, b| {
            g.add(a / m, b / m) * m + h.add(a % m, b % m)
        })
    }

    pub fn klein() -> Self {
        let mut k = Self::direct_product(&Self::cyclic(2), &Self::cyclic(2));
        k.name = "Z2xZ2".into();
        k
    }

    /// The symmetric group on three letters; element 0 is the identity
    /// permutation, the rest follow lexicographic order of images.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        // (p + q)(i) = q(p(i)): apply p first.
        Self::from_fn("S3", 6, |a, b| {
            let (p, q) = (perms[a], perms[b]);
            index([q[p[0]], q[p[1]], q[p[2]]])
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// Right difference `y + (−x)`.
    #[inline]
    pub fn sub(&self, y: usize, x: usize) -> usize {
        self.add(y, self.inv[x])
    }

    /// `x + n − x`.
    #[inline]
    pub fn conjugate(&self, n: usize, x: usize) -> usize {
        self.add(self.add(x, n), self.inv[x])
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|x| self.table[x * self.n..(x + 1) * self.n].to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| self.add(x, y) == self.add(y, x)))
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &x in elems {
            member[x] = true;
        }
        member[self.identity]
            && elems.iter().all(|&x| {
                member[self.neg(x)] && elems.iter().all(|&y| member[self.add(x, y)])
            })
    }

    /// Witness `(n, x)` with `x + n − x` outside `sub`, or `None` when normal.
    pub fn normality_witness(&self, sub: &[usize]) -> Option<(usize, usize)> {
        let mut member = vec![false; self.n];
        for &x in sub {
            member[x] = true;
        }
        for &n in sub {
            for x in 0..self.n {
                if !member[self.conjugate(n, x)] {
                    return Some((n, x));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        self.normality_witness(sub).is_none()
    }

    /// Smallest subgroup containing `gens`, as a sorted list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.n];
        member[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut frontier: Vec<usize> = gens.to_vec();
        while let Some(g) = frontier.pop() {
            if member[g] {
                continue;
            }
            member[g] = true;
            elems.push(g);
            // Closing under products with everything known so far suffices
            // in a finite group (inverses are positive powers).
            for &e in &elems.clone() {
                for p in [self.add(e, g), self.add(g, e)] {
                    if !member[p] {
                        frontier.push(p);
                    }
                }
            }
        }
        elems.sort_unstable();
        elems
    }

    /// Smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[usize]) -> Vec<usize> {
        let conjugates: Vec<usize> = gens
            .iter()
            .flat_map(|&g| (0..self.n).map(move |x| (g, x)))
            .map(|(g, x)| self.conjugate(g, x))
            .collect();
        self.generated(&conjugates)
    }

    /// The subgroup on `elems` (sorted), relabelled `0..elems.len()`.
    pub fn subgroup(&self, elems: &[usize]) -> Result<FiniteGroup> {
        if !self.is_subgroup(elems) {
            return Err(Error::Structural(format!("{elems:?} is not a subgroup of {}", self.name)));
        }
        let pos = |x: usize| elems.binary_search(&x).expect("closed under the operation");
        let table = elems
            .iter()
            .map(|&x| elems.iter().map(|&y| pos(self.add(x, y))).collect())
            .collect();
        FiniteGroup::from_table(format!("{}<{}>", self.name, elems.len()), table)
    }

    /// `G / N` together with the projection map. Cosets are numbered by
    /// their least element.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(normal) {
            return Err(Error::Structural(format!("{normal:?} is not a subgroup")));
        }
        if let Some((element, conjugator)) = self.normality_witness(normal) {
            return Err(Error::NotNormal { element, conjugator });
        }
        let mut proj = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for x in 0..self.n {
            if proj[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for &m in normal {
                proj[self.add(x, m)] = c;
            }
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| proj[self.add(a, b)]).collect())
            .collect();
        let q = FiniteGroup::from_table(format!("{}/{}", self.name, normal.len()), table)?;
        Ok((q, proj))
    }

    /// Every subgroup, each as a sorted list, smallest first. Built as joins
    /// of cyclic subgroups; more than `MAX_SUBGROUPS` is a capacity error.
    pub fn subgroups(&self) -> Result<Vec<Vec<usize>>> {
        let cyclic: BTreeSet<Vec<usize>> = (0..self.n).map(|g| self.generated(&[g])).collect();
        let mut seen = cyclic.clone();
        let mut frontier: Vec<Vec<usize>> = cyclic.iter().cloned().collect();
        while let Some(s) = frontier.pop() {
            for c in &cyclic {
                if c.iter().all(|e| s.binary_search(e).is_ok()) {
                    continue;
                }
                let gens: Vec<usize> = s.iter().chain(c).copied().collect();
                let join = self.generated(&gens);
                if seen.insert(join.clone()) {
                    if seen.len() > MAX_SUBGROUPS {
                        return Err(Error::Capacity {
                            candidates: seen.len() as u128,
                            limit: MAX_SUBGROUPS as u128,
                        });
                    }
                    frontier.push(join);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    pub fn normal_subgroups(&self) -> Result<Vec<Vec<usize>>> {
        Ok(self.subgroups()?.into_iter().filter(|s| self.is_normal(s)).collect())
    }

    /// First pair `(x, y)` where `map` fails to be a homomorphism into `cod`.
    pub fn hom_failure(&self, cod: &FiniteGroup, map: &[usize]) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| (0..self.n).map(move |y| (x, y)))
            .find(|&(x, y)| map[self.add(x, y)] != cod.add(map[x], map[y]))
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups_validate() {
        for g in [
            FiniteGroup::trivial(),
            FiniteGroup::cyclic(4),
            FiniteGroup::klein(),
            FiniteGroup::symmetric3(),
        ] {
            let again = FiniteGroup::from_table("again", g.table()).unwrap();
            assert_eq!(again.zero(), g.zero());
        }
        assert!(!FiniteGroup::symmetric3().is_abelian());
        assert!(FiniteGroup::klein().is_abelian());
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(FiniteGroup::from_table("x", vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroup::from_table("x", vec![vec![0, 1], vec![1]]).is_err());
        assert!(FiniteGroup::from_table("x", vec![vec![0, 2], vec![1, 0]]).is_err());
    }

    #[test]
    fn subgroups_of_small_groups() {
        assert_eq!(FiniteGroup::cyclic(4).subgroups().unwrap(), vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
        // S3: trivial, three of order 2, A3, S3.
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.subgroups().unwrap().len(), 6);
        assert_eq!(s3.normal_subgroups().unwrap().len(), 3);
        assert_eq!(FiniteGroup::klein().subgroups().unwrap().len(), 5);
        let z2 = FiniteGroup::cyclic(2);
        let e8 = FiniteGroup::direct_product(&FiniteGroup::klein(), &z2);
        assert_eq!(e8.subgroups().unwrap().len(), 16);
        // Past the old subset-search limit: 1 + 6 lines + the whole plane.
        let z5 = FiniteGroup::cyclic(5);
        assert_eq!(FiniteGroup::direct_product(&z5, &z5).subgroups().unwrap().len(), 8);
    }

    #[test]
    fn quotient_of_z4_by_two() {
        let z4 = FiniteGroup::cyclic(4);
        let (q, proj) = z4.quotient(&[0, 2]).unwrap();
        assert_eq!(q.size(), 2);
        assert_eq!(proj, vec![0, 1, 0, 1]);
    }

    #[test]
    fn non_normal_quotient_names_a_witness() {
        let s3 = FiniteGroup::symmetric3();
        let h = s3.generated(&[1]);
        assert_eq!(h.len(), 2);
        match s3.quotient(&h) {
            Err(Error::NotNormal { element, conjugator }) => {
                assert!(!h.contains(&s3.conjugate(element, conjugator)));
            }
            other => panic!("expected a normality error, got {other:?}"),
        }
        assert_eq!(s3.normal_closure(&[1]).len(), 6);
    }
}
