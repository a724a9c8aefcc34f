//! Quantale-valued relations, stored as dense matrices.
//!
//! Composition is matrix multiplication over the quantale read as a
//! semiring: join plays the role of addition and tensor that of
//! multiplication.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale};

/// A V-relation `X ⇸ Y` as a `rows × cols` matrix.
#[derive(Debug, Clone)]
pub struct VRel {
    q: Arc<Quantale>,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl PartialEq for VRel {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries == other.entries
            && same_quantale(&self.q, &other.q)
    }
}

impl Eq for VRel {}

pub(crate) fn same_quantale(a: &Arc<Quantale>, b: &Arc<Quantale>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl VRel {
    pub fn new(q: Arc<Quantale>, rows: usize, cols: usize, entries: Vec<Elem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| !q.contains(e)) {
            return Err(Error::Structural(format!("entry {bad} is not an element of {q}")));
        }
        Ok(VRel { q, rows, cols, entries })
    }

    /// Builds a relation by evaluating `f` at every pair.
    pub fn from_fn(q: Arc<Quantale>, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Elem) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for x in 0..rows {
            for y in 0..cols {
                entries.push(f(x, y));
            }
        }
        VRel { q, rows, cols, entries }
    }

    pub fn from_rows(q: Arc<Quantale>, rows: Vec<Vec<Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Self::new(q, r, c, rows.into_iter().flatten().collect())
    }

    /// `1_X`: `k` on the diagonal, bottom elsewhere.
    pub fn identity(q: Arc<Quantale>, n: usize) -> Self {
        let (k, bot) = (q.unit(), q.bottom());
        Self::from_fn(q, n, n, |x, y| if x == y { k } else { bot })
    }

    /// Constant relation.
    pub fn constant(q: Arc<Quantale>, rows: usize, cols: usize, u: Elem) -> Self {
        Self::from_fn(q, rows, cols, |_, _| u)
    }

    /// The graph of a function `X -> Y`: `k` where `f(x) = y`, bottom elsewhere.
    pub fn from_function(q: Arc<Quantale>, map: &[usize], cod_size: usize) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&y| y >= cod_size) {
            return Err(Error::DimensionMismatch(format!(
                "function value {bad} outside a codomain of size {cod_size}"
            )));
        }
        let (k, bot) = (q.unit(), q.bottom());
        Ok(Self::from_fn(q, map.len(), cod_size, |x, y| if map[x] == y { k } else { bot }))
    }

    pub fn quantale(&self) -> &Arc<Quantale> {
        &self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Elem {
        self.entries[x * self.cols + y]
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn row(&self, x: usize) -> &[Elem] {
        &self.entries[x * self.cols..(x + 1) * self.cols]
    }

    fn check_quantale(&self, other: &VRel) -> Result<()> {
        if same_quantale(&self.q, &other.q) {
            Ok(())
        } else {
            Err(Error::QuantaleMismatch)
        }
    }

    fn check_same_shape(&self, other: &VRel) -> Result<()> {
        self.check_quantale(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// `then · self`, i.e. `(s·r)(x,z) = ⋁_y r(x,y) ⊗ s(y,z)` with `self = r`.
    pub fn then(&self, then: &VRel) -> Result<VRel> {
        compose(self, then)
    }

    pub fn converse(&self) -> VRel {
        VRel::from_fn(self.q.clone(), self.cols, self.rows, |y, x| self.get(x, y))
    }

    pub fn meet(&self, other: &VRel) -> Result<VRel> {
        self.check_same_shape(other)?;
        let q = &self.q;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&u, &v)| q.meet(u, v))
            .collect();
        Ok(VRel { q: q.clone(), rows: self.rows, cols: self.cols, entries })
    }

    /// Entrywise order.
    pub fn leq(&self, other: &VRel) -> Result<bool> {
        self.check_same_shape(other)?;
        Ok(self.entries.iter().zip(&other.entries).all(|(&u, &v)| self.q.leq(u, v)))
    }

    /// First pair `(x, y)` with `self(x,y) ≰ other(x,y)`.
    pub fn first_excess(&self, other: &VRel) -> Result<Option<(usize, usize)>> {
        self.check_same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .position(|(&u, &v)| !self.q.leq(u, v))
            .map(|i| (i / self.cols, i % self.cols)))
    }

    /// Restriction to the given row and column index lists.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> VRel {
        VRel::from_fn(self.q.clone(), rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// Pulls the relation back along two functions: `(x, x') ↦ self(f(x), g(x'))`.
    pub fn reindex(&self, f: &[usize], g: &[usize]) -> VRel {
        VRel::from_fn(self.q.clone(), f.len(), g.len(), |i, j| self.get(f[i], g[j]))
    }
}

/// `vrel_compose(r, s) = s · r` for `r: X ⇸ Y`, `s: Y ⇸ Z`.
pub fn compose(r: &VRel, s: &VRel) -> Result<VRel> {
    r.check_quantale(s)?;
    if r.cols != s.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose {}x{} with {}x{}",
            r.rows, r.cols, s.rows, s.cols
        )));
    }
    let q = &r.q;
    let mut entries = vec![q.bottom(); r.rows * s.cols];
    for x in 0..r.rows {
        for y in 0..r.cols {
            let rxy = r.get(x, y);
            if rxy == q.bottom() {
                continue;
            }
            for z in 0..s.cols {
                let cell = &mut entries[x * s.cols + z];
                *cell = q.join(*cell, q.tensor(rxy, s.get(y, z)));
            }
        }
    }
    Ok(VRel { q: q.clone(), rows: r.rows, cols: s.cols, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: u16) -> Elem {
        Elem(i)
    }

    #[test]
    fn identity_shapes() {
        let b = Quantale::boolean();
        let id1 = VRel::identity(b.clone(), 1);
        assert_eq!(id1.entries(), &[b.unit()]);
        let id2 = VRel::identity(b.clone(), 2);
        assert_eq!(id2.entries(), &[e(1), e(0), e(0), e(1)]);
        let l = Quantale::lawvere_chain(2).unwrap();
        let id = VRel::identity(l, 2);
        assert_eq!(id.entries(), &[e(0), e(2), e(2), e(0)]);
    }

    #[test]
    fn identity_is_neutral() {
        let l = Quantale::lawvere_chain(3).unwrap();
        let r = VRel::from_fn(l.clone(), 2, 3, |x, y| e(((x + 2 * y) % 4) as u16));
        assert_eq!(compose(&r, &VRel::identity(l.clone(), 3)).unwrap(), r);
        assert_eq!(compose(&VRel::identity(l, 2), &r).unwrap(), r);
    }

    #[test]
    fn boolean_composition_is_boolean_matrix_product() {
        let b = Quantale::boolean();
        // All 16 pairs of 2x2 boolean matrices, against the ∃y product.
        for rm in 0u8..16 {
            for sm in 0u8..16 {
                let bit = |m: u8, i: usize, j: usize| (m >> (2 * i + j)) & 1 == 1;
                let r = VRel::from_fn(b.clone(), 2, 2, |x, y| e(bit(rm, x, y) as u16));
                let s = VRel::from_fn(b.clone(), 2, 2, |x, y| e(bit(sm, x, y) as u16));
                let p = compose(&r, &s).unwrap();
                for x in 0..2 {
                    for z in 0..2 {
                        let expect = (0..2).any(|y| bit(rm, x, y) && bit(sm, y, z));
                        assert_eq!(p.get(x, z) == b.top(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn lawvere_single_term_composition() {
        let l = Quantale::lawvere_chain(2).unwrap();
        let r = VRel::new(l.clone(), 1, 1, vec![e(1)]).unwrap();
        let s = VRel::new(l, 1, 1, vec![e(1)]).unwrap();
        assert_eq!(compose(&r, &s).unwrap().get(0, 0), e(2));
    }

    #[test]
    fn converse_meet_and_function_graph() {
        let b = Quantale::boolean();
        let id = VRel::identity(b.clone(), 3);
        assert_eq!(id.converse(), id);
        let r = VRel::from_fn(b.clone(), 2, 3, |x, y| e(((x + y) % 2) as u16));
        assert_eq!(r.meet(&r).unwrap(), r);
        let f = VRel::from_function(b.clone(), &[0, 0], 2).unwrap();
        assert_eq!(f.entries(), &[e(1), e(0), e(1), e(0)]);
    }

    #[test]
    fn mismatches_are_errors() {
        let b = Quantale::boolean();
        let l = Quantale::lawvere_chain(2).unwrap();
        let r = VRel::identity(b.clone(), 2);
        assert!(matches!(compose(&r, &VRel::identity(l, 2)), Err(Error::QuantaleMismatch)));
        assert!(matches!(
            compose(&r, &VRel::identity(b.clone(), 3)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(r.leq(&VRel::identity(b, 3)).is_err());
    }
}
