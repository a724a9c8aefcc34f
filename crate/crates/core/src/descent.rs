//! The effective descent cover `f: (ℤ × X, b) → (X, a)`, `f(z, x) = x`, with
//!
//! ```text
//! b((z,x),(z',x')) = a(x,x')  if z < z'
//!                    ⊤        if z = z' and x = x'
//!                    ⊥        otherwise
//! ```
//!
//! The cover is infinite. It is evaluated lazily and verified on windows
//! `{-n..n} × X`, which are not closed under addition; laws that mention
//! sums are only checked where every argument stays inside the window.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantale::Elem;
use crate::report::Report;
use crate::vgroup::{classify_object, kernel, VGroup, VHom};

/// A point `(z, x)` of `ℤ × X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoverPoint {
    pub z: BigInt,
    pub x: usize,
}

impl CoverPoint {
    pub fn new(z: impl Into<BigInt>, x: usize) -> Self {
        CoverPoint { z: z.into(), x }
    }
}

/// The lazily evaluated V-group `ℤ × X`.
#[derive(Debug, Clone)]
pub struct LazyVGroup {
    base: Arc<VGroup>,
}

/// Builds the cover of `g`. Needs an integral quantale.
pub fn descent_cover(g: &Arc<VGroup>) -> Result<LazyVGroup> {
    if !g.quantale().is_integral() {
        return Err(Error::NotIntegral { operation: "descent_cover" });
    }
    Ok(LazyVGroup { base: g.clone() })
}

impl LazyVGroup {
    pub fn base(&self) -> &Arc<VGroup> {
        &self.base
    }

    pub fn eval(&self, p: &CoverPoint, r: &CoverPoint) -> Elem {
        let q = self.base.quantale();
        match p.z.cmp(&r.z) {
            std::cmp::Ordering::Less => self.base.a(p.x, r.x),
            std::cmp::Ordering::Equal if p.x == r.x => q.top(),
            _ => q.bottom(),
        }
    }

    pub fn zero(&self) -> CoverPoint {
        CoverPoint::new(BigInt::zero(), self.base.group().zero())
    }

    pub fn add(&self, p: &CoverPoint, r: &CoverPoint) -> CoverPoint {
        CoverPoint { z: &p.z + &r.z, x: self.base.group().add(p.x, r.x) }
    }

    pub fn neg(&self, p: &CoverPoint) -> CoverPoint {
        CoverPoint { z: -&p.z, x: self.base.group().neg(p.x) }
    }

    /// The covering map `f(z, x) = x`.
    pub fn project(&self, p: &CoverPoint) -> usize {
        p.x
    }

    /// The section `x ↦ (0, x)`.
    pub fn section(&self, x: usize) -> CoverPoint {
        CoverPoint::new(BigInt::zero(), x)
    }

    /// `{-n..n} × X`, ordered by `z` then `x`.
    pub fn window(&self, n: u32) -> Vec<CoverPoint> {
        let n = i64::from(n);
        (-n..=n)
            .flat_map(|z| (0..self.base.size()).map(move |x| CoverPoint::new(z, x)))
            .collect()
    }

    /// Materializes the relation on a window as a matrix of quantale
    /// elements in window order.
    pub fn window_matrix(&self, n: u32) -> Vec<Vec<Elem>> {
        let w = self.window(n);
        w.iter().map(|p| w.iter().map(|r| self.eval(p, r)).collect()).collect()
    }
}

/// Index of a point in `window(n)`, if it lies there.
fn window_index(l: &LazyVGroup, n: u32, p: &CoverPoint) -> Option<usize> {
    let n = BigInt::from(n);
    if p.z < -&n || p.z > n {
        return None;
    }
    let offset: usize = (&p.z + &n).try_into().ok()?;
    Some(offset * l.base.size() + p.x)
}

/// Result of [`verify_cover_window`].
#[derive(Debug, Clone, Serialize)]
pub struct CoverWindowReport {
    pub radius: u32,
    pub points: usize,
    /// Window indices witness failures.
    pub report: Report,
    /// `⋁ b(y1, y2)` over the fibres above `(x1, x2)`, row-major.
    pub finality_join: Vec<Elem>,
    /// Whether the radius `n + 1` window gives the same finality join and
    /// passes the same checks.
    pub stable_at_next_radius: bool,
}

impl CoverWindowReport {
    pub fn is_ok(&self) -> bool {
        self.report.is_ok() && self.stable_at_next_radius
    }
}

fn scan_window(l: &LazyVGroup, n: u32) -> (Report, Vec<Elem>) {
    let g = &l.base;
    let q = g.quantale();
    let w = l.window(n);
    let m = w.len();
    let b: Vec<Vec<Elem>> = l.window_matrix(n);
    let mut r = Report::new();

    for (i, row) in b.iter().enumerate() {
        if !q.above_unit(row[i]) {
            r.fail("R", vec![i]);
        }
    }
    'trans: for i in 0..m {
        for j in 0..m {
            if b[i][j] == q.bottom() {
                continue;
            }
            for k in 0..m {
                if !q.leq(q.tensor(b[i][j], b[j][k]), b[i][k]) {
                    r.fail("T", vec![i, j, k]);
                    break 'trans;
                }
            }
        }
    }
    // Shifts by window elements, where both shifted points stay inside.
    let shifted: Vec<Vec<(Option<usize>, Option<usize>)>> = w
        .iter()
        .map(|s| {
            w.iter()
                .map(|p| (window_index(l, n, &l.add(p, s)), window_index(l, n, &l.add(s, p))))
                .collect()
        })
        .collect();
    'shift: for (si, sh) in shifted.iter().enumerate() {
        for i in 0..m {
            for j in 0..m {
                if let (Some(i2), Some(j2)) = (sh[i].0, sh[j].0) {
                    if b[i][j] != b[i2][j2] {
                        r.fail("shift-invariance", vec![si, i, j]);
                        break 'shift;
                    }
                }
                if let (Some(i2), Some(j2)) = (sh[i].1, sh[j].1) {
                    if b[i][j] != b[i2][j2] {
                        r.fail("left-shift-invariance", vec![si, i, j]);
                        break 'shift;
                    }
                }
            }
        }
    }
    let zero = window_index(l, n, &l.zero()).expect("zero lies in every window");
    for i in 0..m {
        if i != zero && q.above_unit(b[zero][i]) && q.above_unit(b[i][zero]) {
            r.fail("separated-at-zero", vec![i]);
            break;
        }
    }
    'sep: for i in 0..m {
        for j in 0..m {
            if i != j && q.above_unit(b[i][j]) && q.above_unit(b[j][i]) {
                r.fail("separated", vec![i, j]);
                break 'sep;
            }
        }
    }
    'func: for i in 0..m {
        for j in 0..m {
            if !q.leq(b[i][j], g.a(w[i].x, w[j].x)) {
                r.fail("projection-v-functor", vec![i, j]);
                break 'func;
            }
        }
    }
    let s = g.size();
    let mut join = vec![q.bottom(); s * s];
    for i in 0..m {
        for j in 0..m {
            let cell = &mut join[w[i].x * s + w[j].x];
            *cell = q.join(*cell, b[i][j]);
        }
    }
    for x1 in 0..s {
        for x2 in 0..s {
            if join[x1 * s + x2] != g.a(x1, x2) {
                r.fail("finality", vec![x1, x2]);
            }
            let witness = l.eval(&CoverPoint::new(0, x1), &CoverPoint::new(BigInt::one(), x2));
            if witness != g.a(x1, x2) {
                r.fail("finality-witness", vec![x1, x2]);
            }
        }
    }
    for x in 0..s {
        let p = l.section(x);
        if window_index(l, n, &p).is_none() || l.project(&p) != x {
            r.fail("section", vec![x]);
        }
    }
    (r, join)
}

/// Exhaustive checks of the cover on the radius-`n` window, plus the same
/// scan at `n + 1` for stability.
pub fn verify_cover_window(l: &LazyVGroup, n: u32) -> Result<CoverWindowReport> {
    if n == 0 {
        return Err(Error::Precondition("window radius must be at least 1".into()));
    }
    let (report, finality_join) = scan_window(l, n);
    let (next, next_join) = scan_window(l, n + 1);
    let stable_at_next_radius = next.is_ok() == report.is_ok() && next_join == finality_join;
    Ok(CoverWindowReport {
        radius: n,
        points: l.window(n).len(),
        report,
        finality_join,
        stable_at_next_radius,
    })
}

/// Windowed data of the kernel pair `Eq(f)`: pairs `((z,x),(z',x))` with
/// structure `b ∧ b`.
#[derive(Debug, Clone, Serialize)]
pub struct EqFReport {
    pub radius: u32,
    pub pairs: usize,
    pub report: Report,
}

impl EqFReport {
    pub fn is_ok(&self) -> bool {
        self.report.is_ok()
    }
}

pub fn eq_f(l: &LazyVGroup, n: u32) -> Result<EqFReport> {
    if n == 0 {
        return Err(Error::Precondition("window radius must be at least 1".into()));
    }
    let q = l.base.quantale();
    let w = l.window(n);
    let pairs: Vec<(usize, usize)> = (0..w.len())
        .flat_map(|i| (0..w.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| w[i].x == w[j].x)
        .collect();
    let bb = |s: (usize, usize), t: (usize, usize)| {
        q.meet(l.eval(&w[s.0], &w[t.0]), l.eval(&w[s.1], &w[t.1]))
    };
    let mut r = Report::new();
    'proj: for (si, &s) in pairs.iter().enumerate() {
        for (ti, &t) in pairs.iter().enumerate() {
            let v = bb(s, t);
            if !q.leq(v, l.eval(&w[s.0], &w[t.0])) || !q.leq(v, l.eval(&w[s.1], &w[t.1])) {
                r.fail("projection-v-functor", vec![si, ti]);
                break 'proj;
            }
        }
    }
    for i in 0..w.len() {
        for j in 0..w.len() {
            if w[i].x == w[j].x && bb((i, i), (j, j)) != l.eval(&w[i], &w[j]) {
                r.fail("diagonal", vec![i, j]);
            }
        }
    }
    // Reflexivity of the diagonal entries of Eq(f), then separation.
    for (si, &s) in pairs.iter().enumerate() {
        if !q.above_unit(bb(s, s)) {
            r.fail("R", vec![si]);
        }
    }
    'sep: for (si, &s) in pairs.iter().enumerate() {
        for (ti, &t) in pairs.iter().enumerate() {
            if si != ti && q.above_unit(bb(s, t)) && q.above_unit(bb(t, s)) {
                r.fail("separated", vec![si, ti]);
                break 'sep;
            }
        }
    }
    Ok(EqFReport { radius: n, pairs: pairs.len(), report: r })
}

/// Windowed action of `Eq(f)` on the pullback `ℤ × A` of a covering
/// `α: A → X`.
#[derive(Debug, Clone, Serialize)]
pub struct ActionReport {
    pub radius: u32,
    pub carrier: usize,
    pub report: Report,
}

impl ActionReport {
    pub fn is_ok(&self) -> bool {
        self.report.is_ok()
    }
}

/// Builds `π(z, a) = (z, α a)` and `ξ((z1, x), (z, x), (z, a)) = (z1, a)`
/// and checks the unit, associativity and fibration laws, that `ξ` is a
/// V-functor, and that the carrier is separated, on the radius-`n` window.
pub fn action_of_covering(alpha: &VHom, l: &LazyVGroup, n: u32) -> Result<ActionReport> {
    if **alpha.cod() != **l.base() {
        return Err(Error::DimensionMismatch("the covering must land in the base".into()));
    }
    let (k, _) = kernel(alpha)?;
    if !classify_object(&k)?.separated {
        return Err(Error::Precondition(format!("{alpha} is not a covering: kernel {k} is not separated")));
    }
    let a = alpha.dom();
    let q = a.quantale();
    let nz = i64::from(n);
    let zs: Vec<i64> = (-nz..=nz).collect();
    let idx = |z: i64, e: usize| ((z + nz) as usize) * a.size() + e;
    let pi = |z: i64, e: usize| CoverPoint::new(z, alpha.apply(e));
    let c = |z: i64, e: usize, z2: i64, e2: usize| q.meet(l.eval(&pi(z, e), &pi(z2, e2)), a.a(e, e2));
    let xi = |z1: i64, _z: i64, e: usize| (z1, e);
    let mut r = Report::new();

    for &z in &zs {
        for e in 0..a.size() {
            // unit: ξ(π p, π p, p) = p
            if xi(z, z, e) != (z, e) {
                r.fail("unit", vec![idx(z, e)]);
            }
            for &z1 in &zs {
                // fibration: π(ξ(e1, π p, p)) = e1
                let (zr, er) = xi(z1, z, e);
                if pi(zr, er) != CoverPoint::new(z1, alpha.apply(e)) {
                    r.fail("fibration", vec![idx(z1, e), idx(z, e)]);
                }
                for &z0 in &zs {
                    // associativity: ξ(e0, e1, ξ(e1, e2, p)) = ξ(e0, e2, p)
                    let (zm, em) = xi(z1, z, e);
                    if xi(z0, zm, em) != xi(z0, z, e) {
                        r.fail("associativity", vec![idx(z0, e), idx(z1, e), idx(z, e)]);
                    }
                }
            }
        }
    }
    // ξ is a V-functor from Eq(f) ×_{ℤ×X} (ℤ×A), whose structure is the
    // meet of the three components.
    'func: for &z1 in &zs {
        for &z in &zs {
            for e in 0..a.size() {
                for &w1 in &zs {
                    for &w in &zs {
                        for e2 in 0..a.size() {
                            let x = alpha.apply(e);
                            let x2 = alpha.apply(e2);
                            let dom = q.meet(
                                q.meet(
                                    l.eval(&CoverPoint::new(z1, x), &CoverPoint::new(w1, x2)),
                                    l.eval(&CoverPoint::new(z, x), &CoverPoint::new(w, x2)),
                                ),
                                c(z, e, w, e2),
                            );
                            let (p, p2) = (xi(z1, z, e), xi(w1, w, e2));
                            if !q.leq(dom, c(p.0, p.1, p2.0, p2.1)) {
                                r.fail("xi-v-functor", vec![idx(z1, e), idx(z, e), idx(w1, e2), idx(w, e2)]);
                                break 'func;
                            }
                        }
                    }
                }
            }
        }
    }
    'sep: for &z in &zs {
        for e in 0..a.size() {
            for &z2 in &zs {
                for e2 in 0..a.size() {
                    if (z, e) != (z2, e2) && q.above_unit(c(z, e, z2, e2)) && q.above_unit(c(z2, e2, z, e)) {
                        r.fail("carrier-separated", vec![idx(z, e), idx(z2, e2)]);
                        break 'sep;
                    }
                }
            }
        }
    }
    Ok(ActionReport { radius: n, carrier: zs.len() * a.size(), report: r })
}

/// Whether the pullback of `f: X → Y` along the cover of `Y` lies in M,
/// decided on the radius-`n` window of `ℤ × X`.
///
/// The pullback is `ℤ × X` with `c((z,x),(z',x')) = b((z,fx),(z',fx')) ∧
/// a(x,x')`; it lies in M iff its torsion part maps bijectively onto that of
/// the cover and `c = b∘g ∧ c̄∘η`.
pub fn cover_pullback_in_m(f: &VHom, n: u32) -> Result<bool> {
    let l = descent_cover(f.cod())?;
    let (x, y) = (f.dom(), f.cod());
    let q = x.quantale();
    let nz = i64::from(n);
    let pts: Vec<(i64, usize)> = (-nz..=nz).flat_map(|z| (0..x.size()).map(move |e| (z, e))).collect();
    let b = |z: i64, u: usize, z2: i64, v: usize| l.eval(&CoverPoint::new(z, u), &CoverPoint::new(z2, v));
    let c = |p: (i64, usize), r: (i64, usize)| q.meet(b(p.0, f.apply(p.1), r.0, f.apply(r.1)), x.a(p.1, r.1));
    let z0 = (0i64, x.group().zero());
    let n_p: Vec<(i64, usize)> =
        pts.iter().copied().filter(|&p| q.above_unit(c(z0, p)) && q.above_unit(c(p, z0))).collect();
    let cz = (0i64, y.group().zero());
    let n_cover: Vec<(i64, usize)> = (-nz..=nz)
        .flat_map(|z| (0..y.size()).map(move |v| (z, v)))
        .filter(|&(z, v)| q.above_unit(b(cz.0, cz.1, z, v)) && q.above_unit(b(z, v, cz.0, cz.1)))
        .collect();
    let mut image: Vec<(i64, usize)> = n_p.iter().map(|&(z, e)| (z, f.apply(e))).collect();
    image.sort_unstable();
    image.dedup();
    if image.len() != n_p.len() || image != n_cover {
        return Ok(false);
    }
    // c̄ on cosets p + N_P, restricted to the window.
    let coset = |p: (i64, usize)| -> Vec<(i64, usize)> {
        n_p.iter()
            .map(|&(zn, en)| (p.0 + zn, x.group().add(p.1, en)))
            .filter(|&(z, _)| z.abs() <= nz)
            .collect()
    };
    for &p in &pts {
        let cp = coset(p);
        for &r in &pts {
            let cr = coset(r);
            let cbar = q.join_all(cp.iter().flat_map(|&s| cr.iter().map(move |&t| c(s, t))));
            let rhs = q.meet(b(p.0, f.apply(p.1), r.0, f.apply(r.1)), cbar);
            if c(p, r) != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
