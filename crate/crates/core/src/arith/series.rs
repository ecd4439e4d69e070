//! Truncated power series and analytic branches of plane curves.

use super::field::FieldCtx;
use super::poly::HomogPoly;
use crate::error::{Error, Result};

/// `c_0 + c_1 t + ... + c_N t^N`, truncated at order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    ctx: FieldCtx,
    coeffs: Vec<u32>,
}

impl PowerSeries {
    pub fn new(ctx: FieldCtx, mut coeffs: Vec<u32>, order: usize) -> Self {
        coeffs.resize(order + 1, 0);
        coeffs.iter_mut().for_each(|c| *c %= ctx.p());
        PowerSeries { ctx, coeffs }
    }

    pub fn constant(ctx: FieldCtx, c: u32, order: usize) -> Self {
        Self::new(ctx, vec![c], order)
    }

    /// `a + b t`
    pub fn linear(ctx: FieldCtx, a: u32, b: u32, order: usize) -> Self {
        Self::new(ctx, vec![a, b], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    /// Index of the first nonzero coefficient, `None` if zero to the working order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.ctx, self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn add(&self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        let f = self.ctx;
        let c = (0..=n).map(|i| f.add(self.coeffs[i], o.coeffs[i])).collect();
        PowerSeries { ctx: f, coeffs: c }
    }

    pub fn sub(&self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        let f = self.ctx;
        let c = (0..=n).map(|i| f.sub(self.coeffs[i], o.coeffs[i])).collect();
        PowerSeries { ctx: f, coeffs: c }
    }

    pub fn scale(&self, s: u32) -> PowerSeries {
        let f = self.ctx;
        PowerSeries { ctx: f, coeffs: self.coeffs.iter().map(|&c| f.mul(c, s)).collect() }
    }

    pub fn mul(&self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        let f = self.ctx;
        let mut acc = vec![0u64; n + 1];
        for (i, &a) in self.coeffs[..=n].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs[..=n - i].iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % f.p() as u64;
            }
        }
        PowerSeries { ctx: f, coeffs: acc.into_iter().map(|x| x as u32).collect() }
    }

    /// Multiplication by `t^k`, keeping the order.
    pub fn shift(&self, k: usize) -> PowerSeries {
        let n = self.order();
        let mut c = vec![0u32; n + 1];
        if k <= n {
            c[k..].copy_from_slice(&self.coeffs[..=n - k]);
        }
        PowerSeries { ctx: self.ctx, coeffs: c }
    }

    /// Inverse of a unit series by the standard recurrence.
    pub fn inv(&self) -> Option<PowerSeries> {
        let f = self.ctx;
        let c0 = self.coeffs[0];
        if c0 == 0 {
            return None;
        }
        let inv0 = f.inv(c0);
        let n = self.order();
        let mut out = vec![0u32; n + 1];
        out[0] = inv0;
        for k in 1..=n {
            let mut s = 0u32;
            for i in 1..=k {
                s = f.mul_add(s, self.coeffs[i], out[k - i]);
            }
            out[k] = f.neg(f.mul(s, inv0));
        }
        Some(PowerSeries { ctx: f, coeffs: out })
    }

    pub fn powers(&self, max: usize) -> Vec<PowerSeries> {
        let mut out = Vec::with_capacity(max + 1);
        out.push(PowerSeries::constant(self.ctx, 1, self.order()));
        for k in 1..=max {
            let next = out[k - 1].mul(self);
            out.push(next);
        }
        out
    }
}

/// Evaluates a form at a triple of series.
pub fn eval_at_series(g: &HomogPoly, coords: &[PowerSeries; 3]) -> PowerSeries {
    let f = g.ctx();
    let order = coords.iter().map(|c| c.order()).min().unwrap();
    let d = g.degree() as usize;
    let pows: Vec<Vec<PowerSeries>> = coords.iter().map(|c| c.truncate(order).powers(d)).collect();
    let mut acc = PowerSeries::constant(f, 0, order);
    for &(e, c) in g.terms() {
        let m = pows[0][e[0] as usize].mul(&pows[1][e[1] as usize]).mul(&pows[2][e[2] as usize]);
        acc = acc.add(&m.scale(c));
    }
    acc
}

/// Dehomogenization and variable roles for a branch expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chart {
    /// Coordinate set to 1.
    pub dehomog: usize,
    /// Coordinate solved for as a series in the local parameter.
    pub dependent: usize,
}

impl Chart {
    pub fn independent(&self) -> usize {
        3 - self.dehomog - self.dependent
    }

    fn check(&self) -> Result<()> {
        if self.dehomog > 2 || self.dependent > 2 || self.dehomog == self.dependent {
            return Err(Error::Precondition(format!("invalid chart {self:?}")));
        }
        Ok(())
    }
}

fn normalize(ctx: FieldCtx, pt: [u32; 3], v: usize) -> [u32; 3] {
    let inv = ctx.inv(pt[v]);
    [ctx.mul(pt[0], inv), ctx.mul(pt[1], inv), ctx.mul(pt[2], inv)]
}

/// Local branch `y(t)` of `F = 0` at a smooth point, with `x = x_P + t`.
///
/// In the chart, `x` is the independent coordinate and `y` the dependent one.
/// Newton lifting doubles the number of correct coefficients per step.
pub fn branch_expand(poly: &HomogPoly, pt: [u32; 3], chart: Chart, order: usize) -> Result<PowerSeries> {
    chart.check()?;
    let f = poly.ctx();
    let pt = [pt[0] % f.p(), pt[1] % f.p(), pt[2] % f.p()];
    if pt[chart.dehomog] == 0 {
        return Err(Error::ChartUnusable(pt, "point at infinity of the chart".into()));
    }
    let q = normalize(f, pt, chart.dehomog);
    if poly.eval(q) != 0 {
        return Err(Error::PointNotOnCurve(pt));
    }
    let grad = poly.gradient();
    if grad.iter().all(|g| g.eval(q) == 0) {
        return Err(Error::SingularPoint(pt));
    }
    let dpoly = &grad[chart.dependent];
    let slope0 = dpoly.eval(q);
    if slope0 == 0 {
        return Err(Error::ChartUnusable(pt, "vanishing partial in the dependent variable".into()));
    }
    let indep = chart.independent();
    let mut coords = [PowerSeries::constant(f, 0, order), PowerSeries::constant(f, 0, order), PowerSeries::constant(f, 0, order)];
    coords[chart.dehomog] = PowerSeries::constant(f, 1, order);
    coords[indep] = PowerSeries::linear(f, q[indep], 1, order);
    let mut y = PowerSeries::constant(f, q[chart.dependent], 0);
    let mut prec = 1usize;
    while prec < order + 1 {
        prec = (2 * prec).min(order + 1);
        let y_ext = y.truncate(prec - 1);
        let mut c = [coords[0].truncate(prec - 1), coords[1].truncate(prec - 1), coords[2].truncate(prec - 1)];
        c[chart.dependent] = y_ext.clone();
        let r = eval_at_series(poly, &c);
        let dr = eval_at_series(dpoly, &c);
        let step = r.mul(&dr.inv().expect("unit derivative"));
        y = y_ext.sub(&step);
    }
    let y = y.truncate(order);
    let mut c = coords.clone();
    c[chart.dependent] = y.clone();
    let residual = eval_at_series(poly, &c);
    if residual.valuation().is_some() {
        return Err(Error::Consistency(format!("branch residual nonzero at {pt:?}")));
    }
    Ok(y)
}

/// A parametrized analytic branch: homogeneous coordinates as series with
/// `t` a uniformizer, centered at `point`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub point: [u32; 3],
    pub coords: [PowerSeries; 3],
}

impl Branch {
    pub fn order(&self) -> usize {
        self.coords[0].order()
    }

    /// Order of vanishing of a form along the branch, capped at the truncation.
    pub fn vanishing_order(&self, g: &HomogPoly) -> usize {
        let s = eval_at_series(g, &self.coords);
        s.valuation().unwrap_or(self.order() + 1)
    }

    /// The coefficients `t^0 .. t^{k-1}` of `g` along the branch.
    pub fn leading_coeffs(&self, g: &HomogPoly, k: usize) -> Result<Vec<u32>> {
        if k > self.order() + 1 {
            return Err(Error::InsufficientTruncation { needed: k, cached: self.order() + 1 });
        }
        let s =
            eval_at_series(g, &[self.coords[0].truncate(k.max(1) - 1), self.coords[1].truncate(k.max(1) - 1), self.coords[2].truncate(k.max(1) - 1)]);
        Ok(s.coeffs()[..k].to_vec())
    }
}

/// Branch at a smooth point with an automatically chosen chart.
pub fn smooth_branch(poly: &HomogPoly, pt: [u32; 3], order: usize) -> Result<Branch> {
    let f = poly.ctx();
    let dehomog = (0..3).rev().find(|&v| !pt[v].is_multiple_of(f.p())).ok_or_else(|| Error::InvalidMarkedPoint(pt, "zero vector".into()))?;
    let q = normalize(f, pt, dehomog);
    let grad: Vec<u32> = poly.gradient().iter().map(|g| g.eval(q)).collect();
    let dependent = (0..3).filter(|&v| v != dehomog).find(|&v| grad[v] != 0).ok_or(Error::SingularPoint(pt))?;
    let chart = Chart { dehomog, dependent };
    let y = branch_expand(poly, q, chart, order)?;
    let mut coords = [PowerSeries::constant(f, 0, order), PowerSeries::constant(f, 0, order), PowerSeries::constant(f, 0, order)];
    coords[dehomog] = PowerSeries::constant(f, 1, order);
    coords[chart.independent()] = PowerSeries::linear(f, q[chart.independent()], 1, order);
    coords[dependent] = y;
    Ok(Branch { point: q, coords })
}

/// Truncated bivariate polynomial `Σ c[i][j] u^i v^j` with `i + j ≤ max`.
#[derive(Clone, Debug)]
pub struct Bivariate {
    ctx: FieldCtx,
    max: usize,
    c: Vec<u32>,
}

impl Bivariate {
    fn idx(i: usize, j: usize) -> usize {
        let s = i + j;
        s * (s + 1) / 2 + j
    }

    pub fn zero(ctx: FieldCtx, max: usize) -> Self {
        Bivariate { ctx, max, c: vec![0; (max + 1) * (max + 2) / 2] }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        if i + j > self.max {
            0
        } else {
            self.c[Self::idx(i, j)]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: u32) {
        self.c[Self::idx(i, j)] = v;
    }

    /// `a + b u + c v`
    pub fn linear(ctx: FieldCtx, max: usize, a: u32, b: u32, c: u32) -> Self {
        let mut out = Self::zero(ctx, max);
        out.set(0, 0, a);
        if max >= 1 {
            out.set(1, 0, b);
            out.set(0, 1, c);
        }
        out
    }

    pub fn mul(&self, o: &Bivariate) -> Bivariate {
        let f = self.ctx;
        let max = self.max.min(o.max);
        let mut out = Self::zero(f, max);
        for s1 in 0..=max {
            for j1 in 0..=s1 {
                let a = self.get(s1 - j1, j1);
                if a == 0 {
                    continue;
                }
                for s2 in 0..=max - s1 {
                    for j2 in 0..=s2 {
                        let b = o.get(s2 - j2, j2);
                        if b == 0 {
                            continue;
                        }
                        let k = Self::idx(s1 - j1 + s2 - j2, j1 + j2);
                        out.c[k] = f.mul_add(out.c[k], a, b);
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, o: &Bivariate, s: u32) {
        let f = self.ctx;
        for (a, &b) in self.c.iter_mut().zip(&o.c) {
            *a = f.mul_add(*a, b, s);
        }
    }

    /// Coefficients of total degree `< k`, ordered by degree then by `v`-power.
    pub fn low_coeffs(&self, k: usize) -> Vec<u32> {
        let n = k * (k + 1) / 2;
        self.c[..n.min(self.c.len())].to_vec()
    }
}

/// Powers `L^e` for `e ≤ max_pow` of the linear forms `P_v + u A_v + w B_v`,
/// truncated at total degree `max_deg`.
pub struct TaylorFrame {
    pows: [Vec<Bivariate>; 3],
}

impl TaylorFrame {
    pub fn new(ctx: FieldCtx, p: [u32; 3], a: [u32; 3], b: [u32; 3], max_pow: usize, max_deg: usize) -> Self {
        let mk = |v: usize| {
            let l = Bivariate::linear(ctx, max_deg, p[v], a[v], b[v]);
            let mut out = vec![Bivariate::linear(ctx, max_deg, 1, 0, 0)];
            for e in 1..=max_pow {
                let next = out[e - 1].mul(&l);
                out.push(next);
            }
            out
        };
        TaylorFrame { pows: [mk(0), mk(1), mk(2)] }
    }

    pub fn monomial(&self, e: [u32; 3]) -> Bivariate {
        self.pows[0][e[0] as usize].mul(&self.pows[1][e[1] as usize]).mul(&self.pows[2][e[2] as usize])
    }

    pub fn expand(&self, g: &HomogPoly, max_deg: usize) -> Bivariate {
        let mut acc = Bivariate::zero(g.ctx(), max_deg);
        for &(e, c) in g.terms() {
            acc.add_scaled(&self.monomial(e), c);
        }
        acc
    }
}

/// Two coordinate vectors completing `p` to a basis of the ambient space.
pub fn complement(ctx: FieldCtx, p: [u32; 3]) -> ([u32; 3], [u32; 3]) {
    let v = (0..3).rev().find(|&v| !p[v].is_multiple_of(ctx.p())).expect("nonzero point");
    let others: Vec<usize> = (0..3).filter(|&w| w != v).collect();
    let mut a = [0; 3];
    let mut b = [0; 3];
    a[others[0]] = 1;
    b[others[1]] = 1;
    (a, b)
}

/// Tangent data at a split ordinary node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeBranches {
    pub tangents: [[u32; 3]; 2],
    pub branches: [Branch; 2],
}

/// Splits the tangent cone at a singular point into two rational directions.
pub fn node_tangents(poly: &HomogPoly, pt: [u32; 3]) -> Result<[[u32; 3]; 2]> {
    let f = poly.ctx();
    let (a, b) = complement(f, pt);
    let frame = TaylorFrame::new(f, pt, a, b, poly.degree() as usize, 2);
    let q = frame.expand(poly, 2);
    if q.get(0, 0) != 0 {
        return Err(Error::PointNotOnCurve(pt));
    }
    if q.get(1, 0) != 0 || q.get(0, 1) != 0 {
        return Err(Error::NotOrdinaryNode(pt, "point is smooth".into()));
    }
    let (c20, c11, c02) = (q.get(2, 0), q.get(1, 1), q.get(0, 2));
    if c20 == 0 && c11 == 0 && c02 == 0 {
        return Err(Error::NotOrdinaryNode(pt, "multiplicity at least three".into()));
    }
    let disc = f.sub(f.mul(c11, c11), f.mul(4, f.mul(c20, c02)));
    if disc == 0 {
        return Err(Error::NotOrdinaryNode(pt, "tangent cone is a double line".into()));
    }
    let root = f.sqrt(disc).ok_or(Error::NonSplitNode(pt))?;
    let lin = |u: u32, w: u32| -> [u32; 3] { [0, 1, 2].map(|v| f.add(f.mul(u, a[v]), f.mul(w, b[v]))) };
    let dirs = if c02 != 0 {
        // v/u solves c02 s^2 + c11 s + c20 = 0
        let inv = f.inv(f.mul(2, c02));
        let s1 = f.mul(f.sub(root, c11), inv);
        let s2 = f.mul(f.neg(f.add(root, c11)), inv);
        [lin(1, s1), lin(1, s2)]
    } else {
        // Q = u (c20 u + c11 v)
        [lin(0, 1), lin(c11, f.neg(c20))]
    };
    Ok(dirs)
}

fn branch_along(poly: &HomogPoly, pt: [u32; 3], along: [u32; 3], other: [u32; 3], order: usize) -> Result<Branch> {
    let f = poly.ctx();
    let d = poly.degree() as usize;
    let frame = TaylorFrame::new(f, pt, along, other, d, d);
    let h = frame.expand(poly, d);
    let b = h.get(1, 1);
    if h.get(2, 0) != 0 || b == 0 {
        return Err(Error::NotOrdinaryNode(pt, "branch is not transverse".into()));
    }
    // h(t, t w) = t^2 g(t, w); solve g(t, w(t)) = 0 with w(0) = 0.
    let g_at = |w: &PowerSeries, deriv: bool| -> PowerSeries {
        let n = w.order();
        let wp = w.powers(d);
        let mut acc = PowerSeries::constant(f, 0, n);
        for s in 2..=d {
            for j in 0..=s {
                let c = h.get(s - j, j);
                if c == 0 {
                    continue;
                }
                let term = if deriv {
                    if j == 0 {
                        continue;
                    }
                    wp[j - 1].scale(f.mul(c, j as u32 % f.p()))
                } else {
                    wp[j].scale(c)
                };
                acc = acc.add(&term.shift(s - 2));
            }
        }
        acc
    };
    let mut w = PowerSeries::constant(f, 0, 0);
    let mut prec = 1usize;
    while prec < order {
        prec = (2 * prec).min(order);
        let w_ext = w.truncate(prec - 1);
        let r = g_at(&w_ext, false);
        let dr = g_at(&w_ext, true);
        w = w_ext.sub(&r.mul(&dr.inv().expect("transverse branch")));
    }
    // s(t) = t w(t) to order `order`
    let s = w.truncate(order).shift(1);
    let coords = [0, 1, 2].map(|v| PowerSeries::linear(f, pt[v], along[v], order).add(&s.scale(other[v])));
    let branch = Branch { point: pt, coords };
    let residual = eval_at_series(poly, &branch.coords);
    if residual.valuation().is_some() {
        return Err(Error::Consistency(format!("node branch residual nonzero at {pt:?}")));
    }
    Ok(branch)
}

/// Both analytic branches through a split ordinary node, to the given order.
pub fn node_branches(poly: &HomogPoly, pt: [u32; 3], order: usize) -> Result<NodeBranches> {
    let tangents = node_tangents(poly, pt)?;
    let b1 = branch_along(poly, pt, tangents[0], tangents[1], order)?;
    let b2 = branch_along(poly, pt, tangents[1], tangents[0], order)?;
    Ok(NodeBranches { tangents, branches: [b1, b2] })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> FieldCtx {
        FieldCtx::new(10007).unwrap()
    }

    fn poly(terms: &[([u32; 3], i64)], degree: u32) -> HomogPoly {
        HomogPoly::from_i64(ctx(), degree, terms).unwrap()
    }

    #[test]
    fn parabola_branch() {
        // y z - x^2
        let f = poly(&[([0, 1, 1], 1), ([2, 0, 0], -1)], 2);
        let chart = Chart { dehomog: 2, dependent: 1 };
        let y = branch_expand(&f, [0, 0, 1], chart, 3).unwrap();
        assert_eq!(y.coeffs(), &[0, 0, 1, 0]);
    }

    #[test]
    fn conic_branch_residual() {
        // x^2 + 3xy + 2y^2 + 5xz - 7yz, through (0:0:1)
        let f = poly(&[([2, 0, 0], 1), ([1, 1, 0], 3), ([0, 2, 0], 2), ([1, 0, 1], 5), ([0, 1, 1], -7)], 2);
        let chart = Chart { dehomog: 2, dependent: 1 };
        let y = branch_expand(&f, [0, 0, 1], chart, 8).unwrap();
        // independent substitute-and-check
        let c = ctx();
        let x = PowerSeries::linear(c, 0, 1, 8);
        let one = PowerSeries::constant(c, 1, 8);
        let r = eval_at_series(&f, &[x, y, one]);
        assert!(r.coeffs().iter().all(|&v| v == 0));
    }

    #[test]
    fn node_is_rejected_by_smooth_expansion() {
        // y^2 z - x^2 z - x^3: node at origin
        let f = poly(&[([0, 2, 1], 1), ([2, 0, 1], -1), ([3, 0, 0], -1)], 3);
        let chart = Chart { dehomog: 2, dependent: 1 };
        assert_eq!(branch_expand(&f, [0, 0, 1], chart, 4), Err(Error::SingularPoint([0, 0, 1])));
        assert!(matches!(branch_expand(&f, [1, 1, 1], chart, 4), Err(Error::PointNotOnCurve(_))));
    }

    #[test]
    fn nodal_cubic_branches() {
        let f = poly(&[([0, 2, 1], 1), ([2, 0, 1], -1), ([3, 0, 0], -1)], 3);
        let nb = node_branches(&f, [0, 0, 1], 10).unwrap();
        for br in &nb.branches {
            assert!(br.vanishing_order(&f) > 10);
            // the line y = 0 meets each branch simply
            assert_eq!(br.vanishing_order(&HomogPoly::var(ctx(), 1)), 1);
        }
    }

    #[test]
    fn non_split_node_detected() {
        // y^2 + x^2 with -1 a non-residue mod 10007 (10007 = 3 mod 4)
        let f = poly(&[([0, 2, 1], 1), ([2, 0, 1], 1), ([3, 0, 0], 1)], 3);
        assert_eq!(node_tangents(&f, [0, 0, 1]), Err(Error::NonSplitNode([0, 0, 1])));
    }

    #[test]
    fn series_inverse() {
        let c = ctx();
        let s = PowerSeries::new(c, vec![3, 1, 4, 1, 5, 9], 5);
        let prod = s.mul(&s.inv().unwrap());
        assert_eq!(prod.coeffs(), &[1, 0, 0, 0, 0, 0]);
        assert!(PowerSeries::linear(c, 0, 1, 3).inv().is_none());
    }
}
