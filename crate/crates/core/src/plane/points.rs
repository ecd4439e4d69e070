//! Rational points and rational line sections.

use crate::arith::FieldCtx;

use super::curve::{normalize_point, PlaneCurve, Point};

/// Outcome of a point scan; `requested - points.len()` points were not found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointScan {
    pub points: Vec<Point>,
    pub requested: usize,
}

impl PointScan {
    pub fn shortfall(&self) -> usize {
        self.requested - self.points.len()
    }
}

/// Evaluates `c_0 + c_1 t + ...` at `t`.
fn horner(ctx: FieldCtx, coeffs: &[u32], t: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| ctx.mul_add(c, acc, t))
}

/// Roots in F_p of a univariate polynomial, with multiplicities, in increasing
/// order. The zero polynomial has every element as a root of multiplicity 0.
pub fn univariate_roots(ctx: FieldCtx, coeffs: &[u32]) -> Vec<(u32, usize)> {
    let mut c = coeffs.to_vec();
    while c.last() == Some(&0) {
        c.pop();
    }
    if c.is_empty() {
        return (0..ctx.p()).map(|t| (t, 0)).collect();
    }
    if c.len() == 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for t in 0..ctx.p() {
        if horner(ctx, &c, t) != 0 {
            continue;
        }
        let mut q = c.clone();
        let mut mult = 0;
        loop {
            // synthetic division by (y - t)
            let n = q.len();
            if n <= 1 {
                break;
            }
            let mut quo = vec![0u32; n - 1];
            let mut carry = 0u32;
            for k in (0..n).rev() {
                let v = ctx.add(q[k], carry);
                if k == 0 {
                    carry = v;
                } else {
                    quo[k - 1] = v;
                    carry = ctx.mul(v, t);
                }
            }
            if carry != 0 {
                break;
            }
            mult += 1;
            q = quo;
        }
        out.push((t, mult));
        if out.iter().map(|r| r.1).sum::<usize>() == c.len() - 1 {
            break;
        }
    }
    out
}

/// Deterministic scan for smooth rational points that are not nodes and not
/// already marked: affine chart `z = 1` with `x = seed, seed + 1, ...` (mod p),
/// then the line at infinity.
pub fn find_rational_points(curve: &PlaneCurve, budget: usize, seed: u64) -> PointScan {
    let ctx = curve.ctx();
    let p = ctx.p();
    let f = curve.poly();
    let d = f.degree() as usize;
    let mut points = Vec::new();
    let accept = |pt: Point, points: &mut Vec<Point>| -> bool {
        if points.len() >= budget {
            return false;
        }
        let pt = normalize_point(ctx, pt).unwrap();
        if curve.is_smooth_point(pt) && curve.marked_index(pt).is_none() && !points.contains(&pt) {
            points.push(pt);
        }
        points.len() < budget
    };
    if budget == 0 {
        return PointScan { points, requested: budget };
    }
    let start = (seed % p as u64) as u32;
    'affine: for i in 0..p {
        let a = ctx.add(start, i % p);
        let mut coeffs = vec![0u32; d + 1];
        for &(e, c) in f.terms() {
            let k = e[1] as usize;
            coeffs[k] = ctx.add(coeffs[k], ctx.mul(c, ctx.pow(a, e[0] as u64)));
        }
        for (y, _) in univariate_roots(ctx, &coeffs) {
            if !accept([a, y, 1], &mut points) {
                break 'affine;
            }
        }
    }
    if points.len() < budget {
        // z = 0: points (x : 1 : 0), then (1 : 0 : 0)
        let mut coeffs = vec![0u32; d + 1];
        for &(e, c) in f.terms() {
            if e[2] == 0 {
                coeffs[e[0] as usize] = ctx.add(coeffs[e[0] as usize], c);
            }
        }
        for (x, _) in univariate_roots(ctx, &coeffs) {
            if !accept([x, 1, 0], &mut points) {
                break;
            }
        }
        if f.eval([1, 0, 0]) == 0 {
            accept([1, 0, 0], &mut points);
        }
    }
    PointScan { points, requested: budget }
}

/// Coefficients of `t -> F(P + t Q)`, lowest degree first, length `d + 1`.
pub fn restrict_to_line(curve: &PlaneCurve, p: Point, q: Point) -> Vec<u32> {
    let ctx = curve.ctx();
    let f = curve.poly();
    let d = f.degree() as usize;
    let lin: Vec<Vec<Vec<u32>>> = (0..3)
        .map(|v| {
            let mut pows = vec![vec![1u32]];
            for e in 1..=d {
                let prev: &Vec<u32> = &pows[e - 1];
                let mut next = vec![0u32; e + 1];
                for (k, &c) in prev.iter().enumerate() {
                    next[k] = ctx.mul_add(next[k], c, p[v]);
                    next[k + 1] = ctx.mul_add(next[k + 1], c, q[v]);
                }
                pows.push(next);
            }
            pows
        })
        .collect();
    let mut out = vec![0u32; d + 1];
    for &(e, c) in f.terms() {
        let a = &lin[0][e[0] as usize];
        let b = &lin[1][e[1] as usize];
        let cc = &lin[2][e[2] as usize];
        let mut ab = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                ab[i + j] = ctx.mul_add(ab[i + j], x, y);
            }
        }
        for (i, &x) in ab.iter().enumerate() {
            for (j, &y) in cc.iter().enumerate() {
                out[i + j] = ctx.mul_add(out[i + j], ctx.mul(x, y), c);
            }
        }
    }
    out
}

/// Rational points of `C ∩ line(P, Q)` with intersection multiplicities.
/// Returns `None` when the line is a component of the curve.
pub fn line_intersection(curve: &PlaneCurve, p: Point, q: Point) -> Option<Vec<(Point, usize)>> {
    let ctx = curve.ctx();
    let h = restrict_to_line(curve, p, q);
    if h.iter().all(|&c| c == 0) {
        return None;
    }
    let deg = h.iter().rposition(|&c| c != 0).unwrap();
    let mut out: Vec<(Point, usize)> = univariate_roots(ctx, &h)
        .into_iter()
        .map(|(t, m)| {
            let pt = [0, 1, 2].map(|v| ctx.mul_add(p[v], t, q[v]));
            (normalize_point(ctx, pt).unwrap(), m)
        })
        .collect();
    let at_q = h.len() - 1 - deg;
    if at_q > 0 {
        out.push((normalize_point(ctx, q).unwrap(), at_q));
    }
    Some(out)
}

/// A line meeting the curve in `d` distinct smooth rational points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineSection {
    pub through: [Point; 2],
    pub points: Vec<Point>,
}

/// Fully rational transverse line sections through pairs of the given points,
/// in scan order, at most `limit` of them.
pub fn rational_line_sections(curve: &PlaneCurve, candidates: &[Point], limit: usize) -> Vec<LineSection> {
    let d = curve.degree() as usize;
    let mut out: Vec<LineSection> = Vec::new();
    for i in 0..candidates.len() {
        for j in i + 1..candidates.len() {
            if out.len() >= limit {
                return out;
            }
            let (a, b) = (candidates[i], candidates[j]);
            if out.iter().any(|s| s.points.contains(&a) && s.points.contains(&b)) {
                continue;
            }
            let Some(hits) = line_intersection(curve, a, b) else { continue };
            if hits.len() == d && hits.iter().all(|&(pt, m)| m == 1 && curve.is_smooth_point(pt)) {
                let mut points: Vec<Point> = hits.into_iter().map(|h| h.0).collect();
                points.sort_unstable();
                out.push(LineSection { through: [a, b], points });
            }
        }
    }
    out
}

/// A line through a node `P` meeting each branch transversally, whose residual
/// intersection consists of `d - 2` distinct smooth rational points.
pub fn node_line_section(curve: &PlaneCurve, node: usize, candidates: &[Point]) -> Option<LineSection> {
    let d = curve.degree() as usize;
    let p = curve.nodes()[node].point;
    for &q in candidates {
        let Some(hits) = line_intersection(curve, p, q) else { continue };
        let at_node = hits.iter().find(|h| h.0 == p).map_or(0, |h| h.1);
        let rest: Vec<&(Point, usize)> = hits.iter().filter(|h| h.0 != p).collect();
        if at_node == 2 && rest.len() == d - 2 && rest.iter().all(|&&(pt, m)| m == 1 && curve.is_smooth_point(pt) && curve.node_index(pt).is_none()) {
            let mut points: Vec<Point> = rest.iter().map(|h| h.0).collect();
            points.sort_unstable();
            return Some(LineSection { through: [p, q], points });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::HomogPoly;

    fn ctx() -> FieldCtx {
        FieldCtx::new(10007).unwrap()
    }

    #[test]
    fn line_has_p_plus_one_points() {
        let f = HomogPoly::from_i64(ctx(), 1, &[([1, 0, 0], 1)]).unwrap();
        let c = PlaneCurve::new(f, &[], &[]).unwrap();
        let scan = find_rational_points(&c, usize::MAX, 0);
        assert_eq!(scan.points.len(), 10008);
        assert!(find_rational_points(&c, 0, 0).points.is_empty());
    }

    #[test]
    fn roots_with_multiplicity() {
        let f = ctx();
        // (t - 2)^2 (t - 5) = t^3 - 9 t^2 + 24 t - 20
        let c = [f.from_i64(-20), 24, f.from_i64(-9), 1];
        assert_eq!(univariate_roots(f, &c), vec![(2, 2), (5, 1)]);
    }

    #[test]
    fn conic_line_sections() {
        // x^2 + y^2 - z^2 meets most rational lines in 0 or 2 rational points
        let f = HomogPoly::from_i64(ctx(), 2, &[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 2], -1)]).unwrap();
        let c = PlaneCurve::new(f, &[], &[]).unwrap();
        let pts = find_rational_points(&c, 10, 3).points;
        assert_eq!(pts.len(), 10);
        let secs = rational_line_sections(&c, &pts, 5);
        assert_eq!(secs.len(), 5);
        for s in &secs {
            assert_eq!(s.points.len(), 2);
            for &pt in &s.points {
                assert_eq!(c.poly().eval(pt), 0);
            }
        }
    }
}
