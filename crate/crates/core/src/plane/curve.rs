//! Validated nodal plane models.

use crate::arith::series::{node_branches, smooth_branch, Branch};
use crate::arith::{FieldCtx, HomogPoly, MonomialBasis, Reducer};
use crate::error::{Error, Result};
use crate::linalg::dense::rref_rows;

pub const DEFAULT_BRANCH_ORDER: usize = 16;

pub type Point = [u32; 3];

/// Scales a projective point so that its last nonzero coordinate is 1.
pub fn normalize_point(ctx: FieldCtx, pt: Point) -> Option<Point> {
    let pt = pt.map(|c| c % ctx.p());
    let v = (0..3).rev().find(|&v| pt[v] != 0)?;
    let inv = ctx.inv(pt[v]);
    Some(pt.map(|c| ctx.mul(c, inv)))
}

#[derive(Clone, Debug)]
pub struct Node {
    pub point: Point,
    pub tangents: [Point; 2],
    pub branches: [Branch; 2],
}

#[derive(Clone, Debug)]
pub struct MarkedPoint {
    pub point: Point,
    pub branch: Branch,
}

#[derive(Clone, Debug)]
pub struct PlaneCurve {
    ctx: FieldCtx,
    f: HomogPoly,
    nodes: Vec<Node>,
    marked: Vec<MarkedPoint>,
    reducer: Reducer,
    genus: usize,
    branch_order: usize,
}

impl PlaneCurve {
    /// Validates a model: declared nodes are split ordinary nodes, there are no
    /// other singularities, and marked points are distinct smooth points.
    pub fn new(f: HomogPoly, nodes: &[Point], marked: &[Point]) -> Result<Self> {
        Self::with_order(f, nodes, marked, DEFAULT_BRANCH_ORDER)
    }

    pub fn with_order(f: HomogPoly, nodes: &[Point], marked: &[Point], branch_order: usize) -> Result<Self> {
        let ctx = f.ctx();
        let d = f.degree() as usize;
        if f.is_zero() || d == 0 {
            return Err(Error::InvalidModel("defining form must be nonzero of positive degree".into()));
        }
        if (d as u32).is_multiple_of(ctx.p()) {
            return Err(Error::InvalidModel(format!("degree {d} divisible by the characteristic")));
        }
        let arith_genus = if d >= 2 { (d - 1) * (d - 2) / 2 } else { 0 };
        if nodes.len() > arith_genus {
            return Err(Error::InvalidModel(format!("{} nodes exceed arithmetic genus {arith_genus}", nodes.len())));
        }
        let mut node_data = Vec::with_capacity(nodes.len());
        for &raw in nodes {
            let pt = normalize_point(ctx, raw).ok_or_else(|| Error::InvalidModel("zero node vector".into()))?;
            if node_data.iter().any(|n: &Node| n.point == pt) {
                return Err(Error::InvalidModel(format!("node {pt:?} declared twice")));
            }
            if f.eval(pt) != 0 {
                return Err(Error::PointNotOnCurve(pt));
            }
            if f.gradient().iter().any(|g| g.eval(pt) != 0) {
                return Err(Error::NotOrdinaryNode(pt, "declared node is a smooth point".into()));
            }
            let nb = node_branches(&f, pt, branch_order)?;
            node_data.push(Node { point: pt, tangents: nb.tangents, branches: nb.branches });
        }
        let reducer = Reducer::new(&f)?;
        let mut curve = PlaneCurve { ctx, f, nodes: node_data, marked: Vec::new(), reducer, genus: arith_genus - nodes.len(), branch_order };
        let found = curve.singular_length()?;
        if found != curve.nodes.len() {
            return Err(Error::UndeclaredSingularity { declared: curve.nodes.len(), found });
        }
        curve.add_marked(marked)?;
        Ok(curve)
    }

    /// A copy of this curve with additional marked points appended.
    pub fn with_marked(&self, extra: &[Point]) -> Result<PlaneCurve> {
        let mut c = self.clone();
        c.add_marked(extra)?;
        Ok(c)
    }

    fn add_marked(&mut self, pts: &[Point]) -> Result<()> {
        for &raw in pts {
            let pt = normalize_point(self.ctx, raw).ok_or_else(|| Error::InvalidMarkedPoint(raw, "zero vector".into()))?;
            if self.f.eval(pt) != 0 {
                return Err(Error::InvalidMarkedPoint(pt, "not on the curve".into()));
            }
            if self.nodes.iter().any(|n| n.point == pt) {
                return Err(Error::InvalidMarkedPoint(pt, "coincides with a node".into()));
            }
            if self.marked.iter().any(|m| m.point == pt) {
                return Err(Error::InvalidMarkedPoint(pt, "marked twice".into()));
            }
            let branch = smooth_branch(&self.f, pt, self.branch_order).map_err(|e| match e {
                Error::SingularPoint(_) => Error::InvalidMarkedPoint(pt, "singular point".into()),
                other => other,
            })?;
            self.marked.push(MarkedPoint { point: pt, branch });
        }
        Ok(())
    }

    /// Length of the singular scheme `V(F_x, F_y, F_z)`, read off the Hilbert
    /// function of `S/J` once it stabilizes. Ordinary nodes contribute one each
    /// and any other singular point at least one, so this detects undeclared
    /// singularities over the algebraic closure.
    pub fn singular_length(&self) -> Result<usize> {
        let d = self.degree() as usize;
        if d < 2 {
            return Ok(0);
        }
        let grad = self.f.gradient();
        let hilbert = |m: usize| -> usize {
            let basis = MonomialBasis::new(m as u32);
            let shift = MonomialBasis::new((m - (d - 1)) as u32);
            let mut rows: Vec<Vec<u32>> = Vec::with_capacity(3 * shift.len());
            for g in &grad {
                if g.is_zero() {
                    continue;
                }
                for &e in shift.exps() {
                    let mut row = vec![0u32; basis.len()];
                    for &(t, c) in g.terms() {
                        row[basis.index([t[0] + e[0], t[1] + e[1], t[2] + e[2]])] = c;
                    }
                    rows.push(row);
                }
            }
            let rank = rref_rows(self.ctx, &mut rows).len();
            basis.len() - rank
        };
        let mut prev = hilbert(3 * d - 3);
        for m in (3 * d - 3..).take(2 * d + 4) {
            let next = hilbert(m + 1);
            if next == prev {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::InvalidModel("singular locus is not zero-dimensional (non-reduced model?)".into()))
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn poly(&self) -> &HomogPoly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn delta(&self) -> usize {
        self.nodes.len()
    }

    pub fn marked(&self) -> &[MarkedPoint] {
        &self.marked
    }

    pub fn marked_index(&self, pt: Point) -> Option<usize> {
        let pt = normalize_point(self.ctx, pt)?;
        self.marked.iter().position(|m| m.point == pt)
    }

    pub fn node_index(&self, pt: Point) -> Option<usize> {
        let pt = normalize_point(self.ctx, pt)?;
        self.nodes.iter().position(|n| n.point == pt)
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }

    /// Geometric genus of the normalization.
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn arithmetic_genus(&self) -> usize {
        self.genus + self.nodes.len()
    }

    pub fn branch_order(&self) -> usize {
        self.branch_order
    }

    pub fn is_smooth_point(&self, pt: Point) -> bool {
        self.f.eval(pt) == 0 && self.f.gradient().iter().any(|g| g.eval(pt) != 0)
    }
}
