//! Spaces of representing forms for line bundles, modulo the curve equation.

use crate::arith::series::{complement, PowerSeries, TaylorFrame};
use crate::arith::{HomogPoly, MonomialBasis};
use crate::error::{Error, Result};
use crate::linalg::dense::{rank_kernel, rref_rows, DenseMat};

use super::bundle::{expected_h0, BundleSpec, Prediction};
use super::curve::PlaneCurve;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpace {
    pub spec: BundleSpec,
    pub prediction: Prediction,
    degree: u32,
    /// Basis in reduced echelon form over the degree-`m` monomials; every
    /// vector is in normal form modulo the curve.
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl SectionSpace {
    pub fn h0(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_polys(&self, curve: &PlaneCurve) -> Vec<HomogPoly> {
        self.basis.iter().map(|v| HomogPoly::from_dense(curve.ctx(), self.degree, v)).collect()
    }

    /// Coordinates of a normal-form vector; errors if it is not in the span.
    pub fn coordinates(&self, curve: &PlaneCurve, nf: &[u32]) -> Result<Vec<u32>> {
        let f = curve.ctx();
        if nf.len() != MonomialBasis::count(self.degree) {
            return Err(Error::DimensionMismatch(format!("vector of length {} in degree {}", nf.len(), self.degree)));
        }
        let coords: Vec<u32> = self.pivots.iter().map(|&c| nf[c]).collect();
        let mut residual = nf.to_vec();
        for (row, &c) in self.basis.iter().zip(&coords) {
            if c == 0 {
                continue;
            }
            let s = f.neg(c);
            for (x, &y) in residual.iter_mut().zip(row) {
                *x = f.mul_add(*x, s, y);
            }
        }
        if residual.iter().any(|&v| v != 0) {
            return Err(Error::Consistency(format!("form is not a section of {}", self.spec)));
        }
        Ok(coords)
    }

    /// Coordinates of an arbitrary form of the right degree.
    pub fn coordinates_of(&self, curve: &PlaneCurve, g: &HomogPoly) -> Result<Vec<u32>> {
        if g.degree() != self.degree {
            return Err(Error::DimensionMismatch(format!("form of degree {} for sections of degree {}", g.degree(), self.degree)));
        }
        let mut v = g.to_dense();
        curve.reducer().reduce_dense(self.degree, &mut v);
        self.coordinates(curve, &v)
    }

    /// The same space with basis `new` (rows of coordinates in the current
    /// basis, which must be invertible), re-expressed over monomials.
    pub fn change_basis(&self, curve: &PlaneCurve, new: &[Vec<u32>]) -> Result<ChangedBasis> {
        let f = curve.ctx();
        let n = self.h0();
        if new.len() != n || new.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("basis change must be square".into()));
        }
        if rank_kernel(&DenseMat::from_rows(f, n, new)).rank != n {
            return Err(Error::DimensionMismatch("basis change is singular".into()));
        }
        let forms = new
            .iter()
            .map(|coeffs| {
                let mut v = vec![0u32; self.basis.first().map_or(0, |b| b.len())];
                for (row, &c) in self.basis.iter().zip(coeffs) {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = f.mul_add(*x, c, y);
                    }
                }
                v
            })
            .collect();
        Ok(ChangedBasis { forms })
    }
}

/// A non-echelon basis of a section space, as normal-form monomial vectors.
#[derive(Clone, Debug)]
pub struct ChangedBasis {
    pub forms: Vec<Vec<u32>>,
}

/// Condition rows on the degree-`m` monomials imposed by `spec`.
pub fn condition_matrix(curve: &PlaneCurve, spec: &BundleSpec) -> Result<DenseMat> {
    let f = curve.ctx();
    let m = spec.m;
    let basis = MonomialBasis::new(m);
    let n = basis.len();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (i, node) in curve.nodes().iter().enumerate() {
        let a = spec.node_mults[i] as usize;
        if a == 0 || spec.is_kept(i) {
            continue;
        }
        let (ua, ub) = complement(f, node.point);
        let frame = TaylorFrame::new(f, node.point, ua, ub, m as usize, a - 1);
        let k = a * (a + 1) / 2;
        let start = rows.len();
        rows.extend((0..k).map(|_| vec![0u32; n]));
        for (col, &e) in basis.exps().iter().enumerate() {
            for (r, v) in frame.monomial(e).low_coeffs(a).into_iter().enumerate() {
                rows[start + r][col] = v;
            }
        }
    }
    for (j, mp) in curve.marked().iter().enumerate() {
        let mult = spec.marked_div[j] as usize;
        if mult == 0 {
            continue;
        }
        if mult > curve.branch_order() + 1 {
            return Err(Error::InsufficientTruncation { needed: mult, cached: curve.branch_order() + 1 });
        }
        let pows: Vec<Vec<PowerSeries>> = mp.branch.coords.iter().map(|s| s.truncate(mult - 1).powers(m as usize)).collect();
        let start = rows.len();
        rows.extend((0..mult).map(|_| vec![0u32; n]));
        for (col, &e) in basis.exps().iter().enumerate() {
            let s = pows[0][e[0] as usize].mul(&pows[1][e[1] as usize]).mul(&pows[2][e[2] as usize]);
            for (r, &v) in s.coeffs().iter().enumerate() {
                rows[start + r][col] = v;
            }
        }
    }
    Ok(DenseMat::from_rows(f, n, &rows))
}

/// Basis of forms satisfying `spec`, modulo the curve, without the
/// Riemann-Roch audit.
pub fn section_space_unaudited(curve: &PlaneCurve, spec: &BundleSpec) -> Result<SectionSpace> {
    spec.validate(curve)?;
    let f = curve.ctx();
    let m = spec.m;
    let max_node = spec.node_mults.iter().copied().max().unwrap_or(0) as usize;
    if max_node > curve.branch_order() {
        return Err(Error::InsufficientTruncation { needed: max_node, cached: curve.branch_order() });
    }
    let cond = condition_matrix(curve, spec)?;
    let kernel = rank_kernel(&cond).kernel_basis;
    let mut reduced: Vec<Vec<u32>> = kernel
        .into_iter()
        .map(|mut v| {
            curve.reducer().reduce_dense(m, &mut v);
            v
        })
        .collect();
    let pivots = rref_rows(f, &mut reduced);
    let space = SectionSpace { spec: spec.clone(), prediction: expected_h0(curve, spec), degree: m, basis: reduced, pivots };
    recheck_vanishing(curve, &space)?;
    Ok(space)
}

/// Basis of forms satisfying `spec`, audited against Riemann-Roch whenever a
/// prediction is available.
pub fn section_space(curve: &PlaneCurve, spec: &BundleSpec) -> Result<SectionSpace> {
    let space = section_space_unaudited(curve, spec)?;
    if let Some(predicted) = space.prediction.h0 {
        if predicted != space.h0() {
            return Err(Error::RiemannRochMismatch { bundle: spec.to_string(), computed: space.h0(), predicted });
        }
    }
    Ok(space)
}

fn recheck_vanishing(curve: &PlaneCurve, space: &SectionSpace) -> Result<()> {
    let spec = &space.spec;
    for g in space.basis_polys(curve) {
        for (i, node) in curve.nodes().iter().enumerate() {
            let a = spec.node_mults[i] as usize;
            if a == 0 || spec.is_kept(i) {
                continue;
            }
            for br in &node.branches {
                if br.vanishing_order(&g) < a {
                    return Err(Error::Consistency(format!("section fails multiplicity {a} on a branch at node {i}")));
                }
            }
        }
        for (j, mp) in curve.marked().iter().enumerate() {
            let mult = spec.marked_div[j] as usize;
            if mult > 0 && mp.branch.vanishing_order(&g) < mult {
                return Err(Error::Consistency(format!("section fails order {mult} at marked point {j}")));
            }
        }
    }
    Ok(())
}
