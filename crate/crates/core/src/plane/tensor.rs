//! Structure constants of multiplication maps between section spaces.

use crate::arith::{FieldCtx, HomogPoly};
use crate::error::{Error, Result};
use crate::linalg::dense::{inverse, rref_rows, DenseMat};

use super::bundle::BundleSpec;
use super::curve::PlaneCurve;
use super::sections::{section_space, SectionSpace};

/// `H0(A) x H0(B) -> H0(C)`, entry `(i, j)` holding the sparse coordinates
/// of `a_i b_j` in the chosen basis of `H0(C)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultTensor {
    ctx: FieldCtx,
    pub dims: (usize, usize, usize),
    entries: Vec<Vec<(u32, u32)>>,
    /// For an adapted target basis: its vectors in echelon coordinates.
    basis_change: Option<Vec<Vec<u32>>>,
}

impl MultTensor {
    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn basis_change(&self) -> Option<&[Vec<u32>]> {
        self.basis_change.as_deref()
    }

    /// Converts target coordinates in this tensor's basis to echelon coordinates.
    pub fn to_echelon(&self, y: &[u32]) -> Vec<u32> {
        let Some(b) = &self.basis_change else { return y.to_vec() };
        let f = self.ctx;
        let mut x = vec![0u32; self.dims.2];
        for (&c, row) in y.iter().zip(b) {
            if c == 0 {
                continue;
            }
            for (xx, &r) in x.iter_mut().zip(row) {
                *xx = f.mul_add(*xx, c, r);
            }
        }
        x
    }

    pub fn get(&self, i: usize, j: usize) -> &[(u32, u32)] {
        &self.entries[i * self.dims.1 + j]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(|e| e.len()).sum()
    }

    /// Dense coordinate vector of `a_i b_j`.
    pub fn dense(&self, i: usize, j: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.dims.2];
        for &(k, c) in self.get(i, j) {
            v[k as usize] = c;
        }
        v
    }

    pub fn from_dense_entries(ctx: FieldCtx, dims: (usize, usize, usize), dense: Vec<Vec<u32>>) -> Self {
        assert_eq!(dense.len(), dims.0 * dims.1);
        let entries = dense
            .into_iter()
            .map(|v| {
                assert_eq!(v.len(), dims.2);
                v.into_iter().enumerate().filter(|e| e.1 != 0).map(|(k, c)| (k as u32, c)).collect()
            })
            .collect();
        MultTensor { ctx, dims, entries, basis_change: None }
    }
}

/// Target basis used for the structure constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TargetBasis {
    /// The echelon basis of the section space.
    #[default]
    Echelon,
    /// A basis of products `a_i b_j`, chosen greedily in index order, so that
    /// many structure vectors are unit vectors. Ranks are unaffected.
    Adapted,
}

/// Products of the two bases expressed in the echelon basis of `target`.
fn product_coords(curve: &PlaneCurve, a: &SectionSpace, b: &SectionSpace, target: &SectionSpace) -> Result<Vec<Vec<u32>>> {
    if a.degree() + b.degree() != target.degree() {
        return Err(Error::DimensionMismatch("product degree does not match the target".into()));
    }
    let pa = a.basis_polys(curve);
    let pb = b.basis_polys(curve);
    let mut out = Vec::with_capacity(pa.len() * pb.len());
    for x in &pa {
        for y in &pb {
            let prod: HomogPoly = x.mul(y)?;
            out.push(target.coordinates_of(curve, &prod)?);
        }
    }
    Ok(out)
}

pub fn mult_tensor_between(curve: &PlaneCurve, a: &SectionSpace, b: &SectionSpace, target: &SectionSpace, basis: TargetBasis) -> Result<MultTensor> {
    let f = curve.ctx();
    let dims = (a.h0(), b.h0(), target.h0());
    let coords = product_coords(curve, a, b, target)?;
    let mut change = None;
    let coords = match basis {
        TargetBasis::Echelon => coords,
        TargetBasis::Adapted => {
            let n = dims.2;
            let mut chosen: Vec<Vec<u32>> = Vec::with_capacity(n);
            let mut echelon: Vec<Vec<u32>> = Vec::new();
            for v in &coords {
                if chosen.len() == n {
                    break;
                }
                let mut trial = echelon.clone();
                trial.push(v.clone());
                let piv = rref_rows(f, &mut trial);
                if piv.len() > echelon.len() {
                    echelon = trial;
                    chosen.push(v.clone());
                }
            }
            if chosen.len() < n {
                // The map is not surjective; complete with echelon vectors.
                for k in 0..n {
                    if chosen.len() == n {
                        break;
                    }
                    let mut e = vec![0u32; n];
                    e[k] = 1;
                    let mut trial = echelon.clone();
                    trial.push(e.clone());
                    if rref_rows(f, &mut trial).len() > echelon.len() {
                        echelon = trial;
                        chosen.push(e);
                    }
                }
            }
            // x = Σ y_k chosen_k  ⇔  y = x · chosen^{-1}
            let inv = inverse(&DenseMat::from_rows(f, n, &chosen)).ok_or_else(|| Error::Consistency("adapted basis is singular".into()))?;
            change = Some(chosen);
            coords
                .iter()
                .map(|x| {
                    let mut y = vec![0u32; n];
                    for (k, &xk) in x.iter().enumerate() {
                        if xk == 0 {
                            continue;
                        }
                        for (yy, &c) in y.iter_mut().zip(inv.row(k)) {
                            *yy = f.mul_add(*yy, xk, c);
                        }
                    }
                    y
                })
                .collect()
        }
    };
    let mut t = MultTensor::from_dense_entries(f, dims, coords);
    t.basis_change = change;
    Ok(t)
}

/// `H0(L) x H0(L^q) -> H0(L^{q+1})` with freshly computed, audited spaces.
pub fn mult_tensor(curve: &PlaneCurve, l: &BundleSpec, q: u32) -> Result<MultTensor> {
    let a = section_space(curve, l)?;
    let b = section_space(curve, &l.power(q))?;
    let c = section_space(curve, &l.power(q + 1))?;
    mult_tensor_between(curve, &a, &b, &c, TargetBasis::Echelon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldCtx;
    use crate::linalg::dense::rank_kernel;
    use crate::plane::bundle::canonical_bundle;

    fn quartic() -> PlaneCurve {
        let f = HomogPoly::from_i64(FieldCtx::new(10007).unwrap(), 4, &[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1), ([1, 1, 2], 3)]).unwrap();
        PlaneCurve::new(f, &[], &[]).unwrap()
    }

    #[test]
    fn trivial_factor_is_identity() {
        let c = quartic();
        let k = canonical_bundle(&c, &[]).unwrap();
        let t = mult_tensor(&c, &k, 0).unwrap();
        assert_eq!(t.dims, (3, 1, 3));
        for i in 0..3 {
            assert_eq!(t.get(i, 0), &[(i as u32, 1)]);
        }
    }

    #[test]
    fn adapted_basis_preserves_rank() {
        let c = quartic();
        let k = canonical_bundle(&c, &[]).unwrap();
        let a = section_space(&c, &k).unwrap();
        let b = section_space(&c, &k.power(2)).unwrap();
        let t = section_space(&c, &k.power(3)).unwrap();
        let e = mult_tensor_between(&c, &a, &b, &t, TargetBasis::Echelon).unwrap();
        let d = mult_tensor_between(&c, &a, &b, &t, TargetBasis::Adapted).unwrap();
        let rank = |m: &MultTensor| {
            let rows: Vec<Vec<u32>> = (0..3).flat_map(|i| (0..6).map(move |j| (i, j))).map(|(i, j)| m.dense(i, j)).collect();
            rank_kernel(&DenseMat::from_rows(c.ctx(), 10, &rows)).rank
        };
        assert_eq!(rank(&e), rank(&d));
        for (i, j) in [(0, 0), (2, 5), (1, 3)] {
            assert_eq!(d.to_echelon(&d.dense(i, j)), e.dense(i, j));
        }
        let units = (0..3).flat_map(|i| (0..6).map(move |j| (i, j))).filter(|&(i, j)| d.get(i, j).len() == 1).count();
        assert!(units >= 10);
    }
}
