//! Gonality intervals: pencil witnesses above, Koszul certificates below.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::koszul::engine::{koszul_dim, KoszulOptions, KoszulSetup};
use crate::linalg::dense::rref_rows;
use crate::plane::bundle::{canonical_bundle, BundleSpec};
use crate::plane::curve::PlaneCurve;
use crate::plane::sections::section_space;
use crate::plane::tensor::{mult_tensor_between, TargetBasis};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilWitness {
    pub bundle: String,
    pub spec: BundleSpec,
    pub degree: usize,
    pub h0: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerBound {
    None,
    /// `Sym^2 H0(K) -> H0(2K)` is onto.
    HyperellipticTest,
    /// `K_{k,1}(K_X) = 0` at `g = 2k + 1`.
    Hrv {
        k: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpperBound {
    /// Existence only: every curve has a pencil of degree `⌊(g+3)/2⌋`.
    BrillNoether,
    Witness(PencilWitness),
    /// `K_{k,1}(K_X) ≠ 0` at `g = 2k + 1` forces a `g^1_{k+1}`.
    Hrv {
        k: usize,
        dim: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GonalityCertificate {
    pub lo: usize,
    pub hi: usize,
    pub lower: LowerBound,
    pub upper: UpperBound,
    /// Every pencil found by the bounded search.
    pub pencils: Vec<PencilWitness>,
    pub searched: usize,
    pub search_exhausted: bool,
    pub notes: Vec<String>,
}

impl GonalityCertificate {
    pub fn is_tight(&self) -> bool {
        self.lo == self.hi
    }

    pub fn summary(&self) -> String {
        format!("gonality in [{}, {}]", self.lo, self.hi)
    }
}

/// Whether `Sym^2 H0(K) -> H0(2K)` is onto; `None` below genus 3.
pub fn quadrics_surject(curve: &PlaneCurve) -> Result<Option<bool>> {
    if curve.genus() < 3 {
        return Ok(None);
    }
    let k = canonical_bundle(curve, &[])?;
    let v = section_space(curve, &k)?;
    let w = section_space(curve, &k.power(2))?;
    let t = mult_tensor_between(curve, &v, &v, &w, TargetBasis::Echelon)?;
    let mut rows: Vec<Vec<u32>> = (0..v.h0()).flat_map(|i| (i..v.h0()).map(move |j| (i, j))).map(|(i, j)| t.dense(i, j)).collect();
    Ok(Some(rref_rows(curve.ctx(), &mut rows).len() == w.h0()))
}

/// Pencils `O(m)(-D)`, `m ≤ 2`, with `D` made of nodes and marked points,
/// tried in order of degree. Subsets of `h0(O(m)) - 2` points always give a
/// pencil; up to two more points catch special position. At most `effort`
/// candidates are evaluated.
pub fn pencil_search(curve: &PlaneCurve, effort: usize) -> Result<(Vec<PencilWitness>, usize, bool)> {
    let d = curve.degree() as i64;
    let nodes = curve.delta();
    let marked = curve.marked().len();
    let items = nodes + marked;
    let mut candidates: Vec<(i64, u32, Vec<usize>)> = Vec::new();
    for m in 1..=2u32 {
        let cond = ((m * (m + 3)) / 2 - 1) as usize;
        for size in cond..=(cond + 2).min(items) {
            for subset in combinations(items, size) {
                let deg = m as i64 * d - subset.iter().map(|&i| if i < nodes { 2 } else { 1 }).sum::<i64>();
                if deg > 0 {
                    candidates.push((deg, m, subset));
                }
            }
        }
    }
    candidates.sort();
    let total = candidates.len();
    let mut found = Vec::new();
    let mut tried = 0;
    for (deg, m, subset) in candidates.into_iter().take(effort) {
        tried += 1;
        let mut node_mults = vec![0; nodes];
        let mut marked_div = vec![0; marked];
        for &i in &subset {
            if i < nodes {
                node_mults[i] = 1;
            } else {
                marked_div[i - nodes] = 1;
            }
        }
        let spec = BundleSpec::new(m, node_mults, marked_div, Vec::new());
        let space = section_space(curve, &spec)?;
        if space.h0() >= 2 {
            found.push(PencilWitness { bundle: spec.to_string(), spec, degree: deg as usize, h0: space.h0() });
        }
    }
    Ok((found, tried, tried == total))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::koszul::exterior::subsets(n, k)
}

/// Bounds the gonality from both sides with verifiable certificates.
pub fn certify_gonality(curve: &PlaneCurve, effort: usize, opts: &KoszulOptions) -> Result<GonalityCertificate> {
    let g = curve.genus();
    let mut notes = Vec::new();
    let mut hi = (g + 3) / 2;
    let (lo, lower) = match quadrics_surject(curve)? {
        Some(true) => (3, LowerBound::HyperellipticTest),
        Some(false) => {
            notes.push("quadrics do not surject: hyperelliptic".into());
            hi = 2;
            (2, LowerBound::None)
        }
        None => (if g == 0 { 1 } else { 2 }, LowerBound::None),
    };
    let mut cert =
        GonalityCertificate { lo, hi, lower, upper: UpperBound::BrillNoether, pencils: Vec::new(), searched: 0, search_exhausted: false, notes };

    let (pencils, searched, exhausted) = pencil_search(curve, effort)?;
    cert.searched = searched;
    cert.search_exhausted = exhausted;
    if let Some(best) = pencils.iter().min_by_key(|w| w.degree) {
        if best.degree <= cert.hi {
            cert.hi = best.degree;
            cert.upper = UpperBound::Witness(best.clone());
        }
    }
    cert.pencils = pencils;

    if g >= 3 && g % 2 == 1 && cert.lo >= 3 {
        let k = (g - 1) / 2;
        let kc = canonical_bundle(curve, &[])?;
        let setup = KoszulSetup::new(curve, &kc, 1, opts.target)?;
        let r = koszul_dim(&setup, k, 1, opts)?;
        if r.dim == 0 {
            cert.lo = cert.lo.max(k + 2);
            cert.lower = LowerBound::Hrv { k };
            cert.notes.push(format!("K_{{{k},1}}(K_X) = 0"));
        } else {
            if k + 1 < cert.hi {
                cert.hi = k + 1;
                cert.upper = UpperBound::Hrv { k, dim: r.dim };
            }
            cert.notes.push(format!("K_{{{k},1}}(K_X) = {}", r.dim));
        }
    }
    if cert.lo > cert.hi {
        return Err(Error::Consistency(format!("gonality certificate is empty: [{}, {}]", cert.lo, cert.hi)));
    }
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordScan {
    pub genus: usize,
    pub clifford: usize,
    /// `(p, dim K_{p,1}(K_X))` as scanned, high `p` first.
    pub dims: Vec<(usize, u64)>,
}

/// `g - 2 - max{p : K_{p,1}(K_X) ≠ 0}`. Scans `p` downward; above the middle
/// the cell is read through duality as `K_{g-2-p,2}`, which is smaller.
pub fn koszul_clifford(curve: &PlaneCurve, opts: &KoszulOptions) -> Result<CliffordScan> {
    let g = curve.genus();
    if g < 4 {
        return Err(Error::Precondition(format!("genus {g} < 4")));
    }
    let k = canonical_bundle(curve, &[])?;
    let setup = KoszulSetup::new(curve, &k, 2, opts.target)?;
    let mut dims = Vec::new();
    for p in (1..=g - 2).rev() {
        let dim = if 2 * p > g - 2 { koszul_dim(&setup, g - 2 - p, 2, opts)?.dim } else { koszul_dim(&setup, p, 1, opts)?.dim };
        dims.push((p, dim));
        if dim != 0 {
            return Ok(CliffordScan { genus: g, clifford: g - 2 - p, dims });
        }
    }
    Err(Error::Precondition("K_{1,1}(K_X) = 0: the canonical model is not cut out by quadrics".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::lookup;

    #[test]
    fn node_projection_is_found_first() {
        let c = lookup("F2").unwrap().curve().unwrap();
        let (found, tried, _) = pencil_search(&c, 50).unwrap();
        assert!(tried > 0);
        let best = found.iter().min_by_key(|w| w.degree).unwrap();
        assert_eq!(best.degree, 3);
        assert_eq!(best.spec.m, 1);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(12, 4).len(), 495);
    }
}
