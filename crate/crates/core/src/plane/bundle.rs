//! Line bundles on (partial) normalizations, encoded by plane conditions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::curve::PlaneCurve;

/// Sections are degree-`m` forms with multiplicity `node_mults[i]` at each
/// resolved node and vanishing order `marked_div[j]` along each marked point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BundleSpec {
    pub m: u32,
    pub node_mults: Vec<u32>,
    pub marked_div: Vec<u32>,
    /// Indices of nodes that are not resolved (sorted).
    pub kept_nodes: Vec<usize>,
}

impl BundleSpec {
    pub fn new(m: u32, node_mults: Vec<u32>, marked_div: Vec<u32>, mut kept_nodes: Vec<usize>) -> Self {
        kept_nodes.sort_unstable();
        kept_nodes.dedup();
        BundleSpec { m, node_mults, marked_div, kept_nodes }
    }

    /// `O(m)` with no conditions, on the full normalization.
    pub fn twist(curve: &PlaneCurve, m: u32) -> Self {
        BundleSpec::new(m, vec![0; curve.delta()], vec![0; curve.marked().len()], Vec::new())
    }

    pub fn trivial(curve: &PlaneCurve) -> Self {
        Self::twist(curve, 0)
    }

    /// Checks lengths against the curve and the kept-node constraints.
    pub fn validate(&self, curve: &PlaneCurve) -> Result<()> {
        if self.node_mults.len() != curve.delta() {
            return Err(Error::InvalidBundle(format!("{} node multiplicities for {} nodes", self.node_mults.len(), curve.delta())));
        }
        if self.marked_div.len() != curve.marked().len() {
            return Err(Error::InvalidBundle(format!("{} marked multiplicities for {} marked points", self.marked_div.len(), curve.marked().len())));
        }
        if let Some(&k) = self.kept_nodes.iter().find(|&&k| k >= curve.delta()) {
            return Err(Error::InvalidBundle(format!("kept node {k} out of range")));
        }
        if self.kept_nodes.iter().any(|&k| self.node_mults[k] != 0) {
            return Err(Error::InvalidBundle("kept nodes carry no multiplicity".into()));
        }
        Ok(())
    }

    pub fn is_kept(&self, node: usize) -> bool {
        self.kept_nodes.binary_search(&node).is_ok()
    }

    /// `m d - Σ_resolved 2 a_i - Σ m_j`.
    pub fn degree(&self, curve: &PlaneCurve) -> i64 {
        let d = curve.degree() as i64;
        let nodes: i64 = (0..self.node_mults.len()).filter(|&i| !self.is_kept(i)).map(|i| 2 * self.node_mults[i] as i64).sum();
        let marked: i64 = self.marked_div.iter().map(|&m| m as i64).sum();
        self.m as i64 * d - nodes - marked
    }

    /// `L^q`: every datum scaled by `q`, same kept nodes.
    pub fn power(&self, q: u32) -> BundleSpec {
        BundleSpec {
            m: self.m * q,
            node_mults: self.node_mults.iter().map(|a| a * q).collect(),
            marked_div: self.marked_div.iter().map(|a| a * q).collect(),
            kept_nodes: self.kept_nodes.clone(),
        }
    }

    /// Same bundle on a curve with extra marked points appended.
    pub fn pad_marked(&self, curve: &PlaneCurve) -> BundleSpec {
        let mut s = self.clone();
        s.marked_div.resize(curve.marked().len(), 0);
        s
    }

    pub fn is_trivial(&self) -> bool {
        self.m == 0 && self.node_mults.iter().all(|&a| a == 0) && self.marked_div.iter().all(|&a| a == 0)
    }
}

impl fmt::Display for BundleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({})", self.m)?;
        let nodes: Vec<String> = self
            .node_mults
            .iter()
            .enumerate()
            .filter(|(i, &a)| a > 0 && !self.is_kept(*i))
            .map(|(i, &a)| if a == 1 { format!("N{i}") } else { format!("{a}N{i}") })
            .collect();
        let marked: Vec<String> = self
            .marked_div
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(j, &a)| if a == 1 { format!("P{j}") } else { format!("{a}P{j}") })
            .collect();
        for part in nodes.iter().chain(&marked) {
            write!(f, "-{part}")?;
        }
        if !self.kept_nodes.is_empty() {
            let k: Vec<String> = self.kept_nodes.iter().map(|i| format!("N{i}")).collect();
            write!(f, " on Y[{}]", k.join(","))?;
        }
        Ok(())
    }
}

/// Dualizing sheaf of the partial normalization keeping `kept` (empty: `K_X`).
pub fn canonical_bundle(curve: &PlaneCurve, kept: &[usize]) -> Result<BundleSpec> {
    let d = curve.degree();
    if d < 3 {
        return Err(Error::InvalidBundle(format!("no adjoint canonical model in degree {d}")));
    }
    let spec = BundleSpec::new(d - 3, vec![1; curve.delta()], vec![0; curve.marked().len()], kept.to_vec());
    let mut spec = spec;
    for &k in &spec.kept_nodes.clone() {
        if k >= curve.delta() {
            return Err(Error::InvalidBundle(format!("kept node {k} out of range")));
        }
        spec.node_mults[k] = 0;
    }
    Ok(spec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionKind {
    Trivial,
    Empty,
    Canonical,
    CanonicalPower(u32),
    DualizingPower(u32),
    Nonspecial,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub kind: PredictionKind,
    pub h0: Option<usize>,
}

impl Prediction {
    fn known(kind: PredictionKind, h0: usize) -> Self {
        Prediction { kind, h0: Some(h0) }
    }

    pub fn is_nonspecial(&self) -> bool {
        matches!(self.kind, PredictionKind::Nonspecial)
    }
}

/// If `spec` is `canonical^q` for some `q ≥ 1`, returns `q`.
fn canonical_exponent(curve: &PlaneCurve, spec: &BundleSpec) -> Option<u32> {
    let base = canonical_bundle(curve, &spec.kept_nodes).ok()?;
    if base.m == 0 {
        return None;
    }
    if spec.m == 0 || !spec.m.is_multiple_of(base.m) {
        return None;
    }
    let q = spec.m / base.m;
    (base.power(q) == *spec).then_some(q)
}

/// Riemann-Roch prediction for `h0(spec)`.
pub fn expected_h0(curve: &PlaneCurve, spec: &BundleSpec) -> Prediction {
    let g = curve.genus();
    if spec.is_trivial() {
        return Prediction::known(PredictionKind::Trivial, 1);
    }
    let deg = spec.degree(curve);
    if deg < 0 {
        return Prediction::known(PredictionKind::Empty, 0);
    }
    if !spec.kept_nodes.is_empty() {
        let pa = g + spec.kept_nodes.len();
        return match canonical_exponent(curve, spec) {
            Some(1) => Prediction::known(PredictionKind::DualizingPower(1), pa),
            Some(q) => Prediction::known(PredictionKind::DualizingPower(q), (2 * q as usize - 1) * (pa - 1)),
            None => Prediction { kind: PredictionKind::Unknown, h0: None },
        };
    }
    match canonical_exponent(curve, spec) {
        Some(1) => return Prediction::known(PredictionKind::Canonical, g),
        Some(q) if g >= 2 => return Prediction::known(PredictionKind::CanonicalPower(q), (2 * q as usize - 1) * (g - 1)),
        _ => {}
    }
    // A resolved node without conditions is not separated by plane forms.
    if spec.node_mults.contains(&0) {
        return Prediction { kind: PredictionKind::Unknown, h0: None };
    }
    if deg > 2 * g as i64 - 2 {
        return Prediction::known(PredictionKind::Nonspecial, (deg - g as i64 + 1) as usize);
    }
    Prediction { kind: PredictionKind::Unknown, h0: None }
}
