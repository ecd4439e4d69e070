//! Verdict-level checks against computed Koszul groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::koszul::engine::{koszul_dim, KoszulOptions, KoszulSetup};
use crate::plane::bundle::{canonical_bundle, expected_h0, BundleSpec};
use crate::plane::curve::PlaneCurve;
use crate::plane::points::{find_rational_points, rational_line_sections};
use crate::plane::sections::section_space;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bundles::{add_divisor, canonical_plus_node_pair, mark_points};
use super::gonality::{koszul_clifford, GonalityCertificate, PencilWitness};
use super::profile::CurveProfile;
use super::verdict::{cell, Basis, Expectation, Observation, Pattern, Verdict};

fn observe(setup: &KoszulSetup, p: usize, q: u32, label: &str, opts: &KoszulOptions) -> Result<Observation> {
    Ok(Observation { cell: cell(p, q, label), dim: koszul_dim(setup, p, q, opts)?.dim })
}

fn expect(p: usize, label: &str, pattern: Pattern) -> Expectation {
    Expectation { cell: cell(p, 1, label), pattern }
}

/// `K_{g-c-1,1}(K_X) = 0` and `K_{g-c-2,1}(K_X) ≠ 0` for the declared `c`.
pub fn green_check(curve: &PlaneCurve, profile: &CurveProfile, opts: &KoszulOptions) -> Result<Verdict> {
    let g = curve.genus();
    let k = canonical_bundle(curve, &[])?;
    let label = "K_X";
    let mut certs: Vec<String> = profile.certificate.iter().map(|c| c.summary()).collect();
    let Some(c) = profile.clifford else {
        let scan = koszul_clifford(curve, opts)?;
        certs.push(format!("no Clifford index declared; Koszul side gives {}", scan.clifford));
        let computed = scan.dims.iter().map(|&(p, dim)| Observation { cell: cell(p, 1, label), dim }).collect();
        return Ok(Verdict::inconclusive("green", &k.to_string(), computed, certs));
    };
    if c + 2 > g {
        return Err(Error::Precondition(format!("Clifford index {c} too large for genus {g}")));
    }
    let setup = KoszulSetup::new(curve, &k, 1, opts.target)?;
    let vanish = g - c - 1;
    let mut expected = vec![expect(vanish, label, Pattern::Zero)];
    let mut computed = vec![observe(&setup, vanish, 1, label, opts)?];
    if vanish >= 2 {
        expected.push(expect(vanish - 1, label, Pattern::Nonzero));
        computed.push(observe(&setup, vanish - 1, 1, label, opts)?);
    }
    certs.push(format!("declared Clifford index {c}"));
    Ok(Verdict::judge("green", &k.to_string(), expected, computed, Basis::Declared, certs))
}

/// `K_{h0(L)-d,1}(L) = 0` and `K_{h0(L)-d-1,1}(L) ≠ 0` for nonspecial `L`.
pub fn gl_check(curve: &PlaneCurve, l: &BundleSpec, profile: &CurveProfile, opts: &KoszulOptions) -> Result<Verdict> {
    if !expected_h0(curve, l).is_nonspecial() {
        return Err(Error::Precondition(format!("{l} is not known to be nonspecial: nonspecial required")));
    }
    let (d, basis) = profile.gonality_basis().ok_or_else(|| Error::Precondition("no gonality declared or certified".into()))?;
    let setup = KoszulSetup::new(curve, l, 1, opts.target)?;
    let h = setup.n();
    if h < d + 1 {
        return Err(Error::Precondition(format!("degree too small: h0(L) = {h} with gonality {d}")));
    }
    let n = h - d;
    let label = "L";
    let mut expected = vec![expect(n, label, Pattern::Zero)];
    let mut computed = vec![observe(&setup, n, 1, label, opts)?];
    if n >= 2 {
        expected.push(expect(n - 1, label, Pattern::Nonzero));
        computed.push(observe(&setup, n - 1, 1, label, opts)?);
    }
    let deg = l.degree(curve);
    let g = curve.genus() as i64;
    let mut certs = vec![format!("deg L = {deg}, h0(L) = {h}, gonality {d}")];
    if let Some(c) = &profile.certificate {
        certs.push(c.summary());
    }
    if deg < 3 * g {
        certs.push(format!("deg L < 3g = {}", 3 * g));
    }
    Ok(Verdict::judge("green-lazarsfeld", &l.to_string(), expected, computed, basis, certs))
}

/// Whether the points lie in one fiber of one of the pencils, that is
/// `h0(A - x - y - z) ≥ 1` for some witness `A`.
pub fn points_in_pencil_fiber(curve: &PlaneCurve, pencils: &[PencilWitness], marked: &[usize]) -> Result<bool> {
    for w in pencils {
        let mut spec = w.spec.pad_marked(curve);
        for &j in marked {
            spec.marked_div[j] += 1;
        }
        if section_space(curve, &spec)?.h0() >= 1 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// From `K_{n,1}(L) = 0` with `L` nonspecial, `K_{n+e,1}(L + E) = 0`.
pub fn extend_vanishing(curve: &PlaneCurve, l: &BundleSpec, n: usize, e: &[usize], lines: &[Vec<usize>], opts: &KoszulOptions) -> Result<Verdict> {
    if !expected_h0(curve, l).is_nonspecial() {
        return Err(Error::Precondition(format!("{l} is not known to be nonspecial: nonspecial required")));
    }
    let le = add_divisor(curve, l, e, lines)?;
    let base = KoszulSetup::new(curve, l, 1, opts.target)?;
    let before = observe(&base, n, 1, "L", opts)?;
    if before.dim != 0 {
        return Err(Error::Precondition(format!("K_{{{n},1}}(L) = {} is not zero", before.dim)));
    }
    let shifted = n + e.len();
    let after = if e.is_empty() {
        Observation { cell: cell(shifted, 1, "L+E"), dim: before.dim }
    } else {
        let setup = KoszulSetup::new(curve, &le, 1, opts.target)?;
        observe(&setup, shifted, 1, "L+E", opts)?
    };
    let certs = vec![format!("L = {l}, E = {e:?}, L + E = {le}")];
    Ok(Verdict::judge(
        "vanishing-propagation",
        &le.to_string(),
        vec![expect(shifted, "L+E", Pattern::Zero)],
        vec![before, after],
        Basis::Derived,
        certs,
    ))
}

/// A random propagation instance: `L = K_X + H - R` for a marked line
/// section `H` and `R` a proper subset of it, `n` the least index with
/// `K_{n,1}(L) = 0`, and `E` of degree `1 ≤ e ≤ 3` taken either from `R` or from a
/// second marked line section.
pub fn propagation_instance(curve: &PlaneCurve, seed: u64, opts: &KoszulOptions) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = curve.degree() as usize;
    let pts = find_rational_points(curve, 120, seed).points;
    let mut sections = rational_line_sections(curve, &pts, 40);
    sections.retain(|s| !curve.nodes().iter().any(|n| s.points.contains(&n.point)));
    sections.shuffle(&mut rng);
    let second = sections
        .iter()
        .skip(1)
        .find(|s| sections.first().is_some_and(|f| s.points.iter().all(|p| !f.points.contains(p))))
        .ok_or_else(|| Error::SearchExhausted("two disjoint rational line sections".into()))?;
    let (c1, first_idx) = mark_points(curve, &sections[0].points)?;
    let (c, second_idx) = mark_points(&c1, &second.points)?;
    let r = rng.gen_range(0..d);
    let mut first = first_idx.clone();
    first.shuffle(&mut rng);
    let removed = &first[..r];
    let mut l = canonical_bundle(&c, &[])?.pad_marked(&c);
    l.m += 1;
    for &j in removed {
        l.marked_div[j] = 1;
    }
    let setup = KoszulSetup::new(&c, &l, 1, opts.target)?;
    let mut n = 1;
    while koszul_dim(&setup, n, 1, opts)?.dim != 0 {
        n += 1;
    }
    let e_deg = rng.gen_range(1..=3usize);
    let e: Vec<usize> = if e_deg <= r && rng.gen_bool(0.5) {
        removed[..e_deg].to_vec()
    } else {
        let mut s = second_idx.clone();
        s.shuffle(&mut rng);
        s[..e_deg].to_vec()
    };
    extend_vanishing(&c, &l, n, &e, &[second_idx], opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub p: usize,
    pub genus: usize,
    pub pa: usize,
    /// `[K_X, K_X + x_0 + y_0, ω_Y]`.
    pub bundles: [String; 3],
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub middle_column: bool,
}

impl ChainReport {
    pub fn monotone(&self) -> bool {
        self.a <= self.b && self.b <= self.c
    }

    pub fn verdict(&self) -> Verdict {
        let p = self.p;
        let labels = ["K_X", "K_X+x0+y0", "w_Y"];
        let computed = [self.a, self.b, self.c].iter().zip(labels).map(|(&dim, l)| Observation { cell: cell(p, 1, l), dim }).collect();
        let expected = vec![expect(p, labels[1], Pattern::AtLeast(self.a)), expect(p, labels[2], Pattern::AtLeast(self.b))];
        Verdict::judge("gluing-chain", &self.bundles[2], expected, computed, Basis::Derived, vec![format!("p_a(Y) = {}", self.pa)])
    }
}

/// `K_{p,1}(X, K_X) ⊂ K_{p,1}(X, K_X + x_0 + y_0) ⊂ K_{p,1}(Y, ω_Y)` with `Y`
/// keeping node `kept`. `p` defaults to `k` when `p_a(Y) = 2k + 1`.
pub fn glue_inclusion_check(curve: &PlaneCurve, kept: usize, p: Option<usize>, seed: u64, opts: &KoszulOptions) -> Result<ChainReport> {
    if kept >= curve.delta() {
        return Err(Error::Precondition(format!("node {kept} out of range")));
    }
    let g = curve.genus();
    let pa = g + 1;
    let middle_column = pa % 2 == 1;
    let p = match p {
        Some(p) => p,
        None if middle_column => (pa - 1) / 2,
        None => return Err(Error::Precondition(format!("p_a(Y) = {pa} is not of the form 2k + 1; give p explicitly"))),
    };
    let candidates = find_rational_points(curve, 200, seed).points;
    let pair = canonical_plus_node_pair(curve, kept, &candidates)?;
    let c = &pair.curve;
    let kx = canonical_bundle(c, &[])?;
    let wy = canonical_bundle(c, &[kept])?;
    let dims = [&kx, &pair.bundle, &wy]
        .iter()
        .map(|l| {
            let setup = KoszulSetup::new(c, l, 1, opts.target)?;
            Ok(koszul_dim(&setup, p, 1, opts)?.dim)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(ChainReport {
        p,
        genus: g,
        pa,
        bundles: [kx.to_string(), pair.bundle.to_string(), wy.to_string()],
        a: dims[0],
        b: dims[1],
        c: dims[2],
        middle_column,
    })
}

/// Index `2(2p - 1)(k - 1) - (k + 1)` for `ω^p` at genus `2k - 1`.
pub fn pluricanonical_index(k: usize, power: usize) -> usize {
    2 * (2 * power - 1) * (k - 1) - (k + 1)
}

/// `K_{i,1}(ω^p)` at genus `2k - 1` against the gonality certificate: zero
/// when the gonality exceeds `k`, nonzero when a `g^1_k` is known.
pub fn pluricanonical_check(curve: &PlaneCurve, power: usize, cert: &GonalityCertificate, opts: &KoszulOptions) -> Result<Verdict> {
    let g = curve.genus();
    if g < 3 || g.is_multiple_of(2) {
        return Err(Error::Precondition(format!("genus {g} is not of the form 2k - 1 with k ≥ 2")));
    }
    if power < 2 {
        return Err(Error::Precondition("power must be at least 2".into()));
    }
    let k = g.div_ceil(2);
    let idx = pluricanonical_index(k, power);
    let l = canonical_bundle(curve, &[])?.power(power as u32);
    let label = format!("w^{power}");
    let setup = KoszulSetup::new(curve, &l, 1, opts.target)?;
    let computed = vec![observe(&setup, idx, 1, &label, opts)?];
    let mut certs = vec![cert.summary(), format!("h0(w^{power}) = {}", setup.n())];
    let pattern = if cert.lo > k {
        certs.push(format!("no g^1_{k}: vanishing expected"));
        Pattern::Zero
    } else if cert.hi <= k {
        certs.push(format!("a g^1_{k} exists: nonvanishing expected"));
        Pattern::Nonzero
    } else {
        return Ok(Verdict::inconclusive("pluricanonical", &l.to_string(), computed, certs));
    };
    Ok(Verdict::judge("pluricanonical", &l.to_string(), vec![expect(idx, &label, pattern)], computed, Basis::Certified, certs))
}

/// At `g = 2k + 1`: a pencil witness of degree `k + 1` forces `K_{k,1}(K_X) ≠ 0`.
pub fn hrv_consistency(curve: &PlaneCurve, cert: &GonalityCertificate, opts: &KoszulOptions) -> Result<Verdict> {
    let g = curve.genus();
    if g < 3 || g.is_multiple_of(2) {
        return Err(Error::Precondition(format!("genus {g} is not odd")));
    }
    let k = (g - 1) / 2;
    let kc = canonical_bundle(curve, &[])?;
    let setup = KoszulSetup::new(curve, &kc, 1, opts.target)?;
    let computed = vec![observe(&setup, k, 1, "K_X", opts)?];
    let witness = cert.pencils.iter().filter(|w| w.degree <= k + 1).min_by_key(|w| w.degree);
    let mut certs = vec![cert.summary()];
    let expected = match witness {
        Some(w) => {
            certs.push(format!("pencil {} of degree {}", w.bundle, w.degree));
            vec![expect(k, "K_X", Pattern::Nonzero)]
        }
        None => {
            certs.push(format!("no pencil of degree ≤ {} found", k + 1));
            Vec::new()
        }
    };
    Ok(Verdict::judge("hrv-consistency", &kc.to_string(), expected, computed, Basis::Certified, certs))
}
