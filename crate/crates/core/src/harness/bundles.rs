//! Representable bundles built from rational line sections.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::plane::bundle::{canonical_bundle, BundleSpec};
use crate::plane::curve::{PlaneCurve, Point};
use crate::plane::points::{find_rational_points, node_line_section, rational_line_sections, LineSection};

/// A curve with extra marked points and a bundle on it.
#[derive(Clone, Debug)]
pub struct Marked {
    pub curve: PlaneCurve,
    pub bundle: BundleSpec,
    /// Marked indices of the points a construction added or reused, in order.
    pub indices: Vec<usize>,
}

/// Marks every point not yet marked and returns all their indices.
pub fn mark_points(curve: &PlaneCurve, pts: &[Point]) -> Result<(PlaneCurve, Vec<usize>)> {
    let fresh: Vec<Point> = pts.iter().copied().filter(|&p| curve.marked_index(p).is_none()).collect();
    let c = curve.with_marked(&fresh)?;
    let idx = pts.iter().map(|&p| c.marked_index(p).expect("just marked")).collect();
    Ok((c, idx))
}

/// `K_X + x + y + z` for three points `xyz` (positions in `section.points`) of
/// a transverse rational line section: adjoint forms of degree `d - 2` vanishing
/// at the other `d - 3` points of the line.
pub fn canonical_plus_collinear(curve: &PlaneCurve, section: &LineSection, xyz: [usize; 3]) -> Result<Marked> {
    let d = curve.degree() as usize;
    if section.points.len() != d || xyz.iter().any(|&i| i >= d) || xyz[0] == xyz[1] || xyz[1] == xyz[2] || xyz[0] == xyz[2] {
        return Err(Error::Precondition("three distinct points of a full line section are required".into()));
    }
    if curve.nodes().iter().any(|n| section.points.contains(&n.point)) {
        return Err(Error::Precondition("the line passes through a node".into()));
    }
    let k = canonical_bundle(curve, &[])?;
    let (c, idx) = mark_points(curve, &section.points)?;
    let mut spec = k.pad_marked(&c);
    spec.m += 1;
    for (pos, &j) in idx.iter().enumerate() {
        if !xyz.contains(&pos) {
            spec.marked_div[j] += 1;
        }
    }
    Ok(Marked { curve: c, bundle: spec, indices: xyz.iter().map(|&p| idx[p]).collect() })
}

/// `K_X + x_0 + y_0` over the node `node`: adjoint forms of degree `d - 2`
/// through every node, vanishing at the residual points of a line through it.
pub fn canonical_plus_node_pair(curve: &PlaneCurve, node: usize, candidates: &[Point]) -> Result<Marked> {
    let section = node_line_section(curve, node, candidates)
        .ok_or_else(|| Error::SearchExhausted(format!("no rational line through node {node} with split residual")))?;
    let k = canonical_bundle(curve, &[])?;
    let (c, idx) = mark_points(curve, &section.points)?;
    let mut spec = k.pad_marked(&c);
    spec.m += 1;
    for &j in &idx {
        spec.marked_div[j] += 1;
    }
    Ok(Marked { curve: c, bundle: spec, indices: idx })
}

/// `L + E` for `E = Σ e_j P_j` over marked indices. Either every point of `E`
/// is subtracted in `L` and the multiplicities drop, or the points of `E` are
/// distinct and lie on one of `lines` (each a full marked line section, given
/// by marked indices), and `L + E = L + line - (line - E)`.
pub fn add_divisor(curve: &PlaneCurve, l: &BundleSpec, e: &[usize], lines: &[Vec<usize>]) -> Result<BundleSpec> {
    let mut counts = vec![0u32; curve.marked().len()];
    for &j in e {
        *counts.get_mut(j).ok_or_else(|| Error::Precondition(format!("marked index {j} out of range")))? += 1;
    }
    if counts.iter().zip(&l.marked_div).all(|(&c, &m)| c <= m) {
        let mut s = l.clone();
        for (m, c) in s.marked_div.iter_mut().zip(&counts) {
            *m -= c;
        }
        return Ok(s);
    }
    let d = curve.degree() as usize;
    if counts.iter().all(|&c| c <= 1) {
        if let Some(line) = lines.iter().find(|line| line.len() == d && e.iter().all(|j| line.contains(j))) {
            let mut s = l.clone();
            s.m += 1;
            for &j in line {
                if counts[j] == 0 {
                    s.marked_div[j] += 1;
                }
            }
            return Ok(s);
        }
    }
    Err(Error::Precondition(format!("E = {e:?} is not representable on {l}")))
}

/// Up to `count` collinear triples, one per line section, chosen by `seed`.
pub fn collinear_triples(curve: &PlaneCurve, count: usize, seed: u64) -> Vec<(LineSection, [usize; 3])> {
    let d = curve.degree() as usize;
    if d < 3 {
        return Vec::new();
    }
    let pts = find_rational_points(curve, 40 + 8 * count, seed).points;
    let avoid_nodes = |s: &LineSection| !curve.nodes().iter().any(|n| s.points.contains(&n.point));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rational_line_sections(curve, &pts, 4 * count)
        .into_iter()
        .filter(avoid_nodes)
        .take(count)
        .map(|s| {
            let mut pos: Vec<usize> = (0..d).collect();
            pos.shuffle(&mut rng);
            let mut t = [pos[0], pos[1], pos[2]];
            t.sort_unstable();
            (s, t)
        })
        .collect()
}
