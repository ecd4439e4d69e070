//! Integer plane models with prescribed split nodes.
//!
//! Each node `P` comes with a rational direction `D`. Requiring `F` to be
//! singular at `P` and the restriction `F(P + tD)` to vanish to order three
//! makes `D` a root of the tangent cone, so both tangents are rational and the
//! node is split modulo every prime that keeps it ordinary.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{Exp, FieldCtx, HomogPoly, MonomialBasis};
use crate::error::{Error, Result};
use crate::plane::bundle::canonical_bundle;
use crate::plane::curve::PlaneCurve;
use crate::plane::sections::section_space;

/// Integer coefficients of `t^0 .. t^max` in `Π_v (P_v + t D_v)^{e_v}`.
fn line_taylor(e: Exp, p: [i64; 3], d: [i64; 3], max: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    for v in 0..3 {
        for _ in 0..e[v] {
            let mut next = vec![BigInt::zero(); acc.len() + 1];
            for (k, c) in acc.iter().enumerate() {
                next[k] += c * p[v];
                next[k + 1] += c * d[v];
            }
            acc = next;
        }
    }
    acc.resize(max + 1, BigInt::zero());
    acc.truncate(max + 1);
    acc
}

/// Linear conditions on degree-`deg` forms: singular at each node, and the
/// prescribed direction is a tangent.
pub fn node_conditions(deg: u32, nodes: &[[i64; 3]], dirs: &[[i64; 3]]) -> Vec<Vec<BigInt>> {
    let basis = MonomialBasis::new(deg);
    let mut rows = Vec::new();
    for (p, d) in nodes.iter().zip(dirs) {
        for v in 0..3 {
            rows.push(
                basis
                    .exps()
                    .iter()
                    .map(|&e| {
                        if e[v] == 0 {
                            return BigInt::zero();
                        }
                        let mut r = BigInt::from(e[v]);
                        for w in 0..3 {
                            let k = if w == v { e[w] - 1 } else { e[w] };
                            r *= BigInt::from(p[w]).pow(k);
                        }
                        r
                    })
                    .collect(),
            );
        }
        rows.push(basis.exps().iter().map(|&e| line_taylor(e, *p, *d, 2)[2].clone()).collect());
    }
    rows
}

/// Primitive integer basis of the rational kernel of `rows`.
pub fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(found) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, found);
        let inv = m[rank][c].recip();
        for v in m[rank].iter_mut() {
            *v *= &inv;
        }
        let piv = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let s = row[c].clone();
            for (x, y) in row.iter_mut().zip(&piv) {
                *x -= &s * y;
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigRational::zero(); ncols];
            v[fc] = BigRational::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -row[fc].clone();
            }
            let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            primitive(v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect())
        })
        .collect()
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// Reduction of integer coefficients modulo the field prime.
pub fn reduce_poly(ctx: FieldCtx, degree: u32, coeffs: &[(Exp, BigInt)]) -> Result<HomogPoly> {
    let p = BigInt::from(ctx.p());
    let terms = coeffs.iter().map(|(e, c)| {
        let r = c.mod_floor(&p);
        (*e, u32::try_from(&r).expect("residue below p"))
    });
    HomogPoly::new(ctx, degree, terms)
}

pub fn reduce_point(ctx: FieldCtx, pt: [i64; 3]) -> [u32; 3] {
    pt.map(|c| ctx.reduce_i64(c))
}

/// The integer model for one seed: random directions and a random small
/// combination of the integer kernel, made primitive.
pub fn candidate(degree: u32, nodes: &[[i64; 3]], seed: u64) -> Vec<(Exp, BigInt)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs: Vec<[i64; 3]> = nodes
        .iter()
        .map(|p| loop {
            let d = [rng.gen_range(-3..=3), rng.gen_range(-3..=3), 0];
            // direction must not be the node itself
            let cross = [p[1] * d[2] - p[2] * d[1], p[2] * d[0] - p[0] * d[2], p[0] * d[1] - p[1] * d[0]];
            if cross.iter().any(|&c| c != 0) {
                break d;
            }
        })
        .collect();
    let basis = MonomialBasis::new(degree);
    let kernel = integer_kernel(&node_conditions(degree, nodes, &dirs), basis.len());
    let mut coeffs = vec![BigInt::zero(); basis.len()];
    for v in &kernel {
        let c: i64 = rng.gen_range(-4..=4);
        for (x, y) in coeffs.iter_mut().zip(v) {
            *x += y * c;
        }
    }
    let coeffs = primitive(coeffs);
    basis.exps().iter().copied().zip(coeffs).filter(|(_, c)| !c.is_zero()).collect()
}

/// Validates an integer model at a prime, including the canonical
/// Riemann-Roch audits for `K`, `K^2`, `K^3`.
pub fn check_at_prime(degree: u32, coeffs: &[(Exp, BigInt)], nodes: &[[i64; 3]], ctx: FieldCtx) -> Result<PlaneCurve> {
    let f = reduce_poly(ctx, degree, coeffs)?;
    if f.degree() != degree || f.is_zero() {
        return Err(Error::InvalidModel("model vanishes modulo p".into()));
    }
    let pts: Vec<[u32; 3]> = nodes.iter().map(|&p| reduce_point(ctx, p)).collect();
    let curve = PlaneCurve::new(f, &pts, &[])?;
    if degree >= 4 {
        let k = canonical_bundle(&curve, &[])?;
        for q in 1..=3 {
            section_space(&curve, &k.power(q))?;
        }
    }
    Ok(curve)
}

/// First seed from `base_seed` whose model validates at every prime.
pub fn search(degree: u32, nodes: &[[i64; 3]], base_seed: u64, primes: &[u32], attempts: u64) -> Result<(u64, Vec<(Exp, BigInt)>)> {
    for seed in base_seed..base_seed + attempts {
        let coeffs = candidate(degree, nodes, seed);
        let ok = primes.iter().all(|&p| FieldCtx::new(p as u64).and_then(|ctx| check_at_prime(degree, &coeffs, nodes, ctx)).is_ok());
        if ok {
            return Ok((seed, coeffs));
        }
    }
    Err(Error::SearchExhausted(format!("no valid degree-{degree} model with {} nodes in {attempts} seeds", nodes.len())))
}

pub fn max_abs_coeff(coeffs: &[(Exp, BigInt)]) -> BigInt {
    coeffs.iter().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_satisfies_conditions() {
        let nodes = [[0, 0, 1], [1, 0, 1]];
        let dirs = [[1, 2, 0], [-1, 1, 0]];
        let rows = node_conditions(5, &nodes, &dirs);
        let ker = integer_kernel(&rows, 21);
        assert_eq!(ker.len(), 21 - 8);
        for v in &ker {
            for r in &rows {
                let dot: BigInt = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn prescribed_nodes_split_at_several_primes() {
        let nodes = [[0, 0, 1]];
        let (_, coeffs) = search(5, &nodes, 1, &[10007, 31513, 65521], 20).unwrap();
        for p in [10007u64, 31513, 65521] {
            let ctx = FieldCtx::new(p).unwrap();
            let c = check_at_prime(5, &coeffs, &nodes, ctx).unwrap();
            assert_eq!(c.genus(), 5);
        }
    }
}
