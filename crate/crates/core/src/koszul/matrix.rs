//! Assembly of Koszul differentials.

use crate::error::{Error, Result};
use crate::linalg::sparse::SparseMat;
use crate::plane::tensor::MultTensor;

use super::exterior::{binom, subset_rank, subsets};

/// Exact entry count of the differential `∧^p V ⊗ B -> ∧^{p-1} V ⊗ C`.
pub fn differential_nnz(t: &MultTensor, p: usize) -> u64 {
    let n = t.dims.0;
    if p == 0 || p > n {
        return 0;
    }
    let per = binom(n - 1, p - 1);
    let total: u64 = (0..t.dims.0).flat_map(|i| (0..t.dims.1).map(move |j| (i, j))).map(|(i, j)| t.get(i, j).len() as u64).sum();
    per.saturating_mul(total)
}

/// The differential `e_S ⊗ b ↦ Σ_pos (-1)^pos e_{S \ s_pos} ⊗ T(v_{s_pos}, b)`
/// from `∧^p V ⊗ B` to `∧^{p-1} V ⊗ C`, with `T : V ⊗ B -> C` and `n = dim V`.
/// Column `rank(S) · dim B + j`, row `rank(S') · dim C + k`.
pub fn koszul_matrix(t: &MultTensor, n: usize, p: usize) -> Result<SparseMat> {
    let (hv, hb, hc) = t.dims;
    if hv != n {
        return Err(Error::DimensionMismatch(format!("tensor has first factor of dimension {hv}, expected {n}")));
    }
    let f_cols = binom(n, p) as usize * hb;
    let f_rows = if p == 0 { 0 } else { binom(n, p - 1) as usize * hc };
    let ctx_p = t.ctx();
    let mut columns: Vec<Vec<(u32, u32)>> = Vec::with_capacity(f_cols);
    if p == 0 {
        columns.resize(f_cols, Vec::new());
        return Ok(SparseMat::from_columns(ctx_p, f_rows, columns));
    }
    if f_rows > u32::MAX as usize {
        return Err(Error::DimensionMismatch("differential too large to index".into()));
    }
    let mut face = Vec::with_capacity(p - 1);
    for s in subsets(n, p) {
        let faces: Vec<(usize, u64, bool)> = (0..p)
            .map(|pos| {
                face.clear();
                face.extend(s.iter().enumerate().filter(|&(k, _)| k != pos).map(|(_, &x)| x));
                (s[pos], subset_rank(&face), pos % 2 == 1)
            })
            .collect();
        for j in 0..hb {
            let mut col = Vec::new();
            for &(i, r, neg) in &faces {
                let base = r as usize * hc;
                for &(k, c) in t.get(i, j) {
                    let v = if neg { ctx_p.neg(c) } else { c };
                    col.push(((base + k as usize) as u32, v));
                }
            }
            columns.push(col);
        }
    }
    Ok(SparseMat::from_columns(ctx_p, f_rows, columns))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldCtx;
    use crate::linalg::sparse::{sparse_rank, Strategy};

    fn ctx() -> FieldCtx {
        FieldCtx::new(10007).unwrap()
    }

    /// `V ⊗ k -> V`, the identity pairing.
    fn identity_tensor(n: usize) -> MultTensor {
        let dense = (0..n)
            .map(|i| {
                let mut v = vec![0u32; n];
                v[i] = 1;
                v
            })
            .collect();
        MultTensor::from_dense_entries(ctx(), (n, 1, n), dense)
    }

    #[test]
    fn classical_koszul_complex_is_exact() {
        let n = 6;
        let t = identity_tensor(n);
        for p in 1..=n {
            let m = koszul_matrix(&t, n, p).unwrap();
            assert_eq!((m.rows(), m.cols()), ((binom(n, p - 1) as usize) * n, binom(n, p) as usize));
            assert_eq!(m.nnz() as u64, differential_nnz(&t, p));
            assert_eq!(sparse_rank(&m, Strategy::Markowitz) as u64, binom(n, p));
        }
    }

    #[test]
    fn consecutive_differentials_compose_to_zero() {
        // ∧^p V ⊗ k -> ∧^{p-1} V ⊗ V -> ∧^{p-2} V ⊗ S^2 V, the symmetric square
        let n = 5;
        let f = ctx();
        let sym_index = |i: usize, j: usize| {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            b * (b + 1) / 2 + a
        };
        let hs = n * (n + 1) / 2;
        let dense = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let mut v = vec![0u32; hs];
                v[sym_index(i, j)] = 1;
                v
            })
            .collect();
        let t2 = MultTensor::from_dense_entries(f, (n, n, hs), dense);
        let t1 = identity_tensor(n);
        for p in 2..=n {
            let d_in = koszul_matrix(&t1, n, p).unwrap().to_dense();
            let d_out = koszul_matrix(&t2, n, p - 1).unwrap().to_dense();
            assert!(d_out.mul(&d_in).is_zero(), "p = {p}");
        }
    }

    #[test]
    fn transposition_of_basis_preserves_rank() {
        // swap v_0 and v_1 in a random tensor: the new matrix has the same rank
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let f = ctx();
        let (n, hb, hc) = (5, 3, 7);
        let dense: Vec<Vec<u32>> =
            (0..n * hb).map(|_| (0..hc).map(|_| if rng.gen_bool(0.4) { rng.gen_range(0..f.p()) } else { 0 }).collect()).collect();
        let mut swapped = dense.clone();
        for j in 0..hb {
            swapped.swap(j, hb + j);
        }
        let a = MultTensor::from_dense_entries(f, (n, hb, hc), dense);
        let b = MultTensor::from_dense_entries(f, (n, hb, hc), swapped);
        for p in 1..=n {
            let ra = sparse_rank(&koszul_matrix(&a, n, p).unwrap(), Strategy::Markowitz);
            let rb = sparse_rank(&koszul_matrix(&b, n, p).unwrap(), Strategy::Markowitz);
            assert_eq!(ra, rb);
        }
    }
}
