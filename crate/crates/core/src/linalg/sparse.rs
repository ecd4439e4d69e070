//! Column-compressed sparse matrices and Markowitz elimination.

use std::collections::BTreeSet;
use std::io::{self, BufRead, Write};

use crate::arith::FieldCtx;
use crate::error::{Error, Result};

use super::dense::{dense_rank, DenseMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    /// Per column, `(row, value)` with strictly increasing rows and no zeros.
    columns: Vec<Vec<(u32, u32)>>,
}

impl SparseMat {
    pub fn zeros(ctx: FieldCtx, rows: usize, cols: usize) -> Self {
        SparseMat { ctx, rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Builds from unordered triplets; duplicate positions are summed.
    pub fn from_triplets(ctx: FieldCtx, rows: usize, cols: usize, trips: impl IntoIterator<Item = (usize, usize, u32)>) -> Self {
        let mut columns: Vec<Vec<(u32, u32)>> = vec![Vec::new(); cols];
        for (r, c, v) in trips {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            columns[c].push((r as u32, v % ctx.p()));
        }
        for col in columns.iter_mut() {
            normalize_column(ctx, col);
        }
        SparseMat { ctx, rows, cols, columns }
    }

    /// Builds from per-column entries, which are sorted and merged.
    pub fn from_columns(ctx: FieldCtx, rows: usize, mut columns: Vec<Vec<(u32, u32)>>) -> Self {
        for col in columns.iter_mut() {
            assert!(col.iter().all(|&(r, _)| (r as usize) < rows), "row index out of range");
            normalize_column(ctx, col);
        }
        SparseMat { ctx, rows, cols: columns.len(), columns }
    }

    pub fn from_dense(m: &DenseMat) -> Self {
        let trips = (0..m.rows()).flat_map(|r| (0..m.cols()).map(move |c| (r, c))).filter_map(|(r, c)| {
            let v = m.get(r, c);
            (v != 0).then_some((r, c, v))
        });
        Self::from_triplets(m.ctx(), m.rows(), m.cols(), trips)
    }

    pub fn to_dense(&self) -> DenseMat {
        let mut d = DenseMat::zeros(self.ctx, self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                d.set(r as usize, c, v);
            }
        }
        d
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn columns(&self) -> &[Vec<(u32, u32)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn transpose(&self) -> SparseMat {
        let mut cols: Vec<Vec<(u32, u32)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                cols[r as usize].push((c as u32, v));
            }
        }
        SparseMat { ctx: self.ctx, rows: self.cols, cols: self.rows, columns: cols }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        let f = self.ctx;
        let mut out = vec![0u32; self.rows];
        for (col, &x) in self.columns.iter().zip(v) {
            if x == 0 {
                continue;
            }
            for &(r, a) in col {
                out[r as usize] = f.mul_add(out[r as usize], a, x);
            }
        }
        Ok(out)
    }

    /// Writes "rows cols p", then "r c v" triples sorted by (c, r).
    pub fn dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{} {} {}", self.rows, self.cols, self.ctx.p())?;
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                writeln!(w, "{r} {c} {v}")?;
            }
        }
        Ok(())
    }

    pub fn load<R: BufRead>(r: R) -> Result<SparseMat> {
        let bad = |line: usize, msg: &str| Error::FixtureParse { line, msg: msg.to_string() };
        let mut lines = r.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| bad(1, "empty matrix dump"))?;
        let header = header.map_err(|e| bad(1, &e.to_string()))?;
        let h: Vec<u64> = header.split_whitespace().map(|t| t.parse().map_err(|_| bad(1, "bad header"))).collect::<Result<_>>()?;
        if h.len() != 3 {
            return Err(bad(1, "header must be: rows cols p"));
        }
        let ctx = FieldCtx::new(h[2])?;
        let (rows, cols) = (h[0] as usize, h[1] as usize);
        let mut trips = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(|e| bad(i + 1, &e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let t: Vec<u64> = line.split_whitespace().map(|t| t.parse().map_err(|_| bad(i + 1, "bad triple"))).collect::<Result<_>>()?;
            if t.len() != 3 || t[0] as usize >= rows || t[1] as usize >= cols {
                return Err(bad(i + 1, "triple out of range"));
            }
            trips.push((t[0] as usize, t[1] as usize, (t[2] % ctx.p() as u64) as u32));
        }
        Ok(SparseMat::from_triplets(ctx, rows, cols, trips))
    }
}

fn normalize_column(ctx: FieldCtx, col: &mut Vec<(u32, u32)>) {
    col.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u32, u32)> = Vec::with_capacity(col.len());
    for &(r, v) in col.iter() {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 = ctx.add(last.1, v),
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    *col = out;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Markowitz pivoting, densifying the remainder once fill passes the threshold.
    Markowitz,
    /// Densify immediately.
    Dense,
}

/// Live density above which sparse elimination hands over to the dense kernel.
pub const DENSE_SWITCH: f64 = 0.2;

/// Rank of a sparse matrix.
pub fn sparse_rank(m: &SparseMat, strategy: Strategy) -> usize {
    match strategy {
        Strategy::Dense => {
            let d = m.to_dense();
            super::dense::rank(&d)
        }
        Strategy::Markowitz => markowitz_rank(m.ctx, m.rows, m.columns.clone()),
    }
}

/// `dst - s * src` on sorted sparse vectors.
fn axpy(ctx: FieldCtx, dst: &[(u32, u32)], s: u32, src: &[(u32, u32)], out: &mut Vec<(u32, u32)>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    let ns = ctx.neg(s);
    while i < dst.len() || j < src.len() {
        let a = dst.get(i).map_or(u32::MAX, |e| e.0);
        let b = src.get(j).map_or(u32::MAX, |e| e.0);
        if a < b {
            out.push(dst[i]);
            i += 1;
        } else if b < a {
            out.push((b, ctx.mul(ns, src[j].1)));
            j += 1;
        } else {
            let v = ctx.mul_add(dst[i].1, ns, src[j].1);
            if v != 0 {
                out.push((a, v));
            }
            i += 1;
            j += 1;
        }
    }
}

fn lookup(v: &[(u32, u32)], coord: u32) -> Option<u32> {
    v.binary_search_by_key(&coord, |e| e.0).ok().map(|i| v[i].1)
}

/// Eliminates vectors (the matrix columns) coordinate by coordinate, always
/// taking the coordinate with the fewest live occurrences and the shortest
/// vector containing it. Ties break on index, so the run is deterministic.
fn markowitz_rank(ctx: FieldCtx, ncoords: usize, mut vecs: Vec<Vec<(u32, u32)>>) -> usize {
    let nv = vecs.len();
    let mut alive: Vec<bool> = vecs.iter().map(|v| !v.is_empty()).collect();
    let mut count = vec![0usize; ncoords];
    let mut occ: Vec<Vec<u32>> = vec![Vec::new(); ncoords];
    let mut nnz = 0usize;
    for (i, v) in vecs.iter().enumerate() {
        for &(c, _) in v {
            count[c as usize] += 1;
            occ[c as usize].push(i as u32);
        }
        nnz += v.len();
    }
    let mut queue: BTreeSet<(usize, u32)> = (0..ncoords).filter(|&c| count[c] > 0).map(|c| (count[c], c as u32)).collect();
    let mut live_vecs = alive.iter().filter(|&&a| a).count();
    let mut rank = 0usize;
    let mut scratch = Vec::new();

    let bump = |queue: &mut BTreeSet<(usize, u32)>, count: &mut [usize], c: u32, new: usize| {
        let old = count[c as usize];
        if old == new {
            return;
        }
        if old > 0 {
            queue.remove(&(old, c));
        }
        if new > 0 {
            queue.insert((new, c));
        }
        count[c as usize] = new;
    };

    while let Some(&(cnt, coord)) = queue.iter().next() {
        let live_coords = queue.len();
        if live_vecs > 64 && (nnz as f64) > DENSE_SWITCH * live_vecs as f64 * live_coords as f64 {
            break;
        }
        queue.remove(&(cnt, coord));
        let holders: Vec<u32> = {
            let list = &mut occ[coord as usize];
            list.sort_unstable();
            list.dedup();
            list.retain(|&i| alive[i as usize] && lookup(&vecs[i as usize], coord).is_some());
            list.clone()
        };
        debug_assert_eq!(holders.len(), cnt);
        count[coord as usize] = 0;
        let &piv = holders.iter().min_by_key(|&&i| (vecs[i as usize].len(), i)).unwrap();
        let pivot = std::mem::take(&mut vecs[piv as usize]);
        alive[piv as usize] = false;
        live_vecs -= 1;
        rank += 1;
        nnz -= pivot.len();
        for &(c, _) in &pivot {
            if c != coord {
                let n = count[c as usize] - 1;
                bump(&mut queue, &mut count, c, n);
            }
        }
        let pv = lookup(&pivot, coord).unwrap();
        let pinv = ctx.inv(pv);
        for &h in &holders {
            if h == piv {
                continue;
            }
            let hv = std::mem::take(&mut vecs[h as usize]);
            let s = ctx.mul(lookup(&hv, coord).unwrap(), pinv);
            axpy(ctx, &hv, s, &pivot, &mut scratch);
            // Count changes: merge old and new supports.
            let (mut i, mut j) = (0, 0);
            while i < hv.len() || j < scratch.len() {
                let a = hv.get(i).map_or(u32::MAX, |e| e.0);
                let b = scratch.get(j).map_or(u32::MAX, |e| e.0);
                if a == b {
                    i += 1;
                    j += 1;
                } else if a < b {
                    if a != coord {
                        let n = count[a as usize] - 1;
                        bump(&mut queue, &mut count, a, n);
                    }
                    i += 1;
                } else {
                    let n = count[b as usize] + 1;
                    bump(&mut queue, &mut count, b, n);
                    occ[b as usize].push(h);
                    j += 1;
                }
            }
            nnz = nnz - hv.len() + scratch.len();
            if scratch.is_empty() {
                alive[h as usize] = false;
                live_vecs -= 1;
            } else {
                vecs[h as usize] = scratch.clone();
            }
        }
        occ[coord as usize] = Vec::new();
    }

    if queue.is_empty() {
        return rank;
    }
    // Dense finish on the live block.
    let coords: Vec<u32> = {
        let mut c: Vec<u32> = queue.iter().map(|&(_, c)| c).collect();
        c.sort_unstable();
        c
    };
    let mut pos = vec![u32::MAX; ncoords];
    for (k, &c) in coords.iter().enumerate() {
        pos[c as usize] = k as u32;
    }
    let width = coords.len();
    let live: Vec<usize> = (0..nv).filter(|&i| alive[i]).collect();
    let mut data = vec![0u32; live.len() * width];
    for (r, &i) in live.iter().enumerate() {
        for &(c, v) in &vecs[i] {
            data[r * width + pos[c as usize] as usize] = v;
        }
    }
    drop(vecs);
    rank + dense_rank(ctx, live.len(), width, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::rank_kernel;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> FieldCtx {
        FieldCtx::new(10007).unwrap()
    }

    fn random_sparse(rng: &mut ChaCha8Rng, f: FieldCtx, r: usize, c: usize, density: f64) -> SparseMat {
        let mut trips = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if rng.gen_bool(density) {
                    trips.push((i, j, rng.gen_range(1..f.p())));
                }
            }
        }
        SparseMat::from_triplets(f, r, c, trips)
    }

    #[test]
    fn permutation_matrix_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut perm: Vec<usize> = (0..1000).collect();
        perm.shuffle(&mut rng);
        let m = SparseMat::from_triplets(ctx(), 1000, 1000, perm.iter().enumerate().map(|(i, &j)| (i, j, 1)));
        assert_eq!(sparse_rank(&m, Strategy::Markowitz), 1000);
    }

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let f = ctx();
        let m = SparseMat::from_triplets(f, 2, 2, [(0, 0, 5), (0, 0, f.p() - 5), (1, 0, 3), (1, 0, 4)]);
        assert_eq!(m.columns()[0], vec![(1, 7)]);
        assert_eq!(m.nnz(), 1);
    }

    #[test]
    fn markowitz_agrees_with_dense_on_mixed_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = ctx();
        for _ in 0..60 {
            let r = rng.gen_range(1..150);
            let c = rng.gen_range(1..150);
            let density = rng.gen_range(0.005..0.3);
            let m = random_sparse(&mut rng, f, r, c, density);
            let expect = rank_kernel(&m.to_dense()).rank;
            assert_eq!(sparse_rank(&m, Strategy::Markowitz), expect);
            assert_eq!(sparse_rank(&m, Strategy::Dense), expect);
        }
    }

    #[test]
    fn dump_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = random_sparse(&mut rng, ctx(), 13, 17, 0.2);
        let mut buf = Vec::new();
        m.dump(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("13 17 10007\n"));
        let back = SparseMat::load(&buf[..]).unwrap();
        assert_eq!(back, m);
    }
}
