//! Dense matrices over F_p: canonical RREF with kernels for small systems and
//! a blocked, delayed-reduction rank kernel for large ones.

use rayon::prelude::*;

use crate::arith::FieldCtx;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMat {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl DenseMat {
    pub fn zeros(ctx: FieldCtx, rows: usize, cols: usize) -> Self {
        DenseMat { ctx, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ctx: FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(ctx: FieldCtx, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "dense matrix data length");
        let p = ctx.p();
        let data = data.into_iter().map(|v| v % p).collect();
        DenseMat { ctx, rows, cols, data }
    }

    pub fn from_rows(ctx: FieldCtx, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self::from_vec(ctx, rows.len(), cols, data)
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

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.ctx.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> DenseMat {
        let mut t = Self::zeros(self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, o: &DenseMat) -> DenseMat {
        assert_eq!(self.cols, o.rows, "product shape");
        let f = self.ctx;
        let mut out = Self::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            let mut acc = vec![0u64; o.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for (j, x) in acc.iter_mut().enumerate() {
                    *x = (*x + a as u64 * o.get(k, j) as u64) % f.p() as u64;
                }
            }
            for (dst, &x) in out.data[i * o.cols..(i + 1) * o.cols].iter_mut().zip(&acc) {
                *dst = x as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let f = self.ctx;
        (0..self.rows).map(|r| self.row(r).iter().zip(v).fold(0u32, |acc, (&a, &b)| f.mul_add(acc, a, b))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }
}

/// Reduced row echelon form in place on a list of equal-length rows.
///
/// Zero rows are dropped; returns the pivot column of each surviving row.
pub fn rref_rows(ctx: FieldCtx, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let f = ctx;
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for c in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = f.inv(rows[rank][c]);
        for v in rows[rank][c..].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let (head, tail) = rows.split_at_mut(rank);
        let (piv, rest) = tail.split_first_mut().unwrap();
        for r in head.iter_mut().chain(rest.iter_mut()) {
            let a = r[c];
            if a == 0 {
                continue;
            }
            let s = f.neg(a);
            for (x, &y) in r[c..].iter_mut().zip(&piv[c..]) {
                *x = f.mul_add(*x, s, y);
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    pivots
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel_dim: usize,
    /// Kernel basis, one vector per free column in increasing order; each has
    /// a 1 at its free column and zeros at the other free columns.
    pub kernel_basis: Vec<Vec<u32>>,
    pub pivots: Vec<usize>,
}

/// Rank and canonical kernel basis of `M`, via its reduced row echelon form.
pub fn rank_kernel(m: &DenseMat) -> RankKernel {
    let f = m.ctx;
    let mut rows: Vec<Vec<u32>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
    let pivots = rref_rows(f, &mut rows);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let kernel_basis: Vec<Vec<u32>> = (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u32; m.cols];
            v[free] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = f.neg(row[free]);
            }
            v
        })
        .collect();
    RankKernel { rank: pivots.len(), kernel_dim: kernel_basis.len(), kernel_basis, pivots }
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(m: &DenseMat) -> Option<DenseMat> {
    let n = m.rows;
    assert_eq!(n, m.cols, "inverse of a non-square matrix");
    let mut rows: Vec<Vec<u32>> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.extend((0..n).map(|c| u32::from(c == r)));
            row
        })
        .collect();
    let pivots = rref_rows(m.ctx, &mut rows);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let data = rows.iter().flat_map(|r| r[n..].iter().copied()).collect();
    Some(DenseMat { ctx: m.ctx, rows: n, cols: n, data })
}

const PANEL: usize = 64;
const CHUNK: usize = 512;

/// Rank of a dense row-major `rows x cols` array, consuming it.
///
/// Right-looking elimination in panels of pivots that are mutually reduced, so
/// each remaining row is updated by one delayed-reduction pass per panel. Row
/// updates run on the rayon pool; the pivot order depends only on the input.
pub fn dense_rank(ctx: FieldCtx, rows: usize, cols: usize, mut data: Vec<u32>) -> usize {
    assert_eq!(data.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return 0;
    }
    let p = ctx.p();
    let pp = p as u64;
    let panel_cap = PANEL.min(ctx.lazy_terms().max(1));
    let mut width = cols;
    let mut live = rows;
    let mut rank = 0usize;
    let mut dead_cols: Vec<usize> = Vec::new();

    while live > 0 && width > 0 {
        // Assemble a panel from the leading live rows.
        let mut panel: Vec<Vec<u32>> = Vec::with_capacity(panel_cap);
        let mut pcols: Vec<usize> = Vec::with_capacity(panel_cap);
        let mut consumed = 0usize;
        while consumed < live && panel.len() < panel_cap {
            let mut r = data[consumed * width..(consumed + 1) * width].to_vec();
            consumed += 1;
            for (piv, &pc) in panel.iter().zip(&pcols) {
                let a = r[pc];
                if a != 0 {
                    let s = p - a;
                    for (x, &y) in r.iter_mut().zip(piv) {
                        *x = ((*x as u64 + s as u64 * y as u64) % pp) as u32;
                    }
                }
            }
            let Some(c) = r.iter().position(|&v| v != 0) else {
                continue;
            };
            let inv = ctx.inv(r[c]);
            for v in r.iter_mut() {
                *v = ctx.mul(*v, inv);
            }
            for piv in panel.iter_mut() {
                let a = piv[c];
                if a != 0 {
                    let s = p - a;
                    for (x, &y) in piv.iter_mut().zip(&r) {
                        *x = ((*x as u64 + s as u64 * y as u64) % pp) as u32;
                    }
                }
            }
            panel.push(r);
            pcols.push(c);
        }
        rank += panel.len();
        // Drop the consumed rows.
        data.drain(..consumed * width);
        live -= consumed;
        if live == 0 || panel.is_empty() {
            continue;
        }
        let panel = &panel;
        let pcols = &pcols;
        data.par_chunks_mut(width).for_each(|row| {
            let coef: Vec<(u32, usize)> = pcols.iter().enumerate().filter(|&(_k, &pc)| row[pc] != 0).map(|(k, &pc)| (p - row[pc], k)).collect();
            if coef.is_empty() {
                return;
            }
            let mut acc = [0u64; CHUNK];
            let mut start = 0;
            while start < width {
                let end = (start + CHUNK).min(width);
                let acc = &mut acc[..end - start];
                for (a, &v) in acc.iter_mut().zip(&row[start..end]) {
                    *a = v as u64;
                }
                for &(s, k) in &coef {
                    let s = s as u64;
                    for (a, &y) in acc.iter_mut().zip(&panel[k][start..end]) {
                        *a += s * y as u64;
                    }
                }
                for (v, &a) in row[start..end].iter_mut().zip(acc.iter()) {
                    *v = (a % pp) as u32;
                }
                start = end;
            }
        });
        dead_cols.extend_from_slice(pcols);
        // Pivot columns are now zero in every live row; squeeze them out.
        if dead_cols.len() * 4 >= width {
            let mut keep = vec![true; width];
            for &c in &dead_cols {
                keep[c] = false;
            }
            let new_width = width - dead_cols.len();
            let mut out = Vec::with_capacity(live * new_width);
            for row in data.chunks(width) {
                out.extend(row.iter().zip(&keep).filter(|(_, &k)| k).map(|(&v, _)| v));
            }
            data = out;
            width = new_width;
            dead_cols.clear();
        }
    }
    rank
}

/// Rank of a [`DenseMat`] through the blocked kernel.
pub fn rank(m: &DenseMat) -> usize {
    if m.rows >= m.cols {
        dense_rank(m.ctx, m.rows, m.cols, m.data.clone())
    } else {
        let t = m.transpose();
        dense_rank(t.ctx, t.rows, t.cols, t.data)
    }
}
