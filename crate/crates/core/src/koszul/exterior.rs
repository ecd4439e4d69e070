//! Colexicographic ranking of subsets, the index calculus of `∧^p V`.

use crate::error::{Error, Result};

/// `C(n, k)` as u64, saturating on overflow.
pub fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Colex rank `Σ C(s_i, i + 1)` of a strictly increasing subset.
pub fn subset_rank(s: &[usize]) -> u64 {
    s.iter().enumerate().map(|(i, &x)| binom(x, i + 1)).sum()
}

/// Checked rank: `s` must be a strictly increasing `p`-subset of `0..n`.
pub fn subset_rank_checked(s: &[usize], n: usize, p: usize) -> Result<u64> {
    if s.len() != p {
        return Err(Error::MalformedSubset(format!("{s:?} has size {}, expected {p}", s.len())));
    }
    if s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::MalformedSubset(format!("{s:?} is not strictly increasing")));
    }
    if s.last().is_some_and(|&x| x >= n) {
        return Err(Error::MalformedSubset(format!("{s:?} has an element outside 0..{n}")));
    }
    Ok(subset_rank(s))
}

/// Inverse of [`subset_rank`] on `p`-subsets of `0..n`.
pub fn subset_unrank(mut r: u64, n: usize, p: usize) -> Result<Vec<usize>> {
    if r >= binom(n, p) {
        return Err(Error::MalformedSubset(format!("rank {r} outside C({n},{p})")));
    }
    let mut out = vec![0usize; p];
    let mut hi = n;
    for i in (0..p).rev() {
        // largest x < hi with C(x, i+1) <= r
        let mut x = hi - 1;
        while binom(x, i + 1) > r {
            x -= 1;
        }
        out[i] = x;
        r -= binom(x, i + 1);
        hi = x;
    }
    Ok(out)
}

/// All `p`-subsets of `0..n` in colex order.
pub fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    let total = binom(n, p) as usize;
    let mut out = Vec::with_capacity(total);
    if p > n {
        return out;
    }
    let mut s: Vec<usize> = (0..p).collect();
    loop {
        out.push(s.clone());
        // colex successor: bump the first element that can move
        let mut i = 0;
        while i < p && (if i + 1 < p { s[i] + 1 == s[i + 1] } else { s[i] + 1 == n }) {
            i += 1;
        }
        if i == p {
            break;
        }
        s[i] += 1;
        for (j, v) in s.iter_mut().enumerate().take(i) {
            *v = j;
        }
    }
    out
}

/// Dimension bookkeeping for `∧^p` of an `n`-dimensional space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtIndex {
    pub n: usize,
    pub p: usize,
}

impl ExtIndex {
    pub fn len(&self) -> u64 {
        binom(self.n, self.p)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rank(&self, s: &[usize]) -> Result<u64> {
        subset_rank_checked(s, self.n, self.p)
    }

    pub fn unrank(&self, r: u64) -> Result<Vec<usize>> {
        subset_unrank(r, self.n, self.p)
    }
}
