//! Koszul cohomology dimensions from differential ranks.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sparse::{sparse_rank, SparseMat, Strategy};
use crate::plane::bundle::BundleSpec;
use crate::plane::curve::PlaneCurve;
use crate::plane::sections::{section_space, SectionSpace};
use crate::plane::tensor::{mult_tensor_between, MultTensor, TargetBasis};

use super::exterior::binom;
use super::matrix::{differential_nnz, koszul_matrix};

/// Default ceiling on assembled sparse entries per cell.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

#[derive(Clone, Copy, Debug)]
pub struct KoszulOptions {
    pub budget: u64,
    pub force: bool,
    pub strategy: Strategy,
    pub target: TargetBasis,
    /// Random probes of `d ∘ d = 0` per cell.
    pub probes: usize,
    pub seed: u64,
}

impl Default for KoszulOptions {
    fn default() -> Self {
        KoszulOptions { budget: DEFAULT_BUDGET, force: false, strategy: Strategy::Markowitz, target: TargetBasis::Adapted, probes: 20, seed: 0 }
    }
}

/// Section spaces of `L^0 .. L^{max_q + 1}` and the tensors
/// `T_q : H0(L) x H0(L^q) -> H0(L^{q+1})` for `q ≤ max_q`.
pub struct KoszulSetup {
    curve: PlaneCurve,
    bundle: BundleSpec,
    spaces: Vec<SectionSpace>,
    tensors: Vec<MultTensor>,
}

impl KoszulSetup {
    pub fn new(curve: &PlaneCurve, bundle: &BundleSpec, max_q: u32, target: TargetBasis) -> Result<Self> {
        bundle.validate(curve)?;
        let spaces = (0..=max_q + 1).map(|q| section_space(curve, &bundle.power(q))).collect::<Result<Vec<_>>>()?;
        let tensors =
            (0..=max_q as usize).map(|q| mult_tensor_between(curve, &spaces[1], &spaces[q], &spaces[q + 1], target)).collect::<Result<Vec<_>>>()?;
        Ok(KoszulSetup { curve: curve.clone(), bundle: bundle.clone(), spaces, tensors })
    }

    pub fn curve(&self) -> &PlaneCurve {
        &self.curve
    }

    pub fn bundle(&self) -> &BundleSpec {
        &self.bundle
    }

    /// `h0(L)`.
    pub fn n(&self) -> usize {
        self.spaces[1].h0()
    }

    pub fn h0(&self, q: u32) -> usize {
        self.spaces[q as usize].h0()
    }

    pub fn max_q(&self) -> u32 {
        self.tensors.len() as u32 - 1
    }

    pub fn tensor(&self, q: u32) -> &MultTensor {
        &self.tensors[q as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulReport {
    pub bundle: String,
    pub p: usize,
    pub q: u32,
    pub prime: u32,
    /// `[∧^{p+1} ⊗ H0(L^{q-1}), ∧^p ⊗ H0(L^q), ∧^{p-1} ⊗ H0(L^{q+1})]`.
    pub dims: [u64; 3],
    pub rank_in: u64,
    pub rank_out: u64,
    pub dim: u64,
    /// Shape of the outgoing differential.
    pub rows: u64,
    pub cols: u64,
    pub ms: u64,
}

impl KoszulReport {
    pub fn ker_out(&self) -> u64 {
        self.dims[1] - self.rank_out
    }
}

fn budget_check(t: &MultTensor, p: usize, rows: u64, cols: u64, opts: &KoszulOptions) -> Result<()> {
    let entries = differential_nnz(t, p);
    if !opts.force && entries > opts.budget {
        return Err(Error::BudgetExceeded { rows: rows as usize, cols: cols as usize, entries, budget: opts.budget });
    }
    Ok(())
}

/// Checks `d_out ∘ d_in = 0` on random vectors. The in-map lands in the
/// basis of `T_{q-1}`'s target, the out-map reads echelon coordinates.
fn probe_composition(d_in: &SparseMat, d_out: &SparseMat, t_in: &MultTensor, h_q: usize, probes: usize, seed: u64) -> Result<()> {
    let f = d_in.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..probes {
        let x: Vec<u32> = (0..d_in.cols()).map(|_| rng.gen_range(0..f.p())).collect();
        let mut y = d_in.mul_vec(&x)?;
        if t_in.basis_change().is_some() {
            for block in y.chunks_mut(h_q) {
                let e = t_in.to_echelon(block);
                block.copy_from_slice(&e);
            }
        }
        let z = d_out.mul_vec(&y)?;
        if z.iter().any(|&c| c != 0) {
            return Err(Error::Consistency("consecutive Koszul differentials do not compose to zero".into()));
        }
    }
    Ok(())
}

/// `dim K_{p,q}(X, L)` over the working prime.
pub fn koszul_dim(setup: &KoszulSetup, p: usize, q: u32, opts: &KoszulOptions) -> Result<KoszulReport> {
    if q > setup.max_q() {
        return Err(Error::Precondition(format!("setup covers q ≤ {}, asked for q = {q}", setup.max_q())));
    }
    let start = Instant::now();
    let n = setup.n();
    let h_prev = if q == 0 { 0 } else { setup.h0(q - 1) as u64 };
    let h_q = setup.h0(q) as u64;
    let h_next = setup.h0(q + 1) as u64;
    let dims =
        [binom(n, p + 1).saturating_mul(h_prev), binom(n, p).saturating_mul(h_q), if p == 0 { 0 } else { binom(n, p - 1).saturating_mul(h_next) }];

    let out_t = setup.tensor(q);
    let d_out = if p >= 1 && dims[1] > 0 {
        budget_check(out_t, p, dims[2], dims[1], opts)?;
        Some(koszul_matrix(out_t, n, p)?)
    } else {
        None
    };
    let d_in = if q >= 1 && dims[0] > 0 && dims[1] > 0 {
        let t = setup.tensor(q - 1);
        budget_check(t, p + 1, dims[1], dims[0], opts)?;
        Some(koszul_matrix(t, n, p + 1)?)
    } else {
        None
    };
    if let (Some(a), Some(b)) = (&d_in, &d_out) {
        let seed = opts.seed ^ ((p as u64) << 32) ^ q as u64;
        probe_composition(a, b, setup.tensor(q - 1), h_q as usize, opts.probes, seed)?;
    }

    let (rank_out, rank_in) = rayon::join(
        || d_out.as_ref().map_or(0, |m| sparse_rank(m, opts.strategy) as u64),
        || d_in.as_ref().map_or(0, |m| sparse_rank(m, opts.strategy) as u64),
    );
    let ker_out = dims[1] - rank_out;
    if rank_in > ker_out {
        return Err(Error::Consistency(format!("rank of the incoming differential {rank_in} exceeds the kernel {ker_out}")));
    }
    Ok(KoszulReport {
        bundle: setup.bundle.to_string(),
        p,
        q,
        prime: setup.curve.ctx().p(),
        dims,
        rank_in,
        rank_out,
        dim: ker_out - rank_in,
        rows: dims[2],
        cols: dims[1],
        ms: start.elapsed().as_millis() as u64,
    })
}

/// One-shot [`koszul_dim`] building only the spaces it needs.
pub fn koszul_dim_of(curve: &PlaneCurve, l: &BundleSpec, p: usize, q: u32, opts: &KoszulOptions) -> Result<KoszulReport> {
    let setup = KoszulSetup::new(curve, l, q, opts.target)?;
    koszul_dim(&setup, p, q, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub bundle: String,
    pub prime: u32,
    pub ps: Vec<usize>,
    pub qs: Vec<u32>,
    /// `grid[qi][pi] = dim K_{ps[pi], qs[qi]}`.
    pub grid: Vec<Vec<u64>>,
    pub cells: Vec<KoszulReport>,
}

impl BettiTable {
    pub fn get(&self, p: usize, q: u32) -> Option<u64> {
        let pi = self.ps.iter().position(|&x| x == p)?;
        let qi = self.qs.iter().position(|&x| x == q)?;
        Some(self.grid[qi][pi])
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("p,q,dim\n");
        for c in &self.cells {
            s.push_str(&format!("{},{},{}\n", c.p, c.q, c.dim));
        }
        s
    }
}

/// Cells computed in parallel; the result does not depend on scheduling.
pub fn betti_table(setup: &KoszulSetup, ps: &[usize], qs: &[u32], opts: &KoszulOptions) -> Result<BettiTable> {
    let pairs: Vec<(usize, u32)> = qs.iter().flat_map(|&q| ps.iter().map(move |&p| (p, q))).collect();
    let cells = pairs.par_iter().map(|&(p, q)| koszul_dim(setup, p, q, opts)).collect::<Result<Vec<_>>>()?;
    let grid = cells.chunks(ps.len().max(1)).map(|row| row.iter().map(|c| c.dim).collect()).collect();
    Ok(BettiTable { bundle: setup.bundle.to_string(), prime: setup.curve.ctx().p(), ps: ps.to_vec(), qs: qs.to_vec(), grid, cells })
}

/// `K_{p,1}(K_X)` against `K_{g-2-p,2}(K_X)` for every `p` in the table.
/// Returns the mismatches as `(p, dim K_{p,1}, dim K_{g-2-p,2})`.
pub fn duality_mismatches(table: &BettiTable, genus: usize) -> Vec<(usize, u64, u64)> {
    table
        .ps
        .iter()
        .filter(|&&p| p + 2 <= genus)
        .filter_map(|&p| {
            let a = table.get(p, 1)?;
            let b = table.get(genus - 2 - p, 2)?;
            (a != b).then_some((p, a, b))
        })
        .collect()
}
