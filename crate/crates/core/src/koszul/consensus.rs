//! The same cells over several primes. Ranks over `F_p` can only drop
//! relative to characteristic zero, so the consensus is the minimum.

use serde::{Deserialize, Serialize};

use crate::arith::FieldCtx;
use crate::error::{Error, Result};
use crate::fixtures::FixtureRecord;
use crate::plane::bundle::BundleSpec;
use crate::plane::curve::PlaneCurve;

use super::engine::{koszul_dim, KoszulOptions, KoszulReport, KoszulSetup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPrime {
    pub prime: u32,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsensusCell {
    pub p: usize,
    pub q: u32,
    /// `(prime, dim)` for every prime used.
    pub dims: Vec<(u32, u64)>,
    pub consensus: u64,
    pub agree: bool,
    /// Agreement across at least three primes.
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsensusReport {
    pub fixture: String,
    pub bundle: String,
    pub primes: Vec<u32>,
    pub skipped: Vec<SkippedPrime>,
    pub cells: Vec<ConsensusCell>,
    pub reports: Vec<KoszulReport>,
}

impl ConsensusReport {
    pub fn all_agree(&self) -> bool {
        self.cells.iter().all(|c| c.agree)
    }

    pub fn get(&self, p: usize, q: u32) -> Option<&ConsensusCell> {
        self.cells.iter().find(|c| c.p == p && c.q == q)
    }
}

/// Errors that make a prime unusable rather than the computation wrong.
fn is_bad_prime(e: &Error) -> bool {
    matches!(
        e,
        Error::NonSplitNode(_)
            | Error::NotOrdinaryNode(..)
            | Error::SingularPoint(_)
            | Error::PointNotOnCurve(_)
            | Error::UndeclaredSingularity { .. }
            | Error::InvalidModel(_)
            | Error::RiemannRochMismatch { .. }
            | Error::ChartUnusable(..)
    )
}

/// Computes `cells` at each prime, with `bundle` built on the reduced curve.
pub fn multi_prime<F>(record: &FixtureRecord, bundle: F, cells: &[(usize, u32)], primes: &[u32], opts: &KoszulOptions) -> Result<ConsensusReport>
where
    F: Fn(&PlaneCurve) -> Result<BundleSpec>,
{
    let max_q = cells.iter().map(|c| c.1).max().unwrap_or(0);
    let mut used = Vec::new();
    let mut skipped = Vec::new();
    let mut reports = Vec::new();
    let mut label = String::new();
    for &prime in primes {
        let ctx = FieldCtx::new(prime as u64)?;
        let setup = record.curve_at(ctx).and_then(|c| {
            let l = bundle(&c)?;
            KoszulSetup::new(&c, &l, max_q, opts.target)
        });
        let setup = match setup {
            Ok(s) => s,
            Err(e) if is_bad_prime(&e) => {
                skipped.push(SkippedPrime { prime, reason: e.to_string() });
                continue;
            }
            Err(e) => return Err(e),
        };
        label = setup.bundle().to_string();
        for &(p, q) in cells {
            reports.push(koszul_dim(&setup, p, q, opts)?);
        }
        used.push(prime);
    }
    if used.is_empty() {
        return Err(Error::Precondition(format!("no usable prime for {} among {primes:?}", record.name)));
    }
    let cells = cells
        .iter()
        .map(|&(p, q)| {
            let dims: Vec<(u32, u64)> = reports.iter().filter(|r| r.p == p && r.q == q).map(|r| (r.prime, r.dim)).collect();
            let consensus = dims.iter().map(|d| d.1).min().unwrap_or(0);
            let agree = dims.iter().all(|d| d.1 == consensus);
            ConsensusCell { p, q, stable: agree && dims.len() >= 3, dims, consensus, agree }
        })
        .collect();
    Ok(ConsensusReport { fixture: record.name.clone(), bundle: label, primes: used, skipped, cells, reports })
}
