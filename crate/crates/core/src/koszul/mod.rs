//! Koszul cohomology: exterior index calculus, differentials, dimensions.

pub mod consensus;
pub mod engine;
pub mod exterior;
pub mod matrix;

pub use consensus::{multi_prime, ConsensusCell, ConsensusReport, SkippedPrime};
pub use engine::{betti_table, duality_mismatches, koszul_dim, koszul_dim_of, BettiTable, KoszulOptions, KoszulReport, KoszulSetup, DEFAULT_BUDGET};
pub use exterior::{binom, subset_rank, subset_rank_checked, subset_unrank, subsets, ExtIndex};
pub use matrix::{differential_nnz, koszul_matrix};
