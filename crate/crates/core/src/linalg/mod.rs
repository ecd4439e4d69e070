pub mod dense;
pub mod sparse;

pub use dense::{dense_rank, inverse, rank_kernel, rref_rows, DenseMat, RankKernel};
pub use sparse::{sparse_rank, SparseMat, Strategy};
