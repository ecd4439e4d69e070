pub mod field;
pub mod poly;
pub mod series;

pub use field::{FieldCtx, DEFAULT_PRIME};
pub use poly::{Exp, HomogPoly, MonomialBasis, Reducer};
