pub mod construct;
pub mod file;
pub mod registry;

pub use file::{DeclaredProfile, FixtureRecord};
pub use registry::{lookup, names, registry, CONSENSUS_PRIMES};
