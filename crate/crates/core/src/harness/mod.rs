//! Verdicts built on Koszul computations: Green and Green-Lazarsfeld checks,
//! gonality certificates, vanishing propagation, gluing chains, slopes.

pub mod bundles;
pub mod checks;
pub mod gonality;
pub mod profile;
pub mod stability;
pub mod verdict;

pub use bundles::{add_divisor, canonical_plus_collinear, canonical_plus_node_pair, collinear_triples, mark_points, Marked};
pub use checks::{
    extend_vanishing, gl_check, glue_inclusion_check, green_check, hrv_consistency, pluricanonical_check, pluricanonical_index,
    points_in_pencil_fiber, propagation_instance, ChainReport,
};
pub use gonality::{
    certify_gonality, koszul_clifford, pencil_search, quadrics_surject, CliffordScan, GonalityCertificate, LowerBound, PencilWitness, UpperBound,
};
pub use profile::CurveProfile;
pub use stability::{case_table, mu_f, stability_audit, Case, CaseRow, Conclusion, SheafProfile, StabilityAudit};
pub use verdict::{cell, Basis, Expectation, Observation, Pattern, Status, Verdict};
