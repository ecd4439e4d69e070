pub mod bundle;
pub mod curve;
pub mod points;
pub mod sections;
pub mod tensor;

pub use bundle::{canonical_bundle, expected_h0, BundleSpec, Prediction, PredictionKind};
pub use curve::{normalize_point, PlaneCurve, Point};
pub use points::{find_rational_points, line_intersection, node_line_section, rational_line_sections, LineSection, PointScan};
pub use sections::{section_space, section_space_unaudited, SectionSpace};
pub use tensor::{mult_tensor, mult_tensor_between, MultTensor, TargetBasis};
