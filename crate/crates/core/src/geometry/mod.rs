//! Dictionary/point/weight types and closed-form geometric quantities:
//! locality, the gap constant, circumspheres, barycentric coordinates,
//! boundary distances, general-position checking, and simplex sampling.

mod barycentric;
mod boundary;
mod circumsphere;
mod general_position;
mod locality;
mod types;

pub use barycentric::{barycentric, BarycentricSystem};
pub use boundary::{boundary_distance, project_onto_spanned_simplex};
pub use circumsphere::{circumsphere, circumsphere_of, Circumsphere};
pub use general_position::{general_position_check, GeneralPositionReport};
pub use locality::{locality, locality_gap_constant, sample_simplex_weights};
pub use types::{Dictionary, SimplexWeights, VertexSet};

/// Relative geometric tolerance for cocircularity/degeneracy tests, applied
/// to the dictionary's diameter.
pub const GEOM_TOL_REL: f64 = 1e-9;

/// Absolute tolerance on barycentric coordinates for membership tests.
pub const LOCATE_TOL: f64 = 1e-9;
