//! Numerics for twisted multiple zeta functions: direct series, contour
//! continuation, the symmetry group with its automorphy factor, residue
//! series, and the special-value machinery built on top of them.

pub mod applications;
pub mod contour;
pub mod domain;
pub mod error;
pub mod evaluator;
pub mod group;
pub mod numeric;
pub mod precision;

pub use contour::QuadratureConfig;
pub use domain::{DomainPoint, MembershipReport, Subset};
pub use error::{Error, Result};
pub use group::{FixedPointSpace, GroupElement, Perm};
pub use precision::PrecisionConfig;
