//! Exact computations for the icosahedral arrangement of 15 lines.

pub mod arrangement;
pub mod context;
pub mod error;
pub mod field;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod matrix;
pub mod picard;
pub mod poly;
pub mod report;
pub mod resultant;
pub mod suites;
pub mod symbolic;
pub mod text;
pub mod weighted;

pub use error::{Error, Result};
pub use field::{FieldElement, ModularImage};
pub use matrix::Matrix3;
pub use poly::{HomogeneousPolynomial, Monomial, ProjectivePoint};
