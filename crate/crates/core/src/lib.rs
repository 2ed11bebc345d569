//! Perturbed R_II recurrences with exact rational arithmetic.
//!
//! Sequences, transfer matrices, continued fractions, the reduction to ordinary
//! orthogonal polynomials, Gauss-type quadrature and measure approximation.

pub mod cfrac;
pub mod config;
pub mod error;
pub mod mat2;
pub mod measure;
pub mod oprl;
pub mod perturbation;
pub mod poly;
pub mod quadrature;
pub mod recurrence;
pub mod scalar;
pub mod scheme;
pub mod suites;
pub mod transfer;

pub use error::{Error, Result};
pub use mat2::{Mat2, PolyMatrix2};
pub use perturbation::{CoDilation, CoRecursion, Level, Perturbation};
pub use poly::Poly;
pub use recurrence::{Kind, Recurrence};
pub use scalar::{GaussQ, Scalar, Value, Q};
pub use scheme::{CoefficientScheme, NodeSpec, SchemeForm, Seq};
