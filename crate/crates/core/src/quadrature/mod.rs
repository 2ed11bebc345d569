//! Zeros, weights and quadrature estimates for perturbed recurrences.

pub mod integrate;
pub mod roots;
pub mod rule;
pub mod tables;
pub mod weights;

pub use roots::{real_zeros, DEFAULT_TOL_IMAG};
pub use rule::{build_rule, estimate, exactness_check, example_rule, Integrand, QuadratureRule, WeightMethod, E_FIXTURE};
pub use tables::{order_flip_experiment, reproduce_table, TableId, TableReport};
pub use weights::{calibrate_m0, weights_moment_formula, weights_second_kind, Normalization, ReferenceDensity, RulePolys};
