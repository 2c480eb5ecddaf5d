//! Reference evaluations that avoid the closed forms in [`crate::scalar`] and
//! the eigenbasis multipliers in [`crate::matrix`].
//!
//! Integrals are approximated by quadrature over `v in [0, 1]`; finite sums
//! are added term by term with compensated summation.

mod brute;
mod quadrature;

pub use brute::{brute_sum, NeumaierSum, SumKind, BRUTE_MAX_ORDER};
pub use quadrature::{
    quad_geomean_integral, quad_matrix_integral, quad_scalar_integral, QuadratureRule, RuleKind,
};

/// Points in the default Gauss-Legendre rule.
pub const DEFAULT_POINTS: usize = 64;

pub fn default_rule() -> QuadratureRule {
    QuadratureRule::gauss_legendre(DEFAULT_POINTS).expect("64 points is a valid rule")
}
