//! Logarithmic mean bounds and the matrix inequalities built on them.
//!
//! The crate has four layers:
//!
//! * [`scalar`] and [`lemmas`]: the logarithmic mean `L(a, b)`, its classical
//!   bounds, and the midpoint/trapezoid power-sum families that converge to it.
//! * [`matrix`]: Hermitian positive semidefinite matrices with a cached
//!   eigendecomposition, the map `X -> integral_0^1 A^v X B^{1-v} dv`, finite
//!   power-sum maps, and weighted geometric means `A #_v B`.
//! * [`oracle`]: quadrature and compensated brute-force sums that evaluate the
//!   same quantities along an independent path.
//! * [`verify`]: seeded instance generation and a catalog of inequality
//!   checks aggregated into reproducible reports.
//!
//! The numerical core is generic over the floating-point type; the aliases
//! at the crate root fix it to `f64` (or `f32`).

pub mod cli;
pub mod error;
pub mod lemmas;
pub mod matrix;
pub mod oracle;
pub mod scalar;
pub mod search;
pub mod verify;

pub use error::{Error, Result};

/// Real scalar usable by both the scalar means (`num_traits::Float`) and the
/// complex linear algebra (`nalgebra::RealField`).
///
/// Both supertraits define methods such as `sqrt` and `ln`; generic code
/// calls them as `Float::sqrt(x)`.
pub trait Real: nalgebra::RealField + num_traits::Float + Copy + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

pub type PositivePair64 = scalar::PositivePair<f64>;
pub type PositivePair32 = scalar::PositivePair<f32>;
pub type HermitianPsd64 = matrix::HermitianPsd<f64>;
pub type HermitianPsd32 = matrix::HermitianPsd<f32>;
pub type ComplexMatrix64 = matrix::ComplexMatrix<f64>;
pub type ComplexMatrix32 = matrix::ComplexMatrix<f32>;
pub type MeanTriple64 = matrix::MeanTriple<f64>;
pub type MeanTriple32 = matrix::MeanTriple<f32>;
