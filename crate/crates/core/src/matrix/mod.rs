//! Hermitian positive semidefinite linear algebra.
//!
//! All matrix functions go through the cached eigendecomposition of
//! [`HermitianPsd`]. Two-sided maps `X -> sum_k c_k A^{p_k} X B^{1-p_k}` and the
//! logarithmic-mean integral are evaluated as a Hadamard multiplier in the
//! joint eigenbasis: with `A = U D1 U*`, `B = V D2 V*` and `Y = U* X V`, the
//! result is `U (K o Y) V*` where `K_ij = kernel(alpha_i, beta_j)`.

mod geomean;
mod maps;
mod psd;

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::Float;

pub use geomean::{integral_geomean, mean_combination, weighted_geomean, GeometricPath, MeanTerm};
pub use maps::{hadamard_map, log_mean_map, power_sum_map, weighted_power_map};
pub use psd::{hermitian_part, HermitianPsd, PD_EPS_REL, PSD_CLAMP_REL};

use crate::error::{Error, Result};
use crate::Real;

/// Dense complex square matrix.
pub type ComplexMatrix<T> = DMatrix<Complex<T>>;

/// `(sum |m_ij|^2)^{1/2}`.
pub fn frobenius_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    let sq = m.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
    Float::sqrt(sq)
}

/// `lambda_min(m2 - m1)`: nonnegative iff `m1 <= m2` in the Loewner order.
pub fn loewner_gap<T: Real>(m1: &ComplexMatrix<T>, m2: &ComplexMatrix<T>) -> Result<T> {
    if m1.shape() != m2.shape() {
        return Err(Error::DimensionMismatch {
            left: m1.nrows(),
            right: m2.nrows(),
        });
    }
    psd::check_square(m1)?;
    let diff = hermitian_part(&(m2 - m1));
    let values = diff.symmetric_eigenvalues();
    Ok(values
        .iter()
        .fold(Float::infinity(), |acc: T, &v| Float::min(acc, v)))
}

/// Arguments `(A, B, X)` of the two-sided norm inequalities.
#[derive(Debug, Clone)]
pub struct MeanTriple<T: Real> {
    pub a: HermitianPsd<T>,
    pub b: HermitianPsd<T>,
    pub x: ComplexMatrix<T>,
}

impl<T: Real> MeanTriple<T> {
    pub fn new(a: HermitianPsd<T>, b: HermitianPsd<T>, x: ComplexMatrix<T>) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: b.dim(),
            });
        }
        if x.nrows() != a.dim() || x.ncols() != a.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: x.nrows().max(x.ncols()),
            });
        }
        psd::check_finite(&x)?;
        Ok(Self { a, b, x })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn frobenius_examples() {
        let id = DMatrix::<Complex<f64>>::identity(3, 3);
        assert_relative_eq!(frobenius_norm(&id), 3f64.sqrt(), max_relative = 1e-15);
        let d = HermitianPsd::diagonal(&[3.0, 4.0]).unwrap();
        assert_relative_eq!(d.frobenius_norm(), 5.0, max_relative = 1e-15);
    }

    #[test]
    fn frobenius_matches_trace_formula() {
        let m = DMatrix::from_fn(4, 4, |i, j| {
            Complex::new(
                (i as f64 * 1.3 - j as f64).sin(),
                (i * j) as f64 * 0.25 - 0.7,
            )
        });
        let tr = (m.adjoint() * &m).trace().re.sqrt();
        assert_relative_eq!(frobenius_norm(&m), tr, max_relative = 1e-12);
    }

    #[test]
    fn loewner_gap_examples() {
        let d12 = HermitianPsd::diagonal(&[1.0, 2.0]).unwrap();
        let zero = DMatrix::<Complex<f64>>::zeros(2, 2);
        assert_relative_eq!(
            loewner_gap(&zero, d12.matrix()).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert_eq!(loewner_gap(d12.matrix(), d12.matrix()).unwrap(), 0.0);
        let m1 = HermitianPsd::diagonal(&[1.0, 5.0]).unwrap();
        let m2 = HermitianPsd::diagonal(&[2.0, 3.0]).unwrap();
        assert_relative_eq!(
            loewner_gap(m1.matrix(), m2.matrix()).unwrap(),
            -2.0,
            max_relative = 1e-15
        );
        let m3 = DMatrix::<Complex<f64>>::zeros(3, 3);
        assert!(loewner_gap(&zero, &m3).is_err());
    }

    #[test]
    fn triple_validates_dims() {
        let a = HermitianPsd::<f64>::identity(2);
        let b = HermitianPsd::<f64>::identity(3);
        let x = DMatrix::<Complex<f64>>::identity(2, 2);
        assert!(MeanTriple::new(a.clone(), b, x.clone()).is_err());
        assert!(MeanTriple::new(a.clone(), a.clone(), DMatrix::identity(3, 3)).is_err());
        assert_eq!(MeanTriple::new(a.clone(), a, x).unwrap().dim(), 2);
    }
}
