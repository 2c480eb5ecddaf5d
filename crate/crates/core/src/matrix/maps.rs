use num_complex::Complex;

use super::psd::power;
use super::{ComplexMatrix, HermitianPsd};
use crate::error::{Error, Result};
use crate::scalar::log_mean_nonneg;
use crate::Real;

/// `U (K o (U* X V)) V*` with `K_ij = kernel(alpha_i, beta_j)`.
pub fn hadamard_map<T: Real>(
    a: &HermitianPsd<T>,
    b: &HermitianPsd<T>,
    x: &ComplexMatrix<T>,
    kernel: impl Fn(T, T) -> T,
) -> Result<ComplexMatrix<T>> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: b.dim(),
        });
    }
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: x.nrows().max(x.ncols()),
        });
    }
    let u = a.eigenvectors();
    let v = b.eigenvectors();
    let alpha = a.eigenvalues();
    let beta = b.eigenvalues();
    let mut y = u.adjoint() * x * v;
    for j in 0..n {
        for i in 0..n {
            y[(i, j)] *= Complex::new(kernel(alpha[i], beta[j]), T::zero());
        }
    }
    Ok(u * y * v.adjoint())
}

/// `integral_0^1 A^v X B^{1-v} dv`, via the scalar logarithmic mean of the
/// eigenvalue pairs. Pairs with a zero eigenvalue contribute zero.
pub fn log_mean_map<T: Real>(
    a: &HermitianPsd<T>,
    b: &HermitianPsd<T>,
    x: &ComplexMatrix<T>,
) -> Result<ComplexMatrix<T>> {
    hadamard_map(a, b, x, log_mean_nonneg)
}

/// `sum_k c_k A^{p_k} X B^{1-p_k}` for `terms = [(c_k, p_k)]`, `p_k` in `[0, 1]`.
pub fn weighted_power_map<T: Real>(
    a: &HermitianPsd<T>,
    b: &HermitianPsd<T>,
    x: &ComplexMatrix<T>,
    terms: &[(T, T)],
) -> Result<ComplexMatrix<T>> {
    if terms.is_empty() {
        return Err(Error::EmptyExponents);
    }
    if let Some(&(_, p)) = terms
        .iter()
        .find(|(_, p)| !(*p >= T::zero() && *p <= T::one()))
    {
        return Err(Error::ExponentOutOfRange(super::psd::to_f64(p)));
    }
    hadamard_map(a, b, x, |alpha, beta| {
        terms.iter().fold(T::zero(), |acc, &(c, p)| {
            acc + c * power(alpha, p) * power(beta, T::one() - p)
        })
    })
}

/// `weight * sum_k A^{p_k} X B^{1-p_k}`.
pub fn power_sum_map<T: Real>(
    a: &HermitianPsd<T>,
    b: &HermitianPsd<T>,
    x: &ComplexMatrix<T>,
    exponents: &[T],
    weight: T,
) -> Result<ComplexMatrix<T>> {
    let terms: Vec<(T, T)> = exponents.iter().map(|&p| (weight, p)).collect();
    weighted_power_map(a, b, x, &terms)
}
