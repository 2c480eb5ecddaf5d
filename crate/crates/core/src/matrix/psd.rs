use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;
use num_traits::Float;

use super::{frobenius_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::Real;

/// Eigenvalues below `-PSD_CLAMP_REL * lambda_max` are rejected; the rest of
/// the negative ones are clamped to zero.
pub const PSD_CLAMP_REL: f64 = 1e-10;

/// `pd_eps = PD_EPS_REL * lambda_max`: operations needing an inverse or a
/// congruence by `A^{-1/2}` refuse matrices with `lambda_min < pd_eps`.
pub const PD_EPS_REL: f64 = 1e-10;

fn lit<T: Real>(x: f64) -> T {
    <T as num_traits::NumCast>::from(x).expect("literal representable")
}

/// Relative tolerance scaled up for low-precision types.
fn rel_tol<T: Real>(base: f64) -> T {
    Float::max(lit::<T>(base), lit::<T>(1e3) * Float::epsilon())
}

pub(crate) fn check_square<T: Real>(m: &ComplexMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub(crate) fn check_finite<T: Real>(m: &ComplexMatrix<T>) -> Result<()> {
    if m.iter()
        .all(|z| Float::is_finite(z.re) && Float::is_finite(z.im))
    {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// `(M + M*) / 2`.
pub fn hermitian_part<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let half = Complex::new(lit::<T>(0.5), T::zero());
    (m + m.adjoint()) * half
}

/// `U diag(values) U*`, symmetrized.
pub(crate) fn assemble<T: Real>(
    vectors: &ComplexMatrix<T>,
    values: &DVector<T>,
) -> ComplexMatrix<T> {
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        let c = Complex::new(v, T::zero());
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= c);
    }
    hermitian_part(&(scaled * vectors.adjoint()))
}

/// Eigen-decompose a Hermitian matrix; eigenvalues sorted descending.
pub(crate) fn sorted_eigen<T: Real>(h: ComplexMatrix<T>) -> (DVector<T>, ComplexMatrix<T>) {
    let n = h.nrows();
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// An `n x n` complex positive semidefinite matrix with its eigendecomposition
/// `A = U diag(lambda) U*`, eigenvalues nonnegative and descending.
///
/// Immutable after construction; cheap to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianPsd<T: Real> {
    matrix: ComplexMatrix<T>,
    eigenvalues: DVector<T>,
    eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianPsd<T> {
    /// Symmetrizes `m`, decomposes it and clamps round-off negative
    /// eigenvalues to zero.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        let n = check_square(&m)?;
        if n == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        check_finite(&m)?;
        let norm = frobenius_norm(&m);
        let asym = frobenius_norm(&(&m - m.adjoint()));
        let herm_tol: T = Float::sqrt(Float::epsilon());
        if asym > herm_tol * norm {
            let rel = if norm > T::zero() { asym / norm } else { asym };
            return Err(Error::NotHermitian {
                asymmetry: to_f64(rel),
            });
        }
        let h = hermitian_part(&m);
        let (values, vectors) = sorted_eigen(h);
        Self::from_eigen(values, vectors)
    }

    /// Build from an eigendecomposition; `vectors` must be unitary.
    pub fn from_eigen(mut values: DVector<T>, vectors: ComplexMatrix<T>) -> Result<Self> {
        let n = check_square(&vectors)?;
        if values.len() != n {
            return Err(Error::DimensionMismatch {
                left: values.len(),
                right: n,
            });
        }
        if values.iter().any(|v| !Float::is_finite(*v)) {
            return Err(Error::NonFinite);
        }
        let lambda_max = values
            .iter()
            .fold(T::zero(), |acc, &v| Float::max(acc, Float::abs(v)));
        let threshold = rel_tol::<T>(PSD_CLAMP_REL) * lambda_max;
        for v in values.iter_mut() {
            if *v < -threshold {
                return Err(Error::NotPositiveSemidefinite {
                    eigenvalue: to_f64(*v),
                    threshold: -to_f64(threshold),
                });
            }
            if *v < T::zero() {
                *v = T::zero();
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            values[j]
                .partial_cmp(&values[i])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = DVector::from_iterator(n, order.iter().map(|&i| values[i]));
        let vectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
        let matrix = assemble(&vectors, &values);
        Ok(Self {
            matrix,
            eigenvalues: values,
            eigenvectors: vectors,
        })
    }

    /// Real diagonal matrix `diag(values)`.
    pub fn diagonal(values: &[T]) -> Result<Self> {
        let n = values.len();
        Self::from_eigen(DVector::from_column_slice(values), DMatrix::identity(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![T::one(); n]).expect("identity is PSD")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn eigenvalues(&self) -> &DVector<T> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix<T> {
        &self.eigenvectors
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn frobenius_norm(&self) -> T {
        frobenius_norm(&self.matrix)
    }

    /// `pd_eps` for this matrix.
    pub fn pd_threshold(&self) -> T {
        rel_tol::<T>(PD_EPS_REL) * self.max_eigenvalue()
    }

    pub fn is_positive_definite(&self) -> bool {
        let min = self.min_eigenvalue();
        min > T::zero() && min >= self.pd_threshold()
    }

    pub fn require_pd(&self) -> Result<()> {
        if self.is_positive_definite() {
            Ok(())
        } else {
            Err(Error::SingularMatrix {
                min_eigenvalue: to_f64(self.min_eigenvalue()),
                threshold: to_f64(self.pd_threshold()),
            })
        }
    }

    /// `U diag(f(lambda)) U*` as a plain Hermitian matrix.
    pub fn spectral_map(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let values = self.eigenvalues.map(f);
        assemble(&self.eigenvectors, &values)
    }

    /// `A^p` with `0^p = 0` for `p > 0` and `A^0 = I`. Negative powers need a
    /// positive definite `A`.
    pub fn frac_power(&self, p: T) -> Result<Self> {
        if p < T::zero() {
            self.require_pd()?;
        }
        let values = self.eigenvalues.map(|l| power(l, p));
        let vectors = self.eigenvectors.clone();
        // Negative powers reverse the order; from_eigen re-sorts.
        Self::from_eigen(values, vectors)
    }
}

/// Scalar power with `0^p = 0` for `p > 0` and `x^0 = 1`.
pub(crate) fn power<T: Real>(x: T, p: T) -> T {
    if p == T::zero() {
        T::one()
    } else if x == T::zero() {
        T::zero()
    } else {
        Float::powf(x, p)
    }
}

pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    num_traits::ToPrimitive::to_f64(&x).unwrap_or(f64::NAN)
}
