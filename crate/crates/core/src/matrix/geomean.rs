use num_complex::Complex;

use super::psd::{hermitian_part, power, to_f64};
use super::{ComplexMatrix, HermitianPsd};
use crate::error::{Error, Result};
use crate::scalar::log_mean_nonneg;
use crate::Real;

/// One term of a linear combination of operator means of `(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanTerm<T> {
    /// `(A + B) / 2`
    Arithmetic,
    /// `A #_v B`
    Weighted(T),
    /// `integral_0^1 A #_v B dv`
    Integral,
    /// `2 ((A #_v B)^{-1} + A^{-1})^{-1}`
    ParallelInverse(T),
}

/// The congruence `A #_v B = A^{1/2} T^v A^{1/2}`, `T = A^{-1/2} B A^{-1/2}`,
/// with `A^{1/2}` and the eigendecomposition of `T` computed once.
#[derive(Debug, Clone)]
pub struct GeometricPath<T: Real> {
    a: HermitianPsd<T>,
    b: HermitianPsd<T>,
    a_half: ComplexMatrix<T>,
    t: HermitianPsd<T>,
}

impl<T: Real> GeometricPath<T> {
    /// Needs `A` positive definite; `B` may be singular.
    pub fn new(a: &HermitianPsd<T>, b: &HermitianPsd<T>) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: b.dim(),
            });
        }
        a.require_pd()?;
        let half: T = <T as num_traits::NumCast>::from(0.5).expect("literal");
        let a_half = a.frac_power(half)?.into_matrix();
        let a_neg_half = a.frac_power(-half)?.into_matrix();
        let t = HermitianPsd::new(hermitian_part(&(&a_neg_half * b.matrix() * &a_neg_half)))?;
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            a_half,
            t,
        })
    }

    /// `A^{1/2} f(T) A^{1/2}`.
    pub fn apply(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        hermitian_part(&(&self.a_half * self.t.spectral_map(f) * &self.a_half))
    }

    /// Eigenvalues of `A^{-1/2} B A^{-1/2}`.
    pub fn congruence(&self) -> &HermitianPsd<T> {
        &self.t
    }

    pub fn weighted_matrix(&self, nu: T) -> Result<ComplexMatrix<T>> {
        check_weight(nu)?;
        Ok(self.apply(|l| power(l, nu)))
    }

    pub fn weighted(&self, nu: T) -> Result<HermitianPsd<T>> {
        HermitianPsd::new(self.weighted_matrix(nu)?)
    }

    /// `integral_0^1 A #_v B dv = A^{1/2} L(T, I) A^{1/2}` with `L(0, 1) = 0`.
    pub fn integral(&self) -> ComplexMatrix<T> {
        self.apply(|l| log_mean_nonneg(l, T::one()))
    }

    /// `2 ((A #_v B)^{-1} + A^{-1})^{-1}`, evaluated literally through inverses.
    pub fn parallel_inverse(&self, nu: T) -> Result<ComplexMatrix<T>> {
        let g = self.weighted(nu)?;
        let neg_one = -T::one();
        let g_inv = g.frac_power(neg_one)?;
        let a_inv = self.a.frac_power(neg_one)?;
        let sum = HermitianPsd::new(g_inv.matrix() + a_inv.matrix())?;
        let two = Complex::new(T::one() + T::one(), T::zero());
        Ok(sum.frac_power(neg_one)?.into_matrix() * two)
    }

    pub fn term(&self, term: MeanTerm<T>) -> Result<ComplexMatrix<T>> {
        match term {
            MeanTerm::Arithmetic => {
                let half = Complex::new(
                    <T as num_traits::NumCast>::from(0.5).expect("literal"),
                    T::zero(),
                );
                Ok((self.a.matrix() + self.b.matrix()) * half)
            }
            MeanTerm::Weighted(nu) => self.weighted_matrix(nu),
            MeanTerm::Integral => Ok(self.integral()),
            MeanTerm::ParallelInverse(nu) => self.parallel_inverse(nu),
        }
    }

    /// `sum_k c_k term_k`, Hermitian.
    pub fn combination(&self, terms: &[(MeanTerm<T>, T)]) -> Result<ComplexMatrix<T>> {
        let n = self.a.dim();
        let mut acc = ComplexMatrix::<T>::zeros(n, n);
        for &(term, coeff) in terms {
            acc += self.term(term)? * Complex::new(coeff, T::zero());
        }
        Ok(hermitian_part(&acc))
    }
}

fn check_weight<T: Real>(nu: T) -> Result<()> {
    if nu >= T::zero() && nu <= T::one() {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(to_f64(nu)))
    }
}

/// `A #_v B = A^{1/2} (A^{-1/2} B A^{-1/2})^v A^{1/2}`.
pub fn weighted_geomean<T: Real>(
    a: &HermitianPsd<T>,
    b: &HermitianPsd<T>,
    nu: T,
) -> Result<HermitianPsd<T>> {
    check_weight(nu)?;
    GeometricPath::new(a, b)?.weighted(nu)
}

/// `integral_0^1 A #_v B dv`.
pub fn integral_geomean<T: Real>(
    a: &HermitianPsd<T>,
    b: &HermitianPsd<T>,
) -> Result<HermitianPsd<T>> {
    HermitianPsd::new(GeometricPath::new(a, b)?.integral())
}

pub fn mean_combination<T: Real>(
    a: &HermitianPsd<T>,
    b: &HermitianPsd<T>,
    terms: &[(MeanTerm<T>, T)],
) -> Result<ComplexMatrix<T>> {
    GeometricPath::new(a, b)?.combination(terms)
}
