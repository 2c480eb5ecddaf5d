//! Integer-exponent polynomial gaps whose nonnegativity drives the power-sum
//! comparisons.
//!
//! Each expression is split into its positive and negative monomial parts so
//! that callers can normalize the gap by its magnitude. Powers are exact
//! repeated squaring; overflow surfaces as a non-finite [`Gap`].

use num_traits::Float;

use crate::error::{Error, Result};
use crate::scalar::BoundOrder;

/// `x^n` by binary exponentiation.
pub fn pow_uint<T: Float>(x: T, mut n: u64) -> T {
    let mut base = x;
    let mut acc = T::one();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base;
        }
        n >>= 1;
        if n > 0 {
            base = base * base;
        }
    }
    acc
}

/// A difference `positive - negative` of two nonnegative sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap<T> {
    pub positive: T,
    pub negative: T,
}

impl<T: Float> Gap<T> {
    pub fn value(&self) -> T {
        self.positive - self.negative
    }

    pub fn scale(&self) -> T {
        self.positive + self.negative
    }

    pub fn is_finite(&self) -> bool {
        self.positive.is_finite() && self.negative.is_finite()
    }

    /// Gap divided by its magnitude, in `[-1, 1]`. `None` when a term
    /// overflowed or every term underflowed to zero.
    pub fn normalized(&self) -> Option<T> {
        let s = self.scale();
        if !self.is_finite() || s <= T::zero() {
            None
        } else {
            Some(self.value() / s)
        }
    }
}

fn check_x<T: Float>(x: T) -> Result<()> {
    if x.is_finite() && x > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveScalar(x.to_f64().unwrap_or(f64::NAN)))
    }
}

/// A polynomial `sum c_i x^{e_i} - sum d_j x^{f_j}` with nonnegative coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomials<T> {
    pub positive: Vec<(T, u64)>,
    pub negative: Vec<(T, u64)>,
}

impl<T: Float> Monomials<T> {
    fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.positive.iter().chain(&self.negative).map(|&(_, e)| e)
    }

    /// Raw evaluation at `x`.
    pub fn gap(&self, x: T) -> Gap<T> {
        let sum = |terms: &[(T, u64)]| {
            terms
                .iter()
                .fold(T::zero(), |acc, &(c, e)| acc + c * pow_uint(x, e))
        };
        Gap {
            positive: sum(&self.positive),
            negative: sum(&self.negative),
        }
    }

    /// Evaluation at `x` divided by the largest power of `x` present, so the
    /// dominant monomial is `O(1)` and nothing overflows. The normalized
    /// value is unchanged by the rescaling.
    pub fn gap_rescaled(&self, x: T) -> Gap<T> {
        let (base, shift): (T, Box<dyn Fn(u64) -> u64>) = if x > T::one() {
            let top = self.exponents().max().unwrap_or(0);
            (T::one() / x, Box::new(move |e| top - e))
        } else {
            let bottom = self.exponents().min().unwrap_or(0);
            (x, Box::new(move |e| e - bottom))
        };
        let sum = |terms: &[(T, u64)]| {
            terms
                .iter()
                .fold(T::zero(), |acc, &(c, e)| acc + c * pow_uint(base, shift(e)))
        };
        Gap {
            positive: sum(&self.positive),
            negative: sum(&self.negative),
        }
    }

    pub fn normalized(&self, x: T) -> Option<T> {
        self.gap_rescaled(x).normalized()
    }
}

fn ones<T: Float>(exps: impl Iterator<Item = u64>) -> Vec<(T, u64)> {
    exps.map(|e| (T::one(), e)).collect()
}

/// `x^u (1 - x^v) + x^w (x^v - 1)` for `w >= u`.
pub fn lemma2_monomials<T: Float>(u: u64, v: u64, w: u64) -> Result<Monomials<T>> {
    if w < u {
        return Err(Error::Precondition(format!(
            "need w >= u, got u = {u}, w = {w}"
        )));
    }
    Ok(Monomials {
        positive: ones([u, w + v].into_iter()),
        negative: ones([u + v, w].into_iter()),
    })
}

pub fn lemma2_terms<T: Float>(x: T, u: u64, v: u64, w: u64) -> Result<Gap<T>> {
    check_x(x)?;
    Ok(lemma2_monomials(u, v, w)?.gap(x))
}

pub fn lemma2_expr<T: Float>(x: T, u: u64, v: u64, w: u64) -> Result<T> {
    lemma2_terms(x, u, v, w).map(|g| g.value())
}

/// `sum_{k=1}^m x^{(2k-1)(m+1)} - sum_{k=1}^m x^{2km}`.
pub fn lemma3_monomials<T: Float>(m: BoundOrder) -> Monomials<T> {
    let m = m.get() as u64;
    Monomials {
        positive: ones((1..=m).map(|k| (2 * k - 1) * (m + 1))),
        negative: ones((1..=m).map(|k| 2 * k * m)),
    }
}

pub fn lemma3_terms<T: Float>(x: T, m: BoundOrder) -> Result<Gap<T>> {
    check_x(x)?;
    Ok(lemma3_monomials(m).gap(x))
}

pub fn lemma3_gap<T: Float>(x: T, m: BoundOrder) -> Result<T> {
    lemma3_terms(x, m).map(|g| g.value())
}

/// `sum_{k=1}^{m-1} (x^{km} - x^{k(m-1)}) - (x^{m(m-1)} - 1) / 2`, `m >= 2`.
pub fn lemma5_monomials<T: Float>(m: BoundOrder) -> Result<Monomials<T>> {
    let m = m.require(2)?.get() as u64;
    let half = T::one() / (T::one() + T::one());
    let mut positive = ones((1..m).map(|k| k * m));
    positive.push((half, 0));
    let mut negative = ones((1..m).map(|k| k * (m - 1)));
    negative.push((half, m * (m - 1)));
    Ok(Monomials { positive, negative })
}

pub fn lemma5_terms<T: Float>(x: T, m: BoundOrder) -> Result<Gap<T>> {
    check_x(x)?;
    Ok(lemma5_monomials(m)?.gap(x))
}

pub fn lemma5_gap<T: Float>(x: T, m: BoundOrder) -> Result<T> {
    lemma5_terms(x, m).map(|g| g.value())
}

/// `m (t^{m-1} + 1) / 2 - sum_{k=0}^{m-1} t^k`, `m >= 2`.
pub fn induction_monomials<T: Float>(m: BoundOrder) -> Result<Monomials<T>> {
    let m = m.require(2)?.get() as u64;
    let c = T::from(m).expect("order representable as float") / (T::one() + T::one());
    Ok(Monomials {
        positive: vec![(c, m - 1), (c, 0)],
        negative: ones(0..m),
    })
}

pub fn induction_terms<T: Float>(t: T, m: BoundOrder) -> Result<Gap<T>> {
    check_x(t)?;
    Ok(induction_monomials(m)?.gap(t))
}

pub fn induction_gap<T: Float>(t: T, m: BoundOrder) -> Result<T> {
    induction_terms(t, m).map(|g| g.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(k: usize) -> BoundOrder {
        BoundOrder::new(k).unwrap()
    }

    #[test]
    fn pow_uint_matches_powi() {
        for &x in &[0.5f64, 1.0, 1.7, 3.0] {
            for n in 0..40u64 {
                let a = pow_uint(x, n);
                let b = x.powi(n as i32);
                assert!((a - b).abs() <= 1e-14 * b, "{x}^{n}");
            }
        }
        assert_eq!(pow_uint(2.0f64, 10), 1024.0);
        assert!(pow_uint(1e3f64, 400).is_infinite());
    }

    #[test]
    fn lemma2_examples() {
        assert_eq!(lemma2_expr(1.0, 3, 4, 5).unwrap(), 0.0);
        assert_eq!(lemma2_expr(2.3, 3, 0, 7).unwrap(), 0.0);
        assert_eq!(lemma2_expr(2.0, 1, 2, 3).unwrap(), 18.0);
        assert!(lemma2_expr(2.0, 3, 1, 2).is_err());
        assert!(lemma2_expr(0.0, 1, 1, 2).is_err());
    }

    #[test]
    fn gap_examples() {
        for k in 2..6 {
            assert_eq!(lemma3_gap(1.0, m(k)).unwrap(), 0.0);
            assert_eq!(lemma5_gap(1.0, m(k)).unwrap(), 0.0);
            assert_eq!(induction_gap(1.0, m(k)).unwrap(), 0.0);
        }
        assert_eq!(lemma3_gap(2.0, m(2)).unwrap(), 248.0);
        assert_eq!(lemma5_gap(2.0, m(2)).unwrap(), 0.5);
        assert!(lemma5_gap(2.0, m(1)).is_err());
        assert!(induction_gap(2.0, m(1)).is_err());
    }

    #[test]
    fn normalization_flags_overflow() {
        let g = lemma3_terms(1e3f64, m(10)).unwrap();
        assert!(g.normalized().is_none());
        let g = lemma3_terms(1.1f64, m(3)).unwrap();
        let n = g.normalized().unwrap();
        assert!((-1.0..=1.0).contains(&n));
    }

    #[test]
    fn rescaling_preserves_normalized_value() {
        for &x in &[0.3f64, 0.9, 1.0, 1.1, 2.5] {
            for k in 2..6 {
                let mono = lemma5_monomials::<f64>(m(k)).unwrap();
                let raw = mono.gap(x).normalized().unwrap();
                assert!((raw - mono.normalized(x).unwrap()).abs() < 1e-13);
                let mono = lemma3_monomials::<f64>(m(k));
                assert!(
                    (mono.gap(x).normalized().unwrap() - mono.normalized(x).unwrap()).abs() < 1e-13
                );
            }
        }
        let big = lemma3_monomials::<f64>(m(32)).normalized(1e3).unwrap();
        assert!(big > 0.0 && big <= 1.0);
        let tiny = lemma3_monomials::<f64>(m(32)).normalized(1e-3).unwrap();
        assert!(tiny > 0.0 && tiny <= 1.0);
    }
}
