//! Scalar means of two positive numbers and the finite power-sum families
//! that bracket the logarithmic mean.
//!
//! Every function is generic over [`num_traits::Float`], so the same code
//! serves `f32` and `f64`. Two-variable means are homogeneous of degree one;
//! the one-variable families (`alpha_m`, `beta_m`, `gamma_m`, `delta_m`) are
//! the `b = 1` slices `t = a / b`.

use num_traits::Float;

use crate::error::{Error, Result};

/// Below this relative gap the logarithmic mean switches to its Taylor series.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Closed forms of `alpha_m` / `beta_m` are used when `|t - 1|` exceeds this.
const CLOSED_FORM_THRESHOLD: f64 = 1e-6;

#[inline]
fn lit<T: Float>(x: f64) -> T {
    T::from(x).expect("literal representable in every float type")
}

#[inline]
fn count<T: Float>(n: usize) -> T {
    T::from(n).expect("order representable as float")
}

/// Two strictly positive, finite numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivePair<T> {
    a: T,
    b: T,
}

impl<T: Float> PositivePair<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        let ok = |v: T| v.is_finite() && v > T::zero();
        if ok(a) && ok(b) {
            Ok(Self { a, b })
        } else {
            Err(Error::NonPositiveArgument {
                a: a.to_f64().unwrap_or(f64::NAN),
                b: b.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    /// The pair `(t, 1)`.
    pub fn ratio(t: T) -> Result<Self> {
        Self::new(t, T::one())
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn max(&self) -> T {
        self.a.max(self.b)
    }

    pub fn min(&self) -> T {
        self.a.min(self.b)
    }

    pub fn scaled(&self, lambda: T) -> Result<Self> {
        Self::new(self.a * lambda, self.b * lambda)
    }
}

/// Order `m >= 1` of a power-sum family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundOrder(usize);

impl BoundOrder {
    pub fn new(m: usize) -> Result<Self> {
        if m >= 1 {
            Ok(Self(m))
        } else {
            Err(Error::OrderTooSmall { got: m, min: 1 })
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn next(self) -> Self {
        Self(self.0 + 1)
    }

    pub fn require(self, min: usize) -> Result<Self> {
        if self.0 >= min {
            Ok(self)
        } else {
            Err(Error::OrderTooSmall { got: self.0, min })
        }
    }
}

/// Logarithmic mean for nonnegative arguments.
///
/// Zero in either slot gives zero, the limit of `(a - b) / (ln a - ln b)`.
/// The computation is symmetric in its arguments bit-for-bit.
pub fn log_mean_nonneg<T: Float>(a: T, b: T) -> T {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo <= T::zero() {
        return T::zero();
    }
    if hi == lo {
        return hi;
    }
    let d = (hi - lo) / lo;
    if d < lit(SERIES_THRESHOLD) {
        // d / ln(1 + d) = 1 + d/2 - d^2/12 + O(d^3)
        lo * (T::one() + d / lit(2.0) - d * d / lit(12.0))
    } else {
        (hi - lo) / d.ln_1p()
    }
}

/// `L(a, b) = (a - b) / (ln a - ln b)`, with `L(a, a) = a`.
pub fn log_mean<T: Float>(p: PositivePair<T>) -> T {
    log_mean_nonneg(p.a, p.b)
}

pub fn geo_mean<T: Float>(p: PositivePair<T>) -> T {
    (p.a * p.b).sqrt()
}

pub fn arith_mean<T: Float>(p: PositivePair<T>) -> T {
    (p.a + p.b) / lit(2.0)
}

/// Power mean of order 1/3: `((a^{1/3} + b^{1/3}) / 2)^3`.
pub fn lin_upper<T: Float>(p: PositivePair<T>) -> T {
    let s = (p.a.cbrt() + p.b.cbrt()) / lit(2.0);
    s * s * s
}

/// `(2/3) sqrt(ab) + (1/3) (a + b) / 2`.
pub fn polya_upper<T: Float>(p: PositivePair<T>) -> T {
    lit::<T>(2.0 / 3.0) * geo_mean(p) + arith_mean(p) / lit(3.0)
}

/// Degree-one homogeneous extension of `(t + t^{1/3}) / (1 + t^{1/3})`.
///
/// With `x = (a/b)^{1/3}` this is `(a + b x) / (1 + x)`, which is also
/// symmetric in `(a, b)`.
pub fn rational_lower<T: Float>(p: PositivePair<T>) -> T {
    let x = (p.a / p.b).cbrt();
    (p.a + p.b * x) / (T::one() + x)
}

fn mean_of_powers<T: Float>(t: T, exponents: impl Iterator<Item = T>, m: usize) -> T {
    exponents.fold(T::zero(), |acc, e| acc + t.powf(e)) / count(m)
}

/// `t^{1/m} - 1` without cancellation near `t = 1`.
fn root_minus_one<T: Float>(t: T, m: usize) -> T {
    (t.ln() / count(m)).exp_m1()
}

/// Midpoint sum `(1/m) sum_{k=1}^m t^{(2k-1)/(2m)}`.
pub fn alpha_m_sum<T: Float>(t: T, m: BoundOrder) -> T {
    let m = m.get();
    let two_m: T = count(2 * m);
    mean_of_powers(t, (1..=m).map(|k| count::<T>(2 * k - 1) / two_m), m)
}

/// `t^{1/(2m)} (t - 1) / (m (t^{1/m} - 1))`; undefined at `t = 1`.
pub fn alpha_m_closed<T: Float>(t: T, m: BoundOrder) -> T {
    let m = m.get();
    let half_root = (t.ln() / count(2 * m)).exp();
    half_root * (t - T::one()) / (count::<T>(m) * root_minus_one(t, m))
}

/// Lower family `alpha_m(t)`, increasing in `m` towards `L(t, 1)`.
pub fn alpha_m<T: Float>(t: T, m: BoundOrder) -> T {
    debug_assert!(t > T::zero());
    if (t - T::one()).abs() > lit(CLOSED_FORM_THRESHOLD) {
        alpha_m_closed(t, m)
    } else {
        alpha_m_sum(t, m)
    }
}

/// Trapezoid sum `(1/m) (sum_{k=0}^m t^{k/m} - (t + 1)/2)`.
pub fn beta_m_sum<T: Float>(t: T, m: BoundOrder) -> T {
    let m = m.get();
    let mm: T = count(m);
    let full = (0..=m).fold(T::zero(), |acc, k| acc + t.powf(count::<T>(k) / mm));
    (full - (t + T::one()) / lit(2.0)) / mm
}

/// `(t^{1/m} + 1)(t - 1) / (2m (t^{1/m} - 1))`; undefined at `t = 1`.
pub fn beta_m_closed<T: Float>(t: T, m: BoundOrder) -> T {
    let m = m.get();
    let e = root_minus_one(t, m);
    (e + lit(2.0)) * (t - T::one()) / (count::<T>(2 * m) * e)
}

/// Upper family `beta_m(t)`, decreasing in `m` towards `L(t, 1)`.
pub fn beta_m<T: Float>(t: T, m: BoundOrder) -> T {
    debug_assert!(t > T::zero());
    if (t - T::one()).abs() > lit(CLOSED_FORM_THRESHOLD) {
        beta_m_closed(t, m)
    } else {
        beta_m_sum(t, m)
    }
}

/// Right Riemann sum `(1/m) sum_{k=1}^m t^{k/m}`.
pub fn gamma_m<T: Float>(t: T, m: BoundOrder) -> T {
    let m = m.get();
    let mm: T = count(m);
    mean_of_powers(t, (1..=m).map(|k| count::<T>(k) / mm), m)
}

/// Left Riemann sum `(1/m) sum_{k=0}^{m-1} t^{k/m}`.
pub fn delta_m<T: Float>(t: T, m: BoundOrder) -> T {
    let m = m.get();
    let mm: T = count(m);
    mean_of_powers(t, (0..m).map(|k| count::<T>(k) / mm), m)
}

/// `(1/m) sum_k w_k a^{e_k} b^{1-e_k}`, dividing by `m` once at the end.
fn pair_power_mean<T: Float>(
    p: PositivePair<T>,
    terms: impl Iterator<Item = (T, T)>,
    m: usize,
) -> T {
    terms.fold(T::zero(), |acc, (w, e)| {
        acc + w * p.a.powf(e) * p.b.powf(T::one() - e)
    }) / count(m)
}

/// `(1/m) sum_{k=1}^m a^{(2k-1)/(2m)} b^{1-(2k-1)/(2m)}`, the two-variable `alpha_m`.
pub fn lower_sum_pair<T: Float>(p: PositivePair<T>, m: BoundOrder) -> T {
    let m = m.get();
    let two_m: T = count(2 * m);
    pair_power_mean(
        p,
        (1..=m).map(|k| (T::one(), count::<T>(2 * k - 1) / two_m)),
        m,
    )
}

/// `(1/m) sum_{k=1}^m a^{k/(m+1)} b^{(m+1-k)/(m+1)}`.
pub fn mid_sum_pair<T: Float>(p: PositivePair<T>, m: BoundOrder) -> T {
    let m = m.get();
    let denom: T = count(m + 1);
    pair_power_mean(p, (1..=m).map(|k| (T::one(), count::<T>(k) / denom)), m)
}

/// `(1/m) sum_{k=0}^{m-1} a^{k/(m-1)} b^{(m-1-k)/(m-1)}`; needs `m >= 2`.
pub fn upper_sum_pair<T: Float>(p: PositivePair<T>, m: BoundOrder) -> Result<T> {
    let m = m.require(2)?.get();
    let denom: T = count(m - 1);
    Ok(pair_power_mean(
        p,
        (0..m).map(|k| (T::one(), count::<T>(k) / denom)),
        m,
    ))
}

/// `(1/m) (sum_{k=0}^m a^{k/m} b^{(m-k)/m} - (a + b)/2)`, the two-variable `beta_m`.
///
/// Evaluated with trapezoid weights, so the endpoint halves are never
/// subtracted.
pub fn trapezoid_sum_pair<T: Float>(p: PositivePair<T>, m: BoundOrder) -> T {
    let m = m.get();
    let mm: T = count(m);
    let half = lit::<T>(0.5);
    pair_power_mean(
        p,
        (0..=m).map(|k| {
            (
                if k == 0 || k == m { half } else { T::one() },
                count::<T>(k) / mm,
            )
        }),
        m,
    )
}
