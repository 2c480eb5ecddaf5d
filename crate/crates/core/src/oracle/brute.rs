use std::ops::AddAssign;

use num_traits::Float;

use crate::error::{Error, Result};

/// Kahan-Babuska-Neumaier running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Float> NeumaierSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    pub fn total(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Float> AddAssign<T> for NeumaierSum<T> {
    fn add_assign(&mut self, x: T) {
        let s = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - s) + x);
        } else {
            self.compensation = self.compensation + ((x - s) + self.sum);
        }
        self.sum = s;
    }
}

impl<T: Float> FromIterator<T> for NeumaierSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc += x;
        }
        acc
    }
}

/// The finite sums evaluated term by term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    /// `(1/m) sum_{k=1}^m t^{(2k-1)/(2m)}`
    Alpha,
    /// `(1/m) (sum_{k=0}^m t^{k/m} - (t+1)/2)`
    Beta,
    /// `(1/m) sum_{k=1}^m t^{k/m}`
    Gamma,
    /// `(1/m) sum_{k=0}^{m-1} t^{k/m}`
    Delta,
    /// `sum_{k=1}^m t^{(2k-1)(m+1)} - sum_{k=1}^m t^{2km}`
    Lemma3,
    /// `sum_{k=1}^{m-1} (t^{km} - t^{k(m-1)}) - (t^{m(m-1)} - 1)/2`
    Lemma5,
    /// `m (t^{m-1} + 1)/2 - sum_{k=0}^{m-1} t^k`
    Induction,
}

pub const BRUTE_MAX_ORDER: usize = 64;

/// Naive evaluation with compensated accumulation; `m` in `[1, 64]`
/// (`[2, 64]` for `Lemma5` and `Induction`).
pub fn brute_sum<T: Float>(kind: SumKind, t: T, m: usize) -> Result<T> {
    let min = match kind {
        SumKind::Lemma5 | SumKind::Induction => 2,
        _ => 1,
    };
    if m < min || m > BRUTE_MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "brute-force order must be in [{min}, {BRUTE_MAX_ORDER}], got {m}"
        )));
    }
    if t <= T::zero() || !t.is_finite() {
        return Err(Error::NonPositiveScalar(t.to_f64().unwrap_or(f64::NAN)));
    }
    let f = |x: usize| T::from(x).expect("small integer");
    let mf = f(m);
    let ln_t = t.ln();
    let frac = |num: usize, den: usize| (ln_t * f(num) / f(den)).exp();
    let int = |e: usize| t.powi(e as i32);
    let half = T::one() / f(2);

    let value = match kind {
        SumKind::Alpha => {
            (1..=m)
                .map(|k| frac(2 * k - 1, 2 * m))
                .collect::<NeumaierSum<T>>()
                .total()
                / mf
        }
        SumKind::Beta => {
            let mut acc: NeumaierSum<T> = (0..=m).map(|k| frac(k, m)).collect();
            acc += -half * t;
            acc += -half;
            acc.total() / mf
        }
        SumKind::Gamma => {
            (1..=m)
                .map(|k| frac(k, m))
                .collect::<NeumaierSum<T>>()
                .total()
                / mf
        }
        SumKind::Delta => {
            (0..m)
                .map(|k| frac(k, m))
                .collect::<NeumaierSum<T>>()
                .total()
                / mf
        }
        SumKind::Lemma3 => (1..=m)
            .flat_map(|k| [int((2 * k - 1) * (m + 1)), -int(2 * k * m)])
            .collect::<NeumaierSum<T>>()
            .total(),
        SumKind::Lemma5 => {
            let mut acc: NeumaierSum<T> = (1..m)
                .flat_map(|k| [int(k * m), -int(k * (m - 1))])
                .collect();
            acc += -half * int(m * (m - 1));
            acc += half;
            acc.total()
        }
        SumKind::Induction => {
            let mut acc: NeumaierSum<T> = (0..m).map(|k| -int(k)).collect();
            acc += mf * half * int(m - 1);
            acc += mf * half;
            acc.total()
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let s: NeumaierSum<f64> = [1e18, 1.0, -1e18, 3.0].into_iter().collect();
        assert_eq!(s.total(), 4.0);
        let naive: f64 = [1e18, 1.0, -1e18, 3.0].iter().sum();
        assert_ne!(naive, 4.0);
    }

    #[test]
    fn examples() {
        assert_relative_eq!(
            brute_sum(SumKind::Alpha, 4.0, 2).unwrap(),
            2.121320343559643,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            brute_sum(SumKind::Beta, 1.0, 7).unwrap(),
            1.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            brute_sum(SumKind::Gamma, 4.0, 2).unwrap(),
            3.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            brute_sum(SumKind::Delta, 4.0, 2).unwrap(),
            1.5,
            max_relative = 1e-15
        );
        assert_eq!(brute_sum(SumKind::Lemma3, 2.0, 2).unwrap(), 248.0);
        assert_eq!(brute_sum(SumKind::Lemma5, 2.0, 2).unwrap(), 0.5);
        assert_eq!(brute_sum(SumKind::Induction, 1.0, 5).unwrap(), 0.0);
    }

    #[test]
    fn order_bounds() {
        assert!(brute_sum(SumKind::Alpha, 2.0, 0).is_err());
        assert!(brute_sum(SumKind::Alpha, 2.0, 65).is_err());
        assert!(brute_sum(SumKind::Lemma5, 2.0, 1).is_err());
        assert!(brute_sum(SumKind::Gamma, -1.0, 3).is_err());
    }
}
