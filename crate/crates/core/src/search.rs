//! Numerical experiments on the scalar families: the smallest order at which
//! the trapezoid-type upper sum beats the cube-root power-mean bound, the
//! empirical convergence order of both refined families, and tightness rows.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{
    alpha_m, arith_mean, beta_m, delta_m, gamma_m, geo_mean, lin_upper, log_mean, lower_sum_pair,
    polya_upper, rational_lower, trapezoid_sum_pair, BoundOrder, PositivePair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "m", rename_all = "snake_case")]
pub enum MinM {
    Found(usize),
    /// Even `beta_{m_max}` exceeds the target.
    NotFound(usize),
}

impl MinM {
    pub fn value(self) -> Option<usize> {
        match self {
            MinM::Found(m) => Some(m),
            MinM::NotFound(_) => None,
        }
    }
}

fn beats_lin(t: f64, m: usize) -> bool {
    let order = BoundOrder::new(m).expect("m >= 1");
    beta_m(t, order) <= lin_upper(PositivePair::ratio(t).expect("t validated"))
}

fn check_min_m_args(t: f64, m_max: usize) -> Result<()> {
    PositivePair::ratio(t)?;
    if m_max < 2 {
        return Err(Error::OrderTooSmall { got: m_max, min: 2 });
    }
    Ok(())
}

/// Least `m` in `[1, m_max]` with `beta_m(t) <= lin_upper(t, 1)`, by
/// bisection on the non-increasing sequence `beta_m(t)`.
pub fn min_m_binary(t: f64, m_max: usize) -> Result<MinM> {
    check_min_m_args(t, m_max)?;
    if !beats_lin(t, m_max) {
        return Ok(MinM::NotFound(m_max));
    }
    let (mut lo, mut hi) = (1usize, m_max);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if beats_lin(t, mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(MinM::Found(lo))
}

/// Same as [`min_m_binary`] by exhaustive scan.
pub fn min_m_linear(t: f64, m_max: usize) -> Result<MinM> {
    check_min_m_args(t, m_max)?;
    Ok((1..=m_max)
        .find(|&m| beats_lin(t, m))
        .map_or(MinM::NotFound(m_max), MinM::Found))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMRow {
    pub t: f64,
    pub result: MinM,
    pub beta: f64,
    pub lin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMTable {
    pub rows: Vec<MinMRow>,
    /// Largest minimal `m` over the grid, `None` if any point was not found.
    pub grid_max: Option<usize>,
}

pub fn min_m_table(ts: &[f64], m_max: usize) -> Result<MinMTable> {
    let rows = ts
        .iter()
        .map(|&t| {
            let result = min_m_binary(t, m_max)?;
            let m = result.value().unwrap_or(m_max);
            Ok(MinMRow {
                t,
                result,
                beta: beta_m(t, BoundOrder::new(m)?),
                lin: lin_upper(PositivePair::ratio(t)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let grid_max = rows
        .iter()
        .map(|r| r.result.value())
        .collect::<Option<Vec<_>>>()
        .and_then(|v| v.into_iter().max());
    Ok(MinMTable { rows, grid_max })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub m: usize,
    pub alpha_error: f64,
    pub beta_error: f64,
    /// `log(e_prev / e) / log(m / m_prev)` against the previous row.
    pub alpha_local_order: Option<f64>,
    pub beta_local_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convergence {
    pub t: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Negated least-squares slope of `log error` against `log m`.
    pub alpha_order: f64,
    pub beta_order: f64,
}

fn fitted_order(ms: &[usize], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    -sxy / sxx
}

/// Errors `|alpha_m - L(t,1)|`, `|beta_m - L(t,1)|` and their fitted order.
pub fn convergence(t: f64, orders: &[usize]) -> Result<Convergence> {
    let pair = PositivePair::ratio(t)?;
    if t == 1.0 {
        return Err(Error::Precondition(
            "t = 1 gives zero error at every order; no order can be fitted".into(),
        ));
    }
    let mut ms = orders.to_vec();
    ms.sort_unstable();
    ms.dedup();
    if ms.len() < 2 {
        return Err(Error::Precondition(
            "need at least two distinct orders".into(),
        ));
    }
    let l = log_mean(pair);
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ms.len());
    for &m in &ms {
        let order = BoundOrder::new(m)?;
        let (ae, be) = ((alpha_m(t, order) - l).abs(), (beta_m(t, order) - l).abs());
        let local =
            |prev: f64, cur: f64, pm: usize| (prev / cur).ln() / (m as f64 / pm as f64).ln();
        let (alpha_local_order, beta_local_order) = match rows.last() {
            Some(p) => (
                Some(local(p.alpha_error, ae, p.m)),
                Some(local(p.beta_error, be, p.m)),
            ),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            m,
            alpha_error: ae,
            beta_error: be,
            alpha_local_order,
            beta_local_order,
        });
    }
    let ae: Vec<f64> = rows.iter().map(|r| r.alpha_error).collect();
    let be: Vec<f64> = rows.iter().map(|r| r.beta_error).collect();
    if ae.iter().chain(&be).any(|&e| e <= 0.0 || e.is_nan()) {
        return Err(Error::Precondition(format!(
            "error vanished at t = {t}; orders too large for double precision"
        )));
    }
    Ok(Convergence {
        t,
        alpha_order: fitted_order(&ms, &ae),
        beta_order: fitted_order(&ms, &be),
        rows,
    })
}

/// All means and bounds at one `(a, b, m)` with signed gaps `bound - L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub a: f64,
    pub b: f64,
    pub m: usize,
    pub log_mean: f64,
    pub geo: f64,
    pub arith: f64,
    pub lin: f64,
    pub polya: f64,
    pub rational: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl BoundsRow {
    pub fn new(pair: PositivePair<f64>, m: BoundOrder) -> Self {
        let (b, t) = (pair.b(), pair.a() / pair.b());
        Self {
            a: pair.a(),
            b,
            m: m.get(),
            log_mean: log_mean(pair),
            geo: geo_mean(pair),
            arith: arith_mean(pair),
            lin: lin_upper(pair),
            polya: polya_upper(pair),
            rational: rational_lower(pair),
            alpha: lower_sum_pair(pair, m),
            beta: trapezoid_sum_pair(pair, m),
            gamma: b * gamma_m(t, m),
            delta: b * delta_m(t, m),
        }
    }

    pub const VALUE_COLUMNS: [&'static str; 13] = [
        "a", "b", "m", "L", "geo", "arith", "lin", "polya", "rational", "alpha", "beta", "gamma",
        "delta",
    ];
    pub const GAP_COLUMNS: [&'static str; 9] = [
        "geo_gap",
        "arith_gap",
        "lin_gap",
        "polya_gap",
        "rational_gap",
        "alpha_gap",
        "beta_gap",
        "gamma_gap",
        "delta_gap",
    ];

    pub fn bounds(&self) -> [f64; 9] {
        [
            self.geo,
            self.arith,
            self.lin,
            self.polya,
            self.rational,
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
        ]
    }

    pub fn gaps(&self) -> [f64; 9] {
        self.bounds().map(|v| v - self.log_mean)
    }
}

/// `lo:hi:count:log` or `lo:hi:count:lin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub log: bool,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            lo: 1e-3,
            hi: 1e3,
            count: 61,
            log: true,
        }
    }
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        if n == 1 {
            return vec![self.lo];
        }
        let (l0, l1) = if self.log {
            (self.lo.log10(), self.hi.log10())
        } else {
            (self.lo, self.hi)
        };
        (0..n)
            .map(|k| match k {
                0 => self.lo,
                k if k == n - 1 => self.hi,
                k => {
                    let v = l0 + (l1 - l0) * k as f64 / (n - 1) as f64;
                    if self.log {
                        10f64.powf(v)
                    } else {
                        v
                    }
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("grid `{s}` is not lo:hi:count:log|lin"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count, kind] = parts.as_slice() else {
            return Err(bad());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        let log = match kind.trim() {
            "log" => true,
            "lin" => false,
            _ => return Err(bad()),
        };
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 || (count > 1 && hi == lo) {
            return Err(Error::InvalidArgument(format!(
                "grid `{s}` needs 0 < lo < hi and count >= 1"
            )));
        }
        Ok(Self { lo, hi, count, log })
    }
}
