//! The catalog of inequality checks.
//!
//! Every check evaluates one chain `q_0 <= q_1 <= ... <= q_k` (or the
//! reverse) and records each adjacent link as a signed margin
//! `larger - smaller`. A link passes when `margin >= -tolerance`, where the
//! tolerance is a relative factor times the natural scale of the instance.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lemmas::{
    induction_monomials, lemma2_monomials, lemma3_monomials, lemma5_monomials, Monomials,
};
use crate::matrix::{
    frobenius_norm, loewner_gap, log_mean_map, weighted_power_map, ComplexMatrix, GeometricPath,
    MeanTerm, MeanTriple,
};
use crate::scalar::{
    alpha_m, arith_mean, beta_m, delta_m, gamma_m, geo_mean, lin_upper, log_mean, lower_sum_pair,
    mid_sum_pair, polya_upper, rational_lower, trapezoid_sum_pair, upper_sum_pair, BoundOrder,
    PositivePair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    LinBounds,
    Lemma1,
    LowerSums,
    UpperSums,
    RationalLower,
    Lemma2,
    Lemma3,
    Lemma5,
    Induction,
    Appendix,
    Zou,
    RefinedUpper,
    LowerChain,
    UpperChain,
    HkChains,
    #[serde(rename = "props_41")]
    Props41,
    #[serde(rename = "props_42")]
    Props42,
    #[serde(rename = "props_43")]
    Props43,
    #[serde(rename = "props_44")]
    Props44,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckFamily {
    Scalar,
    Lemma,
    Frobenius,
    Loewner,
}

impl CheckId {
    pub const ALL: [CheckId; 19] = [
        CheckId::LinBounds,
        CheckId::Lemma1,
        CheckId::LowerSums,
        CheckId::UpperSums,
        CheckId::RationalLower,
        CheckId::Lemma2,
        CheckId::Lemma3,
        CheckId::Lemma5,
        CheckId::Induction,
        CheckId::Appendix,
        CheckId::Zou,
        CheckId::RefinedUpper,
        CheckId::LowerChain,
        CheckId::UpperChain,
        CheckId::HkChains,
        CheckId::Props41,
        CheckId::Props42,
        CheckId::Props43,
        CheckId::Props44,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::LinBounds => "lin_bounds",
            CheckId::Lemma1 => "lemma1",
            CheckId::LowerSums => "lower_sums",
            CheckId::UpperSums => "upper_sums",
            CheckId::RationalLower => "rational_lower",
            CheckId::Lemma2 => "lemma2",
            CheckId::Lemma3 => "lemma3",
            CheckId::Lemma5 => "lemma5",
            CheckId::Induction => "induction",
            CheckId::Appendix => "appendix",
            CheckId::Zou => "zou",
            CheckId::RefinedUpper => "refined_upper",
            CheckId::LowerChain => "lower_chain",
            CheckId::UpperChain => "upper_chain",
            CheckId::HkChains => "hk_chains",
            CheckId::Props41 => "props_41",
            CheckId::Props42 => "props_42",
            CheckId::Props43 => "props_43",
            CheckId::Props44 => "props_44",
        }
    }

    pub fn family(self) -> CheckFamily {
        use CheckId::*;
        match self {
            LinBounds | Lemma1 | LowerSums | UpperSums | RationalLower | Appendix => {
                CheckFamily::Scalar
            }
            Lemma2 | Lemma3 | Lemma5 | Induction => CheckFamily::Lemma,
            Zou | RefinedUpper | LowerChain | UpperChain | HkChains => CheckFamily::Frobenius,
            Props41 | Props42 | Props43 | Props44 => CheckFamily::Loewner,
        }
    }

    /// The inequality this check asserts, in plain notation.
    /// `L` is the logarithmic mean, `I(A,X,B)` the integral of `A^v X B^{1-v}`
    /// over `[0,1]`, `A#_vB` the weighted geometric mean.
    pub fn statement(self) -> &'static str {
        match self {
            CheckId::LinBounds => "sqrt(ab) <= L(a,b) <= ((a^(1/3)+b^(1/3))/2)^3",
            CheckId::Lemma1 => "L(a,b) <= ((a^(1/3)+b^(1/3))/2)^3 <= (2/3)sqrt(ab) + (1/3)(a+b)/2",
            CheckId::LowerSums => {
                "L(a,b) >= (1/m)sum_{k=1..m} a^((2k-1)/2m) b^(1-(2k-1)/2m) \
                 >= (1/m)sum_{k=1..m} a^(k/(m+1)) b^((m+1-k)/(m+1)) >= sqrt(ab), m >= 1"
            }
            CheckId::UpperSums => {
                "L(a,b) <= (1/m)(sum_{k=0..m} a^(k/m) b^((m-k)/m) - (a+b)/2) \
                 <= (1/m)sum_{k=0..m-1} a^(k/(m-1)) b^((m-1-k)/(m-1)) <= (a+b)/2, m >= 2"
            }
            CheckId::RationalLower => "sqrt(t) <= (t+t^(1/3))/(1+t^(1/3)) <= (t-1)/log t, t = a/b",
            CheckId::Lemma2 => "x^u(1-x^v) + x^w(x^v-1) >= 0 for integers u,v,w >= 0, w >= u, x > 0",
            CheckId::Lemma3 => "sum_{k=1..m} x^((2k-1)(m+1)) >= sum_{k=1..m} x^(2km), x > 0, m >= 1",
            CheckId::Lemma5 => "sum_{k=1..m-1} (x^(km) - x^(k(m-1))) >= (x^(m(m-1)) - 1)/2, x > 0, m >= 2",
            CheckId::Induction => "t^(m-1) + ... + t + 1 <= m(t^(m-1)+1)/2, t > 0, m >= 2",
            CheckId::Appendix => {
                "alpha_m <= alpha_(m+1), beta_(m+1) <= beta_m, alpha_m <= beta_m; \
                 0<t<1: alpha_m > gamma_m, beta_m < delta_m; t>1: alpha_m > delta_m, beta_m < gamma_m"
            }
            CheckId::Zou => "||I(A,X,B)||_F <= (1/3)||2A^(1/2)XB^(1/2) + (AX+XB)/2||_F",
            CheckId::RefinedUpper => {
                "||I(A,X,B)||_F <= ||(AX + 3A^(1/3)XB^(2/3) + 3A^(2/3)XB^(1/3) + XB)/8||_F \
                 <= (1/3)||2A^(1/2)XB^(1/2) + (AX+XB)/2||_F"
            }
            CheckId::LowerChain => {
                "||I(A,X,B)||_F >= (1/m)||sum_{k=1..m} A^((2k-1)/2m) X B^(1-(2k-1)/2m)||_F \
                 >= (1/m)||sum_{k=1..m} A^(k/(m+1)) X B^((m+1-k)/(m+1))||_F >= ||A^(1/2)XB^(1/2)||_F, m >= 1"
            }
            CheckId::UpperChain => {
                "||I(A,X,B)||_F <= (1/m)||sum_{k=0..m} A^(k/m) X B^((m-k)/m) - (AX+XB)/2||_F \
                 <= (1/m)||sum_{k=0..m-1} A^(k/(m-1)) X B^((m-1-k)/(m-1))||_F <= (1/2)||AX+XB||_F, m >= 2"
            }
            CheckId::HkChains => {
                "||I(A,X,B)||_F >= (1/m)||sum_{k=1..m} A^(k/(m+1)) X B^((m+1-k)/(m+1))||_F >= ||A^(1/2)XB^(1/2)||_F; \
                 ||I(A,X,B)||_F <= (1/m)||sum_{k=0..m-1} A^(k/(m-1)) X B^((m-1-k)/(m-1))||_F <= (1/2)||AX+XB||_F"
            }
            CheckId::Props41 => {
                "int A#_vB dv <= (1/4){(A+B)/2 + (3/2)(A#_(2/3)B + A#_(1/3)B)} \
                 <= c{(A+B)/2 + 2A#_(1/2)B}, c = 1/3 (c = 1/2 with --as-printed)"
            }
            CheckId::Props42 => {
                "int A#_vB dv >= (1/m)sum_{k=1..m} A#_((2k-1)/2m)B >= (1/m)sum_{k=1..m} A#_(k/(m+1))B >= A#_(1/2)B"
            }
            CheckId::Props43 => {
                "int A#_vB dv <= (1/m)(sum_{k=0..m} A#_(k/m)B - (A+B)/2) \
                 <= (1/m)sum_{k=0..m-1} A#_(k/(m-1))B <= (A+B)/2"
            }
            CheckId::Props44 => {
                "int A#_vB dv >= A#_(2/3)B - A#_(1/3)B + 2{(A#_(1/3)B)^(-1) + A^(-1)}^(-1) >= A#_(1/2)B"
            }
        }
    }

    pub fn statement_hash(self) -> String {
        let digest = Sha256::digest(self.statement().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

/// Alternative right-hand sides that disagree with their neighbours: the
/// last term of the Frobenius upper chain (`AX + BX` vs `AX + XB`) and the
/// outer coefficient of the geometric-mean upper combination (`1/2` vs `1/3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Corrected,
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Scalar links: `scalar * max(a, b)`.
    pub scalar: f64,
    /// Frobenius links: `matrix * ||X|| max(1, ||A||, ||B||)`; Loewner links:
    /// `matrix * max(1, ||RHS||)`.
    pub matrix: f64,
    /// Lemma gaps, normalized by the sum of term magnitudes.
    pub lemma: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            scalar: 1e-12,
            matrix: 1e-9,
            lemma: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub tolerances: Tolerances,
    pub lower_orders: Vec<usize>,
    pub upper_orders: Vec<usize>,
    pub variant: Variant,
}

pub const DEFAULT_LOWER_ORDERS: [usize; 6] = [1, 2, 3, 5, 10, 32];
pub const DEFAULT_UPPER_ORDERS: [usize; 5] = [2, 3, 5, 10, 32];

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            lower_orders: DEFAULT_LOWER_ORDERS.to_vec(),
            upper_orders: DEFAULT_UPPER_ORDERS.to_vec(),
            variant: Variant::Corrected,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lower_orders.is_empty() || self.lower_orders.contains(&0) {
            return Err(Error::InvalidArgument(
                "lower orders must be nonempty and >= 1".into(),
            ));
        }
        if self.upper_orders.is_empty() || self.upper_orders.iter().any(|&m| m < 2) {
            return Err(Error::InvalidArgument(
                "upper orders must be nonempty and >= 2".into(),
            ));
        }
        Ok(())
    }

    fn lower(&self) -> impl Iterator<Item = BoundOrder> + '_ {
        self.lower_orders
            .iter()
            .filter_map(|&m| BoundOrder::new(m).ok())
    }

    fn upper(&self) -> impl Iterator<Item = BoundOrder> + '_ {
        self.upper_orders
            .iter()
            .filter_map(|&m| BoundOrder::new(m).ok()?.require(2).ok())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub label: String,
    /// Signed `larger - smaller`, recorded before comparison.
    pub margin: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Link {
    pub fn relative(&self) -> f64 {
        self.margin / self.scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: CheckId,
    pub links: Vec<Link>,
    /// Links not evaluated (overflowing lemma terms, singular inputs).
    pub skipped: Vec<String>,
    /// Recorded but never asserted.
    pub observations: Vec<Observation>,
    pub instance_fingerprint: String,
    pub passed: bool,
}

impl CheckResult {
    pub fn link(&self, label: &str) -> Option<&Link> {
        self.links.iter().find(|l| l.label == label)
    }

    pub fn worst_relative(&self) -> Option<f64> {
        self.links.iter().map(Link::relative).reduce(f64::min)
    }
}

/// First 16 hex digits of SHA-256 over the bit patterns of `values`.
pub fn fingerprint(values: impl IntoIterator<Item = f64>) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_bits().to_le_bytes());
    }
    h.finalize()
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn triple_fingerprint(tr: &MeanTriple<f64>) -> String {
    let parts = [tr.a.matrix(), tr.b.matrix(), &tr.x];
    fingerprint(
        parts
            .into_iter()
            .flat_map(|m| m.iter().flat_map(|z| [z.re, z.im])),
    )
}

struct Builder {
    id: CheckId,
    links: Vec<Link>,
    skipped: Vec<String>,
    observations: Vec<Observation>,
    fingerprint: String,
}

impl Builder {
    fn new(id: CheckId, fingerprint: String) -> Self {
        Self {
            id,
            links: Vec::new(),
            skipped: Vec::new(),
            observations: Vec::new(),
            fingerprint,
        }
    }

    /// Link asserting `smaller <= larger`.
    fn leq(
        &mut self,
        label: impl Into<String>,
        smaller: f64,
        larger: f64,
        scale: f64,
        factor: f64,
    ) {
        self.margin(label, larger - smaller, scale, factor);
    }

    fn margin(&mut self, label: impl Into<String>, margin: f64, scale: f64, factor: f64) {
        let tolerance = factor * scale;
        self.links.push(Link {
            label: label.into(),
            margin,
            scale,
            tolerance,
            pass: margin >= -tolerance,
        });
    }

    fn gap(&mut self, label: String, mono: &Monomials<f64>, x: f64, factor: f64) {
        match mono.normalized(x) {
            Some(v) => self.margin(label, v, 1.0, factor),
            None => self.skipped.push(label),
        }
    }

    fn observe(&mut self, label: impl Into<String>, value: f64) {
        self.observations.push(Observation {
            label: label.into(),
            value,
        });
    }

    fn finish(self) -> CheckResult {
        let passed = self.links.iter().all(|l| l.pass);
        CheckResult {
            check_id: self.id,
            links: self.links,
            skipped: self.skipped,
            observations: self.observations,
            instance_fingerprint: self.fingerprint,
            passed,
        }
    }
}

fn pair_fp(p: PositivePair<f64>) -> String {
    fingerprint([p.a(), p.b()])
}

// ----------------------------------------------------------------------------
// scalar chains

pub fn check_scalar_lin_bounds(p: PositivePair<f64>, cfg: &CheckConfig) -> CheckResult {
    let (s, f) = (p.max(), cfg.tolerances.scalar);
    let mut b = Builder::new(CheckId::LinBounds, pair_fp(p));
    let l = log_mean(p);
    b.leq("geo<=L", geo_mean(p), l, s, f);
    b.leq("L<=lin", l, lin_upper(p), s, f);
    b.finish()
}

pub fn check_scalar_chain_lemma1(p: PositivePair<f64>, cfg: &CheckConfig) -> CheckResult {
    let (s, f) = (p.max(), cfg.tolerances.scalar);
    let mut b = Builder::new(CheckId::Lemma1, pair_fp(p));
    let lin = lin_upper(p);
    b.leq("L<=lin", log_mean(p), lin, s, f);
    b.leq("lin<=polya", lin, polya_upper(p), s, f);
    b.finish()
}

pub fn check_scalar_lower_sums(p: PositivePair<f64>, cfg: &CheckConfig) -> CheckResult {
    let (s, f) = (p.max(), cfg.tolerances.scalar);
    let mut b = Builder::new(CheckId::LowerSums, pair_fp(p));
    let (l, g) = (log_mean(p), geo_mean(p));
    for m in cfg.lower() {
        let (lower, mid) = (lower_sum_pair(p, m), mid_sum_pair(p, m));
        let k = m.get();
        b.leq(format!("m={k}:midpoint<=L"), lower, l, s, f);
        b.leq(format!("m={k}:hk<=midpoint"), mid, lower, s, f);
        b.leq(format!("m={k}:geo<=hk"), g, mid, s, f);
    }
    b.finish()
}

pub fn check_scalar_upper_sums(p: PositivePair<f64>, cfg: &CheckConfig) -> CheckResult {
    let (s, f) = (p.max(), cfg.tolerances.scalar);
    let mut b = Builder::new(CheckId::UpperSums, pair_fp(p));
    let (l, ar) = (log_mean(p), arith_mean(p));
    for m in cfg.upper() {
        let trap = trapezoid_sum_pair(p, m);
        let up = upper_sum_pair(p, m).expect("upper orders are >= 2");
        let k = m.get();
        b.leq(format!("m={k}:L<=trapezoid"), l, trap, s, f);
        b.leq(format!("m={k}:trapezoid<=hk"), trap, up, s, f);
        b.leq(format!("m={k}:hk<=arith"), up, ar, s, f);
    }
    b.finish()
}

pub fn check_scalar_rational(p: PositivePair<f64>, cfg: &CheckConfig) -> CheckResult {
    let (s, f) = (p.max(), cfg.tolerances.scalar);
    let mut b = Builder::new(CheckId::RationalLower, pair_fp(p));
    let r = rational_lower(p);
    b.leq("geo<=rational", geo_mean(p), r, s, f);
    b.leq("rational<=L", r, log_mean(p), s, f);
    b.finish()
}

/// Monotonicity and Riemann-sum comparisons of `alpha_m`, `beta_m` at `t`.
pub fn check_appendix_props(t: f64, cfg: &CheckConfig) -> Result<CheckResult> {
    check_appendix_orders(t, cfg.lower(), cfg.tolerances.scalar)
}

pub fn check_appendix_orders(
    t: f64,
    orders: impl IntoIterator<Item = BoundOrder>,
    factor: f64,
) -> Result<CheckResult> {
    PositivePair::ratio(t)?;
    let s = t.max(1.0);
    let mut b = Builder::new(CheckId::Appendix, fingerprint([t]));
    for m in orders {
        let k = m.get();
        let (a0, a1) = (alpha_m(t, m), alpha_m(t, m.next()));
        let (b0, b1) = (beta_m(t, m), beta_m(t, m.next()));
        b.leq(format!("m={k}:alpha_m<=alpha_m+1"), a0, a1, s, factor);
        b.leq(format!("m={k}:beta_m+1<=beta_m"), b1, b0, s, factor);
        b.leq(format!("m={k}:alpha<=beta"), a0, b0, s, factor);
        if t < 1.0 {
            b.leq(format!("m={k}:gamma<alpha"), gamma_m(t, m), a0, s, factor);
            b.leq(format!("m={k}:beta<delta"), b0, delta_m(t, m), s, factor);
        } else if t > 1.0 {
            b.leq(format!("m={k}:delta<alpha"), delta_m(t, m), a0, s, factor);
            b.leq(format!("m={k}:beta<gamma"), b0, gamma_m(t, m), s, factor);
        }
    }
    Ok(b.finish())
}

// ----------------------------------------------------------------------------
// lemma gaps

fn positive_x(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveScalar(x))
    }
}

pub fn check_lemma2(x: f64, triples: &[(u64, u64, u64)], cfg: &CheckConfig) -> Result<CheckResult> {
    positive_x(x)?;
    let mut b = Builder::new(CheckId::Lemma2, fingerprint([x]));
    for &(u, v, w) in triples {
        b.gap(
            format!("u={u},v={v},w={w}"),
            &lemma2_monomials(u, v, w)?,
            x,
            cfg.tolerances.lemma,
        );
    }
    Ok(b.finish())
}

pub fn check_lemma3(x: f64, cfg: &CheckConfig) -> Result<CheckResult> {
    positive_x(x)?;
    let mut b = Builder::new(CheckId::Lemma3, fingerprint([x]));
    for m in cfg.lower() {
        b.gap(
            format!("m={}", m.get()),
            &lemma3_monomials(m),
            x,
            cfg.tolerances.lemma,
        );
    }
    Ok(b.finish())
}

pub fn check_lemma5(x: f64, cfg: &CheckConfig) -> Result<CheckResult> {
    positive_x(x)?;
    let mut b = Builder::new(CheckId::Lemma5, fingerprint([x]));
    for m in cfg.upper() {
        b.gap(
            format!("m={}", m.get()),
            &lemma5_monomials(m)?,
            x,
            cfg.tolerances.lemma,
        );
    }
    Ok(b.finish())
}

pub fn check_induction(t: f64, cfg: &CheckConfig) -> Result<CheckResult> {
    positive_x(t)?;
    let mut b = Builder::new(CheckId::Induction, fingerprint([t]));
    for m in cfg.upper() {
        b.gap(
            format!("m={}", m.get()),
            &induction_monomials(m)?,
            t,
            cfg.tolerances.lemma,
        );
    }
    Ok(b.finish())
}

// ----------------------------------------------------------------------------
// Frobenius-norm chains

/// Quantities shared by every Frobenius check on one triple.
pub struct FrobeniusContext<'a> {
    triple: &'a MeanTriple<f64>,
    integral: f64,
    scale: f64,
    geo: f64,
    arith: f64,
    arith_printed: f64,
    fingerprint: String,
}

impl<'a> FrobeniusContext<'a> {
    pub fn new(triple: &'a MeanTriple<f64>) -> Result<Self> {
        let (a, b, x) = (&triple.a, &triple.b, &triple.x);
        let integral = frobenius_norm(&log_mean_map(a, b, x)?);
        let scale = frobenius_norm(x) * 1f64.max(a.frobenius_norm()).max(b.frobenius_norm());
        let half = a.frac_power(0.5)?.into_matrix() * x * b.frac_power(0.5)?.into_matrix();
        let ax = a.matrix() * x;
        let arith = 0.5 * frobenius_norm(&(&ax + x * b.matrix()));
        let arith_printed = 0.5 * frobenius_norm(&(&ax + b.matrix() * x));
        Ok(Self {
            triple,
            integral,
            scale,
            geo: frobenius_norm(&half),
            arith,
            arith_printed,
            fingerprint: triple_fingerprint(triple),
        })
    }

    /// `||sum_k c_k A^{p_k} X B^{1-p_k}||_F`.
    fn norm(&self, terms: &[(f64, f64)]) -> Result<f64> {
        let t = self.triple;
        Ok(frobenius_norm(&weighted_power_map(
            &t.a, &t.b, &t.x, terms,
        )?))
    }

    fn midpoint(&self, m: usize) -> Result<f64> {
        let w = 1.0 / m as f64;
        let terms: Vec<_> = (1..=m)
            .map(|k| (w, (2 * k - 1) as f64 / (2 * m) as f64))
            .collect();
        self.norm(&terms)
    }

    fn hk_lower(&self, m: usize) -> Result<f64> {
        let w = 1.0 / m as f64;
        let terms: Vec<_> = (1..=m).map(|k| (w, k as f64 / (m + 1) as f64)).collect();
        self.norm(&terms)
    }

    fn trapezoid(&self, m: usize) -> Result<f64> {
        let w = 1.0 / m as f64;
        let terms: Vec<_> = (0..=m)
            .map(|k| {
                (
                    if k == 0 || k == m { 0.5 * w } else { w },
                    k as f64 / m as f64,
                )
            })
            .collect();
        self.norm(&terms)
    }

    fn hk_upper(&self, m: usize) -> Result<f64> {
        let w = 1.0 / m as f64;
        let terms: Vec<_> = (0..m).map(|k| (w, k as f64 / (m - 1) as f64)).collect();
        self.norm(&terms)
    }

    fn lin_form(&self) -> Result<f64> {
        self.norm(&[
            (0.125, 1.0),
            (0.375, 1.0 / 3.0),
            (0.375, 2.0 / 3.0),
            (0.125, 0.0),
        ])
    }

    fn polya_form(&self) -> Result<f64> {
        let t = self.triple;
        let x = &t.x;
        let half = t.a.frac_power(0.5)?.into_matrix() * x * t.b.frac_power(0.5)?.into_matrix();
        let arith = (t.a.matrix() * x + x * t.b.matrix()) * Complex::new(0.5, 0.0);
        Ok(frobenius_norm(&(half * Complex::new(2.0, 0.0) + arith)) / 3.0)
    }

    fn builder(&self, id: CheckId) -> Builder {
        Builder::new(id, self.fingerprint.clone())
    }

    pub fn integral_norm(&self) -> f64 {
        self.integral
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

pub fn check_frobenius_zou(ctx: &FrobeniusContext, cfg: &CheckConfig) -> Result<CheckResult> {
    let mut b = ctx.builder(CheckId::Zou);
    b.leq(
        "int<=polya",
        ctx.integral,
        ctx.polya_form()?,
        ctx.scale,
        cfg.tolerances.matrix,
    );
    Ok(b.finish())
}

pub fn check_frobenius_refined_upper(
    ctx: &FrobeniusContext,
    cfg: &CheckConfig,
) -> Result<CheckResult> {
    let f = cfg.tolerances.matrix;
    let mut b = ctx.builder(CheckId::RefinedUpper);
    let lin = ctx.lin_form()?;
    b.leq("int<=lin", ctx.integral, lin, ctx.scale, f);
    b.leq("lin<=polya", lin, ctx.polya_form()?, ctx.scale, f);
    Ok(b.finish())
}

pub fn check_frobenius_lower_chain(
    ctx: &FrobeniusContext,
    cfg: &CheckConfig,
) -> Result<CheckResult> {
    let f = cfg.tolerances.matrix;
    let mut b = ctx.builder(CheckId::LowerChain);
    let mut previous: Option<f64> = None;
    let mut monotone = f64::INFINITY;
    for m in cfg.lower().map(BoundOrder::get) {
        let (mid, hk) = (ctx.midpoint(m)?, ctx.hk_lower(m)?);
        b.leq(
            format!("m={m}:midpoint<=int"),
            mid,
            ctx.integral,
            ctx.scale,
            f,
        );
        b.leq(format!("m={m}:hk<=midpoint"), hk, mid, ctx.scale, f);
        b.leq(format!("m={m}:geo<=hk"), ctx.geo, hk, ctx.scale, f);
        if let Some(prev) = previous {
            monotone = monotone.min((mid - prev) / ctx.scale);
        }
        previous = Some(mid);
    }
    if monotone.is_finite() {
        b.observe("midpoint_nondecreasing_in_m", monotone);
    }
    Ok(b.finish())
}

pub fn check_frobenius_upper_chain(
    ctx: &FrobeniusContext,
    cfg: &CheckConfig,
) -> Result<CheckResult> {
    let f = cfg.tolerances.matrix;
    let arith = match cfg.variant {
        Variant::Corrected => ctx.arith,
        Variant::AsPrinted => ctx.arith_printed,
    };
    let mut b = ctx.builder(CheckId::UpperChain);
    for m in cfg.upper().map(BoundOrder::get) {
        let (trap, hk) = (ctx.trapezoid(m)?, ctx.hk_upper(m)?);
        b.leq(
            format!("m={m}:int<=trapezoid"),
            ctx.integral,
            trap,
            ctx.scale,
            f,
        );
        b.leq(format!("m={m}:trapezoid<=hk"), trap, hk, ctx.scale, f);
        b.leq(format!("m={m}:hk<=arith"), hk, arith, ctx.scale, f);
    }
    Ok(b.finish())
}

pub fn check_hk_chains(ctx: &FrobeniusContext, cfg: &CheckConfig) -> Result<CheckResult> {
    let f = cfg.tolerances.matrix;
    let mut b = ctx.builder(CheckId::HkChains);
    for m in cfg.lower().map(BoundOrder::get) {
        let hk = ctx.hk_lower(m)?;
        b.leq(
            format!("lower m={m}:hk<=int"),
            hk,
            ctx.integral,
            ctx.scale,
            f,
        );
        b.leq(format!("lower m={m}:geo<=hk"), ctx.geo, hk, ctx.scale, f);
    }
    for m in cfg.upper().map(BoundOrder::get) {
        let hk = ctx.hk_upper(m)?;
        b.leq(
            format!("upper m={m}:int<=hk"),
            ctx.integral,
            hk,
            ctx.scale,
            f,
        );
        b.leq(
            format!("upper m={m}:hk<=arith"),
            hk,
            ctx.arith,
            ctx.scale,
            f,
        );
    }
    Ok(b.finish())
}

// ----------------------------------------------------------------------------
// Loewner-order chains of geometric means

/// Geometric-mean quantities shared by the Loewner checks on one `(A, B)`.
pub struct GeomeanContext {
    path: GeometricPath<f64>,
    integral: ComplexMatrix<f64>,
    fingerprint: String,
}

impl GeomeanContext {
    pub fn new(path: GeometricPath<f64>, fingerprint: String) -> Self {
        let integral = path.integral();
        Self {
            path,
            integral,
            fingerprint,
        }
    }

    pub fn from_triple(triple: &MeanTriple<f64>) -> Result<Self> {
        Ok(Self::new(
            GeometricPath::new(&triple.a, &triple.b)?,
            triple_fingerprint(triple),
        ))
    }

    fn mean_sum(&self, weights: impl Iterator<Item = (f64, f64)>) -> Result<ComplexMatrix<f64>> {
        let terms: Vec<_> = weights.map(|(c, nu)| (MeanTerm::Weighted(nu), c)).collect();
        self.path.combination(&terms)
    }

    fn leq(
        &self,
        b: &mut Builder,
        label: String,
        smaller: &ComplexMatrix<f64>,
        larger: &ComplexMatrix<f64>,
        factor: f64,
    ) -> Result<()> {
        let gap = loewner_gap(smaller, larger)?;
        let scale = 1f64.max(frobenius_norm(larger));
        b.margin(label, gap, scale, factor);
        Ok(())
    }

    pub fn integral(&self) -> &ComplexMatrix<f64> {
        &self.integral
    }
}

pub fn check_geomean_props(
    id: CheckId,
    ctx: &GeomeanContext,
    cfg: &CheckConfig,
) -> Result<CheckResult> {
    let f = cfg.tolerances.matrix;
    let mut b = Builder::new(id, ctx.fingerprint.clone());
    let int = &ctx.integral;
    let p = &ctx.path;
    match id {
        CheckId::Props41 => {
            let lin = p.combination(&[
                (MeanTerm::Arithmetic, 0.25),
                (MeanTerm::Weighted(2.0 / 3.0), 0.375),
                (MeanTerm::Weighted(1.0 / 3.0), 0.375),
            ])?;
            let c = match cfg.variant {
                Variant::Corrected => 1.0 / 3.0,
                Variant::AsPrinted => 0.5,
            };
            let polya = p.combination(&[
                (MeanTerm::Arithmetic, c),
                (MeanTerm::Weighted(0.5), 2.0 * c),
            ])?;
            ctx.leq(&mut b, "int<=lin".into(), int, &lin, f)?;
            ctx.leq(&mut b, "lin<=polya".into(), &lin, &polya, f)?;
        }
        CheckId::Props42 => {
            let geo = p.weighted_matrix(0.5)?;
            for m in cfg.lower().map(BoundOrder::get) {
                let w = 1.0 / m as f64;
                let mid =
                    ctx.mean_sum((1..=m).map(|k| (w, (2 * k - 1) as f64 / (2 * m) as f64)))?;
                let hk = ctx.mean_sum((1..=m).map(|k| (w, k as f64 / (m + 1) as f64)))?;
                ctx.leq(&mut b, format!("m={m}:midpoint<=int"), &mid, int, f)?;
                ctx.leq(&mut b, format!("m={m}:hk<=midpoint"), &hk, &mid, f)?;
                ctx.leq(&mut b, format!("m={m}:geo<=hk"), &geo, &hk, f)?;
            }
        }
        CheckId::Props43 => {
            let arith = p.term(MeanTerm::Arithmetic)?;
            for m in cfg.upper().map(BoundOrder::get) {
                let w = 1.0 / m as f64;
                let trap = ctx.mean_sum((0..=m).map(|k| {
                    (
                        if k == 0 || k == m { 0.5 * w } else { w },
                        k as f64 / m as f64,
                    )
                }))?;
                let hk = ctx.mean_sum((0..m).map(|k| (w, k as f64 / (m - 1) as f64)))?;
                ctx.leq(&mut b, format!("m={m}:int<=trapezoid"), int, &trap, f)?;
                ctx.leq(&mut b, format!("m={m}:trapezoid<=hk"), &trap, &hk, f)?;
                ctx.leq(&mut b, format!("m={m}:hk<=arith"), &hk, &arith, f)?;
            }
        }
        CheckId::Props44 => {
            let rational = p.combination(&[
                (MeanTerm::Weighted(2.0 / 3.0), 1.0),
                (MeanTerm::Weighted(1.0 / 3.0), -1.0),
                (MeanTerm::ParallelInverse(1.0 / 3.0), 1.0),
            ])?;
            let geo = p.weighted_matrix(0.5)?;
            ctx.leq(&mut b, "rational<=int".into(), &rational, int, f)?;
            ctx.leq(&mut b, "geo<=rational".into(), &geo, &rational, f)?;
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "`{other}` is not a geometric-mean check"
            )));
        }
    }
    Ok(b.finish())
}

/// Scalar counterpart of a geometric-mean or Frobenius check on `1 x 1` inputs.
pub fn scalar_reference(
    id: CheckId,
    p: PositivePair<f64>,
    cfg: &CheckConfig,
) -> Result<Vec<(String, f64)>> {
    let l = log_mean(p);
    let g = geo_mean(p);
    let mut out = Vec::new();
    let mut push = |label: String, smaller: f64, larger: f64| out.push((label, larger - smaller));
    match id {
        CheckId::Zou => push("int<=polya".into(), l, polya_upper(p)),
        CheckId::RefinedUpper => {
            push("int<=lin".into(), l, lin_upper(p));
            push("lin<=polya".into(), lin_upper(p), polya_upper(p));
        }
        CheckId::LowerChain | CheckId::Props42 => {
            for m in cfg.lower() {
                let k = m.get();
                let (lower, mid) = (lower_sum_pair(p, m), mid_sum_pair(p, m));
                push(format!("m={k}:midpoint<=int"), lower, l);
                push(format!("m={k}:hk<=midpoint"), mid, lower);
                push(format!("m={k}:geo<=hk"), g, mid);
            }
        }
        CheckId::UpperChain | CheckId::Props43 => {
            for m in cfg.upper() {
                let k = m.get();
                let (trap, up) = (trapezoid_sum_pair(p, m), upper_sum_pair(p, m)?);
                push(format!("m={k}:int<=trapezoid"), l, trap);
                push(format!("m={k}:trapezoid<=hk"), trap, up);
                push(format!("m={k}:hk<=arith"), up, arith_mean(p));
            }
        }
        CheckId::HkChains => {
            for m in cfg.lower() {
                let k = m.get();
                let mid = mid_sum_pair(p, m);
                push(format!("lower m={k}:hk<=int"), mid, l);
                push(format!("lower m={k}:geo<=hk"), g, mid);
            }
            for m in cfg.upper() {
                let k = m.get();
                let up = upper_sum_pair(p, m)?;
                push(format!("upper m={k}:int<=hk"), l, up);
                push(format!("upper m={k}:hk<=arith"), up, arith_mean(p));
            }
        }
        CheckId::Props41 => {
            let c = match cfg.variant {
                Variant::Corrected => 1.0 / 3.0,
                Variant::AsPrinted => 0.5,
            };
            let polya = c * (arith_mean(p) + 2.0 * g);
            push("int<=lin".into(), l, lin_upper(p));
            push("lin<=polya".into(), lin_upper(p), polya);
        }
        CheckId::Props44 => {
            let r = rational_lower(p);
            push("rational<=int".into(), r, l);
            push("geo<=rational".into(), g, r);
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "`{other}` has no matrix form"
            )))
        }
    }
    Ok(out)
}

/// `1 x 1` triple `(a, b, x)`.
pub fn scalar_triple(a: f64, b: f64, x: Complex<f64>) -> Result<MeanTriple<f64>> {
    use crate::matrix::HermitianPsd;
    MeanTriple::new(
        HermitianPsd::diagonal(&[a])?,
        HermitianPsd::diagonal(&[b])?,
        DMatrix::from_element(1, 1, x),
    )
}
