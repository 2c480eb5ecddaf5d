use num_complex::Complex;
use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_part, weighted_geomean, ComplexMatrix, HermitianPsd};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    GaussLegendre,
    CompositeSimpson,
}

/// Nodes and weights on `[0, 1]`; weights sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// `n`-point Gauss-Legendre rule mapped to `[0, 1]`.
    ///
    /// Nodes are Newton-refined roots of `P_n` starting from the usual
    /// cosine estimates; exact for polynomials of degree `<= 2n - 1`.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 points, got {n}"
            )));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut deriv = 1.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                deriv = dp;
                let step = p / dp;
                x -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            if dp != 0.0 {
                deriv = dp;
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            // roots come in +/- pairs; map [-1, 1] -> [0, 1]
            nodes[i] = 0.5 * (1.0 - x);
            nodes[n - 1 - i] = 0.5 * (1.0 + x);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Ok(Self {
            kind: RuleKind::GaussLegendre,
            nodes,
            weights,
        })
    }

    /// Composite Simpson rule with `panels` panels (`2 * panels + 1` points).
    pub fn composite_simpson(panels: usize) -> Result<Self> {
        if panels < 1 {
            return Err(Error::InvalidArgument("need at least one panel".into()));
        }
        let n = 2 * panels;
        let h = 1.0 / n as f64;
        let nodes: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let weights = (0..=n)
            .map(|i| {
                let c = if i == 0 || i == n {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * h / 3.0
            })
            .collect();
        Ok(Self {
            kind: RuleKind::CompositeSimpson,
            nodes,
            weights,
        })
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn points(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn cast<T: Real>(x: f64) -> T {
    <T as num_traits::NumCast>::from(x).expect("node representable")
}

/// `sum_i w_i t^{x_i}`, approximating `integral_0^1 t^v dv = L(t, 1)`.
pub fn quad_scalar_integral<T: Float>(t: T, rule: &QuadratureRule) -> T {
    let ln_t = t.ln();
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .fold(T::zero(), |acc, (&x, &w)| {
            let x = T::from(x).expect("node representable");
            let w = T::from(w).expect("weight representable");
            acc + w * (x * ln_t).exp()
        })
}

/// `sum_i w_i A^{x_i} X B^{1 - x_i}` with explicit fractional powers.
pub fn quad_matrix_integral<T: Real>(
    a: &HermitianPsd<T>,
    b: &HermitianPsd<T>,
    x: &ComplexMatrix<T>,
    rule: &QuadratureRule,
) -> Result<ComplexMatrix<T>> {
    let n = a.dim();
    if b.dim() != n || x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: b.dim().max(x.nrows()),
        });
    }
    let mut acc = ComplexMatrix::<T>::zeros(n, n);
    for (&node, &w) in rule.nodes.iter().zip(&rule.weights) {
        let p: T = cast(node);
        let left = a.frac_power(p)?;
        let right = b.frac_power(T::one() - p)?;
        acc += left.matrix() * x * right.matrix() * Complex::new(cast::<T>(w), T::zero());
    }
    Ok(acc)
}

/// `sum_i w_i A #_{x_i} B`, each mean recomputed from scratch.
pub fn quad_geomean_integral<T: Real>(
    a: &HermitianPsd<T>,
    b: &HermitianPsd<T>,
    rule: &QuadratureRule,
) -> Result<ComplexMatrix<T>> {
    let n = a.dim();
    let mut acc = ComplexMatrix::<T>::zeros(n, n);
    for (&node, &w) in rule.nodes.iter().zip(&rule.weights) {
        let g = weighted_geomean(a, b, cast::<T>(node))?;
        acc += g.matrix() * Complex::new(cast::<T>(w), T::zero());
    }
    Ok(hermitian_part(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{frobenius_norm, integral_geomean, log_mean_map};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    #[test]
    fn rule_invariants() {
        for n in [2, 3, 8, 17, 64] {
            let r = QuadratureRule::gauss_legendre(n).unwrap();
            assert_eq!(r.points(), n);
            assert!((r.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(r.nodes().iter().all(|&x| x > 0.0 && x < 1.0));
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        }
        let s = QuadratureRule::composite_simpson(10).unwrap();
        assert_eq!(s.points(), 21);
        assert!((s.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(QuadratureRule::gauss_legendre(1).is_err());
        assert!(QuadratureRule::composite_simpson(0).is_err());
    }

    #[test]
    fn gauss_legendre_is_exact_on_monomials() {
        for n in [2usize, 5, 16, 64] {
            let r = QuadratureRule::gauss_legendre(n).unwrap();
            let max_deg = (2 * n - 1).min(40);
            for d in 0..=max_deg {
                let got = r.integrate(|x| x.powi(d as i32));
                assert!((got - 1.0 / (d as f64 + 1.0)).abs() < 1e-13, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn scalar_integral_examples() {
        let gl = QuadratureRule::gauss_legendre(64).unwrap();
        assert_eq!(
            quad_scalar_integral(1.0, &gl),
            gl.weights().iter().fold(0.0, |a, w| a + w)
        );
        assert_relative_eq!(quad_scalar_integral(1.0, &gl), 1.0, max_relative = 1e-14);
        assert_relative_eq!(
            quad_scalar_integral(4.0, &gl),
            3.0 / 4f64.ln(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn simpson_converges_at_fourth_order() {
        let exact = 3.0 / 4f64.ln();
        let e10 = (quad_scalar_integral(4.0, &QuadratureRule::composite_simpson(10).unwrap())
            - exact)
            .abs();
        let e100 = (quad_scalar_integral(4.0, &QuadratureRule::composite_simpson(100).unwrap())
            - exact)
            .abs();
        let order = (e10 / e100).log10();
        assert!((order - 4.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn matrix_oracles_agree_with_closed_forms() {
        let gl = QuadratureRule::gauss_legendre(64).unwrap();
        let g = DMatrix::from_fn(4, 4, |i, j| {
            Complex::new(
                (1.0 + i as f64 * j as f64).sin(),
                (i as f64 - j as f64).cos(),
            )
        });
        let a =
            HermitianPsd::new(&g * g.adjoint() + DMatrix::identity(4, 4) * Complex::new(0.05, 0.0))
                .unwrap();
        let h = DMatrix::from_fn(4, 4, |i, j| {
            Complex::new((2.0 * i as f64 - j as f64).cos(), 0.3 * j as f64)
        });
        let b =
            HermitianPsd::new(&h * h.adjoint() + DMatrix::identity(4, 4) * Complex::new(0.01, 0.0))
                .unwrap();
        let x = DMatrix::from_fn(4, 4, |i, j| Complex::new(i as f64 - j as f64, 0.5));

        let quad = quad_matrix_integral(&a, &b, &x, &gl).unwrap();
        let closed = log_mean_map(&a, &b, &x).unwrap();
        let scale = frobenius_norm(&x) * a.frobenius_norm().max(b.frobenius_norm());
        assert!(frobenius_norm(&(quad - closed)) < 1e-8 * scale);

        let quad = quad_geomean_integral(&a, &b, &gl).unwrap();
        let closed = integral_geomean(&a, &b).unwrap();
        assert!(
            frobenius_norm(&(quad - closed.matrix()))
                < 1e-8 * a.frobenius_norm().max(b.frobenius_norm())
        );

        let id = HermitianPsd::identity(4);
        let quad = quad_matrix_integral(&id, &id, &x, &gl).unwrap();
        assert!(frobenius_norm(&(quad - &x)) < 1e-13 * frobenius_norm(&x));
    }
}
