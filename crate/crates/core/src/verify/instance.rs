use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianPsd, MeanTriple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XKind {
    GaussianComplex,
    Identity,
    RankOne,
}

impl std::str::FromStr for XKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian_complex" | "gaussian" => Ok(Self::GaussianComplex),
            "identity" => Ok(Self::Identity),
            "rank_one" => Ok(Self::RankOne),
            other => Err(Error::InvalidSpec(format!("unknown x kind `{other}`"))),
        }
    }
}

/// Recipe for one random `(A, B, X)`.
///
/// Eigenvalues of `A` and `B` are log-uniform in `eig_range`; with
/// `require_pd = false` each one is independently replaced by an exact zero
/// with probability 1/4. When `vary_dim` is set the dimension is drawn
/// uniformly from `1..=dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    pub dim: usize,
    pub vary_dim: bool,
    pub eig_range: (f64, f64),
    pub require_pd: bool,
    pub x_kind: XKind,
}

pub const MAX_DIM: usize = 16;

impl Default for InstanceSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            dim: 8,
            vary_dim: true,
            eig_range: (1e-3, 1e3),
            require_pd: true,
            x_kind: XKind::GaussianComplex,
        }
    }
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.eig_range;
        if !(self.dim >= 1 && self.dim <= MAX_DIM) {
            return Err(Error::InvalidSpec(format!(
                "dim must be in [1, {MAX_DIM}], got {}",
                self.dim
            )));
        }
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "eig_range must satisfy 0 < lo <= hi, got ({lo}, {hi})"
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` within a batch seeded by `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Log-uniform draw in `[lo, hi]`.
pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    let u: f64 = rng.random();
    (lo.ln() + u * (hi.ln() - lo.ln())).exp().clamp(lo, hi)
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex<f64> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `diag(R)` folded into `Q`.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix<f64> {
    let qr = gaussian_matrix(rng, n, n).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex::new(1.0, 0.0)
        };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

fn random_psd(rng: &mut impl Rng, n: usize, spec: &InstanceSpec) -> Result<HermitianPsd<f64>> {
    let (lo, hi) = spec.eig_range;
    let q = random_unitary(rng, n);
    let values = DVector::from_fn(n, |_, _| {
        let v = log_uniform(rng, lo, hi);
        if !spec.require_pd && rng.random_range(0..4) == 0 {
            0.0
        } else {
            v
        }
    });
    HermitianPsd::from_eigen(values, q)
}

/// Dimension the instance with this spec will have.
pub fn instance_dim(spec: &InstanceSpec) -> usize {
    if spec.vary_dim {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(spec.seed));
        rng.random_range(1..=spec.dim)
    } else {
        spec.dim
    }
}

/// Deterministic `(A, B, X)` for `spec`.
pub fn gen_instance(spec: &InstanceSpec) -> Result<MeanTriple<f64>> {
    spec.validate()?;
    let n = instance_dim(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let a = random_psd(&mut rng, n, spec)?;
    let b = random_psd(&mut rng, n, spec)?;
    let x = match spec.x_kind {
        XKind::GaussianComplex => gaussian_matrix(&mut rng, n, n),
        XKind::Identity => DMatrix::identity(n, n),
        XKind::RankOne => {
            let u = gaussian_matrix(&mut rng, n, 1);
            let v = gaussian_matrix(&mut rng, n, 1);
            u * v.adjoint()
        }
    };
    MeanTriple::new(a, b, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::frobenius_norm;

    fn bits(m: &ComplexMatrix<f64>) -> Vec<u64> {
        m.iter()
            .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
            .collect()
    }

    #[test]
    fn deterministic() {
        let spec = InstanceSpec {
            seed: 99,
            ..Default::default()
        };
        let t1 = gen_instance(&spec).unwrap();
        let t2 = gen_instance(&spec).unwrap();
        assert_eq!(bits(t1.a.matrix()), bits(t2.a.matrix()));
        assert_eq!(bits(t1.b.matrix()), bits(t2.b.matrix()));
        assert_eq!(bits(&t1.x), bits(&t2.x));
        let t3 = gen_instance(&spec.with_seed(100)).unwrap();
        assert_ne!(bits(t1.a.matrix()), bits(t3.a.matrix()));
    }

    #[test]
    fn eigenvalues_in_range() {
        for seed in 0..20 {
            let spec = InstanceSpec {
                seed,
                eig_range: (1e-3, 1e3),
                ..Default::default()
            };
            let t = gen_instance(&spec).unwrap();
            assert!(t.a.min_eigenvalue() >= 1e-3 && t.a.max_eigenvalue() <= 1e3);
            assert!(t.b.is_positive_definite());
        }
    }

    #[test]
    fn singular_when_pd_not_required() {
        let zeros = (0..50)
            .map(|seed| InstanceSpec {
                seed,
                dim: 6,
                vary_dim: false,
                require_pd: false,
                ..Default::default()
            })
            .filter(|s| gen_instance(s).unwrap().a.min_eigenvalue() == 0.0)
            .count();
        assert!(zeros > 0);
    }

    #[test]
    fn unitary_and_x_kinds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_unitary(&mut rng, 5);
        assert!(frobenius_norm(&(q.adjoint() * &q - DMatrix::identity(5, 5))) < 1e-13);

        let base = InstanceSpec {
            seed: 3,
            dim: 4,
            vary_dim: false,
            ..Default::default()
        };
        let id = gen_instance(&InstanceSpec {
            x_kind: XKind::Identity,
            ..base.clone()
        })
        .unwrap();
        assert_eq!(id.x, DMatrix::identity(4, 4));
        let r1 = gen_instance(&InstanceSpec {
            x_kind: XKind::RankOne,
            ..base
        })
        .unwrap();
        let sv = r1.x.clone().singular_values();
        assert!(sv[1] < 1e-12 * sv[0]);
    }

    #[test]
    fn dims_vary_within_bounds() {
        let dims: std::collections::BTreeSet<usize> = (0..200)
            .map(|s| {
                instance_dim(&InstanceSpec {
                    seed: s,
                    ..Default::default()
                })
            })
            .collect();
        assert_eq!(
            dims.into_iter().collect::<Vec<_>>(),
            (1..=8).collect::<Vec<_>>()
        );
        assert_eq!(
            gen_instance(&InstanceSpec {
                dim: 1,
                vary_dim: false,
                ..Default::default()
            })
            .unwrap()
            .dim(),
            1
        );
    }

    #[test]
    fn rejects_invalid_spec() {
        assert!(gen_instance(&InstanceSpec {
            dim: 0,
            ..Default::default()
        })
        .is_err());
        assert!(gen_instance(&InstanceSpec {
            dim: 17,
            ..Default::default()
        })
        .is_err());
        assert!(gen_instance(&InstanceSpec {
            eig_range: (2.0, 1.0),
            ..Default::default()
        })
        .is_err());
        assert!(gen_instance(&InstanceSpec {
            eig_range: (0.0, 1.0),
            ..Default::default()
        })
        .is_err());
    }
}
