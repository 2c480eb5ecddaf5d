use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    self, CheckConfig, CheckFamily, CheckId, CheckResult, FrobeniusContext, GeomeanContext,
};
use super::instance::{gen_instance, log_uniform, splitmix64, trial_seed, InstanceSpec};
use super::report::{CheckMeta, CheckSummary, FailureRecord, Report, ReportMeta};
use crate::error::{Error, Result};
use crate::lemmas::{
    induction_monomials, lemma2_monomials, lemma3_monomials, lemma5_monomials, Monomials,
};
use crate::scalar::{BoundOrder, PositivePair};

/// Exponent triples drawn per trial for the `lemma2` check.
const LEMMA2_DRAWS: usize = 8;
const LEMMA2_MAX_EXP: u64 = 12;
const MATRIX_STREAM: u64 = 0xA076_1D64_78BD_642F;

#[derive(Debug, Clone, PartialEq)]
pub enum TrialOutcome {
    Evaluated(CheckResult),
    Skipped(String),
}

/// Every requested check on trial `index`.
pub fn run_trial(
    spec: &InstanceSpec,
    index: u64,
    ids: &[CheckId],
    cfg: &CheckConfig,
) -> Result<Vec<(CheckId, TrialOutcome)>> {
    let seed = trial_seed(spec.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = spec.eig_range;
    let pair = PositivePair::new(log_uniform(&mut rng, lo, hi), log_uniform(&mut rng, lo, hi))?;
    let t = pair.a() / pair.b();
    let triples: Vec<(u64, u64, u64)> = (0..LEMMA2_DRAWS)
        .map(|_| {
            let (p, q) = (
                rng.random_range(0..=LEMMA2_MAX_EXP),
                rng.random_range(0..=LEMMA2_MAX_EXP),
            );
            (p.min(q), rng.random_range(0..=LEMMA2_MAX_EXP), p.max(q))
        })
        .collect();

    let needs = |f: CheckFamily| ids.iter().any(|id| id.family() == f);
    let triple = if needs(CheckFamily::Frobenius) || needs(CheckFamily::Loewner) {
        Some(gen_instance(
            &spec.with_seed(splitmix64(seed ^ MATRIX_STREAM)),
        )?)
    } else {
        None
    };
    let frob = match &triple {
        Some(tr) if needs(CheckFamily::Frobenius) => Some(FrobeniusContext::new(tr)),
        _ => None,
    };
    let geo = match &triple {
        Some(tr) if needs(CheckFamily::Loewner) => Some(GeomeanContext::from_triple(tr)),
        _ => None,
    };

    let outcome = |r: Result<CheckResult>| match r {
        Ok(r) => TrialOutcome::Evaluated(r),
        Err(e) => TrialOutcome::Skipped(e.to_string()),
    };
    let context_err = |e: &Error| TrialOutcome::Skipped(e.to_string());

    let mut out = Vec::with_capacity(ids.len());
    for &id in ids {
        let o = match id {
            CheckId::LinBounds => {
                TrialOutcome::Evaluated(checks::check_scalar_lin_bounds(pair, cfg))
            }
            CheckId::Lemma1 => {
                TrialOutcome::Evaluated(checks::check_scalar_chain_lemma1(pair, cfg))
            }
            CheckId::LowerSums => {
                TrialOutcome::Evaluated(checks::check_scalar_lower_sums(pair, cfg))
            }
            CheckId::UpperSums => {
                TrialOutcome::Evaluated(checks::check_scalar_upper_sums(pair, cfg))
            }
            CheckId::RationalLower => {
                TrialOutcome::Evaluated(checks::check_scalar_rational(pair, cfg))
            }
            CheckId::Appendix => outcome(checks::check_appendix_props(t, cfg)),
            CheckId::Lemma2 => outcome(checks::check_lemma2(t, &triples, cfg)),
            CheckId::Lemma3 => outcome(checks::check_lemma3(t, cfg)),
            CheckId::Lemma5 => outcome(checks::check_lemma5(t, cfg)),
            CheckId::Induction => outcome(checks::check_induction(t, cfg)),
            CheckId::Zou
            | CheckId::RefinedUpper
            | CheckId::LowerChain
            | CheckId::UpperChain
            | CheckId::HkChains => {
                match frob.as_ref().expect("context built for Frobenius checks") {
                    Err(e) => context_err(e),
                    Ok(ctx) => outcome(match id {
                        CheckId::Zou => checks::check_frobenius_zou(ctx, cfg),
                        CheckId::RefinedUpper => checks::check_frobenius_refined_upper(ctx, cfg),
                        CheckId::LowerChain => checks::check_frobenius_lower_chain(ctx, cfg),
                        CheckId::UpperChain => checks::check_frobenius_upper_chain(ctx, cfg),
                        _ => checks::check_hk_chains(ctx, cfg),
                    }),
                }
            }
            CheckId::Props41 | CheckId::Props42 | CheckId::Props43 | CheckId::Props44 => {
                match geo.as_ref().expect("context built for Loewner checks") {
                    Err(e) => context_err(e),
                    Ok(ctx) => outcome(checks::check_geomean_props(id, ctx, cfg)),
                }
            }
        };
        out.push((id, o));
    }
    Ok(out)
}

/// Runs `trials` seeded trials of `ids`. Trials execute in parallel and are
/// aggregated in trial order, so the report depends only on the inputs.
pub fn run_suite(
    spec: &InstanceSpec,
    trials: u64,
    ids: &[CheckId],
    cfg: &CheckConfig,
) -> Result<Report> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    if ids.is_empty() {
        return Err(Error::InvalidArgument("no checks requested".into()));
    }
    spec.validate()?;
    cfg.validate()?;
    let mut ids = ids.to_vec();
    ids.sort();
    ids.dedup();

    let outcomes: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(spec, i, &ids, cfg))
        .collect::<Result<_>>()?;

    let mut summaries: Vec<CheckSummary> = ids.iter().map(|&id| CheckSummary::new(id)).collect();
    let mut failures = Vec::new();
    for (trial, per_check) in outcomes.into_iter().enumerate() {
        let trial = trial as u64;
        for (slot, (id, outcome)) in per_check.into_iter().enumerate() {
            match outcome {
                TrialOutcome::Skipped(_) => summaries[slot].record_skip(),
                TrialOutcome::Evaluated(r) => {
                    summaries[slot].record(trial, &r);
                    failures.extend(r.links.iter().filter(|l| !l.pass).map(|l| FailureRecord {
                        check_id: id,
                        trial,
                        seed: trial_seed(spec.seed, trial),
                        fingerprint: r.instance_fingerprint.clone(),
                        link: l.label.clone(),
                        margin: l.margin,
                        tolerance: l.tolerance,
                    }));
                }
            }
        }
    }

    Ok(Report {
        meta: ReportMeta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: spec.seed,
            trials,
            spec: spec.clone(),
            config: cfg.clone(),
            checks: ids.iter().map(|&id| CheckMeta::from(id)).collect(),
        },
        checks: summaries,
        failures,
    })
}

type Labelled = (String, Monomials<f64>);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaGridSummary {
    pub check_id: CheckId,
    pub evaluated: u64,
    pub failures: u64,
    pub skipped: u64,
    pub worst_normalized: f64,
    pub worst_x: f64,
    pub worst_label: String,
}

/// Exhaustive sweep of the polynomial lemmas: every `u, v, w <= max_exp`
/// with `w >= u`, and every order up to `max_order`, at each `x` in `xs`.
pub fn lemma_grid(
    xs: &[f64],
    max_exp: u64,
    max_order: usize,
    tolerance: f64,
) -> Result<Vec<LemmaGridSummary>> {
    let mut families: Vec<(CheckId, Vec<Labelled>)> = Vec::new();
    let mut l2 = Vec::new();
    for u in 0..=max_exp {
        for v in 0..=max_exp {
            for w in u..=max_exp {
                l2.push((format!("u={u},v={v},w={w}"), lemma2_monomials(u, v, w)?));
            }
        }
    }
    families.push((CheckId::Lemma2, l2));
    let orders = |min: usize| (min..=max_order).map(|m| BoundOrder::new(m).expect("m >= 1"));
    families.push((
        CheckId::Lemma3,
        orders(1)
            .map(|m| (format!("m={}", m.get()), lemma3_monomials(m)))
            .collect(),
    ));
    families.push((
        CheckId::Lemma5,
        orders(2)
            .map(|m| Ok((format!("m={}", m.get()), lemma5_monomials(m)?)))
            .collect::<Result<_>>()?,
    ));
    families.push((
        CheckId::Induction,
        orders(2)
            .map(|m| Ok((format!("m={}", m.get()), induction_monomials(m)?)))
            .collect::<Result<_>>()?,
    ));

    Ok(families
        .into_iter()
        .map(|(check_id, polys)| {
            let mut s = LemmaGridSummary {
                check_id,
                evaluated: 0,
                failures: 0,
                skipped: 0,
                worst_normalized: f64::INFINITY,
                worst_x: f64::NAN,
                worst_label: String::new(),
            };
            for &x in xs {
                for (label, poly) in &polys {
                    match poly.normalized(x) {
                        None => s.skipped += 1,
                        Some(v) => {
                            s.evaluated += 1;
                            if v < -tolerance {
                                s.failures += 1;
                            }
                            if v < s.worst_normalized {
                                s.worst_normalized = v;
                                s.worst_x = x;
                                s.worst_label = label.clone();
                            }
                        }
                    }
                }
            }
            s
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec(seed: u64) -> InstanceSpec {
        InstanceSpec {
            seed,
            dim: 4,
            ..Default::default()
        }
    }

    #[test]
    fn rejects_zero_trials_and_empty_checks() {
        let cfg = CheckConfig::default();
        assert!(run_suite(&small_spec(1), 0, &CheckId::ALL, &cfg).is_err());
        assert!(run_suite(&small_spec(1), 1, &[], &cfg).is_err());
    }

    #[test]
    fn deterministic_and_passing() {
        let cfg = CheckConfig::default();
        let r1 = run_suite(&small_spec(42), 12, &CheckId::ALL, &cfg).unwrap();
        let r2 = run_suite(&small_spec(42), 12, &CheckId::ALL, &cfg).unwrap();
        assert_eq!(r1.to_json(), r2.to_json());
        assert!(r1.passed(), "{:?}", r1.failures);
        assert_eq!(r1.checks.len(), CheckId::ALL.len());
        for c in &r1.checks {
            assert_eq!(c.trials, 12);
            assert_eq!(c.skipped, 0);
        }
        let r3 = run_suite(&small_spec(43), 12, &CheckId::ALL, &cfg).unwrap();
        assert_ne!(r1.to_json(), r3.to_json());
    }

    #[test]
    fn singular_instances_skip_loewner_checks() {
        let spec = InstanceSpec {
            seed: 7,
            dim: 6,
            vary_dim: false,
            require_pd: false,
            ..Default::default()
        };
        let r = run_suite(
            &spec,
            40,
            &[CheckId::Props42, CheckId::Zou],
            &CheckConfig::default(),
        )
        .unwrap();
        assert!(r.passed());
        assert!(r.summary(CheckId::Props42).unwrap().skipped > 0);
        assert_eq!(r.summary(CheckId::Zou).unwrap().skipped, 0);
    }

    #[test]
    fn lemma_grid_small() {
        let xs = [0.5, 1.0, 2.0];
        let s = lemma_grid(&xs, 3, 4, 1e-9).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|g| g.failures == 0 && g.skipped == 0));
        // (u, v, w) with w >= u: 4 * 4 * 10 / 4 ... counted directly
        assert_eq!(s[0].evaluated, 3 * 4 * 10);
        assert_eq!(s[1].evaluated, 3 * 4);
        assert_eq!(s[2].evaluated, 3 * 3);
    }
}
