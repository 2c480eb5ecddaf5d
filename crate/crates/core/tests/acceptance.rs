//! Acceptance suite. Runs every criterion in sequence, prints one
//! `PASS`/`FAIL` line per criterion and exits nonzero if any failed.

use std::process::Command;
use std::time::{Duration, Instant};

use logmean::matrix::{frobenius_norm, integral_geomean, log_mean_map};
use logmean::oracle::{
    brute_sum, default_rule, quad_geomean_integral, quad_matrix_integral, SumKind,
};
use logmean::scalar::{alpha_m, beta_m, BoundOrder, PositivePair};
use logmean::search::{convergence, min_m_binary, min_m_linear, Grid, MinM};
use logmean::verify::checks::{
    check_appendix_orders, check_frobenius_lower_chain, check_frobenius_refined_upper,
    check_frobenius_upper_chain, check_frobenius_zou, check_geomean_props, check_hk_chains,
    scalar_reference, FrobeniusContext, GeomeanContext,
};
use logmean::verify::{
    gen_instance, lemma_grid, log_uniform, run_suite, trial_seed, CheckConfig, CheckId,
    InstanceSpec, Report,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SCALAR_TOL: f64 = 1e-12;
const LEMMA_TOL: f64 = 1e-9;
const MATRIX_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-8;
const CLOSED_FORM_TOL: f64 = 1e-12;
const REDUCTION_TOL: f64 = 1e-12;
const MIN_M_AT_FOUR: usize = 18;

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn suite_detail(r: &Report) -> (bool, String) {
    let no_skips = r
        .checks
        .iter()
        .all(|c| c.skipped == 0 && c.trials == r.meta.trials);
    let worst = r
        .checks
        .iter()
        .filter_map(|c| c.worst_relative())
        .fold(f64::INFINITY, f64::min);
    let per: Vec<String> = r
        .checks
        .iter()
        .map(|c| format!("{}={}/{}", c.check_id, c.passed, c.trials))
        .collect();
    (
        r.passed() && no_skips,
        format!(
            "failures={} worst_relative_margin={worst:.3e} [{}]",
            r.total_failures(),
            per.join(" ")
        ),
    )
}

fn criterion_1() -> Outcome {
    let spec = InstanceSpec {
        seed: 1,
        eig_range: (1e-3, 1e3),
        ..Default::default()
    };
    let cfg = CheckConfig {
        tolerances: logmean::verify::Tolerances {
            scalar: SCALAR_TOL,
            ..Default::default()
        },
        ..Default::default()
    };
    let ids = [
        CheckId::LinBounds,
        CheckId::Lemma1,
        CheckId::LowerSums,
        CheckId::UpperSums,
        CheckId::RationalLower,
    ];
    let r = run_suite(&spec, 10_000, &ids, &cfg).expect("suite runs");
    let (ok, detail) = suite_detail(&r);
    outcome(
        ok,
        format!(
            "10000 pairs, m in {:?}/{:?}: {detail}",
            cfg.lower_orders, cfg.upper_orders
        ),
    )
}

fn criterion_2() -> Outcome {
    let xs = Grid {
        lo: 1e-3,
        hi: 1e3,
        count: 41,
        log: true,
    }
    .points();
    let sweep = lemma_grid(&xs, 12, 10, LEMMA_TOL).expect("grid runs");
    let ok = sweep
        .iter()
        .all(|s| s.failures == 0 && s.skipped == 0 && s.evaluated > 0);
    let detail: Vec<String> = sweep
        .iter()
        .map(|s| {
            format!(
                "{}: {} evaluated, {} failed, min normalized {:.3e}",
                s.check_id, s.evaluated, s.failures, s.worst_normalized
            )
        })
        .collect();
    outcome(
        ok,
        format!("41-point x grid in [1e-3, 1e3]; {}", detail.join("; ")),
    )
}

fn criterion_3() -> Outcome {
    let spec = InstanceSpec {
        seed: 3,
        ..Default::default()
    };
    let ids = [
        CheckId::Zou,
        CheckId::RefinedUpper,
        CheckId::LowerChain,
        CheckId::UpperChain,
        CheckId::HkChains,
    ];
    let r = run_suite(&spec, 1000, &ids, &CheckConfig::default()).expect("suite runs");
    let (ok, detail) = suite_detail(&r);
    let tol_ok = r.meta.config.tolerances.matrix == MATRIX_TOL;
    outcome(
        ok && tol_ok,
        format!("1000 triples, dim 1..=8, eig (1e-3, 1e3): {detail}"),
    )
}

fn criterion_4() -> Outcome {
    let spec = InstanceSpec {
        seed: 4,
        eig_range: (1e-2, 1e2),
        ..Default::default()
    };
    let conditioned = (0..500).all(|i| {
        let tr = gen_instance(&spec.with_seed(trial_seed(spec.seed, i))).expect("instance");
        [&tr.a, &tr.b]
            .iter()
            .all(|m| m.max_eigenvalue() / m.min_eigenvalue() <= 1e4 * (1.0 + 1e-12))
    });
    let ids = [
        CheckId::Props41,
        CheckId::Props42,
        CheckId::Props43,
        CheckId::Props44,
    ];
    let r = run_suite(&spec, 500, &ids, &CheckConfig::default()).expect("suite runs");
    let (ok, detail) = suite_detail(&r);
    outcome(
        ok && conditioned,
        format!("500 PD pairs, condition <= 1e4 ({conditioned}): {detail}"),
    )
}

fn criterion_5() -> Outcome {
    let rule = default_rule();
    let mut worst_map = 0f64;
    let mut worst_geo = 0f64;
    for i in 0..200 {
        let tr = gen_instance(&InstanceSpec {
            seed: trial_seed(5, i),
            ..Default::default()
        })
        .expect("instance");
        let scale =
            frobenius_norm(&tr.x) * 1f64.max(tr.a.frobenius_norm()).max(tr.b.frobenius_norm());
        let exact = log_mean_map(&tr.a, &tr.b, &tr.x).expect("map");
        let quad = quad_matrix_integral(&tr.a, &tr.b, &tr.x, &rule).expect("quadrature");
        worst_map = worst_map.max(frobenius_norm(&(exact - quad)) / scale);

        let exact = integral_geomean(&tr.a, &tr.b)
            .expect("geomean")
            .into_matrix();
        let quad = quad_geomean_integral(&tr.a, &tr.b, &rule).expect("quadrature");
        let scale = 1f64.max(frobenius_norm(&exact));
        worst_geo = worst_geo.max(frobenius_norm(&(exact - quad)) / scale);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst_closed = 0f64;
    for _ in 0..10_000 {
        let t = log_uniform(&mut rng, 1e-3, 1e3);
        let m = rng.random_range(1..=64usize);
        let order = BoundOrder::new(m).unwrap();
        let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
        worst_closed = worst_closed
            .max(rel(
                alpha_m(t, order),
                brute_sum(SumKind::Alpha, t, m).unwrap(),
            ))
            .max(rel(
                beta_m(t, order),
                brute_sum(SumKind::Beta, t, m).unwrap(),
            ));
    }
    let ok = worst_map <= ORACLE_TOL && worst_geo <= ORACLE_TOL && worst_closed <= CLOSED_FORM_TOL;
    outcome(
        ok,
        format!(
            "200 instances, 64-point Gauss-Legendre: map {worst_map:.2e}, geomean {worst_geo:.2e} (tol {ORACLE_TOL:e}); \
             alpha/beta closed vs brute over 10000 (t, m): {worst_closed:.2e} (tol {CLOSED_FORM_TOL:e})"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let t = log_uniform(&mut rng, 1e-3, 1e3);
        let m = BoundOrder::new(rng.random_range(1..=64usize)).unwrap();
        let r = check_appendix_orders(t, [m], SCALAR_TOL).expect("check runs");
        if !r.passed {
            failures += 1;
        }
        worst = worst.min(r.worst_relative().unwrap_or(0.0));
    }
    let mut slopes = Vec::new();
    let mut slopes_ok = true;
    for t in [0.1, 0.5, 2.0, 10.0] {
        let c = convergence(t, &[8, 16, 32, 64]).expect("fit");
        slopes_ok &= (1.8..=2.2).contains(&c.alpha_order) && (1.8..=2.2).contains(&c.beta_order);
        slopes_ok &= c
            .rows
            .windows(2)
            .all(|w| w[1].alpha_error < w[0].alpha_error && w[1].beta_error < w[0].beta_error);
        slopes.push(format!("t={t}: {:.3}/{:.3}", c.alpha_order, c.beta_order));
    }
    outcome(
        failures == 0 && slopes_ok,
        format!(
            "10000 (t, m) samples: {failures} failing, worst relative margin {worst:.3e}; fitted orders alpha/beta {}",
            slopes.join(", ")
        ),
    )
}

fn criterion_7() -> Outcome {
    let cfg = CheckConfig::default();
    let mut worst = 0f64;
    let mut compared = 0usize;
    let mut mismatched_labels = 0usize;
    for i in 0..500 {
        let spec = InstanceSpec {
            seed: trial_seed(7, i),
            dim: 1,
            vary_dim: false,
            ..Default::default()
        };
        let tr = gen_instance(&spec).expect("instance");
        let (a, b) = (tr.a.max_eigenvalue(), tr.b.max_eigenvalue());
        let xabs = tr.x[(0, 0)].norm();
        let pair = PositivePair::new(a, b).unwrap();
        let scale = 1f64.max(a).max(b);
        let frob = FrobeniusContext::new(&tr).expect("context");
        let geo = GeomeanContext::from_triple(&tr).expect("context");
        let results = [
            (check_frobenius_zou(&frob, &cfg).unwrap(), xabs),
            (check_frobenius_refined_upper(&frob, &cfg).unwrap(), xabs),
            (check_frobenius_lower_chain(&frob, &cfg).unwrap(), xabs),
            (check_frobenius_upper_chain(&frob, &cfg).unwrap(), xabs),
            (check_hk_chains(&frob, &cfg).unwrap(), xabs),
            (
                check_geomean_props(CheckId::Props41, &geo, &cfg).unwrap(),
                1.0,
            ),
            (
                check_geomean_props(CheckId::Props42, &geo, &cfg).unwrap(),
                1.0,
            ),
            (
                check_geomean_props(CheckId::Props43, &geo, &cfg).unwrap(),
                1.0,
            ),
            (
                check_geomean_props(CheckId::Props44, &geo, &cfg).unwrap(),
                1.0,
            ),
        ];
        for (r, factor) in results {
            let reference = scalar_reference(r.check_id, pair, &cfg).unwrap();
            if reference.len() != r.links.len() {
                mismatched_labels += 1;
            }
            for (label, margin) in reference {
                match r.link(&label) {
                    Some(l) => {
                        worst = worst.max((l.margin - factor * margin).abs() / (factor * scale));
                        compared += 1;
                    }
                    None => mismatched_labels += 1,
                }
            }
        }
    }
    outcome(
        worst <= REDUCTION_TOL && mismatched_labels == 0,
        format!("500 dim-1 instances, 9 matrix checks, {compared} links: worst |diff|/scale {worst:.2e} (tol {REDUCTION_TOL:e})"),
    )
}

fn criterion_8() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_logmean");
    let dir = std::env::temp_dir().join(format!("logmean-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let mut outputs = Vec::new();
    let mut codes = Vec::new();
    for (i, format) in ["csv", "csv", "json", "json"].iter().enumerate() {
        let path = dir.join(format!("report{i}.{format}"));
        let status = Command::new(exe)
            .args([
                "verify", "--seed", "42", "--trials", "100", "--format", format, "--output",
            ])
            .arg(&path)
            .output()
            .expect("binary runs");
        codes.push(status.status.code());
        outputs.push(std::fs::read(&path).expect("report written"));
    }
    let _ = std::fs::remove_dir_all(&dir);
    let ok = outputs[0] == outputs[1]
        && outputs[2] == outputs[3]
        && codes.iter().all(|c| *c == Some(0))
        && !outputs[0].is_empty();
    outcome(
        ok,
        format!("`verify --seed 42 --trials 100` twice: csv {} bytes identical={}, json {} bytes identical={}, exit codes {codes:?}",
            outputs[0].len(), outputs[0] == outputs[1], outputs[2].len(), outputs[2] == outputs[3]),
    )
}

fn criterion_9() -> Outcome {
    let m_max = 1_000_000;
    let grid = Grid {
        lo: 1e-3,
        hi: 1e3,
        count: 21,
        log: true,
    }
    .points();
    let mut agree = true;
    let mut largest = 0;
    for &t in &grid {
        let (b, l) = (
            min_m_binary(t, m_max).unwrap(),
            min_m_linear(t, m_max).unwrap(),
        );
        agree &= b == l;
        largest = largest.max(b.value().unwrap_or(usize::MAX));
    }
    let four = min_m_binary(4.0, m_max).unwrap();
    outcome(
        agree && four == MinM::Found(MIN_M_AT_FOUR),
        format!("21-point grid, m_max = 1e6: binary == linear {agree}, grid max m {largest}; t=4 -> {four:?} (fixture {MIN_M_AT_FOUR})"),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("scalar chain suite", Duration::from_secs(5), criterion_1),
        ("lemma grid suite", Duration::from_secs(5), criterion_2),
        (
            "matrix Frobenius suite",
            Duration::from_secs(60),
            criterion_3,
        ),
        ("Loewner suite", Duration::from_secs(30), criterion_4),
        ("oracle equivalence", Duration::from_secs(60), criterion_5),
        ("appendix suite", Duration::from_secs(60), criterion_6),
        ("1x1 reduction", Duration::from_secs(60), criterion_7),
        ("determinism", Duration::from_secs(60), criterion_8),
        ("min-m search", Duration::from_secs(60), criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, target, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let timing = if elapsed <= *target { "within" } else { "OVER" };
        println!(
            "acceptance {} {status} {name}: {} [{:.2}s, {timing} target {}s]",
            i + 1,
            o.detail,
            elapsed.as_secs_f64(),
            target.as_secs()
        );
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
