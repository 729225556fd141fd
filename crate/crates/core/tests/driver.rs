mod common;

use bmoo::domination::pareto_dominates;
use bmoo::driver::bench::{header, mean_sd, summarize};
use bmoo::driver::design::{initial_design, latin_hypercube, min_pairwise_distance};
use bmoo::driver::{is_duplicate, run_bmoo, select_next, Metrics, RunConfig, RunRecord};
use bmoo::problems::{get, Suite};
use bmoo::rng::stream;

#[test]
fn latin_hypercube_strata() {
    for seed in 0..10 {
        let n = 7 + seed as usize;
        let pts = latin_hypercube(n, 4, &mut stream(seed, "lhs", 0));
        for j in 0..4 {
            let mut strata: Vec<usize> = pts.iter().map(|x| (x[j] * n as f64) as usize).collect();
            strata.sort();
            assert_eq!(strata, (0..n).collect::<Vec<_>>());
        }
    }
}

#[test]
fn maximin_beats_median_random_design() {
    let (n, d) = (10, 3);
    for seed in 0..20 {
        let best = initial_design(n, &[0.0; 3], &[1.0; 3], 1000, &mut stream(seed, "design", 0));
        let mut random: Vec<f64> =
            (0..101).map(|k| min_pairwise_distance(&latin_hypercube(n, d, &mut stream(seed, "other", k)))).collect();
        random.sort_by(f64::total_cmp);
        assert!(min_pairwise_distance(&best) >= random[50]);
    }
    let a = initial_design(5, &[-5.0, 0.0], &[10.0, 15.0], 50, &mut stream(3, "design", 0));
    let b = initial_design(5, &[-5.0, 0.0], &[10.0, 15.0], 50, &mut stream(3, "design", 0));
    assert_eq!(a, b);
    assert!(a.iter().all(|x| (-5.0..=10.0).contains(&x[0]) && (0.0..=15.0).contains(&x[1])));
}

#[test]
fn select_next_rules() {
    assert_eq!(select_next(&[0.3], &[1.0], &[false]), Some(0));
    assert_eq!(select_next(&[0.5, 0.5, 0.5], &[1.0, 2.0, 3.0], &[false; 3]), Some(0));
    assert_eq!(select_next(&[0.1, 0.7, 0.7, 0.2], &[0.0; 4], &[false; 4]), Some(1));
    assert_eq!(select_next(&[0.1, 0.7, 0.2], &[0.0; 3], &[false, true, false]), Some(2));
    // no positive criterion: largest posterior variance
    assert_eq!(select_next(&[0.0, 0.0, 0.0], &[1.0, 5.0, 2.0], &[false; 3]), Some(1));
    assert_eq!(select_next(&[0.0, 0.0], &[1.0, 5.0], &[false, true]), Some(0));
    assert_eq!(select_next(&[0.4, 0.2], &[1.0, 1.0], &[true, true]), None);
}

#[test]
fn duplicate_detection_uses_normalized_distance() {
    let design = vec![vec![0.0, 100.0]];
    let (lo, hi) = ([0.0, 0.0], [1.0, 1000.0]);
    assert!(is_duplicate(&[0.0, 100.0 + 1e-7], &design, &lo, &hi));
    assert!(!is_duplicate(&[1e-8, 100.0], &design, &lo, &hi));
}

fn small(problem: &str, budget: usize, seed: u64) -> RunConfig {
    let mut cfg = RunConfig::new(problem, budget, seed);
    cfg.m_x = 200;
    cfg.m_y = 200;
    cfg.lhs_candidates = 100;
    cfg.record_timing = false;
    cfg
}

#[test]
fn runs_are_reproducible_and_exact_in_budget() {
    let cfg = small("g24", 12, 5);
    let a = run_bmoo(&cfg).unwrap();
    let b = run_bmoo(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.entries.len(), 12);
    assert!(a.aborted.is_none());
    let meta = get("g24").unwrap().meta;
    assert_eq!(Metrics::compute(&a.entries, &meta).unwrap(), a.metrics);
    let first = a.entries.iter().position(|e| e.c.iter().all(|&v| v <= 1e-5)).map(|i| i + 1);
    assert_eq!(a.metrics.first_feasible, first);
    // the criterion is recorded for every iteration after the initial design
    let n0 = cfg.initial_size(&meta);
    assert!(a.entries[..n0].iter().all(|e| e.ei.is_none()));
    assert!(a.entries[n0..].iter().all(|e| e.ei.is_some_and(|v| v >= 0.0) && e.bounds.is_some()));
    let json = a.to_json().unwrap();
    assert_eq!(RunRecord::from_json(&json).unwrap(), a);
    assert!(RunRecord::from_json(&json.replacen("\"schema_version\": 1", "\"schema_version\": 99", 1)).is_err());
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(run_bmoo(&small("g24", 6, 0)).is_err());
    let mut cfg = small("g24", 20, 0);
    cfg.m_x = 5;
    assert!(run_bmoo(&cfg).is_err());
    assert!(run_bmoo(&small("unknown", 20, 0)).is_err());
}

#[test]
fn toy_run_finds_a_feasible_front() {
    let rec = run_bmoo(&RunConfig::new("toy", 60, 0)).unwrap();
    assert_eq!(rec.entries.len(), 60);
    assert!(rec.metrics.first_feasible.is_some());
    let feas: Vec<&Vec<f64>> = rec.entries.iter().filter(|e| e.feasible).map(|e| &e.f).collect();
    let nondominated = feas.iter().filter(|a| !feas.iter().any(|b| pareto_dominates(b, a))).count();
    assert!(nondominated >= 5, "{nondominated} nondominated feasible points");
}

#[test]
fn running_best_is_nonincreasing() {
    let rec = run_bmoo(&small("g24", 20, 1)).unwrap();
    let mut best = f64::INFINITY;
    for e in rec.entries.iter().filter(|e| e.feasible) {
        let next = best.min(e.f[0]);
        assert!(next <= best);
        best = next;
    }
    assert_eq!(rec.metrics.best_feasible, Some(best).filter(|v| v.is_finite()));
}

#[test]
fn bench_table_formatting() {
    assert_eq!(mean_sd(&[]), "-");
    assert_eq!(mean_sd(&[3.0]), "3.0 (-)");
    assert_eq!(mean_sd(&[1.0, 3.0]), "2.0 (1.4)");
    assert_eq!(header(Suite::Mono), ["problem", "n_success_feasible", "mean(sd)_feasible", "n_success_target", "mean(sd)_target"]);
    let multi = header(Suite::Multi);
    assert_eq!(multi.len(), 7);
    assert_eq!(multi[1], "n_success_90");
    assert_eq!(multi[6], "mean(sd)_99");
    let rec = run_bmoo(&small("g24", 11, 2)).unwrap();
    let row = summarize("g24", Suite::Mono, std::slice::from_ref(&rec));
    assert_eq!(row.len(), 5);
    assert_eq!(row[0], "g24");
}
