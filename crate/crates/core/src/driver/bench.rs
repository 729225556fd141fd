//! Repeated runs over a suite, summarized as tables of evaluation counts.

use super::{run_bmoo, RunConfig, RunRecord, HV_LEVELS};
use crate::error::Result;
use crate::problems::{list_problems, Suite};
use std::path::Path;
use std::sync::Mutex;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub suite: Suite,
    pub repeats: usize,
    pub budget: usize,
    pub jobs: usize,
    pub seed: u64,
    /// Applied to every run after the problem, budget and seed are set.
    pub template: RunConfig,
}

/// `"mean (sd)"`, `"mean (-)"` with a single value, `"-"` with none.
pub fn mean_sd(values: &[f64]) -> String {
    match values.len() {
        0 => "-".to_string(),
        1 => format!("{:.1} (-)", values[0]),
        n => {
            let mean = values.iter().sum::<f64>() / n as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            format!("{:.1} ({:.1})", mean, var.sqrt())
        }
    }
}

fn counts(records: &[RunRecord], pick: impl Fn(&RunRecord) -> Option<usize>) -> Vec<f64> {
    records.iter().filter_map(|r| pick(r).map(|v| v as f64)).collect()
}

pub fn header(suite: Suite) -> Vec<String> {
    match suite {
        Suite::Multi => {
            let mut h = vec!["problem".to_string()];
            for l in HV_LEVELS {
                let pct = (l * 100.0).round();
                h.push(format!("n_success_{pct}"));
                h.push(format!("mean(sd)_{pct}"));
            }
            h
        }
        _ => ["problem", "n_success_feasible", "mean(sd)_feasible", "n_success_target", "mean(sd)_target"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    }
}

/// One table row for the runs of one problem.
pub fn summarize(problem: &str, suite: Suite, records: &[RunRecord]) -> Vec<String> {
    let mut row = vec![problem.to_string()];
    if suite == Suite::Multi {
        for k in 0..HV_LEVELS.len() {
            let v = counts(records, |r| r.metrics.hv_reached.as_ref().and_then(|h| h[k]));
            row.push(v.len().to_string());
            row.push(mean_sd(&v));
        }
    } else {
        let f = counts(records, |r| r.metrics.first_feasible);
        let t = counts(records, |r| r.metrics.first_target);
        row.extend([f.len().to_string(), mean_sd(&f), t.len().to_string(), mean_sd(&t)]);
    }
    row
}

/// Runs every problem of the suite `repeats` times on `jobs` threads, writes
/// one JSON record per run and `<suite>.csv` into `out`.
pub fn bench(cfg: &BenchConfig, out: &Path) -> Result<Vec<Vec<String>>> {
    std::fs::create_dir_all(out)?;
    let problems = list_problems(cfg.suite);
    let tasks: Vec<(String, usize)> = problems
        .iter()
        .flat_map(|p| (0..cfg.repeats).map(move |r| (p.name().to_string(), r)))
        .collect();
    let next = Mutex::new(0usize);
    let results: Mutex<Vec<(String, usize, RunRecord)>> = Mutex::new(Vec::new());
    let failures: Mutex<Vec<String>> = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..cfg.jobs.max(1) {
            s.spawn(|| loop {
                let i = {
                    let mut n = next.lock().unwrap();
                    let i = *n;
                    *n += 1;
                    i
                };
                let Some((name, r)) = tasks.get(i) else { break };
                let run = RunConfig {
                    problem: name.clone(),
                    budget: cfg.budget,
                    seed: cfg.seed.wrapping_add(*r as u64),
                    ..cfg.template.clone()
                };
                match run_bmoo(&run) {
                    Ok(rec) => results.lock().unwrap().push((name.clone(), *r, rec)),
                    Err(e) => failures.lock().unwrap().push(format!("{name} run {r}: {e}")),
                }
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    for (name, r, rec) in &results {
        std::fs::write(out.join(format!("{name}-{r}.json")), rec.to_json()?)?;
    }
    let failures = failures.into_inner().unwrap();
    if !failures.is_empty() {
        std::fs::write(out.join("failures.txt"), failures.join("\n"))?;
    }
    let mut rows = Vec::new();
    for p in &problems {
        let recs: Vec<RunRecord> = results.iter().filter(|r| r.0 == p.name()).map(|r| r.2.clone()).collect();
        rows.push(summarize(p.name(), cfg.suite, &recs));
    }
    let suite_name = format!("{:?}", cfg.suite).to_lowercase();
    let mut w = csv::Writer::from_path(out.join(format!("{suite_name}.csv")))?;
    w.write_record(header(cfg.suite))?;
    for row in &rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(rows)
}
