use bmoo::driver::bench::{bench, header, BenchConfig};
use bmoo::driver::{run_bmoo, RunConfig, RunRecord};
use bmoo::problems::{list_problems, Suite};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bmoo", version, about = "Bayesian constrained multi-objective optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize one benchmark problem and write the run record as JSON.
    Run {
        #[arg(long)]
        problem: String,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        m_x: usize,
        #[arg(long, default_value_t = 1000)]
        m_y: usize,
        #[arg(long, default_value_t = 0.2)]
        nu: f64,
        #[arg(long)]
        n_init: Option<usize>,
        /// Sample candidates from `E[K! 1{improvement}]`.
        #[arg(long)]
        factorial_density: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-iteration particle coordinates as CSV.
        #[arg(long)]
        dump_particles: Option<PathBuf>,
    },
    /// Repeated runs over a suite; writes records and a summary CSV.
    Bench {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        m_x: usize,
        #[arg(long, default_value_t = 1000)]
        m_y: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the available problems with their dimensions.
    ListProblems,
}

fn dump_particles(record: &RunRecord, path: &Path) -> bmoo::Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_path(path)?;
    w.write_record(["iteration", "set", "index", "coordinates..."])?;
    for snap in &record.particles {
        for (set, pts) in [("x", &snap.x), ("y", &snap.y)] {
            for (i, p) in pts.iter().enumerate() {
                let mut row = vec![snap.iteration.to_string(), set.to_string(), i.to_string()];
                row.extend(p.iter().map(|v| v.to_string()));
                w.write_record(&row)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn execute(cli: Cli) -> bmoo::Result<()> {
    match cli.command {
        Command::Run { problem, budget, seed, m_x, m_y, nu, n_init, factorial_density, out, dump_particles: dump } => {
            let cfg = RunConfig {
                m_x,
                m_y,
                nu,
                n_init,
                factorial_density,
                record_particles: dump.is_some(),
                ..RunConfig::new(&problem, budget, seed)
            };
            let record = run_bmoo(&cfg)?;
            if let Some(path) = &dump {
                dump_particles(&record, path)?;
            }
            let mut slim = record.clone();
            slim.particles.clear();
            let json = slim.to_json()?;
            match out {
                Some(path) => std::fs::write(path, json)?,
                None => println!("{json}"),
            }
            if let Some(reason) = &record.aborted {
                eprintln!("run stopped early: {reason}");
            }
            let m = &record.metrics;
            eprintln!(
                "first feasible: {:?}, first target: {:?}, best feasible: {:?}, hv levels reached: {:?}",
                m.first_feasible, m.first_target, m.best_feasible, m.hv_reached
            );
        }
        Command::Bench { suite, repeats, budget, jobs, seed, m_x, m_y, out } => {
            let template = RunConfig { m_x, m_y, ..RunConfig::new("", budget, seed) };
            let cfg = BenchConfig { suite, repeats, budget, jobs, seed, template };
            let rows = bench(&cfg, &out)?;
            println!("{}", header(suite).join(","));
            for r in rows {
                println!("{}", r.join(","));
            }
        }
        Command::ListProblems => {
            println!("{:<16} {:>8} {:>3} {:>3} {:>3}", "name", "suite", "d", "p", "q");
            for suite in [Suite::Mono, Suite::Multi, Suite::Modified, Suite::Toy] {
                for p in list_problems(suite) {
                    println!("{:<16} {:>8} {:>3} {:>3} {:>3}", p.name(), format!("{suite:?}").to_lowercase(), p.d(), p.p(), p.q());
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
