use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use tcsaea::harness::{execute, front_csv, parse_plan, run_csv, OUT_DIR_ENV};
use tcsaea::problems::{HeterogeneousProblem, Problem};
use tcsaea::sched::{run_scheme, AlgorithmConfig, Scheme};

#[derive(Parser)]
#[command(name = "tcsaea", version, about = "Bi-objective optimization with a delayed objective")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every cell of an experiment plan.
    Run {
        plan: PathBuf,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory; overrides the plan and the environment.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One run, trace to stdout as CSV.
    Bench {
        problem: String,
        #[arg(long, default_value = "tc")]
        scheme: String,
        #[arg(long, default_value_t = 5)]
        tau: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        fe_s_max: usize,
        /// Also print the final nondominated set.
        #[arg(long)]
        front: bool,
    },
    /// Dump the sampled reference front as CSV.
    Front {
        problem: String,
        #[arg(long, default_value_t = 500)]
        points: usize,
    },
}

fn run(plan: PathBuf, workers: Option<usize>, out: Option<PathBuf>) -> Result<bool> {
    let plan = parse_plan(&plan).with_context(|| format!("reading plan {}", plan.display()))?;
    let out = out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| plan.output_dir.clone());
    let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    eprintln!("{} runs on {workers} workers -> {}", plan.run_count(), out.display());
    let summary = execute(&plan, workers, &out)?;
    for row in &summary.rows {
        eprintln!(
            "{:<14} tau={:<3} {:<10} IGD {:.4e} ± {:.2e} {}",
            row.problem,
            row.tau,
            row.scheme.id(),
            row.igd.mean,
            row.igd.std,
            row.igd.marker.map_or("", |m| m.symbol())
        );
    }
    for r in summary.results.iter().filter(|r| r.outcome.is_err()) {
        eprintln!("failed {}: {}", r.cell.stem(), r.outcome.as_ref().unwrap_err());
    }
    Ok(summary.failures() == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { plan, workers, out } => run(plan, workers, out),
        Command::Bench { problem, scheme, tau, seed, fe_s_max, front } => (|| {
            let scheme: Scheme = scheme.parse()?;
            let hp = HeterogeneousProblem::new(Problem::by_name(&problem)?, tau)?;
            let cfg = AlgorithmConfig { tau, seed, fe_s_max, ..AlgorithmConfig::default() };
            let record = run_scheme(scheme, &hp, &cfg)?;
            print!("{}", run_csv(&record));
            if front {
                print!("{}", front_csv(&record));
            }
            eprintln!("final IGD {:.6} in {:.1}s", record.final_igd(), record.wall_time_secs);
            Ok(true)
        })(),
        Command::Front { problem, points } => (|| {
            let front = Problem::by_name(&problem)?.pareto_front_samples(points)?;
            println!("f1,f2");
            for p in front {
                println!("{:?},{:?}", p[0], p[1]);
            }
            Ok(true)
        })(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
