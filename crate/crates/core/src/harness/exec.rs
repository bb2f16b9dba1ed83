use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::metrics::{wilcoxon_rank_sum, MetricReport};
use crate::problems::{HeterogeneousProblem, Problem};
use crate::sched::{run_scheme, RunRecord, Scheme};

use super::plan::{sanitize, Cell, ExperimentPlan};
use super::plot::emit_convergence;

/// Significance level of the rank-sum markers.
pub const ALPHA: f64 = 0.05;

/// Outcome of one cell.
#[derive(Debug)]
pub struct CellResult {
    pub cell: Cell,
    pub outcome: std::result::Result<RunRecord, String>,
}

/// Aggregated IGD and HV for one (problem, τ, scheme).
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub problem: String,
    pub tau: usize,
    pub scheme: Scheme,
    pub igd: MetricReport,
    pub hv: MetricReport,
    pub failures: usize,
    /// Rank-sum p-value against the reference scheme.
    pub p_value: Option<f64>,
}

#[derive(Debug)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    pub results: Vec<CellResult>,
}

impl Summary {
    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| r.outcome.is_err()).count()
    }
}

fn run_cell(cell: &Cell) -> std::result::Result<RunRecord, String> {
    let problem = Problem::by_name(&cell.problem).map_err(|e| e.to_string())?;
    let hp = HeterogeneousProblem::new(problem, cell.tau).map_err(|e| e.to_string())?;
    run_scheme(cell.scheme, &hp, &cell.config).map_err(|e| e.to_string())
}

/// Runs every cell on `workers` threads and writes all outputs under
/// `out`. Results are gathered in plan order, so the files do not depend
/// on scheduling.
pub fn execute(plan: &ExperimentPlan, workers: usize, out: &Path) -> Result<Summary> {
    if workers == 0 {
        return Err(invalid("need at least one worker"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid(e.to_string()))?;
    let cells = plan.cells();
    let results: Vec<CellResult> = pool.install(|| {
        cells
            .into_par_iter()
            .map(|cell| {
                let outcome = run_cell(&cell);
                CellResult { cell, outcome }
            })
            .collect()
    });
    let rows = summarize(plan, &results)?;
    write_outputs(plan, &results, &rows, out)?;
    Ok(Summary { rows, results })
}

/// Groups finished runs by (problem, τ, scheme) in plan order and attaches
/// markers against the reference scheme.
pub fn summarize(plan: &ExperimentPlan, results: &[CellResult]) -> Result<Vec<SummaryRow>> {
    let mut rows = Vec::new();
    for problem in &plan.problems {
        for &tau in &plan.taus {
            let group = |scheme: Scheme| {
                results
                    .iter()
                    .filter(move |r| r.cell.problem == *problem && r.cell.tau == tau && r.cell.scheme == scheme)
            };
            let igd_of = |scheme: Scheme| -> Vec<f64> {
                let mut runs: Vec<_> = group(scheme)
                    .filter_map(|r| r.outcome.as_ref().ok().map(|rec| (r.cell.replicate, rec.final_igd())))
                    .collect();
                runs.sort_by_key(|(rep, _)| *rep);
                runs.into_iter().map(|(_, v)| v).collect()
            };
            let reference = plan.reference.map(igd_of);
            for &scheme in &plan.schemes {
                let mut ok: Vec<(usize, &RunRecord)> = group(scheme)
                    .filter_map(|r| r.outcome.as_ref().ok().map(|rec| (r.cell.replicate, rec)))
                    .collect();
                ok.sort_by_key(|(rep, _)| *rep);
                let igd_runs: Vec<f64> = ok.iter().map(|(_, r)| r.final_igd()).collect();
                let hv_runs: Vec<f64> = ok.iter().map(|(_, r)| r.final_hv()).collect();
                let failures = group(scheme).filter(|r| r.outcome.is_err()).count();
                let mut igd = MetricReport::from_runs(igd_runs.clone());
                let hv = MetricReport::from_runs(hv_runs);
                let mut p_value = None;
                if let (Some(reference), Some(ref_scheme)) = (&reference, plan.reference) {
                    if ref_scheme != scheme && reference.len() >= 3 && igd_runs.len() >= 3 {
                        let test = wilcoxon_rank_sum(reference, &igd_runs, ALPHA)?;
                        igd.marker = Some(test.marker);
                        p_value = Some(test.p_value);
                    }
                }
                rows.push(SummaryRow {
                    problem: problem.clone(),
                    tau,
                    scheme,
                    igd,
                    hv,
                    failures,
                    p_value,
                });
            }
        }
    }
    Ok(rows)
}

/// Shortest representation that parses back to the same `f64`.
pub(crate) fn num(v: f64) -> String {
    format!("{v:?}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub const SUMMARY_HEADER: &str =
    "problem,tau,scheme,runs,failed,igd_mean,igd_std,igd_median,hv_mean,hv_std,marker,p_value";
pub const RUN_HEADER: &str = "iteration,fe_s_used,fe_f_used,igd,hv,d_t_size,co_mse";

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = String::from(SUMMARY_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.problem,
            r.tau,
            r.scheme,
            r.igd.per_run.len(),
            r.failures,
            num(r.igd.mean),
            num(r.igd.std),
            num(r.igd.median()),
            num(r.hv.mean),
            num(r.hv.std),
            r.igd.marker.map(|m| m.symbol()).unwrap_or(""),
            opt(r.p_value),
        );
    }
    s
}

pub fn run_csv(record: &RunRecord) -> String {
    let mut s = String::from(RUN_HEADER);
    s.push('\n');
    for t in &record.trace {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            t.iteration,
            t.fe_s_used,
            t.fe_f_used,
            num(t.igd),
            num(t.hv),
            t.d_t_size,
            opt(t.co_mse)
        );
    }
    s
}

/// Final nondominated set: fast value, slow value, then the decision vector.
pub fn front_csv(record: &RunRecord) -> String {
    let set = record.final_set();
    let dim = set.first().map_or(0, |e| e.x.len());
    let mut s = String::from("f_fast,f_slow");
    for k in 0..dim {
        let _ = write!(s, ",x{k}");
    }
    s.push('\n');
    for e in set {
        s.push_str(&num(e.f[0]));
        s.push(',');
        s.push_str(&num(e.f[1]));
        for v in &e.x {
            s.push(',');
            s.push_str(&num(*v));
        }
        s.push('\n');
    }
    s
}

fn write_outputs(plan: &ExperimentPlan, results: &[CellResult], rows: &[SummaryRow], out: &Path) -> Result<()> {
    fs::create_dir_all(out.join("runs"))?;
    fs::create_dir_all(out.join("fronts"))?;
    let mut failures = String::from("problem,tau,scheme,replicate,error\n");
    for r in results {
        match &r.outcome {
            Ok(rec) => {
                let stem = r.cell.stem();
                fs::write(out.join("runs").join(format!("{stem}.csv")), run_csv(rec))?;
                fs::write(out.join("fronts").join(format!("{stem}.csv")), front_csv(rec))?;
            }
            Err(e) => {
                let _ = writeln!(
                    failures,
                    "{},{},{},{},\"{}\"",
                    r.cell.problem,
                    r.cell.tau,
                    r.cell.scheme,
                    r.cell.replicate,
                    e.replace('"', "'")
                );
            }
        }
    }
    fs::write(out.join("failures.csv"), failures)?;
    fs::write(out.join("summary.csv"), summary_csv(rows))?;
    for problem in &plan.problems {
        for &tau in &plan.taus {
            let records: Vec<(usize, &RunRecord)> = results
                .iter()
                .filter(|r| r.cell.problem == *problem && r.cell.tau == tau)
                .filter_map(|r| r.outcome.as_ref().ok().map(|rec| (r.cell.replicate, rec)))
                .collect();
            let stem = format!("convergence_{}_tau{tau}", sanitize(problem));
            emit_convergence(&records, &out.join(format!("{stem}.csv")), Some(&out.join(format!("{stem}.svg"))))?;
        }
    }
    Ok(())
}
