//! Experiment plans, run-matrix execution and result files.

mod exec;
mod plan;
mod plot;

pub use exec::{
    execute, front_csv, run_csv, summarize, summary_csv, CellResult, Summary, SummaryRow, ALPHA, RUN_HEADER,
    SUMMARY_HEADER,
};
pub use plan::{parse_plan, parse_plan_str, Cell, ExperimentPlan};
pub use plot::{convergence_csv, convergence_svg, emit_convergence, median_curves, CONVERGENCE_HEADER};

/// Environment variable that overrides a plan's output directory.
pub const OUT_DIR_ENV: &str = "TCSAEA_OUT_DIR";
