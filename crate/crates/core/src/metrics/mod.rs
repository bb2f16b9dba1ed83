//! Quality indicators for bi-objective approximation sets and the rank-sum
//! test used to compare replicate samples.

mod pareto;
mod wilcoxon;

pub use pareto::{dominates, front_ranks, nondominated, nondominated_indices};
pub(crate) use pareto::even_subsample;
pub use wilcoxon::{wilcoxon_rank_sum, Marker, RankSumTest, EXACT_MAX_SAMPLE};

use crate::error::{invalid, Result};

/// Inverted generational distance: mean over reference points of the
/// distance to the nearest obtained point.
pub fn igd(p_star: &[[f64; 2]], p: &[[f64; 2]]) -> Result<f64> {
    if p_star.is_empty() || p.is_empty() {
        return Err(invalid("IGD needs nonempty reference and obtained sets"));
    }
    let total: f64 = p_star
        .iter()
        .map(|v| {
            p.iter()
                .map(|q| ((v[0] - q[0]).powi(2) + (v[1] - q[1]).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / p_star.len() as f64)
}

/// Exact area dominated by `p` and bounded by `reference` (minimization).
/// Points that do not strictly dominate the reference contribute nothing.
pub fn hypervolume_2d(p: &[[f64; 2]], reference: [f64; 2]) -> f64 {
    let inside: Vec<[f64; 2]> = p
        .iter()
        .copied()
        .filter(|q| q[0] < reference[0] && q[1] < reference[1])
        .collect();
    let front = nondominated(&inside);
    let mut area = 0.0;
    for (i, q) in front.iter().enumerate() {
        let right = front.get(i + 1).map_or(reference[0], |r| r[0]);
        area += (right - q[0]) * (reference[1] - q[1]);
    }
    area
}

/// Mean, sample standard deviation and significance marker of one metric
/// over replicate runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub mean: f64,
    pub std: f64,
    pub per_run: Vec<f64>,
    pub marker: Option<Marker>,
}

impl MetricReport {
    pub fn from_runs(per_run: Vec<f64>) -> Self {
        let n = per_run.len();
        let mean = if n == 0 {
            f64::NAN
        } else {
            per_run.iter().sum::<f64>() / n as f64
        };
        let std = if n < 2 {
            0.0
        } else {
            (per_run.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Self {
            mean,
            std,
            per_run,
            marker: None,
        }
    }

    pub fn median(&self) -> f64 {
        median(&self.per_run)
    }
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
