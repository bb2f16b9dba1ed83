use std::fmt;

use statrs::function::erf::erfc;

use crate::error::{invalid, Result};

/// Largest per-group sample size handled by exact enumeration.
pub const EXACT_MAX_SAMPLE: usize = 10;

/// Outcome of comparing a reference method `a` against a competitor `b`
/// on a minimized metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Marker {
    /// `a` is significantly better.
    Better,
    /// `a` is significantly worse.
    Worse,
    Similar,
}

impl Marker {
    pub fn symbol(self) -> &'static str {
        match self {
            Marker::Better => "+",
            Marker::Worse => "-",
            Marker::Similar => "≈",
        }
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumTest {
    pub p_value: f64,
    pub marker: Marker,
    /// Rank sum of `a` (midranks on ties).
    pub rank_sum: f64,
    pub exact: bool,
}

fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Counts subsets of size `k` of `ranks` whose sum deviates from `center`
/// by at least `threshold`.
fn count_extreme(ranks: &[f64], k: usize, center: f64, threshold: f64) -> (u64, u64) {
    fn walk(ranks: &[f64], start: usize, left: usize, sum: f64, hit: &mut dyn FnMut(f64)) {
        if left == 0 {
            hit(sum);
            return;
        }
        for i in start..=ranks.len() - left {
            walk(ranks, i + 1, left - 1, sum + ranks[i], hit);
        }
    }
    let mut extreme = 0u64;
    let mut total = 0u64;
    walk(ranks, 0, k, 0.0, &mut |s| {
        total += 1;
        if (s - center).abs() >= threshold - 1e-9 {
            extreme += 1;
        }
    });
    (extreme, total)
}

/// Two-sided Wilcoxon rank-sum test. Exact enumeration when both samples
/// have at most [`EXACT_MAX_SAMPLE`] values, normal approximation with tie
/// and continuity corrections otherwise.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64], alpha: f64) -> Result<RankSumTest> {
    if a.len() < 3 || b.len() < 3 {
        return Err(invalid("rank-sum test needs at least 3 values per sample"));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(invalid("rank-sum test received NaN"));
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let (n1, n2) = (a.len(), b.len());
    let n = (n1 + n2) as f64;
    let rank_sum: f64 = ranks[..n1].iter().sum();
    let center = n1 as f64 * (n + 1.0) / 2.0;

    if pooled.iter().all(|v| *v == pooled[0]) {
        return Ok(RankSumTest {
            p_value: 1.0,
            marker: Marker::Similar,
            rank_sum,
            exact: true,
        });
    }

    let deviation = (rank_sum - center).abs();
    let exact = n1 <= EXACT_MAX_SAMPLE && n2 <= EXACT_MAX_SAMPLE;
    let p_value = if exact {
        let (extreme, total) = count_extreme(&ranks, n1, center, deviation);
        extreme as f64 / total as f64
    } else {
        let mut ties = 0.0;
        let mut sorted = pooled.clone();
        sorted.sort_by(f64::total_cmp);
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i;
            while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
                j += 1;
            }
            let t = (j - i + 1) as f64;
            ties += t * t * t - t;
            i = j + 1;
        }
        let var = n1 as f64 * n2 as f64 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
        let z = (deviation - 0.5).max(0.0) / var.sqrt();
        erfc(z / std::f64::consts::SQRT_2).min(1.0)
    };

    let marker = if p_value < alpha {
        if rank_sum < center {
            Marker::Better
        } else {
            Marker::Worse
        }
    } else {
        Marker::Similar
    };
    Ok(RankSumTest {
        p_value,
        marker,
        rank_sum,
        exact,
    })
}
