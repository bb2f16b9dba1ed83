use rand::Rng;

use crate::bounds::Bounds;
use crate::error::{invalid, Result};

/// Simulated binary crossover followed by polynomial mutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationConfig {
    pub sbx_eta: f64,
    pub sbx_prob: f64,
    pub pm_eta: f64,
    pub pm_prob: f64,
}

impl VariationConfig {
    /// eta 20 for both operators, crossover always, mutation rate 1/n.
    pub fn standard(dim: usize) -> Self {
        Self {
            sbx_eta: 20.0,
            sbx_prob: 1.0,
            pm_eta: 20.0,
            pm_prob: 1.0 / dim.max(1) as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.sbx_prob, self.pm_prob] {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("operator probability {p} outside [0, 1]")));
            }
        }
        if !(self.sbx_eta > 0.0 && self.pm_eta > 0.0) {
            return Err(invalid("distribution indices must be positive"));
        }
        Ok(())
    }
}

const SBX_MIN_GAP: f64 = 1e-14;

fn sbx_pair<R: Rng + ?Sized>(
    a: &mut [f64],
    b: &mut [f64],
    bounds: &Bounds,
    eta: f64,
    rng: &mut R,
) {
    let exp = 1.0 / (eta + 1.0);
    for k in 0..a.len() {
        if rng.gen::<f64>() > 0.5 || (a[k] - b[k]).abs() <= SBX_MIN_GAP {
            continue;
        }
        let (lo, hi) = (bounds.lower()[k], bounds.upper()[k]);
        let (y1, y2) = if a[k] < b[k] { (a[k], b[k]) } else { (b[k], a[k]) };
        let u: f64 = rng.gen();
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(exp)
            } else {
                (1.0 / (2.0 - u * alpha)).powf(exp)
            }
        };
        let bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
        let bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
        let c1 = (0.5 * ((y1 + y2) - bq1 * (y2 - y1))).clamp(lo, hi);
        let c2 = (0.5 * ((y1 + y2) + bq2 * (y2 - y1))).clamp(lo, hi);
        if rng.gen::<bool>() {
            a[k] = c2;
            b[k] = c1;
        } else {
            a[k] = c1;
            b[k] = c2;
        }
    }
}

/// Bounded polynomial mutation, in place. Each coordinate mutates with
/// probability `prob`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &mut [f64],
    bounds: &Bounds,
    eta: f64,
    prob: f64,
    rng: &mut R,
) {
    let exp = 1.0 / (eta + 1.0);
    for (k, v) in x.iter_mut().enumerate() {
        if rng.gen::<f64>() >= prob {
            continue;
        }
        let (lo, hi) = (bounds.lower()[k], bounds.upper()[k]);
        let width = hi - lo;
        let u: f64 = rng.gen();
        let dq = if u <= 0.5 {
            let xy = 1.0 - (*v - lo) / width;
            let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
            val.powf(exp) - 1.0
        } else {
            let xy = 1.0 - (hi - *v) / width;
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
            1.0 - val.powf(exp)
        };
        *v = (*v + dq * width).clamp(lo, hi);
    }
}

/// One offspring per parent. Parents are paired in order (0,1), (2,3), …;
/// an odd last parent is crossed with the first and only one child kept.
pub fn variation<R: Rng + ?Sized>(
    parents: &[Vec<f64>],
    bounds: &Bounds,
    cfg: &VariationConfig,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(parents.len());
    let mut i = 0;
    while i < parents.len() {
        let mut a = parents[i].clone();
        let mut b = parents[(i + 1) % parents.len()].clone();
        if rng.gen::<f64>() < cfg.sbx_prob {
            sbx_pair(&mut a, &mut b, bounds, cfg.sbx_eta, rng);
        }
        polynomial_mutation(&mut a, bounds, cfg.pm_eta, cfg.pm_prob, rng);
        out.push(a);
        if i + 1 < parents.len() {
            polynomial_mutation(&mut b, bounds, cfg.pm_eta, cfg.pm_prob, rng);
            out.push(b);
        }
        i += 2;
    }
    out
}
