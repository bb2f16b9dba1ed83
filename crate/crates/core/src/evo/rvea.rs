use std::f64::consts::FRAC_PI_2;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bounds::Bounds;
use crate::error::{invalid, Result};
use crate::gp::GpModel;

use super::variation::{variation, VariationConfig};

/// Decision vectors with optional bi-objective values attached.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Population {
    pub individuals: Vec<Vec<f64>>,
    pub objectives: Option<Vec<[f64; 2]>>,
}

impl Population {
    pub fn new(individuals: Vec<Vec<f64>>) -> Self {
        Self {
            individuals,
            objectives: None,
        }
    }

    pub fn with_objectives(individuals: Vec<Vec<f64>>, objectives: Vec<[f64; 2]>) -> Result<Self> {
        if individuals.len() != objectives.len() {
            return Err(invalid(format!(
                "{} individuals but {} objective rows",
                individuals.len(),
                objectives.len()
            )));
        }
        Ok(Self {
            individuals,
            objectives: Some(objectives),
        })
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceVectorSet {
    vectors: Vec<[f64; 2]>,
    gamma: Vec<f64>,
}

impl ReferenceVectorSet {
    pub fn vectors(&self) -> &[[f64; 2]] {
        &self.vectors
    }

    /// Smallest angle from each vector to any other.
    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// `h + 1` evenly spread unit vectors `(i/h, 1 - i/h) / norm`.
pub fn reference_vectors(h: usize) -> Result<ReferenceVectorSet> {
    if h == 0 {
        return Err(invalid("reference vectors need at least one division"));
    }
    let vectors: Vec<[f64; 2]> = (0..=h)
        .map(|i| {
            let w = [i as f64 / h as f64, 1.0 - i as f64 / h as f64];
            let norm = w[0].hypot(w[1]);
            [w[0] / norm, w[1] / norm]
        })
        .collect();
    let gamma = (0..vectors.len())
        .map(|i| {
            (0..vectors.len())
                .filter(|&j| j != i)
                .map(|j| angle(&vectors[i], &vectors[j]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(ReferenceVectorSet { vectors, gamma })
}

fn angle(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let c = (a[0] * b[0] + a[1] * b[1]) / (a[0].hypot(a[1]) * b[0].hypot(b[1]));
    c.clamp(-1.0, 1.0).acos()
}

/// Objectives minus their elementwise minimum.
pub fn translate_by_ideal(objectives: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let ideal = objectives.iter().fold([f64::INFINITY; 2], |z, f| {
        [z[0].min(f[0]), z[1].min(f[1])]
    });
    objectives
        .iter()
        .map(|f| [f[0] - ideal[0], f[1] - ideal[1]])
        .collect()
}

/// Assigns every translated objective vector to its closest reference
/// vector by angle and returns each partition as `(index, apd)` pairs sorted
/// by ascending APD (ties keep input order).
///
/// A vector at the origin has no direction; it goes to the first reference
/// vector with APD 0.
pub fn apd_partition(
    translated: &[[f64; 2]],
    refs: &ReferenceVectorSet,
    progress: f64,
    alpha: f64,
) -> Vec<Vec<(usize, f64)>> {
    let m = 2.0;
    let penalty = m * progress.clamp(0.0, 1.0).powf(alpha);
    let mut parts = vec![Vec::new(); refs.len()];
    for (i, f) in translated.iter().enumerate() {
        let norm = f[0].hypot(f[1]);
        if norm == 0.0 {
            parts[0].push((i, 0.0));
            continue;
        }
        let mut best = (0, f64::NEG_INFINITY);
        for (v, r) in refs.vectors.iter().enumerate() {
            let c = (f[0] * r[0] + f[1] * r[1]) / norm;
            if c > best.1 {
                best = (v, c);
            }
        }
        let (v, c) = best;
        let theta = c.clamp(-1.0, 1.0).acos();
        let gamma = if refs.len() > 1 { refs.gamma[v] } else { FRAC_PI_2 };
        parts[v].push((i, (1.0 + penalty * theta / gamma) * norm));
    }
    for p in &mut parts {
        p.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    }
    parts
}

/// The APD-minimal solution of every nonempty partition, in reference
/// vector order.
pub fn apd_select(
    translated: &[[f64; 2]],
    refs: &ReferenceVectorSet,
    progress: f64,
    alpha: f64,
) -> Vec<usize> {
    apd_partition(translated, refs, progress, alpha)
        .into_iter()
        .filter_map(|p| p.first().map(|e| e.0))
        .collect()
}

/// Fills up to `size` survivors round-robin over partitions: every
/// partition's best, then every partition's second best, and so on.
pub(crate) fn apd_survivors(parts: &[Vec<(usize, f64)>], size: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(size);
    let mut rank = 0;
    while out.len() < size {
        let before = out.len();
        for p in parts {
            if let Some(e) = p.get(rank) {
                out.push(e.0);
                if out.len() == size {
                    break;
                }
            }
        }
        if out.len() == before {
            break;
        }
        rank += 1;
    }
    out
}

/// A cheap predictor of one objective.
pub trait Surrogate {
    fn mean(&self, x: &[f64]) -> Result<f64>;
}

impl Surrogate for GpModel {
    fn mean(&self, x: &[f64]) -> Result<f64> {
        Ok(self.predict_mean(x))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RveaConfig {
    pub generations: usize,
    pub population: usize,
    pub divisions: usize,
    pub alpha: f64,
    /// `None` picks [`VariationConfig::standard`] for the problem dimension.
    pub variation: Option<VariationConfig>,
}

impl Default for RveaConfig {
    fn default() -> Self {
        Self {
            generations: 20,
            population: 50,
            divisions: 9,
            alpha: 2.0,
            variation: None,
        }
    }
}

impl RveaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.generations == 0 {
            return Err(invalid("inner-loop generations must be at least 1"));
        }
        if self.population < 2 || self.divisions == 0 {
            return Err(invalid("RVEA needs population >= 2 and at least one division"));
        }
        if let Some(v) = &self.variation {
            v.validate()?;
        }
        Ok(())
    }
}

fn predict_all(models: [&dyn Surrogate; 2], xs: &[Vec<f64>]) -> Result<Vec<[f64; 2]>> {
    xs.iter()
        .map(|x| Ok([models[0].mean(x)?, models[1].mean(x)?]))
        .collect()
}

/// RVEA driven entirely by surrogate means. `progress` sets the APD
/// penalty weight and stays fixed for the call. Returns the last
/// population with its predicted objectives.
pub fn surrogate_rvea<R: Rng + ?Sized>(
    models: [&dyn Surrogate; 2],
    init: &Population,
    bounds: &Bounds,
    cfg: &RveaConfig,
    progress: f64,
    rng: &mut R,
) -> Result<Population> {
    if cfg.generations == 0 || init.is_empty() {
        return Ok(init.clone());
    }
    let var = cfg
        .variation
        .unwrap_or_else(|| VariationConfig::standard(bounds.dim()));
    let refs = reference_vectors(cfg.divisions)?;
    let mut xs = init.individuals.clone();
    let mut fs = match &init.objectives {
        Some(f) => f.clone(),
        None => predict_all(models, &xs)?,
    };
    for _ in 0..cfg.generations {
        let mut pool = xs.clone();
        pool.shuffle(rng);
        let kids = variation(&pool, bounds, &var, rng);
        let kid_fs = predict_all(models, &kids)?;
        xs.extend(kids);
        fs.extend(kid_fs);
        let parts = apd_partition(&translate_by_ideal(&fs), &refs, progress, cfg.alpha);
        let keep = apd_survivors(&parts, cfg.population);
        xs = keep.iter().map(|&i| xs[i].clone()).collect();
        fs = keep.iter().map(|&i| fs[i]).collect();
    }
    Population::with_objectives(xs, fs)
}
