//! Ordinary Kriging with an anisotropic exponential correlation.
//!
//! Inputs are min-max normalized against the problem bounds and outputs are
//! standardized before fitting. Hyperparameters `theta_k` are chosen by a
//! multi-start Hooke-Jeeves pattern search over `log10(theta_k)` that
//! maximizes the concentrated likelihood
//! `psi = -(N ln sigma2 + ln det C) / 2`, where `mu` and `sigma2` are the
//! generalized least-squares estimates at the current `theta`.

pub(crate) mod linalg;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::Bounds;
use crate::error::{invalid, Error, Result};
use crate::evo::lhs_sample;

use linalg::{backward_solve, cholesky_in_place, cholesky_solve, dot, forward_solve, log_det_from_cholesky};

/// Smallest admissible concentrated variance; anything below is clamped.
pub const SIGMA2_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct GpHyperParams {
    pub theta: Vec<f64>,
    pub p: Vec<f64>,
    pub nugget: f64,
}

impl GpHyperParams {
    pub fn new(theta: Vec<f64>, p: Vec<f64>, nugget: f64) -> Result<Self> {
        if theta.len() != p.len() {
            return Err(invalid("theta and p must have the same length"));
        }
        if theta.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(invalid("every theta_k must be positive and finite"));
        }
        if p.iter().any(|v| !(1.0..=2.0).contains(v)) {
            return Err(invalid("every p_k must lie in [1, 2]"));
        }
        if !(nugget >= 0.0) {
            return Err(invalid("nugget must be nonnegative"));
        }
        Ok(Self { theta, p, nugget })
    }

    /// Gaussian kernel (`p_k = 2`) with the given weights.
    pub fn gaussian(theta: Vec<f64>, nugget: f64) -> Result<Self> {
        let p = vec![2.0; theta.len()];
        Self::new(theta, p, nugget)
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }
}

/// `exp(-sum_k theta_k |xi_k - xj_k|^p_k)`.
pub fn correlation(xi: &[f64], xj: &[f64], hyper: &GpHyperParams) -> Result<f64> {
    if xi.len() != hyper.dim() || xj.len() != hyper.dim() {
        return Err(invalid(format!(
            "correlation expects {}-dimensional inputs, got {} and {}",
            hyper.dim(),
            xi.len(),
            xj.len()
        )));
    }
    Ok(correlation_unchecked(xi, xj, &hyper.theta, &hyper.p))
}

#[inline]
fn correlation_unchecked(xi: &[f64], xj: &[f64], theta: &[f64], p: &[f64]) -> f64 {
    let mut d = 0.0;
    for k in 0..theta.len() {
        let diff = (xi[k] - xj[k]).abs();
        d += theta[k] * powp(diff, p[k]);
    }
    (-d).exp()
}

#[inline]
fn powp(v: f64, p: f64) -> f64 {
    if p == 2.0 {
        v * v
    } else if p == 1.0 {
        v
    } else {
        v.powf(p)
    }
}

/// Outcome of one likelihood evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Likelihood {
    pub value: f64,
    pub mu_hat: f64,
    pub sigma2_hat: f64,
    /// Nugget that was actually added to the diagonal after escalation.
    pub nugget: f64,
    /// Set when the concentrated variance hit [`SIGMA2_FLOOR`].
    pub degenerate: bool,
}

/// Concentrated log-likelihood of `hyper` on already-normalized inputs.
pub fn log_likelihood(hyper: &GpHyperParams, x: &[Vec<f64>], y: &[f64]) -> Result<Likelihood> {
    if x.len() < 2 || x.len() != y.len() {
        return Err(Error::InsufficientData(format!(
            "likelihood needs at least 2 paired rows, got {} inputs and {} outputs",
            x.len(),
            y.len()
        )));
    }
    if x.iter().any(|r| r.len() != hyper.dim()) {
        return Err(invalid("input rows must match the hyperparameter dimension"));
    }
    let base = correlation_matrix(x, &hyper.theta, &hyper.p);
    let system = KrigingSystem::solve(&base, x.len(), y, hyper.nugget, NUGGET_MAX)?;
    Ok(system.likelihood())
}

fn correlation_matrix(x: &[Vec<f64>], theta: &[f64], p: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        c[i * n + i] = 1.0;
        for j in 0..i {
            let v = correlation_unchecked(&x[i], &x[j], theta, p);
            c[i * n + j] = v;
            c[j * n + i] = v;
        }
    }
    c
}

const NUGGET_MAX: f64 = 1e-4;
const NUGGET_MIN: f64 = 1e-10;
const REFINE_EXTRA_STEPS: usize = 10;

/// Cholesky factor of `C + nugget I` plus the generalized least-squares
/// quantities that depend on it.
struct KrigingSystem {
    n: usize,
    chol: Vec<f64>,
    nugget: f64,
    mu_hat: f64,
    sigma2_hat: f64,
    degenerate: bool,
    log_det: f64,
    /// `C^-1 (y - 1 mu)`
    alpha: Vec<f64>,
    /// `C^-1 1`
    c_inv_one: Vec<f64>,
    one_c_inv_one: f64,
}

impl KrigingSystem {
    fn solve(base: &[f64], n: usize, y: &[f64], nugget: f64, nugget_max: f64) -> Result<Self> {
        let mut nugget = nugget;
        let mut chol = base.to_vec();
        loop {
            chol.copy_from_slice(base);
            for i in 0..n {
                chol[i * n + i] += nugget;
            }
            if cholesky_in_place(&mut chol, n) {
                break;
            }
            let next = (nugget * 10.0).max(NUGGET_MIN);
            if next > nugget_max * (1.0 + 1e-9) {
                return Err(Error::NumericalDegeneracy(format!(
                    "correlation matrix not positive definite with nugget up to {nugget_max:e}"
                )));
            }
            nugget = next;
        }

        let ones = vec![1.0; n];
        let z_one = forward_solve(&chol, n, &ones);
        let z_y = forward_solve(&chol, n, y);
        let one_c_inv_one = dot(&z_one, &z_one);
        let mu_hat = dot(&z_one, &z_y) / one_c_inv_one;
        let z_res: Vec<f64> = z_y.iter().zip(&z_one).map(|(a, b)| a - mu_hat * b).collect();
        let raw_sigma2 = dot(&z_res, &z_res) / n as f64;
        // Residual energy at round-off level counts as zero variance.
        let y_energy = dot(y, y) / n as f64;
        let degenerate =
            !(raw_sigma2 >= SIGMA2_FLOOR) || raw_sigma2 <= 1e-28 * y_energy.max(SIGMA2_FLOOR);
        let sigma2_hat = if degenerate { SIGMA2_FLOOR } else { raw_sigma2 };
        let alpha = backward_solve(&chol, n, &z_res);
        let c_inv_one = backward_solve(&chol, n, &z_one);
        let log_det = log_det_from_cholesky(&chol, n);
        Ok(Self {
            n,
            chol,
            nugget,
            mu_hat,
            sigma2_hat,
            degenerate,
            log_det,
            alpha,
            c_inv_one,
            one_c_inv_one,
        })
    }

    /// Re-solves `R alpha = y - 1 mu` against the unregularized matrix `R`
    /// by conjugate gradients preconditioned with the regularized factor, so
    /// the predictor interpolates the training outputs even when a nugget was
    /// needed for the factorization.
    fn refine_alpha(&mut self, base: &[f64], y: &[f64]) {
        let n = self.n;
        let apply = |v: &[f64]| -> Vec<f64> {
            (0..n).map(|i| dot(&base[i * n..(i + 1) * n], v)).collect()
        };
        let target: Vec<f64> = y.iter().map(|v| v - self.mu_hat).collect();
        let scale = target.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if scale == 0.0 {
            return;
        }
        let max_abs = |v: &[f64]| v.iter().map(|t| t.abs()).fold(0.0, f64::max);

        let mut x = self.alpha.clone();
        let ax = apply(&x);
        let mut r: Vec<f64> = target.iter().zip(&ax).map(|(t, a)| t - a).collect();
        let mut best = (max_abs(&r), x.clone());
        let mut z = cholesky_solve(&self.chol, n, &r);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        for _ in 0..n + REFINE_EXTRA_STEPS {
            if best.0 <= 1e-13 * scale || !(rz > 0.0) {
                break;
            }
            let ap = apply(&p);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                break;
            }
            let step = rz / pap;
            for i in 0..n {
                x[i] += step * p[i];
                r[i] -= step * ap[i];
            }
            let worst = max_abs(&r);
            if worst < best.0 {
                best = (worst, x.clone());
            }
            z = cholesky_solve(&self.chol, n, &r);
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        self.alpha = best.1;
    }

    fn likelihood(&self) -> Likelihood {
        Likelihood {
            value: -0.5 * (self.n as f64 * self.sigma2_hat.ln() + self.log_det),
            mu_hat: self.mu_hat,
            sigma2_hat: self.sigma2_hat,
            nugget: self.nugget,
            degenerate: self.degenerate,
        }
    }
}

/// Settings for [`fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Number of search starts; the first is always `theta = 1`.
    pub starts: usize,
    pub max_iterations: usize,
    pub initial_step: f64,
    pub shrink: f64,
    pub min_step: f64,
    /// Accepted moves that raise the likelihood by less than this still shrink the step.
    pub min_gain: f64,
    pub log10_theta_bounds: (f64, f64),
    /// Smoothness exponent used for every dimension.
    pub p: f64,
    pub nugget: f64,
    pub nugget_max: f64,
    pub seed: u64,
    /// Extra start in `log10(theta)`, typically a previous optimum. Clipped
    /// to the search box; ignored if its dimension is wrong.
    pub warm_start: Option<Vec<f64>>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            starts: 8,
            max_iterations: 100,
            initial_step: 0.5,
            shrink: 0.5,
            min_step: 1e-3,
            min_gain: 1e-3,
            log10_theta_bounds: (-3.0, 3.0),
            p: 2.0,
            nugget: NUGGET_MIN,
            nugget_max: NUGGET_MAX,
            seed: 0,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Standardizer {
    mean: f64,
    scale: f64,
}

/// Fitted Kriging surrogate. Immutable once built.
#[derive(Debug, Clone)]
pub struct GpModel {
    bounds: Bounds,
    x_train: Vec<Vec<f64>>,
    y_train: Vec<f64>,
    hyper: GpHyperParams,
    out: Standardizer,
    mu_hat: f64,
    sigma2_hat: f64,
    log_likelihood: f64,
    degenerate: bool,
    chol: Vec<f64>,
    alpha: Vec<f64>,
    c_inv_one: Vec<f64>,
    one_c_inv_one: f64,
    start_likelihoods: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
    pub out_of_bounds: bool,
}

impl Prediction {
    pub fn std(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Removes rows that repeat an earlier row, keeping the first occurrence.
pub fn dedup_rows(x: &[Vec<f64>], y: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut xs: Vec<Vec<f64>> = Vec::with_capacity(x.len());
    let mut ys = Vec::with_capacity(y.len());
    for (row, &v) in x.iter().zip(y) {
        if !xs.iter().any(|r| r == row) {
            xs.push(row.clone());
            ys.push(v);
        }
    }
    (xs, ys)
}

/// Fits a Kriging model on raw inputs inside `bounds`.
pub fn fit(x: &[Vec<f64>], y: &[f64], bounds: &Bounds, cfg: &FitConfig) -> Result<GpModel> {
    if x.len() != y.len() {
        return Err(invalid("input and output counts differ"));
    }
    if x.iter().any(|r| r.len() != bounds.dim()) {
        return Err(invalid("input rows must match the bounds dimension"));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(invalid("outputs must be finite"));
    }
    let (x, y) = dedup_rows(x, y);
    if x.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 distinct rows, got {}",
            x.len()
        )));
    }
    let n = x.len();
    let dim = bounds.dim();
    let x_norm: Vec<Vec<f64>> = x.iter().map(|r| bounds.normalize(r)).collect();

    let mean = y.iter().sum::<f64>() / n as f64;
    let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    let constant = var.sqrt() <= 1e-12 * mean.abs().max(1.0);
    let scale = if constant { 1.0 } else { var.sqrt() };
    let out = Standardizer { mean, scale };
    let y_std: Vec<f64> = y.iter().map(|v| (v - mean) / scale).collect();

    let p = vec![cfg.p; dim];
    let objective = LikelihoodSurface::new(&x_norm, &y_std, &p, cfg);

    let (lo, hi) = cfg.log10_theta_bounds;
    let mut starts = vec![vec![0.0; dim]];
    // Constant outputs carry no information about theta.
    if cfg.starts > 1 && !constant {
        let log_box = Bounds::new(vec![lo; dim], vec![hi; dim])?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        starts.extend(lhs_sample(cfg.starts - 1, &log_box, &mut rng));
    }
    if let Some(w) = cfg.warm_start.as_ref().filter(|w| w.len() == dim && !constant) {
        starts.push(w.iter().map(|v| v.clamp(lo, hi)).collect());
    }

    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut start_likelihoods = Vec::with_capacity(starts.len());
    for start in starts {
        let start_value = objective.value(&start);
        start_likelihoods.push(start_value);
        let (point, value) = if constant {
            (start, start_value)
        } else {
            pattern_search(&objective, start, start_value, cfg)
        };
        if best.as_ref().map_or(true, |(_, b)| value > *b) {
            best = Some((point, value));
        }
    }
    let (log_theta, _) = best.expect("at least one start");
    let theta: Vec<f64> = log_theta.iter().map(|v| 10f64.powf(*v)).collect();
    let base = correlation_matrix(&x_norm, &theta, &p);
    let mut system = KrigingSystem::solve(&base, n, &y_std, cfg.nugget, cfg.nugget_max)?;
    system.refine_alpha(&base, &y_std);
    let hyper = GpHyperParams::new(theta, p, system.nugget)?;
    let log_likelihood = system.likelihood().value;

    Ok(GpModel {
        bounds: bounds.clone(),
        x_train: x_norm,
        y_train: y,
        hyper,
        out,
        mu_hat: system.mu_hat,
        sigma2_hat: system.sigma2_hat,
        log_likelihood,
        degenerate: system.degenerate,
        chol: system.chol,
        alpha: system.alpha,
        c_inv_one: system.c_inv_one,
        one_c_inv_one: system.one_c_inv_one,
        start_likelihoods,
    })
}

/// Likelihood as a function of `log10(theta)` with cached per-pair distances.
struct LikelihoodSurface<'a> {
    n: usize,
    dim: usize,
    y: &'a [f64],
    /// `|x_i,k - x_j,k|^p_k` for every pair `j < i`, laid out pair-major.
    pair_terms: Vec<f64>,
    nugget: f64,
    nugget_max: f64,
}

impl<'a> LikelihoodSurface<'a> {
    fn new(x: &[Vec<f64>], y: &'a [f64], p: &[f64], cfg: &FitConfig) -> Self {
        let n = x.len();
        let dim = p.len();
        let mut pair_terms = Vec::with_capacity(n * (n - 1) / 2 * dim);
        for i in 0..n {
            for j in 0..i {
                for k in 0..dim {
                    pair_terms.push(powp((x[i][k] - x[j][k]).abs(), p[k]));
                }
            }
        }
        Self {
            n,
            dim,
            y,
            pair_terms,
            nugget: cfg.nugget,
            nugget_max: cfg.nugget_max,
        }
    }

    fn value(&self, log_theta: &[f64]) -> f64 {
        let theta: Vec<f64> = log_theta.iter().map(|v| 10f64.powf(*v)).collect();
        let n = self.n;
        let mut c = vec![0.0; n * n];
        let mut terms = self.pair_terms.chunks_exact(self.dim);
        for i in 0..n {
            c[i * n + i] = 1.0;
            for j in 0..i {
                let v = (-dot(&theta, terms.next().expect("pair term"))).exp();
                c[i * n + j] = v;
                c[j * n + i] = v;
            }
        }
        match KrigingSystem::solve(&c, n, self.y, self.nugget, self.nugget_max) {
            Ok(system) => system.likelihood().value,
            Err(_) => f64::NEG_INFINITY,
        }
    }
}

/// Hooke-Jeeves pattern search (maximization) inside the log-theta box.
fn pattern_search(
    surface: &LikelihoodSurface<'_>,
    start: Vec<f64>,
    start_value: f64,
    cfg: &FitConfig,
) -> (Vec<f64>, f64) {
    let (lo, hi) = cfg.log10_theta_bounds;
    let mut base = start;
    let mut base_value = start_value;
    let mut step = cfg.initial_step;

    let explore = |point: &[f64], value: f64, step: f64| -> (Vec<f64>, f64) {
        let mut current = point.to_vec();
        let mut current_value = value;
        for k in 0..current.len() {
            let original = current[k];
            for dir in [1.0, -1.0] {
                let candidate = (original + dir * step).clamp(lo, hi);
                if candidate == original {
                    continue;
                }
                current[k] = candidate;
                let v = surface.value(&current);
                if v > current_value {
                    current_value = v;
                    break;
                }
                current[k] = original;
            }
        }
        (current, current_value)
    };

    let mut iterations = 0;
    while iterations < cfg.max_iterations && step >= cfg.min_step {
        iterations += 1;
        let (trial, trial_value) = explore(&base, base_value, step);
        if !(trial_value > base_value) {
            step *= cfg.shrink;
            continue;
        }
        let start_value = base_value;
        let mut previous = std::mem::replace(&mut base, trial);
        base_value = trial_value;
        // Pattern moves: keep extrapolating along the accumulated direction
        // while exploration around the extrapolated point keeps improving.
        while iterations < cfg.max_iterations {
            iterations += 1;
            let jump: Vec<f64> = base
                .iter()
                .zip(&previous)
                .map(|(b, p)| (2.0 * b - p).clamp(lo, hi))
                .collect();
            let jump_value = surface.value(&jump);
            let (moved, moved_value) = explore(&jump, jump_value, step);
            if moved_value > base_value {
                previous = std::mem::replace(&mut base, moved);
                base_value = moved_value;
            } else {
                break;
            }
        }
        // Crawling along a flat ridge counts as stalled.
        if base_value - start_value < cfg.min_gain {
            step *= cfg.shrink;
        }
    }
    (base, base_value)
}

impl GpModel {
    /// `log10(theta)`, suitable as a warm start for a later fit.
    pub fn log10_theta(&self) -> Vec<f64> {
        self.hyper.theta.iter().map(|t| t.log10()).collect()
    }

    pub fn hyper(&self) -> &GpHyperParams {
        &self.hyper
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    /// Number of distinct training rows.
    pub fn len(&self) -> usize {
        self.x_train.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_train.is_empty()
    }

    /// Training inputs in normalized coordinates.
    pub fn normalized_inputs(&self) -> &[Vec<f64>] {
        &self.x_train
    }

    pub fn outputs(&self) -> &[f64] {
        &self.y_train
    }

    /// Concentrated likelihood at the selected hyperparameters (standardized outputs).
    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }

    /// Likelihood value at each search start, first entry is `theta = 1`.
    pub fn start_log_likelihoods(&self) -> &[f64] {
        &self.start_likelihoods
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Process mean in output units.
    pub fn mu_hat(&self) -> f64 {
        self.out.mean + self.out.scale * self.mu_hat
    }

    /// Process variance in output units.
    pub fn sigma2_hat(&self) -> f64 {
        self.sigma2_hat * self.out.scale * self.out.scale
    }

    /// `1^T C^-1 1` for the regularized correlation matrix.
    pub fn one_c_inv_one(&self) -> f64 {
        self.one_c_inv_one
    }

    /// Lower Cholesky factor of `C + nugget I`, row-major.
    pub fn cholesky_factor(&self) -> &[f64] {
        &self.chol
    }

    /// `C + nugget I` recomputed from the stored hyperparameters.
    pub fn regularized_correlation(&self) -> Vec<f64> {
        let n = self.len();
        let mut c = correlation_matrix(&self.x_train, &self.hyper.theta, &self.hyper.p);
        for i in 0..n {
            c[i * n + i] += self.hyper.nugget;
        }
        c
    }

    fn correlations(&self, z: &[f64]) -> Vec<f64> {
        self.x_train
            .iter()
            .map(|row| correlation_unchecked(z, row, &self.hyper.theta, &self.hyper.p))
            .collect()
    }

    /// Predictive mean only; skips the variance solve.
    pub fn predict_mean(&self, x: &[f64]) -> f64 {
        let z = self.bounds.normalize(x);
        let r = self.correlations(&z);
        self.out.mean + self.out.scale * (self.mu_hat + dot(&r, &self.alpha))
    }

    pub fn predict(&self, x: &[f64]) -> Prediction {
        let n = self.len();
        let z = self.bounds.normalize(x);
        let r = self.correlations(&z);
        let mean = self.mu_hat + dot(&r, &self.alpha);
        let v = forward_solve(&self.chol, n, &r);
        let r_c_r = dot(&v, &v);
        let one_c_r = dot(&self.c_inv_one, &r);
        let variance =
            self.sigma2_hat * (1.0 - r_c_r + (1.0 - one_c_r).powi(2) / self.one_c_inv_one);
        Prediction {
            mean: self.out.mean + self.out.scale * mean,
            variance: variance.max(0.0) * self.out.scale * self.out.scale,
            out_of_bounds: !self.bounds.contains(x),
        }
    }
}
