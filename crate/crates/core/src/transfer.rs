//! Co-surrogate over objective differences, synthetic slow labels,
//! confidence-interval selection of transferable rows, and training-set
//! capping.

use rand::seq::index;
use rand::Rng;

use crate::bounds::Bounds;
use crate::error::{invalid, Error, Result};
use crate::evo::Surrogate;
use crate::gp::linalg::{cholesky_in_place, cholesky_solve};
use crate::gp::GpModel;

/// Inputs with one scalar label each.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabeledSet {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

impl LabeledSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows(x: Vec<Vec<f64>>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(invalid(format!("{} inputs but {} labels", x.len(), y.len())));
        }
        Ok(Self { x, y })
    }

    pub fn push(&mut self, x: Vec<f64>, y: f64) {
        self.x.push(x);
        self.y.push(y);
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn extend_from(&mut self, other: &LabeledSet) {
        self.x.extend(other.x.iter().cloned());
        self.y.extend(other.y.iter().copied());
    }

    pub fn concat(&self, other: &LabeledSet) -> LabeledSet {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }
}

/// Everything observed so far.
///
/// `d_s` holds rows evaluated on both objectives; `pairing[i]` is the row of
/// `d_f` carrying the fast value of `d_s` row `i`. `d_f` additionally holds
/// every fast-only evaluation. `d_c` is kept in step with `d_s`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingSets {
    pub d_s: LabeledSet,
    pub d_f: LabeledSet,
    pub d_c: LabeledSet,
    pub d_t: LabeledSet,
    pairing: Vec<usize>,
}

impl TrainingSets {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// Records a point evaluated on both objectives.
    pub fn add_both(&mut self, x: Vec<f64>, y_s: f64, y_f: f64) {
        self.pairing.push(self.d_f.len());
        self.d_f.push(x.clone(), y_f);
        self.d_c.push(x.clone(), y_s - y_f);
        self.d_s.push(x, y_s);
    }

    pub fn add_fast(&mut self, x: Vec<f64>, y_f: f64) {
        self.d_f.push(x, y_f);
    }

    pub fn check_invariants(&self) -> Result<()> {
        let rebuilt = build_difference_set(&self.d_s, &self.d_f, &self.pairing)?;
        if rebuilt != self.d_c || self.d_c.len() != self.d_s.len() {
            return Err(Error::InternalConsistency("difference set out of step".into()));
        }
        for x in &self.d_t.x {
            if self.d_s.x.contains(x) {
                return Err(Error::InternalConsistency(
                    "transferable row duplicates a slow-evaluated row".into(),
                ));
            }
        }
        Ok(())
    }
}

/// `Y_c = Y_s - Y_f` for each paired row, in `d_s` order.
pub fn build_difference_set(d_s: &LabeledSet, d_f: &LabeledSet, pairing: &[usize]) -> Result<LabeledSet> {
    if pairing.is_empty() || pairing.len() != d_s.len() {
        return Err(Error::InternalConsistency(format!(
            "{} pairings for {} slow rows",
            pairing.len(),
            d_s.len()
        )));
    }
    let mut out = LabeledSet::new();
    for (i, &j) in pairing.iter().enumerate() {
        let yf = *d_f
            .y
            .get(j)
            .ok_or_else(|| Error::InternalConsistency(format!("slow row {i} paired with missing fast row {j}")))?;
        if d_f.x[j] != d_s.x[i] {
            return Err(Error::InternalConsistency(format!("slow row {i} paired with a different point")));
        }
        out.push(d_s.x[i].clone(), d_s.y[i] - yf);
    }
    Ok(out)
}

/// One iteration's auxiliary points and the arrays used to judge them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransferBatch {
    pub x_a: Vec<Vec<f64>>,
    pub y_f_a: Vec<f64>,
    pub y_c_a: Vec<f64>,
    pub y_s_syn: Vec<f64>,
    pub y_s_mean: Vec<f64>,
    pub sigma_s: Vec<f64>,
    pub selected: Vec<bool>,
}

impl TransferBatch {
    pub fn len(&self) -> usize {
        self.x_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_a.is_empty()
    }

    /// Whether `y` lies in the closed interval `mean ± sigma`.
    pub fn within_ci(y: f64, mean: f64, sigma: f64) -> bool {
        y >= mean - sigma && y <= mean + sigma
    }

    /// Re-checks every selected row against its stored interval.
    pub fn verify(&self) -> Result<()> {
        let n = self.len();
        for len in [
            self.y_f_a.len(),
            self.y_c_a.len(),
            self.y_s_syn.len(),
            self.y_s_mean.len(),
            self.sigma_s.len(),
            self.selected.len(),
        ] {
            if len != n {
                return Err(Error::InternalConsistency("transfer batch arrays differ in length".into()));
            }
        }
        for i in 0..n {
            if self.selected[i] && !Self::within_ci(self.y_s_syn[i], self.y_s_mean[i], self.sigma_s[i]) {
                return Err(Error::InternalConsistency(format!("row {i} selected outside its interval")));
            }
        }
        Ok(())
    }

    /// Every auxiliary row with its synthetic label.
    pub fn all_rows(&self) -> LabeledSet {
        LabeledSet {
            x: self.x_a.clone(),
            y: self.y_s_syn.clone(),
        }
    }
}

/// Predicted differences on `x_a` and `Y_s' = Y_c + Y_f`.
pub fn synthesize_slow_labels(
    co: &dyn Surrogate,
    x_a: &[Vec<f64>],
    y_f_a: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if x_a.len() != y_f_a.len() {
        return Err(invalid("one fast value per auxiliary point required"));
    }
    let y_c: Vec<f64> = x_a.iter().map(|x| co.mean(x)).collect::<Result<_>>()?;
    let y_s = y_c.iter().zip(y_f_a).map(|(c, f)| c + f).collect();
    Ok((y_c, y_s))
}

/// Fills the slow model's mean and standard deviation into `batch`, marks
/// rows whose synthetic label falls inside `mean ± std`, and returns them.
pub fn select_transferable(gp_s: &GpModel, batch: &mut TransferBatch) -> Result<LabeledSet> {
    if batch.y_s_syn.len() != batch.len() {
        return Err(invalid("synthetic labels missing from transfer batch"));
    }
    batch.y_s_mean.clear();
    batch.sigma_s.clear();
    batch.selected.clear();
    let mut out = LabeledSet::new();
    for (x, &y) in batch.x_a.iter().zip(&batch.y_s_syn) {
        let p = gp_s.predict(x);
        let s = p.std();
        let keep = TransferBatch::within_ci(y, p.mean, s);
        batch.y_s_mean.push(p.mean);
        batch.sigma_s.push(s);
        batch.selected.push(keep);
        if keep {
            out.push(x.clone(), y);
        }
    }
    Ok(out)
}

/// Keeps the `n_max / 2` best rows by label (stable on ties) plus
/// `n_max / 2` drawn uniformly from the rest. Sets within the cap pass
/// through unchanged.
pub fn cap_training_set<R: Rng + ?Sized>(d: &LabeledSet, n_max: usize, rng: &mut R) -> Result<LabeledSet> {
    if n_max < 2 || n_max % 2 != 0 {
        return Err(invalid(format!("training cap must be even and >= 2, got {n_max}")));
    }
    if d.len() <= n_max {
        return Ok(d.clone());
    }
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&a, &b| d.y[a].total_cmp(&d.y[b]));
    let half = n_max / 2;
    let (best, rest) = order.split_at(half);
    let mut picked: Vec<usize> = index::sample(rng, rest.len(), n_max - half)
        .into_iter()
        .map(|i| rest[i])
        .collect();
    picked.sort_unstable();
    let mut out = LabeledSet::new();
    for &i in best.iter().chain(&picked) {
        out.push(d.x[i].clone(), d.y[i]);
    }
    Ok(out)
}

/// How an oversized training set is cut down to `n_max` rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapRule {
    /// Best half by label plus a uniform draw from the rest.
    BestAndRandom,
    /// The `n_max` most recently added rows.
    MostRecent,
}

impl CapRule {
    pub fn apply<R: Rng + ?Sized>(self, d: &LabeledSet, n_max: usize, rng: &mut R) -> Result<LabeledSet> {
        match self {
            CapRule::BestAndRandom => cap_training_set(d, n_max, rng),
            CapRule::MostRecent => {
                if n_max == 0 {
                    return Err(invalid("training cap must be positive"));
                }
                let lo = d.len().saturating_sub(n_max);
                Ok(LabeledSet { x: d.x[lo..].to_vec(), y: d.y[lo..].to_vec() })
            }
        }
    }
}

/// Mean squared error of the co-surrogate against true differences.
pub fn co_surrogate_mse(co: &dyn Surrogate, x_a: &[Vec<f64>], true_diffs: &[f64]) -> Result<f64> {
    if x_a.is_empty() || x_a.len() != true_diffs.len() {
        return Err(invalid("MSE needs matching nonempty inputs and targets"));
    }
    let mut sum = 0.0;
    for (x, t) in x_a.iter().zip(true_diffs) {
        let e = co.mean(x)? - t;
        sum += e * e;
    }
    Ok(sum / x_a.len() as f64)
}

/// Full quadratic regression `1, x_i, x_i², x_i·x_j` on inputs scaled to
/// the unit box, fitted by ridge least squares. The ridge term is tiny; it
/// only matters when the basis outnumbers the rows, where it yields the
/// near-minimum-norm interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticModel {
    bounds: Bounds,
    coef: Vec<f64>,
    offset: f64,
}

const QUAD_RIDGE: f64 = 1e-10;

fn quad_features(z: &[f64]) -> Vec<f64> {
    let d = z.len();
    let mut f = Vec::with_capacity(1 + 2 * d + d * (d - 1) / 2);
    f.push(1.0);
    f.extend_from_slice(z);
    f.extend(z.iter().map(|v| v * v));
    for i in 0..d {
        for j in i + 1..d {
            f.push(z[i] * z[j]);
        }
    }
    f
}

impl QuadraticModel {
    pub fn basis_size(dim: usize) -> usize {
        1 + 2 * dim + dim * dim.saturating_sub(1) / 2
    }

    pub fn fit(x: &[Vec<f64>], y: &[f64], bounds: &Bounds) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(Error::InsufficientData("quadratic fit needs matching nonempty data".into()));
        }
        let offset = y.iter().sum::<f64>() / y.len() as f64;
        let yc: Vec<f64> = y.iter().map(|v| v - offset).collect();
        let rows: Vec<Vec<f64>> = x.iter().map(|r| quad_features(&bounds.normalize(r))).collect();
        let (n, p) = (rows.len(), rows[0].len());
        let coef = if p <= n {
            // (AᵀA + λI) β = Aᵀy
            let mut g = vec![0.0; p * p];
            let mut rhs = vec![0.0; p];
            for (r, t) in rows.iter().zip(&yc) {
                for i in 0..p {
                    rhs[i] += r[i] * t;
                    for j in 0..=i {
                        g[i * p + j] += r[i] * r[j];
                    }
                }
            }
            solve_ridge(g, p, rhs)?
        } else {
            // β = Aᵀ (AAᵀ + λI)⁻¹ y
            let mut g = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    g[i * n + j] = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                }
            }
            let w = solve_ridge(g, n, yc)?;
            let mut beta = vec![0.0; p];
            for (r, wi) in rows.iter().zip(&w) {
                for (b, v) in beta.iter_mut().zip(r) {
                    *b += wi * v;
                }
            }
            beta
        };
        Ok(Self {
            bounds: bounds.clone(),
            coef,
            offset,
        })
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let f = quad_features(&self.bounds.normalize(x));
        self.offset + f.iter().zip(&self.coef).map(|(a, b)| a * b).sum::<f64>()
    }
}

impl Surrogate for QuadraticModel {
    fn mean(&self, x: &[f64]) -> Result<f64> {
        Ok(self.predict(x))
    }
}

/// Solves with the lower triangle of a symmetric Gram matrix plus a ridge
/// scaled to its diagonal.
fn solve_ridge(mut g: Vec<f64>, n: usize, rhs: Vec<f64>) -> Result<Vec<f64>> {
    for i in 0..n {
        for j in 0..i {
            g[j * n + i] = g[i * n + j];
        }
    }
    let scale = (0..n).map(|i| g[i * n + i]).fold(0.0, f64::max).max(1.0);
    let mut lambda = QUAD_RIDGE * scale;
    for _ in 0..8 {
        let mut a = g.clone();
        for i in 0..n {
            a[i * n + i] += lambda;
        }
        if cholesky_in_place(&mut a, n) {
            return Ok(cholesky_solve(&a, n, &rhs));
        }
        lambda *= 100.0;
    }
    Err(Error::NumericalDegeneracy("quadratic co-surrogate system not positive definite".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evo::lhs_sample;
    use crate::gp::{fit, FitConfig};
    use crate::problems::Problem;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    struct Fixed(f64);

    impl Surrogate for Fixed {
        fn mean(&self, _: &[f64]) -> Result<f64> {
            Ok(self.0)
        }
    }

    fn set(y: &[f64]) -> LabeledSet {
        LabeledSet::from_rows(y.iter().map(|v| vec![*v]).collect(), y.to_vec()).unwrap()
    }

    #[test]
    fn difference_arithmetic() {
        let mut t = TrainingSets::new();
        t.add_fast(vec![9.0], 7.0);
        t.add_both(vec![0.0], 3.0, 1.0);
        t.add_fast(vec![8.0], 7.0);
        t.add_both(vec![1.0], 5.0, 2.0);
        assert_eq!(t.d_c.y, vec![2.0, 3.0]);
        assert_eq!(t.pairing(), &[1, 3]);
        t.check_invariants().unwrap();
        let same = build_difference_set(&set(&[4.0, 4.0]), &set(&[4.0, 4.0]), &[0, 1]).unwrap();
        assert_eq!(same.y, vec![0.0, 0.0]);
    }

    #[test]
    fn unpaired_row_is_an_error() {
        assert!(build_difference_set(&set(&[1.0]), &set(&[]), &[0]).is_err());
        assert!(build_difference_set(&set(&[1.0, 2.0]), &set(&[1.0, 2.0]), &[0]).is_err());
        assert!(build_difference_set(&set(&[1.0]), &set(&[2.0]), &[0]).is_err());
    }

    #[test]
    fn anti_correlated_differences() {
        let p = Problem::by_name("cm-onemax:n=4:corr=-1").unwrap();
        let mut t = TrainingSets::new();
        for code in 0..3usize.pow(4) {
            let x: Vec<f64> = (0..4).map(|k| (code / 3usize.pow(k as u32) % 3) as f64 / 2.0).collect();
            let f = p.evaluate(&x).unwrap();
            t.add_both(x, f[1], f[0]);
        }
        for (c, i) in t.d_c.y.iter().zip(t.pairing()) {
            assert_eq!(*c, 4.0 - 2.0 * t.d_f.y[*i]);
        }
    }

    #[test]
    fn transferable_rows_must_be_new() {
        let mut t = TrainingSets::new();
        t.add_both(vec![0.5], 1.0, 0.0);
        t.d_t.push(vec![0.5], 1.0);
        assert!(t.check_invariants().is_err());
    }

    #[test]
    fn synthetic_labels() {
        let xa = vec![vec![0.1], vec![0.2]];
        let (c, s) = synthesize_slow_labels(&Fixed(2.5), &xa, &[1.0, -1.0]).unwrap();
        assert_eq!(c, vec![2.5, 2.5]);
        assert_eq!(s, vec![3.5, 1.5]);
        let (c, s) = synthesize_slow_labels(&Fixed(-0.75), &xa, &[0.0, 0.0]).unwrap();
        assert_eq!(c, s);
    }

    #[test]
    fn constant_difference_model() {
        let bounds = Bounds::unit(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = lhs_sample(12, &bounds, &mut rng);
        let gp = fit(&x, &vec![0.8; 12], &bounds, &FitConfig::default()).unwrap();
        let yf: Vec<f64> = x.iter().map(|r| r[0] * 3.0).collect();
        let (_, s) = synthesize_slow_labels(&gp, &x, &yf).unwrap();
        for (a, b) in s.iter().zip(&yf) {
            assert!((a - (b + 0.8)).abs() < 1e-9);
        }
    }

    fn toy_gp() -> GpModel {
        let bounds = Bounds::unit(1);
        let x: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64 / 5.0]).collect();
        let y: Vec<f64> = x.iter().map(|r| (4.0 * r[0]).sin()).collect();
        fit(&x, &y, &bounds, &FitConfig::default()).unwrap()
    }

    #[test]
    fn interval_selection() {
        let gp = toy_gp();
        let x = vec![0.33];
        let p = gp.predict(&x);
        let s = p.std();
        assert!(s > 0.0);
        let mut batch = TransferBatch {
            x_a: vec![x.clone(); 5],
            y_f_a: vec![0.0; 5],
            y_c_a: vec![0.0; 5],
            y_s_syn: vec![p.mean, p.mean + 2.0 * s, p.mean + s, p.mean - s, p.mean - 1.01 * s],
            ..TransferBatch::default()
        };
        let picked = select_transferable(&gp, &mut batch).unwrap();
        assert_eq!(batch.selected, vec![true, false, true, true, false]);
        assert_eq!(picked.len(), 3);
        batch.verify().unwrap();
        batch.selected[1] = true;
        assert!(batch.verify().is_err());
    }

    #[test]
    fn cap_keeps_best_half() {
        let d = set(&[5.0, 1.0, 4.0, 2.0, 6.0, 3.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = cap_training_set(&d, 4, &mut rng).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(&c.y[..2], &[1.0, 2.0]);
        assert!(c.y[2..].iter().all(|v| *v > 2.0));
        assert_eq!(cap_training_set(&d, 6, &mut rng).unwrap(), d);
        assert_eq!(cap_training_set(&d, 100, &mut rng).unwrap(), d);
        assert!(cap_training_set(&d, 3, &mut rng).is_err());
        assert!(cap_training_set(&d, 0, &mut rng).is_err());
    }

    #[test]
    fn recent_cap_keeps_the_tail() {
        let d = set(&[5.0, 1.0, 4.0, 2.0, 6.0, 3.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = CapRule::MostRecent.apply(&d, 4, &mut rng).unwrap();
        assert_eq!(c.y, vec![4.0, 2.0, 6.0, 3.0]);
        assert_eq!(c.x, d.x[2..].to_vec());
        assert_eq!(CapRule::MostRecent.apply(&d, 7, &mut rng).unwrap(), d);
        assert!(CapRule::MostRecent.apply(&d, 0, &mut rng).is_err());
        let a = CapRule::BestAndRandom.apply(&d, 4, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(a, cap_training_set(&d, 4, &mut ChaCha8Rng::seed_from_u64(1)).unwrap());
    }

    #[test]
    fn cap_ties_are_stable() {
        let d = LabeledSet::from_rows((0..10).map(|i| vec![i as f64]).collect(), vec![1.0; 10]).unwrap();
        let a = cap_training_set(&d, 4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let b = cap_training_set(&d, 4, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(&a.x[..2], &[vec![0.0], vec![1.0]]);
    }

    #[test]
    fn mse_cases() {
        let xa = vec![vec![0.0]; 4];
        assert_eq!(co_surrogate_mse(&Fixed(1.0), &xa, &[1.0; 4]).unwrap(), 0.0);
        assert_eq!(co_surrogate_mse(&Fixed(1.5), &xa, &[1.0; 4]).unwrap(), 0.25);
        let xs = vec![vec![0.0]; 5];
        let t = [0.3, -1.2, 2.0, 0.0, 0.7];
        let by_hand = ((0.5 - 0.3f64).powi(2)
            + (0.5 + 1.2f64).powi(2)
            + (0.5 - 2.0f64).powi(2)
            + 0.25
            + (0.5 - 0.7f64).powi(2))
            / 5.0;
        assert!((co_surrogate_mse(&Fixed(0.5), &xs, &t).unwrap() - by_hand).abs() < 1e-15);
        assert!(co_surrogate_mse(&Fixed(0.5), &xs, &t[..2]).is_err());
    }

    #[test]
    fn quadratic_recovers_quadratic() {
        let bounds = Bounds::new(vec![-1.0, 0.0, 2.0], vec![1.0, 5.0, 3.0]).unwrap();
        let truth = |x: &[f64]| 1.5 - x[0] + 0.3 * x[1] * x[1] + x[0] * x[2] - 2.0 * x[2] * x[2];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = lhs_sample(40, &bounds, &mut rng);
        let y: Vec<f64> = x.iter().map(|r| truth(r)).collect();
        let m = QuadraticModel::fit(&x, &y, &bounds).unwrap();
        for _ in 0..50 {
            let p: Vec<f64> = (0..3).map(|k| bounds.lower()[k] + rng.gen::<f64>() * bounds.range(k)).collect();
            assert!((m.predict(&p) - truth(&p)).abs() < 1e-5, "{} {}", m.predict(&p), truth(&p));
        }
        assert_eq!(QuadraticModel::basis_size(3), 10);
        assert_eq!(QuadraticModel::basis_size(30), 496);
    }

    #[test]
    fn quadratic_underdetermined_interpolates() {
        let bounds = Bounds::unit(30);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = lhs_sample(60, &bounds, &mut rng);
        let y: Vec<f64> = x.iter().map(|r| r.iter().sum::<f64>().sin()).collect();
        let m = QuadraticModel::fit(&x, &y, &bounds).unwrap();
        for (r, t) in x.iter().zip(&y) {
            assert!((m.predict(r) - t).abs() < 1e-4);
        }
    }

    proptest! {
        #[test]
        fn cap_properties(seed in any::<u64>(), n in 1usize..80, half in 1usize..30) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let d = LabeledSet::from_rows((0..n).map(|i| vec![i as f64]).collect(), y.clone()).unwrap();
            let c = cap_training_set(&d, 2 * half, &mut rng).unwrap();
            prop_assert_eq!(c.len(), n.min(2 * half));
            let best = y.iter().copied().fold(f64::INFINITY, f64::min);
            prop_assert!(c.y.contains(&best));
            let mut rows: Vec<usize> = c.x.iter().map(|r| r[0] as usize).collect();
            rows.sort();
            rows.dedup();
            prop_assert_eq!(rows.len(), c.len());
        }

        #[test]
        fn synthesis_is_exact(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = rng.gen_range(-5.0..5.0);
            let yf: Vec<f64> = (0..8).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let xa = vec![vec![0.0]; 8];
            let (yc, ys) = synthesize_slow_labels(&Fixed(c), &xa, &yf).unwrap();
            for i in 0..8 {
                prop_assert_eq!(ys[i].to_bits(), (yc[i] + yf[i]).to_bits());
            }
        }
    }
}
