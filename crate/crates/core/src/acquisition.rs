//! Infill selection: lower-confidence-bound scoring, APD-based choice of the
//! points to evaluate on both objectives, and local sampling of the extra
//! fast-only points.

use rand::Rng;

use crate::bounds::Bounds;
use crate::error::{invalid, Result};
use crate::evo::{apd_partition, lhs_sample, polynomial_mutation, translate_by_ideal, ReferenceVectorSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaSchedule {
    /// `beta_max` at the start, `beta_min` when the slow budget is spent.
    LinearDecay,
    /// `beta_max` throughout.
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcquisitionConfig {
    pub beta_max: f64,
    pub beta_min: f64,
    pub schedule: BetaSchedule,
    /// APD penalty exponent.
    pub alpha: f64,
    /// Half-width of the local sampling box as a fraction of each range.
    pub local_radius: f64,
    /// Split the partition winners into `u` contiguous groups along the
    /// reference vectors and take the best of each, instead of the `u`
    /// best winners overall.
    pub spread: bool,
}

impl Default for AcquisitionConfig {
    fn default() -> Self {
        Self {
            beta_max: 3.0,
            beta_min: 0.5,
            schedule: BetaSchedule::LinearDecay,
            alpha: 2.0,
            local_radius: 0.05,
            spread: true,
        }
    }
}

impl AcquisitionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta_max >= self.beta_min && self.beta_min >= 0.0) {
            return Err(invalid("need beta_max >= beta_min >= 0"));
        }
        if !(self.local_radius > 0.0 && self.local_radius <= 0.5) {
            return Err(invalid("local sampling radius must lie in (0, 0.5]"));
        }
        Ok(())
    }

    pub fn beta(&self, progress: f64) -> f64 {
        let t = progress.clamp(0.0, 1.0);
        match self.schedule {
            BetaSchedule::LinearDecay => self.beta_max * (1.0 - t) + self.beta_min * t,
            BetaSchedule::Constant => self.beta_max,
        }
    }
}

/// `mean - beta(progress) * std`; lower is better.
pub fn aaf_score(mean: f64, std: f64, progress: f64, cfg: &AcquisitionConfig) -> f64 {
    mean - cfg.beta(progress) * std
}

/// Surrogate output for one objective at one candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfillSelection {
    /// Indices into the candidate list, in selection order.
    pub indices: Vec<usize>,
    pub points: Vec<Vec<f64>>,
    /// Set when fewer distinct candidates than requested were available.
    pub short: bool,
}

const DUPLICATE_TOL: f64 = 1e-12;

fn same_point(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(u, v)| (u - v).abs() <= DUPLICATE_TOL)
}

/// Scores both objectives, runs APD on the scores and returns `u`
/// distinct candidates: partition winners by ascending APD first, then
/// the remaining candidates by ascending APD.
pub fn select_infill(
    candidates: &[Vec<f64>],
    predictions: &[[MeanStd; 2]],
    refs: &ReferenceVectorSet,
    progress: f64,
    u: usize,
    cfg: &AcquisitionConfig,
) -> Result<InfillSelection> {
    if candidates.is_empty() || u == 0 {
        return Err(invalid("infill selection needs candidates and u >= 1"));
    }
    if candidates.len() != predictions.len() {
        return Err(invalid("one prediction pair per candidate required"));
    }
    let scores: Vec<[f64; 2]> = predictions
        .iter()
        .map(|p| {
            [
                aaf_score(p[0].mean, p[0].std, progress, cfg),
                aaf_score(p[1].mean, p[1].std, progress, cfg),
            ]
        })
        .collect();
    let parts = apd_partition(&translate_by_ideal(&scores), refs, progress, cfg.alpha);
    let mut winners: Vec<(usize, f64)> = parts.iter().filter_map(|p| p.first().copied()).collect();
    let mut rest: Vec<(usize, f64)> = parts.iter().flat_map(|p| p.iter().skip(1).copied()).collect();
    let by_apd = |a: &(usize, f64), b: &(usize, f64)| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0));
    if cfg.spread && winners.len() > u {
        // winners come in reference-vector order
        let n = winners.len();
        let mut picked = Vec::new();
        let mut others = Vec::new();
        for g in 0..u {
            let (lo, hi) = (g * n / u, (g + 1) * n / u);
            let grp = &winners[lo..hi];
            let best = grp.iter().copied().min_by(by_apd).unwrap();
            picked.push(best);
            others.extend(grp.iter().copied().filter(|w| w.0 != best.0));
        }
        others.extend(rest);
        winners = picked;
        rest = others;
    }
    winners.sort_by(by_apd);
    rest.sort_by(by_apd);

    let mut indices: Vec<usize> = Vec::with_capacity(u);
    for (i, _) in winners.into_iter().chain(rest) {
        if indices.len() == u {
            break;
        }
        if indices.iter().all(|&j| !same_point(&candidates[i], &candidates[j])) {
            indices.push(i);
        }
    }
    Ok(InfillSelection {
        points: indices.iter().map(|&i| candidates[i].clone()).collect(),
        short: indices.len() < u,
        indices,
    })
}

/// Mutates any point lying within 1e-12 of an archived point or of an
/// earlier point in `points` until it is distinct.
pub fn perturb_duplicates<R: Rng + ?Sized>(
    points: &mut [Vec<f64>],
    archive: &[Vec<f64>],
    bounds: &Bounds,
    rng: &mut R,
) -> usize {
    let mut changed = 0;
    for i in 0..points.len() {
        let clash = |p: &[f64], pts: &[Vec<f64>]| {
            archive.iter().any(|a| same_point(a, p)) || pts[..i].iter().any(|q| same_point(q, p))
        };
        if !clash(&points[i], points) {
            continue;
        }
        changed += 1;
        for _ in 0..100 {
            let mut p = points[i].clone();
            polynomial_mutation(&mut p, bounds, 20.0, 1.0, rng);
            let done = !clash(&p, points);
            points[i] = p;
            if done {
                break;
            }
        }
    }
    changed
}

/// `tau - 1` LHS points in the box `center ± radius·range` (intersected
/// with `bounds`) around every point of `x_new`, grouped by center.
pub fn sample_additional<R: Rng + ?Sized>(
    x_new: &[Vec<f64>],
    tau: usize,
    bounds: &Bounds,
    radius: f64,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    if tau < 2 {
        return Err(invalid(format!("latency ratio must be at least 2, got {tau}")));
    }
    let mut out = Vec::with_capacity(x_new.len() * (tau - 1));
    for c in x_new {
        let local = local_box(c, bounds, radius)?;
        out.extend(lhs_sample(tau - 1, &local, rng));
    }
    Ok(out)
}

pub(crate) fn local_box(center: &[f64], bounds: &Bounds, radius: f64) -> Result<Bounds> {
    let (lo, hi): (Vec<f64>, Vec<f64>) = center
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let h = radius * bounds.range(k);
            ((c - h).max(bounds.lower()[k]), (c + h).min(bounds.upper()[k]))
        })
        .unzip();
    Bounds::new(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evo::{apd_select, reference_vectors};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ms(mean: f64, std: f64) -> MeanStd {
        MeanStd { mean, std }
    }

    #[test]
    fn score_arithmetic() {
        let cfg = AcquisitionConfig {
            beta_max: 2.0,
            beta_min: 2.0,
            ..AcquisitionConfig::default()
        };
        assert_eq!(aaf_score(1.0, 0.5, 0.3, &cfg), 0.0);
        let def = AcquisitionConfig::default();
        for t in [0.0, 0.4, 1.0] {
            assert_eq!(aaf_score(1.7, 0.0, t, &def), 1.7);
        }
        let zero = AcquisitionConfig {
            beta_max: 0.0,
            beta_min: 0.0,
            ..def.clone()
        };
        assert_eq!(aaf_score(-3.0, 9.0, 0.5, &zero), -3.0);
        assert_eq!(def.beta(0.0), 3.0);
        assert_eq!(def.beta(1.0), 0.5);
        assert_eq!(def.beta(0.5), 1.75);
    }

    #[test]
    fn score_monotone() {
        let cfg = AcquisitionConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let (m, s, t) = (rng.gen_range(-5.0..5.0), rng.gen_range(0.0..3.0), rng.gen::<f64>());
            let d = rng.gen_range(1e-6..1.0);
            assert!(aaf_score(m, s + d, t, &cfg) <= aaf_score(m, s, t, &cfg));
            assert!(aaf_score(m + d, s, t, &cfg) > aaf_score(m, s, t, &cfg));
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = AcquisitionConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.beta_min = 4.0;
        assert!(cfg.validate().is_err());
    }

    fn instance(seed: u64, n: usize) -> (Vec<Vec<f64>>, Vec<[MeanStd; 2]>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs = (0..n).map(|i| vec![i as f64, rng.gen()]).collect();
        let ps = (0..n)
            .map(|_| [ms(rng.gen(), rng.gen::<f64>() * 0.2), ms(rng.gen(), rng.gen::<f64>() * 0.2)])
            .collect();
        (xs, ps)
    }

    #[test]
    fn u_equal_to_count_returns_all() {
        let (xs, ps) = instance(1, 7);
        let refs = reference_vectors(9).unwrap();
        let sel = select_infill(&xs, &ps, &refs, 0.2, 7, &AcquisitionConfig::default()).unwrap();
        let mut idx = sel.indices.clone();
        idx.sort();
        assert_eq!(idx, (0..7).collect::<Vec<_>>());
        assert!(!sel.short);
        let over = select_infill(&xs, &ps, &refs, 0.2, 9, &AcquisitionConfig::default()).unwrap();
        assert_eq!(over.indices.len(), 7);
        assert!(over.short);
    }

    #[test]
    fn zero_std_matches_plain_apd() {
        let refs = reference_vectors(9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let n = 40;
            let xs: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64]).collect();
            let means: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen(), rng.gen()]).collect();
            let ps: Vec<_> = means.iter().map(|m| [ms(m[0], 0.0), ms(m[1], 0.0)]).collect();
            let winners = apd_select(&translate_by_ideal(&means), &refs, 0.6, 2.0);
            let sel = select_infill(&xs, &ps, &refs, 0.6, winners.len(), &AcquisitionConfig::default()).unwrap();
            let mut a = sel.indices.clone();
            let mut b = winners.clone();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    /// Recomputes the whole pipeline by brute force: score, translate,
    /// assign by largest cosine, APD, then order winners and losers.
    fn brute(ps: &[[MeanStd; 2]], refs: &ReferenceVectorSet, t: f64, u: usize, spread: bool) -> Vec<usize> {
        let beta = 3.0 * (1.0 - t) + 0.5 * t;
        let s: Vec<[f64; 2]> = ps.iter().map(|p| [p[0].mean - beta * p[0].std, p[1].mean - beta * p[1].std]).collect();
        let z = [
            s.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min),
            s.iter().map(|v| v[1]).fold(f64::INFINITY, f64::min),
        ];
        // The lattice is not evenly spaced in angle; take each vector's
        // nearest neighbour gap from atan2.
        let ang: Vec<f64> = refs.vectors().iter().map(|r| r[1].atan2(r[0])).collect();
        let gamma: Vec<f64> = (0..ang.len())
            .map(|k| {
                let l = if k > 0 { (ang[k] - ang[k - 1]).abs() } else { f64::INFINITY };
                let r = if k + 1 < ang.len() { (ang[k] - ang[k + 1]).abs() } else { f64::INFINITY };
                l.min(r)
            })
            .collect();
        let mut entries = Vec::new();
        for (i, v) in s.iter().enumerate() {
            let f = [v[0] - z[0], v[1] - z[1]];
            let norm = (f[0] * f[0] + f[1] * f[1]).sqrt();
            let (mut best, mut cos) = (0, -2.0);
            for (k, r) in refs.vectors().iter().enumerate() {
                let c = if norm > 0.0 { (f[0] * r[0] + f[1] * r[1]) / norm } else { 2.0 - k as f64 };
                if c > cos {
                    best = k;
                    cos = c;
                }
            }
            let theta = cos.min(1.0).acos();
            entries.push((best, i, (1.0 + 2.0 * t * t * theta / gamma[best]) * norm));
        }
        let mut winners = Vec::new();
        let mut losers = Vec::new();
        for k in 0..refs.len() {
            let mut part: Vec<_> = entries.iter().filter(|e| e.0 == k).collect();
            part.sort_by(|a, b| a.2.partial_cmp(&b.2).unwrap().then(a.1.cmp(&b.1)));
            if let Some((first, tail)) = part.split_first() {
                winners.push((first.1, first.2));
                losers.extend(tail.iter().map(|e| (e.1, e.2)));
            }
        }
        if spread && winners.len() > u {
            // best of each contiguous run of winners along the lattice
            let n = winners.len();
            let mut kept = Vec::new();
            for (j, w) in winners.iter().enumerate() {
                let g = (0..u).find(|&g| j < (g + 1) * n / u).unwrap();
                let lo = g * n / u;
                let hi = (g + 1) * n / u;
                let best = winners[lo..hi]
                    .iter()
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)))
                    .unwrap();
                if best.0 == w.0 {
                    kept.push(*w);
                } else {
                    losers.push(*w);
                }
            }
            winners = kept;
        }
        winners.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
        losers.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
        winners.into_iter().chain(losers).take(u).map(|e| e.0).collect()
    }

    #[test]
    fn matches_brute_force() {
        let refs = reference_vectors(4).unwrap();
        for seed in 0..300 {
            let (xs, ps) = instance(seed, 10);
            let t = (seed % 11) as f64 / 10.0;
            for u in [1, 3, 6, 10] {
                for spread in [false, true] {
                    let cfg = AcquisitionConfig { spread, ..AcquisitionConfig::default() };
                    let sel = select_infill(&xs, &ps, &refs, t, u, &cfg).unwrap();
                    assert_eq!(sel.indices, brute(&ps, &refs, t, u, spread), "seed {seed} u {u} {spread}");
                }
            }
        }
    }

    #[test]
    fn spread_picks_one_per_region() {
        // winners on both ends of the front; the global rule takes the
        // three lowest, all from one end
        let refs = reference_vectors(9).unwrap();
        let means: Vec<[f64; 2]> = (0..10)
            .map(|k| {
                let a = k as f64 / 9.0 * std::f64::consts::FRAC_PI_2;
                let r = if k < 5 { 1.0 } else { 1.5 };
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let ps: Vec<_> = means.iter().map(|m| [ms(m[0], 0.0), ms(m[1], 0.0)]).collect();
        let global = AcquisitionConfig { spread: false, ..AcquisitionConfig::default() };
        let sel = select_infill(&xs, &ps, &refs, 0.0, 3, &global).unwrap();
        assert!(sel.indices.iter().all(|&i| i < 5), "{:?}", sel.indices);
        let sel = select_infill(&xs, &ps, &refs, 0.0, 3, &AcquisitionConfig::default()).unwrap();
        assert!(sel.indices.iter().any(|&i| i >= 7), "{:?}", sel.indices);
        assert!(sel.indices.iter().any(|&i| i < 3), "{:?}", sel.indices);
    }

    #[test]
    fn duplicate_candidates_skipped() {
        let refs = reference_vectors(9).unwrap();
        let xs = vec![vec![0.5, 0.5], vec![0.5, 0.5], vec![0.1, 0.9]];
        let ps = vec![[ms(0.0, 0.0), ms(1.0, 0.0)]; 3];
        let sel = select_infill(&xs, &ps, &refs, 0.0, 2, &AcquisitionConfig::default()).unwrap();
        assert_eq!(sel.indices, vec![0, 2]);
    }

    #[test]
    fn duplicates_get_perturbed() {
        let bounds = Bounds::unit(3);
        let archive = vec![vec![0.2, 0.3, 0.4]];
        let mut pts = vec![vec![0.2, 0.3, 0.4], vec![0.9, 0.9, 0.9], vec![0.9, 0.9, 0.9]];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(perturb_duplicates(&mut pts, &archive, &bounds, &mut rng), 2);
        assert!(!same_point(&pts[0], &archive[0]));
        assert!(!same_point(&pts[1], &pts[2]));
        assert_eq!(pts[1], vec![0.9, 0.9, 0.9]);
        assert!(pts.iter().all(|p| bounds.contains(p)));
    }

    #[test]
    fn additional_counts() {
        let bounds = Bounds::new(vec![-1.0; 4], vec![1.0; 4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let centers = lhs_sample(3, &bounds, &mut rng);
        let two = sample_additional(&centers, 2, &bounds, 0.05, &mut rng).unwrap();
        assert_eq!(two.len(), 3);
        let five = sample_additional(&centers, 5, &bounds, 0.05, &mut rng).unwrap();
        assert_eq!(five.len(), 12);
        for (i, p) in five.iter().enumerate() {
            let c = &centers[i / 4];
            for k in 0..4 {
                assert!((p[k] - c[k]).abs() <= 0.05 * 2.0 + 1e-15);
            }
            assert!(bounds.contains(p));
        }
        assert!(sample_additional(&centers, 1, &bounds, 0.05, &mut rng).is_err());
    }

    #[test]
    fn additional_near_corner_stays_inside() {
        let bounds = Bounds::unit(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = sample_additional(&[vec![0.0, 1.0]], 10, &bounds, 0.05, &mut rng).unwrap();
        assert_eq!(pts.len(), 9);
        for p in pts {
            assert!(p[0] >= 0.0 && p[0] <= 0.05 && p[1] >= 0.95 && p[1] <= 1.0);
        }
    }

    #[test]
    fn additional_is_seeded() {
        let bounds = Bounds::unit(3);
        let c = vec![vec![0.5; 3]];
        let a = sample_additional(&c, 4, &bounds, 0.05, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = sample_additional(&c, 4, &bounds, 0.05, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }
}
