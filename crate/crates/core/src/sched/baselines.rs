use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evo::{
    apd_partition, apd_survivors, lhs_sample, reference_vectors, soea_optimize, translate_by_ideal,
    variation, GeneticAlgorithm, ReferenceVectorSet, Sample, VariationConfig,
};
use crate::problems::HeterogeneousProblem;

use super::{AlgorithmConfig, ArchiveEntry, RunRecord, Scheme, Tracker};

const DISTINCT_TOL: f64 = 1e-9;

/// Spends `(tau - 1) * fe_s_max` fast evaluations on a GA over the fast
/// objective, then evaluates the `fe_s_max` best distinct points on both
/// objectives: `n_train` first, then `u` at a time.
pub fn run_fast_first(problem: &HeterogeneousProblem, cfg: &AlgorithmConfig) -> Result<RunRecord> {
    let mut t = Tracker::new(problem, cfg)?;
    let bounds = problem.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let budget = (cfg.tau - 1) * cfg.fe_s_max;
    let mut samples = soea_optimize(|x| problem.evaluate_fast(x), budget, bounds, &cfg.ga, &mut rng)?;
    t.ledger.charge_fast(samples.len())?;
    samples.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut chosen: Vec<Vec<f64>> = Vec::with_capacity(cfg.fe_s_max);
    for (x, _) in samples {
        if chosen.len() == cfg.fe_s_max {
            break;
        }
        let distinct = chosen
            .iter()
            .all(|c| c.iter().zip(&x).any(|(a, b)| (a - b).abs() > DISTINCT_TOL));
        if distinct {
            chosen.push(x);
        }
    }
    if chosen.len() < cfg.fe_s_max {
        return Err(Error::InsufficientData(format!(
            "only {} distinct fast-objective samples for {} slow evaluations",
            chosen.len(),
            cfg.fe_s_max
        )));
    }
    let mut next = 0;
    let mut chunk = cfg.n_train;
    while next < chosen.len() {
        let end = (next + chunk).min(chosen.len());
        for x in &chosen[next..end] {
            t.evaluate_both(x)?;
        }
        next = end;
        chunk = cfg.u;
        t.record(0, None)?;
    }
    Ok(t.finish(Scheme::FastFirst, cfg, Vec::new()))
}

/// Population of a true-valued MOEA: archive entries.
type Members = Vec<ArchiveEntry>;

fn environmental_selection(
    pop: Members,
    offspring: Members,
    refs: &ReferenceVectorSet,
    progress: f64,
    alpha: f64,
    size: usize,
) -> Members {
    let combined: Members = pop.into_iter().chain(offspring).collect();
    let f: Vec<[f64; 2]> = combined.iter().map(|e| e.f).collect();
    let parts = apd_partition(&translate_by_ideal(&f), refs, progress, alpha);
    apd_survivors(&parts, size)
        .into_iter()
        .map(|i| combined[i].clone())
        .collect()
}

/// `count` children bred from `pool` by repeated shuffled variation.
fn breed<R: rand::Rng + ?Sized>(
    pool: &[Vec<f64>],
    count: usize,
    bounds: &crate::Bounds,
    var: &VariationConfig,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut mating = pool.to_vec();
    while out.len() < count {
        mating.shuffle(rng);
        out.extend(variation(&mating, bounds, var, rng));
    }
    out.truncate(count);
    out
}

struct Moea<'a, 'p> {
    t: Tracker<'p>,
    cfg: &'a AlgorithmConfig,
    refs: ReferenceVectorSet,
    var: VariationConfig,
    rng: ChaCha8Rng,
}

impl<'a, 'p> Moea<'a, 'p> {
    fn new(problem: &'p HeterogeneousProblem, cfg: &'a AlgorithmConfig) -> Result<Self> {
        Ok(Self {
            t: Tracker::new(problem, cfg)?,
            cfg,
            refs: reference_vectors(cfg.rvea.divisions)?,
            var: cfg
                .rvea
                .variation
                .unwrap_or_else(|| VariationConfig::standard(problem.bounds().dim())),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        })
    }

    fn evaluate_all(&mut self, xs: &[Vec<f64>]) -> Result<Members> {
        xs.iter()
            .map(|x| {
                let f = self.t.evaluate_both(x)?;
                Ok(ArchiveEntry { x: x.clone(), f })
            })
            .collect()
    }

    fn select(&mut self, pop: Members, offspring: Members) -> Members {
        let progress = self.t.progress();
        environmental_selection(
            pop,
            offspring,
            &self.refs,
            progress,
            self.cfg.rvea.alpha,
            self.cfg.moea_population,
        )
    }

    fn fast_batch(&mut self, xs: Vec<Vec<f64>>) -> Result<Vec<Sample>> {
        let problem = self.t.problem;
        let out = xs
            .into_iter()
            .map(|x| problem.evaluate_fast(&x).map(|y| (x, y)))
            .collect::<Result<Vec<_>>>()?;
        self.t.ledger.charge_fast(out.len())?;
        Ok(out)
    }
}

/// True-valued RVEA that, while each generation's slow evaluations are
/// pending, evaluates `(tau - 1)` times as many brood offspring on the fast
/// objective; the best brood members by fast value join the next mating
/// pool.
pub fn run_brood_interleaving(problem: &HeterogeneousProblem, cfg: &AlgorithmConfig) -> Result<RunRecord> {
    let mut m = Moea::new(problem, cfg)?;
    let bounds = problem.bounds();
    let k = cfg.moea_population.min(cfg.fe_s_max);
    let init = lhs_sample(k, bounds, &mut m.rng);
    // No population exists yet to breed from, so the first brood is random.
    let first_brood = lhs_sample((cfg.tau - 1) * k, bounds, &mut m.rng);
    let mut brood = m.fast_batch(first_brood)?;
    let mut pop = m.evaluate_all(&init)?;
    m.t.record(0, None)?;

    while m.t.ledger.slow_remaining() > 0 {
        let k = cfg.moea_population.min(m.t.ledger.slow_remaining());
        brood.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut pool: Vec<Vec<f64>> = pop.iter().map(|e| e.x.clone()).collect();
        pool.extend(brood.iter().take(k).map(|s| s.0.clone()));
        let offspring = breed(&pool, k, bounds, &m.var, &mut m.rng);
        let next_brood = breed(&pool, (cfg.tau - 1) * k, bounds, &m.var, &mut m.rng);
        brood = m.fast_batch(next_brood)?;
        let evaluated = m.evaluate_all(&offspring)?;
        pop = m.select(pop, evaluated);
        m.t.record(0, None)?;
    }
    Ok(m.t.finish(Scheme::Brood, cfg, Vec::new()))
}

/// True-valued RVEA alongside a GA on the fast objective that spends the
/// per-generation fast surplus; the GA's best distinct individuals are
/// slow-evaluated with the next generation's offspring.
pub fn run_speculative_interleaving(problem: &HeterogeneousProblem, cfg: &AlgorithmConfig) -> Result<RunRecord> {
    let mut m = Moea::new(problem, cfg)?;
    let bounds = problem.bounds();
    let inject = (cfg.moea_population / 5).max(1);
    let k = cfg.moea_population.min(cfg.fe_s_max);
    let init = lhs_sample(k, bounds, &mut m.rng);

    let mut fast = |x: &[f64]| problem.evaluate_fast(x);
    let surplus = (cfg.tau - 1) * k;
    let ga_cfg = &cfg.ga;
    let (mut ga, seeded) = if surplus >= ga_cfg.population {
        GeneticAlgorithm::initialize(&mut fast, bounds, ga_cfg, &mut m.rng)?
    } else {
        let seed = lhs_sample(surplus.max(1), bounds, &mut m.rng)
            .into_iter()
            .map(|x| fast(&x).map(|y| (x, y)))
            .collect::<Result<Vec<_>>>()?;
        (GeneticAlgorithm::from_evaluated(seed.clone(), bounds, ga_cfg)?, seed)
    };
    m.t.ledger.charge_fast(seeded.len())?;
    let mut pending = surplus.saturating_sub(seeded.len());
    while pending > 0 {
        let used = ga.step(&mut fast, pending, &mut m.rng)?.len();
        m.t.ledger.charge_fast(used)?;
        pending -= used;
    }
    let mut pop = m.evaluate_all(&init)?;
    m.t.record(0, None)?;

    while m.t.ledger.slow_remaining() > 0 {
        let k = cfg.moea_population.min(m.t.ledger.slow_remaining());
        let archive_has = |x: &[f64], a: &[ArchiveEntry]| a.iter().any(|e| e.x == x);
        let mut batch: Vec<Vec<f64>> = ga
            .best(ga.population().len())
            .into_iter()
            .map(|s| s.0)
            .filter(|x| !archive_has(x, &m.t.archive))
            .take(inject.min(k))
            .collect();
        let pool: Vec<Vec<f64>> = pop.iter().map(|e| e.x.clone()).collect();
        batch.extend(breed(&pool, k - batch.len(), bounds, &m.var, &mut m.rng));

        let mut pending = (cfg.tau - 1) * k;
        while pending > 0 {
            let used = ga.step(&mut fast, pending, &mut m.rng)?.len();
            m.t.ledger.charge_fast(used)?;
            pending -= used;
        }

        let evaluated = m.evaluate_all(&batch)?;
        pop = m.select(pop, evaluated);
        m.t.record(0, None)?;
    }
    Ok(m.t.finish(Scheme::Speculative, cfg, Vec::new()))
}
