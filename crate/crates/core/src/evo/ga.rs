use rand::Rng;

use crate::bounds::Bounds;
use crate::error::{invalid, Result};

use super::lhs::lhs_sample;
use super::variation::{variation, VariationConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population: usize,
    pub tournament: usize,
    pub variation: Option<VariationConfig>,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 30,
            tournament: 2,
            variation: None,
        }
    }
}

/// An evaluated decision vector.
pub type Sample = (Vec<f64>, f64);

/// Generational GA with tournament selection and single elitism: the best
/// parent replaces the worst child when no child beats it.
///
/// Kept as a struct so callers can advance it a generation at a time and
/// inject outside individuals between generations.
#[derive(Debug, Clone)]
pub struct GeneticAlgorithm {
    bounds: Bounds,
    cfg: GaConfig,
    variation: VariationConfig,
    population: Vec<Sample>,
}

fn by_value(a: &Sample, b: &Sample) -> std::cmp::Ordering {
    a.1.total_cmp(&b.1)
}

impl GeneticAlgorithm {
    /// Evaluates an LHS design of `cfg.population` points.
    pub fn initialize<F, R>(objective: &mut F, bounds: &Bounds, cfg: &GaConfig, rng: &mut R) -> Result<(Self, Vec<Sample>)>
    where
        F: FnMut(&[f64]) -> Result<f64>,
        R: Rng + ?Sized,
    {
        let mut evaluated = Vec::with_capacity(cfg.population);
        for x in lhs_sample(cfg.population, bounds, rng) {
            let y = objective(&x)?;
            evaluated.push((x, y));
        }
        let ga = Self::from_evaluated(evaluated.clone(), bounds, cfg)?;
        Ok((ga, evaluated))
    }

    /// Starts from an already evaluated population.
    pub fn from_evaluated(population: Vec<Sample>, bounds: &Bounds, cfg: &GaConfig) -> Result<Self> {
        if cfg.population < 2 || cfg.tournament == 0 {
            return Err(invalid("GA needs population >= 2 and tournament >= 1"));
        }
        if population.is_empty() {
            return Err(invalid("GA needs a nonempty starting population"));
        }
        let variation = cfg
            .variation
            .unwrap_or_else(|| VariationConfig::standard(bounds.dim()));
        variation.validate()?;
        Ok(Self {
            bounds: bounds.clone(),
            cfg: cfg.clone(),
            variation,
            population,
        })
    }

    pub fn population(&self) -> &[Sample] {
        &self.population
    }

    /// The `k` best members, best first.
    pub fn best(&self, k: usize) -> Vec<Sample> {
        let mut sorted = self.population.clone();
        sorted.sort_by(by_value);
        sorted.truncate(k);
        sorted
    }

    fn tournament<R: Rng + ?Sized>(&self, rng: &mut R) -> &Sample {
        let mut best = &self.population[rng.gen_range(0..self.population.len())];
        for _ in 1..self.cfg.tournament {
            let c = &self.population[rng.gen_range(0..self.population.len())];
            if c.1 < best.1 {
                best = c;
            }
        }
        best
    }

    /// Breeds and evaluates at most `max_evals` children, then forms the
    /// next generation. Returns the evaluated children.
    pub fn step<F, R>(&mut self, objective: &mut F, max_evals: usize, rng: &mut R) -> Result<Vec<Sample>>
    where
        F: FnMut(&[f64]) -> Result<f64>,
        R: Rng + ?Sized,
    {
        let count = self.cfg.population.min(max_evals);
        if count == 0 {
            return Ok(Vec::new());
        }
        let parents: Vec<Vec<f64>> = (0..self.cfg.population)
            .map(|_| self.tournament(rng).0.clone())
            .collect();
        let mut kids = variation(&parents, &self.bounds, &self.variation, rng);
        kids.truncate(count);
        let mut evaluated = Vec::with_capacity(count);
        for x in kids {
            let y = objective(&x)?;
            evaluated.push((x, y));
        }

        let mut old = std::mem::take(&mut self.population);
        old.sort_by(by_value);
        let elite = old[0].clone();
        let mut next = evaluated.clone();
        // A short final brood keeps the best of the previous generation.
        next.extend(old.into_iter().take(self.cfg.population.saturating_sub(count)));
        next.sort_by(by_value);
        if elite.1 < next[0].1 {
            next.pop();
            next.insert(0, elite);
        }
        self.population = next;
        Ok(evaluated)
    }

    /// Replaces the worst members with `incoming`.
    pub fn inject(&mut self, incoming: &[Sample]) {
        self.population.sort_by(by_value);
        let keep = self.population.len().saturating_sub(incoming.len());
        self.population.truncate(keep);
        self.population.extend(incoming.iter().cloned());
        self.population.sort_by(by_value);
    }
}

/// Runs the GA until exactly `budget` evaluations are spent and returns
/// every evaluated pair in evaluation order.
pub fn soea_optimize<F, R>(
    mut objective: F,
    budget: usize,
    bounds: &Bounds,
    cfg: &GaConfig,
    rng: &mut R,
) -> Result<Vec<Sample>>
where
    F: FnMut(&[f64]) -> Result<f64>,
    R: Rng + ?Sized,
{
    if budget < cfg.population {
        return Err(invalid(format!(
            "GA budget {budget} below population size {}",
            cfg.population
        )));
    }
    let (mut ga, mut all) = GeneticAlgorithm::initialize(&mut objective, bounds, cfg, rng)?;
    while all.len() < budget {
        let kids = ga.step(&mut objective, budget - all.len(), rng)?;
        all.extend(kids);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sphere(x: &[f64]) -> Result<f64> {
        Ok(x.iter().map(|v| v * v).sum())
    }

    fn median(mut v: Vec<f64>) -> f64 {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    }

    #[test]
    fn budget_equal_to_population() {
        let bounds = Bounds::unit(4);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = soea_optimize(sphere, 30, &bounds, &GaConfig::default(), &mut rng).unwrap();
        assert_eq!(out.len(), 30);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let design = lhs_sample(30, &bounds, &mut rng);
        let xs: Vec<_> = out.into_iter().map(|s| s.0).collect();
        assert_eq!(xs, design);
    }

    #[test]
    fn exact_accounting() {
        let bounds = Bounds::unit(3);
        for budget in [30, 31, 59, 60, 77, 400] {
            let mut calls = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget as u64);
            let out = soea_optimize(
                |x| {
                    calls += 1;
                    sphere(x)
                },
                budget,
                &bounds,
                &GaConfig::default(),
                &mut rng,
            )
            .unwrap();
            assert_eq!(out.len(), budget);
            assert_eq!(calls, budget);
        }
    }

    #[test]
    fn small_budget_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(soea_optimize(sphere, 29, &Bounds::unit(2), &GaConfig::default(), &mut rng).is_err());
    }

    #[test]
    fn beats_random_search_on_sphere() {
        let bounds = Bounds::new(vec![-5.0; 5], vec![5.0; 5]).unwrap();
        let mut ga_best = Vec::new();
        let mut rs_best = Vec::new();
        for seed in 0..10 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let out = soea_optimize(sphere, 500, &bounds, &GaConfig::default(), &mut rng).unwrap();
            ga_best.push(out.iter().map(|s| s.1).fold(f64::INFINITY, f64::min));
            let rs = (0..500)
                .map(|_| sphere(&(0..5).map(|_| rng.gen_range(-5.0..5.0)).collect::<Vec<_>>()).unwrap())
                .fold(f64::INFINITY, f64::min);
            rs_best.push(rs);
        }
        assert!(median(ga_best) < median(rs_best));
    }

    #[test]
    fn elitism_never_loses_best() {
        let bounds = Bounds::unit(6);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut f = sphere;
        let (mut ga, _) = GeneticAlgorithm::initialize(&mut f, &bounds, &GaConfig::default(), &mut rng).unwrap();
        let mut best = ga.best(1)[0].1;
        for _ in 0..20 {
            ga.step(&mut f, 30, &mut rng).unwrap();
            let b = ga.best(1)[0].1;
            assert!(b <= best);
            assert_eq!(ga.population().len(), 30);
            best = b;
        }
    }

    #[test]
    fn inject_replaces_worst() {
        let bounds = Bounds::unit(1);
        let pop = (0..5).map(|i| (vec![i as f64 / 10.0], i as f64)).collect();
        let mut ga = GeneticAlgorithm::from_evaluated(pop, &bounds, &GaConfig::default()).unwrap();
        ga.inject(&[(vec![0.9], -1.0)]);
        let values: Vec<f64> = ga.population().iter().map(|s| s.1).collect();
        assert_eq!(values, vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
    }
}
