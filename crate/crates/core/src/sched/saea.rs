use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::acquisition::{perturb_duplicates, sample_additional, select_infill, MeanStd};
use crate::error::Result;
use crate::evo::{lhs_sample, reference_vectors, soea_optimize, surrogate_rvea, Population, Surrogate};
use crate::gp::{fit, FitConfig, GpModel};
use crate::problems::HeterogeneousProblem;
use crate::transfer::{
    cap_training_set, co_surrogate_mse, select_transferable, synthesize_slow_labels, LabeledSet,
    QuadraticModel, TrainingSets, TransferBatch,
};

use super::{sub_seed, AlgorithmConfig, RunRecord, Scheme, Tracker, Variant};

#[derive(Clone, Copy)]
enum Role {
    Fast,
    Slow,
    Co,
    Augmented,
}

/// Fits GPs with a fresh, reproducible search seed each time. Refits of a
/// role start from its previous optimum with fewer random starts.
struct Fitter<'a> {
    base: &'a FitConfig,
    refit_starts: usize,
    bounds: &'a crate::Bounds,
    seed: u64,
    count: u64,
    warm: [Option<Vec<f64>>; 4],
}

impl Fitter<'_> {
    fn fit(&mut self, role: Role, d: &LabeledSet) -> Result<GpModel> {
        self.count += 1;
        let warm = self.warm[role as usize].clone();
        let starts = if warm.is_some() { self.refit_starts } else { self.base.starts };
        let cfg = FitConfig {
            seed: sub_seed(self.seed, self.count),
            starts,
            warm_start: warm,
            ..self.base.clone()
        };
        let model = fit(&d.x, &d.y, self.bounds, &cfg)?;
        self.warm[role as usize] = Some(model.log10_theta());
        Ok(model)
    }
}

/// The transfer-learning SAEA and its ablations, selected by `cfg.variant`.
pub fn run_tc_saea(problem: &HeterogeneousProblem, cfg: &AlgorithmConfig) -> Result<RunRecord> {
    run_loop(problem, cfg, false)
}

/// Surrogate loop that idles the fast evaluator: both models are trained
/// only on points evaluated on both objectives.
pub fn run_waiting(problem: &HeterogeneousProblem, cfg: &AlgorithmConfig) -> Result<RunRecord> {
    run_loop(problem, cfg, true)
}

fn run_loop(problem: &HeterogeneousProblem, cfg: &AlgorithmConfig, waiting: bool) -> Result<RunRecord> {
    let mut t = Tracker::new(problem, cfg)?;
    let bounds = problem.bounds().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut fitter = Fitter {
        base: &cfg.gp,
        refit_starts: cfg.gp_refit_starts,
        bounds: &bounds,
        seed: cfg.seed,
        count: 0,
        warm: Default::default(),
    };
    let mut sets = TrainingSets::new();

    for x in lhs_sample(cfg.n_train, &bounds, &mut rng) {
        let f = t.evaluate_both(&x)?;
        sets.add_both(x, f[1], f[0]);
    }
    if !waiting {
        let budget = cfg.init_soea_budget();
        let samples = if budget >= cfg.ga.population {
            soea_optimize(|x| problem.evaluate_fast(x), budget, &bounds, &cfg.ga, &mut rng)?
        } else {
            lhs_sample(budget, &bounds, &mut rng)
                .into_iter()
                .map(|x| problem.evaluate_fast(&x).map(|y| (x, y)))
                .collect::<Result<_>>()?
        };
        t.ledger.charge_fast(samples.len())?;
        for (x, y) in samples {
            sets.add_fast(x, y);
        }
    }
    t.record(0, None)?;

    let variant = if waiting { Variant::Nt } else { cfg.variant };
    let refs = reference_vectors(cfg.rvea.divisions)?;
    let rvea_cfg = cfg.rvea_config();
    let mut gp_s = fitter.fit(Role::Slow, &cap_training_set(&sets.d_s, cfg.n_max, &mut rng)?)?;
    let mut pop = Population::new(sets.d_s.x.clone());
    let mut log = Vec::new();
    let mut iteration = 1;

    while t.ledger.slow_remaining() > 0 {
        let gp_f = fitter.fit(Role::Fast, &cfg.fast_cap.apply(&sets.d_f, cfg.n_max, &mut rng)?)?;
        let co: Option<Box<dyn Surrogate>> = match variant {
            Variant::Nt => None,
            Variant::Tcp => {
                let d_c = cap_training_set(&sets.d_c, cfg.n_max, &mut rng)?;
                Some(Box::new(QuadraticModel::fit(&d_c.x, &d_c.y, &bounds)?))
            }
            Variant::Tc | Variant::Ns => {
                let d_c = cap_training_set(&sets.d_c, cfg.n_max, &mut rng)?;
                Some(Box::new(fitter.fit(Role::Co, &d_c)?))
            }
        };

        let progress = t.progress();
        pop.objectives = None;
        pop = surrogate_rvea([&gp_f, &gp_s], &pop, &bounds, &rvea_cfg, progress, &mut rng)?;
        let preds: Vec<[MeanStd; 2]> = pop
            .individuals
            .iter()
            .map(|x| {
                let (a, b) = (gp_f.predict(x), gp_s.predict(x));
                [
                    MeanStd { mean: a.mean, std: a.std() },
                    MeanStd { mean: b.mean, std: b.std() },
                ]
            })
            .collect();
        let k = cfg.u.min(t.ledger.slow_remaining());
        let sel = select_infill(&pop.individuals, &preds, &refs, progress, k, &cfg.acquisition)?;
        let mut x_new = sel.points;
        perturb_duplicates(&mut x_new, &sets.d_f.x, &bounds, &mut rng);
        for x in &x_new {
            let f = t.evaluate_both(x)?;
            sets.add_both(x.clone(), f[1], f[0]);
        }

        let mut co_mse = None;
        if waiting {
            gp_s = fitter.fit(Role::Slow, &cap_training_set(&sets.d_s, cfg.n_max, &mut rng)?)?;
        } else {
            let x_a = sample_additional(&x_new, cfg.tau, &bounds, cfg.acquisition.local_radius, &mut rng)?;
            let y_f_a = x_a
                .iter()
                .map(|x| t.evaluate_fast(x))
                .collect::<Result<Vec<_>>>()?;
            for (x, y) in x_a.iter().zip(&y_f_a) {
                sets.add_fast(x.clone(), *y);
            }
            let d_s = cap_training_set(&sets.d_s, cfg.n_max, &mut rng)?;
            let gp_s_pure = fitter.fit(Role::Slow, &d_s)?;
            match co {
                None => {
                    sets.d_t = LabeledSet::new();
                    gp_s = gp_s_pure;
                }
                Some(co) => {
                    let (y_c_a, y_s_syn) = synthesize_slow_labels(co.as_ref(), &x_a, &y_f_a)?;
                    if cfg.diagnostics {
                        let truth = x_a
                            .iter()
                            .zip(&y_f_a)
                            .map(|(x, f)| problem.evaluate_slow(x).map(|s| s - f))
                            .collect::<Result<Vec<_>>>()?;
                        co_mse = Some(co_surrogate_mse(co.as_ref(), &x_a, &truth)?);
                    }
                    let mut batch = TransferBatch {
                        x_a,
                        y_f_a,
                        y_c_a,
                        y_s_syn,
                        ..TransferBatch::default()
                    };
                    let passed = select_transferable(&gp_s_pure, &mut batch)?;
                    let admitted = if variant == Variant::Ns { batch.all_rows() } else { passed };
                    if cfg.accumulate_transfer {
                        sets.d_t.extend_from(&admitted);
                    } else {
                        sets.d_t = admitted;
                    }
                    log.push(batch);
                    gp_s = if iteration % cfg.tau == 0 || sets.d_t.is_empty() {
                        gp_s_pure
                    } else {
                        fitter.fit(Role::Augmented, &d_s.concat(&sets.d_t))?
                    };
                }
            }
        }
        sets.check_invariants()?;
        t.record(sets.d_t.len(), co_mse)?;
        iteration += 1;
    }
    let scheme = if waiting { Scheme::Waiting } else { Scheme::Saea(cfg.variant) };
    Ok(t.finish(scheme, cfg, log))
}
