//! Optimization drivers: the transfer-learning SAEA loop and its ablations,
//! the delay-handling baselines, and exact budget accounting.

mod baselines;
mod saea;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::acquisition::AcquisitionConfig;
use crate::error::{invalid, Error, Result};
use crate::evo::{GaConfig, RveaConfig};
use crate::gp::FitConfig;
use crate::metrics::{hypervolume_2d, igd, nondominated, nondominated_indices};
use crate::problems::HeterogeneousProblem;
use crate::transfer::{CapRule, TransferBatch};

pub use baselines::{run_brood_interleaving, run_fast_first, run_speculative_interleaving};
pub use saea::{run_tc_saea, run_waiting};

/// Ablations of the transfer scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Co-surrogate plus confidence-interval selection.
    Tc,
    /// No transfer at all.
    Nt,
    /// Every auxiliary point transferred, no selection.
    Ns,
    /// Quadratic regression as the co-surrogate.
    Tcp,
}

/// Every runnable scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Saea(Variant),
    Waiting,
    FastFirst,
    Brood,
    Speculative,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::Saea(Variant::Tc),
        Scheme::Saea(Variant::Nt),
        Scheme::Saea(Variant::Ns),
        Scheme::Saea(Variant::Tcp),
        Scheme::Waiting,
        Scheme::FastFirst,
        Scheme::Brood,
        Scheme::Speculative,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Scheme::Saea(Variant::Tc) => "tc",
            Scheme::Saea(Variant::Nt) => "nt",
            Scheme::Saea(Variant::Ns) => "ns",
            Scheme::Saea(Variant::Tcp) => "tcp",
            Scheme::Waiting => "waiting",
            Scheme::FastFirst => "fast-first",
            Scheme::Brood => "bi",
            Scheme::Speculative => "si",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let found = match key.as_str() {
            "tc-saea" => Some(Scheme::Saea(Variant::Tc)),
            "nt-saea" => Some(Scheme::Saea(Variant::Nt)),
            "ns-saea" => Some(Scheme::Saea(Variant::Ns)),
            "tc-saeap" => Some(Scheme::Saea(Variant::Tcp)),
            "fastfirst" => Some(Scheme::FastFirst),
            _ => Scheme::ALL.iter().copied().find(|s| s.id() == key),
        };
        found.ok_or_else(|| invalid(format!("unknown scheme '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmConfig {
    pub fe_s_max: usize,
    pub tau: usize,
    pub u: usize,
    pub w_max: usize,
    pub n_train: usize,
    pub n_max: usize,
    pub variant: Variant,
    pub seed: u64,
    pub acquisition: AcquisitionConfig,
    /// Inner-loop RVEA; its `generations` is overridden by `w_max`.
    pub rvea: RveaConfig,
    pub ga: GaConfig,
    pub gp: FitConfig,
    /// How the fast-objective training set is capped at `n_max`.
    pub fast_cap: CapRule,
    /// Random starts when refitting a model that already has a previous
    /// optimum to start from; the first fit uses `gp.starts`.
    pub gp_refit_starts: usize,
    /// Fast evaluations spent by the GA during initialization; `None`
    /// means `n_train * (tau - 1)`.
    pub init_soea_budget: Option<usize>,
    /// Keep transferable rows across iterations instead of rebuilding.
    pub accumulate_transfer: bool,
    /// Evaluate the slow objective on auxiliary points, off the books, to
    /// track the co-surrogate error.
    pub diagnostics: bool,
    /// Population of the non-surrogate MOEA baselines.
    pub moea_population: usize,
    /// Reference-front size for IGD.
    pub front_size: usize,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self {
            fe_s_max: 200,
            tau: 5,
            u: 3,
            w_max: 20,
            n_train: 100,
            n_max: 100,
            variant: Variant::Tc,
            seed: 0,
            acquisition: AcquisitionConfig::default(),
            rvea: RveaConfig::default(),
            ga: GaConfig::default(),
            gp: FitConfig::default(),
            fast_cap: CapRule::MostRecent,
            gp_refit_starts: 2,
            init_soea_budget: None,
            accumulate_transfer: false,
            diagnostics: false,
            moea_population: 30,
            front_size: 500,
        }
    }
}

impl AlgorithmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.fe_s_max <= self.n_train {
            return Err(invalid(format!(
                "slow budget {} must exceed the initial sample {}",
                self.fe_s_max, self.n_train
            )));
        }
        if self.n_train < 2 {
            return Err(invalid("initial sample needs at least 2 points"));
        }
        if self.u == 0 {
            return Err(invalid("infill batch size must be at least 1"));
        }
        if self.tau < 2 {
            return Err(invalid(format!("latency ratio must be at least 2, got {}", self.tau)));
        }
        if self.w_max == 0 {
            return Err(invalid("inner-loop generations must be at least 1"));
        }
        if self.n_max < 2 || self.n_max % 2 != 0 {
            return Err(invalid(format!("training cap must be even and >= 2, got {}", self.n_max)));
        }
        if self.gp.starts == 0 || self.gp_refit_starts == 0 {
            return Err(invalid("GP fits need at least one start"));
        }
        if self.moea_population < 2 || self.front_size < 2 {
            return Err(invalid("MOEA population and front size must be at least 2"));
        }
        self.acquisition.validate()?;
        self.rvea_config().validate()
    }

    pub(crate) fn rvea_config(&self) -> RveaConfig {
        RveaConfig {
            generations: self.w_max,
            ..self.rvea.clone()
        }
    }

    pub fn init_soea_budget(&self) -> usize {
        self.init_soea_budget
            .unwrap_or(self.n_train * (self.tau - 1))
    }
}

/// Counts of true evaluations per objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetLedger {
    pub fe_s_used: usize,
    pub fe_f_used: usize,
    pub fe_s_max: usize,
    pub fe_f_max: usize,
}

impl BudgetLedger {
    pub fn new(fe_s_max: usize, tau: usize) -> Self {
        Self {
            fe_s_used: 0,
            fe_f_used: 0,
            fe_s_max,
            fe_f_max: tau * fe_s_max,
        }
    }

    pub fn slow_remaining(&self) -> usize {
        self.fe_s_max - self.fe_s_used
    }

    pub fn fast_remaining(&self) -> usize {
        self.fe_f_max - self.fe_f_used
    }

    pub fn charge_slow(&mut self, n: usize) -> Result<()> {
        if n > self.slow_remaining() {
            return Err(Error::InternalConsistency(format!(
                "slow budget overrun: {} + {n} > {}",
                self.fe_s_used, self.fe_s_max
            )));
        }
        self.fe_s_used += n;
        Ok(())
    }

    pub fn charge_fast(&mut self, n: usize) -> Result<()> {
        if n > self.fast_remaining() {
            return Err(Error::InternalConsistency(format!(
                "fast budget overrun: {} + {n} > {}",
                self.fe_f_used, self.fe_f_max
            )));
        }
        self.fe_f_used += n;
        Ok(())
    }

    pub fn in_lockstep(&self, ratio: usize) -> bool {
        self.fe_f_used == ratio * self.fe_s_used
    }
}

/// A point evaluated on both objectives; `f = [fast, slow]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveEntry {
    pub x: Vec<f64>,
    pub f: [f64; 2],
}

/// State at the end of initialization (iteration 0) and of every later
/// iteration or generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub fe_s_used: usize,
    pub fe_f_used: usize,
    pub igd: f64,
    pub hv: f64,
    /// Transferable rows used to train the slow model this iteration.
    pub d_t_size: usize,
    /// Co-surrogate MSE on the auxiliary points, in diagnostic mode.
    pub co_mse: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub scheme: Scheme,
    pub problem: String,
    pub tau: usize,
    pub seed: u64,
    pub config: AlgorithmConfig,
    pub archive: Vec<ArchiveEntry>,
    pub trace: Vec<IterationRecord>,
    /// Every transfer batch with the interval used to judge it.
    pub transfer_log: Vec<TransferBatch>,
    pub ledger: BudgetLedger,
    pub wall_time_secs: f64,
}

impl RunRecord {
    /// Nondominated objective vectors of the archive.
    pub fn final_front(&self) -> Vec<[f64; 2]> {
        let f: Vec<[f64; 2]> = self.archive.iter().map(|e| e.f).collect();
        nondominated(&f)
    }

    /// Nondominated archive entries, sorted by the first objective.
    pub fn final_set(&self) -> Vec<ArchiveEntry> {
        let f: Vec<[f64; 2]> = self.archive.iter().map(|e| e.f).collect();
        nondominated_indices(&f)
            .into_iter()
            .map(|i| self.archive[i].clone())
            .collect()
    }

    pub fn final_igd(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.igd)
    }

    pub fn final_hv(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |t| t.hv)
    }

    pub fn iterations(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }
}

/// Reference data for the quality indicators.
pub(crate) struct Scorer {
    front: Vec<[f64; 2]>,
    hv_ref: [f64; 2],
}

impl Scorer {
    pub(crate) fn new(problem: &HeterogeneousProblem, size: usize) -> Result<Self> {
        let front = problem.problem().pareto_front_samples(size)?;
        let nadir = front.iter().fold([f64::MIN; 2], |a, p| [a[0].max(p[0]), a[1].max(p[1])]);
        // A single-point front (cm-OneMax at corr = 1) sits at the origin;
        // fall back to a unit box so HV stays informative.
        let hv_ref = if nadir[0] <= 0.0 && nadir[1] <= 0.0 {
            [1.0, 1.0]
        } else {
            [1.1 * nadir[0], 1.1 * nadir[1]]
        };
        Ok(Self { front, hv_ref })
    }

    pub(crate) fn score(&self, archive: &[ArchiveEntry]) -> Result<(f64, f64)> {
        let f: Vec<[f64; 2]> = archive.iter().map(|e| e.f).collect();
        let nd = nondominated(&f);
        Ok((igd(&self.front, &nd)?, hypervolume_2d(&nd, self.hv_ref)))
    }
}

/// Shared bookkeeping for every driver: charged evaluations, the archive
/// and the metric trace.
pub(crate) struct Tracker<'a> {
    pub problem: &'a HeterogeneousProblem,
    pub ledger: BudgetLedger,
    pub archive: Vec<ArchiveEntry>,
    pub trace: Vec<IterationRecord>,
    scorer: Scorer,
    started: Instant,
}

impl<'a> Tracker<'a> {
    pub(crate) fn new(problem: &'a HeterogeneousProblem, cfg: &AlgorithmConfig) -> Result<Self> {
        cfg.validate()?;
        if problem.tau() != cfg.tau {
            return Err(invalid(format!(
                "problem latency ratio {} differs from configured {}",
                problem.tau(),
                cfg.tau
            )));
        }
        Ok(Self {
            problem,
            ledger: BudgetLedger::new(cfg.fe_s_max, cfg.tau),
            archive: Vec::new(),
            trace: Vec::new(),
            scorer: Scorer::new(problem, cfg.front_size)?,
            started: Instant::now(),
        })
    }

    /// Charges one slow and one fast evaluation and archives the result.
    pub(crate) fn evaluate_both(&mut self, x: &[f64]) -> Result<[f64; 2]> {
        let f = self.problem.problem().evaluate(x)?;
        self.ledger.charge_slow(1)?;
        self.ledger.charge_fast(1)?;
        self.archive.push(ArchiveEntry { x: x.to_vec(), f });
        Ok(f)
    }

    pub(crate) fn evaluate_fast(&mut self, x: &[f64]) -> Result<f64> {
        let y = self.problem.evaluate_fast(x)?;
        self.ledger.charge_fast(1)?;
        Ok(y)
    }

    pub(crate) fn progress(&self) -> f64 {
        self.ledger.fe_s_used as f64 / self.ledger.fe_s_max as f64
    }

    pub(crate) fn record(&mut self, d_t_size: usize, co_mse: Option<f64>) -> Result<()> {
        let (igd, hv) = self.scorer.score(&self.archive)?;
        self.trace.push(IterationRecord {
            iteration: self.trace.len(),
            fe_s_used: self.ledger.fe_s_used,
            fe_f_used: self.ledger.fe_f_used,
            igd,
            hv,
            d_t_size,
            co_mse,
        });
        Ok(())
    }

    pub(crate) fn finish(self, scheme: Scheme, cfg: &AlgorithmConfig, transfer_log: Vec<TransferBatch>) -> RunRecord {
        RunRecord {
            scheme,
            problem: self.problem.problem().name().to_string(),
            tau: cfg.tau,
            seed: cfg.seed,
            config: cfg.clone(),
            archive: self.archive,
            trace: self.trace,
            transfer_log,
            ledger: self.ledger,
            wall_time_secs: self.started.elapsed().as_secs_f64(),
        }
    }
}

/// Runs any scheme; `cfg.variant` is ignored in favour of the scheme's.
pub fn run_scheme(scheme: Scheme, problem: &HeterogeneousProblem, cfg: &AlgorithmConfig) -> Result<RunRecord> {
    match scheme {
        Scheme::Saea(v) => {
            let cfg = AlgorithmConfig {
                variant: v,
                ..cfg.clone()
            };
            run_tc_saea(problem, &cfg)
        }
        Scheme::Waiting => run_waiting(problem, cfg),
        Scheme::FastFirst => run_fast_first(problem, cfg),
        Scheme::Brood => run_brood_interleaving(problem, cfg),
        Scheme::Speculative => run_speculative_interleaving(problem, cfg),
    }
}

/// Derives a per-purpose seed from the run seed.
pub(crate) fn sub_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests;
