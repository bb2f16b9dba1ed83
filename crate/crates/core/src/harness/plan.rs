use std::collections::BTreeMap;
use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Spanned;

use crate::acquisition::BetaSchedule;
use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::sched::{AlgorithmConfig, Scheme};
use crate::transfer::CapRule;

/// Settings overridable globally (`[config]`) or per scheme (`[scheme.<id>]`).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Overrides {
    fe_s_max: Option<usize>,
    n_train: Option<usize>,
    u: Option<usize>,
    w_max: Option<usize>,
    n_max: Option<usize>,
    init_soea_budget: Option<usize>,
    accumulate_transfer: Option<bool>,
    diagnostics: Option<bool>,
    moea_population: Option<usize>,
    front_size: Option<usize>,
    beta_max: Option<f64>,
    beta_min: Option<f64>,
    beta_schedule: Option<String>,
    local_radius: Option<f64>,
    spread_infill: Option<bool>,
    fast_cap: Option<String>,
    apd_alpha: Option<f64>,
    divisions: Option<usize>,
    rvea_population: Option<usize>,
    ga_population: Option<usize>,
    gp_starts: Option<usize>,
    gp_refit_starts: Option<usize>,
}

impl Overrides {
    fn apply(&self, cfg: &mut AlgorithmConfig) -> std::result::Result<(), String> {
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { $target = v; })*
            };
        }
        set! {
            fe_s_max => cfg.fe_s_max,
            n_train => cfg.n_train,
            u => cfg.u,
            w_max => cfg.w_max,
            n_max => cfg.n_max,
            accumulate_transfer => cfg.accumulate_transfer,
            diagnostics => cfg.diagnostics,
            moea_population => cfg.moea_population,
            front_size => cfg.front_size,
            beta_max => cfg.acquisition.beta_max,
            beta_min => cfg.acquisition.beta_min,
            local_radius => cfg.acquisition.local_radius,
            spread_infill => cfg.acquisition.spread,
            apd_alpha => cfg.acquisition.alpha,
            divisions => cfg.rvea.divisions,
            rvea_population => cfg.rvea.population,
            ga_population => cfg.ga.population,
            gp_starts => cfg.gp.starts,
            gp_refit_starts => cfg.gp_refit_starts,
        }
        if let Some(apd) = self.apd_alpha {
            cfg.rvea.alpha = apd;
        }
        if let Some(b) = self.init_soea_budget {
            cfg.init_soea_budget = Some(b);
        }
        if let Some(s) = &self.beta_schedule {
            cfg.acquisition.schedule = match s.as_str() {
                "linear" => BetaSchedule::LinearDecay,
                "constant" => BetaSchedule::Constant,
                other => return Err(format!("unknown beta_schedule '{other}' (linear, constant)")),
            };
        }
        if let Some(s) = &self.fast_cap {
            cfg.fast_cap = match s.as_str() {
                "recent" => CapRule::MostRecent,
                "best-random" => CapRule::BestAndRandom,
                other => return Err(format!("unknown fast_cap '{other}' (recent, best-random)")),
            };
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlan {
    problems: Option<Spanned<Vec<String>>>,
    schemes: Option<Spanned<Vec<String>>>,
    taus: Option<Spanned<Vec<i64>>>,
    replicates: Option<Spanned<i64>>,
    base_seed: Option<u64>,
    output_dir: Option<String>,
    reference: Option<Spanned<String>>,
    config: Option<Spanned<Overrides>>,
    #[serde(default)]
    scheme: BTreeMap<String, Spanned<Overrides>>,
    #[serde(default)]
    problem: BTreeMap<String, Spanned<BTreeMap<String, toml::Value>>>,
}

/// A fully resolved run matrix.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    /// Problem specifications accepted by [`Problem::by_name`].
    pub problems: Vec<String>,
    pub schemes: Vec<Scheme>,
    pub taus: Vec<usize>,
    pub replicates: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    /// Scheme the significance markers compare against.
    pub reference: Option<Scheme>,
    /// One configuration per scheme, parallel to `schemes`; `tau` and
    /// `seed` are filled in per cell.
    pub configs: Vec<AlgorithmConfig>,
}

/// One (problem, scheme, τ, replicate) run.
#[derive(Debug, Clone)]
pub struct Cell {
    pub problem: String,
    pub scheme: Scheme,
    pub tau: usize,
    pub replicate: usize,
    pub config: AlgorithmConfig,
}

impl Cell {
    /// File-name stem, unique within a plan.
    pub fn stem(&self) -> String {
        format!(
            "{}_{}_tau{}_rep{}",
            sanitize(&self.problem),
            self.scheme.id(),
            self.tau,
            self.replicate
        )
    }
}

pub(crate) fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '-' })
        .collect()
}

impl ExperimentPlan {
    pub fn run_count(&self) -> usize {
        self.problems.len() * self.schemes.len() * self.taus.len() * self.replicates
    }

    /// Every cell in problem, τ, scheme, replicate order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.run_count());
        for problem in &self.problems {
            for &tau in &self.taus {
                for (scheme, cfg) in self.schemes.iter().zip(&self.configs) {
                    for replicate in 0..self.replicates {
                        out.push(Cell {
                            problem: problem.clone(),
                            scheme: *scheme,
                            tau,
                            replicate,
                            config: AlgorithmConfig {
                                tau,
                                seed: self.base_seed + replicate as u64,
                                ..cfg.clone()
                            },
                        });
                    }
                }
            }
        }
        out
    }
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    let end = span.start.min(text.len());
    text[..end].bytes().filter(|&b| b == b'\n').count() + 1
}

fn plan_error(text: &str, span: Range<usize>, msg: impl Into<String>) -> Error {
    Error::Plan {
        line: line_of(text, span),
        msg: msg.into(),
    }
}

pub fn parse_plan(path: &Path) -> Result<ExperimentPlan> {
    let text = std::fs::read_to_string(path)?;
    parse_plan_str(&text)
}

/// Parses a TOML plan. Top-level keys describe the matrix, `[config]`
/// overrides algorithm settings for every scheme, `[scheme.<id>]` for one
/// scheme and `[problem.<name>]` sets problem parameters such as `n`.
pub fn parse_plan_str(text: &str) -> Result<ExperimentPlan> {
    let raw: RawPlan = toml::from_str(text).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        let mut msg = e.message().to_string();
        let snippet = text.get(span.clone()).unwrap_or("").trim();
        if !snippet.is_empty() && !msg.contains(snippet) {
            msg = format!("{msg} '{snippet}'");
        }
        plan_error(text, span, msg)
    })?;

    let problems_raw = raw
        .problems
        .ok_or_else(|| Error::Plan { line: 1, msg: "at least one problem is required".into() })?;
    let span = problems_raw.span();
    let mut problems = Vec::new();
    for name in problems_raw.into_inner() {
        let base = name.split(':').next().unwrap_or("").to_string();
        let mut full = name.clone();
        if let Some(params) = raw.problem.get(&base) {
            for (k, v) in params.get_ref() {
                let v = match v {
                    toml::Value::Integer(i) => i.to_string(),
                    toml::Value::Float(f) => f.to_string(),
                    toml::Value::String(s) => s.clone(),
                    other => {
                        return Err(plan_error(text, params.span(), format!("unsupported value {other} for '{k}'")))
                    }
                };
                full.push_str(&format!(":{k}={v}"));
            }
        }
        Problem::by_name(&full).map_err(|e| plan_error(text, span.clone(), e.to_string()))?;
        if problems.contains(&full) {
            return Err(plan_error(text, span.clone(), format!("problem '{full}' listed twice")));
        }
        problems.push(full);
    }
    if problems.is_empty() {
        return Err(plan_error(text, span, "at least one problem is required"));
    }
    for (name, params) in &raw.problem {
        if !problems.iter().any(|p| p.split(':').next() == Some(name.as_str())) {
            return Err(plan_error(text, params.span(), format!("[problem.{name}] is not in the problem list")));
        }
    }

    let schemes = match raw.schemes {
        None => vec![Scheme::Saea(crate::sched::Variant::Tc)],
        Some(s) => {
            let span = s.span();
            let mut out: Vec<Scheme> = Vec::new();
            for id in s.into_inner() {
                let scheme: Scheme = id.parse().map_err(|e: Error| plan_error(text, span.clone(), e.to_string()))?;
                if out.contains(&scheme) {
                    return Err(plan_error(text, span.clone(), format!("scheme '{id}' listed twice")));
                }
                out.push(scheme);
            }
            if out.is_empty() {
                return Err(plan_error(text, span, "at least one scheme is required"));
            }
            out
        }
    };

    let taus = match raw.taus {
        None => vec![5],
        Some(t) => {
            let span = t.span();
            let mut out = Vec::new();
            for v in t.into_inner() {
                if v < 2 {
                    return Err(plan_error(text, span.clone(), format!("invalid latency ratio {v}; must be >= 2")));
                }
                out.push(v as usize);
            }
            if out.is_empty() {
                return Err(plan_error(text, span, "at least one latency ratio is required"));
            }
            out
        }
    };

    let replicates = match raw.replicates {
        None => 20,
        Some(r) if *r.get_ref() >= 1 => *r.get_ref() as usize,
        Some(r) => return Err(plan_error(text, r.span(), "replicates must be at least 1")),
    };

    let reference = match raw.reference {
        Some(r) => {
            let scheme: Scheme = r.get_ref().parse().map_err(|e: Error| plan_error(text, r.span(), e.to_string()))?;
            if !schemes.contains(&scheme) {
                return Err(plan_error(text, r.span(), format!("reference scheme '{}' is not in the plan", r.get_ref())));
            }
            Some(scheme)
        }
        None => schemes.iter().copied().find(|s| s.id() == "tc"),
    };

    for (id, ov) in &raw.scheme {
        let scheme: Scheme = id.parse().map_err(|e: Error| plan_error(text, ov.span(), e.to_string()))?;
        if !schemes.contains(&scheme) {
            return Err(plan_error(text, ov.span(), format!("[scheme.{id}] is not in the scheme list")));
        }
    }

    let mut configs = Vec::with_capacity(schemes.len());
    for scheme in &schemes {
        let mut cfg = AlgorithmConfig::default();
        if let Some(ov) = &raw.config {
            ov.get_ref().apply(&mut cfg).map_err(|m| plan_error(text, ov.span(), m))?;
        }
        let own = raw
            .scheme
            .iter()
            .find(|(id, _)| id.parse::<Scheme>().ok() == Some(*scheme));
        if let Some((_, ov)) = own {
            ov.get_ref().apply(&mut cfg).map_err(|m| plan_error(text, ov.span(), m))?;
        }
        for &tau in &taus {
            let probe = AlgorithmConfig { tau, ..cfg.clone() };
            let at = own
                .map(|(_, ov)| ov.span())
                .or_else(|| raw.config.as_ref().map(|c| c.span()))
                .unwrap_or(0..0);
            probe
                .validate()
                .map_err(|e| plan_error(text, at, format!("{scheme}: {e}")))?;
        }
        configs.push(cfg);
    }

    Ok(ExperimentPlan {
        problems,
        schemes,
        taus,
        replicates,
        base_seed: raw.base_seed.unwrap_or(0),
        output_dir: PathBuf::from(raw.output_dir.unwrap_or_else(|| "results".into())),
        reference,
        configs,
    })
}
