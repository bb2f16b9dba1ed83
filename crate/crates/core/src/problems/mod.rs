//! Benchmark problems, the slow/fast latency wrapper and reference fronts.
//!
//! Objective 1 is always the fast objective and objective 2 the slow one.

mod dtlz;
mod onemax;
mod uf;

pub use dtlz::DtlzKind;
pub use onemax::{make_cm_onemax, CmOneMaxSpec, CM_ONEMAX_DEFAULT_N, FRONT_RESOLUTION};
pub use uf::UfKind;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::Bounds;
use crate::error::{invalid, Result};
use crate::metrics::{even_subsample, nondominated};

pub const NUM_OBJECTIVES: usize = 2;
pub const UF_DEFAULT_N: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub bounds: Bounds,
    /// Distance-variable count for DTLZ problems.
    pub k: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    Dtlz(DtlzKind),
    Uf(UfKind),
    CmOneMax(CmOneMaxSpec),
}

/// A registered bi-objective benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    spec: ProblemSpec,
    family: Family,
}

impl Problem {
    pub fn dtlz(kind: DtlzKind, n: Option<usize>) -> Result<Self> {
        let n = n.unwrap_or(NUM_OBJECTIVES + kind.default_k() - 1);
        if n < NUM_OBJECTIVES {
            return Err(invalid(format!("{} needs n >= 2", kind.name())));
        }
        Ok(Self {
            spec: ProblemSpec {
                name: kind.name().to_string(),
                n,
                m: NUM_OBJECTIVES,
                bounds: Bounds::unit(n),
                k: Some(n + 1 - NUM_OBJECTIVES),
            },
            family: Family::Dtlz(kind),
        })
    }

    pub fn uf(kind: UfKind, n: Option<usize>) -> Result<Self> {
        let n = n.unwrap_or(UF_DEFAULT_N);
        if n < 3 {
            return Err(invalid(format!("{} needs n >= 3", kind.name())));
        }
        let ((l1, u1), (l, u)) = kind.bounds();
        let mut lower = vec![l; n];
        let mut upper = vec![u; n];
        lower[0] = l1;
        upper[0] = u1;
        Ok(Self {
            spec: ProblemSpec {
                name: kind.name().to_string(),
                n,
                m: NUM_OBJECTIVES,
                bounds: Bounds::new(lower, upper)?,
                k: None,
            },
            family: Family::Uf(kind),
        })
    }

    pub fn cm_onemax(spec: CmOneMaxSpec) -> Result<Self> {
        if spec.n < NUM_OBJECTIVES || spec.map.len() != spec.n || spec.map.iter().any(|m| *m > 1) {
            return Err(invalid("cm-OneMax needs n >= 2 and a binary map of length n"));
        }
        Ok(Self {
            spec: ProblemSpec {
                name: "cm-onemax".to_string(),
                n: spec.n,
                m: NUM_OBJECTIVES,
                bounds: Bounds::unit(spec.n),
                k: None,
            },
            family: Family::CmOneMax(spec),
        })
    }

    /// Seeded cm-OneMax instance.
    pub fn cm_onemax_seeded(n: usize, corr: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut spec = make_cm_onemax(n, corr, &mut rng)?;
        spec.seed = seed;
        Self::cm_onemax(spec)
    }

    /// Looks up a problem by registry key. Optional parameters follow the
    /// name separated by colons: `dtlz2:n=11`, `cm-onemax:corr=-1:seed=3`.
    pub fn by_name(key: &str) -> Result<Self> {
        let mut parts = key.trim().split(':');
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        let mut n = None;
        let mut corr = None;
        let mut seed = None;
        for part in parts {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| invalid(format!("malformed problem parameter '{part}' in '{key}'")))?;
            match k.trim() {
                "n" => n = Some(parse_num::<usize>(v, key)?),
                "corr" => corr = Some(parse_num::<f64>(v, key)?),
                "seed" => seed = Some(parse_num::<u64>(v, key)?),
                other => return Err(invalid(format!("unknown problem parameter '{other}' in '{key}'"))),
            }
        }
        if let Some(kind) = DtlzKind::ALL.iter().find(|k| k.name() == name) {
            if corr.is_some() || seed.is_some() {
                return Err(invalid(format!("'{name}' takes only an n parameter")));
            }
            return Self::dtlz(*kind, n);
        }
        if let Some(kind) = UfKind::ALL.iter().find(|k| k.name() == name) {
            if corr.is_some() || seed.is_some() {
                return Err(invalid(format!("'{name}' takes only an n parameter")));
            }
            return Self::uf(*kind, n);
        }
        if name == "cm-onemax" {
            return Self::cm_onemax_seeded(
                n.unwrap_or(CM_ONEMAX_DEFAULT_N),
                corr.unwrap_or(0.0),
                seed.unwrap_or(0),
            );
        }
        Err(invalid(format!("unknown problem '{name}'")))
    }

    /// Every plain registry name.
    pub fn registry_names() -> Vec<&'static str> {
        DtlzKind::ALL
            .iter()
            .map(|k| k.name())
            .chain(UfKind::ALL.iter().map(|k| k.name()))
            .chain(std::iter::once("cm-onemax"))
            .collect()
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn bounds(&self) -> &Bounds {
        &self.spec.bounds
    }

    pub fn dim(&self) -> usize {
        self.spec.n
    }

    pub fn cm_onemax_spec(&self) -> Option<&CmOneMaxSpec> {
        match &self.family {
            Family::CmOneMax(s) => Some(s),
            _ => None,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<[f64; 2]> {
        if x.len() != self.spec.n {
            return Err(invalid(format!(
                "{} expects {} variables, got {}",
                self.spec.name,
                self.spec.n,
                x.len()
            )));
        }
        if !self.spec.bounds.contains(x) {
            return Err(invalid(format!("decision vector outside the bounds of {}", self.spec.name)));
        }
        Ok(match &self.family {
            Family::Dtlz(kind) => dtlz::evaluate(*kind, x),
            Family::Uf(kind) => uf::evaluate(*kind, x),
            Family::CmOneMax(s) => s.evaluate(x),
        })
    }

    /// Reference points on the true front.
    ///
    /// Fronts with a closed-form parameterization are sampled evenly;
    /// DTLZ7, UF5 and UF6 are filtered to their nondominated parts first.
    /// cm-OneMax enumerates the grid image of the decision space, so its
    /// size is fixed by the instance and `count` only caps it.
    pub fn pareto_front_samples(&self, count: usize) -> Result<Vec<[f64; 2]>> {
        if count < 2 {
            return Err(invalid("front sampling needs count >= 2"));
        }
        let candidates = match &self.family {
            Family::Dtlz(kind) => dtlz::front_candidates(*kind, count),
            Family::Uf(kind) => uf::front_candidates(*kind, count),
            Family::CmOneMax(s) => s.grid_image(),
        };
        Ok(even_subsample(nondominated(&candidates), count))
    }

    /// Componentwise maximum of the reference front.
    pub fn front_nadir(&self) -> Result<[f64; 2]> {
        let front = self.pareto_front_samples(500)?;
        Ok(front.iter().fold([f64::MIN, f64::MIN], |acc, p| {
            [acc[0].max(p[0]), acc[1].max(p[1])]
        }))
    }
}

fn parse_num<T: std::str::FromStr>(v: &str, key: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| invalid(format!("cannot parse '{v}' in problem key '{key}'")))
}

/// A bi-objective problem whose second objective is `tau` times slower to
/// evaluate than the first.
#[derive(Debug, Clone, PartialEq)]
pub struct HeterogeneousProblem {
    problem: Problem,
    tau: usize,
}

impl HeterogeneousProblem {
    /// Index of the slow objective.
    pub const SLOW: usize = 1;
    /// Index of the fast objective.
    pub const FAST: usize = 0;

    pub fn new(problem: Problem, tau: usize) -> Result<Self> {
        if tau < 2 {
            return Err(invalid(format!("latency ratio must be at least 2, got {tau}")));
        }
        Ok(Self { problem, tau })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn bounds(&self) -> &Bounds {
        self.problem.bounds()
    }

    pub fn evaluate_fast(&self, x: &[f64]) -> Result<f64> {
        Ok(self.problem.evaluate(x)?[Self::FAST])
    }

    pub fn evaluate_slow(&self, x: &[f64]) -> Result<f64> {
        Ok(self.problem.evaluate(x)?[Self::SLOW])
    }
}
