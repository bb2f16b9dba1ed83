use std::f64::consts::{FRAC_PI_2, PI};

/// Two-objective members of the DTLZ family plus the reduced-ruggedness
/// variants of DTLZ1 and DTLZ3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DtlzKind {
    Dtlz1,
    Dtlz1a,
    Dtlz2,
    Dtlz3,
    Dtlz3a,
    Dtlz4,
    Dtlz5,
    Dtlz6,
    Dtlz7,
}

impl DtlzKind {
    pub const ALL: [DtlzKind; 9] = [
        DtlzKind::Dtlz1,
        DtlzKind::Dtlz1a,
        DtlzKind::Dtlz2,
        DtlzKind::Dtlz3,
        DtlzKind::Dtlz3a,
        DtlzKind::Dtlz4,
        DtlzKind::Dtlz5,
        DtlzKind::Dtlz6,
        DtlzKind::Dtlz7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DtlzKind::Dtlz1 => "dtlz1",
            DtlzKind::Dtlz1a => "dtlz1a",
            DtlzKind::Dtlz2 => "dtlz2",
            DtlzKind::Dtlz3 => "dtlz3",
            DtlzKind::Dtlz3a => "dtlz3a",
            DtlzKind::Dtlz4 => "dtlz4",
            DtlzKind::Dtlz5 => "dtlz5",
            DtlzKind::Dtlz6 => "dtlz6",
            DtlzKind::Dtlz7 => "dtlz7",
        }
    }

    /// Number of distance variables `K`; `n = M + K - 1`.
    pub fn default_k(self) -> usize {
        match self {
            DtlzKind::Dtlz1 | DtlzKind::Dtlz1a => 5,
            DtlzKind::Dtlz7 => 20,
            _ => 10,
        }
    }
}

/// Multimodal distance function; `freq` is 20 pi for the classic
/// problems and 2 pi for the smoothed variants.
fn g_rastrigin(xm: &[f64], freq: f64) -> f64 {
    let s: f64 = xm
        .iter()
        .map(|x| (x - 0.5).powi(2) - (freq * (x - 0.5)).cos())
        .sum();
    100.0 * (xm.len() as f64 + s)
}

fn g_sphere(xm: &[f64]) -> f64 {
    xm.iter().map(|x| (x - 0.5).powi(2)).sum()
}

fn spherical(x1: f64, g: f64) -> [f64; 2] {
    let a = x1 * FRAC_PI_2;
    [(1.0 + g) * a.cos(), (1.0 + g) * a.sin()]
}

pub(crate) fn evaluate(kind: DtlzKind, x: &[f64]) -> [f64; 2] {
    let x1 = x[0];
    let xm = &x[1..];
    match kind {
        DtlzKind::Dtlz1 | DtlzKind::Dtlz1a => {
            let freq = if kind == DtlzKind::Dtlz1 { 20.0 * PI } else { 2.0 * PI };
            let g = g_rastrigin(xm, freq);
            [0.5 * x1 * (1.0 + g), 0.5 * (1.0 - x1) * (1.0 + g)]
        }
        DtlzKind::Dtlz2 | DtlzKind::Dtlz5 => spherical(x1, g_sphere(xm)),
        DtlzKind::Dtlz3 => spherical(x1, g_rastrigin(xm, 20.0 * PI)),
        DtlzKind::Dtlz3a => spherical(x1, g_rastrigin(xm, 2.0 * PI)),
        DtlzKind::Dtlz4 => spherical(x1.powi(100), g_sphere(xm)),
        DtlzKind::Dtlz6 => spherical(x1, xm.iter().map(|v| v.powf(0.1)).sum()),
        DtlzKind::Dtlz7 => {
            let g = 1.0 + 9.0 / xm.len() as f64 * xm.iter().sum::<f64>();
            let h = 2.0 - x1 / (1.0 + g) * (1.0 + (3.0 * PI * x1).sin());
            [x1, (1.0 + g) * h]
        }
    }
}

/// Dense samples of the true front before subsampling.
pub(crate) fn front_candidates(kind: DtlzKind, count: usize) -> Vec<[f64; 2]> {
    let grid = |m: usize| (0..m).map(move |i| i as f64 / (m - 1) as f64);
    match kind {
        DtlzKind::Dtlz1 | DtlzKind::Dtlz1a => {
            grid(count).map(|t| [0.5 * t, 0.5 * (1.0 - t)]).collect()
        }
        DtlzKind::Dtlz7 => grid((count * 50).max(20_000))
            .map(|t| [t, 4.0 - t * (1.0 + (3.0 * PI * t).sin())])
            .collect(),
        _ => grid(count)
            .map(|t| {
                let a = t * FRAC_PI_2;
                [a.cos(), a.sin()]
            })
            .collect(),
    }
}
