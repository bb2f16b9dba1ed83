//! Unconstrained two-objective problems UF1-UF7 from the CEC 2009 suite.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UfKind {
    Uf1,
    Uf2,
    Uf3,
    Uf4,
    Uf5,
    Uf6,
    Uf7,
}

impl UfKind {
    pub const ALL: [UfKind; 7] = [
        UfKind::Uf1,
        UfKind::Uf2,
        UfKind::Uf3,
        UfKind::Uf4,
        UfKind::Uf5,
        UfKind::Uf6,
        UfKind::Uf7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            UfKind::Uf1 => "uf1",
            UfKind::Uf2 => "uf2",
            UfKind::Uf3 => "uf3",
            UfKind::Uf4 => "uf4",
            UfKind::Uf5 => "uf5",
            UfKind::Uf6 => "uf6",
            UfKind::Uf7 => "uf7",
        }
    }

    /// Bounds of `x_1` and of the remaining variables.
    pub fn bounds(self) -> ((f64, f64), (f64, f64)) {
        match self {
            UfKind::Uf3 => ((0.0, 1.0), (0.0, 1.0)),
            UfKind::Uf4 => ((0.0, 1.0), (-2.0, 2.0)),
            _ => ((0.0, 1.0), (-1.0, 1.0)),
        }
    }
}

/// Sums over odd (`J1`) and even (`J2`) 1-based indices `j >= 2`.
struct Split {
    odd: f64,
    even: f64,
    odd_count: usize,
    even_count: usize,
}

impl Split {
    fn new<F: Fn(usize, f64) -> f64>(x: &[f64], term: F) -> Self {
        let mut s = Split {
            odd: 0.0,
            even: 0.0,
            odd_count: 0,
            even_count: 0,
        };
        for (idx, &xj) in x.iter().enumerate().skip(1) {
            let j = idx + 1;
            let v = term(j, xj);
            if j % 2 == 1 {
                s.odd += v;
                s.odd_count += 1;
            } else {
                s.even += v;
                s.even_count += 1;
            }
        }
        s
    }

    fn odd_mean2(&self) -> f64 {
        2.0 * self.odd / self.odd_count as f64
    }

    fn even_mean2(&self) -> f64 {
        2.0 * self.even / self.even_count as f64
    }
}

/// `4 sum y^2 - 2 prod cos(20 y pi / sqrt(j)) + 2` over one index class.
fn rugged(x: &[f64], y: impl Fn(usize, f64) -> f64, odd: bool) -> (f64, usize) {
    let mut sum = 0.0;
    let mut prod = 1.0;
    let mut count = 0;
    for (idx, &xj) in x.iter().enumerate().skip(1) {
        let j = idx + 1;
        if (j % 2 == 1) != odd {
            continue;
        }
        let yj = y(j, xj);
        sum += yj * yj;
        prod *= (20.0 * yj * PI / (j as f64).sqrt()).cos();
        count += 1;
    }
    (4.0 * sum - 2.0 * prod + 2.0, count)
}

pub(crate) fn evaluate(kind: UfKind, x: &[f64]) -> [f64; 2] {
    let n = x.len() as f64;
    let x1 = x[0];
    let sine_shift = |j: usize, xj: f64| xj - (6.0 * PI * x1 + j as f64 * PI / n).sin();
    match kind {
        UfKind::Uf1 => {
            let s = Split::new(x, |j, xj| sine_shift(j, xj).powi(2));
            [x1 + s.odd_mean2(), 1.0 - x1.sqrt() + s.even_mean2()]
        }
        UfKind::Uf2 => {
            let s = Split::new(x, |j, xj| {
                let jf = j as f64;
                let amp = 0.3 * x1 * x1 * (24.0 * PI * x1 + 4.0 * jf * PI / n).cos() + 0.6 * x1;
                let phase = 6.0 * PI * x1 + jf * PI / n;
                let y = if j % 2 == 1 {
                    xj - amp * phase.cos()
                } else {
                    xj - amp * phase.sin()
                };
                y * y
            });
            [x1 + s.odd_mean2(), 1.0 - x1.sqrt() + s.even_mean2()]
        }
        UfKind::Uf3 => {
            let y = |j: usize, xj: f64| xj - x1.powf(0.5 * (1.0 + 3.0 * (j as f64 - 2.0) / (n - 2.0)));
            let (odd, no) = rugged(x, y, true);
            let (even, ne) = rugged(x, y, false);
            [
                x1 + 2.0 * odd / no as f64,
                1.0 - x1.sqrt() + 2.0 * even / ne as f64,
            ]
        }
        UfKind::Uf4 => {
            let h = |t: f64| t.abs() / (1.0 + (2.0 * t.abs()).exp());
            let s = Split::new(x, |j, xj| h(sine_shift(j, xj)));
            [x1 + s.odd_mean2(), 1.0 - x1 * x1 + s.even_mean2()]
        }
        UfKind::Uf5 => {
            let big_n = 10.0;
            let eps = 0.1;
            let h = |t: f64| 2.0 * t * t - (4.0 * PI * t).cos() + 1.0;
            let s = Split::new(x, |j, xj| h(sine_shift(j, xj)));
            let bump = (0.5 / big_n + eps) * (2.0 * big_n * PI * x1).sin().abs();
            [x1 + bump + s.odd_mean2(), 1.0 - x1 + bump + s.even_mean2()]
        }
        UfKind::Uf6 => {
            let big_n = 2.0;
            let eps = 0.1;
            let bump = (2.0 * (0.5 / big_n + eps) * (2.0 * big_n * PI * x1).sin()).max(0.0);
            let (odd, no) = rugged(x, sine_shift, true);
            let (even, ne) = rugged(x, sine_shift, false);
            [
                x1 + bump + 2.0 * odd / no as f64,
                1.0 - x1 + bump + 2.0 * even / ne as f64,
            ]
        }
        UfKind::Uf7 => {
            let s = Split::new(x, |j, xj| sine_shift(j, xj).powi(2));
            let r = x1.powf(0.2);
            [r + s.odd_mean2(), 1.0 - r + s.even_mean2()]
        }
    }
}

pub(crate) fn front_candidates(kind: UfKind, count: usize) -> Vec<[f64; 2]> {
    let grid = |m: usize| (0..m).map(move |i| i as f64 / (m - 1) as f64);
    match kind {
        UfKind::Uf1 | UfKind::Uf2 | UfKind::Uf3 => {
            grid(count).map(|t| [t, 1.0 - t.sqrt()]).collect()
        }
        UfKind::Uf4 => grid(count).map(|t| [t, 1.0 - t * t]).collect(),
        UfKind::Uf5 => (0..=20).map(|i| [i as f64 / 20.0, 1.0 - i as f64 / 20.0]).collect(),
        UfKind::Uf6 => {
            // {0} together with [1/4, 1/2] and [3/4, 1] on the line f1 + f2 = 1.
            let mut pts = vec![[0.0, 1.0]];
            for t in grid((count * 50).max(20_000)) {
                if (0.25..=0.5).contains(&t) || t >= 0.75 {
                    pts.push([t, 1.0 - t]);
                }
            }
            pts
        }
        UfKind::Uf7 => grid(count).map(|t| [t, 1.0 - t]).collect(),
    }
}
