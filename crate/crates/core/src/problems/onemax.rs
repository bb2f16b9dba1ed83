use rand::Rng;

use crate::error::{invalid, Result};

/// Continuous mapped OneMax: `f1 = sum x_i`, `f2 = sum |x_i - map_i|`.
///
/// Each `map_i` is 0 with probability `(1 + corr) / 2` and 1 otherwise, so
/// `corr = 1` makes both objectives identical and `corr = -1` makes them
/// sum to `n` everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct CmOneMaxSpec {
    pub n: usize,
    pub corr: f64,
    pub map: Vec<u8>,
    pub seed: u64,
}

pub const CM_ONEMAX_DEFAULT_N: usize = 10;

/// Grid resolution per dimension used to enumerate the reference front.
pub const FRONT_RESOLUTION: usize = 21;

pub fn make_cm_onemax<R: Rng + ?Sized>(n: usize, corr: f64, rng: &mut R) -> Result<CmOneMaxSpec> {
    if !(-1.0..=1.0).contains(&corr) {
        return Err(invalid(format!("correlation {corr} outside [-1, 1]")));
    }
    if n == 0 {
        return Err(invalid("cm-OneMax needs at least one variable"));
    }
    let p_zero = (1.0 + corr) / 2.0;
    let map = (0..n)
        .map(|_| if rng.gen::<f64>() < p_zero { 0 } else { 1 })
        .collect();
    Ok(CmOneMaxSpec {
        n,
        corr,
        map,
        seed: 0,
    })
}

impl CmOneMaxSpec {
    /// On the unit box `|x - m| = x` for `m = 0` and `1 - x` for `m = 1`, so
    /// with `a`, `b` the sums over the zero and one positions
    /// `f1 = a + b` and `f2 = (ones - b) + a`. Written this way `f1 == f2`
    /// bit for bit when every `map_i` is 0, and `f1 + f2 == n` when every
    /// `map_i` is 1.
    pub(crate) fn evaluate(&self, x: &[f64]) -> [f64; 2] {
        let (mut a, mut b, mut ones) = (0.0, 0.0, 0.0);
        for (v, &m) in x.iter().zip(&self.map) {
            if m == 0 {
                a += v;
            } else {
                b += v;
                ones += 1.0;
            }
        }
        [a + b, (ones - b) + a]
    }

    /// Every objective pair reachable on the `FRONT_RESOLUTION`-point grid,
    /// accumulated one dimension at a time in integer grid units.
    pub(crate) fn grid_image(&self) -> Vec<[f64; 2]> {
        let steps = FRONT_RESOLUTION - 1;
        let side = steps * self.n + 1;
        let mut reach = vec![false; side * side];
        reach[0] = true;
        let mut extent = 0;
        for &m in &self.map {
            let mut next = vec![false; side * side];
            for a in 0..=extent {
                for b in 0..=extent {
                    if !reach[a * side + b] {
                        continue;
                    }
                    for k in 0..=steps {
                        let db = if m == 0 { k } else { steps - k };
                        next[(a + k) * side + (b + db)] = true;
                    }
                }
            }
            reach = next;
            extent += steps;
        }
        let unit = steps as f64;
        let mut pts = Vec::new();
        for a in 0..side {
            for b in 0..side {
                if reach[a * side + b] {
                    pts.push([a as f64 / unit, b as f64 / unit]);
                }
            }
        }
        pts
    }
}
