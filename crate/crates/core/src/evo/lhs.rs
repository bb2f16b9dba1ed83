use rand::seq::SliceRandom;
use rand::Rng;

use crate::bounds::Bounds;

/// Latin hypercube sample: along every dimension each of the `count`
/// equal-width strata holds exactly one point.
pub fn lhs_sample<R: Rng + ?Sized>(count: usize, bounds: &Bounds, rng: &mut R) -> Vec<Vec<f64>> {
    let dim = bounds.dim();
    let mut points = vec![vec![0.0; dim]; count];
    let mut strata: Vec<usize> = (0..count).collect();
    for k in 0..dim {
        strata.shuffle(rng);
        let (lo, width) = (bounds.lower()[k], bounds.range(k));
        for (point, &s) in points.iter_mut().zip(&strata) {
            let z = (s as f64 + rng.gen::<f64>()) / count as f64;
            point[k] = (lo + z * width).min(bounds.upper()[k]);
        }
    }
    points
}
