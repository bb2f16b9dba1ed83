/// `a` weakly dominates `b` and is strictly better somewhere (minimization).
pub fn dominates(a: &[f64; 2], b: &[f64; 2]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1])
}

/// Indices of the mutually nondominated points; exact duplicates keep the
/// first occurrence only. Output is sorted by the first objective.
pub fn nondominated_indices(points: &[[f64; 2]]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i][0]
            .total_cmp(&points[j][0])
            .then(points[i][1].total_cmp(&points[j][1]))
            .then(i.cmp(&j))
    });
    let mut kept = Vec::new();
    let mut best_f2 = f64::INFINITY;
    for i in order {
        if points[i][1] < best_f2 {
            best_f2 = points[i][1];
            kept.push(i);
        }
    }
    kept
}

pub fn nondominated(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    nondominated_indices(points).into_iter().map(|i| points[i]).collect()
}

/// Nondominated sorting into successive fronts.
pub fn front_ranks(points: &[[f64; 2]]) -> Vec<usize> {
    let n = points.len();
    let mut rank = vec![usize::MAX; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut level = 0;
    while !remaining.is_empty() {
        let current: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| dominates(&points[j], &points[i])))
            .collect();
        for &i in &current {
            rank[i] = level;
        }
        remaining.retain(|i| rank[*i] == usize::MAX);
        level += 1;
    }
    rank
}

/// Picks `count` points spread evenly by index along an ordered set.
pub(crate) fn even_subsample(points: Vec<[f64; 2]>, count: usize) -> Vec<[f64; 2]> {
    if points.len() <= count || count == 0 {
        return points;
    }
    if count == 1 {
        return vec![points[0]];
    }
    let last = (points.len() - 1) as f64;
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(count);
    let mut prev = usize::MAX;
    for i in 0..count {
        let idx = (i as f64 * last / (count - 1) as f64).round() as usize;
        if idx != prev {
            out.push(points[idx]);
            prev = idx;
        }
    }
    out
}
