//! Dense row-major helpers for the small symmetric systems a Kriging fit needs.

/// In-place lower Cholesky factorization of a symmetric positive-definite
/// `n x n` matrix stored row-major. Only the lower triangle is read; the
/// upper triangle is zeroed on success. Returns `false` when a pivot is not
/// strictly positive.
pub(crate) fn cholesky_in_place(a: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let (done, rest) = a.split_at_mut((j + 1) * n);
        let row_j = &mut done[j * n..];
        let d = row_j[j] - dot(&row_j[..j], &row_j[..j]);
        if !(d > 0.0) || !d.is_finite() {
            return false;
        }
        let d = d.sqrt();
        row_j[j] = d;
        for v in row_j[j + 1..].iter_mut() {
            *v = 0.0;
        }
        let row_j: &[f64] = row_j;
        for row_i in rest.chunks_exact_mut(n) {
            let s = row_i[j] - dot(&row_i[..j], &row_j[..j]);
            row_i[j] = s / d;
        }
    }
    true
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `L z = b` for lower-triangular `L`.
pub(crate) fn forward_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; n];
    for i in 0..n {
        let row = &l[i * n..i * n + i];
        z[i] = (b[i] - dot(row, &z[..i])) / l[i * n + i];
    }
    z
}

/// Solves `L^T x = z` for lower-triangular `L`.
pub(crate) fn backward_solve(l: &[f64], n: usize, z: &[f64]) -> Vec<f64> {
    let mut x = z.to_vec();
    for i in (0..n).rev() {
        x[i] /= l[i * n + i];
        let xi = x[i];
        for k in 0..i {
            x[k] -= l[i * n + k] * xi;
        }
    }
    x
}

/// Solves `(L L^T) x = b`.
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let z = forward_solve(l, n, b);
    backward_solve(l, n, &z)
}

pub(crate) fn log_det_from_cholesky(l: &[f64], n: usize) -> f64 {
    2.0 * (0..n).map(|i| l[i * n + i].ln()).sum::<f64>()
}
