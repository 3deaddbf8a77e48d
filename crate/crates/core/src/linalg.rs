//! Small dense helpers for the per-location blocks (at most 8×8).

/// In-place Cholesky factorization of a row-major `n×n` symmetric matrix.
/// On success the lower triangle holds `L` with `A = L Lᵀ`. Returns `false`
/// if a non-positive pivot is met.
pub(crate) fn cholesky_in_place(a: &mut [f64], n: usize) -> bool {
    debug_assert_eq!(a.len(), n * n);
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return false;
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    true
}

pub(crate) fn is_positive_definite(a: &[f64], n: usize) -> bool {
    let mut buf = [0.0; 64];
    let work = &mut buf[..n * n];
    work.copy_from_slice(a);
    cholesky_in_place(work, n)
}

/// Gershgorin bound on the spectral radius of a row-major `n×n` matrix.
pub(crate) fn gershgorin_radius(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|i| a[i * n..(i + 1) * n].iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `out = A x` for a row-major `n×n` matrix.
pub(crate) fn mat_vec(a: &[f64], n: usize, x: &[f64], out: &mut [f64]) {
    for i in 0..n {
        let row = &a[i * n..(i + 1) * n];
        out[i] = row.iter().zip(x).map(|(r, v)| r * v).sum();
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}
