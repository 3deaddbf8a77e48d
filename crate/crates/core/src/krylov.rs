//! Restarted GMRES for matrix-free linear operators.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresConfig {
    /// Krylov subspace dimension before restart.
    pub restart: usize,
    /// Target relative residual `‖b − Ax‖ / ‖b‖`.
    pub tol: f64,
    /// Cap on the total number of inner iterations.
    pub max_iters: usize,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self {
            restart: 30,
            tol: 1e-13,
            max_iters: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GmresStats {
    pub iters: usize,
    /// True relative residual at exit.
    pub rel_residual: f64,
}

/// Solves `A x = b` starting from the value already in `x`.
///
/// `apply(v, out)` must write `A v` into `out`. Returns an error if the
/// tolerance is not reached within `max_iters` inner iterations.
pub fn gmres<F>(mut apply: F, b: &[f64], x: &mut [f64], cfg: &GmresConfig) -> Result<GmresStats>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = b.len();
    if x.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "GMRES initial guess has length {}, right-hand side {n}",
            x.len()
        )));
    }
    if cfg.restart == 0 || !(cfg.tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "GMRES needs restart > 0 and tol > 0, got {} and {}",
            cfg.restart, cfg.tol
        )));
    }
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(GmresStats::default());
    }

    let m = cfg.restart.min(n.max(1));
    let mut basis: Vec<Vec<f64>> = (0..=m).map(|_| vec![0.0; n]).collect();
    let mut h = vec![0.0; (m + 1) * m];
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];
    let mut w = vec![0.0; n];
    let mut iters = 0;

    let residual = |apply: &mut F, x: &[f64], r: &mut [f64]| {
        apply(x, r);
        for (ri, bi) in r.iter_mut().zip(b) {
            *ri = bi - *ri;
        }
        norm2(r)
    };

    loop {
        let beta = residual(&mut apply, x, &mut basis[0]);
        if beta <= cfg.tol * bnorm {
            return Ok(GmresStats {
                iters,
                rel_residual: beta / bnorm,
            });
        }
        if iters >= cfg.max_iters {
            return Err(Error::Krylov(format!(
                "relative residual {:e} after {iters} iterations (target {:e})",
                beta / bnorm,
                cfg.tol
            )));
        }
        basis[0].iter_mut().for_each(|v| *v /= beta);
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;

        let mut k = 0;
        while k < m && iters < cfg.max_iters {
            apply(&basis[k], &mut w);
            // Modified Gram-Schmidt.
            for i in 0..=k {
                let hik = dot(&w, &basis[i]);
                h[i * m + k] = hik;
                for (wj, vj) in w.iter_mut().zip(&basis[i]) {
                    *wj -= hik * vj;
                }
            }
            let hnext = norm2(&w);
            h[(k + 1) * m + k] = hnext;
            if hnext > 0.0 {
                for (dst, src) in basis[k + 1].iter_mut().zip(&w) {
                    *dst = src / hnext;
                }
            }
            for i in 0..k {
                let (a, bb) = (h[i * m + k], h[(i + 1) * m + k]);
                h[i * m + k] = cs[i] * a + sn[i] * bb;
                h[(i + 1) * m + k] = -sn[i] * a + cs[i] * bb;
            }
            let (a, bb) = (h[k * m + k], h[(k + 1) * m + k]);
            let r = a.hypot(bb);
            if r == 0.0 {
                return Err(Error::Krylov("breakdown: singular Hessenberg column".into()));
            }
            cs[k] = a / r;
            sn[k] = bb / r;
            h[k * m + k] = r;
            h[(k + 1) * m + k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            k += 1;
            iters += 1;
            if g[k].abs() <= cfg.tol * bnorm || hnext == 0.0 {
                break;
            }
        }

        // Back substitution for the k-dimensional least-squares solution.
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[i * m + j] * y[j];
            }
            y[i] = s / h[i * m + i];
        }
        for (j, yj) in y.iter().enumerate() {
            for (xi, vi) in x.iter_mut().zip(&basis[j]) {
                *xi += yj * vi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense(a: &[f64], n: usize) -> impl FnMut(&[f64], &mut [f64]) + '_ {
        move |v, out| crate::linalg::mat_vec(a, n, v, out)
    }

    #[test]
    fn solves_identity_plus_skew() {
        let n = 40;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
            for j in i + 1..n {
                let s = 0.3 * rng.random_range(-1.0..1.0) / (n as f64).sqrt();
                a[i * n + j] = s;
                a[j * n + i] = -s;
            }
        }
        let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut b = vec![0.0; n];
        crate::linalg::mat_vec(&a, n, &xs, &mut b);
        let mut x = vec![0.0; n];
        let cfg = GmresConfig {
            restart: 10,
            ..GmresConfig::default()
        };
        let stats = gmres(dense(&a, n), &b, &mut x, &cfg).unwrap();
        assert!(stats.rel_residual <= 1e-13);
        for (u, v) in x.iter().zip(&xs) {
            assert!((u - v).abs() < 1e-11);
        }
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let a = [2.0, 0.0, 0.0, 2.0];
        let mut x = vec![1.0, 1.0];
        let s = gmres(dense(&a, 2), &[0.0, 0.0], &mut x, &GmresConfig::default()).unwrap();
        assert_eq!(s.iters, 0);
        assert_eq!(x, vec![0.0, 0.0]);
    }

    #[test]
    fn reports_failure_to_converge() {
        // Rotation by 90 degrees: restart 1 stagnates.
        let a = [0.0, -1.0, 1.0, 0.0];
        let mut x = vec![0.0, 0.0];
        let cfg = GmresConfig {
            restart: 1,
            tol: 1e-13,
            max_iters: 20,
        };
        assert!(matches!(
            gmres(dense(&a, 2), &[1.0, 0.0], &mut x, &cfg),
            Err(Error::Krylov(_))
        ));
    }
}
