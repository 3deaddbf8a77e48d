//! Property checks over random data. Each check reports its worst normalised
//! error next to the tolerance it is held to.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::{InvolutionReport, Series};
use crate::error::Result;
use crate::grid::{identity_residuals, CellField, StaggeredMesh, VertexField};
use crate::htc::{abgrall_flux, compatibility_residual};
use crate::linalg;
use crate::quadrature::PathQuadrature;
use crate::simm::{coupling, PicardConfig, SimmSolver, StaggeredFields, StepStats};
use crate::systems::{Axis, EnergyParams, System, SystemKind};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Worst observed value, already normalised by the check's scale.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, worst: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            worst,
            tolerance,
            passed: worst <= tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: worst {:.3e} (tolerance {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance
        )
    }
}

/// Random admissible state with entries in `[-1, 1]` (acoustic density in
/// `[0.5, 2]`).
pub fn random_state(system: &System, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut q: Vec<f64> = (0..system.dim()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    if system.kind == SystemKind::Acoustics {
        q[3] = rng.random_range(0.5..=2.0);
    }
    q
}

/// Composition identities `∇×∇φ = 0` and `∇·∇×A = 0` in both directions,
/// normalised by `‖field‖∞ / min(Δx, Δy)`.
pub fn mimetic_identities(meshes: &[(usize, usize)], samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for &(nx, ny) in meshes {
        let mesh = StaggeredMesh::new(nx, ny, [0.0, 1.0], [0.0, ny as f64 / nx as f64 * 1.3]).expect("valid mesh");
        let h = mesh.dx.min(mesh.dy);
        let n = mesh.len();
        for _ in 0..samples {
            let mut random = |len: usize| -> Vec<f64> { (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect() };
            let phi_c = CellField::from_vec(&mesh, 1, random(n)).expect("sized");
            let phi_p = VertexField::from_vec(&mesh, 1, random(n)).expect("sized");
            let a_c = CellField::from_vec(&mesh, 3, random(3 * n)).expect("sized");
            let a_p = VertexField::from_vec(&mesh, 3, random(3 * n)).expect("sized");
            let r = identity_residuals(&mesh, &phi_c, &phi_p, &a_c, &a_p).expect("shapes");
            let pairs = [
                (r.curl_grad_cells, phi_c.max_abs()),
                (r.curl_grad_vertices, phi_p.max_abs()),
                (r.div_curl_cells, a_c.max_abs()),
                (r.div_curl_vertices, a_p.max_abs()),
            ];
            for (res, norm) in pairs {
                if norm > 0.0 {
                    worst = worst.max(res / (norm / h));
                }
            }
        }
    }
    Check::new("mimetic curl-grad and div-curl identities", worst, 1e-13)
}

/// Residual of the discrete compatibility condition of the Abgrall flux for
/// random state pairs, both axis normals, relative to
/// `|F^ℓ| + |F^r| + |p^ℓ||f^ℓ| + |p^r||f^r|`.
pub fn flux_compatibility(pairs: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for kind in SystemKind::ALL {
        let s = System::with_defaults(kind);
        for n in [[1.0, 0.0], [0.0, 1.0]] {
            for _ in 0..pairs {
                let (a, b) = (random_state(&s, &mut rng), random_state(&s, &mut rng));
                let f = abgrall_flux(&s, &a, &b, n).expect("admissible");
                let (r, scale) = compatibility_residual(&s, &a, &b, n, &f).expect("admissible");
                if scale > 0.0 {
                    worst = worst.max(r.abs() / scale);
                }
            }
        }
    }
    Check::new("Abgrall flux compatibility", worst, 1e-13)
}

/// `f_k(q) = H_k p` and `F_k(q) = ½ p·H_k p` for random states.
pub fn godunov_form(samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for kind in SystemKind::ALL {
        let s = System::with_defaults(kind);
        for _ in 0..samples {
            let q = random_state(&s, &mut rng);
            let p = s.dual(&q).expect("admissible");
            for axis in Axis::BOTH {
                let h = s.h_matrix(axis.index() + 1).expect("valid axis");
                let hp = h.mul_vec(&p);
                let f = s.flux(&q, axis).expect("admissible");
                let scale = linalg::max_abs(&p).max(linalg::max_abs(&f)).max(f64::MIN_POSITIVE);
                for (x, y) in f.iter().zip(&hp) {
                    worst = worst.max((x - y).abs() / scale);
                }
                let big_f = s.energy_flux(&q, axis).expect("admissible");
                let half = 0.5 * linalg::dot(&p, &hp);
                let scale = (linalg::norm2(&p) * linalg::norm2(&hp)).max(f64::MIN_POSITIVE);
                worst = worst.max((big_f - half).abs() / scale);
            }
        }
    }
    Check::new("flux equals H_k p and energy flux equals p.H_k p / 2", worst, 1e-14)
}

/// Central finite differences of the energy against the dual map.
pub fn dual_gradient(samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for kind in SystemKind::ALL {
        let s = System::with_defaults(kind);
        for _ in 0..samples {
            let q = random_state(&s, &mut rng);
            let p = s.dual(&q).expect("admissible");
            let scale = linalg::max_abs(&p).max(1.0);
            for i in 0..s.dim() {
                let h = 1e-5 * q[i].abs().max(1.0);
                let (mut a, mut b) = (q.clone(), q.clone());
                a[i] += h;
                b[i] -= h;
                let fd = (s.energy(&a).expect("admissible") - s.energy(&b).expect("admissible")) / (2.0 * h);
                worst = worst.max((fd - p[i]).abs() / scale);
            }
        }
    }
    Check::new("dual equals finite-difference energy gradient", worst, 1e-6)
}

/// Central finite differences of the dual map against the Hessian.
pub fn hessian_jacobian(samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for kind in SystemKind::ALL {
        let s = System::with_defaults(kind);
        for _ in 0..samples {
            let q = random_state(&s, &mut rng);
            let hess = s.hessian(&q).expect("admissible");
            let scale = linalg::max_abs(&hess.entries).max(1.0);
            for j in 0..s.dim() {
                let h = 1e-5 * q[j].abs().max(1.0);
                let (mut a, mut b) = (q.clone(), q.clone());
                a[j] += h;
                b[j] -= h;
                let (pa, pb) = (s.dual(&a).expect("admissible"), s.dual(&b).expect("admissible"));
                for i in 0..s.dim() {
                    let fd = (pa[i] - pb[i]) / (2.0 * h);
                    worst = worst.max((fd - hess.get(i, j)).abs() / scale);
                }
            }
        }
    }
    Check::new("Hessian equals finite-difference Jacobian of the dual", worst, 1e-5)
}

/// `Σ p·G(p) = 0` for the staggered coupling operator.
pub fn coupling_skewness(samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mesh = StaggeredMesh::new(11, 7, [0.0, 1.0], [0.0, 0.9]).expect("valid mesh");
    let mut worst: f64 = 0.0;
    for kind in SystemKind::ALL {
        let s = System::with_defaults(kind);
        for _ in 0..samples {
            let mut p = StaggeredFields::zeros(&s, &mesh);
            p.cells
                .values_mut()
                .iter_mut()
                .for_each(|x| *x = rng.random_range(-1.0..=1.0));
            p.vertices
                .values_mut()
                .iter_mut()
                .for_each(|x| *x = rng.random_range(-1.0..=1.0));
            let g = coupling(&s, &mesh, &p).expect("shapes");
            let (pf, gf) = (p.to_flat(), g.to_flat());
            let ip = linalg::dot(&pf, &gf);
            let scale: f64 = pf.iter().zip(&gf).map(|(a, b)| (a * b).abs()).sum();
            if scale > 0.0 {
                worst = worst.max(ip.abs() / scale);
            }
        }
    }
    Check::new("staggered coupling operator is skew", worst, 1e-14)
}

/// Picard iterations for the quadratic Maxwell energy (at most 2 expected).
pub fn linear_picard(steps: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = System::new(
        SystemKind::Maxwell,
        EnergyParams {
            maxwell_eps: 0.0,
            ..EnergyParams::default()
        },
    )?;
    let mesh = StaggeredMesh::unit(16, 16)?;
    let solver = SimmSolver::new(s, mesh.clone(), PathQuadrature::default(), PicardConfig::default())?;
    let mut f = StaggeredFields::zeros(&s, &mesh);
    f.cells
        .values_mut()
        .iter_mut()
        .for_each(|x| *x = rng.random_range(-1.0..=1.0));
    f.vertices
        .values_mut()
        .iter_mut()
        .for_each(|x| *x = rng.random_range(-1.0..=1.0));
    let mut worst = 0usize;
    for _ in 0..steps {
        let (next, st) = solver.step(&f, 0.005)?;
        worst = worst.max(st.picard_iters);
        f = next;
    }
    Ok(Check::new("Picard iterations for quadratic energy", worst as f64, 2.0))
}

/// Write-read-compare of the diagnostic CSV.
pub fn csv_round_trip(rows: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut series = Series::new();
    let mut t = 0.0;
    for i in 0..rows {
        let inv = InvolutionReport {
            div_b_max: Some(rng.random::<f64>() * 1e-15),
            div_d_max: (i % 2 == 0).then(|| rng.random::<f64>()),
            curl_v_max: None,
        };
        let st = StepStats {
            picard_iters: i % 7,
            krylov_iters: i,
            ..StepStats::default()
        };
        series.record(t, rng.random_range(0.0..10.0), inv, Some(&st))?;
        t += rng.random::<f64>() + 1e-9;
    }
    let back = Series::from_csv(&series.to_csv())?;
    let mismatches = back
        .records()
        .iter()
        .zip(series.records())
        .filter(|(a, b)| a != b)
        .count()
        + back.len().abs_diff(series.len());
    Ok(Check::new("series CSV round-trips bit-exactly", mismatches as f64, 0.0))
}

/// The full suite run by the `verify` command.
pub fn run_all() -> Result<Vec<Check>> {
    Ok(vec![
        mimetic_identities(&[(8, 8), (17, 23), (64, 64)], 50, 1),
        flux_compatibility(1000, 2),
        godunov_form(100, 3),
        dual_gradient(50, 4),
        hessian_jacobian(50, 5),
        coupling_skewness(20, 6),
        linear_picard(5, 7)?,
        csv_round_trip(500, 8)?,
    ])
}
