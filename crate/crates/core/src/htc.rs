//! Semi-discrete cell-centred HTC finite-volume scheme with the
//! thermodynamically compatible Abgrall flux, integrated by explicit
//! Runge–Kutta methods.

use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{CellField, StaggeredMesh};
use crate::linalg;
use crate::systems::{Axis, System, MAX_DIM};

/// Full state vectors at every primal cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocatedState {
    pub q: CellField,
    pub time: f64,
}

impl CollocatedState {
    pub fn zeros(system: &System, mesh: &StaggeredMesh) -> Self {
        Self {
            q: CellField::zeros(mesh, system.dim()),
            time: 0.0,
        }
    }

    /// Samples `q(x, y)` at cell centres.
    pub fn from_fn(system: &System, mesh: &StaggeredMesh, f: impl Fn([f64; 2]) -> Vec<f64>) -> Result<Self> {
        let mut out = Self::zeros(system, mesh);
        for (i, j, loc) in mesh.locations() {
            let q = f(mesh.cell_center(i, j));
            system.validate_state(&q)?;
            out.q.at_mut(loc).copy_from_slice(&q);
        }
        Ok(out)
    }

    pub fn validate(&self, system: &System, mesh: &StaggeredMesh) -> Result<()> {
        if self.q.ncomp() != system.dim() || self.q.values().len() != mesh.len() * system.dim() {
            return Err(Error::ShapeMismatch(format!(
                "collocated state does not match a {}x{} mesh for {}",
                mesh.nx, mesh.ny, system.kind
            )));
        }
        for loc in 0..mesh.len() {
            system.validate_state(self.q.at(loc))?;
        }
        Ok(())
    }
}

/// Explicit Runge–Kutta scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    /// Row `i` holds `a_ij` for `j < i`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub order: usize,
}

impl ButcherTableau {
    /// Checks `Σ b_i = 1`, matching sizes and strict lower triangularity.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>, order: usize) -> Result<Self> {
        let s = b.len();
        if s == 0 || c.len() != s || a.len() != s {
            return Err(Error::Tableau(format!(
                "inconsistent sizes: {} rows of a, {} weights, {} nodes",
                a.len(),
                s,
                c.len()
            )));
        }
        for (i, row) in a.iter().enumerate() {
            if row.len() > s || row.iter().skip(i).any(|&v| v != 0.0) {
                return Err(Error::Tableau(format!(
                    "row {} of a is not strictly lower-triangular",
                    i + 1
                )));
            }
        }
        let all = a.iter().flatten().chain(&b).chain(&c);
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::Tableau("non-finite coefficient".into()));
        }
        let sum: f64 = b.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Tableau(format!("weights sum to {sum}, not 1")));
        }
        if order == 0 {
            return Err(Error::Tableau("order must be positive".into()));
        }
        let a = a
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.truncate(i);
                r.resize(i, 0.0);
                r
            })
            .collect();
        Ok(Self { a, b, c, order })
    }

    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// Forward Euler.
    pub fn rk1() -> Self {
        Self::new(vec![vec![]], vec![1.0], vec![0.0], 1).expect("valid")
    }

    /// Heun's method.
    pub fn rk2() -> Self {
        Self::new(vec![vec![], vec![1.0]], vec![0.5, 0.5], vec![0.0, 1.0], 2).expect("valid")
    }

    /// Kutta's third-order method.
    pub fn rk3() -> Self {
        Self::new(
            vec![vec![], vec![0.5], vec![-1.0, 2.0]],
            vec![1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            vec![0.0, 0.5, 1.0],
            3,
        )
        .expect("valid")
    }

    /// The classical fourth-order method.
    pub fn rk4() -> Self {
        Self::new(
            vec![vec![], vec![0.5], vec![0.0, 0.5], vec![0.0, 0.0, 1.0]],
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            vec![0.0, 0.5, 0.5, 1.0],
            4,
        )
        .expect("valid")
    }

    pub fn from_order(order: usize) -> Result<Self> {
        match order {
            1 => Ok(Self::rk1()),
            2 => Ok(Self::rk2()),
            3 => Ok(Self::rk3()),
            4 => Ok(Self::rk4()),
            _ => Err(Error::Tableau(format!(
                "no built-in tableau of order {order}; load one from a file"
            ))),
        }
    }

    /// Parses the plain-text format: a line `s order`, then `s` lines of
    /// `a` coefficients (each with `s` entries), one line of `b`, one of `c`.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let nums = |line: Option<&str>, what: &str| -> Result<Vec<f64>> {
            let line = line.ok_or_else(|| Error::Tableau(format!("missing {what}")))?;
            line.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| Error::Tableau(format!("{what}: cannot parse `{t}`: {e}")))
                })
                .collect()
        };
        let head = nums(lines.next(), "header line")?;
        if head.len() != 2 || head.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
            return Err(Error::Tableau("header must be `stages order`".into()));
        }
        let (s, order) = (head[0] as usize, head[1] as usize);
        let mut a = Vec::with_capacity(s);
        for i in 0..s {
            let row = nums(lines.next(), &format!("row {} of a", i + 1))?;
            if row.len() != s {
                return Err(Error::Tableau(format!(
                    "row {} of a has {} entries, expected {s}",
                    i + 1,
                    row.len()
                )));
            }
            a.push(row);
        }
        let b = nums(lines.next(), "weights b")?;
        let c = nums(lines.next(), "nodes c")?;
        if lines.next().is_some() {
            return Err(Error::Tableau("trailing content after nodes".into()));
        }
        Self::new(a, b, c, order)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Unit normal of a face. Only the in-plane components are used.
fn check_normal(n: [f64; 2]) -> Result<()> {
    let len = n[0].hypot(n[1]);
    if !((len - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "face normal {n:?} is not a unit vector"
        )));
    }
    Ok(())
}

/// Abgrall flux from the dual variables of both sides.
fn abgrall_from_dual(system: &System, pl: &[f64], pr: &[f64], n: [f64; 2], out: &mut [f64]) {
    let d = system.dim();
    let mut fl = [0.0; MAX_DIM];
    let mut fr = [0.0; MAX_DIM];
    let mut tmp = [0.0; MAX_DIM];
    let (mut f_l, mut f_r) = (0.0, 0.0);
    for (axis, nk) in Axis::BOTH.into_iter().zip(n) {
        if nk == 0.0 {
            continue;
        }
        system.flux_from_dual(pl, axis, &mut tmp);
        for k in 0..d {
            fl[k] += nk * tmp[k];
        }
        system.flux_from_dual(pr, axis, &mut tmp);
        for k in 0..d {
            fr[k] += nk * tmp[k];
        }
        f_l += nk * system.energy_flux_from_dual(pl, axis);
        f_r += nk * system.energy_flux_from_dual(pr, axis);
    }
    let mut dp2 = 0.0;
    let mut num = f_r - f_l;
    for k in 0..d {
        let dp = pr[k] - pl[k];
        dp2 += dp * dp;
        num += 0.5 * (pr[k] + pl[k]) * (fl[k] - fr[k]);
    }
    let guard = 1e-12
        * 1f64
            .max(linalg::dot(&pl[..d], &pl[..d]))
            .max(linalg::dot(&pr[..d], &pr[..d]));
    let alpha = if dp2 < guard { 0.0 } else { num / dp2 };
    for k in 0..d {
        out[k] = 0.5 * (fl[k] + fr[k]) - alpha * (pr[k] - pl[k]);
    }
}

/// Thermodynamically compatible numerical flux across a face with unit
/// normal `n` pointing from `q_l` to `q_r`.
pub fn abgrall_flux(system: &System, q_l: &[f64], q_r: &[f64], n: [f64; 2]) -> Result<Vec<f64>> {
    check_normal(n)?;
    let pl = system.dual(q_l)?;
    let pr = system.dual(q_r)?;
    let mut out = vec![0.0; system.dim()];
    abgrall_from_dual(system, &pl, &pr, n, &mut out);
    Ok(out)
}

/// Residual of the discrete compatibility condition for a flux `f`:
/// `p^ℓ·(f − f^ℓ·n) + p^r·(f^r·n − f) − (F^r − F^ℓ)·n`, together with the
/// scale `|F^ℓ| + |F^r| + |p^ℓ||f^ℓ| + |p^r||f^r|` it should be compared to.
pub fn compatibility_residual(system: &System, q_l: &[f64], q_r: &[f64], n: [f64; 2], f: &[f64]) -> Result<(f64, f64)> {
    let pl = system.dual(q_l)?;
    let pr = system.dual(q_r)?;
    let d = system.dim();
    let mut fln = vec![0.0; d];
    let mut frn = vec![0.0; d];
    let mut tmp = vec![0.0; d];
    let (mut f_l, mut f_r) = (0.0, 0.0);
    for (axis, nk) in Axis::BOTH.into_iter().zip(n) {
        system.flux_from_dual(&pl, axis, &mut tmp);
        fln.iter_mut().zip(&tmp).for_each(|(a, b)| *a += nk * b);
        system.flux_from_dual(&pr, axis, &mut tmp);
        frn.iter_mut().zip(&tmp).for_each(|(a, b)| *a += nk * b);
        f_l += nk * system.energy_flux_from_dual(&pl, axis);
        f_r += nk * system.energy_flux_from_dual(&pr, axis);
    }
    let mut r = -(f_r - f_l);
    for k in 0..d {
        r += pl[k] * (f[k] - fln[k]) + pr[k] * (frn[k] - f[k]);
    }
    let scale =
        f_l.abs() + f_r.abs() + linalg::norm2(&pl) * linalg::norm2(&fln) + linalg::norm2(&pr) * linalg::norm2(&frn);
    Ok((r, scale))
}

/// Semi-discrete right-hand side `dq/dt` on the periodic mesh. Each face
/// flux is computed once and applied to both neighbours.
pub fn rhs(system: &System, mesh: &StaggeredMesh, state: &CollocatedState) -> Result<CellField> {
    state.validate(system, mesh)?;
    rhs_values(system, mesh, state.q.values()).and_then(|v| CellField::from_vec(mesh, system.dim(), v))
}

fn rhs_values(system: &System, mesh: &StaggeredMesh, q: &[f64]) -> Result<Vec<f64>> {
    let d = system.dim();
    let mut p = vec![0.0; q.len()];
    for loc in 0..mesh.len() {
        system.dual_into(&q[loc * d..(loc + 1) * d], &mut p[loc * d..(loc + 1) * d])?;
    }
    // x- and y-face contributions are accumulated separately so that equal
    // face fluxes cancel exactly.
    let mut out = vec![0.0; q.len()];
    let mut out_y = vec![0.0; q.len()];
    let mut f = [0.0; MAX_DIM];
    let (ix, iy) = (1.0 / mesh.dx, 1.0 / mesh.dy);
    for (i, j, l) in mesh.locations() {
        let r = mesh.index((i + 1) % mesh.nx, j);
        abgrall_from_dual(
            system,
            &p[l * d..(l + 1) * d],
            &p[r * d..(r + 1) * d],
            [1.0, 0.0],
            &mut f,
        );
        for k in 0..d {
            out[l * d + k] -= ix * f[k];
            out[r * d + k] += ix * f[k];
        }
        let r = mesh.index(i, (j + 1) % mesh.ny);
        abgrall_from_dual(
            system,
            &p[l * d..(l + 1) * d],
            &p[r * d..(r + 1) * d],
            [0.0, 1.0],
            &mut f,
        );
        for k in 0..d {
            out_y[l * d + k] -= iy * f[k];
            out_y[r * d + k] += iy * f[k];
        }
    }
    for (a, b) in out.iter_mut().zip(&out_y) {
        *a += b;
    }
    Ok(out)
}

/// One explicit Runge–Kutta step. `dt = 0` returns the state unchanged.
pub fn rk_step(
    system: &System,
    mesh: &StaggeredMesh,
    state: &CollocatedState,
    tableau: &ButcherTableau,
    dt: f64,
) -> Result<CollocatedState> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time step must be non-negative, got {dt}"
        )));
    }
    state.validate(system, mesh)?;
    if dt == 0.0 {
        return Ok(state.clone());
    }
    let q0 = state.q.values();
    let s = tableau.stages();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(s);
    let mut stage = vec![0.0; q0.len()];
    for i in 0..s {
        stage.copy_from_slice(q0);
        for (aij, kj) in tableau.a[i].iter().zip(&k) {
            if *aij != 0.0 {
                for (x, y) in stage.iter_mut().zip(kj) {
                    *x += dt * aij * y;
                }
            }
        }
        k.push(rhs_values(system, mesh, &stage)?);
    }
    let mut q = q0.to_vec();
    for (bi, ki) in tableau.b.iter().zip(&k) {
        for (x, y) in q.iter_mut().zip(ki) {
            *x += dt * bi * y;
        }
    }
    let next = CollocatedState {
        q: CellField::from_vec(mesh, system.dim(), q)?,
        time: state.time + dt,
    };
    next.validate(system, mesh)?;
    Ok(next)
}

/// `dt = cfl / (max_ℓ λ(q_ℓ) · (1/Δx + 1/Δy))` with `λ` from
/// [`System::max_signal_speed`].
pub fn cfl_dt(system: &System, mesh: &StaggeredMesh, state: &CollocatedState, cfl: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "CFL number must be in (0, 1], got {cfl}"
        )));
    }
    state.validate(system, mesh)?;
    let mut speed: f64 = 0.0;
    for loc in 0..mesh.len() {
        speed = speed.max(system.max_signal_speed(state.q.at(loc))?);
    }
    if !(speed > 0.0) {
        return Err(Error::ZeroSignalSpeed);
    }
    Ok(cfl / (speed * (1.0 / mesh.dx + 1.0 / mesh.dy)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{EnergyParams, SystemKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(system: &System, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut q: Vec<f64> = (0..system.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        if system.kind == SystemKind::Acoustics {
            q[3] = rng.random_range(0.5..2.0);
        }
        q
    }

    fn random_field(system: &System, mesh: &StaggeredMesh, rng: &mut ChaCha8Rng) -> CollocatedState {
        let mut s = CollocatedState::zeros(system, mesh);
        for loc in 0..mesh.len() {
            let q = random_state(system, rng);
            s.q.at_mut(loc).copy_from_slice(&q);
        }
        s
    }

    #[test]
    fn equal_states_give_physical_flux() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kind in SystemKind::ALL {
            let s = System::with_defaults(kind);
            let q = random_state(&s, &mut rng);
            for (axis, n) in [(Axis::X, [1.0, 0.0]), (Axis::Y, [0.0, 1.0])] {
                assert_eq!(abgrall_flux(&s, &q, &q, n).unwrap(), s.flux(&q, axis).unwrap());
            }
        }
    }

    #[test]
    fn flux_is_compatible_and_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in SystemKind::ALL {
            let s = System::with_defaults(kind);
            for _ in 0..200 {
                let (a, b) = (random_state(&s, &mut rng), random_state(&s, &mut rng));
                for n in [[1.0, 0.0], [0.0, 1.0], [0.6, -0.8]] {
                    let f = abgrall_flux(&s, &a, &b, n).unwrap();
                    let (r, scale) = compatibility_residual(&s, &a, &b, n, &f).unwrap();
                    assert!(r.abs() <= 1e-13 * scale, "{kind}: {r} vs {scale}");
                    let g = abgrall_flux(&s, &b, &a, [-n[0], -n[1]]).unwrap();
                    for (x, y) in f.iter().zip(&g) {
                        assert!((x + y).abs() <= 1e-14 * (1.0 + x.abs()));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_non_unit_normal() {
        let s = System::with_defaults(SystemKind::Maxwell);
        let q = vec![0.0; 6];
        assert!(abgrall_flux(&s, &q, &q, [1.0, 1.0]).is_err());
    }

    #[test]
    fn uniform_state_is_steady() {
        let s = System::with_defaults(SystemKind::MaxwellGlm);
        let mesh = StaggeredMesh::unit(5, 4).unwrap();
        let q = [0.1, 0.2, -0.3, 0.4, 0.5, -0.6, 0.7, 0.8];
        let st = CollocatedState::from_fn(&s, &mesh, |_| q.to_vec()).unwrap();
        assert_eq!(rhs(&s, &mesh, &st).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn rhs_conserves_and_is_energy_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mesh = StaggeredMesh::new(9, 6, [0.0, 1.0], [0.0, 0.7]).unwrap();
        for kind in SystemKind::ALL {
            let s = System::with_defaults(kind);
            let st = random_field(&s, &mesh, &mut rng);
            let r = rhs(&s, &mesh, &st).unwrap();
            let d = s.dim();
            let vol = mesh.cell_volume();
            let mut cons = vec![0.0; d];
            let mut scale = vec![0.0; d];
            let (mut pe, mut pe_scale) = (0.0, 0.0);
            for loc in 0..mesh.len() {
                let p = s.dual(st.q.at(loc)).unwrap();
                for k in 0..d {
                    cons[k] += vol * r.at(loc)[k];
                    scale[k] += vol * r.at(loc)[k].abs();
                    pe += vol * p[k] * r.at(loc)[k];
                    pe_scale += vol * (p[k] * r.at(loc)[k]).abs();
                }
            }
            for k in 0..d {
                assert!(cons[k].abs() <= 1e-14 * scale[k].max(1.0), "{kind} comp {k}");
            }
            assert!(pe.abs() <= 1e-12 * pe_scale, "{kind}: {pe} vs {pe_scale}");
        }
    }

    #[test]
    fn rhs_is_consistent_for_smooth_fields() {
        // Linear Maxwell with B3 = sin(2πx): dB/dt = −∂_x(...) has a known
        // limit; check first-order-or-better convergence of the error.
        let s = System::new(
            SystemKind::Maxwell,
            EnergyParams {
                maxwell_eps: 0.0,
                ..EnergyParams::default()
            },
        )
        .unwrap();
        let tau = std::f64::consts::TAU;
        let mut errs = vec![];
        for n in [16, 32, 64] {
            let mesh = StaggeredMesh::unit(n, n).unwrap();
            let st = CollocatedState::from_fn(&s, &mesh, |[x, y]| {
                vec![0.0, 0.0, (tau * x).sin(), 0.0, 0.0, (tau * y).cos()]
            })
            .unwrap();
            let r = rhs(&s, &mesh, &st).unwrap();
            // Exact: dB/dt = −curl E, E = 2D; dD/dt = curl H, H = 2B.
            let mut err: f64 = 0.0;
            for (i, j, loc) in mesh.locations() {
                let [x, y] = mesh.cell_center(i, j);
                let e3y = -2.0 * tau * (tau * y).sin();
                let h3x = 2.0 * tau * (tau * x).cos();
                let exact = [-e3y, 0.0, 0.0, 0.0, -h3x, 0.0];
                for (got, want) in r.at(loc).iter().zip(exact) {
                    err = err.max((got - want).abs());
                }
            }
            errs.push(err);
        }
        assert!(errs[0] / errs[1] > 1.9 && errs[1] / errs[2] > 1.9, "{errs:?}");
    }

    #[test]
    fn tableaux_are_consistent() {
        for o in 1..=4 {
            let t = ButcherTableau::from_order(o).unwrap();
            assert_eq!(t.order, o);
            assert!((t.b.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            for (i, row) in t.a.iter().enumerate() {
                assert!((row.iter().sum::<f64>() - t.c[i]).abs() < 1e-15);
            }
        }
        assert!(ButcherTableau::from_order(7).is_err());
    }

    #[test]
    fn tableau_file_format() {
        let text = "# classical RK4\n4 4\n0 0 0 0\n0.5 0 0 0\n0 0.5 0 0\n0 0 1 0\n\
                    0.16666666666666666 0.3333333333333333 0.3333333333333333 0.16666666666666666\n0 0.5 0.5 1\n";
        let t = ButcherTableau::parse(text).unwrap();
        assert_eq!(t, ButcherTableau::rk4());
        assert!(ButcherTableau::parse("2 2\n0 1\n1 0\n0.5 0.5\n0 1\n").is_err());
        assert!(ButcherTableau::parse("1 1\n0\n0.5\n0\n").is_err());
        assert!(ButcherTableau::parse("2 2\n0 0\n1\n0.5 0.5\n0 1\n").is_err());
        assert!(ButcherTableau::parse("").is_err());
    }

    #[test]
    fn zero_dt_leaves_state_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = System::with_defaults(SystemKind::Acoustics);
        let mesh = StaggeredMesh::unit(4, 4).unwrap();
        let st = random_field(&s, &mesh, &mut rng);
        assert_eq!(rk_step(&s, &mesh, &st, &ButcherTableau::rk4(), 0.0).unwrap(), st);
        assert!(rk_step(&s, &mesh, &st, &ButcherTableau::rk4(), -0.1).is_err());
    }

    #[test]
    fn acoustic_positivity_loss_aborts_step() {
        let s = System::with_defaults(SystemKind::Acoustics);
        let mesh = StaggeredMesh::unit(4, 4).unwrap();
        let st = CollocatedState::from_fn(&s, &mesh, |[x, _]| {
            vec![if x < 0.5 { 5.0 } else { -5.0 }, 0.0, 0.0, 0.01]
        })
        .unwrap();
        let r = rk_step(&s, &mesh, &st, &ButcherTableau::rk1(), 1.0);
        assert!(matches!(r, Err(Error::Inadmissible(_))), "{r:?}");
    }

    #[test]
    fn cfl_examples() {
        let s = System::new(
            SystemKind::Maxwell,
            EnergyParams {
                maxwell_eps: 0.0,
                ..EnergyParams::default()
            },
        )
        .unwrap();
        let mesh = StaggeredMesh::unit(10, 10).unwrap();
        let st = CollocatedState::from_fn(&s, &mesh, |_| vec![0.0, 0.0, 0.1, 0.0, 0.0, 0.1]).unwrap();
        let h = 0.1;
        let dt = cfl_dt(&s, &mesh, &st, 0.5).unwrap();
        assert!((dt - 0.5 * h / 4.0).abs() < 1e-15);
        let fine = StaggeredMesh::unit(20, 20).unwrap();
        let st2 = CollocatedState::from_fn(&s, &fine, |_| vec![0.0; 6]).unwrap();
        assert!((cfl_dt(&s, &fine, &st2, 0.5).unwrap() - 0.5 * dt).abs() < 1e-15);
        assert!(cfl_dt(&s, &mesh, &st, 0.0).is_err());
        assert!(cfl_dt(&s, &mesh, &st, 1.5).is_err());
    }
}
