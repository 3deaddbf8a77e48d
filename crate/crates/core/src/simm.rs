//! Fully discrete staggered semi-implicit mimetic (SIMM) scheme.
//!
//! Each system splits its state into a cell block and a vertex block (see
//! [`System::block_indices`]):
//!
//! | system      | cells (dual)      | vertices (dual)   |
//! |-------------|-------------------|-------------------|
//! | acoustics   | `v` (`u`)         | `ρ` (`s`)         |
//! | maxwell     | `B` (`H`)         | `D` (`E`)         |
//! | maxwell_glm | `B, ψ` (`H, η`)   | `D, φ` (`E, ξ`)   |
//!
//! The scheme is `q^{n+1} − q^n + Δt G(p̃) = 0` with `p̃` the path average of
//! the dual variables along the straight segment from `q^n` to `q^{n+1}` and
//! `G` the mimetic coupling operator below. `G` is skew with respect to the
//! volume-weighted inner product, which together with the discrete chain rule
//! gives exact energy conservation.
//!
//! The nonlinearity is handled by a Picard loop. With `M^m` the path-averaged
//! Hessian at iterate `q^m`, the linearised update `z = q^{m+1} − q^m` solves
//!
//! ```text
//! (I + Δt/2 G M^m) z = −(q^m − q^n + Δt G(p̃^m))
//! ```
//!
//! with restarted GMRES, after which the new iterate is formed directly as
//! `q^{m+1} = q^n − Δt G(p̃^m + ½ M^m z)`. Writing the update through `G`
//! keeps the involutions exact to round-off whatever the Krylov error.

use crate::diagnostics::InvolutionReport;
use crate::error::{Error, Result};
use crate::grid::{CellField, StaggeredMesh, Stencil, VertexField};
use crate::krylov::{gmres, GmresConfig};
use crate::linalg;
use crate::quadrature::PathQuadrature;
use crate::systems::{Block, Hessian, System, SystemKind, MAX_BLOCK_DIM, MAX_DIM};

/// Staggered state: cell block at primal cell centres, vertex block at
/// primal vertices, both in block-local component order.
#[derive(Debug, Clone, PartialEq)]
pub struct StaggeredFields {
    pub cells: CellField,
    pub vertices: VertexField,
    pub time: f64,
}

impl StaggeredFields {
    pub fn zeros(system: &System, mesh: &StaggeredMesh) -> Self {
        Self {
            cells: CellField::zeros(mesh, system.block_dim(Block::Cell)),
            vertices: VertexField::zeros(mesh, system.block_dim(Block::Vertex)),
            time: 0.0,
        }
    }

    /// Samples a full-state initial condition `q(x, y)`: the cell block at
    /// cell centres and the vertex block at vertices.
    pub fn from_fn(system: &System, mesh: &StaggeredMesh, f: impl Fn([f64; 2]) -> Vec<f64>) -> Result<Self> {
        let mut out = Self::zeros(system, mesh);
        for (i, j, loc) in mesh.locations() {
            let q = f(mesh.cell_center(i, j));
            system.validate_state(&q).or_else(|e| match e {
                Error::Inadmissible(_) => Ok(()),
                e => Err(e),
            })?;
            for (dst, &k) in out.cells.at_mut(loc).iter_mut().zip(system.block_indices(Block::Cell)) {
                *dst = q[k];
            }
            let q = f(mesh.vertex(i, j));
            system.validate_state(&q)?;
            for (dst, &k) in out
                .vertices
                .at_mut(loc)
                .iter_mut()
                .zip(system.block_indices(Block::Vertex))
            {
                *dst = q[k];
            }
        }
        Ok(out)
    }

    /// Checks shapes against the mesh and admissibility of every vertex block.
    pub fn validate(&self, system: &System, mesh: &StaggeredMesh) -> Result<()> {
        let dc = system.block_dim(Block::Cell);
        let dv = system.block_dim(Block::Vertex);
        if self.cells.ncomp() != dc
            || self.vertices.ncomp() != dv
            || self.cells.values().len() != mesh.len() * dc
            || self.vertices.values().len() != mesh.len() * dv
        {
            return Err(Error::ShapeMismatch(format!(
                "staggered fields do not match a {}x{} mesh for {}",
                mesh.nx, mesh.ny, system.kind
            )));
        }
        let mut e = 0.0;
        for loc in 0..mesh.len() {
            e += system.block_energy(Block::Vertex, self.vertices.at(loc))?;
        }
        if !e.is_finite() {
            return Err(Error::Inadmissible("non-finite vertex energy".into()));
        }
        Ok(())
    }

    /// Values of the cell block followed by the vertex block.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.cells.values().len() + self.vertices.values().len());
        v.extend_from_slice(self.cells.values());
        v.extend_from_slice(self.vertices.values());
        v
    }

    /// Inverse of [`to_flat`](Self::to_flat).
    pub fn from_flat(system: &System, mesh: &StaggeredMesh, flat: Vec<f64>, time: f64) -> Result<Self> {
        let dc = system.block_dim(Block::Cell);
        let nc = mesh.len() * dc;
        let mut flat = flat;
        let vert = flat.split_off(nc);
        Ok(Self {
            cells: CellField::from_vec(mesh, dc, flat)?,
            vertices: VertexField::from_vec(mesh, system.block_dim(Block::Vertex), vert)?,
            time,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.cells.max_abs().max(self.vertices.max_abs())
    }
}

/// Stopping and solver parameters for the Picard loop.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardConfig {
    /// Absolute bound on `|E^{m+1} − E^m|`.
    pub tol: f64,
    /// Bound on `‖q^{m+1} − q^m‖∞ / ‖q^{m+1} − q^n‖∞`.
    pub increment_tol: f64,
    pub max_iters: usize,
    pub krylov: GmresConfig,
}

impl Default for PicardConfig {
    fn default() -> Self {
        Self {
            tol: 1e-15,
            increment_tol: 1e-12,
            max_iters: 50,
            krylov: GmresConfig::default(),
        }
    }
}

impl PicardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !(self.increment_tol > 0.0) || self.max_iters == 0 {
            return Err(Error::InvalidParameter(format!(
                "Picard needs tol > 0, increment_tol > 0 and max_iters > 0, got {}, {}, {}",
                self.tol, self.increment_tol, self.max_iters
            )));
        }
        if !(self.krylov.tol > 0.0) || self.krylov.restart == 0 || self.krylov.max_iters == 0 {
            return Err(Error::InvalidParameter(
                "Krylov needs tol > 0, restart > 0 and max_iters > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Per-step solver statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepStats {
    pub picard_iters: usize,
    /// Inner GMRES iterations summed over the Picard loop.
    pub krylov_iters: usize,
    /// Relative GMRES residual of the last solve.
    pub krylov_residual: f64,
    /// `max |M Δq − Δp| / max |p|` at the accepted state.
    pub roe_residual: f64,
    /// `max |p̃·Δq − ΔE_loc| / max |E_loc|` at the accepted state.
    pub chain_rule_residual: f64,
}

/// Path-averaged Hessians of both blocks, one dense row-major block per
/// location.
#[derive(Debug, Clone, PartialEq)]
pub struct PathHessians {
    pub cells: Vec<f64>,
    pub vertices: Vec<f64>,
}

/// Path average of dual and Hessian of one block along
/// `q_old + s (q_new − q_old)`. Writes `p̃` into `p_out` and `M` into `m_out`.
pub fn block_path(
    system: &System,
    block: Block,
    q_old: &[f64],
    q_new: &[f64],
    quad: &PathQuadrature,
    p_out: &mut [f64],
    m_out: &mut [f64],
) -> Result<()> {
    let n = system.block_dim(block);
    let mut qs = [0.0; MAX_BLOCK_DIM];
    let mut p = [0.0; MAX_BLOCK_DIM];
    let mut h = [0.0; MAX_BLOCK_DIM * MAX_BLOCK_DIM];
    p_out[..n].iter_mut().for_each(|x| *x = 0.0);
    m_out[..n * n].iter_mut().for_each(|x| *x = 0.0);
    if q_old[..n] == q_new[..n] {
        system.block_dual(block, &q_old[..n], p_out)?;
        system.block_hessian(block, &q_old[..n], m_out)?;
        return Ok(());
    }
    for (s, w) in quad.points() {
        for k in 0..n {
            qs[k] = q_old[k] + s * (q_new[k] - q_old[k]);
        }
        system.block_dual(block, &qs[..n], &mut p)?;
        system.block_hessian(block, &qs[..n], &mut h)?;
        for k in 0..n {
            p_out[k] += w * p[k];
        }
        for k in 0..n * n {
            m_out[k] += w * h[k];
        }
    }
    Ok(())
}

/// `p̃ = ∫₀¹ p(q_old + s(q_new − q_old)) ds` for full state vectors.
pub fn path_average_dual(system: &System, q_old: &[f64], q_new: &[f64], quad: &PathQuadrature) -> Result<Vec<f64>> {
    Ok(full_path(system, q_old, q_new, quad)?.0)
}

/// `M = ∫₀¹ E_qq(q_old + s(q_new − q_old)) ds` for full state vectors.
/// Fails if `M` is not positive definite.
pub fn path_hessian(system: &System, q_old: &[f64], q_new: &[f64], quad: &PathQuadrature) -> Result<Hessian> {
    let m = full_path(system, q_old, q_new, quad)?.1;
    if !m.positive_definite {
        return Err(Error::IndefiniteHessian("path-averaged Hessian".into()));
    }
    Ok(m)
}

fn full_path(system: &System, q_old: &[f64], q_new: &[f64], quad: &PathQuadrature) -> Result<(Vec<f64>, Hessian)> {
    let dim = system.dim();
    for q in [q_old, q_new] {
        if q.len() != dim {
            return Err(Error::StateDimension {
                expected: dim,
                got: q.len(),
            });
        }
    }
    let mut p = vec![0.0; dim];
    let mut entries = vec![0.0; dim * dim];
    for block in [Block::Cell, Block::Vertex] {
        let idx = system.block_indices(block);
        let n = idx.len();
        let gather = |q: &[f64]| {
            let mut b = [0.0; MAX_BLOCK_DIM];
            for (d, &i) in b.iter_mut().zip(idx) {
                *d = q[i];
            }
            b
        };
        let (a, b) = (gather(q_old), gather(q_new));
        let mut pb = [0.0; MAX_BLOCK_DIM];
        let mut mb = [0.0; MAX_BLOCK_DIM * MAX_BLOCK_DIM];
        block_path(system, block, &a[..n], &b[..n], quad, &mut pb, &mut mb)?;
        for r in 0..n {
            p[idx[r]] = pb[r];
            for c in 0..n {
                entries[idx[r] * dim + idx[c]] = mb[r * n + c];
            }
        }
    }
    let positive_definite = linalg::is_positive_definite(&entries, dim);
    Ok((
        p,
        Hessian {
            dim,
            entries,
            positive_definite,
        },
    ))
}

/// Writes `G(p)` into `out` for flat staggered data (cell block first).
fn coupling_flat(system: &System, mesh: &StaggeredMesh, p: &[f64], out: &mut [f64]) {
    let dc = system.block_dim(Block::Cell);
    let dv = system.block_dim(Block::Vertex);
    let nc = mesh.len() * dc;
    let (pc, pv) = p.split_at(nc);
    let (oc, ov) = out.split_at_mut(nc);
    oc.iter_mut().for_each(|x| *x = 0.0);
    ov.iter_mut().for_each(|x| *x = 0.0);
    let to_c = Stencil::to_cells(mesh);
    let to_v = Stencil::to_vertices(mesh);
    match system.kind {
        SystemKind::Acoustics => {
            to_c.add_grad(pv, dv, 0, oc, dc, 0, 1.0);
            to_v.add_div(pc, dc, 0, ov, dv, 0, 1.0);
        }
        SystemKind::Maxwell => {
            to_c.add_curl(pv, dv, 0, oc, dc, 0, 1.0);
            to_v.add_curl(pc, dc, 0, ov, dv, 0, -1.0);
        }
        SystemKind::MaxwellGlm => {
            // B: curl E + grad ξ;  ψ: div E;  D: −curl H + grad η;  φ: div H.
            to_c.add_curl(pv, dv, 0, oc, dc, 0, 1.0);
            to_c.add_grad(pv, dv, 3, oc, dc, 0, 1.0);
            to_c.add_div(pv, dv, 0, oc, dc, 3, 1.0);
            to_v.add_curl(pc, dc, 0, ov, dv, 0, -1.0);
            to_v.add_grad(pc, dc, 3, ov, dv, 0, 1.0);
            to_v.add_div(pc, dc, 0, ov, dv, 3, 1.0);
        }
    }
}

/// The mimetic coupling operator `G(p)` applied to staggered dual fields.
pub fn coupling(system: &System, mesh: &StaggeredMesh, p: &StaggeredFields) -> Result<StaggeredFields> {
    check_shape(system, mesh, p)?;
    let flat = p.to_flat();
    let mut out = vec![0.0; flat.len()];
    coupling_flat(system, mesh, &flat, &mut out);
    StaggeredFields::from_flat(system, mesh, out, p.time)
}

fn check_shape(system: &System, mesh: &StaggeredMesh, f: &StaggeredFields) -> Result<()> {
    let dc = system.block_dim(Block::Cell);
    let dv = system.block_dim(Block::Vertex);
    if f.cells.ncomp() != dc
        || f.vertices.ncomp() != dv
        || f.cells.values().len() != mesh.len() * dc
        || f.vertices.values().len() != mesh.len() * dv
    {
        return Err(Error::ShapeMismatch(format!(
            "fields do not match a {}x{} {} layout",
            mesh.nx, mesh.ny, system.kind
        )));
    }
    Ok(())
}

/// Block-diagonal product `M z`.
fn block_mul(system: &System, mesh: &StaggeredMesh, m: &PathHessians, z: &[f64], out: &mut [f64]) {
    let dc = system.block_dim(Block::Cell);
    let dv = system.block_dim(Block::Vertex);
    let nc = mesh.len() * dc;
    for loc in 0..mesh.len() {
        let (a, b) = (loc * dc, (loc + 1) * dc);
        linalg::mat_vec(
            &m.cells[loc * dc * dc..(loc + 1) * dc * dc],
            dc,
            &z[a..b],
            &mut out[a..b],
        );
        let (a, b) = (nc + loc * dv, nc + (loc + 1) * dv);
        linalg::mat_vec(
            &m.vertices[loc * dv * dv..(loc + 1) * dv * dv],
            dv,
            &z[a..b],
            &mut out[a..b],
        );
    }
}

/// The per-iteration linear operator `z ↦ z + Δt/2 · G(M z)`.
///
/// This is the dual-variable operator `M⁻¹ y + Δt/2 · G y` evaluated at
/// `y = M z`, so no inverse Hessian is ever formed.
pub fn apply_system_operator(
    system: &System,
    mesh: &StaggeredMesh,
    m: &PathHessians,
    z: &StaggeredFields,
    dt: f64,
) -> Result<StaggeredFields> {
    check_shape(system, mesh, z)?;
    let dc = system.block_dim(Block::Cell);
    let dv = system.block_dim(Block::Vertex);
    if m.cells.len() != mesh.len() * dc * dc || m.vertices.len() != mesh.len() * dv * dv {
        return Err(Error::ShapeMismatch("path Hessian storage".into()));
    }
    let zf = z.to_flat();
    let mut out = vec![0.0; zf.len()];
    let mut mz = vec![0.0; zf.len()];
    let mut g = vec![0.0; zf.len()];
    block_mul(system, mesh, m, &zf, &mut mz);
    coupling_flat(system, mesh, &mz, &mut g);
    for ((o, zi), gi) in out.iter_mut().zip(&zf).zip(&g) {
        *o = zi + 0.5 * dt * gi;
    }
    StaggeredFields::from_flat(system, mesh, out, z.time)
}

/// The staggered semi-implicit solver for one system on one mesh.
#[derive(Debug, Clone)]
pub struct SimmSolver {
    pub system: System,
    pub mesh: StaggeredMesh,
    pub quad: PathQuadrature,
    pub config: PicardConfig,
}

struct Workspace {
    ptilde: Vec<f64>,
    m: PathHessians,
}

impl SimmSolver {
    pub fn new(system: System, mesh: StaggeredMesh, quad: PathQuadrature, config: PicardConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            system,
            mesh,
            quad,
            config,
        })
    }

    fn dims(&self) -> (usize, usize, usize) {
        let dc = self.system.block_dim(Block::Cell);
        let dv = self.system.block_dim(Block::Vertex);
        (dc, dv, self.mesh.len() * dc)
    }

    /// Path averages between two flat states, with a positive-definiteness
    /// check on every `M` block.
    fn path(&self, q_old: &[f64], q_new: &[f64], ws: &mut Workspace) -> Result<()> {
        let (dc, dv, nc) = self.dims();
        for loc in 0..self.mesh.len() {
            for (block, d, base, mstore) in [
                (Block::Cell, dc, loc * dc, &mut ws.m.cells),
                (Block::Vertex, dv, nc + loc * dv, &mut ws.m.vertices),
            ] {
                let mblk = &mut mstore[loc * d * d..(loc + 1) * d * d];
                block_path(
                    &self.system,
                    block,
                    &q_old[base..base + d],
                    &q_new[base..base + d],
                    &self.quad,
                    &mut ws.ptilde[base..base + d],
                    mblk,
                )?;
                if !linalg::is_positive_definite(mblk, d) {
                    return Err(Error::IndefiniteHessian(format!(
                        "path-averaged Hessian at {} {loc}",
                        if block == Block::Cell { "cell" } else { "vertex" }
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total energy of a flat state and the sum of absolute local energies.
    fn energy_flat(&self, q: &[f64]) -> Result<(f64, f64)> {
        let (dc, dv, nc) = self.dims();
        let vol_c = self.mesh.cell_volume();
        let vol_p = self.mesh.dual_volume();
        let (mut ec, mut ep, mut abs) = (0.0, 0.0, 0.0);
        for loc in 0..self.mesh.len() {
            let e = self.system.block_energy(Block::Cell, &q[loc * dc..(loc + 1) * dc])?;
            ec += vol_c * e;
            abs += vol_c * e.abs();
        }
        for loc in 0..self.mesh.len() {
            let e = self
                .system
                .block_energy(Block::Vertex, &q[nc + loc * dv..nc + (loc + 1) * dv])?;
            ep += vol_p * e;
            abs += vol_p * e.abs();
        }
        Ok((ec + ep, abs))
    }

    /// One time step of size `dt`.
    pub fn step(&self, state: &StaggeredFields, dt: f64) -> Result<(StaggeredFields, StepStats)> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        check_shape(&self.system, &self.mesh, state)?;
        let (dc, dv, _) = self.dims();
        let npts = self.mesh.len();
        let qn = state.to_flat();
        let n = qn.len();
        let mut ws = Workspace {
            ptilde: vec![0.0; n],
            m: PathHessians {
                cells: vec![0.0; npts * dc * dc],
                vertices: vec![0.0; npts * dv * dv],
            },
        };
        let mut q = qn.clone();
        let (mut e_prev, _) = self.energy_flat(&qn)?;
        let mut g = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let mut z = vec![0.0; n];
        let mut mz = vec![0.0; n];
        let mut gm = vec![0.0; n];
        let mut stats = StepStats::default();
        let mut prev_inc = f64::INFINITY;
        let mut last_change = f64::INFINITY;
        let half_dt = 0.5 * dt;

        for it in 1..=self.config.max_iters {
            self.path(&qn, &q, &mut ws)?;
            coupling_flat(&self.system, &self.mesh, &ws.ptilde, &mut g);
            for k in 0..n {
                rhs[k] = -(q[k] - qn[k] + dt * g[k]);
            }
            z.iter_mut().for_each(|x| *x = 0.0);
            let (sys, mesh, m) = (&self.system, &self.mesh, &ws.m);
            let ks = gmres(
                |v, out| {
                    block_mul(sys, mesh, m, v, &mut mz);
                    coupling_flat(sys, mesh, &mz, &mut gm);
                    for k in 0..v.len() {
                        out[k] = v[k] + half_dt * gm[k];
                    }
                },
                &rhs,
                &mut z,
                &self.config.krylov,
            )?;
            stats.krylov_iters += ks.iters;
            stats.krylov_residual = ks.rel_residual;

            // q^{m+1} = q^n − Δt G(p̃ + ½ M z)
            block_mul(&self.system, &self.mesh, &ws.m, &z, &mut mz);
            for (m, p) in mz.iter_mut().zip(&ws.ptilde) {
                *m = p + 0.5 * *m;
            }
            coupling_flat(&self.system, &self.mesh, &mz, &mut g);
            let mut inc: f64 = 0.0;
            let mut span: f64 = 0.0;
            for k in 0..n {
                let qk = qn[k] - dt * g[k];
                inc = inc.max((qk - q[k]).abs());
                span = span.max((qk - qn[k]).abs());
                q[k] = qk;
            }
            let (e_new, e_abs) = self.energy_flat(&q)?;
            last_change = (e_new - e_prev).abs();
            e_prev = e_new;
            stats.picard_iters = it;

            let energy_ok = last_change < self.config.tol.max(8.0 * f64::EPSILON * e_abs);
            let increment_ok = inc <= self.config.increment_tol * span || inc >= prev_inc;
            prev_inc = inc;
            if energy_ok && increment_ok {
                self.final_residuals(&qn, &q, &mut ws, &mut stats)?;
                let next = StaggeredFields::from_flat(&self.system, &self.mesh, q, state.time + dt)?;
                return Ok((next, stats));
            }
        }
        Err(Error::PicardNotConverged {
            iters: self.config.max_iters,
            last_change,
        })
    }

    /// Roe and chain-rule residuals of the accepted step.
    fn final_residuals(&self, qn: &[f64], q: &[f64], ws: &mut Workspace, stats: &mut StepStats) -> Result<()> {
        self.path(qn, q, ws)?;
        let (dc, dv, nc) = self.dims();
        let mut p0 = [0.0; MAX_DIM];
        let mut p1 = [0.0; MAX_DIM];
        let mut mdq = [0.0; MAX_DIM];
        let (mut roe, mut pscale, mut chain, mut escale): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
        for loc in 0..self.mesh.len() {
            for (block, d, base, mstore) in [
                (Block::Cell, dc, loc * dc, &ws.m.cells),
                (Block::Vertex, dv, nc + loc * dv, &ws.m.vertices),
            ] {
                let (a, b) = (&qn[base..base + d], &q[base..base + d]);
                self.system.block_dual(block, a, &mut p0)?;
                self.system.block_dual(block, b, &mut p1)?;
                let dq: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
                linalg::mat_vec(&mstore[loc * d * d..(loc + 1) * d * d], d, &dq, &mut mdq);
                for k in 0..d {
                    roe = roe.max((mdq[k] - (p1[k] - p0[k])).abs());
                    pscale = pscale.max(p0[k].abs()).max(p1[k].abs());
                }
                let e0 = self.system.block_energy(block, a)?;
                let e1 = self.system.block_energy(block, b)?;
                let pt = &ws.ptilde[base..base + d];
                chain = chain.max((linalg::dot(pt, &dq) - (e1 - e0)).abs());
                escale = escale.max(e0.abs()).max(e1.abs());
            }
        }
        stats.roe_residual = if pscale > 0.0 { roe / pscale } else { 0.0 };
        stats.chain_rule_residual = if escale > 0.0 { chain / escale } else { 0.0 };
        Ok(())
    }

    /// Bound on the wave speed over the staggered state, built from the
    /// largest Gershgorin radius of each block's Hessian.
    pub fn max_signal_speed(&self, state: &StaggeredFields) -> Result<f64> {
        let mut radius = [0.0f64; 2];
        let mut h = [0.0; MAX_BLOCK_DIM * MAX_BLOCK_DIM];
        for loc in 0..self.mesh.len() {
            for (r, block, q) in [
                (0, Block::Cell, state.cells.at(loc)),
                (1, Block::Vertex, state.vertices.at(loc)),
            ] {
                let d = q.len();
                self.system.block_hessian(block, q, &mut h)?;
                radius[r] = radius[r].max(linalg::gershgorin_radius(&h[..d * d], d));
            }
        }
        Ok((radius[0] * radius[1]).sqrt())
    }
}

/// Discrete involution errors of a staggered state.
///
/// Maxwell and GLM report `max_p |∇_p^c·B_c|` and `max_c |∇_c^p·D_p|`;
/// acoustics reports `max_p ‖∇_p^c×v_c‖∞`. For GLM these are diagnostics
/// only since the system carries no such constraint.
pub fn involution_report(system: &System, mesh: &StaggeredMesh, state: &StaggeredFields) -> Result<InvolutionReport> {
    check_shape(system, mesh, state)?;
    let dc = system.block_dim(Block::Cell);
    let dv = system.block_dim(Block::Vertex);
    let to_c = Stencil::to_cells(mesh);
    let to_v = Stencil::to_vertices(mesh);
    let n = mesh.len();
    Ok(match system.kind {
        SystemKind::Acoustics => {
            let mut curl = vec![0.0; 3 * n];
            to_v.add_curl(state.cells.values(), dc, 0, &mut curl, 3, 0, 1.0);
            InvolutionReport {
                curl_v_max: Some(linalg::max_abs(&curl)),
                ..Default::default()
            }
        }
        SystemKind::Maxwell | SystemKind::MaxwellGlm => {
            let mut div_b = vec![0.0; n];
            let mut div_d = vec![0.0; n];
            to_v.add_div(state.cells.values(), dc, 0, &mut div_b, 1, 0, 1.0);
            to_c.add_div(state.vertices.values(), dv, 0, &mut div_d, 1, 0, 1.0);
            InvolutionReport {
                div_b_max: Some(linalg::max_abs(&div_b)),
                div_d_max: Some(linalg::max_abs(&div_d)),
                curl_v_max: None,
            }
        }
    })
}
