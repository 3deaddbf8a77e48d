//! The three nonlinear SHTC systems behind one model contract.
//!
//! Every system is a conservation law `∂q/∂t + ∂f_k(q)/∂x_k = 0` with an
//! extra conservation law for the total energy density `E(q)`. The dual
//! variables (main field) are `p = ∂E/∂q`, the fluxes are linear in the
//! dual variables, `f_k(q) = H_k p`, with constant symmetric integer
//! matrices `H_k`, and the energy flux is `F_k = ½ p·H_k p`.
//!
//! State layouts follow the row ordering of `H_k`:
//!
//! | system       | state `q`              | dual `p`               |
//! |--------------|------------------------|------------------------|
//! | `Acoustics`  | `(v1, v2, v3, ρ)`      | `(u1, u2, u3, s)`      |
//! | `Maxwell`    | `(B1..B3, D1..D3)`     | `(H1..H3, E1..E3)`     |
//! | `MaxwellGlm` | `(B1..B3, φ, D1..D3, ψ)` | `(H1..H3, ξ, E1..E3, η)` |
//!
//! All energies are separable into a part that lives at primal cell centres
//! and a part that lives at primal vertices on the staggered mesh (see
//! [`Block`]). Only the in-plane directions `k = 1, 2` enter the fluxes;
//! fields keep three components.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Largest state dimension among the shipped systems.
pub const MAX_DIM: usize = 8;
/// Largest per-location block dimension.
pub const MAX_BLOCK_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Acoustics,
    Maxwell,
    MaxwellGlm,
}

impl SystemKind {
    pub const ALL: [SystemKind; 3] = [SystemKind::Acoustics, SystemKind::Maxwell, SystemKind::MaxwellGlm];

    pub fn dim(self) -> usize {
        match self {
            SystemKind::Acoustics => 4,
            SystemKind::Maxwell => 6,
            SystemKind::MaxwellGlm => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::Acoustics => "acoustics",
            SystemKind::Maxwell => "maxwell",
            SystemKind::MaxwellGlm => "maxwell_glm",
        }
    }

    /// Component labels in state order.
    pub fn state_labels(self) -> &'static [&'static str] {
        match self {
            SystemKind::Acoustics => &["v1", "v2", "v3", "rho"],
            SystemKind::Maxwell => &["B1", "B2", "B3", "D1", "D2", "D3"],
            SystemKind::MaxwellGlm => &["B1", "B2", "B3", "phi", "D1", "D2", "D3", "psi"],
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acoustics" => Ok(SystemKind::Acoustics),
            "maxwell" => Ok(SystemKind::Maxwell),
            "maxwell_glm" => Ok(SystemKind::MaxwellGlm),
            other => Err(Error::Config(format!("unknown system '{other}'"))),
        }
    }
}

/// Coefficients of the shipped energy potentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    /// Exponent of the acoustic potential `ρ^{γ+1}/(γ(γ+1))`.
    pub gamma: f64,
    /// Coefficient of the cubic Maxwell terms `B1|B|² + D1|D|²`.
    pub maxwell_eps: f64,
    /// Linear coefficient of the GLM relations `H = μ0 B + …`.
    pub mu0: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            gamma: 1.4,
            maxwell_eps: 0.01,
            mu0: 1.0,
        }
    }
}

impl EnergyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.mu0 > 0.0) || !self.mu0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mu0 must be positive, got {}",
                self.mu0
            )));
        }
        if !self.maxwell_eps.is_finite() {
            return Err(Error::InvalidParameter("maxwell_eps must be finite".into()));
        }
        Ok(())
    }
}

/// In-plane coordinate direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];

    /// Zero-based component index.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

impl TryFrom<usize> for Axis {
    type Error = Error;

    /// Converts the one-based direction `k` used in the equations.
    fn try_from(k: usize) -> Result<Self> {
        match k {
            1 => Ok(Axis::X),
            2 => Ok(Axis::Y),
            other => Err(Error::InvalidDirection(other)),
        }
    }
}

/// Location of a group of unknowns on the staggered mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    /// Primal cell centres: v, B, and (for GLM) ψ.
    Cell,
    /// Primal vertices: ρ, D, and (for GLM) φ.
    Vertex,
}

/// A constant flux matrix `H_k` with entries in {-1, 0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HMatrix {
    dim: usize,
    entries: Vec<i8>,
}

impl HMatrix {
    fn from_rows<const N: usize>(rows: &[[i8; N]; N]) -> Self {
        Self {
            dim: N,
            entries: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.dim + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, p: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| f64::from(self.get(i, j)) * p[j]).sum())
            .collect()
    }
}

/// Energy Hessian `E_qq` at a state, with a positive-definiteness flag.
#[derive(Debug, Clone, PartialEq)]
pub struct Hessian {
    pub dim: usize,
    /// Row-major entries.
    pub entries: Vec<f64>,
    pub positive_definite: bool,
}

impl Hessian {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }
}

/// One SHTC system with its energy coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct System {
    pub kind: SystemKind,
    pub params: EnergyParams,
}

const ACOUSTIC_CELL: [usize; 3] = [0, 1, 2];
const ACOUSTIC_VERTEX: [usize; 1] = [3];
const MAXWELL_CELL: [usize; 3] = [0, 1, 2];
const MAXWELL_VERTEX: [usize; 3] = [3, 4, 5];
// GLM: (B, ψ) at cells and (D, φ) at vertices, so that ξ pairs with the
// cell-to-vertex divergence of H and η with the vertex-to-cell divergence of E.
const GLM_CELL: [usize; 4] = [0, 1, 2, 7];
const GLM_VERTEX: [usize; 4] = [4, 5, 6, 3];

impl System {
    pub fn new(kind: SystemKind, params: EnergyParams) -> Result<Self> {
        params.validate()?;
        Ok(Self { kind, params })
    }

    pub fn with_defaults(kind: SystemKind) -> Self {
        Self {
            kind,
            params: EnergyParams::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// Indices of the full state vector carried by `block`, in block order.
    pub fn block_indices(&self, block: Block) -> &'static [usize] {
        match (self.kind, block) {
            (SystemKind::Acoustics, Block::Cell) => &ACOUSTIC_CELL,
            (SystemKind::Acoustics, Block::Vertex) => &ACOUSTIC_VERTEX,
            (SystemKind::Maxwell, Block::Cell) => &MAXWELL_CELL,
            (SystemKind::Maxwell, Block::Vertex) => &MAXWELL_VERTEX,
            (SystemKind::MaxwellGlm, Block::Cell) => &GLM_CELL,
            (SystemKind::MaxwellGlm, Block::Vertex) => &GLM_VERTEX,
        }
    }

    pub fn block_dim(&self, block: Block) -> usize {
        self.block_indices(block).len()
    }

    fn check_block(&self, block: Block, q: &[f64]) -> Result<()> {
        let expected = self.block_dim(block);
        if q.len() != expected {
            return Err(Error::StateDimension { expected, got: q.len() });
        }
        if self.kind == SystemKind::Acoustics && block == Block::Vertex {
            let rho = q[0];
            if !(rho > 0.0) || !rho.is_finite() {
                return Err(Error::Inadmissible(format!(
                    "acoustic density must be positive, got {rho}"
                )));
            }
        }
        Ok(())
    }

    /// Energy carried by one block.
    pub fn block_energy(&self, block: Block, q: &[f64]) -> Result<f64> {
        self.check_block(block, q)?;
        let p = &self.params;
        Ok(match (self.kind, block) {
            (SystemKind::Acoustics, Block::Cell) => 0.5 * sq3(q),
            (SystemKind::Acoustics, Block::Vertex) => q[0].powf(p.gamma + 1.0) / (p.gamma * (p.gamma + 1.0)),
            (SystemKind::Maxwell, _) => {
                let s = sq3(q);
                s + p.maxwell_eps * q[0] * s
            }
            (SystemKind::MaxwellGlm, _) => {
                let t = q[0] * q[0] + q[2] * q[2];
                0.5 * p.mu0 * sq3(q) + 0.125 * t * t + 0.5 * q[3] * q[3]
            }
        })
    }

    /// Gradient of [`Self::block_energy`], written into `out`.
    pub fn block_dual(&self, block: Block, q: &[f64], out: &mut [f64]) -> Result<()> {
        self.check_block(block, q)?;
        let p = &self.params;
        match (self.kind, block) {
            (SystemKind::Acoustics, Block::Cell) => out[..3].copy_from_slice(&q[..3]),
            (SystemKind::Acoustics, Block::Vertex) => out[0] = q[0].powf(p.gamma) / p.gamma,
            (SystemKind::Maxwell, _) => {
                let e = p.maxwell_eps;
                let s = sq3(q);
                out[0] = 2.0 * q[0] + e * (s + 2.0 * q[0] * q[0]);
                out[1] = 2.0 * q[1] + 2.0 * e * q[0] * q[1];
                out[2] = 2.0 * q[2] + 2.0 * e * q[0] * q[2];
            }
            (SystemKind::MaxwellGlm, _) => {
                let half_t = 0.5 * (q[0] * q[0] + q[2] * q[2]);
                out[0] = p.mu0 * q[0] + half_t * q[0];
                out[1] = p.mu0 * q[1];
                out[2] = p.mu0 * q[2] + half_t * q[2];
                out[3] = q[3];
            }
        }
        Ok(())
    }

    /// Hessian of [`Self::block_energy`], row-major into `out`.
    pub fn block_hessian(&self, block: Block, q: &[f64], out: &mut [f64]) -> Result<()> {
        self.check_block(block, q)?;
        let n = self.block_dim(block);
        out[..n * n].iter_mut().for_each(|x| *x = 0.0);
        let p = &self.params;
        match (self.kind, block) {
            (SystemKind::Acoustics, Block::Cell) => {
                for i in 0..3 {
                    out[i * 3 + i] = 1.0;
                }
            }
            (SystemKind::Acoustics, Block::Vertex) => out[0] = q[0].powf(p.gamma - 1.0),
            (SystemKind::Maxwell, _) => {
                let e = p.maxwell_eps;
                out[0] = 2.0 + 6.0 * e * q[0];
                out[1] = 2.0 * e * q[1];
                out[2] = 2.0 * e * q[2];
                out[3] = out[1];
                out[4] = 2.0 + 2.0 * e * q[0];
                out[6] = out[2];
                out[8] = 2.0 + 2.0 * e * q[0];
            }
            (SystemKind::MaxwellGlm, _) => {
                let half_t = 0.5 * (q[0] * q[0] + q[2] * q[2]);
                out[0] = p.mu0 + half_t + q[0] * q[0];
                out[2] = q[0] * q[2];
                out[5] = p.mu0;
                out[8] = out[2];
                out[10] = p.mu0 + half_t + q[2] * q[2];
                out[15] = 1.0;
            }
        }
        Ok(())
    }

    fn check_state(&self, q: &[f64]) -> Result<()> {
        if q.len() != self.dim() {
            return Err(Error::StateDimension {
                expected: self.dim(),
                got: q.len(),
            });
        }
        Ok(())
    }

    fn gather(&self, block: Block, q: &[f64]) -> ([f64; MAX_BLOCK_DIM], usize) {
        let idx = self.block_indices(block);
        let mut buf = [0.0; MAX_BLOCK_DIM];
        for (b, &i) in buf.iter_mut().zip(idx) {
            *b = q[i];
        }
        (buf, idx.len())
    }

    /// Total energy density `E(q)`.
    pub fn energy(&self, q: &[f64]) -> Result<f64> {
        self.check_state(q)?;
        let (c, nc) = self.gather(Block::Cell, q);
        let (v, nv) = self.gather(Block::Vertex, q);
        Ok(self.block_energy(Block::Cell, &c[..nc])? + self.block_energy(Block::Vertex, &v[..nv])?)
    }

    /// Dual variables `p = ∂E/∂q`.
    pub fn dual(&self, q: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.dual_into(q, &mut out)?;
        Ok(out)
    }

    pub fn dual_into(&self, q: &[f64], out: &mut [f64]) -> Result<()> {
        self.check_state(q)?;
        for block in [Block::Cell, Block::Vertex] {
            let (b, n) = self.gather(block, q);
            let mut d = [0.0; MAX_BLOCK_DIM];
            self.block_dual(block, &b[..n], &mut d)?;
            for (k, &i) in self.block_indices(block).iter().enumerate() {
                out[i] = d[k];
            }
        }
        Ok(())
    }

    /// Energy Hessian `E_qq(q)`. Cell/vertex cross blocks are zero for all
    /// shipped energies.
    pub fn hessian(&self, q: &[f64]) -> Result<Hessian> {
        self.check_state(q)?;
        let dim = self.dim();
        let mut entries = vec![0.0; dim * dim];
        for block in [Block::Cell, Block::Vertex] {
            let (b, n) = self.gather(block, q);
            let mut h = [0.0; MAX_BLOCK_DIM * MAX_BLOCK_DIM];
            self.block_hessian(block, &b[..n], &mut h)?;
            let idx = self.block_indices(block);
            for r in 0..n {
                for c in 0..n {
                    entries[idx[r] * dim + idx[c]] = h[r * n + c];
                }
            }
        }
        let positive_definite = linalg::is_positive_definite(&entries, dim);
        Ok(Hessian {
            dim,
            entries,
            positive_definite,
        })
    }

    /// The constant matrix `H_k`, `k ∈ {1, 2, 3}`.
    pub fn h_matrix(&self, k: usize) -> Result<HMatrix> {
        if !(1..=3).contains(&k) {
            return Err(Error::InvalidDirection(k));
        }
        Ok(match self.kind {
            SystemKind::Acoustics => HMatrix::from_rows(&ACOUSTIC_H[k - 1]),
            SystemKind::Maxwell => HMatrix::from_rows(&MAXWELL_H[k - 1]),
            SystemKind::MaxwellGlm => HMatrix::from_rows(&GLM_H[k - 1]),
        })
    }

    /// Physical flux `f_k(q)` assembled from the dual variables.
    pub fn flux(&self, q: &[f64], axis: Axis) -> Result<Vec<f64>> {
        let p = self.dual(q)?;
        let mut out = vec![0.0; self.dim()];
        self.flux_from_dual(&p, axis, &mut out);
        Ok(out)
    }

    /// `f_k` written directly from a dual vector.
    pub fn flux_from_dual(&self, p: &[f64], axis: Axis, out: &mut [f64]) {
        let k = axis.index();
        match self.kind {
            SystemKind::Acoustics => {
                out[..3].iter_mut().for_each(|x| *x = 0.0);
                out[k] = p[3];
                out[3] = p[k];
            }
            SystemKind::Maxwell => {
                let (h, e) = (&p[0..3], &p[3..6]);
                let ec = cross_axis(axis, e);
                let hc = cross_axis(axis, h);
                out[..3].copy_from_slice(&ec);
                for i in 0..3 {
                    out[3 + i] = -hc[i];
                }
            }
            SystemKind::MaxwellGlm => {
                let (h, xi, e, eta) = (&p[0..3], p[3], &p[4..7], p[7]);
                let ec = cross_axis(axis, e);
                let hc = cross_axis(axis, h);
                out[..3].copy_from_slice(&ec);
                out[k] += xi;
                out[3] = h[k];
                for i in 0..3 {
                    out[4 + i] = -hc[i];
                }
                out[4 + k] += eta;
                out[7] = e[k];
            }
        }
    }

    /// Energy flux `F_k(q)`.
    pub fn energy_flux(&self, q: &[f64], axis: Axis) -> Result<f64> {
        let p = self.dual(q)?;
        Ok(self.energy_flux_from_dual(&p, axis))
    }

    pub fn energy_flux_from_dual(&self, p: &[f64], axis: Axis) -> f64 {
        let k = axis.index();
        match self.kind {
            SystemKind::Acoustics => p[k] * p[3],
            SystemKind::Maxwell => cross(&p[3..6], &p[0..3])[k],
            SystemKind::MaxwellGlm => {
                let (h, xi, e, eta) = (&p[0..3], p[3], &p[4..7], p[7]);
                cross(e, h)[k] + eta * e[k] + xi * h[k]
            }
        }
    }

    /// Bound on the characteristic speeds of `E_qq H_k` over both in-plane
    /// directions.
    ///
    /// `H_k` only couples cell-block to vertex-block variables and has unit
    /// spectral norm, so the eigenvalues squared are bounded by the product
    /// of the spectral radii of the two Hessian blocks. Each radius is
    /// over-estimated by its Gershgorin bound.
    pub fn max_signal_speed(&self, q: &[f64]) -> Result<f64> {
        self.check_state(q)?;
        let mut radius = [0.0; 2];
        for (r, block) in radius.iter_mut().zip([Block::Cell, Block::Vertex]) {
            let (b, n) = self.gather(block, q);
            let mut h = [0.0; MAX_BLOCK_DIM * MAX_BLOCK_DIM];
            self.block_hessian(block, &b[..n], &mut h)?;
            if !linalg::is_positive_definite(&h[..n * n], n) {
                return Err(Error::IndefiniteHessian(format!(
                    "{} block at state {:?}",
                    if block == Block::Cell { "cell" } else { "vertex" },
                    q
                )));
            }
            *r = linalg::gershgorin_radius(&h[..n * n], n);
        }
        Ok((radius[0] * radius[1]).sqrt())
    }

    /// Checks length and admissibility of a full state.
    pub fn validate_state(&self, q: &[f64]) -> Result<()> {
        self.check_state(q)?;
        let (v, nv) = self.gather(Block::Vertex, q);
        self.check_block(Block::Vertex, &v[..nv])
    }
}

fn sq3(q: &[f64]) -> f64 {
    q[0] * q[0] + q[1] * q[1] + q[2] * q[2]
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `e_k × a` for an in-plane unit vector `e_k`.
fn cross_axis(axis: Axis, a: &[f64]) -> [f64; 3] {
    match axis {
        Axis::X => [0.0, -a[2], a[1]],
        Axis::Y => [a[2], 0.0, -a[0]],
    }
}

const ACOUSTIC_H: [[[i8; 4]; 4]; 3] = [
    [[0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 1, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
];

const MAXWELL_H: [[[i8; 6]; 6]; 3] = [
    [
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, -1],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, -1, 0, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, -1, 0, 0],
        [0, 0, -1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, -1, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
    ],
];

const GLM_H: [[[i8; 8]; 8]; 3] = [
    [
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, -1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, -1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, -1, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, -1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0, 0],
    ],
    [
        [0, 0, 0, 0, 0, -1, 0, 0],
        [0, 0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, 0],
        [-1, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 1, 0],
    ],
];

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(kind: SystemKind) -> System {
        System::with_defaults(kind)
    }

    #[test]
    fn state_dimensions() {
        assert_eq!(SystemKind::Acoustics.dim(), 4);
        assert_eq!(SystemKind::Maxwell.dim(), 6);
        assert_eq!(SystemKind::MaxwellGlm.dim(), 8);
        for kind in SystemKind::ALL {
            let s = sys(kind);
            let mut all: Vec<usize> = s
                .block_indices(Block::Cell)
                .iter()
                .chain(s.block_indices(Block::Vertex))
                .copied()
                .collect();
            all.sort_unstable();
            assert_eq!(all, (0..kind.dim()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn maxwell_energy_example() {
        let e = sys(SystemKind::Maxwell)
            .energy(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
            .unwrap();
        assert!((e - 1.01).abs() < 1e-15);
    }

    #[test]
    fn acoustic_energy_vanishes_with_density() {
        let e = sys(SystemKind::Acoustics).energy(&[0.0, 0.0, 0.0, 1e-300]).unwrap();
        assert!(e.abs() < 1e-300);
    }

    #[test]
    fn glm_energy_example() {
        let q = [0.125, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0];
        let e = sys(SystemKind::MaxwellGlm).energy(&q).unwrap();
        // 4641/32768, evaluated symbolically.
        assert_eq!(e, 4641.0 / 32768.0);
    }

    #[test]
    fn acoustic_dual_example() {
        let p = sys(SystemKind::Acoustics).dual(&[0.3, 0.4, 0.0, 1.0]).unwrap();
        assert_eq!(&p[..3], &[0.3, 0.4, 0.0]);
        assert!((p[3] - 0.714285714285714).abs() < 1e-14);
    }

    #[test]
    fn glm_dual_example() {
        let q = [0.125, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0];
        let p = sys(SystemKind::MaxwellGlm).dual(&q).unwrap();
        assert_eq!(p, vec![0.1416015625, 0.0, 0.56640625, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn dual_at_origin_vanishes() {
        for kind in [SystemKind::Maxwell, SystemKind::MaxwellGlm] {
            let p = sys(kind).dual(&vec![0.0; kind.dim()]).unwrap();
            assert!(p.iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn hessian_examples() {
        let h = sys(SystemKind::Acoustics).hessian(&[0.7, -0.2, 0.1, 1.0]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(h.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
        let linear = System::new(
            SystemKind::Maxwell,
            EnergyParams {
                maxwell_eps: 0.0,
                ..Default::default()
            },
        )
        .unwrap();
        let h = linear.hessian(&[0.3, 0.1, -0.2, 0.5, 0.0, 0.4]).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(h.get(i, j), if i == j { 2.0 } else { 0.0 });
            }
        }
        let h = sys(SystemKind::MaxwellGlm).hessian(&[0.0; 8]).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(h.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
        assert!(h.positive_definite);
    }

    #[test]
    fn hessian_flags_loss_of_convexity() {
        // 2 + 6 ε B1 < 0 for B1 sufficiently negative.
        let h = sys(SystemKind::Maxwell)
            .hessian(&[-40.0, 0.0, 0.0, 0.0, 0.0, 0.0])
            .unwrap();
        assert!(!h.positive_definite);
        assert!(matches!(
            sys(SystemKind::Maxwell).max_signal_speed(&[-40.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            Err(Error::IndefiniteHessian(_))
        ));
    }

    #[test]
    fn acoustic_flux_example() {
        let f = sys(SystemKind::Acoustics).flux(&[0.3, 0.4, 0.0, 1.0], Axis::X).unwrap();
        assert!((f[0] - 1.0 / 1.4).abs() < 1e-15);
        assert_eq!(&f[1..], &[0.0, 0.0, 0.3]);
        let big_f = sys(SystemKind::Acoustics)
            .energy_flux(&[0.3, 0.4, 0.0, 1.0], Axis::X)
            .unwrap();
        assert!((big_f - 0.3 / 1.4).abs() < 1e-15);
    }

    #[test]
    fn fluxes_vanish_at_origin() {
        for kind in [SystemKind::Maxwell, SystemKind::MaxwellGlm] {
            for axis in Axis::BOTH {
                let q = vec![0.0; kind.dim()];
                assert!(sys(kind).flux(&q, axis).unwrap().iter().all(|&x| x == 0.0));
                assert_eq!(sys(kind).energy_flux(&q, axis).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn h_matrices_symmetric() {
        for kind in SystemKind::ALL {
            for k in 1..=3 {
                let h = sys(kind).h_matrix(k).unwrap();
                assert_eq!(h.dim(), kind.dim());
                assert!(h.is_symmetric(), "{kind} H_{k}");
            }
        }
        assert!(sys(SystemKind::Maxwell).h_matrix(0).is_err());
        assert!(sys(SystemKind::Maxwell).h_matrix(4).is_err());
    }

    #[test]
    fn signal_speed_examples() {
        let linear = System::new(
            SystemKind::Maxwell,
            EnergyParams {
                maxwell_eps: 0.0,
                ..Default::default()
            },
        )
        .unwrap();
        // E_qq = 2I couples B to D: speed sqrt(2 · 2).
        assert_eq!(linear.max_signal_speed(&[0.1, 0.2, 0.3, 0.0, 0.5, 0.0]).unwrap(), 2.0);
        assert_eq!(
            sys(SystemKind::Acoustics)
                .max_signal_speed(&[0.1, 0.0, 0.0, 1.0])
                .unwrap(),
            1.0
        );
        assert_eq!(sys(SystemKind::MaxwellGlm).max_signal_speed(&[0.0; 8]).unwrap(), 1.0);
    }

    #[test]
    fn invalid_inputs() {
        let s = sys(SystemKind::Acoustics);
        assert!(matches!(
            s.energy(&[0.0, 0.0, 0.0]),
            Err(Error::StateDimension { expected: 4, got: 3 })
        ));
        assert!(matches!(s.energy(&[0.0, 0.0, 0.0, 0.0]), Err(Error::Inadmissible(_))));
        assert!(matches!(s.dual(&[0.0, 0.0, 0.0, -1.0]), Err(Error::Inadmissible(_))));
        assert!(matches!(Axis::try_from(3), Err(Error::InvalidDirection(3))));
        assert!(System::new(
            SystemKind::Acoustics,
            EnergyParams {
                gamma: 0.0,
                ..Default::default()
            }
        )
        .is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in SystemKind::ALL {
            assert_eq!(kind.name().parse::<SystemKind>().unwrap(), kind);
        }
        assert!("mhd".parse::<SystemKind>().is_err());
    }
}
