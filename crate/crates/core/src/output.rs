//! Legacy ASCII VTK snapshots on the structured vertex lattice.
//!
//! The file describes `(nx+1) × (ny+1)` points spanning the domain. Cell data
//! is written as `CELL_DATA`; vertex data as `POINT_DATA`, with the periodic
//! image repeated on the last row and column.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::grid::StaggeredMesh;
use crate::htc::CollocatedState;
use crate::simm::StaggeredFields;
use crate::systems::{Block, System};

/// Borrowed snapshot of either scheme's state.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Collocated(&'a CollocatedState),
    Staggered(&'a StaggeredFields),
}

impl StateRef<'_> {
    pub fn time(&self) -> f64 {
        match self {
            StateRef::Collocated(s) => s.time,
            StateRef::Staggered(s) => s.time,
        }
    }
}

/// File name used for a snapshot at time `t`.
pub fn snapshot_name(t: f64) -> String {
    format!("snapshot_{t:.6}.vtk")
}

fn scalars(out: &mut String, name: &str, values: impl Iterator<Item = f64>) {
    let _ = writeln!(out, "SCALARS {name} double 1");
    out.push_str("LOOKUP_TABLE default\n");
    for v in values {
        let _ = writeln!(out, "{v:.16e}");
    }
}

/// Renders a snapshot as a legacy VTK document.
pub fn render_vtk(system: &System, mesh: &StaggeredMesh, state: StateRef<'_>) -> String {
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    let scheme = match state {
        StateRef::Collocated(_) => "htc",
        StateRef::Staggered(_) => "simm",
    };
    let _ = writeln!(out, "{} {} t={:.16e}", system.kind, scheme, state.time());
    out.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(out, "DIMENSIONS {} {} 1", mesh.nx + 1, mesh.ny + 1);
    let _ = writeln!(out, "ORIGIN {:.16e} {:.16e} 0", mesh.x0, mesh.y0);
    let _ = writeln!(out, "SPACING {:.16e} {:.16e} 1", mesh.dx, mesh.dy);
    let labels = system.kind.state_labels();
    let n = mesh.len();
    let _ = writeln!(out, "CELL_DATA {n}");
    match state {
        StateRef::Collocated(s) => {
            for (k, name) in labels.iter().enumerate() {
                scalars(&mut out, name, (0..n).map(|c| s.q.at(c)[k]));
            }
        }
        StateRef::Staggered(s) => {
            for (k, &idx) in system.block_indices(Block::Cell).iter().enumerate() {
                scalars(&mut out, labels[idx], (0..n).map(|c| s.cells.at(c)[k]));
            }
            let _ = writeln!(out, "POINT_DATA {}", (mesh.nx + 1) * (mesh.ny + 1));
            for (k, &idx) in system.block_indices(Block::Vertex).iter().enumerate() {
                let values = (0..=mesh.ny)
                    .flat_map(|j| (0..=mesh.nx).map(move |i| s.vertices.at(mesh.index(i % mesh.nx, j % mesh.ny))[k]));
                scalars(&mut out, labels[idx], values);
            }
        }
    }
    out
}

/// Writes `snapshot_<t>.vtk` into `dir` and returns its path.
pub fn write_snapshot(dir: &Path, system: &System, mesh: &StaggeredMesh, state: StateRef<'_>) -> Result<PathBuf> {
    let path = dir.join(snapshot_name(state.time()));
    std::fs::write(&path, render_vtk(system, mesh, state))?;
    Ok(path)
}
