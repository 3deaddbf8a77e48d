//! Total energy, involution errors and the diagnostic time series.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::grid::StaggeredMesh;
use crate::htc::CollocatedState;
use crate::simm::{StaggeredFields, StepStats};
use crate::systems::{Block, System};

/// Column header of `series.csv`.
pub const CSV_HEADER: &str =
    "time,total_energy,rel_energy_error,div_B_max,div_D_max,curl_v_max,picard_iters,krylov_iters";

/// Involution maxima; `None` where the system has no such field.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InvolutionReport {
    pub div_b_max: Option<f64>,
    pub div_d_max: Option<f64>,
    pub curl_v_max: Option<f64>,
}

/// Borrowed state of either scheme.
#[derive(Debug, Clone, Copy)]
pub enum FieldsRef<'a> {
    Collocated(&'a CollocatedState),
    Staggered(&'a StaggeredFields),
}

/// `Σ_ℓ |Ω^ℓ| E(q_ℓ)` in storage order.
pub fn collocated_energy(system: &System, mesh: &StaggeredMesh, state: &CollocatedState) -> Result<f64> {
    let vol = mesh.cell_volume();
    let mut e = 0.0;
    for loc in 0..mesh.len() {
        e += vol * system.energy(state.q.at(loc))?;
    }
    Ok(e)
}

/// `Σ_c |Ω_c| E_cell(q_c) + Σ_p |Ω_p| E_vertex(q_p)`, cells first, each in
/// storage order.
pub fn staggered_energy(system: &System, mesh: &StaggeredMesh, fields: &StaggeredFields) -> Result<f64> {
    let (mut ec, mut ep) = (0.0, 0.0);
    for loc in 0..mesh.len() {
        ec += mesh.cell_volume() * system.block_energy(Block::Cell, fields.cells.at(loc))?;
    }
    for loc in 0..mesh.len() {
        ep += mesh.dual_volume() * system.block_energy(Block::Vertex, fields.vertices.at(loc))?;
    }
    Ok(ec + ep)
}

pub fn total_energy(system: &System, mesh: &StaggeredMesh, fields: FieldsRef<'_>) -> Result<f64> {
    match fields {
        FieldsRef::Collocated(s) => collocated_energy(system, mesh, s),
        FieldsRef::Staggered(s) => staggered_energy(system, mesh, s),
    }
}

/// One row of the diagnostic series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticRecord {
    pub time: f64,
    pub total_energy: f64,
    pub rel_energy_error: f64,
    pub div_b_max: Option<f64>,
    pub div_d_max: Option<f64>,
    pub curl_v_max: Option<f64>,
    pub picard_iters: Option<usize>,
    pub krylov_iters: Option<usize>,
}

/// Append-only diagnostic series with a fixed reference energy `E⁰`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Series {
    records: Vec<DiagnosticRecord>,
    e0: Option<f64>,
}

/// `Eⁿ/E⁰ − 1`, or `Eⁿ` itself when `E⁰ = 0`.
pub fn relative_energy_error(e: f64, e0: f64) -> f64 {
    if e0 == 0.0 {
        e
    } else {
        e / e0 - 1.0
    }
}

impl Series {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[DiagnosticRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn initial_energy(&self) -> Option<f64> {
        self.e0
    }

    /// Builds a record from raw quantities and appends it. The first record
    /// fixes `E⁰`, so its relative error is exactly zero.
    pub fn record(
        &mut self,
        time: f64,
        total_energy: f64,
        involutions: InvolutionReport,
        solver: Option<&StepStats>,
    ) -> Result<&DiagnosticRecord> {
        let e0 = *self.e0.get_or_insert(total_energy);
        let rec = DiagnosticRecord {
            time,
            total_energy,
            rel_energy_error: if self.records.is_empty() {
                0.0
            } else {
                relative_energy_error(total_energy, e0)
            },
            div_b_max: involutions.div_b_max,
            div_d_max: involutions.div_d_max,
            curl_v_max: involutions.curl_v_max,
            picard_iters: solver.map(|s| s.picard_iters),
            krylov_iters: solver.map(|s| s.krylov_iters),
        };
        self.push(rec)?;
        Ok(self.records.last().expect("just pushed"))
    }

    /// Appends a prepared record; times must increase strictly.
    pub fn push(&mut self, rec: DiagnosticRecord) -> Result<()> {
        if let Some(last) = self.records.last() {
            if !(rec.time > last.time) {
                return Err(Error::Series(format!(
                    "time {} does not increase past {}",
                    rec.time, last.time
                )));
            }
        }
        if self.e0.is_none() {
            self.e0 = Some(rec.total_energy);
        }
        self.records.push(rec);
        Ok(())
    }

    /// Max of `|rel_energy_error|` over all records.
    pub fn max_rel_energy_error(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.rel_energy_error.abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.records.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            write_float(&mut s, Some(r.time));
            for v in [
                Some(r.total_energy),
                Some(r.rel_energy_error),
                r.div_b_max,
                r.div_d_max,
                r.curl_v_max,
            ] {
                s.push(',');
                write_float(&mut s, v);
            }
            for v in [r.picard_iters, r.krylov_iters] {
                s.push(',');
                if let Some(v) = v {
                    let _ = write!(s, "{v}");
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end() == CSV_HEADER => {}
            Some(h) => return Err(Error::Series(format!("unexpected header `{h}`"))),
            None => return Err(Error::Series("empty file".into())),
        }
        let mut series = Series::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 8 {
                return Err(Error::Series(format!(
                    "row {} has {} columns, expected 8",
                    n + 2,
                    cols.len()
                )));
            }
            let float = |i: usize| -> Result<Option<f64>> {
                let c = cols[i].trim();
                if c.is_empty() {
                    return Ok(None);
                }
                c.parse::<f64>()
                    .map(Some)
                    .map_err(|e| Error::Series(format!("row {} column {}: {e}", n + 2, i + 1)))
            };
            let int = |i: usize| -> Result<Option<usize>> {
                let c = cols[i].trim();
                if c.is_empty() {
                    return Ok(None);
                }
                c.parse::<usize>()
                    .map(Some)
                    .map_err(|e| Error::Series(format!("row {} column {}: {e}", n + 2, i + 1)))
            };
            let required = |i: usize| -> Result<f64> {
                float(i)?.ok_or_else(|| Error::Series(format!("row {} column {} is empty", n + 2, i + 1)))
            };
            series.push(DiagnosticRecord {
                time: required(0)?,
                total_energy: required(1)?,
                rel_energy_error: required(2)?,
                div_b_max: float(3)?,
                div_d_max: float(4)?,
                curl_v_max: float(5)?,
                picard_iters: int(6)?,
                krylov_iters: int(7)?,
            })?;
        }
        Ok(series)
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
fn write_float(s: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        let _ = write!(s, "{v:.16e}");
    }
}
