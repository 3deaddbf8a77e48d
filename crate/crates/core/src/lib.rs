//! Structure-preserving solvers for symmetric hyperbolic thermodynamically
//! compatible (SHTC) systems on periodic 2D Cartesian meshes.

// Input checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod htc;
pub mod krylov;
mod linalg;
pub mod output;
pub mod presets;
pub mod quadrature;
pub mod run;
pub mod simm;
pub mod systems;
pub mod verify;

pub use config::{parse_config, RunConfig, SchemeKind, TimeStep};
pub use diagnostics::{DiagnosticRecord, InvolutionReport, Series};
pub use error::{Error, Result};
pub use grid::{CellField, Cells, Field, StaggeredMesh, VertexField, Vertices};
pub use htc::{ButcherTableau, CollocatedState};
pub use presets::{InitialParams, Preset};
pub use quadrature::PathQuadrature;
pub use run::{run, simulate, RunOutput, RunSummary, Simulation, State};
pub use simm::{PicardConfig, SimmSolver, StaggeredFields, StepStats};
pub use systems::{Axis, Block, EnergyParams, HMatrix, Hessian, System, SystemKind};
