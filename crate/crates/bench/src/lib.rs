//! Shared fixtures for the kernel benchmarks: preset states on square
//! meshes for both schemes.

use shtc_core::{CollocatedState, Preset, StaggeredFields, StaggeredMesh, System};

/// System, mesh and staggered initial state of `preset` on an `n × n` mesh.
pub fn staggered(preset: Preset, n: usize) -> (System, StaggeredMesh, StaggeredFields) {
    let system = System::with_defaults(preset.system());
    let (x, y) = preset.domain();
    let mesh = StaggeredMesh::new(n, n, x, y).expect("valid mesh");
    let params = preset.default_params();
    let fields = StaggeredFields::from_fn(&system, &mesh, |p| preset.evaluate(&params, p)).expect("admissible data");
    (system, mesh, fields)
}

/// System, mesh and collocated initial state of `preset` on an `n × n` mesh.
pub fn collocated(preset: Preset, n: usize) -> (System, StaggeredMesh, CollocatedState) {
    let system = System::with_defaults(preset.system());
    let (x, y) = preset.domain();
    let mesh = StaggeredMesh::new(n, n, x, y).expect("valid mesh");
    let params = preset.default_params();
    let state = CollocatedState::from_fn(&system, &mesh, |p| preset.evaluate(&params, p)).expect("admissible data");
    (system, mesh, state)
}
