//! Experiment driver: initial data, time loop, series and snapshots.

use std::fmt;
use std::path::PathBuf;

use crate::config::{RunConfig, SchemeKind, TimeStep};
use crate::diagnostics::{collocated_energy, staggered_energy, InvolutionReport, Series};
use crate::error::{Error, Result};
use crate::grid::StaggeredMesh;
use crate::htc::{cfl_dt, rk_step, ButcherTableau, CollocatedState};
use crate::output::{write_snapshot, StateRef};
use crate::quadrature::PathQuadrature;
use crate::simm::{involution_report, SimmSolver, StaggeredFields, StepStats};
use crate::systems::System;

/// State of either scheme.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Collocated(CollocatedState),
    Staggered(StaggeredFields),
}

impl State {
    pub fn time(&self) -> f64 {
        self.as_ref().time()
    }

    pub fn as_ref(&self) -> StateRef<'_> {
        match self {
            State::Collocated(s) => StateRef::Collocated(s),
            State::Staggered(s) => StateRef::Staggered(s),
        }
    }

    fn set_time(&mut self, t: f64) {
        match self {
            State::Collocated(s) => s.time = t,
            State::Staggered(s) => s.time = t,
        }
    }
}

/// Samples the preset's initial data on the mesh: at cell centres for HTC,
/// at each block's native location for SIMM.
pub fn initialize(config: &RunConfig, system: &System, mesh: &StaggeredMesh) -> Result<State> {
    config
        .preset
        .check_periodic(&config.initial, config.x_range, config.y_range)?;
    let f = |x: [f64; 2]| config.preset.evaluate(&config.initial, x);
    Ok(match config.scheme {
        SchemeKind::Htc => State::Collocated(CollocatedState::from_fn(system, mesh, f)?),
        SchemeKind::Simm => State::Staggered(StaggeredFields::from_fn(system, mesh, f)?),
    })
}

enum Stepper {
    Htc { tableau: ButcherTableau, cfl: f64 },
    Simm { solver: Box<SimmSolver>, dt: f64 },
}

/// A configured simulation advanced one step at a time.
pub struct Simulation {
    pub system: System,
    pub mesh: StaggeredMesh,
    state: State,
    stepper: Stepper,
    steps: usize,
}

impl Simulation {
    pub fn new(config: &RunConfig) -> Result<Self> {
        let system = System::new(config.system, config.energy)?;
        let mesh = StaggeredMesh::new(config.nx, config.ny, config.x_range, config.y_range)?;
        let state = initialize(config, &system, &mesh)?;
        let stepper = match (config.scheme, config.time_step) {
            (SchemeKind::Htc, TimeStep::Cfl(cfl)) => {
                let tableau = match &config.tableau_file {
                    Some(p) => ButcherTableau::from_file(p)?,
                    None => ButcherTableau::from_order(config.rk_order)?,
                };
                Stepper::Htc { tableau, cfl }
            }
            (SchemeKind::Simm, TimeStep::Fixed(dt)) => {
                let quad = PathQuadrature::gauss_legendre(config.gauss_points)?;
                let solver = SimmSolver::new(system, mesh.clone(), quad, config.picard.clone())?;
                let mut dt = dt;
                if let (Some(cap), State::Staggered(s)) = (config.simm_cfl_cap, &state) {
                    let speed = solver.max_signal_speed(s)?;
                    if speed > 0.0 {
                        dt = dt.min(cap / (speed * (1.0 / mesh.dx + 1.0 / mesh.dy)));
                    }
                }
                Stepper::Simm {
                    solver: Box::new(solver),
                    dt,
                }
            }
            _ => return Err(Error::Config("scheme and time step control disagree".into())),
        };
        Ok(Self {
            system,
            mesh,
            state,
            stepper,
            steps: 0,
        })
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn energy(&self) -> Result<f64> {
        match &self.state {
            State::Collocated(s) => collocated_energy(&self.system, &self.mesh, s),
            State::Staggered(s) => staggered_energy(&self.system, &self.mesh, s),
        }
    }

    /// Involution errors; empty for the collocated scheme.
    pub fn involutions(&self) -> Result<InvolutionReport> {
        match &self.state {
            State::Collocated(_) => Ok(InvolutionReport::default()),
            State::Staggered(s) => involution_report(&self.system, &self.mesh, s),
        }
    }

    /// Step size the scheme would take from the current state.
    pub fn suggested_dt(&self) -> Result<f64> {
        match (&self.stepper, &self.state) {
            (Stepper::Htc { cfl, .. }, State::Collocated(s)) => cfl_dt(&self.system, &self.mesh, s, *cfl),
            (Stepper::Simm { dt, .. }, _) => Ok(*dt),
            _ => unreachable!("stepper matches state"),
        }
    }

    /// Advances by exactly `dt` and stamps the new state with `t_next`.
    fn advance(&mut self, dt: f64, t_next: f64) -> Result<Option<StepStats>> {
        let step = self.steps + 1;
        let t0 = self.state.time();
        let stats = match (&self.stepper, &self.state) {
            (Stepper::Htc { tableau, .. }, State::Collocated(s)) => {
                let next = rk_step(&self.system, &self.mesh, s, tableau, dt).map_err(|e| e.at_step(step, t0))?;
                self.state = State::Collocated(next);
                None
            }
            (Stepper::Simm { solver, .. }, State::Staggered(s)) => {
                let (next, stats) = solver.step(s, dt).map_err(|e| e.at_step(step, t0))?;
                self.state = State::Staggered(next);
                Some(stats)
            }
            _ => unreachable!("stepper matches state"),
        };
        self.state.set_time(t_next);
        self.steps = step;
        Ok(stats)
    }
}

/// Aggregates over a whole run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub system: String,
    pub scheme: SchemeKind,
    pub steps: usize,
    pub final_time: f64,
    pub initial_energy: f64,
    pub final_rel_energy_error: f64,
    /// Max of `|Eⁿ/E⁰ − 1|` over every step, not only recorded ones.
    pub max_rel_energy_error: f64,
    pub max_div_b: Option<f64>,
    pub max_div_d: Option<f64>,
    pub max_curl_v: Option<f64>,
    pub total_picard_iters: usize,
    pub max_picard_iters: usize,
    pub total_krylov_iters: usize,
    pub max_roe_residual: Option<f64>,
    pub max_chain_rule_residual: Option<f64>,
    /// Max of `‖·‖∞` of the cell block (all of `q` for HTC) over the run.
    pub max_cell_abs: f64,
    /// Max of `‖·‖∞` of the vertex block over the run (zero for HTC).
    pub max_vertex_abs: f64,
}

impl RunSummary {
    pub fn mean_picard_iters(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.total_picard_iters as f64 / self.steps as f64
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"))
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: steps={} t={} rel_energy_error={:.3e} (max {:.3e}) div_B_max={} div_D_max={} curl_v_max={} picard_iters={} krylov_iters={}",
            self.system,
            self.scheme,
            self.steps,
            self.final_time,
            self.final_rel_energy_error,
            self.max_rel_energy_error,
            opt(self.max_div_b),
            opt(self.max_div_d),
            opt(self.max_curl_v),
            self.total_picard_iters,
            self.total_krylov_iters
        )
    }
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn track_magnitudes(summary: &mut RunSummary, state: &State) {
    let (c, v) = match state {
        State::Collocated(s) => (s.q.max_abs(), 0.0),
        State::Staggered(s) => (s.cells.max_abs(), s.vertices.max_abs()),
    };
    summary.max_cell_abs = summary.max_cell_abs.max(c);
    summary.max_vertex_abs = summary.max_vertex_abs.max(v);
}

/// Runs the configured time loop without touching the file system.
/// `on_snapshot` is called for every requested snapshot time.
pub fn simulate(
    config: &RunConfig,
    mut on_snapshot: impl FnMut(&System, &StaggeredMesh, StateRef<'_>) -> Result<()>,
) -> Result<(RunSummary, Series)> {
    let mut sim = Simulation::new(config)?;
    let t_end = config.t_end;
    let stride = config.output.stride;
    let snaps = &config.output.snapshot_times;
    let mut next_snap = 0;

    let mut series = Series::new();
    let e0 = sim.energy()?;
    let inv0 = sim.involutions()?;
    series.record(0.0, e0, inv0, None)?;
    let mut summary = RunSummary {
        system: config.system.to_string(),
        scheme: config.scheme,
        steps: 0,
        final_time: 0.0,
        initial_energy: e0,
        final_rel_energy_error: 0.0,
        max_rel_energy_error: 0.0,
        max_div_b: inv0.div_b_max,
        max_div_d: inv0.div_d_max,
        max_curl_v: inv0.curl_v_max,
        total_picard_iters: 0,
        max_picard_iters: 0,
        total_krylov_iters: 0,
        max_roe_residual: None,
        max_chain_rule_residual: None,
        max_cell_abs: 0.0,
        max_vertex_abs: 0.0,
    };
    track_magnitudes(&mut summary, &sim.state);
    while next_snap < snaps.len() && snaps[next_snap] <= 0.0 {
        on_snapshot(&sim.system, &sim.mesh, sim.state.as_ref())?;
        next_snap += 1;
    }

    // Fixed-step runs use t_k = k Δt so that round-off does not accumulate
    // in the clock; the last step is shortened to land on t_end.
    let fixed = match sim.stepper {
        Stepper::Simm { dt, .. } => Some(dt),
        Stepper::Htc { .. } => None,
    };
    let n_fixed = fixed.map(|dt| {
        if t_end == 0.0 {
            0
        } else {
            ((t_end / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
        }
    });

    loop {
        let t = sim.state.time();
        let (dt, t_next) = match (fixed, n_fixed) {
            (Some(dt), Some(n)) => {
                let k = sim.steps;
                if k >= n {
                    break;
                }
                let t_next = if k + 1 == n { t_end } else { (k + 1) as f64 * dt };
                (t_next - t, t_next)
            }
            _ => {
                if t >= t_end {
                    break;
                }
                let target = snaps[next_snap..]
                    .iter()
                    .copied()
                    .find(|&s| s > t)
                    .unwrap_or(t_end)
                    .min(t_end);
                let dt = sim.suggested_dt().map_err(|e| e.at_step(sim.steps + 1, t))?;
                if t + dt >= target - 1e-12 * dt {
                    (target - t, target)
                } else {
                    (dt, t + dt)
                }
            }
        };
        let stats = sim.advance(dt, t_next)?;
        track_magnitudes(&mut summary, &sim.state);
        let e = sim.energy()?;
        let inv = sim.involutions()?;
        let rel = crate::diagnostics::relative_energy_error(e, e0);
        summary.max_rel_energy_error = summary.max_rel_energy_error.max(rel.abs());
        summary.final_rel_energy_error = rel;
        summary.max_div_b = max_opt(summary.max_div_b, inv.div_b_max);
        summary.max_div_d = max_opt(summary.max_div_d, inv.div_d_max);
        summary.max_curl_v = max_opt(summary.max_curl_v, inv.curl_v_max);
        if let Some(s) = &stats {
            summary.total_picard_iters += s.picard_iters;
            summary.max_picard_iters = summary.max_picard_iters.max(s.picard_iters);
            summary.total_krylov_iters += s.krylov_iters;
            summary.max_roe_residual = max_opt(summary.max_roe_residual, Some(s.roe_residual));
            summary.max_chain_rule_residual = max_opt(summary.max_chain_rule_residual, Some(s.chain_rule_residual));
        }
        let done = match n_fixed {
            Some(n) => sim.steps >= n,
            None => sim.state.time() >= t_end,
        };
        if sim.steps % stride == 0 || done {
            series.record(sim.state.time(), e, inv, stats.as_ref())?;
        }
        let now = sim.state.time();
        let tol = 1e-9 * dt.abs();
        while next_snap < snaps.len() && snaps[next_snap] <= now + tol {
            on_snapshot(&sim.system, &sim.mesh, sim.state.as_ref())?;
            next_snap += 1;
        }
    }
    summary.steps = sim.steps;
    summary.final_time = sim.state.time();
    Ok((summary, series))
}

/// Files produced by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub summary: RunSummary,
    pub series: Series,
    pub series_path: PathBuf,
    pub snapshots: Vec<PathBuf>,
}

/// Runs the simulation and writes `series.csv` and the snapshots into the
/// configured output directory.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let dir = config.output.dir.clone();
    std::fs::create_dir_all(&dir)?;
    let mut snapshots = vec![];
    let (summary, series) = simulate(config, |system, mesh, state| {
        snapshots.push(write_snapshot(&dir, system, mesh, state)?);
        Ok(())
    })?;
    let series_path = dir.join("series.csv");
    std::fs::write(&series_path, series.to_csv())?;
    Ok(RunOutput {
        summary,
        series,
        series_path,
        snapshots,
    })
}
