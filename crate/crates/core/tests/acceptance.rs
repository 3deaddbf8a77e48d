//! Acceptance suite with its own harness, so the report is printed on every
//! run. Prints one PASS/FAIL line per criterion followed by its checks, and
//! exits nonzero if any criterion fails. Long runs are shared between
//! criteria.

use std::sync::OnceLock;
use std::time::Instant;

use shtc_core::diagnostics::collocated_energy;
use shtc_core::htc::{cfl_dt, rk_step};
use shtc_core::verify::{self, Check};
use shtc_core::{
    run, simulate, ButcherTableau, CollocatedState, Preset, RunConfig, RunSummary, StaggeredMesh, System, SystemKind,
    TimeStep,
};

fn simm_run(preset: Preset, n: usize, dt: f64, t_end: f64, edit: impl FnOnce(&mut RunConfig)) -> RunSummary {
    let mut config = RunConfig::preset(preset, n, n, t_end, TimeStep::Fixed(dt)).expect("preset config");
    edit(&mut config);
    let (summary, _) = simulate(&config, |_, _, _| Ok(())).expect("run succeeds");
    summary
}

static MAXWELL: OnceLock<(RunSummary, f64)> = OnceLock::new();
static ACOUSTIC: OnceLock<(RunSummary, f64)> = OnceLock::new();
static GLM: OnceLock<(RunSummary, f64)> = OnceLock::new();

fn timed(f: impl FnOnce() -> RunSummary) -> (RunSummary, f64) {
    let t = Instant::now();
    let s = f();
    (s, t.elapsed().as_secs_f64())
}

fn maxwell() -> &'static (RunSummary, f64) {
    MAXWELL.get_or_init(|| timed(|| simm_run(Preset::MaxwellGaussian, 50, 0.001, 1.0, |_| {})))
}

fn acoustic() -> &'static (RunSummary, f64) {
    ACOUSTIC.get_or_init(|| timed(|| simm_run(Preset::AcousticGaussian, 64, 0.001, 1.0, |_| {})))
}

fn glm() -> &'static (RunSummary, f64) {
    GLM.get_or_init(|| timed(|| simm_run(Preset::GlmPlanar, 64, 0.0005, 0.5, |_| {})))
}

fn criterion_01_mimetic_identities() -> Vec<Check> {
    let c = verify::mimetic_identities(&[(8, 8), (17, 23), (64, 64)], 50, 101);
    vec![c]
}

fn criterion_02_flux_compatibility() -> Vec<Check> {
    let c = verify::flux_compatibility(1000, 102);
    vec![c]
}

fn criterion_03_godunov_form() -> Vec<Check> {
    let c = verify::godunov_form(100, 103);
    vec![c]
}

fn criterion_04_derivatives() -> Vec<Check> {
    let checks = [verify::dual_gradient(50, 104), verify::hessian_jacobian(50, 105)];
    checks.into()
}

fn criterion_05_energy_conservation() -> Vec<Check> {
    let mut checks = Vec::new();
    for (name, (s, secs)) in [("maxwell", maxwell()), ("acoustics", acoustic()), ("glm", glm())] {
        checks.push(Check::new(
            format!("{name} max |E^n/E^0 - 1|"),
            s.max_rel_energy_error,
            5e-12,
        ));
        checks.push(Check::new(format!("{name} runtime in seconds"), *secs, 300.0));
    }
    checks
}

fn criterion_06_divergence_preservation() -> Vec<Check> {
    let (s, _) = maxwell();
    let dx = 2.0 / 50.0;
    let scale = s.max_cell_abs / dx;
    let checks = [
        Check::new("maxwell div_B_max / (|B|/dx)", s.max_div_b.unwrap() / scale, 1e-12),
        Check::new("maxwell div_D_max / (|B|/dx)", s.max_div_d.unwrap() / scale, 1e-12),
    ];
    checks.into()
}

fn criterion_07_curl_preservation() -> Vec<Check> {
    let (s, _) = acoustic();
    let dx = 1.0 / 64.0;
    let scale = s.max_cell_abs / dx + 1e-16;
    let c = Check::new(
        "acoustics curl_v_max / (|v|/dx + 1e-16)",
        s.max_curl_v.unwrap() / scale,
        1e-12,
    );
    vec![c]
}

fn criterion_08_roe_and_chain_rule() -> Vec<Check> {
    let mut checks = Vec::new();
    for (name, (s, _)) in [("maxwell", maxwell()), ("glm", glm())] {
        checks.push(Check::new(
            format!("{name} Roe residual"),
            s.max_roe_residual.unwrap(),
            1e-14,
        ));
        checks.push(Check::new(
            format!("{name} chain-rule residual"),
            s.max_chain_rule_residual.unwrap(),
            1e-14,
        ));
    }
    let s = simm_run(Preset::AcousticGaussian, 64, 0.001, 1.0, |c| c.gauss_points = 5);
    checks.push(Check::new(
        "acoustics (5 points) Roe residual",
        s.max_roe_residual.unwrap(),
        1e-6,
    ));
    checks.push(Check::new(
        "acoustics (5 points) chain-rule residual",
        s.max_chain_rule_residual.unwrap(),
        1e-6,
    ));
    checks
}

/// Energy drift of the collocated scheme at `T = 0.25` with `steps` equal steps.
fn htc_drift(steps: usize) -> f64 {
    let preset = Preset::AcousticGaussian;
    let system = System::with_defaults(SystemKind::Acoustics);
    let (xr, yr) = preset.domain();
    let mesh = StaggeredMesh::new(32, 32, xr, yr).unwrap();
    let params = preset.default_params();
    let mut state = CollocatedState::from_fn(&system, &mesh, |x| preset.evaluate(&params, x)).unwrap();
    let tableau = ButcherTableau::rk4();
    let e0 = collocated_energy(&system, &mesh, &state).unwrap();
    let dt = 0.25 / steps as f64;
    for _ in 0..steps {
        state = rk_step(&system, &mesh, &state, &tableau, dt).unwrap();
    }
    let e = collocated_energy(&system, &mesh, &state).unwrap();
    (e / e0 - 1.0).abs()
}

fn criterion_09_htc_order() -> Vec<Check> {
    let t = Instant::now();
    // The coarsest level is the CFL 0.4 step size of the initial state.
    let preset = Preset::AcousticGaussian;
    let system = System::with_defaults(SystemKind::Acoustics);
    let (xr, yr) = preset.domain();
    let mesh = StaggeredMesh::new(32, 32, xr, yr).unwrap();
    let params = preset.default_params();
    let state = CollocatedState::from_fn(&system, &mesh, |x| preset.evaluate(&params, x)).unwrap();
    let n = (0.25 / cfl_dt(&system, &mesh, &state, 0.4).unwrap()).ceil() as usize;
    let errs: Vec<f64> = [n, 2 * n, 4 * n].into_iter().map(htc_drift).collect();
    let checks = [
        Check::new(
            format!(
                "drift {:.3e} -> {:.3e} ({n} -> {} steps), inverse ratio",
                errs[0],
                errs[1],
                2 * n
            ),
            errs[1] / errs[0],
            1.0 / 12.0,
        ),
        Check::new(
            format!(
                "drift {:.3e} -> {:.3e} ({} -> {} steps), inverse ratio",
                errs[1],
                errs[2],
                2 * n,
                4 * n
            ),
            errs[2] / errs[1],
            1.0 / 12.0,
        ),
        Check::new("runtime in seconds", t.elapsed().as_secs_f64(), 120.0),
    ];
    checks.into()
}

fn criterion_10_picard_convergence() -> Vec<Check> {
    let max_iters = shtc_core::PicardConfig::default().max_iters;
    let linear = simm_run(Preset::MaxwellGaussian, 50, 0.001, 1.0, |c| c.energy.maxwell_eps = 0.0);
    let mut checks = vec![Check::new(
        "maxwell eps=0 Picard iterations per step",
        linear.max_picard_iters as f64,
        2.0,
    )];
    for (name, (s, _)) in [("maxwell", maxwell()), ("acoustics", acoustic()), ("glm", glm())] {
        checks.push(Check::new(
            format!("{name} mean Picard iterations"),
            s.mean_picard_iters(),
            10.0,
        ));
        checks.push(Check::new(
            format!("{name} max Picard iterations"),
            s.max_picard_iters as f64,
            (max_iters - 1) as f64,
        ));
    }
    checks
}

fn criterion_11_determinism() -> Vec<Check> {
    let mut checks = Vec::new();
    let cases = [
        (Preset::MaxwellGaussian, TimeStep::Fixed(0.001)),
        (Preset::AcousticGaussian, TimeStep::Fixed(0.001)),
        (Preset::GlmPlanar, TimeStep::Fixed(0.0005)),
        (Preset::AcousticGaussian, TimeStep::Cfl(0.4)),
    ];
    for (preset, step) in cases {
        let mut bytes = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let mut config = RunConfig::preset(preset, 24, 24, 0.05, step).unwrap();
            config.output.dir = dir.path().to_path_buf();
            let out = run(&config).unwrap();
            bytes.push(std::fs::read(&out.series_path).unwrap());
        }
        let label = match step {
            TimeStep::Fixed(_) => format!("{preset} simm series.csv reproduces"),
            TimeStep::Cfl(_) => format!("{preset} htc series.csv reproduces"),
        };
        checks.push(Check::new(label, f64::from(u8::from(bytes[0] != bytes[1])), 0.0));
    }
    checks
}

type Criterion = (usize, &'static str, fn() -> Vec<Check>);

const CRITERIA: [Criterion; 11] = [
    (1, "mimetic identities", criterion_01_mimetic_identities),
    (2, "Abgrall flux compatibility", criterion_02_flux_compatibility),
    (3, "Godunov form", criterion_03_godunov_form),
    (4, "derivative correctness", criterion_04_derivatives),
    (5, "SIMM energy conservation", criterion_05_energy_conservation),
    (6, "SIMM divergence preservation", criterion_06_divergence_preservation),
    (7, "SIMM curl preservation", criterion_07_curl_preservation),
    (8, "Roe and chain-rule residuals", criterion_08_roe_and_chain_rule),
    (9, "HTC temporal order", criterion_09_htc_order),
    (10, "Picard convergence", criterion_10_picard_convergence),
    (11, "determinism", criterion_11_determinism),
];

fn main() {
    let started = Instant::now();
    // Criteria run concurrently; a panic inside one is reported as its failure.
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA
            .iter()
            .map(|&(_, _, f)| {
                scope.spawn(move || {
                    let t = Instant::now();
                    (f(), t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join()).collect()
    });
    let mut failed = 0;
    for ((id, name, _), result) in CRITERIA.iter().zip(results) {
        match result {
            Ok((checks, secs)) => {
                let ok = !checks.is_empty() && checks.iter().all(|c| c.passed);
                failed += usize::from(!ok);
                println!(
                    "{} criterion {id:>2}: {name} [{secs:.2} s]",
                    if ok { "PASS" } else { "FAIL" }
                );
                for c in &checks {
                    println!("    {c}");
                }
            }
            Err(_) => {
                failed += 1;
                println!("FAIL criterion {id:>2}: {name} (panicked)");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1} s",
        CRITERIA.len() - failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
