use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    validate, ContinuousConfig, DynamicsConfig, Method, ScenarioConfig, Severity, StateConfig, WalkConfig, WalkMode,
};
use crate::continuous::{lindblad_rk4, lindblad_wigner_closed, BesselPropagator, Rk4Config};
use crate::error::{Error, Result};
use crate::negativity::{matrix_negativity, NegativityReport};
use crate::walk::{iterated_cat_wigner, projective_map_wigner, qw_step_wigner, CoinSpec, ProjectiveNoiseSpec};
use crate::wigner::{
    fmt_f64, marginal_momentum, marginal_position, wigner_of_density, write_csv, write_snapshot_csv, GridSidecar,
    WignerMatrix,
};
use crate::{KGrid, SpinMatrix, C64};

/// Tolerance on per-snapshot hermiticity and normalization drift.
const INVARIANT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Initial Wigner matrix only.
    State,
    /// Continuous-time dynamics.
    Evolve,
    /// Discrete-time walk and projective noise.
    Walk,
    /// Negativity of every snapshot of whatever dynamics the scenario names.
    Negativity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub index: usize,
    pub t: f64,
    pub files: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct RunDiagnostics {
    pub boundary_leak: f64,
    /// Closed form vs RK4, with `method = both`.
    pub max_two_path_deviation: Option<f64>,
    /// Transform vs the analytic Wigner matrix, where one applies.
    pub closed_form_deviation: Option<f64>,
    pub max_hermiticity_error: f64,
    pub max_normalization_error: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Command,
    pub version: String,
    pub config: ScenarioConfig,
    pub snapshots: Vec<SnapshotEntry>,
    /// Files not tied to one snapshot.
    pub files: Vec<String>,
    pub diagnostics: RunDiagnostics,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn all_files(&self) -> impl Iterator<Item = &str> {
        self.snapshots.iter().flat_map(|s| s.files.iter()).chain(self.files.iter()).map(String::as_str)
    }
}

struct Trajectory {
    times: Vec<f64>,
    snapshots: Vec<WignerMatrix>,
    diagnostics: RunDiagnostics,
    violation: Option<Error>,
}

#[derive(Serialize)]
struct SnapshotSidecar<'a> {
    #[serde(flatten)]
    grid: GridSidecar,
    t: f64,
    scenario: &'a str,
}

#[derive(Serialize)]
struct NegativityDocument<'a> {
    eta: f64,
    per_m: &'a [(i64, f64)],
    params: NegativityParams<'a>,
}

#[derive(Serialize)]
struct NegativityParams<'a> {
    scenario: &'a str,
    t: f64,
    n_k: usize,
    m_min: i64,
    m_max: i64,
}

/// Executes the scenario and writes every output below `out_dir`.
///
/// Outputs and the manifest are written even when an invariant is violated
/// (boundary leak from RK4 excepted, which aborts the integration); the
/// violation is then returned as the error.
pub fn run(config: &ScenarioConfig, command: Command, out_dir: &Path) -> Result<RunManifest> {
    let started = Instant::now();
    let errors: Vec<String> =
        validate(config).into_iter().filter(|d| d.severity == Severity::Error).map(|d| d.to_string()).collect();
    if !errors.is_empty() {
        return Err(Error::Config(errors.join("; ")));
    }
    let window = config.window()?;
    let kgrid = config.kgrid()?;
    let rho0 = config.state.build(&window)?;
    let w0 = wigner_of_density(&rho0, &kgrid)?;

    let mut traj = match (command, &config.dynamics) {
        (Command::State, _) | (Command::Negativity, DynamicsConfig::None) => {
            let mut d = RunDiagnostics::default();
            if let Some(closed) = config.state.closed_form(&window, &kgrid) {
                d.closed_form_deviation = Some(closed?.max_abs_diff(&w0)?);
            }
            Trajectory { times: vec![0.0], snapshots: vec![w0], diagnostics: d, violation: None }
        }
        (Command::Evolve | Command::Negativity, DynamicsConfig::Continuous(c)) => {
            evolve(config, c, &rho0, &w0, &kgrid)?
        }
        (Command::Walk | Command::Negativity, DynamicsConfig::Walk(wc)) => walk(config, wc, w0, &kgrid)?,
        (Command::Evolve, _) => return Err(Error::Config("`evolve` needs dynamics of kind `continuous`".into())),
        (Command::Walk, _) => return Err(Error::Config("`walk` needs dynamics of kind `walk`".into())),
    };

    for w in &traj.snapshots {
        traj.diagnostics.max_hermiticity_error = traj.diagnostics.max_hermiticity_error.max(w.hermiticity_error());
        let drift = (w.normalization() - C64::new(1.0, 0.0)).norm();
        traj.diagnostics.max_normalization_error = traj.diagnostics.max_normalization_error.max(drift);
        traj.diagnostics.boundary_leak = traj.diagnostics.boundary_leak.max(edge_population(w));
    }
    if traj.violation.is_none() {
        if traj.diagnostics.max_hermiticity_error > INVARIANT_TOLERANCE {
            traj.violation = Some(Error::NotHermitian(traj.diagnostics.max_hermiticity_error));
        } else if traj.diagnostics.max_normalization_error > INVARIANT_TOLERANCE {
            traj.violation = Some(Error::NotNormalized(1.0 + traj.diagnostics.max_normalization_error));
        }
    }

    std::fs::create_dir_all(out_dir)?;
    let mut snapshots = Vec::with_capacity(traj.snapshots.len());
    let mut files = Vec::new();
    let write_fields = command != Command::Negativity;
    let site_prefix = if matches!(config.dynamics, DynamicsConfig::Walk(_)) && command != Command::State {
        "sites"
    } else {
        "marginal_position"
    };
    for (index, (w, &t)) in traj.snapshots.iter().zip(&traj.times).enumerate() {
        let mut entry = SnapshotEntry { index, t, files: Vec::new() };
        if write_fields && config.outputs.wigner {
            let csv = format!("wigner_{index:04}.csv");
            let file = BufWriter::new(File::create(out_dir.join(&csv))?);
            let mut grid = GridSidecar::for_matrix(w, "wigner transform");
            if command == Command::State {
                write_csv(w, file)?;
            } else {
                write_snapshot_csv(w, t, file)?;
                grid.columns.insert_str(0, "t,");
            }
            let json = format!("wigner_{index:04}.json");
            let sidecar = SnapshotSidecar { grid, t, scenario: &config.name };
            write_json(&out_dir.join(&json), &sidecar)?;
            entry.files.extend([csv, json]);
        }
        if write_fields && config.outputs.marginals {
            let pos = format!("{site_prefix}_{index:04}.csv");
            write_position_marginal(w, &out_dir.join(&pos))?;
            let mom = format!("marginal_momentum_{index:04}.csv");
            write_momentum_marginal(w, &kgrid, &out_dir.join(&mom))?;
            entry.files.extend([pos, mom]);
        }
        snapshots.push(entry);
    }
    if write_fields {
        let index = "snapshots.csv";
        let mut f = BufWriter::new(File::create(out_dir.join(index))?);
        writeln!(f, "index,t")?;
        for s in &snapshots {
            writeln!(f, "{},{}", s.index, fmt_f64(s.t))?;
        }
        f.flush()?;
        files.push(index.to_string());
    }
    if command == Command::Negativity || config.outputs.negativity {
        let reports: Vec<NegativityReport> = traj.snapshots.par_iter().map(matrix_negativity).collect::<Result<_>>()?;
        let csv = "negativity.csv";
        let mut f = BufWriter::new(File::create(out_dir.join(csv))?);
        writeln!(f, "t,eta")?;
        for (t, r) in traj.times.iter().zip(&reports) {
            writeln!(f, "{},{}", fmt_f64(*t), fmt_f64(r.eta))?;
        }
        f.flush()?;
        let last = reports.last().expect("at least one snapshot");
        let doc = NegativityDocument {
            eta: last.eta,
            per_m: &last.per_m,
            params: NegativityParams {
                scenario: &config.name,
                t: *traj.times.last().expect("at least one snapshot"),
                n_k: last.n_k,
                m_min: last.m_min,
                m_max: last.m_max,
            },
        };
        let json = "negativity.json";
        write_json(&out_dir.join(json), &doc)?;
        files.extend([csv.to_string(), json.to_string()]);
    }

    let manifest = RunManifest {
        command,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        snapshots,
        files,
        diagnostics: traj.diagnostics,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    write_json(&out_dir.join("manifest.json"), &manifest)?;
    match traj.violation {
        Some(e) => Err(e),
        None => Ok(manifest),
    }
}

fn evolve(
    config: &ScenarioConfig,
    c: &ContinuousConfig,
    rho0: &crate::DensityOperator,
    w0: &WignerMatrix,
    kgrid: &KGrid,
) -> Result<Trajectory> {
    let eps = config.tolerances.epsilon_boundary;
    let closed = || -> Result<Vec<WignerMatrix>> {
        let prop = BesselPropagator::from_hamiltonian(&c.hamiltonian, w0.window().a)?.with_epsilon_boundary(eps);
        let channel = c.closed_form_channel()?;
        let snaps = prop.trajectory(w0, &c.times)?;
        match channel {
            None => Ok(snaps),
            Some(term) => snaps
                .iter()
                .zip(&c.times)
                .map(|(w, &t)| lindblad_wigner_closed(w, term.channel, term.gamma, t))
                .collect(),
        }
    };
    let rk4 = || -> Result<(Vec<WignerMatrix>, f64)> {
        let cfg = Rk4Config { dt: config.tolerances.dt, epsilon_boundary: eps };
        let res = lindblad_rk4(rho0, &c.hamiltonian, &c.noise_spec(), &c.times, &cfg)?;
        let snaps = res.snapshots.par_iter().map(|r| wigner_of_density(r, kgrid)).collect::<Result<_>>()?;
        Ok((snaps, res.boundary_leak))
    };
    let mut d = RunDiagnostics::default();
    let mut violation = None;
    let snapshots = match c.method {
        Method::ClosedForm => closed()?,
        Method::Rk4 => {
            let (snaps, leak) = rk4()?;
            d.boundary_leak = leak;
            snaps
        }
        Method::Both => {
            let analytic = closed()?;
            let (numeric, leak) = rk4()?;
            d.boundary_leak = leak;
            let mut dev = 0.0_f64;
            for (a, b) in analytic.iter().zip(&numeric) {
                dev = dev.max(a.max_abs_diff(b)?);
            }
            d.max_two_path_deviation = Some(dev);
            if dev > config.tolerances.comparison {
                violation = Some(Error::Deviation { deviation: dev, tolerance: config.tolerances.comparison });
            }
            analytic
        }
    };
    Ok(Trajectory { times: c.times.clone(), snapshots, diagnostics: d, violation })
}

fn walk(config: &ScenarioConfig, wc: &WalkConfig, w0: WignerMatrix, kgrid: &KGrid) -> Result<Trajectory> {
    let coin = CoinSpec::new(wc.theta)?;
    let noise = wc.noise.map(|n| ProjectiveNoiseSpec::new(n.p, n.basis)).transpose()?;
    let mut d = RunDiagnostics::default();

    // Noise-only evolution of the α = 1 double delta has a closed form.
    let cat = match (&config.state, wc.mode, noise) {
        (StateConfig::DoubleDelta { n1, n2, alpha }, WalkMode::NoiseOnly, Some(n)) if *alpha == C64::new(1.0, 0.0) => {
            Some((*n1, *n2, n.p))
        }
        _ => None,
    };
    let mut check_closed = |w: &WignerMatrix, step: u32| -> Result<()> {
        if let Some((n1, n2, p)) = cat {
            let closed = iterated_cat_wigner(n1, n2, p, step, w.window(), kgrid)?;
            let dev = closed.max_abs_diff(w)?;
            d.closed_form_deviation = Some(d.closed_form_deviation.unwrap_or(0.0).max(dev));
        }
        Ok(())
    };

    let mut w = w0;
    check_closed(&w, 0)?;
    let mut times = vec![0.0];
    let mut snapshots = vec![w.clone()];
    for step in 1..=wc.steps {
        if wc.mode == WalkMode::WalkAndNoise {
            w = qw_step_wigner(&w, &coin)?;
        }
        if let Some(n) = &noise {
            w = projective_map_wigner(&w, n);
        }
        if step % wc.snapshot_every == 0 || step == wc.steps {
            check_closed(&w, step)?;
            times.push(step as f64);
            snapshots.push(w.clone());
        }
    }
    Ok(Trajectory { times, snapshots, diagnostics: d, violation: None })
}

fn edge_population(w: &WignerMatrix) -> f64 {
    let sites = marginal_position(w).sites;
    let pop = |b: &SpinMatrix| b.trace().re.abs();
    match sites.as_slice() {
        [] => 0.0,
        [only] => pop(&only.1),
        [first, .., last] => pop(&first.1) + pop(&last.1),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

/// `n,p0,p1,p,re01,im01`: spin-resolved site populations and coherence.
fn write_position_marginal(w: &WignerMatrix, path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "n,p0,p1,p,re01,im01")?;
    for (n, b) in marginal_position(w).sites {
        let (p0, p1, c) = (b.get(0, 0).re, b.get(1, 1).re, b.get(0, 1));
        writeln!(f, "{n},{},{},{},{},{}", fmt_f64(p0), fmt_f64(p1), fmt_f64(p0 + p1), fmt_f64(c.re), fmt_f64(c.im))?;
    }
    f.flush()?;
    Ok(())
}

/// `k,p0,p1,p,re01,im01`: `Σ_m W(m, k)` per grid point.
fn write_momentum_marginal(w: &WignerMatrix, kgrid: &KGrid, path: &Path) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "k,p0,p1,p,re01,im01")?;
    for (k, b) in kgrid.points().into_iter().zip(marginal_momentum(w)) {
        let (p0, p1, c) = (b.get(0, 0).re, b.get(1, 1).re, b.get(0, 1));
        writeln!(
            f,
            "{},{},{},{},{},{}",
            fmt_f64(k),
            fmt_f64(p0),
            fmt_f64(p1),
            fmt_f64(p0 + p1),
            fmt_f64(c.re),
            fmt_f64(c.im)
        )?;
    }
    f.flush()?;
    Ok(())
}
