//! JSON scenario files driving the `latwig` command-line tool.
//!
//! A scenario names a window, a k-grid, an initial state and optionally some
//! dynamics. [`validate`] runs static checks only; [`run`] executes the
//! scenario and writes plot-ready CSV files plus a `manifest.json`.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::{
    cat_state, cat_wigner_closed, double_delta_state, double_delta_wigner_closed, product_gaussian_state,
    two_gaussian_state, two_gaussian_wigner_closed, werner_density, werner_wigner, CatSpec, DoubleDeltaSpec,
    GaussianSpec, TwoGaussianSpec, WernerSpec, GAUSSIAN_SLACK_SIGMAS,
};
use crate::continuous::{BesselPropagator, Channel, HamiltonianSpec, NoiseSpec, Potential, MAX_STEP_PRODUCT};
use crate::error::{Error, Result};
use crate::numerics::{bessel_jn_orders, KGrid};
use crate::spin::SpinVector;
use crate::state::{DensityOperator, LatticeWindow, PureState, DEFAULT_EPSILON_BOUNDARY};
use crate::walk::ProjectiveNoiseSpec;
use crate::wigner::WignerMatrix;
use crate::C64;

mod run;

pub use run::{run, Command, RunDiagnostics, RunManifest, SnapshotEntry};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub window: WindowConfig,
    pub n_k: usize,
    pub state: StateConfig,
    #[serde(default)]
    pub dynamics: DynamicsConfig,
    #[serde(default)]
    pub outputs: OutputConfig,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub n_min: i64,
    pub n_max: i64,
    #[serde(default = "unit")]
    pub a: f64,
}

fn unit() -> f64 {
    1.0
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Initial states, written as `{"<kind>": {...}}`. Complex numbers are
/// written as `[re, im]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    /// `(|n₁⟩|0⟩ + α|n₂⟩|1⟩) / √(1+|α|²)`
    DoubleDelta {
        n1: i64,
        n2: i64,
        #[serde(default = "one")]
        alpha: C64,
    },
    /// Gaussians at `a_center` (spin 0) and `b_center` (spin 1).
    TwoGaussian {
        a_center: i64,
        b_center: i64,
        sigma: f64,
    },
    /// Gaussian envelope times a spinor (normalized on load).
    ProductGaussian {
        center: i64,
        sigma: f64,
        spin: SpinVector,
    },
    Werner {
        a_site: i64,
        b_site: i64,
        z: f64,
    },
    /// `(|a⟩|s₁⟩ + β|b⟩|s₂⟩) / √(1+|β|²)`
    Cat {
        a_site: i64,
        b_site: i64,
        beta: C64,
        spin1: SpinVector,
        spin2: SpinVector,
    },
    /// `|site⟩ ⊗ spin` (spinor normalized on load).
    Localized {
        site: i64,
        spin: SpinVector,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DynamicsConfig {
    #[default]
    None,
    Continuous(ContinuousConfig),
    Walk(WalkConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuousConfig {
    pub hamiltonian: HamiltonianSpec,
    #[serde(default)]
    pub noise: Vec<NoiseTerm>,
    #[serde(default)]
    pub method: Method,
    pub times: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseTerm {
    pub channel: Channel,
    pub gamma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Bessel propagator, plus the Lindblad closed form when noise is present.
    #[default]
    ClosedForm,
    /// Density-operator RK4 followed by the transform.
    Rk4,
    /// Both, with the maximum deviation reported and checked.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub theta: f64,
    pub steps: u32,
    #[serde(default)]
    pub noise: Option<ProjectiveNoiseSpec>,
    #[serde(default)]
    pub mode: WalkMode,
    #[serde(default = "every_step")]
    pub snapshot_every: u32,
}

fn every_step() -> u32 {
    1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    /// Only the projective map each step.
    NoiseOnly,
    /// A coin-and-shift step followed by the projective map.
    #[default]
    WalkAndNoise,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Used when `--out` is not given.
    #[serde(default)]
    pub directory: Option<PathBuf>,
    #[serde(default = "yes")]
    pub wigner: bool,
    #[serde(default = "yes")]
    pub marginals: bool,
    #[serde(default = "yes")]
    pub negativity: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: None, wigner: true, marginals: true, negativity: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_eps")]
    pub epsilon_boundary: f64,
    /// Largest closed-form vs RK4 deviation accepted with `method = both`.
    #[serde(default = "default_comparison")]
    pub comparison: f64,
    /// Fixed RK4 step; omitted means automatic.
    #[serde(default)]
    pub dt: Option<f64>,
}

fn default_eps() -> f64 {
    DEFAULT_EPSILON_BOUNDARY
}

fn default_comparison() -> f64 {
    1e-6
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { epsilon_boundary: default_eps(), comparison: default_comparison(), dt: None }
    }
}

impl ScenarioConfig {
    /// Parses JSON, naming the offending field and position on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                Error::Config(inner.to_string())
            } else {
                Error::Config(format!("field `{path}`: {inner}"))
            }
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn window(&self) -> Result<LatticeWindow> {
        LatticeWindow::new(self.window.n_min, self.window.n_max, self.window.a)
    }

    /// The k-grid, checked for exactness on the window.
    pub fn kgrid(&self) -> Result<KGrid> {
        let grid = KGrid::new(self.n_k)?;
        grid.check_exact_for(self.window()?.width())?;
        Ok(grid)
    }
}

fn normalized_spinor(v: &SpinVector) -> Result<SpinVector> {
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidParameter("spinor must be nonzero and finite".into()));
    }
    Ok([v[0] / norm, v[1] / norm])
}

impl StateConfig {
    pub fn build(&self, window: &LatticeWindow) -> Result<DensityOperator> {
        let pure = |psi: PureState| Ok(DensityOperator::from_pure(&psi));
        match self {
            StateConfig::DoubleDelta { n1, n2, alpha } => {
                pure(double_delta_state(&DoubleDeltaSpec { n1: *n1, n2: *n2, alpha: *alpha }, window)?)
            }
            StateConfig::TwoGaussian { a_center, b_center, sigma } => pure(two_gaussian_state(
                &TwoGaussianSpec { a_center: *a_center, b_center: *b_center, sigma: *sigma },
                window,
            )?),
            StateConfig::ProductGaussian { center, sigma, spin } => pure(product_gaussian_state(
                &GaussianSpec { center: *center, sigma: *sigma },
                normalized_spinor(spin)?,
                window,
            )?),
            StateConfig::Werner { a_site, b_site, z } => {
                werner_density(&WernerSpec { a_site: *a_site, b_site: *b_site, z: *z }, window)
            }
            StateConfig::Cat { a_site, b_site, beta, spin1, spin2 } => pure(cat_state(
                &CatSpec {
                    a_site: *a_site,
                    b_site: *b_site,
                    beta: *beta,
                    spin1: normalized_spinor(spin1)?,
                    spin2: normalized_spinor(spin2)?,
                },
                window,
            )?),
            StateConfig::Localized { site, spin } => {
                window.ensure_contains(*site)?;
                let spin = normalized_spinor(spin)?;
                let site = *site;
                pure(PureState::product(*window, |n| C64::new(if n == site { 1.0 } else { 0.0 }, 0.0), spin)?)
            }
        }
    }

    /// Closed-form Wigner matrix where one exists.
    pub fn closed_form(&self, window: &LatticeWindow, kgrid: &KGrid) -> Option<Result<WignerMatrix>> {
        match self {
            StateConfig::DoubleDelta { n1, n2, alpha } => {
                Some(double_delta_wigner_closed(&DoubleDeltaSpec { n1: *n1, n2: *n2, alpha: *alpha }, window, kgrid))
            }
            StateConfig::TwoGaussian { a_center, b_center, sigma } => Some(two_gaussian_wigner_closed(
                &TwoGaussianSpec { a_center: *a_center, b_center: *b_center, sigma: *sigma },
                window,
                kgrid,
            )),
            StateConfig::Werner { a_site, b_site, z } => {
                Some(werner_wigner(&WernerSpec { a_site: *a_site, b_site: *b_site, z: *z }, window, kgrid))
            }
            StateConfig::Cat { a_site, b_site, beta, spin1, spin2 } => {
                let (spin1, spin2) = match (normalized_spinor(spin1), normalized_spinor(spin2)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(e), _) | (_, Err(e)) => return Some(Err(e)),
                };
                let spec = CatSpec { a_site: *a_site, b_site: *b_site, beta: *beta, spin1, spin2 };
                Some(cat_wigner_closed(&spec, window, kgrid))
            }
            StateConfig::ProductGaussian { .. } | StateConfig::Localized { .. } => None,
        }
    }

    /// Sites carrying essentially all of the state (Gaussians: ±6σ).
    pub fn support(&self) -> (f64, f64) {
        let span = |sites: &[i64]| {
            let lo = sites.iter().copied().min().unwrap_or(0) as f64;
            let hi = sites.iter().copied().max().unwrap_or(0) as f64;
            (lo, hi)
        };
        match self {
            StateConfig::DoubleDelta { n1, n2, .. } => span(&[*n1, *n2]),
            StateConfig::Werner { a_site, b_site, .. } | StateConfig::Cat { a_site, b_site, .. } => {
                span(&[*a_site, *b_site])
            }
            StateConfig::Localized { site, .. } => span(&[*site]),
            StateConfig::TwoGaussian { a_center, b_center, sigma } => {
                let (lo, hi) = span(&[*a_center, *b_center]);
                (lo - GAUSSIAN_SLACK_SIGMAS * sigma, hi + GAUSSIAN_SLACK_SIGMAS * sigma)
            }
            StateConfig::ProductGaussian { center, sigma, .. } => {
                let c = *center as f64;
                (c - GAUSSIAN_SLACK_SIGMAS * sigma, c + GAUSSIAN_SLACK_SIGMAS * sigma)
            }
        }
    }
}

impl ContinuousConfig {
    pub fn noise_spec(&self) -> NoiseSpec {
        NoiseSpec { terms: self.noise.iter().map(|t| (t.channel.operator(), t.gamma)).collect() }
    }

    /// The single channel the closed-form path can apply on top of the
    /// Hamiltonian propagator, if any.
    pub fn closed_form_channel(&self) -> Result<Option<NoiseTerm>> {
        match self.noise.as_slice() {
            [] => Ok(None),
            [term] => match term.channel {
                Channel::SigmaZ => Ok(Some(*term)),
                Channel::SigmaX if !self.hamiltonian.spin_coupled || self.hamiltonian.potential == Potential::None => {
                    Ok(Some(*term))
                }
                Channel::SigmaX => Err(Error::UnsupportedChannel(
                    "the sigma_x closed form needs a spin-independent Hamiltonian; use method rk4".into(),
                )),
                Channel::SigmaY => {
                    Err(Error::UnsupportedChannel("no closed form is provided for sigma_y; use method rk4".into()))
                }
            },
            _ => Err(Error::UnsupportedChannel("the closed form handles a single channel; use method rk4".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.field, self.message)
    }
}

/// Static checks: grid exactness, window adequacy, kernel slack and
/// parameter ranges. Nothing is executed.
pub fn validate(config: &ScenarioConfig) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push =
        |severity, field: &str, message: String| out.push(Diagnostic { severity, field: field.into(), message });

    let window = match config.window() {
        Ok(w) => w,
        Err(e) => {
            push(Severity::Error, "window", e.to_string());
            return out;
        }
    };
    let required = KGrid::required_for_width(window.width());
    if config.n_k < required {
        push(
            Severity::Error,
            "n_k",
            format!(
                "n_k = {} is below the 2W+1 = {required} bound for exact k-integration on a window of W = {} sites",
                config.n_k,
                window.width()
            ),
        );
    }

    let (lo, hi) = config.state.support();
    if let Err(e) = config.state.build(&window) {
        match e {
            Error::WindowTooSmall(msg) => push(
                Severity::Warning,
                "state",
                format!("window is not adequate for the Gaussian: {msg}; the run will refuse this state"),
            ),
            other => push(Severity::Error, "state", other.to_string()),
        }
    }

    let eps = config.tolerances.epsilon_boundary;
    if !(eps > 0.0 && eps.is_finite()) {
        push(Severity::Error, "tolerances.epsilon_boundary", format!("must be positive, got {eps}"));
    }

    match &config.dynamics {
        DynamicsConfig::None => {}
        DynamicsConfig::Continuous(c) => {
            if let Err(e) = c.hamiltonian.validate() {
                push(Severity::Error, "dynamics.hamiltonian", e.to_string());
            }
            if let Err(e) = c.noise_spec().validate() {
                push(Severity::Error, "dynamics.noise", e.to_string());
            }
            if c.times.is_empty() {
                push(Severity::Error, "dynamics.times", "at least one snapshot time is required".into());
            }
            if c.times.iter().any(|t| !t.is_finite() || *t < 0.0) || c.times.windows(2).any(|w| w[1] < w[0]) {
                push(
                    Severity::Error,
                    "dynamics.times",
                    "times must be finite, non-negative and sorted ascending".into(),
                );
            }
            let t_max = c.times.iter().copied().fold(0.0, f64::max);
            if c.method != Method::Rk4 {
                match BesselPropagator::from_hamiltonian(&c.hamiltonian, window.a) {
                    Ok(prop) => {
                        let reach = kernel_reach(prop.max_argument(t_max));
                        if lo - reach < window.n_min as f64 || hi + reach > window.n_max as f64 {
                            push(
                                Severity::Warning,
                                "window",
                                format!(
                                    "the Bessel kernel can move weight by up to {reach} sites; state support [{lo}, {hi}] \
                                     then reaches past the window [{}, {}]",
                                    window.n_min, window.n_max
                                ),
                            );
                        }
                    }
                    Err(e) => push(Severity::Error, "dynamics.method", e.to_string()),
                }
                if let Err(e) = c.closed_form_channel() {
                    push(Severity::Error, "dynamics.noise", e.to_string());
                }
            }
            if let Some(dt) = config.tolerances.dt {
                let norm = 2.0 * c.hamiltonian.j_hop.abs()
                    + c.hamiltonian.max_potential(&window)
                    + c.noise_spec().norm_estimate();
                if dt.is_nan() || dt <= 0.0 || dt * norm > MAX_STEP_PRODUCT {
                    push(
                        Severity::Error,
                        "tolerances.dt",
                        format!("dt = {dt} gives dt*norm = {} (must be positive and <= {MAX_STEP_PRODUCT})", dt * norm),
                    );
                }
            }
        }
        DynamicsConfig::Walk(w) => {
            if !(0.0..=FRAC_PI_2).contains(&w.theta) {
                push(Severity::Error, "dynamics.theta", format!("coin angle must lie in [0, π/2], got {}", w.theta));
            }
            if let Some(n) = &w.noise {
                if ProjectiveNoiseSpec::new(n.p, n.basis).is_err() {
                    push(Severity::Error, "dynamics.noise.p", format!("must lie in [0, 1], got {}", n.p));
                }
            }
            if w.mode == WalkMode::NoiseOnly && w.noise.is_none() {
                push(Severity::Error, "dynamics.noise", "mode noise_only needs a noise block".into());
            }
            if w.snapshot_every == 0 {
                push(Severity::Error, "dynamics.snapshot_every", "must be at least 1".into());
            }
            let reach = if w.mode == WalkMode::WalkAndNoise { w.steps as f64 } else { 0.0 };
            if lo - reach <= window.n_min as f64 || hi + reach >= window.n_max as f64 {
                push(
                    Severity::Warning,
                    "window",
                    format!(
                        "{} walk steps from support [{lo}, {hi}] can reach the window edge [{}, {}]",
                        w.steps, window.n_min, window.n_max
                    ),
                );
            }
        }
    }
    out
}

/// Sites the Bessel kernel can move weight by: half the first order beyond
/// `|z|` where `|J_n(z)| < 1e-12`.
fn kernel_reach(z_max: f64) -> f64 {
    let top = (2.0 * z_max.abs()).ceil() as usize + 40;
    let orders = match bessel_jn_orders(top, z_max) {
        Ok(o) => o,
        Err(_) => return f64::INFINITY,
    };
    let start = z_max.abs().ceil() as usize;
    let width = (start..=top).find(|&n| orders[n].abs() < 1e-12).unwrap_or(top);
    (width as f64 / 2.0).ceil()
}
