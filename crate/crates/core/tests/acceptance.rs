//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode};

use lattice_wigner::analytic::*;
use lattice_wigner::continuous::*;
use lattice_wigner::negativity::matrix_negativity;
use lattice_wigner::numerics::{bessel_jn, bessel_jn_orders, theta3};
use lattice_wigner::walk::*;
use lattice_wigner::wigner::{
    marginal_position, reconstruct_density, trace_product, wigner_of_density, wigner_of_pure,
};
use lattice_wigner::{DensityOperator, KGrid, LatticeWindow, PureState, SpinMatrix, WignerMatrix, C64};
use ndarray::Array2;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<Vec<Check>, Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Outcome);

enum Check {
    Below(&'static str, f64, f64),
    Above(&'static str, f64, f64),
}

impl Check {
    fn passed(&self) -> bool {
        match self {
            Check::Below(_, v, tol) => v.is_finite() && v < tol,
            Check::Above(_, v, bound) => v.is_finite() && v > bound,
        }
    }

    fn describe(&self) -> String {
        match self {
            Check::Below(label, v, tol) => format!("{label} {v:.2e} < {tol:.0e}"),
            Check::Above(label, v, bound) => format!("{label} {v:.3} > {bound}"),
        }
    }
}

const UP: [C64; 2] = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
const DOWN: [C64; 2] = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];

fn random_density(rng: &mut StdRng, window: LatticeWindow) -> DensityOperator {
    let d = window.dim();
    let g = Array2::from_shape_fn((d, d), |_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let rho = g.dot(&g.t().mapv(|v| v.conj()));
    let tr: C64 = rho.diag().sum();
    DensityOperator::new(window, rho / tr).expect("square")
}

fn ac1() -> Outcome {
    let window = LatticeWindow::symmetric(12);
    let kgrid = KGrid::new(52)?;
    let mut rng = StdRng::seed_from_u64(20240611);
    let states: Vec<DensityOperator> = (0..50).map(|_| random_density(&mut rng, window)).collect();
    let (mut axioms, mut inverse, mut pairing) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut prev: Option<(DensityOperator, WignerMatrix)> = None;
    for rho in &states {
        let w = wigner_of_density(rho, &kgrid)?;
        let norm = (w.normalization() - C64::new(1.0, 0.0)).norm();
        let phase = w.phase_property_error().ok_or("n_k must be even")?;
        axioms = axioms.max(w.hermiticity_error()).max(norm).max(phase).max(w.diagonal_imag_max());
        inverse = inverse.max(reconstruct_density(&w)?.max_abs_diff(rho)?);
        if let Some((rho_c, w_c)) = &prev {
            let (c, d) = (rho_c.matrix(), rho.matrix());
            let dense: C64 = (0..c.nrows()).flat_map(|i| (0..c.nrows()).map(move |j| c[[i, j]] * d[[j, i]])).sum();
            pairing = pairing.max((trace_product(w_c, &w)? - dense).norm());
        }
        prev = Some((rho.clone(), w));
    }
    Ok(vec![
        Check::Below("axioms", axioms, 1e-12),
        Check::Below("reconstruct", inverse, 1e-12),
        Check::Below("trace_product", pairing, 1e-10),
    ])
}

fn ac2() -> Outcome {
    let window = LatticeWindow::symmetric(24);
    let kgrid = KGrid::new(128)?;
    let dd = DoubleDeltaSpec { n1: -5, n2: 7, alpha: C64::new(0.6, -0.8) };
    let dd_dev = double_delta_wigner_closed(&dd, &window, &kgrid)?
        .max_abs_diff(&wigner_of_pure(&double_delta_state(&dd, &window)?, &kgrid)?)?;
    let tg = TwoGaussianSpec { a_center: 6, b_center: -6, sigma: 1.5 };
    let tg_dev = two_gaussian_wigner_closed(&tg, &window, &kgrid)?
        .max_abs_diff(&wigner_of_pure(&two_gaussian_state(&tg, &window)?, &kgrid)?)?;
    let narrow = TwoGaussianSpec { sigma: 0.05, ..tg };
    let delta = DoubleDeltaSpec { n1: 6, n2: -6, alpha: C64::new(1.0, 0.0) };
    let degen = two_gaussian_wigner_closed(&narrow, &window, &kgrid)?
        .max_abs_diff(&double_delta_wigner_closed(&delta, &window, &kgrid)?)?;
    Ok(vec![
        Check::Below("double delta", dd_dev, 1e-8),
        Check::Below("two Gaussian", tg_dev, 1e-8),
        Check::Below("σ=0.05 degeneration", degen, 1e-6),
    ])
}

fn gaussian_start(spin: [C64; 2]) -> Result<(LatticeWindow, KGrid, DensityOperator), Box<dyn std::error::Error>> {
    let window = LatticeWindow::symmetric(40);
    let kgrid = KGrid::exact_for_width(window.width());
    let psi = product_gaussian_state(&GaussianSpec { center: 3, sigma: 2.0 }, spin, &window)?;
    Ok((window, kgrid, DensityOperator::from_pure(&psi)))
}

fn ac3() -> Outcome {
    let (_, kgrid, rho) = gaussian_start(UP)?;
    let w0 = wigner_of_density(&rho, &kgrid)?;
    let prop = BesselPropagator::spinless(1.0, 1.0)?;
    let period = prop.propagate(&w0, 2.0 * PI)?.max_abs_diff(&w0)?;
    let times: Vec<f64> = (0..=8).map(|i| i as f64 * PI / 4.0).collect();
    let rk4 = von_neumann_rk4(&rho, &HamiltonianSpec::linear(1.0, 1.0, false), &times, &Rk4Config::default())?;
    let mut dev = 0.0_f64;
    for (&t, r) in times.iter().zip(&rk4.snapshots) {
        dev = dev.max(prop.propagate(&w0, t)?.max_abs_diff(&wigner_of_density(r, &kgrid)?)?);
    }
    Ok(vec![Check::Below("period return", period, 1e-8), Check::Below("closed form vs RK4 on [0,2π]", dev, 1e-6)])
}

fn m_first_moment(w: &WignerMatrix, alpha: usize) -> f64 {
    let sites = marginal_position(w).sites;
    let total: f64 = sites.iter().map(|(_, b)| b.get(alpha, alpha).re).sum();
    sites.iter().map(|(n, b)| 2.0 * *n as f64 * b.get(alpha, alpha).re).sum::<f64>() / total
}

fn ac4() -> Outcome {
    let h = 1.0 / 2f64.sqrt();
    let (_, kgrid, rho) = gaussian_start([C64::new(h, 0.0), C64::new(h, 0.0)])?;
    let w0 = wigner_of_density(&rho, &kgrid)?;
    let split0 = m_first_moment(&w0, 0) - m_first_moment(&w0, 1);
    let w1 = spin_linear_propagate(&w0, 1.0, 1.0, 1.0)?;
    let split1 = m_first_moment(&w1, 0) - m_first_moment(&w1, 1);
    let rk4 = von_neumann_rk4(&rho, &HamiltonianSpec::linear(1.0, 1.0, true), &[1.0], &Rk4Config::default())?;
    let dev = w1.max_abs_diff(&wigner_of_density(&rk4.snapshots[0], &kgrid)?)?;
    Ok(vec![
        Check::Below("|split at t=0|", split0.abs(), 1e-12),
        Check::Above("|⟨m⟩00-⟨m⟩11| at t=1", split1.abs(), 0.5),
        Check::Below("four entries vs RK4", dev, 1e-6),
    ])
}

fn ac5() -> Outcome {
    let window = LatticeWindow::symmetric(36);
    let kgrid = KGrid::exact_for_width(window.width());
    let psi = product_gaussian_state(
        &GaussianSpec { center: 0, sigma: 2.0 },
        [C64::new(0.8, 0.0), C64::new(0.0, 0.6)],
        &window,
    )?;
    let rho = DensityOperator::from_pure(&psi);
    let w0 = wigner_of_density(&rho, &kgrid)?;
    let gamma = 0.3;
    let fine = Rk4Config { dt: Some(0.01), ..Rk4Config::default() };
    let idle = HamiltonianSpec::hopping(0.0);
    let times = [1.0, 2.5, 5.0];

    // σ_z with H = 0: off-diagonal ratio against e^{-2γt}, closed form and RK4.
    let j0 = (0..w0.values().len()).max_by(|&a, &b| {
        let n = |i: usize| w0.values().as_slice().unwrap()[i].get(0, 1).norm();
        n(a).total_cmp(&n(b))
    });
    let idx = j0.ok_or("empty grid")?;
    let w01 = |w: &WignerMatrix| w.values().as_slice().unwrap()[idx].get(0, 1);
    let rk_z = lindblad_rk4(&rho, &idle, &NoiseSpec::channel(Channel::SigmaZ, gamma), &times, &fine)?;
    let mut ratio = 0.0_f64;
    for (&t, r) in times.iter().zip(&rk_z.snapshots) {
        let expect = (-2.0 * gamma * t).exp();
        let closed = lindblad_wigner_closed(&w0, Channel::SigmaZ, gamma, t)?;
        let numeric = wigner_of_density(r, &kgrid)?;
        ratio = ratio.max((w01(&closed) / w01(&w0) - expect).norm()).max((w01(&numeric) / w01(&w0) - expect).norm());
    }

    // σ_x with H = 0: diagonal mixing formulas against RK4.
    let rk_x = lindblad_rk4(&rho, &idle, &NoiseSpec::channel(Channel::SigmaX, gamma), &times, &fine)?;
    let mut mixing = 0.0_f64;
    for (&t, r) in times.iter().zip(&rk_x.snapshots) {
        let e = (-2.0 * gamma * t).exp();
        let numeric = wigner_of_density(r, &kgrid)?;
        for (b0, b) in w0.values().iter().zip(numeric.values()) {
            let d00 = b0.get(0, 0) * (0.5 * (1.0 + e)) + b0.get(1, 1) * (0.5 * (1.0 - e));
            let d11 = b0.get(1, 1) * (0.5 * (1.0 + e)) + b0.get(0, 0) * (0.5 * (1.0 - e));
            mixing = mixing.max((b.get(0, 0) - d00).norm()).max((b.get(1, 1) - d11).norm());
        }
    }

    // Both channels on top of free hopping, closed form vs RK4.
    let hop = HamiltonianSpec::hopping(1.0);
    let hop_times = [1.0, 2.0, 3.0];
    let mut two_path = 0.0_f64;
    for channel in [Channel::SigmaZ, Channel::SigmaX] {
        let rk = lindblad_rk4(&rho, &hop, &NoiseSpec::channel(channel, gamma), &hop_times, &Rk4Config::default())?;
        for (&t, r) in hop_times.iter().zip(&rk.snapshots) {
            let closed = lindblad_wigner_closed(&free_propagate(&w0, 1.0, t)?, channel, gamma, t)?;
            two_path = two_path.max(closed.max_abs_diff(&wigner_of_density(r, &kgrid)?)?);
        }
    }
    Ok(vec![
        Check::Below("σ_z ratio", ratio, 1e-8),
        Check::Below("σ_x mixing", mixing, 1e-8),
        Check::Below("closed form vs RK4 with hopping", two_path, 1e-7),
    ])
}

fn ac6() -> Outcome {
    let window = LatticeWindow::symmetric(30);
    let kgrid = KGrid::exact_for_width(window.width());
    let h = 1.0 / 2f64.sqrt();
    let start = PureState::product(
        window,
        |n| C64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0),
        [C64::new(h, 0.0), C64::new(0.0, h)],
    )?;
    let mut dev = 0.0_f64;
    for theta in [0.0, PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0] {
        let coin = CoinSpec::new(theta)?;
        let mut rho = DensityOperator::from_pure(&start);
        for _ in 0..20 {
            let w = wigner_of_density(&rho, &kgrid)?;
            rho = qw_step_state(&rho, &coin)?;
            dev = dev.max(qw_step_wigner(&w, &coin)?.max_abs_diff(&wigner_of_density(&rho, &kgrid)?)?);
        }
    }
    Ok(vec![Check::Below("recursion vs state step", dev, 1e-12)])
}

fn ac7() -> Outcome {
    let window = LatticeWindow::symmetric(8);
    let kgrid = KGrid::exact_for_width(window.width());
    let spec = DoubleDeltaSpec { n1: -3, n2: 4, alpha: C64::new(1.0, 0.0) };
    let rho0 = DensityOperator::from_pure(&double_delta_state(&spec, &window)?);
    let (mut closed_dev, mut eta_dev) = (0.0_f64, 0.0_f64);
    for basis in [ProjectionBasis::Spin, ProjectionBasis::Site] {
        for p in [0.1, 0.5, 0.9] {
            let noise = ProjectiveNoiseSpec::new(p, basis)?;
            let mut rho = rho0.clone();
            for t in 0..=10u32 {
                if t > 0 {
                    rho = projective_map(&rho, &noise);
                }
                let w = wigner_of_density(&rho, &kgrid)?;
                closed_dev = closed_dev.max(w.max_abs_diff(&iterated_cat_wigner(-3, 4, p, t, &window, &kgrid)?)?);
                eta_dev = eta_dev.max((matrix_negativity(&w)?.eta - (1.0 - p).powi(t as i32)).abs());
            }
        }
    }
    Ok(vec![
        Check::Below("iterated cat vs closed form", closed_dev, 1e-13),
        Check::Below("η(t) vs (1-p)^t", eta_dev, 1e-12),
    ])
}

fn ac8() -> Outcome {
    let window = LatticeWindow::symmetric(6);
    let kgrid = KGrid::exact_for_width(window.width());
    let mut cat_dev = 0.0_f64;
    let mut cats = Vec::new();
    for beta in [0.0, 0.5, 1.0, 2.0] {
        let spec = CatSpec { a_site: -2, b_site: 3, beta: C64::from_polar(beta, 0.7), spin1: UP, spin2: DOWN };
        let w = wigner_of_pure(&cat_state(&spec, &window)?, &kgrid)?;
        cat_dev = cat_dev.max((matrix_negativity(&w)?.eta - 2.0 * beta / (1.0 + beta * beta)).abs());
        cats.push(w);
    }
    let mut werner_dev = 0.0_f64;
    let mut werners = Vec::new();
    for z in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let w = wigner_of_density(&werner_density(&WernerSpec { a_site: -2, b_site: 3, z }, &window)?, &kgrid)?;
        werner_dev = werner_dev.max((matrix_negativity(&w)?.eta - z).abs());
        werners.push(w);
    }
    let mut rng = StdRng::seed_from_u64(7);
    let mut rotation = 0.0_f64;
    for _ in 0..20 {
        let axis = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(0.1..1.0)];
        let u = SpinMatrix::su2(axis, rng.random_range(0.0..2.0 * PI));
        for w in cats.iter().chain(&werners) {
            let rotated = w.map_blocks(|b| b.conjugate_by(&u));
            rotation = rotation.max((matrix_negativity(&rotated)?.eta - matrix_negativity(w)?.eta).abs());
        }
    }
    Ok(vec![
        Check::Below("cat 2|β|/(1+|β|²)", cat_dev, 1e-10),
        Check::Below("Werner z", werner_dev, 1e-10),
        Check::Below("SU(2) invariance", rotation, 1e-10),
    ])
}

/// `(1/2π) ∫ e^{i(z sin τ - nτ)} dτ` by the trapezoid rule, spectrally
/// accurate for this periodic integrand.
fn bessel_quadrature(n: i64, z: f64) -> f64 {
    let points = 1024;
    let h = 2.0 * PI / points as f64;
    (0..points).map(|j| (z * (j as f64 * h).sin() - n as f64 * j as f64 * h).cos()).sum::<f64>() / points as f64
}

fn ac9() -> Outcome {
    let mut bessel = 0.0_f64;
    for z in [0.5, 2.0, 8.0] {
        for n in -20..=20 {
            bessel = bessel.max((bessel_jn(n, z)? - bessel_quadrature(n, z)).abs());
        }
    }
    let q = (-1.0 / (1.5f64 * 1.5)).exp();
    let partial: f64 = (-200i64..=200).map(|n| q.powi((n * n) as i32)).sum();
    let theta = (theta3(C64::new(0.0, 0.0), q)? - C64::new(partial, 0.0)).norm();
    let mut norm = 0.0_f64;
    for z in [0.5f64, 2.0, 8.0, 25.0] {
        let top = 20usize.max((2.0 * z).ceil() as usize);
        let j = bessel_jn_orders(top, z)?;
        let sum = j[0] * j[0] + 2.0 * j[1..].iter().map(|v| v * v).sum::<f64>();
        norm = norm.max((sum - 1.0).abs());
    }
    Ok(vec![
        Check::Below("Bessel vs quadrature", bessel, 1e-10),
        Check::Below("θ₃ vs partial sum", theta, 1e-12),
        Check::Below("Σ J_n² - 1", norm, 1e-8),
    ])
}

fn ac10() -> Outcome {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/fig2.json");
    let dirs = [tempfile::tempdir()?, tempfile::tempdir()?];
    for d in &dirs {
        let status = Command::new(env!("CARGO_BIN_EXE_latwig"))
            .args(["evolve", "--quiet", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(d.path())
            .status()?;
        if !status.success() {
            return Err(format!("latwig exited with {status}").into());
        }
    }
    let mut names: Vec<_> =
        std::fs::read_dir(dirs[0].path())?.map(|e| e.map(|e| e.file_name())).collect::<Result<_, _>>()?;
    names.sort();
    let mut differing = 0.0;
    for name in &names {
        let (a, b) = (std::fs::read(dirs[0].path().join(name))?, std::fs::read(dirs[1].path().join(name))?);
        let same = if name == "manifest.json" {
            let strip = |bytes: &[u8]| -> Result<serde_json::Value, serde_json::Error> {
                let mut v: serde_json::Value = serde_json::from_slice(bytes)?;
                v["wall_clock_seconds"] = serde_json::Value::Null;
                Ok(v)
            };
            strip(&a)? == strip(&b)?
        } else {
            a == b
        };
        if !same {
            differing += 1.0;
        }
    }
    Ok(vec![Check::Above("files compared", names.len() as f64, 10.0), Check::Below("differing files", differing, 0.5)])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 transform axioms", ac1),
        ("AC2 closed-form golden states", ac2),
        ("AC3 Bloch oscillations", ac3),
        ("AC4 spin-dependent splitting", ac4),
        ("AC5 Lindblad closed forms", ac5),
        ("AC6 quantum walk recursion", ac6),
        ("AC7 projective decoherence", ac7),
        ("AC8 negativity values", ac8),
        ("AC9 special functions", ac9),
        ("AC10 CLI determinism", ac10),
    ];
    let mut failures = 0;
    for (name, f) in criteria {
        match f() {
            Ok(checks) => {
                let ok = checks.iter().all(Check::passed);
                let detail: Vec<String> = checks.iter().map(Check::describe).collect();
                println!("[{}] {name}: {}", if ok { "PASS" } else { "FAIL" }, detail.join("; "));
                if !ok {
                    failures += 1;
                }
            }
            Err(e) => {
                println!("[FAIL] {name}: error: {e}");
                failures += 1;
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
