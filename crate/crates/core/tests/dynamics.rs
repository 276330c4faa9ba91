use std::f64::consts::PI;

use lattice_wigner::analytic::{gaussian_wigner_closed, product_gaussian_state, GaussianSpec};
use lattice_wigner::continuous::*;
use lattice_wigner::wigner::{
    marginal_momentum, marginal_position, wigner_of_density, wigner_of_operator, wigner_of_pure,
};
use lattice_wigner::{DensityOperator, KGrid, LatticeWindow, SpinMatrix, WignerMatrix, C64};

const UP: [C64; 2] = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];

fn fig2() -> (LatticeWindow, KGrid, DensityOperator) {
    let window = LatticeWindow::symmetric(40);
    let kgrid = KGrid::new(164).unwrap();
    let psi = product_gaussian_state(&GaussianSpec { center: 3, sigma: 2.0 }, UP, &window).unwrap();
    (window, kgrid, DensityOperator::from_pure(&psi))
}

fn fig3() -> (LatticeWindow, KGrid, DensityOperator) {
    let window = LatticeWindow::symmetric(40);
    let kgrid = KGrid::new(164).unwrap();
    let h = 1.0 / 2f64.sqrt();
    let psi =
        product_gaussian_state(&GaussianSpec { center: 3, sigma: 2.0 }, [C64::new(h, 0.0), C64::new(h, 0.0)], &window)
            .unwrap();
    (window, kgrid, DensityOperator::from_pure(&psi))
}

fn first_moment(w: &WignerMatrix, alpha: usize) -> f64 {
    let m = marginal_position(w);
    let total: f64 = m.sites.iter().map(|(_, b)| b.get(alpha, alpha).re).sum();
    m.sites.iter().map(|(n, b)| 2.0 * *n as f64 * b.get(alpha, alpha).re).sum::<f64>() / total
}

#[test]
fn zero_hamiltonian_is_identity() {
    let (_, _, rho) = fig2();
    let res = von_neumann_rk4(&rho, &HamiltonianSpec::hopping(0.0), &[0.0, 1.0], &Rk4Config::default()).unwrap();
    assert!(res.snapshots[1].max_abs_diff(&rho).unwrap() < 1e-15);
}

#[test]
fn bloch_period_closed_form() {
    let (_, kgrid, rho) = fig2();
    let w0 = wigner_of_density(&rho, &kgrid).unwrap();
    let prop = BesselPropagator::spinless(1.0, 1.0).unwrap();
    assert!(prop.propagate(&w0, 0.0).unwrap().max_abs_diff(&w0).unwrap() < 1e-15);
    let period = prop.bloch_period().unwrap();
    let back = prop.propagate(&w0, period).unwrap();
    assert!(back.max_abs_diff(&w0).unwrap() < 1e-8);
}

#[test]
fn closed_form_matches_rk4_linear_potential() {
    let (_, kgrid, rho) = fig2();
    let w0 = wigner_of_density(&rho, &kgrid).unwrap();
    let prop = BesselPropagator::spinless(1.0, 1.0).unwrap();
    let times = [0.0, 1.6, 3.1, 4.7];
    let res = von_neumann_rk4(&rho, &HamiltonianSpec::linear(1.0, 1.0, false), &times, &Rk4Config::default()).unwrap();
    for (t, snap) in times.iter().zip(&res.snapshots) {
        assert!((snap.trace().re - 1.0).abs() < 1e-10);
        assert!((snap.purity() - 1.0).abs() < 1e-8);
        let w_rk4 = wigner_of_density(snap, &kgrid).unwrap();
        let w_closed = prop.propagate(&w0, *t).unwrap();
        let dev = w_rk4.max_abs_diff(&w_closed).unwrap();
        assert!(dev < 1e-6, "t = {t}: deviation {dev:e}");
    }
}

#[test]
fn momentum_marginal_drifts_linearly() {
    let (_, kgrid, rho) = fig2();
    let w0 = wigner_of_density(&rho, &kgrid).unwrap();
    let t = 1.3;
    let wt = linear_potential_propagate(&w0, 1.0, 1.0, t).unwrap();
    let spectral = lattice_wigner::numerics::Spectral::new(&kgrid);
    let p0: Vec<C64> = marginal_momentum(&w0).iter().map(|b| b.get(0, 0)).collect();
    let pt: Vec<C64> = marginal_momentum(&wt).iter().map(|b| b.get(0, 0)).collect();
    // p_t(k) = p_0(k + λat)
    let expect = spectral.shifted(&p0, t);
    for (a, b) in pt.iter().zip(&expect) {
        assert!((a - b).norm() < 1e-8);
    }
}

#[test]
fn spin_coupled_closed_form_matches_rk4() {
    let (_, kgrid, rho) = fig3();
    let w0 = wigner_of_density(&rho, &kgrid).unwrap();
    let times = [1.0, 2.0];
    let res = von_neumann_rk4(&rho, &HamiltonianSpec::linear(1.0, 1.0, true), &times, &Rk4Config::default()).unwrap();
    for (t, snap) in times.iter().zip(&res.snapshots) {
        let w_rk4 = wigner_of_density(snap, &kgrid).unwrap();
        let w_closed = spin_linear_propagate(&w0, 1.0, 1.0, *t).unwrap();
        let dev = w_rk4.max_abs_diff(&w_closed).unwrap();
        assert!(dev < 1e-6, "t = {t}: deviation {dev:e}");
    }
}

#[test]
fn spin_components_split() {
    let (_, kgrid, rho) = fig3();
    let w0 = wigner_of_density(&rho, &kgrid).unwrap();
    let w1 = spin_linear_propagate(&w0, 1.0, 1.0, 1.0).unwrap();
    let d0 = first_moment(&w0, 0) - first_moment(&w0, 1);
    let d1 = first_moment(&w1, 0) - first_moment(&w1, 1);
    assert!(d0.abs() < 1e-12);
    assert!(d1.abs() > 0.5, "split {d1}");
    // Spin component 1 is the spin component 0 trajectory with λ → -λ.
    let flipped = linear_potential_propagate(&w0, 1.0, -1.0, 1.0).unwrap();
    assert!((flipped.component(0, 0) - w1.component(1, 1)).iter().all(|v| v.norm() < 1e-10));
}

#[test]
fn wigner_rhs_matches_commutator_for_polynomials() {
    let window = LatticeWindow::new(-10, 10, 0.7).unwrap();
    let kgrid = KGrid::new(44).unwrap();
    let h = 1.0 / 2f64.sqrt();
    let psi =
        product_gaussian_state(&GaussianSpec { center: 1, sigma: 1.2 }, [C64::new(h, 0.0), C64::new(0.0, h)], &window)
            .unwrap();
    let rho = DensityOperator::from_pure(&psi);
    let w = wigner_of_density(&rho, &kgrid).unwrap();
    for spin_coupled in [false, true] {
        for coeffs in [vec![0.0, 0.8], vec![0.3, -0.2, 0.5], vec![0.0, 0.1, -0.05, 0.02, 0.01]] {
            let ham = HamiltonianSpec { j_hop: 0.9, potential: Potential::Polynomial { coeffs }, spin_coupled };
            let rhs = wigner_evolution_rhs(&w, &ham).unwrap();
            let oracle = wigner_of_operator(&window, &von_neumann_rhs(&rho, &ham).unwrap(), &kgrid).unwrap();
            let dev = rhs.max_abs_diff(&oracle).unwrap();
            assert!(dev < 1e-11, "spin_coupled={spin_coupled}: {dev:e}");
        }
    }
}

#[test]
fn wigner_rhs_finite_difference_quadratic() {
    let window = LatticeWindow::symmetric(12);
    let kgrid = KGrid::new(52).unwrap();
    let psi = product_gaussian_state(&GaussianSpec { center: 0, sigma: 1.5 }, UP, &window).unwrap();
    let rho = DensityOperator::from_pure(&psi);
    let ham = HamiltonianSpec {
        j_hop: 1.0,
        potential: Potential::Polynomial { coeffs: vec![0.0, 0.0, 0.1] },
        spin_coupled: false,
    };
    let w0 = wigner_of_density(&rho, &kgrid).unwrap();
    let rhs = wigner_evolution_rhs(&w0, &ham).unwrap();
    let mut prev = f64::INFINITY;
    for dt in [1e-2, 1e-3] {
        let res = von_neumann_rk4(&rho, &ham, &[dt], &Rk4Config { dt: Some(dt), ..Default::default() }).unwrap();
        let w1 = wigner_of_density(&res.snapshots[0], &kgrid).unwrap();
        let mut fd = w1.clone();
        fd.add_scaled(&w0, C64::new(-1.0, 0.0)).unwrap();
        let fd = fd.scaled(C64::new(1.0 / dt, 0.0));
        let err = fd.max_abs_diff(&rhs).unwrap();
        assert!(err < 0.2 * dt, "dt = {dt}: {err:e}");
        assert!(err < prev);
        prev = err;
    }
}

#[test]
fn free_evolution_keeps_momentum_marginal() {
    let window = LatticeWindow::symmetric(30);
    let kgrid = KGrid::new(128).unwrap();
    let wl = gaussian_wigner_closed(&GaussianSpec { center: 0, sigma: 2.0 }, &window, &kgrid).unwrap();
    let w0 = wl.times_spin(&SpinMatrix::basis_projector(0));
    let res =
        wigner_rk4(&w0, &HamiltonianSpec::hopping(1.0), &NoiseSpec::none(), &[1.5], &Rk4Config::default()).unwrap();
    let before = marginal_momentum(&w0);
    let after = marginal_momentum(&res.snapshots[0]);
    for (a, b) in before.iter().zip(&after) {
        assert!((*a - *b).max_abs() < 1e-10);
    }
    let closed = free_propagate(&w0, 1.0, 1.5).unwrap();
    assert!(closed.max_abs_diff(&res.snapshots[0]).unwrap() < 1e-8);
}

#[test]
fn wigner_rk4_matches_density_rk4_spin_coupled() {
    let window = LatticeWindow::symmetric(20);
    let kgrid = KGrid::new(84).unwrap();
    let h = 1.0 / 2f64.sqrt();
    let psi =
        product_gaussian_state(&GaussianSpec { center: 2, sigma: 1.5 }, [C64::new(h, 0.0), C64::new(h, 0.0)], &window)
            .unwrap();
    let rho = DensityOperator::from_pure(&psi);
    let ham = HamiltonianSpec {
        j_hop: 1.0,
        potential: Potential::Polynomial { coeffs: vec![0.0, 0.5, 0.02] },
        spin_coupled: true,
    };
    let noise = NoiseSpec::channel(Channel::SigmaX, 0.2);
    let cfg = Rk4Config::default();
    let a = lindblad_rk4(&rho, &ham, &noise, &[1.0], &cfg).unwrap();
    let b = wigner_rk4(&wigner_of_density(&rho, &kgrid).unwrap(), &ham, &noise, &[1.0], &cfg).unwrap();
    let dev = wigner_of_density(&a.snapshots[0], &kgrid).unwrap().max_abs_diff(&b.snapshots[0]).unwrap();
    assert!(dev < 1e-9, "{dev:e}");
}

#[test]
fn lindblad_closed_forms_against_rk4() {
    let window = LatticeWindow::symmetric(20);
    let kgrid = KGrid::new(84).unwrap();
    let h = 1.0 / 2f64.sqrt();
    let psi =
        product_gaussian_state(&GaussianSpec { center: 0, sigma: 1.5 }, [C64::new(h, 0.0), C64::new(0.0, h)], &window)
            .unwrap();
    let rho = DensityOperator::from_pure(&psi);
    let w0 = wigner_of_density(&rho, &kgrid).unwrap();
    let gamma = 0.3;
    let times = [0.5, 1.0, 2.0];
    for channel in [Channel::SigmaZ, Channel::SigmaX] {
        let res = lindblad_rk4(
            &rho,
            &HamiltonianSpec::hopping(1.0),
            &NoiseSpec::channel(channel, gamma),
            &times,
            &Rk4Config::default(),
        )
        .unwrap();
        for (t, snap) in times.iter().zip(&res.snapshots) {
            assert!((snap.trace().re - 1.0).abs() < 1e-10);
            let w_h = free_propagate(&w0, 1.0, *t).unwrap();
            let closed = lindblad_wigner_closed(&w_h, channel, gamma, *t).unwrap();
            let dev = wigner_of_density(snap, &kgrid).unwrap().max_abs_diff(&closed).unwrap();
            assert!(dev < 1e-7, "{channel:?} t = {t}: {dev:e}");
        }
    }
    assert!(lindblad_wigner_closed(&w0, Channel::SigmaY, gamma, 1.0).is_err());
}

#[test]
fn boundary_leak_is_reported() {
    let window = LatticeWindow::symmetric(6);
    let psi = product_gaussian_state(&GaussianSpec { center: 0, sigma: 1.0 }, UP, &window).unwrap();
    let rho = DensityOperator::from_pure(&psi);
    let err = von_neumann_rk4(&rho, &HamiltonianSpec::hopping(1.0), &[5.0], &Rk4Config::default()).unwrap_err();
    assert!(err.is_numerical(), "{err}");
    let w0 = wigner_of_pure(&psi, &KGrid::exact_for_width(window.width())).unwrap();
    assert!(free_propagate(&w0, 1.0, 5.0).unwrap_err().is_numerical());
}

#[test]
fn step_too_large_is_refused() {
    let (_, _, rho) = fig2();
    let cfg = Rk4Config { dt: Some(0.1), ..Default::default() };
    let err = von_neumann_rk4(&rho, &HamiltonianSpec::linear(1.0, 1.0, false), &[1.0], &cfg).unwrap_err();
    assert!(matches!(err, lattice_wigner::Error::StepTooLarge { .. }));
}

#[test]
fn bloch_period_rk4_path() {
    let (_, kgrid, rho) = fig2();
    let period = 2.0 * PI;
    let res =
        von_neumann_rk4(&rho, &HamiltonianSpec::linear(1.0, 1.0, false), &[period], &Rk4Config::default()).unwrap();
    let w0 = wigner_of_density(&rho, &kgrid).unwrap();
    let wt = wigner_of_density(&res.snapshots[0], &kgrid).unwrap();
    assert!(wt.max_abs_diff(&w0).unwrap() < 1e-5);
}
