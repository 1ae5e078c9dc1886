use std::sync::Arc;

use num_complex::Complex64;

use super::*;
use crate::fields::random_smooth_field;
use crate::spectral::{diff_l2, sobolev_norm};

fn grid() -> Arc<Grid> {
    Grid::new(8, 256, 32.0 * std::f64::consts::PI).unwrap()
}

fn cos_profile_hat(grid: &Arc<Grid>, q: f64, scale: f64) -> Vec<Complex64> {
    let vals: Vec<f64> = (0..grid.nv())
        .map(|b| scale * (q * grid.v_point(b)).cos())
        .collect();
    profile_hat(grid, &vals)
}

fn sin_profile_hat(grid: &Arc<Grid>, q: f64, scale: f64) -> Vec<Complex64> {
    let vals: Vec<f64> = (0..grid.nv())
        .map(|b| scale * (q * grid.v_point(b)).sin())
        .collect();
    profile_hat(grid, &vals)
}

#[test]
fn profile_round_trip_and_norms() {
    let g = grid();
    let vals: Vec<f64> = (0..g.nv())
        .map(|b| (g.v_point(b)).sin() + 0.3 * (2.0 * g.v_point(b)).cos())
        .collect();
    let hat = profile_hat(&g, &vals);
    let back = profile_values(&g, &hat);
    for (a, b) in vals.iter().zip(back.iter()) {
        assert!((a - b).abs() < 1e-12);
    }
    // L^2(dv) quadrature oracle
    let dv = g.lv() / g.nv() as f64;
    let quad = (vals.iter().map(|v| v * v).sum::<f64>() * dv).sqrt();
    let spec = profile_h_norm(&g, &hat, 0.0);
    assert!((quad - spec).abs() < 1e-10 * spec);
    // interpolant hits the lattice values
    for b in [0usize, 17, 101] {
        assert!((profile_eval(&g, &hat, g.v_point(b)) - vals[b]).abs() < 1e-11);
    }
}

#[test]
fn zero_source_gives_identity_coordinates() {
    let g = grid();
    let zeros = vec![Complex64::ZERO; g.nv()];
    let mut solver = ShiftSolver::new(&g, 1e-3);
    solver.start(0.0, &zeros);
    for n in 1..=20 {
        solver.advance(n as f64 * 0.1, &zeros).unwrap();
    }
    let coords = CoordinateState::build(&solver, &zeros, &zeros).unwrap();
    for b in 0..g.nv() {
        assert!((coords.v_of_y[b] - g.v_point(b)).abs() < 1e-14);
        assert_eq!(coords.phi_of_y[b], 0.0);
        assert_eq!(coords.g[b], 0.0);
        assert_eq!(coords.h[b], 0.0);
        assert_eq!(coords.hbar[b], 0.0);
        assert!((coords.vprime[b] - 1.0).abs() < 1e-14);
    }
}

#[test]
fn decaying_mode_source_matches_closed_form() {
    // <U^x>(t, y) = e^{-nu q^2 t} cos(q y): the per-frequency quadrature is
    // exact (constant integrand after the integrating factor) and
    // Phi(t, y) = t e^{-nu q^2 t} cos(q y)
    let g = grid();
    let nu = 0.01;
    let q = 1.0;
    let mut solver = ShiftSolver::new(&g, nu);
    solver.start(0.0, &cos_profile_hat(&g, q, 1.0));
    let dt = 0.01f64;
    let t_end = 2.0f64;
    let steps = (t_end / dt).round() as usize;
    for n in 1..=steps {
        let t = n as f64 * dt;
        solver.advance(t, &cos_profile_hat(&g, q, (-nu * q * q * t).exp())).unwrap();
    }
    let phi = profile_values(&g, solver.w_hat());
    let amp = t_end * (-nu * q * q * t_end).exp();
    for b in 0..g.nv() {
        let expected = amp * (q * g.v_point(b)).cos();
        assert!(
            (phi[b] - expected).abs() < 1e-8,
            "b = {b}: {} vs {expected}",
            phi[b]
        );
    }
}

#[test]
fn inviscid_shift_is_a_plain_time_integral() {
    // nu = 0 and source a(t) cos(q y) with linear a: trapezoid is exact
    let g = grid();
    let q = 0.5;
    let mut solver = ShiftSolver::new(&g, 0.0);
    let amp = |t: f64| 1.0 + 2.0 * t;
    solver.start(0.0, &cos_profile_hat(&g, q, amp(0.0)));
    let dt = 0.25;
    for n in 1..=8 {
        let t = n as f64 * dt;
        solver.advance(t, &cos_profile_hat(&g, q, amp(t))).unwrap();
    }
    let t = 2.0;
    let integral = t + t * t; // int_0^2 (1 + 2 tau) d tau
    let phi = profile_values(&g, solver.w_hat());
    for b in 0..g.nv() {
        let expected = integral * (q * g.v_point(b)).cos();
        assert!((phi[b] - expected).abs() < 1e-10);
    }
}

#[test]
fn shift_solver_misuse_is_rejected() {
    let g = grid();
    let zeros = vec![Complex64::ZERO; g.nv()];
    let mut solver = ShiftSolver::new(&g, 0.0);
    assert!(solver.advance(1.0, &zeros).is_err());
    solver.start(0.0, &zeros);
    solver.advance(1.0, &zeros).unwrap();
    assert!(solver.advance(0.5, &zeros).is_err());
}

#[test]
fn coordinate_build_rejects_early_times_and_degeneracy() {
    let g = grid();
    let zeros = vec![Complex64::ZERO; g.nv()];
    let mut solver = ShiftSolver::new(&g, 0.0);
    solver.start(0.0, &zeros);
    solver.advance(0.5, &zeros).unwrap();
    assert!(CoordinateState::build(&solver, &zeros, &zeros).is_err());

    // a shift steep enough to push v' below the diffeomorphism guard
    let t = 2.0;
    let w = sin_profile_hat(&g, 1.0, 1.5 * t);
    assert!(matches!(
        CoordinateState::from_prescribed_shift(&g, t, &w),
        Err(Error::CoordinateDegeneracy { .. })
    ));
}

#[test]
fn prescribed_shift_profiles_are_consistent() {
    // v(y) = y + a sin(y): h = a cos(y(v)), v'' = -a sin(y(v)), and the
    // composition identity v'' = v' d_v v' holds on the v-grid
    let g = grid();
    let t = 2.0;
    let a = 0.01;
    let w = sin_profile_hat(&g, 1.0, a * t);
    let coords = CoordinateState::from_prescribed_shift(&g, t, &w).unwrap();
    for j in (0..g.nv()).step_by(13) {
        let y = coords.y_of_v[j];
        assert!((coords.h[j] - a * y.cos()).abs() < 1e-10);
        assert!((coords.vsecond[j] + a * y.sin()).abs() < 1e-10);
    }
    // residual of v'' - v' d_v v' (symbolic differentiation oracle)
    let vp_hat = profile_hat(&g, &coords.vprime);
    let dvp = profile_values(&g, &profile_derivative(&g, &vp_hat));
    for j in 0..g.nv() {
        let residual = coords.vsecond[j] - coords.vprime[j] * dvp[j];
        assert!(residual.abs() < 1e-10, "j = {j}: {residual}");
    }
    // definitional identity v' d_v C = v' - 1
    let c_hat = profile_hat(&g, &coords.c_of_v);
    let dc = profile_values(&g, &profile_derivative(&g, &c_hat));
    for j in 0..g.nv() {
        let residual = coords.vprime[j] * dc[j] - (coords.vprime[j] - 1.0);
        assert!(residual.abs() < 1e-9, "j = {j}: {residual}");
    }
}

#[test]
fn unperturbed_elliptic_solve_is_exact_in_one_iteration() {
    let g = grid();
    let coords = CoordinateState::identity(&g, 3.0);
    let mut f = random_smooth_field(&g, 5, 4, 20);
    f.coeffs[[0, 0]] = Complex64::ZERO;
    let out = solve_delta_t(&f, &coords, 3.0, 1e-11, 50).unwrap();
    assert_eq!(out.iterations, 1);
    assert!(out.residual < 1e-12);
    // phi equals the flat-Laplacian inverse mode by mode
    for i in 0..g.nx() {
        let Some(k) = g.wavenumber_x(i) else { continue };
        for j in 0..g.nv() {
            let Some(eta) = g.eta(j) else { continue };
            let d = (k * k) as f64 + (eta - k as f64 * 3.0).powi(2);
            if d == 0.0 {
                continue;
            }
            let expected = -f.coeffs[[i, j]] / d;
            assert!((out.phi.coeffs[[i, j]] - expected).norm() < 1e-12);
        }
    }
}

#[test]
fn manufactured_solution_recovery() {
    let g = grid();
    let t = 2.0;
    let w = sin_profile_hat(&g, 1.0, 0.01 * t);
    let coords = CoordinateState::from_prescribed_shift(&g, t, &w).unwrap();
    let mut phi_star = random_smooth_field(&g, 9, 3, 12);
    phi_star.coeffs[[0, 0]] = Complex64::ZERO;
    let f = apply_delta_t(&phi_star, &coords, t).unwrap();
    let out = solve_delta_t(&f, &coords, t, 1e-12, 100).unwrap();
    let err = diff_l2(&out.phi, &phi_star);
    assert!(
        err <= 1e-9 * phi_star.l2_norm(),
        "recovery error {:.3e}",
        err / phi_star.l2_norm()
    );
}

#[test]
fn elliptic_solve_is_linear() {
    let g = grid();
    let t = 2.0;
    let w = sin_profile_hat(&g, 1.0, 0.02 * t);
    let coords = CoordinateState::from_prescribed_shift(&g, t, &w).unwrap();
    let mut f1 = random_smooth_field(&g, 13, 3, 10);
    let mut f2 = random_smooth_field(&g, 14, 3, 10);
    f1.coeffs[[0, 0]] = Complex64::ZERO;
    f2.coeffs[[0, 0]] = Complex64::ZERO;
    let alpha = 2.5;
    let mut combo = f1.clone();
    combo
        .coeffs
        .zip_mut_with(&f2.coeffs, |a, b| *a = *a * alpha + *b);
    let s1 = solve_delta_t(&f1, &coords, t, 1e-12, 100).unwrap().phi;
    let s2 = solve_delta_t(&f2, &coords, t, 1e-12, 100).unwrap().phi;
    let sc = solve_delta_t(&combo, &coords, t, 1e-12, 100).unwrap().phi;
    let mut lin = s1.clone();
    lin.coeffs
        .zip_mut_with(&s2.coeffs, |a, b| *a = *a * alpha + *b);
    let err = diff_l2(&sc, &lin);
    assert!(err <= 1e-10 * sc.l2_norm().max(1e-30), "{err:.3e}");
}

#[test]
fn strong_perturbation_fails_to_contract() {
    let g = grid();
    let t = 2.0;
    // v' swings between 0.55 and 1.45: inside the diffeomorphism guard but
    // far outside the contraction regime
    let w = sin_profile_hat(&g, 1.0, 0.45 * t);
    let coords = CoordinateState::from_prescribed_shift(&g, t, &w).unwrap();
    let mut f = random_smooth_field(&g, 15, 3, 10);
    f.coeffs[[0, 0]] = Complex64::ZERO;
    match solve_delta_t(&f, &coords, t, 1e-12, 60) {
        Err(Error::NonContraction { .. }) => {}
        Ok(out) => panic!("expected non-contraction, converged in {}", out.iterations),
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn identity_remap_is_identity_and_shift_is_translation() {
    let g = grid();
    let coords = CoordinateState::identity(&g, 2.0);
    let f = random_smooth_field(&g, 17, 3, 12);
    let mapped = sheared_to_moving(&f, &coords).unwrap();
    assert!(diff_l2(&mapped, &f) <= 1e-11 * f.l2_norm());

    // constant Phi = c: pure translation in x, phase e^{ikc} on the
    // solver-frame coefficients
    let c = 0.37;
    let mut shifted_coords = CoordinateState::identity(&g, 2.0);
    shifted_coords.phi_of_y = vec![c; g.nv()];
    let mapped = sheared_to_moving(&f, &shifted_coords).unwrap();
    for i in 0..g.nx() {
        let Some(k) = g.wavenumber_x(i) else { continue };
        let phase = Complex64::new((k as f64 * c).cos(), (k as f64 * c).sin());
        for j in 0..g.nv() {
            let expected = f.coeffs[[i, j]] * phase;
            assert!((mapped.coeffs[[i, j]] - expected).norm() < 1e-11);
        }
    }
}

#[test]
fn lab_moving_round_trip() {
    let g = grid();
    let t = 2.0;
    let w = sin_profile_hat(&g, 1.0, 0.01 * t);
    let coords = CoordinateState::from_prescribed_shift(&g, t, &w).unwrap();
    // band-limited lab field, well inside the lattice
    let omega = random_smooth_field(&g, 19, 2, 8);
    let moving = lab_to_moving(&omega, &coords).unwrap();
    let back = moving_to_lab(&moving, &coords).unwrap();
    let err = diff_l2(&back, &omega);
    assert!(
        err <= 1e-8 * omega.l2_norm(),
        "round-trip error {:.3e}",
        err / omega.l2_norm()
    );
}

#[test]
fn composition_preserves_sobolev_norms_at_small_distortion() {
    let g = grid();
    let t = 2.0;
    let w = sin_profile_hat(&g, 1.0, 0.01 * t);
    let coords = CoordinateState::from_prescribed_shift(&g, t, &w).unwrap();
    let gamma = 2.0;
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let f = random_smooth_field(&g, 100 + seed, 3, 10);
        let mapped = resample_v(&f, &coords.y_of_v);
        let ratio = sobolev_norm(&mapped, gamma) / sobolev_norm(&f, gamma);
        worst = worst.max(ratio.max(1.0 / ratio));
    }
    assert!(worst < 1.2, "composition norm ratio {worst}");
}

#[test]
fn streamfunction_transfer_decays_like_t_minus_two() {
    // band-limited forcing through the perturbed inverse Laplacian:
    // || P_neq phi ||_{H^{gamma-2}} per unit forcing falls off as <t>^{-2}
    let g = grid();
    let w0 = sin_profile_hat(&g, 1.0, 0.01);
    let mut f = random_smooth_field(&g, 23, 2, 8);
    f.coeffs[[0, 0]] = Complex64::ZERO;
    for j in 0..g.nv() {
        f.coeffs[[0, j]] = Complex64::ZERO; // nonzero modes only
    }
    let gamma = 4.0;
    let mut ts = Vec::new();
    let mut vals = Vec::new();
    for &t in &[8.0, 12.0, 18.0, 27.0, 40.0, 60.0] {
        let mut w = w0.clone();
        for c in w.iter_mut() {
            *c *= t;
        }
        let coords = CoordinateState::from_prescribed_shift(&g, t, &w).unwrap();
        let out = solve_delta_t(&f, &coords, t, 1e-11, 100).unwrap();
        ts.push(t);
        vals.push(sobolev_norm(&out.phi.project_nonzero_x(), gamma - 2.0));
    }
    let (_, p) = crate::fit::power_fit(&ts, &vals).unwrap();
    assert!((-2.2..=-1.8).contains(&p), "transfer power {p}");
}
