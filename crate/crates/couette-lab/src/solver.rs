//! Time integration of the perturbation vorticity in the sheared frame
//! `z = x - t y`, where the linear shear and the viscous symbol are applied
//! exactly and only the quadratic transport term is stepped explicitly.
//!
//! The stage arithmetic is Lawson's integrating-factor RK4: the exact
//! propagator `exp(-nu int k^2 + (eta - k s)^2 ds)` moves states between
//! stage times, so stiffness from the viscous symbol never restricts dt;
//! the time step is an accuracy knob for the nonlinearity alone,
//! subject to the advective CFL bound checked at start.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use crate::config::{RunConfig, TimeStep};
use crate::coords::{CoordinateState, ShiftSolver};
use crate::diagnostics::{EnergyTrace, TerminalEvent, TraceBuilder, TraceSample};
use crate::error::{Error, Result};
use crate::fields::initial_vorticity;
use crate::linear::viscous_exponent_between;
use crate::spectral::{
    sobolev_norm, to_physical, to_spectral, Grid, PhysicalField, SpectralField,
};

/// Sheared-frame state: `f_hat(t, k, eta)` with `omega(t, x, y) =
/// f(t, x - t y, y)`.
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub f: SpectralField,
}

/// Stability classification of a finished run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Stable,
    Unstable,
    Inconclusive,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Stable => "stable",
            Classification::Unstable => "unstable",
            Classification::Inconclusive => "inconclusive",
        }
    }
}

/// A finished simulation with its trace and summary scalars.
pub struct SimRun {
    pub config: RunConfig,
    pub trace: EnergyTrace,
    pub classification: Classification,
    pub steps_taken: u64,
    pub initial_h_sigma: f64,
    pub epsilon: f64,
}

/// Streamfunction and velocities from vorticity via the sheared
/// Biot-Savart symbols: `phi_hat = -f_hat / (k^2 + (eta - kt)^2)` with the
/// `(0,0)` gauge zero, `u = -(d_v - t d_z) phi`, `w = d_z phi`.
pub fn biot_savart(
    f: &SpectralField,
    t: f64,
) -> (SpectralField, SpectralField, SpectralField) {
    let phi = f.map_symbol(|k, eta| {
        let sheared = eta - k as f64 * t;
        let d = (k * k) as f64 + sheared * sheared;
        if d == 0.0 {
            Complex64::ZERO
        } else {
            Complex64::new(-1.0 / d, 0.0)
        }
    });
    let ux = phi.map_symbol(|k, eta| Complex64::new(0.0, -(eta - k as f64 * t)));
    let uy = phi.map_symbol(|k, _| Complex64::new(0.0, k as f64));
    (phi, ux, uy)
}

/// `-(u d_z + w (d_v - t d_z)) f`, dealiased: the quadratic transport term
/// evaluated pseudo-spectrally.
pub fn nonlinear_term(f: &SpectralField, t: f64) -> Result<SpectralField> {
    let (_, ux, uy) = biot_savart(f, t);
    let fz = f.map_symbol(|k, _| Complex64::new(0.0, k as f64));
    let fv = f.map_symbol(|k, eta| Complex64::new(0.0, eta - k as f64 * t));
    let pu = to_physical(&ux)?;
    let pw = to_physical(&uy)?;
    let pfz = to_physical(&fz)?;
    let pfv = to_physical(&fv)?;
    let mut prod = PhysicalField::zeros(&f.grid);
    for ((o, (a, b)), (c, d)) in prod
        .values
        .iter_mut()
        .zip(pu.values.iter().zip(pfz.values.iter()))
        .zip(pw.values.iter().zip(pfv.values.iter()))
    {
        *o = -(a * b + c * d);
    }
    let mut n = to_spectral(&prod)?;
    n.dealias_mut();
    n.coeffs[[0, 0]] = Complex64::ZERO;
    Ok(n)
}

/// Exact linear propagator between two times as a diagonal multiplier.
fn propagator(grid: &Arc<Grid>, nu: f64, a: f64, b: f64) -> Array2<f64> {
    let mut out = Array2::zeros((grid.nx(), grid.nv()));
    for i in 0..grid.nx() {
        let Some(k) = grid.wavenumber_x(i) else {
            continue;
        };
        for j in 0..grid.nv() {
            let Some(eta) = grid.eta(j) else { continue };
            out[[i, j]] = (-nu * viscous_exponent_between(k, eta, a, b)).exp();
        }
    }
    out
}

fn apply_diag(f: &SpectralField, diag: &Array2<f64>) -> SpectralField {
    let mut out = f.clone();
    out.coeffs.zip_mut_with(diag, |c, &d| *c *= d);
    out
}

fn axpy(y: &mut SpectralField, a: f64, x: &SpectralField) {
    y.coeffs.zip_mut_with(&x.coeffs, |yc, xc| *yc += a * xc);
}

/// One Lawson-RK4 step of size `dt`. Preserves the zero spatial mean and
/// the dealias band; detects blow-up.
pub fn step(state: &SimState, dt: f64, nu: f64) -> Result<SimState> {
    let grid = &state.f.grid;
    let t = state.t;
    let e_half = propagator(grid, nu, t, t + dt / 2.0);
    let e_half2 = propagator(grid, nu, t + dt / 2.0, t + dt);
    let e_full = propagator(grid, nu, t, t + dt);

    let k1 = nonlinear_term(&state.f, t)?;

    let mut s2 = state.f.clone();
    axpy(&mut s2, dt / 2.0, &k1);
    let k2 = nonlinear_term(&apply_diag(&s2, &e_half), t + dt / 2.0)?;

    let mut s3 = apply_diag(&state.f, &e_half);
    axpy(&mut s3, dt / 2.0, &k2);
    let k3 = nonlinear_term(&s3, t + dt / 2.0)?;

    let mut s4 = apply_diag(&state.f, &e_full);
    let k3_moved = apply_diag(&k3, &e_half2);
    axpy(&mut s4, dt, &k3_moved);
    let k4 = nonlinear_term(&s4, t + dt)?;

    let mut next = apply_diag(&state.f, &e_full);
    let k1_moved = apply_diag(&k1, &e_full);
    axpy(&mut next, dt / 6.0, &k1_moved);
    let k2_moved = apply_diag(&k2, &e_half2);
    axpy(&mut next, dt / 3.0, &k2_moved);
    axpy(&mut next, dt / 3.0, &k3_moved);
    axpy(&mut next, dt / 6.0, &k4);

    next.coeffs[[0, 0]] = Complex64::ZERO;
    next.time_tag = t + dt;
    if !next.is_finite() {
        return Err(Error::BlowUp { t: t + dt });
    }
    Ok(SimState {
        t: t + dt,
        f: next,
    })
}

/// Advective CFL number `dt * max|u| / min(dz, dv)` at the given state.
pub fn cfl_number(state: &SimState, dt: f64) -> Result<f64> {
    let (_, ux, uy) = biot_savart(&state.f, state.t);
    let grid = &state.f.grid;
    let vmax = to_physical(&ux)?
        .max_abs()
        .max(to_physical(&uy)?.max_abs());
    let dz = 2.0 * std::f64::consts::PI / grid.nx() as f64;
    let dv = grid.lv() / grid.nv() as f64;
    Ok(dt * vmax / dz.min(dv))
}

/// Profile-convention spectral coefficients of the zero-x-mode of a field.
pub fn zero_mode_profile_hat(f: &SpectralField) -> Vec<Complex64> {
    let grid = &f.grid;
    let scale = 1.0 / (2.0 * std::f64::consts::PI * grid.lv()).sqrt();
    (0..grid.nv()).map(|j| f.coeffs[[0, j]] * scale).collect()
}

/// Run a full simulation from a config.
pub fn simulate(cfg: &RunConfig) -> Result<SimRun> {
    let grid = cfg.grid()?;
    let f0 = initial_vorticity(
        &grid,
        cfg.preset,
        cfg.seed,
        cfg.effective_amplitude(),
        cfg.sigma,
    )?;
    simulate_from(cfg, f0)
}

/// Run from explicit initial data (the config's preset/amplitude are
/// ignored; everything else applies).
pub fn simulate_from(cfg: &RunConfig, f0: SpectralField) -> Result<SimRun> {
    let grid = Arc::clone(&f0.grid);
    let params = cfg.weight_params()?;
    let epsilon = cfg.bootstrap_epsilon();
    let initial_h_sigma = sobolev_norm(&f0, cfg.sigma);
    let builder = TraceBuilder::new(&grid, params, epsilon, initial_h_sigma);
    let mut state = SimState { t: 0.0, f: f0 };

    let mut dt = match cfg.dt {
        TimeStep::Fixed(dt) => {
            let cfl = cfl_number(&state, dt)?;
            if cfl > 0.9 {
                return Err(Error::InvalidArgument(format!(
                    "dt = {dt} violates the advective CFL bound (CFL = {cfl:.2})"
                )));
            }
            dt
        }
        TimeStep::Adaptive { .. } => (cfg.t_end / 400.0).min(0.05),
    };

    let mut shift = ShiftSolver::new(&grid, cfg.nu);
    let (_, ux0, _) = biot_savart(&state.f, 0.0);
    shift.start(0.0, &zero_mode_profile_hat(&ux0));

    let mut trace = EnergyTrace {
        samples: Vec::new(),
        terminal: TerminalEvent::Completed,
    };
    let mut classification = Classification::Stable;
    let mut steps: u64 = 0;

    record_sample(&builder, &mut trace, steps, &state, &shift)?;

    while state.t < cfg.t_end - 1e-12 {
        let dt_step = dt.min(cfg.t_end - state.t);
        let next = match cfg.dt {
            TimeStep::Fixed(_) => step(&state, dt_step, cfg.nu),
            TimeStep::Adaptive { tol } => {
                adaptive_step(&state, &mut dt, dt_step, tol, cfg.nu)
            }
        };
        let next = match next {
            Ok(s) => s,
            Err(Error::BlowUp { t }) => {
                trace.terminal = TerminalEvent::BlowUp { t };
                classification = Classification::Unstable;
                break;
            }
            Err(e) => return Err(e),
        };
        steps += 1;
        // accumulate the coordinate shift at every step: the quadrature
        // error is O(dt^2) of the solver step, not of the sample spacing
        let (_, ux, _) = biot_savart(&next.f, next.t);
        shift.advance(next.t, &zero_mode_profile_hat(&ux))?;
        state = next;

        let at_end = state.t >= cfg.t_end - 1e-12;
        if steps % cfg.record_every as u64 == 0 || at_end {
            let row = record_sample(&builder, &mut trace, steps, &state, &shift)?;
            if row.h_sigma_norm > cfg.instability_ceiling * initial_h_sigma
                && initial_h_sigma > 0.0
            {
                trace.terminal = TerminalEvent::CeilingExceeded { t: state.t };
                classification = Classification::Unstable;
                break;
            }
        }
    }

    Ok(SimRun {
        config: cfg.clone(),
        trace,
        classification,
        steps_taken: steps,
        initial_h_sigma,
        epsilon,
    })
}

/// Step the configured run to `t_stop` (at most `t_end`) and hand back the
/// raw state plus the accumulated shift; used by the coordinate dump.
pub fn run_to(cfg: &RunConfig, t_stop: f64) -> Result<(SimState, ShiftSolver)> {
    let grid = cfg.grid()?;
    let f0 = initial_vorticity(
        &grid,
        cfg.preset,
        cfg.seed,
        cfg.effective_amplitude(),
        cfg.sigma,
    )?;
    let mut state = SimState { t: 0.0, f: f0 };
    let mut shift = ShiftSolver::new(&grid, cfg.nu);
    let (_, ux0, _) = biot_savart(&state.f, 0.0);
    shift.start(0.0, &zero_mode_profile_hat(&ux0));
    let dt = match cfg.dt {
        TimeStep::Fixed(dt) => dt,
        TimeStep::Adaptive { .. } => (cfg.t_end / 400.0).min(0.05),
    };
    let stop = t_stop.min(cfg.t_end);
    while state.t < stop - 1e-12 {
        let h = dt.min(stop - state.t);
        let next = step(&state, h, cfg.nu)?;
        let (_, ux, _) = biot_savart(&next.f, next.t);
        shift.advance(next.t, &zero_mode_profile_hat(&ux))?;
        state = next;
    }
    Ok((state, shift))
}

fn record_sample(
    builder: &TraceBuilder,
    trace: &mut EnergyTrace,
    steps: u64,
    state: &SimState,
    shift: &ShiftSolver,
) -> Result<TraceSample> {
    let (phi, ux, _) = biot_savart(&state.f, state.t);
    let coords = if state.t >= 1.0 {
        Some(CoordinateState::build(
            shift,
            &zero_mode_profile_hat(&ux),
            &zero_mode_profile_hat(&state.f),
        )?)
    } else {
        None
    };
    let phi_of_y = match &coords {
        Some(c) => c.phi_of_y.clone(),
        None => crate::coords::profile_values(
            &state.f.grid,
            &shift.w_hat().to_vec(),
        ),
    };
    let row = builder.sample(steps, state.t, &state.f, &phi, coords.as_ref(), &phi_of_y)?;
    trace.samples.push(row.clone());
    Ok(row)
}

/// Step-doubling adaptive controller: one `dt` step against two halves,
/// 4th-order error estimate, PI-style step growth capped at 2x.
fn adaptive_step(
    state: &SimState,
    dt: &mut f64,
    dt_step: f64,
    tol: f64,
    nu: f64,
) -> Result<SimState> {
    let mut h = dt_step;
    for _ in 0..20 {
        let coarse = step(state, h, nu)?;
        let fine = step(&step(state, h / 2.0, nu)?, h / 2.0, nu)?;
        let scale = fine.f.l2_norm().max(1e-300);
        let err = crate::spectral::diff_l2(&coarse.f, &fine.f) / 15.0 / scale;
        if err <= tol || h < 1e-8 {
            let grow = if err == 0.0 {
                2.0
            } else {
                (0.9 * (tol / err).powf(0.2)).clamp(0.2, 2.0)
            };
            *dt = (h * grow).min(0.25);
            return Ok(fine);
        }
        h /= 2.0;
    }
    Err(Error::InvalidArgument(
        "adaptive step failed to reach tolerance".into(),
    ))
}
