//! The nonlinear change of coordinates: the shifted profile `v(t, y)`, the
//! displacement `Phi(t, y)`, the auxiliary profiles `g`, `h`, `hbar`, and
//! the variable-coefficient elliptic solve for the streamfunction in the
//! moving frame.
//!
//! `t (v(t,y) - y)` solves the forced heat equation with source `<U^x>` and
//! equals `Phi(t, y)` by construction; both are accumulated by an exact
//! heat-kernel integrating factor per v-frequency with trapezoidal source
//! quadrature. The auxiliary profiles are computed from their definitions
//! (compositions with the inverse map `y(v)`), never by integrating their
//! own evolution equations; those equations are demoted to residual checks
//! in the tests.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{fft_v, Direction, Grid, SpectralField};

// ---------------------------------------------------------------------
// 1D profiles on the v-grid. Convention: hat[j] are Fourier-series
// coefficients, values[b] = sum_j hat[j] e^{i eta_j v_b}, so
// ||p||_{L^2(dv)}^2 = Lv * sum |hat|^2.
// ---------------------------------------------------------------------

pub fn profile_hat(grid: &Arc<Grid>, values: &[f64]) -> Vec<Complex64> {
    debug_assert_eq!(values.len(), grid.nv());
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_v(grid, &mut buf, Direction::Forward);
    let scale = 1.0 / grid.nv() as f64;
    for (j, c) in buf.iter_mut().enumerate() {
        *c *= scale;
        if grid.eta_index(j).is_none() {
            *c = Complex64::ZERO;
        }
    }
    buf
}

pub fn profile_values(grid: &Arc<Grid>, hat: &[Complex64]) -> Vec<f64> {
    debug_assert_eq!(hat.len(), grid.nv());
    let mut buf = hat.to_vec();
    fft_v(grid, &mut buf, Direction::Inverse);
    buf.iter().map(|c| c.re).collect()
}

/// `i eta` multiplier: spectral derivative of a profile.
pub fn profile_derivative(grid: &Arc<Grid>, hat: &[Complex64]) -> Vec<Complex64> {
    (0..grid.nv())
        .map(|j| match grid.eta(j) {
            Some(eta) => hat[j] * Complex64::new(0.0, eta),
            None => Complex64::ZERO,
        })
        .collect()
}

/// Evaluate the trigonometric interpolant at an arbitrary point.
pub fn profile_eval(grid: &Arc<Grid>, hat: &[Complex64], y: f64) -> f64 {
    let mut acc = Complex64::ZERO;
    for (j, &c) in hat.iter().enumerate() {
        if let Some(eta) = grid.eta(j) {
            if c != Complex64::ZERO {
                acc += c * Complex64::new((eta * y).cos(), (eta * y).sin());
            }
        }
    }
    acc.re
}

/// 1D Sobolev norm `(Lv sum <eta>^{2 sigma} |hat|^2)^{1/2}`.
pub fn profile_h_norm(grid: &Arc<Grid>, hat: &[Complex64], sigma: f64) -> f64 {
    let mut acc = 0.0;
    for (j, &c) in hat.iter().enumerate() {
        if let Some(eta) = grid.eta(j) {
            let a = c.norm_sqr();
            if a > 0.0 {
                acc += (1.0 + eta * eta).powf(sigma) * a;
            }
        }
    }
    (grid.lv() * acc).sqrt()
}

/// Weighted 1D norm with an arbitrary nonnegative multiplier of `eta`.
pub fn profile_weighted_norm(
    grid: &Arc<Grid>,
    hat: &[Complex64],
    weight: impl Fn(f64) -> f64,
) -> f64 {
    let mut acc = 0.0;
    for (j, &c) in hat.iter().enumerate() {
        if let Some(eta) = grid.eta(j) {
            let a = c.norm_sqr();
            if a > 0.0 {
                acc += weight(eta) * a;
            }
        }
    }
    (grid.lv() * acc).sqrt()
}

// ---------------------------------------------------------------------
// Heat-kernel quadrature for the coordinate shift
// ---------------------------------------------------------------------

/// Accumulates `W(t, y) = t (v(t,y) - y) = Phi(t, y)` from sampled
/// `<U^x>(t, .)` profiles: exact integrating factor `e^{-nu eta^2 dt}` per
/// frequency, trapezoid in the source.
#[derive(Debug, Clone)]
pub struct ShiftSolver {
    grid: Arc<Grid>,
    nu: f64,
    t: f64,
    w_hat: Vec<Complex64>,
    last_source: Vec<Complex64>,
    started: bool,
}

impl ShiftSolver {
    pub fn new(grid: &Arc<Grid>, nu: f64) -> ShiftSolver {
        ShiftSolver {
            grid: Arc::clone(grid),
            nu,
            t: 0.0,
            w_hat: vec![Complex64::ZERO; grid.nv()],
            last_source: vec![Complex64::ZERO; grid.nv()],
            started: false,
        }
    }

    /// Install the initial source at `t0` (where `W = 0`).
    pub fn start(&mut self, t0: f64, source_hat: &[Complex64]) {
        self.t = t0;
        self.w_hat.iter_mut().for_each(|c| *c = Complex64::ZERO);
        self.last_source.copy_from_slice(source_hat);
        self.started = true;
    }

    /// Advance to `t_new` with the source sampled there.
    pub fn advance(&mut self, t_new: f64, source_hat: &[Complex64]) -> Result<()> {
        if !self.started {
            return Err(Error::InvalidArgument(
                "shift solver advanced before start".into(),
            ));
        }
        let dt = t_new - self.t;
        if !(dt > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "shift solver time must increase (t = {}, t_new = {t_new})",
                self.t
            )));
        }
        for j in 0..self.grid.nv() {
            let Some(eta) = self.grid.eta(j) else {
                self.w_hat[j] = Complex64::ZERO;
                continue;
            };
            let decay = (-self.nu * eta * eta * dt).exp();
            self.w_hat[j] = self.w_hat[j] * decay
                + (dt / 2.0) * (self.last_source[j] * decay + source_hat[j]);
        }
        self.last_source.copy_from_slice(source_hat);
        self.t = t_new;
        Ok(())
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Spectral coefficients of `Phi(t, .) = t (v - y)`.
    pub fn w_hat(&self) -> &[Complex64] {
        &self.w_hat
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }
}

// ---------------------------------------------------------------------
// Coordinate state
// ---------------------------------------------------------------------

/// One-dimensional profiles of the coordinate system at a fixed time.
/// `v_of_y`/`phi_of_y` live on the y-grid; everything else is composed
/// onto the v-grid through the inverse map `y(v)`.
#[derive(Debug, Clone)]
pub struct CoordinateState {
    pub t: f64,
    pub grid: Arc<Grid>,
    pub v_of_y: Vec<f64>,
    pub phi_of_y: Vec<f64>,
    pub y_of_v: Vec<f64>,
    /// `C(t, v) = v - y(v)`
    pub c_of_v: Vec<f64>,
    pub vprime: Vec<f64>,
    pub vsecond: Vec<f64>,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub hbar: Vec<f64>,
    pub u0_tilde: Vec<f64>,
    /// zero mode of the vorticity composed onto the v-grid
    pub f0_of_v: Vec<f64>,
    pub min_vprime: f64,
}

impl CoordinateState {
    /// Build every profile from the accumulated shift, the current
    /// `<U^x>` profile and the current zero-mode vorticity profile.
    /// Rejected for `t < 1` (the regime of the auxiliary fields).
    pub fn build(
        shift: &ShiftSolver,
        ux0_hat: &[Complex64],
        f0_hat: &[Complex64],
    ) -> Result<CoordinateState> {
        let t = shift.t();
        if t < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "coordinate profiles are defined for t >= 1, got t = {t}"
            )));
        }
        let grid = Arc::clone(shift.grid());
        let nv = grid.nv();
        let w_hat = shift.w_hat().to_vec();
        let phi_of_y = profile_values(&grid, &w_hat);
        let v_of_y: Vec<f64> = (0..nv)
            .map(|b| grid.v_point(b) + phi_of_y[b] / t)
            .collect();

        // dv/dy = 1 + (d_y W)/t on the y-grid
        let dw = profile_derivative(&grid, &w_hat);
        let dw_vals = profile_values(&grid, &dw);
        let ddw = profile_derivative(&grid, &dw);
        let vprime_y: Vec<f64> = dw_vals.iter().map(|d| 1.0 + d / t).collect();
        let min_vprime = vprime_y.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min_vprime > 0.5) {
            return Err(Error::CoordinateDegeneracy { min_vprime });
        }

        // invert y -> v by Newton on the trig interpolant of W
        let mut y_of_v = vec![0.0f64; nv];
        for j in 0..nv {
            let target = grid.v_point(j);
            let mut y = target;
            for _ in 0..50 {
                let f = y + profile_eval(&grid, &w_hat, y) / t - target;
                if f.abs() < 1e-13 * grid.lv().max(1.0) {
                    break;
                }
                let fp = 1.0 + profile_eval(&grid, &dw, y) / t;
                y -= f / fp;
            }
            y_of_v[j] = y;
        }

        let compose = |hat: &[Complex64]| -> Vec<f64> {
            y_of_v
                .iter()
                .map(|&y| profile_eval(&grid, hat, y))
                .collect()
        };

        // v'(t, v) and v''(t, v): y-derivatives of v composed with y(v)
        let vprime_hat = profile_hat(&grid, &vprime_y);
        let vprime = compose(&vprime_hat);
        let vsecond_y: Vec<f64> = profile_values(&grid, &ddw)
            .iter()
            .map(|d| d / t)
            .collect();
        let vsecond = compose(&profile_hat(&grid, &vsecond_y));

        let c_of_v: Vec<f64> = (0..nv).map(|j| grid.v_point(j) - y_of_v[j]).collect();
        let u0_tilde = compose(ux0_hat);
        let f0_of_v = compose(f0_hat);

        let g: Vec<f64> = (0..nv)
            .map(|j| (u0_tilde[j] - c_of_v[j]) / t)
            .collect();
        let h: Vec<f64> = vprime.iter().map(|vp| vp - 1.0).collect();
        let hbar: Vec<f64> = (0..nv).map(|j| (-f0_of_v[j] - h[j]) / t).collect();

        Ok(CoordinateState {
            t,
            grid,
            v_of_y,
            phi_of_y,
            y_of_v,
            c_of_v,
            vprime,
            vsecond,
            g,
            h,
            hbar,
            u0_tilde,
            f0_of_v,
            min_vprime,
        })
    }

    /// Identity coordinates at time `t` (useful as a base state).
    pub fn identity(grid: &Arc<Grid>, t: f64) -> CoordinateState {
        let nv = grid.nv();
        let pts: Vec<f64> = (0..nv).map(|b| grid.v_point(b)).collect();
        CoordinateState {
            t,
            grid: Arc::clone(grid),
            v_of_y: pts.clone(),
            phi_of_y: vec![0.0; nv],
            y_of_v: pts,
            c_of_v: vec![0.0; nv],
            vprime: vec![1.0; nv],
            vsecond: vec![0.0; nv],
            g: vec![0.0; nv],
            h: vec![0.0; nv],
            hbar: vec![0.0; nv],
            u0_tilde: vec![0.0; nv],
            f0_of_v: vec![0.0; nv],
            min_vprime: 1.0,
        }
    }

    /// Test/diagnostic constructor from a prescribed displacement
    /// `W(y) = t (v(y) - y)` (as spectral profile data) with zero velocity
    /// and vorticity profiles.
    pub fn from_prescribed_shift(
        grid: &Arc<Grid>,
        t: f64,
        w_hat: &[Complex64],
    ) -> Result<CoordinateState> {
        let mut solver = ShiftSolver::new(grid, 0.0);
        solver.start(t, &vec![Complex64::ZERO; grid.nv()]);
        solver.w_hat.copy_from_slice(w_hat);
        let zeros = vec![Complex64::ZERO; grid.nv()];
        CoordinateState::build(&solver, &zeros, &zeros)
    }
}

// ---------------------------------------------------------------------
// Variable-coefficient elliptic solve
// ---------------------------------------------------------------------

/// Outcome of the Picard iteration for the moving-frame streamfunction.
pub struct EllipticOutcome {
    pub phi: SpectralField,
    pub iterations: usize,
    /// final `||Delta_t phi - f|| / ||f||`
    pub residual: f64,
    /// last measured residual contraction factor
    pub contraction: f64,
}

/// Apply the moving-frame Laplacian
/// `Delta_t phi = d_zz phi + (v')^2 L^2 phi + v'' L phi`, `L = d_v - t d_z`,
/// with dealiased profile products.
pub fn apply_delta_t(phi: &SpectralField, coords: &CoordinateState, t: f64) -> Result<SpectralField> {
    let lphi = sheared_v_derivative(phi, t);
    let llphi = sheared_v_derivative(&lphi, t);
    let vp2: Vec<f64> = coords.vprime.iter().map(|v| v * v).collect();
    let mut out = phi.multiply_symbol(|k, _| -((k * k) as f64));
    let a = multiply_profile(&llphi, &vp2)?.dealias();
    let b = multiply_profile(&lphi, &coords.vsecond)?.dealias();
    out.coeffs.zip_mut_with(&a.coeffs, |x, y| *x += *y);
    out.coeffs.zip_mut_with(&b.coeffs, |x, y| *x += *y);
    out.time_tag = t;
    Ok(out)
}

/// `(d_v - t d_z)` in the moving-frame spectral variables.
fn sheared_v_derivative(f: &SpectralField, t: f64) -> SpectralField {
    f.map_symbol(|k, eta| Complex64::new(0.0, eta - k as f64 * t))
}

/// Multiply a 2D field by a v-profile (pointwise in physical space).
pub fn multiply_profile(f: &SpectralField, profile: &[f64]) -> Result<SpectralField> {
    let grid = Arc::clone(&f.grid);
    debug_assert_eq!(profile.len(), grid.nv());
    let mut p = crate::spectral::to_physical(f)?;
    for a in 0..grid.nx() {
        for b in 0..grid.nv() {
            p.values[[a, b]] *= profile[b];
        }
    }
    crate::spectral::to_spectral(&p)
}

/// Inverse of the sheared Laplacian `Delta_L` (gauge: zero mean).
fn delta_l_inverse(f: &SpectralField, t: f64) -> SpectralField {
    f.map_symbol(|k, eta| {
        let sheared = eta - k as f64 * t;
        let d = (k * k) as f64 + sheared * sheared;
        if d == 0.0 {
            Complex64::ZERO
        } else {
            Complex64::new(-1.0 / d, 0.0)
        }
    })
}

/// Solve `Delta_t phi = f` by the Picard iteration
/// `Delta_L phi_{n+1} = f + (1 - (v')^2) L^2 phi_n - v'' L phi_n`.
///
/// Diverging residuals (measured contraction >= 0.9, or growth across five
/// consecutive iterations) abort with the measured factor.
pub fn solve_delta_t(
    f: &SpectralField,
    coords: &CoordinateState,
    t: f64,
    tol: f64,
    max_iter: usize,
) -> Result<EllipticOutcome> {
    let f_norm = f.l2_norm();
    if f_norm == 0.0 {
        return Ok(EllipticOutcome {
            phi: SpectralField::zeros(&f.grid),
            iterations: 0,
            residual: 0.0,
            contraction: 0.0,
        });
    }
    let one_minus_vp2: Vec<f64> = coords.vprime.iter().map(|v| 1.0 - v * v).collect();
    let mut phi = delta_l_inverse(f, t);
    let mut prev_residual = f64::INFINITY;
    let mut contraction: f64 = 0.0;
    let mut growth_streak = 0usize;
    for iteration in 1..=max_iter {
        let lphi = sheared_v_derivative(&phi, t);
        let llphi = sheared_v_derivative(&lphi, t);
        let mut rhs = f.clone();
        let a = multiply_profile(&llphi, &one_minus_vp2)?.dealias();
        let b = multiply_profile(&lphi, &coords.vsecond)?.dealias();
        rhs.coeffs.zip_mut_with(&a.coeffs, |x, y| *x += *y);
        rhs.coeffs.zip_mut_with(&b.coeffs, |x, y| *x -= *y);
        let next = delta_l_inverse(&rhs, t);

        let residual_field = apply_delta_t(&next, coords, t)?;
        let mut num = 0.0f64;
        for (r, want) in residual_field.coeffs.iter().zip(f.coeffs.iter()) {
            num += (r - want).norm_sqr();
        }
        let residual = num.sqrt() / f_norm;
        phi = next;
        if residual <= tol {
            return Ok(EllipticOutcome {
                phi,
                iterations: iteration,
                residual,
                contraction,
            });
        }
        contraction = residual / prev_residual;
        if residual > prev_residual {
            growth_streak += 1;
            if growth_streak >= 5 {
                return Err(Error::NonContraction { factor: contraction });
            }
        } else {
            growth_streak = 0;
            if contraction >= 0.9 && iteration > 2 {
                return Err(Error::NonContraction { factor: contraction });
            }
        }
        prev_residual = residual;
    }
    Err(Error::NonContraction {
        factor: contraction,
    })
}

// ---------------------------------------------------------------------
// Frame remaps
// ---------------------------------------------------------------------

/// Shift each y-row in the first coordinate by `shift[b]`:
/// `g(x, y_b) = f(x + shift[b], y_b)`, exactly, via per-row phases.
pub fn shift_x_by_profile(f: &SpectralField, shift: &[f64]) -> SpectralField {
    let grid = Arc::clone(&f.grid);
    let (nx, nv) = (grid.nx(), grid.nv());
    debug_assert_eq!(shift.len(), nv);
    let mut out = f.clone();
    // go to (k, y) mixed representation
    let mut row = vec![Complex64::ZERO; nv];
    for i in 0..nx {
        let Some(k) = grid.wavenumber_x(i) else {
            for j in 0..nv {
                out.coeffs[[i, j]] = Complex64::ZERO;
            }
            continue;
        };
        if k == 0 {
            continue;
        }
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = f.coeffs[[i, j]];
        }
        fft_v(&grid, &mut row, Direction::Inverse);
        for (b, value) in row.iter_mut().enumerate() {
            let arg = k as f64 * shift[b];
            *value *= Complex64::new(arg.cos(), arg.sin());
        }
        fft_v(&grid, &mut row, Direction::Forward);
        let scale = 1.0 / nv as f64;
        for j in 0..nv {
            out.coeffs[[i, j]] = row[j] * scale;
        }
    }
    out
}

/// Resample the second coordinate: `g(x, j) = f(x, targets[j])`, evaluating
/// the trigonometric interpolant of each k-row at the target points.
pub fn resample_v(f: &SpectralField, targets: &[f64]) -> SpectralField {
    let grid = Arc::clone(&f.grid);
    let (nx, nv) = (grid.nx(), grid.nv());
    let mut out = SpectralField::zeros(&grid);
    out.time_tag = f.time_tag;
    let mut row = vec![Complex64::ZERO; nv];
    let mut sampled = vec![Complex64::ZERO; nv];
    for i in 0..nx {
        if grid.wavenumber_x(i).is_none() {
            continue;
        }
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = f.coeffs[[i, j]];
        }
        for (j, out_slot) in sampled.iter_mut().enumerate() {
            let y = targets[j];
            let mut acc = Complex64::ZERO;
            for (jj, &c) in row.iter().enumerate() {
                if let Some(eta) = grid.eta(jj) {
                    if c != Complex64::ZERO {
                        acc += c * Complex64::new((eta * y).cos(), (eta * y).sin());
                    }
                }
            }
            *out_slot = acc;
        }
        fft_v(&grid, &mut sampled, Direction::Forward);
        let scale = 1.0 / nv as f64;
        for j in 0..nv {
            out.coeffs[[i, j]] = sampled[j] * scale;
        }
    }
    out
}

/// Lab-frame vorticity to the moving frame:
/// `f(t, z, v(t,y)) = omega(t, z + t v(t,y), y)`.
pub fn lab_to_moving(
    omega_lab: &SpectralField,
    coords: &CoordinateState,
) -> Result<SpectralField> {
    guard_invertible(coords)?;
    let shift: Vec<f64> = coords.v_of_y.iter().map(|&v| coords.t * v).collect();
    let g = shift_x_by_profile(omega_lab, &shift);
    Ok(resample_v(&g, &coords.y_of_v))
}

/// Inverse of `lab_to_moving`:
/// `omega(t, x, y) = f(t, x - t v(t,y), v(t,y))`.
pub fn moving_to_lab(
    f_moving: &SpectralField,
    coords: &CoordinateState,
) -> Result<SpectralField> {
    guard_invertible(coords)?;
    let g = resample_v(f_moving, &coords.v_of_y);
    let shift: Vec<f64> = coords.v_of_y.iter().map(|&v| -coords.t * v).collect();
    Ok(shift_x_by_profile(&g, &shift))
}

/// Solver-frame field `f_s(t, z_s, y)` (`z_s = x - t y`) to the moving
/// frame: `f(t, z, v(y)) = f_s(z + W(y), y)` with `W = t (v - y)`.
pub fn sheared_to_moving(
    f_sheared: &SpectralField,
    coords: &CoordinateState,
) -> Result<SpectralField> {
    guard_invertible(coords)?;
    let g = shift_x_by_profile(f_sheared, &coords.phi_of_y);
    Ok(resample_v(&g, &coords.y_of_v))
}

fn guard_invertible(coords: &CoordinateState) -> Result<()> {
    if !(coords.min_vprime > 0.5) {
        return Err(Error::CoordinateDegeneracy {
            min_vprime: coords.min_vprime,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests;
