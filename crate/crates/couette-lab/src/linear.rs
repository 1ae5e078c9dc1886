//! Exact evolution of the linearized problem and the Orr/envelope
//! diagnostics built on it.
//!
//! In lab-frame Fourier variables the linearized vorticity is a pure
//! frequency shear with a closed-form viscous factor,
//! `omega_hat(t, k, eta) = omega_in_hat(k, eta + k t) exp(-nu Q(k, eta, t))`,
//! `Q = k^2 t + ((eta + k t)^3 - eta^3) / (3k)` for `k != 0`.
//!
//! The solution is carried in the sheared representation
//! `f_hat(t, k, eta_s) = omega_in_hat(k, eta_s) exp(-nu int_0^t k^2 +
//! (eta_s - k s)^2 ds)`, which lives on the fixed lattice for every `t`;
//! all norms are evaluated there with the shifted symbols. Projecting back
//! onto the lab lattice is exact band-limited interpolation (a modulation
//! in physical space) and is only possible while `eta_s - k t` stays in
//! band; clipped coefficients are counted and reported.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fit::{exp_decay_fit, power_fit};
use crate::spectral::{fft_v, weighted_l2, Direction, SpectralField};

/// Initial vorticity plus viscosity; evolves by the closed form.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub omega0: SpectralField,
    pub nu: f64,
}

/// Closed-form viscous exponent `int_0^t k^2 + (eta - ks + kt)^2 ds`,
/// written with the lab frequency `eta` at time `t`.
pub fn viscous_exponent(k: i64, eta: f64, t: f64) -> f64 {
    if k == 0 {
        return eta * eta * t;
    }
    let kf = k as f64;
    let shifted = eta + kf * t;
    kf * kf * t + (shifted.powi(3) - eta.powi(3)) / (3.0 * kf)
}

/// Same exponent between two times in the sheared representation (fixed
/// sheared frequency `eta_s`): `int_a^b k^2 + (eta_s - ks)^2 ds`.
pub fn viscous_exponent_between(k: i64, eta_s: f64, a: f64, b: f64) -> f64 {
    if k == 0 {
        return eta_s * eta_s * (b - a);
    }
    let kf = k as f64;
    kf * kf * (b - a) + ((eta_s - kf * a).powi(3) - (eta_s - kf * b).powi(3)) / (3.0 * kf)
}

impl LinearSolution {
    pub fn new(omega0: SpectralField, nu: f64) -> Result<Self> {
        if !(nu >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "viscosity must be nonnegative, got {nu}"
            )));
        }
        if !omega0.is_finite() {
            return Err(Error::NonFinite("initial vorticity".into()));
        }
        Ok(LinearSolution { omega0, nu })
    }

    /// Sheared-representation state at time `t >= 0`; exact for every `t`.
    pub fn evolve(&self, t: f64) -> Result<LinearState> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "time must be nonnegative, got {t}"
            )));
        }
        let mut f = self.omega0.clone();
        let nu = self.nu;
        f.multiply_symbol_mut(|k, eta_s| {
            Complex64::new((-nu * viscous_exponent_between(k, eta_s, 0.0, t)).exp(), 0.0)
        });
        f.time_tag = t;
        Ok(LinearState { t, f_sheared: f })
    }

    /// Lab-lattice `(omega_hat, psi_hat)` at `t`, per the closed form, with
    /// the count of coefficients whose shifted frequency left the band.
    pub fn evolve_lab(&self, t: f64) -> Result<(SpectralField, SpectralField, usize)> {
        let state = self.evolve(t)?;
        let (omega, clipped) = state.lab_omega();
        let psi = lab_biot_savart(&omega);
        Ok((omega, psi, clipped))
    }

    /// Restart from the lab-frame state at `t0`: evolving the result by
    /// `dt` reproduces `evolve_lab(t0 + dt)` (semigroup property) as long
    /// as nothing clips.
    pub fn restart_at(&self, t0: f64) -> Result<LinearSolution> {
        let (omega, _, _) = self.evolve_lab(t0)?;
        LinearSolution::new(omega, self.nu)
    }
}

/// Exact solution at one time, in the sheared representation.
pub struct LinearState {
    pub t: f64,
    /// `f_hat(t, k, eta_s)` on the fixed lattice.
    pub f_sheared: SpectralField,
}

impl LinearState {
    /// Lab frequency of a sheared lattice mode.
    fn eta_lab(&self, k: i64, eta_s: f64) -> f64 {
        eta_s - k as f64 * self.t
    }

    /// `|| P_neq omega ||_2` (frame invariant).
    pub fn nonzero_enstrophy(&self) -> f64 {
        self.f_sheared.project_nonzero_x().l2_norm()
    }

    /// `|| d_x P_neq psi ||_2` evaluated with the exact shifted symbols.
    pub fn dx_psi_norm(&self) -> f64 {
        let t = self.t;
        weighted_l2(&self.f_sheared.project_nonzero_x(), |k, eta_s| {
            let el = eta_s - k as f64 * t;
            let d = (k * k) as f64 + el * el;
            ((k * k) as f64) / (d * d)
        })
    }

    /// `|| d_y P_neq psi ||_2` with the exact shifted symbols.
    pub fn dy_psi_norm(&self) -> f64 {
        let t = self.t;
        weighted_l2(&self.f_sheared.project_nonzero_x(), |k, eta_s| {
            let el = eta_s - k as f64 * t;
            let d = (k * k) as f64 + el * el;
            el * el / (d * d)
        })
    }

    /// `|| sqrt(-Delta) omega ||_2` in lab variables (enstrophy dissipation).
    pub fn grad_omega_norm(&self) -> f64 {
        let t = self.t;
        weighted_l2(&self.f_sheared, |k, eta_s| {
            let el = self_eta_lab(k, eta_s, t);
            (k * k) as f64 + el * el
        })
    }

    /// Project onto the lab lattice: `omega_hat(t, k, eta)` for lattice
    /// `eta`, zeroing (and counting) out-of-band content.
    pub fn lab_omega(&self) -> (SpectralField, usize) {
        let grid = Arc::clone(&self.f_sheared.grid);
        let mut omega = shift_to_lab(&self.f_sheared, self.t);
        let mut clipped = 0usize;
        let eta_max = grid.eta_max();
        let floor = 1e-12 * self.f_sheared.max_abs();
        // content at sheared frequencies whose lab image eta_s - kt leaves
        // the band cannot be represented on the lab lattice at this t
        for i in 0..grid.nx() {
            let Some(k) = grid.wavenumber_x(i) else {
                continue;
            };
            for j in 0..grid.nv() {
                let Some(eta_s) = grid.eta(j) else { continue };
                if (self.eta_lab(k, eta_s)).abs() > eta_max
                    && self.f_sheared.coeffs[[i, j]].norm() > floor
                {
                    clipped += 1;
                }
            }
        }
        omega.time_tag = self.t;
        (omega, clipped)
    }
}

fn self_eta_lab(k: i64, eta_s: f64, t: f64) -> f64 {
    eta_s - k as f64 * t
}

/// Lab-frame Biot-Savart: `psi_hat = -omega_hat / (k^2 + eta^2)`, zero mean.
pub fn lab_biot_savart(omega: &SpectralField) -> SpectralField {
    let mut psi = omega.map_symbol(|k, eta| {
        let d = (k * k) as f64 + eta * eta;
        if d == 0.0 {
            Complex64::ZERO
        } else {
            Complex64::new(-1.0 / d, 0.0)
        }
    });
    psi.time_tag = omega.time_tag;
    psi
}

/// Move a sheared-representation field onto the lab lattice:
/// `g_hat(k, eta) = f_hat(k, eta + k t)`, evaluated by exact band-limited
/// interpolation (modulation by `e^{-i k t v}` in physical space).
pub fn shift_to_lab(f: &SpectralField, t: f64) -> SpectralField {
    shift_frequencies(f, t)
}

/// Inverse of `shift_to_lab`.
pub fn shift_to_sheared(omega_lab: &SpectralField, t: f64) -> SpectralField {
    shift_frequencies(omega_lab, -t)
}

fn shift_frequencies(f: &SpectralField, t: f64) -> SpectralField {
    let grid = Arc::clone(&f.grid);
    let nv = grid.nv();
    let mut out = f.clone();
    let mut row = vec![Complex64::ZERO; nv];
    for i in 0..grid.nx() {
        let Some(k) = grid.wavenumber_x(i) else {
            for j in 0..nv {
                out.coeffs[[i, j]] = Complex64::ZERO;
            }
            continue;
        };
        if k == 0 || t == 0.0 {
            continue;
        }
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = f.coeffs[[i, j]];
        }
        fft_v(&grid, &mut row, Direction::Inverse);
        let phase = -(k as f64) * t;
        for (b, value) in row.iter_mut().enumerate() {
            let arg = phase * grid.v_point(b);
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

/// Orr streamfunction kernel `1 / ((eta - k t)^2 + k^2)`; peaks at the
/// critical time `t = eta / k`.
pub fn orr_amplification(k: i64, eta: f64, t: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("Orr kernel needs k != 0".into()));
    }
    let kf = k as f64;
    Ok(1.0 / ((eta - kf * t).powi(2) + kf * kf))
}

/// Damping/dissipation envelope diagnostics along a time grid.
#[derive(Debug, Clone)]
pub struct EnvelopeReport {
    pub nu: f64,
    pub times: Vec<f64>,
    /// `|| d_y P_neq psi || + <t> || d_x P_neq psi ||`
    pub inviscid_quantity: Vec<f64>,
    pub dx_psi: Vec<f64>,
    pub dy_psi: Vec<f64>,
    /// `|| P_neq omega ||`
    pub nonzero_enstrophy: Vec<f64>,
    /// fitted `(C, c)` in `C e^{-c nu t^3}` for the enstrophy (nu > 0)
    pub enstrophy_fit: Option<(f64, f64)>,
    /// fitted `(C, c)` in `C <t>^{-1} e^{-c nu t^3}` for the inviscid pair
    pub inviscid_fit: Option<(f64, f64)>,
    /// log-log slopes of the two velocity components (inviscid damping)
    pub dx_psi_power: Option<f64>,
    pub dy_psi_power: Option<f64>,
    /// fit window in t
    pub fit_range: (f64, f64),
}

/// Evaluate the decay envelopes of the exact solution on `t_grid` and fit
/// their constants. Fits use `t >= max(t_min, 10)` where the power laws
/// are clean of the O(1) transient.
pub fn envelope_check(sol: &LinearSolution, t_grid: &[f64]) -> Result<EnvelopeReport> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty t grid".into()));
    }
    let mut report = EnvelopeReport {
        nu: sol.nu,
        times: t_grid.to_vec(),
        inviscid_quantity: Vec::new(),
        dx_psi: Vec::new(),
        dy_psi: Vec::new(),
        nonzero_enstrophy: Vec::new(),
        enstrophy_fit: None,
        inviscid_fit: None,
        dx_psi_power: None,
        dy_psi_power: None,
        fit_range: (f64::NAN, f64::NAN),
    };
    for &t in t_grid {
        let state = sol.evolve(t)?;
        let dx = state.dx_psi_norm();
        let dy = state.dy_psi_norm();
        let bt = (1.0 + t * t).sqrt();
        report.dx_psi.push(dx);
        report.dy_psi.push(dy);
        report.inviscid_quantity.push(dy + bt * dx);
        report.nonzero_enstrophy.push(state.nonzero_enstrophy());
    }

    let lo = t_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = t_grid.iter().cloned().fold(0.0f64, f64::max);
    let fit_lo = lo.max(10.0).min(hi);
    report.fit_range = (fit_lo, hi);
    let sel: Vec<usize> = (0..t_grid.len()).filter(|&n| t_grid[n] >= fit_lo).collect();
    if sel.len() >= 2 {
        let ts: Vec<f64> = sel.iter().map(|&n| t_grid[n]).collect();
        if sol.nu > 0.0 {
            let x: Vec<f64> = ts.iter().map(|t| sol.nu * t.powi(3)).collect();
            let y: Vec<f64> = sel.iter().map(|&n| report.nonzero_enstrophy[n]).collect();
            report.enstrophy_fit = exp_decay_fit(&x, &y);
            let y: Vec<f64> = sel
                .iter()
                .map(|&n| report.inviscid_quantity[n] * (1.0 + t_grid[n] * t_grid[n]).sqrt())
                .collect();
            report.inviscid_fit = exp_decay_fit(&x, &y);
        }
        let y: Vec<f64> = sel.iter().map(|&n| report.dx_psi[n]).collect();
        report.dx_psi_power = power_fit(&ts, &y).map(|(_, p)| p);
        let y: Vec<f64> = sel.iter().map(|&n| report.dy_psi[n]).collect();
        report.dy_psi_power = power_fit(&ts, &y).map(|(_, p)| p);
    }
    Ok(report)
}

/// Default logarithmic time grid for the linear diagnostics.
pub fn log_time_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    assert!(t_min > 0.0 && t_max > t_min && n >= 2);
    (0..n)
        .map(|i| t_min * (t_max / t_min).powf(i as f64 / (n - 1) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::random_smooth_field;
    use crate::spectral::{diff_l2, Grid};

    fn grid() -> Arc<Grid> {
        // eta up to 255/16 ~ 15.9
        Grid::new(8, 512, 32.0 * std::f64::consts::PI).unwrap()
    }

    /// Composite-Simpson oracle for the viscous exponent (independent of
    /// the antiderivative algebra).
    fn exponent_quadrature(k: i64, eta: f64, t: f64, panels: usize) -> f64 {
        let q = |s: f64| {
            let kf = k as f64;
            kf * kf + (eta - kf * s + kf * t).powi(2)
        };
        let h = t / panels as f64;
        let mut acc = q(0.0) + q(t);
        for n in 1..panels {
            acc += if n % 2 == 1 { 4.0 } else { 2.0 } * q(n as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn viscous_exponent_matches_quadrature() {
        for &(k, eta, t) in &[
            (1i64, 0.0f64, 2.0f64),
            (1, 3.0, 7.5),
            (-2, 1.25, 11.0),
            (3, -4.0, 0.3),
            (0, 2.0, 9.0),
        ] {
            let closed = viscous_exponent(k, eta, t);
            let quad = exponent_quadrature(k, eta, t, 2000);
            assert!(
                (closed - quad).abs() <= 1e-10 * closed.abs().max(1.0),
                "(k, eta, t) = ({k}, {eta}, {t}): {closed} vs {quad}"
            );
        }
        // k = 1, eta = 0, t = 2 -> damping exp(-nu (2 + 8/3))
        assert!((viscous_exponent(1, 0.0, 2.0) - (2.0 + 8.0 / 3.0)).abs() < 1e-14);
        // the two-time variant glues: [0, a] + [a, b] = [0, b] in lab terms
        let (k, eta_s) = (2i64, 1.5f64);
        let whole = viscous_exponent_between(k, eta_s, 0.0, 5.0);
        let glued = viscous_exponent_between(k, eta_s, 0.0, 2.0)
            + viscous_exponent_between(k, eta_s, 2.0, 5.0);
        assert!((whole - glued).abs() < 1e-12 * whole);
    }

    #[test]
    fn euler_transport_is_an_isometry() {
        let g = grid();
        let f0 = random_smooth_field(&g, 3, 4, 24);
        let sol = LinearSolution::new(f0.clone(), 0.0).unwrap();
        let n0 = f0.l2_norm();
        for &t in &[0.0, 1.5, 8.0, 50.0, 400.0] {
            let st = sol.evolve(t).unwrap();
            let n = st.f_sheared.l2_norm();
            assert!((n - n0).abs() < 1e-11 * n0, "t = {t}: {n} vs {n0}");
        }
    }

    #[test]
    fn zero_mode_is_pure_heat_decay() {
        let g = grid();
        let mut f0 = SpectralField::zeros(&g);
        let j = (2.0 / g.deta()).round() as usize; // eta = 2
        f0.coeffs[[0, j]] = Complex64::new(1.0, 0.0);
        f0.coeffs[[0, g.nv() - j]] = Complex64::new(1.0, 0.0);
        let nu = 1e-2;
        let sol = LinearSolution::new(f0, nu).unwrap();
        for &t in &[0.5, 3.0, 12.0] {
            let st = sol.evolve(t).unwrap();
            let expected = (-nu * 4.0 * t).exp();
            let got = st.f_sheared.coeffs[[0, j]].re;
            assert!((got - expected).abs() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn lab_projection_matches_lattice_shift() {
        // with k t an exact multiple of the eta spacing the interpolation
        // reduces to an index shift
        let g = grid();
        let f0 = random_smooth_field(&g, 7, 2, 12);
        let sol = LinearSolution::new(f0.clone(), 0.0).unwrap();
        let t = 2.0; // k = 1 shift: 2 / deta = 32 lattice steps
        let steps = (t / g.deta()).round() as i64;
        let (omega, clipped) = sol.evolve(t).unwrap().lab_omega();
        assert_eq!(clipped, 0);
        for i in 0..g.nx() {
            let Some(k) = g.wavenumber_x(i) else { continue };
            for j in 0..g.nv() {
                let Some(jj) = g.eta_index(j) else { continue };
                let shifted = jj + k * steps;
                let expected = if shifted.unsigned_abs() < (g.nv() / 2) as u64 {
                    let js = shifted.rem_euclid(g.nv() as i64) as usize;
                    f0.coeffs[[i, js]]
                } else {
                    Complex64::ZERO
                };
                let got = omega.coeffs[[i, j]];
                assert!(
                    (got - expected).norm() < 1e-11,
                    "k = {k}, j = {jj}: {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn lab_projection_reports_out_of_band_content() {
        let g = grid();
        let f0 = random_smooth_field(&g, 9, 4, 12);
        let sol = LinearSolution::new(f0, 0.0).unwrap();
        // k = 4 content moves 4 * 40 = 160 frequency units: clipped
        let (_, clipped) = sol.evolve(40.0).unwrap().lab_omega();
        assert!(clipped > 0);
    }

    #[test]
    fn semigroup_property_to_machine_precision() {
        let g = grid();
        // keep |k| (t1 + t2) + data band inside eta_max ~ 15.9
        let f0 = random_smooth_field(&g, 5, 1, 16);
        let sol = LinearSolution::new(f0, 1e-3).unwrap();
        let (direct, _, c0) = sol.evolve_lab(7.0).unwrap();
        let restarted = sol.restart_at(3.0).unwrap();
        let (again, _, c1) = restarted.evolve_lab(4.0).unwrap();
        assert_eq!((c0, c1), (0, 0));
        let err = diff_l2(&direct, &again);
        assert!(
            err <= 1e-12 * direct.l2_norm().max(1e-30),
            "semigroup defect {err:.3e}"
        );
    }

    #[test]
    fn enstrophy_balance_along_exact_solution() {
        // d/dt ||omega||^2 = -2 nu ||grad omega||^2, via Richardson FD
        let g = grid();
        let f0 = random_smooth_field(&g, 11, 3, 20);
        let nu = 1e-2;
        let sol = LinearSolution::new(f0, nu).unwrap();
        let t = 4.0;
        let enstrophy = |t: f64| sol.evolve(t).unwrap().f_sheared.l2_norm().powi(2);
        let d = |h: f64| (enstrophy(t + h) - enstrophy(t - h)) / (2.0 * h);
        let h = 1e-3;
        let fd = (4.0 * d(h / 2.0) - d(h)) / 3.0;
        let grad = sol.evolve(t).unwrap().grad_omega_norm();
        let rhs = -2.0 * nu * grad * grad;
        assert!(
            (fd - rhs).abs() <= 1e-8 * rhs.abs(),
            "enstrophy balance: {fd} vs {rhs}"
        );
    }

    #[test]
    fn orr_kernel_examples() {
        assert!((orr_amplification(1, 10.0, 10.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((orr_amplification(1, 10.0, 0.0).unwrap() - 1.0 / 101.0).abs() < 1e-15);
        assert!(orr_amplification(0, 1.0, 0.0).is_err());
        // k = 2, eta = 0: 1 / (4 t^2 + 4), monotone decreasing for t > 0
        let mut prev = orr_amplification(2, 0.0, 0.0).unwrap();
        assert!((prev - 0.25).abs() < 1e-15);
        for n in 1..50 {
            let t = n as f64 * 0.1;
            let v = orr_amplification(2, 0.0, t).unwrap();
            assert!((v - 1.0 / (4.0 * t * t + 4.0)).abs() < 1e-15);
            assert!(v < prev);
            prev = v;
        }
        // maximizer over t equals eta/k on a sample of modes
        for &(k, eta) in &[(1i64, 3.0f64), (2, 5.0), (-3, 7.0), (4, -2.0)] {
            let tc = eta / k as f64;
            let at_crit = orr_amplification(k, eta, tc).unwrap();
            for dt in [-0.7, -0.2, 0.3, 1.1] {
                assert!(orr_amplification(k, eta, tc + dt).unwrap() < at_crit);
            }
        }
    }

    #[test]
    fn envelope_power_laws_at_nu_zero() {
        let g = grid();
        let f0 = random_smooth_field(&g, 21, 3, 12);
        let sol = LinearSolution::new(f0, 0.0).unwrap();
        let t_grid = log_time_grid(10.0, 100.0, 40);
        let report = envelope_check(&sol, &t_grid).unwrap();
        // enstrophy constant in t (transport isometry)
        let e0 = report.nonzero_enstrophy[0];
        for e in &report.nonzero_enstrophy {
            assert!((e - e0).abs() < 1e-10 * e0);
        }
        let p = report.dx_psi_power.unwrap();
        assert!((-2.2..=-1.8).contains(&p), "dx psi power {p}");
        let p = report.dy_psi_power.unwrap();
        assert!((-1.2..=-0.8).contains(&p), "dy psi power {p}");
    }

    #[test]
    fn single_mode_cubic_decay_rate() {
        // k = 1 mode: log ||omega_hat|| against t^3 has slope -nu/3
        let g = grid();
        let mut f0 = SpectralField::zeros(&g);
        f0.coeffs[[1, 0]] = Complex64::new(1.0, 0.0);
        f0.coeffs[[g.nx() - 1, 0]] = Complex64::new(1.0, 0.0);
        let nu = 1e-3;
        let sol = LinearSolution::new(f0, nu).unwrap();
        let ts: Vec<f64> = (0..30).map(|n| 10.0 + n as f64).collect();
        let xs: Vec<f64> = ts.iter().map(|t| t.powi(3)).collect();
        let ys: Vec<f64> = ts
            .iter()
            .map(|&t| sol.evolve(t).unwrap().f_sheared.l2_norm())
            .collect();
        let (_, rate) = exp_decay_fit(&xs, &ys).unwrap();
        assert!(
            (rate - nu / 3.0).abs() <= 0.01 * (nu / 3.0),
            "cubic rate {rate} vs {}",
            nu / 3.0
        );
    }

    #[test]
    fn empty_grid_and_negative_time_rejected() {
        let g = grid();
        let sol = LinearSolution::new(random_smooth_field(&g, 1, 2, 4), 0.1).unwrap();
        assert!(sol.evolve(-1.0).is_err());
        assert!(envelope_check(&sol, &[]).is_err());
    }

    #[test]
    fn initial_data_without_nonzero_modes_reports_heat_decay_only() {
        let g = grid();
        let mut f0 = SpectralField::zeros(&g);
        let j = (1.0 / g.deta()).round() as usize;
        f0.coeffs[[0, j]] = Complex64::new(1.0, 0.0);
        f0.coeffs[[0, g.nv() - j]] = Complex64::new(1.0, 0.0);
        let sol = LinearSolution::new(f0, 1e-2).unwrap();
        let report = envelope_check(&sol, &[1.0, 2.0, 4.0, 8.0]).unwrap();
        for v in report
            .nonzero_enstrophy
            .iter()
            .chain(report.inviscid_quantity.iter())
        {
            assert_eq!(*v, 0.0);
        }
    }
}
