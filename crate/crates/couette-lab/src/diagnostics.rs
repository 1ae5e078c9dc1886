//! Every monitored functional along a run: the weighted energies, the
//! Cauchy-Kovalevskaya dissipation term donated by the time-dependent
//! norm, the decay envelopes, and the bootstrap budget ratios.
//!
//! All 2D functionals are evaluated on the solver's sheared-frame field;
//! the global-stability ratio composes with the accumulated displacement
//! `Phi` (an exact per-row phase), which is the quantity the stability
//! statement controls. Coordinate profiles enter through 1D norms.

use std::sync::Arc;

use crate::coords::{
    profile_derivative, profile_h_norm, profile_hat, profile_weighted_norm, shift_x_by_profile,
    CoordinateState,
};
use crate::error::{Error, Result};
use crate::multiplier::{
    a_sigma, bracket_power_over_weight_1d, weight_log_deriv, weight_log_deriv_k,
    WeightParams, WeightTable,
};
use crate::spectral::{sobolev_norm, weighted_l2, Grid, SpectralField};

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TerminalEvent {
    Completed,
    BlowUp { t: f64 },
    CeilingExceeded { t: f64 },
}

impl TerminalEvent {
    pub fn name(&self) -> &'static str {
        match self {
            TerminalEvent::Completed => "completed",
            TerminalEvent::BlowUp { .. } => "blow_up",
            TerminalEvent::CeilingExceeded { .. } => "ceiling_exceeded",
        }
    }
}

/// One row of the trace. Coordinate-profile columns are zero before t = 1
/// (the profiles are only defined from t = 1 on).
#[derive(Debug, Clone, Default)]
pub struct TraceSample {
    pub t: f64,
    pub step: u64,
    pub e_sigma: f64,
    pub e_v: f64,
    pub a_sigma_norm: f64,
    pub ck_w: f64,
    pub sqrt_dl_a_sigma: f64,
    pub a_e_norm: f64,
    pub sqrt_dl_a_e: f64,
    pub h_sigma_norm: f64,
    pub nonzero_enstrophy: f64,
    pub ux_neq_norm: f64,
    pub uy_norm: f64,
    pub stability_ratio: f64,
    pub g_hs: f64,
    pub g_hs6: f64,
    pub dv_g_hs6: f64,
    pub h_hs: f64,
    pub h_hs1: f64,
    pub dv_h_hs: f64,
    pub dv_h_hs1: f64,
    pub hbar_asig: f64,
    pub hbar_hs1: f64,
    pub hbar_hs6: f64,
    pub dv_hbar_hs6: f64,
    pub dv_hbar_asig: f64,
    pub ck_hbar: f64,
    pub f0_hs: f64,
    pub dv_f0_hs: f64,
    pub env_enhanced: f64,
    pub env_inviscid: f64,
}

/// Column order of the trace CSV; documented in `docs/trace_schema.md`.
pub const TRACE_COLUMNS: &[&str] = &[
    "t",
    "step",
    "e_sigma",
    "e_v",
    "a_sigma_norm",
    "ck_w",
    "sqrt_dl_a_sigma",
    "a_e_norm",
    "sqrt_dl_a_e",
    "h_sigma_norm",
    "nonzero_enstrophy",
    "ux_neq_norm",
    "uy_norm",
    "stability_ratio",
    "g_hs",
    "g_hs6",
    "dv_g_hs6",
    "h_hs",
    "h_hs1",
    "dv_h_hs",
    "dv_h_hs1",
    "hbar_asig",
    "hbar_hs1",
    "hbar_hs6",
    "dv_hbar_hs6",
    "dv_hbar_asig",
    "ck_hbar",
    "f0_hs",
    "dv_f0_hs",
    "env_enhanced",
    "env_inviscid",
];

impl TraceSample {
    pub fn values(&self) -> Vec<f64> {
        vec![
            self.t,
            self.step as f64,
            self.e_sigma,
            self.e_v,
            self.a_sigma_norm,
            self.ck_w,
            self.sqrt_dl_a_sigma,
            self.a_e_norm,
            self.sqrt_dl_a_e,
            self.h_sigma_norm,
            self.nonzero_enstrophy,
            self.ux_neq_norm,
            self.uy_norm,
            self.stability_ratio,
            self.g_hs,
            self.g_hs6,
            self.dv_g_hs6,
            self.h_hs,
            self.h_hs1,
            self.dv_h_hs,
            self.dv_h_hs1,
            self.hbar_asig,
            self.hbar_hs1,
            self.hbar_hs6,
            self.dv_hbar_hs6,
            self.dv_hbar_asig,
            self.ck_hbar,
            self.f0_hs,
            self.dv_f0_hs,
            self.env_enhanced,
            self.env_inviscid,
        ]
    }
}

/// Time series of all monitored norms and functionals.
#[derive(Debug, Clone)]
pub struct EnergyTrace {
    pub samples: Vec<TraceSample>,
    pub terminal: TerminalEvent,
}

impl EnergyTrace {
    pub fn is_complete(&self) -> bool {
        self.terminal == TerminalEvent::Completed
    }
}

/// `E^sigma = ||A^sigma f||^2 / 2 + E_v` with the coordinate-profile part
/// `E_v = ||g||_{H^sigma}^2 + nu^{1/3} ||h||^2 + nu^{1/3} ||hbar||^2 +
/// ||h||_{H^{sigma-1}}^2 + ||hbar||_{H^{sigma-1}}^2`.
pub fn energy_sigma(
    f: &SpectralField,
    coords: Option<&CoordinateState>,
    t: f64,
    params: &WeightParams,
) -> (f64, f64) {
    let a_norm = a_sigma_norm(f, t, params);
    let e_v = match coords {
        None => 0.0,
        Some(c) => {
            let grid = &c.grid;
            let g_hat = profile_hat(grid, &c.g);
            let h_hat = profile_hat(grid, &c.h);
            let hbar_hat = profile_hat(grid, &c.hbar);
            let nu3 = params.nu_third();
            profile_h_norm(grid, &g_hat, params.sigma).powi(2)
                + nu3 * profile_h_norm(grid, &h_hat, params.sigma).powi(2)
                + nu3 * profile_h_norm(grid, &hbar_hat, params.sigma).powi(2)
                + profile_h_norm(grid, &h_hat, params.sigma - 1.0).powi(2)
                + profile_h_norm(grid, &hbar_hat, params.sigma - 1.0).powi(2)
        }
    };
    (0.5 * a_norm * a_norm + e_v, e_v)
}

/// `|| A^sigma f ||_2` on the lattice.
pub fn a_sigma_norm(f: &SpectralField, t: f64, params: &WeightParams) -> f64 {
    weighted_l2(f, |k, eta| a_sigma(k, eta, t, params).powi(2))
}

/// The nonnegative Cauchy-Kovalevskaya functional
/// `sum_k int (d_t w_k / w_k) |A^sigma_k f_hat|^2`.
pub fn ck_w(f: &SpectralField, t: f64, params: &WeightParams) -> f64 {
    let mut acc = 0.0f64;
    let grid = &f.grid;
    for i in 0..grid.nx() {
        let Some(k) = grid.wavenumber_x(i) else { continue };
        for j in 0..grid.nv() {
            let Some(eta) = grid.eta(j) else { continue };
            let a = f.coeffs[[i, j]].norm_sqr();
            if a > 0.0 {
                let rate = weight_log_deriv_k(t, k, eta, params);
                if rate > 0.0 {
                    acc += rate * a_sigma(k, eta, t, params).powi(2) * a;
                }
            }
        }
    }
    acc
}

/// Assembles trace rows from solver state; owns the run-level constants.
pub struct TraceBuilder {
    pub grid: Arc<Grid>,
    pub params: WeightParams,
    pub epsilon: f64,
    pub initial_h_sigma: f64,
}

impl TraceBuilder {
    pub fn new(
        grid: &Arc<Grid>,
        params: WeightParams,
        epsilon: f64,
        initial_h_sigma: f64,
    ) -> TraceBuilder {
        TraceBuilder {
            grid: Arc::clone(grid),
            params,
            epsilon,
            initial_h_sigma,
        }
    }

    /// Build one row. `phi_of_y` is the accumulated displacement used by
    /// the stability composition (empty slice before it exists).
    pub fn sample(
        &self,
        step: u64,
        t: f64,
        f: &SpectralField,
        phi_hat: &SpectralField,
        coords: Option<&CoordinateState>,
        phi_of_y: &[f64],
    ) -> Result<TraceSample> {
        let params = &self.params;
        let nu = params.nu;
        let mut row = TraceSample {
            t,
            step,
            ..TraceSample::default()
        };
        let table = WeightTable::build(&self.grid, t, params);
        let mut a2 = 0.0f64;
        let mut dl_a2 = 0.0f64;
        let mut ckw = 0.0f64;
        let mut ae2 = 0.0f64;
        let mut dl_ae2 = 0.0f64;
        for i in 0..self.grid.nx() {
            let Some(k) = self.grid.wavenumber_x(i) else {
                continue;
            };
            for j in 0..self.grid.nv() {
                let Some(eta) = self.grid.eta(j) else { continue };
                let power = f.coeffs[[i, j]].norm_sqr();
                if power == 0.0 {
                    continue;
                }
                let dl = (k * k) as f64 + (eta - k as f64 * t).powi(2);
                let asig2 = table.a_sigma[[i, j]].powi(2);
                a2 += asig2 * power;
                dl_a2 += dl * asig2 * power;
                ckw += table.dtw_over_w[[i, j]] * asig2 * power;
                if k != 0 {
                    let ae = table.a_enhanced[[i, j]].powi(2);
                    ae2 += ae * power;
                    dl_ae2 += dl * ae * power;
                }
            }
        }
        row.a_sigma_norm = a2.sqrt();
        row.sqrt_dl_a_sigma = dl_a2.sqrt();
        row.ck_w = ckw;
        row.a_e_norm = ae2.sqrt();
        row.sqrt_dl_a_e = dl_ae2.sqrt();
        row.h_sigma_norm = sobolev_norm(f, params.sigma);
        row.nonzero_enstrophy = f.project_nonzero_x().l2_norm();

        // velocities from the sheared-frame streamfunction
        let phi_neq = phi_hat.project_nonzero_x();
        row.ux_neq_norm = weighted_l2(&phi_neq, |k, eta| (eta - k as f64 * t).powi(2));
        row.uy_norm = weighted_l2(&phi_neq, |k, _| (k * k) as f64);

        // stability composition || f(x + Phi(y), y) ||_{H^sigma}
        row.stability_ratio = if self.initial_h_sigma > 0.0 {
            let composed = if phi_of_y.is_empty() {
                f.clone()
            } else {
                shift_x_by_profile(f, phi_of_y)
            };
            // the x-average is untouched by the x-shift
            let mut composed = composed;
            for j in 0..self.grid.nv() {
                composed.coeffs[[0, j]] = f.coeffs[[0, j]];
            }
            sobolev_norm(&composed, params.sigma) / self.initial_h_sigma
        } else {
            0.0
        };

        if let Some(c) = coords {
            let grid = &c.grid;
            let g_hat = profile_hat(grid, &c.g);
            let h_hat = profile_hat(grid, &c.h);
            let hbar_hat = profile_hat(grid, &c.hbar);
            let f0_hat = profile_hat(grid, &c.f0_of_v);
            let dg = profile_derivative(grid, &g_hat);
            let dh = profile_derivative(grid, &h_hat);
            let dhbar = profile_derivative(grid, &hbar_hat);
            let df0 = profile_derivative(grid, &f0_hat);
            let sig = params.sigma;
            row.g_hs = profile_h_norm(grid, &g_hat, sig);
            row.g_hs6 = profile_h_norm(grid, &g_hat, sig - 6.0);
            row.dv_g_hs6 = profile_h_norm(grid, &dg, sig - 6.0);
            row.h_hs = profile_h_norm(grid, &h_hat, sig);
            row.h_hs1 = profile_h_norm(grid, &h_hat, sig - 1.0);
            row.dv_h_hs = profile_h_norm(grid, &dh, sig);
            row.dv_h_hs1 = profile_h_norm(grid, &dh, sig - 1.0);
            row.hbar_hs1 = profile_h_norm(grid, &hbar_hat, sig - 1.0);
            row.hbar_hs6 = profile_h_norm(grid, &hbar_hat, sig - 6.0);
            row.dv_hbar_hs6 = profile_h_norm(grid, &dhbar, sig - 6.0);
            row.hbar_asig =
                profile_weighted_norm(grid, &hbar_hat, |eta| {
                    bracket_power_over_weight_1d(eta, t, params).powi(2)
                });
            row.dv_hbar_asig =
                profile_weighted_norm(grid, &dhbar, |eta| {
                    bracket_power_over_weight_1d(eta, t, params).powi(2)
                });
            row.ck_hbar = profile_weighted_norm(grid, &hbar_hat, |eta| {
                weight_log_deriv(t, eta, params)
                    * bracket_power_over_weight_1d(eta, t, params).powi(2)
            });
            row.f0_hs = profile_h_norm(grid, &f0_hat, params.s);
            row.dv_f0_hs = profile_h_norm(grid, &df0, params.s);
        }

        // envelope ratios against the threshold scale eps nu^{1/3}
        let scale = self.epsilon * nu.cbrt();
        if scale > 0.0 {
            let bt = (1.0 + t * t).sqrt();
            let bnt3 = (1.0 + (nu * t * t * t).powi(2)).sqrt();
            row.env_enhanced = row.nonzero_enstrophy * bnt3 / scale;
            row.env_inviscid = (row.ux_neq_norm + bt * row.uy_norm) * bt * bnt3 / scale;
        }

        let (e_sigma, e_v) = {
            let a = row.a_sigma_norm;
            let e_v = match coords {
                None => 0.0,
                Some(c) => {
                    let grid = &c.grid;
                    let g_hat = profile_hat(grid, &c.g);
                    let h_hat = profile_hat(grid, &c.h);
                    let hbar_hat = profile_hat(grid, &c.hbar);
                    let nu3 = params.nu_third();
                    profile_h_norm(grid, &g_hat, params.sigma).powi(2)
                        + nu3 * profile_h_norm(grid, &h_hat, params.sigma).powi(2)
                        + nu3 * profile_h_norm(grid, &hbar_hat, params.sigma).powi(2)
                        + profile_h_norm(grid, &h_hat, params.sigma - 1.0).powi(2)
                        + profile_h_norm(grid, &hbar_hat, params.sigma - 1.0).powi(2)
                }
            };
            (0.5 * a * a + e_v, e_v)
        };
        row.e_sigma = e_sigma;
        row.e_v = e_v;
        if !row.values().iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite(format!("trace sample at t = {t}")));
        }
        Ok(row)
    }
}

/// Decay-envelope and stability summary of a completed run.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub complete: bool,
    /// `sup_t || f(x + Phi, y) ||_{H^sigma} / || omega_in ||_{H^sigma}`
    pub stability_sup_ratio: f64,
    /// run-level C in `||P_neq omega|| <= C eps nu^{1/3} / <nu t^3>`
    pub enhanced_c: f64,
    /// run-level C in `||P_neq Ux|| + <t>||Uy|| <= C eps nu^{1/3} <t>^{-1} / <nu t^3>`
    pub inviscid_c: f64,
    /// same constants restricted to t >= nu^{-1/3} (the envelope regime)
    pub enhanced_c_late: f64,
    pub inviscid_c_late: f64,
    pub stability_pass: Option<bool>,
    pub enhanced_pass: Option<bool>,
    pub inviscid_pass: Option<bool>,
}

/// Ceilings for the pass/fail columns (regression-pinned, existential in
/// the underlying statements).
#[derive(Debug, Clone, Copy)]
pub struct ReportCeilings {
    pub stability_ratio: f64,
    pub enhanced_c: f64,
    pub inviscid_c: f64,
}

/// Scan a trace for the decay constants and compare against ceilings.
pub fn theorem_report(
    trace: &EnergyTrace,
    nu: f64,
    ceilings: Option<ReportCeilings>,
) -> DecayReport {
    let mut report = DecayReport {
        complete: trace.is_complete(),
        stability_sup_ratio: 0.0,
        enhanced_c: 0.0,
        inviscid_c: 0.0,
        enhanced_c_late: 0.0,
        inviscid_c_late: 0.0,
        stability_pass: None,
        enhanced_pass: None,
        inviscid_pass: None,
    };
    let t_late = nu.powf(-1.0 / 3.0);
    for s in &trace.samples {
        report.stability_sup_ratio = report.stability_sup_ratio.max(s.stability_ratio);
        report.enhanced_c = report.enhanced_c.max(s.env_enhanced);
        report.inviscid_c = report.inviscid_c.max(s.env_inviscid);
        if s.t >= t_late {
            report.enhanced_c_late = report.enhanced_c_late.max(s.env_enhanced);
            report.inviscid_c_late = report.inviscid_c_late.max(s.env_inviscid);
        }
    }
    if let Some(c) = ceilings {
        report.stability_pass = Some(report.stability_sup_ratio <= c.stability_ratio);
        report.enhanced_pass = Some(report.enhanced_c <= c.enhanced_c);
        report.inviscid_pass = Some(report.inviscid_c <= c.inviscid_c);
    }
    report
}

/// One bootstrap budget as a ratio series.
#[derive(Debug, Clone)]
pub struct BootstrapSeries {
    pub name: &'static str,
    /// (t, LHS/RHS) per sample with t >= 1
    pub ratios: Vec<(f64, f64)>,
    pub max_ratio: f64,
    pub first_violation: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct BootstrapReport {
    pub series: Vec<BootstrapSeries>,
    pub all_below_one: bool,
}

pub const BOOTSTRAP_NAMES: &[&str] = &[
    "main_high",
    "coord_g",
    "coord_hbar",
    "coord_h",
    "enhanced",
    "zero_g",
    "zero_hbar",
    "zero_f0",
    "assist_hbar",
    "assist_h",
];

/// Evaluate the ten a-priori budgets as LHS/RHS ratio series along the
/// trace (time integrals by trapezoid from the first sample with t >= 1).
pub fn bootstrap_monitor(trace: &EnergyTrace, epsilon: f64, nu: f64) -> BootstrapReport {
    let nu3 = nu.cbrt();
    let nu6 = nu.powf(1.0 / 6.0);
    let budget_sq = (8.0 * epsilon * nu3).powi(2);
    let budget_lin = 8.0 * epsilon * nu3;
    let budget_hbar = 8.0 * epsilon * (epsilon * nu6).powi(2);
    let budget_h = 8.0 * (10.0 * epsilon * nu6).powi(2);
    let budget_h1 = 8.0 * (10.0 * epsilon * nu3).powi(2);

    let samples: Vec<&TraceSample> = trace.samples.iter().filter(|s| s.t >= 1.0).collect();
    let mut series: Vec<BootstrapSeries> = BOOTSTRAP_NAMES
        .iter()
        .map(|name| BootstrapSeries {
            name,
            ratios: Vec::with_capacity(samples.len()),
            max_ratio: 0.0,
            first_violation: None,
        })
        .collect();

    // running trapezoid integrals
    let mut int_dl_a = 0.0; // nu || sqrt(-Delta_L) A f ||^2
    let mut int_ckw = 0.0;
    let mut int_g = 0.0; // || g ||_{H^sigma}
    let mut int_t3_ck_hbar = 0.0;
    let mut int_t2_hbar = 0.0;
    let mut int_t3_dv_hbar = 0.0;
    let mut int_dv_h = 0.0;
    let mut int_dl_ae = 0.0;
    let mut int_t4_dv_g = 0.0;
    let mut int_t4_dv_hbar6 = 0.0;
    let mut int_f0 = 0.0;
    let mut int_hbar1 = 0.0;
    let mut int_dv_h1 = 0.0;
    let mut prev: Option<&TraceSample> = None;

    for s in samples {
        if let Some(p) = prev {
            let dt = s.t - p.t;
            let trap = |a: f64, b: f64| 0.5 * dt * (a + b);
            int_dl_a += trap(p.sqrt_dl_a_sigma.powi(2), s.sqrt_dl_a_sigma.powi(2));
            int_ckw += trap(p.ck_w, s.ck_w);
            int_g += trap(p.g_hs, s.g_hs);
            int_t3_ck_hbar += trap(
                p.t.powi(3) * p.ck_hbar.powi(2),
                s.t.powi(3) * s.ck_hbar.powi(2),
            );
            int_t2_hbar += trap(
                p.t.powi(2) * p.hbar_asig.powi(2),
                s.t.powi(2) * s.hbar_asig.powi(2),
            );
            int_t3_dv_hbar += trap(
                p.t.powi(3) * p.dv_hbar_asig.powi(2),
                s.t.powi(3) * s.dv_hbar_asig.powi(2),
            );
            int_dv_h += trap(p.dv_h_hs.powi(2), s.dv_h_hs.powi(2));
            int_dl_ae += trap(p.sqrt_dl_a_e.powi(2), s.sqrt_dl_a_e.powi(2));
            int_t4_dv_g += trap(
                p.t.powi(4) * p.dv_g_hs6.powi(2),
                s.t.powi(4) * s.dv_g_hs6.powi(2),
            );
            int_t4_dv_hbar6 += trap(
                p.t.powi(4) * p.dv_hbar_hs6.powi(2),
                s.t.powi(4) * s.dv_hbar_hs6.powi(2),
            );
            int_f0 += trap(
                p.dv_f0_hs.powi(2) * (1.0 + p.t * nu / 2.0),
                s.dv_f0_hs.powi(2) * (1.0 + s.t * nu / 2.0),
            );
            int_hbar1 += trap(p.hbar_hs1, s.hbar_hs1);
            int_dv_h1 += trap(p.dv_h_hs1.powi(2), s.dv_h_hs1.powi(2));
        }
        let bt = (1.0 + s.t * s.t).sqrt();
        let lhs = [
            s.a_sigma_norm.powi(2) + nu * int_dl_a + int_ckw,
            bt * s.g_hs + int_g,
            s.t.powi(3) * s.hbar_asig.powi(2)
                + int_t3_ck_hbar
                + 0.25 * int_t2_hbar
                + 0.25 * nu * int_t3_dv_hbar,
            s.h_hs.powi(2) + nu * int_dv_h,
            s.a_e_norm.powi(2) + 0.4 * nu * int_dl_ae,
            bt.powi(4) * s.g_hs6.powi(2) + nu * int_t4_dv_g,
            bt.powi(4) * s.hbar_hs6.powi(2) + nu * int_t4_dv_hbar6,
            s.f0_hs.powi(2) + (s.t * nu / 2.0) * s.dv_f0_hs.powi(2) + nu * int_f0,
            bt * s.hbar_hs1 + int_hbar1,
            s.h_hs1.powi(2) + nu * int_dv_h1,
        ];
        let rhs = [
            budget_sq,
            budget_lin,
            budget_hbar,
            budget_h,
            budget_sq,
            budget_sq,
            budget_sq,
            budget_sq,
            budget_lin,
            budget_h1,
        ];
        for (idx, (l, r)) in lhs.iter().zip(rhs.iter()).enumerate() {
            let ratio = l / r;
            let entry = &mut series[idx];
            entry.ratios.push((s.t, ratio));
            if ratio > entry.max_ratio {
                entry.max_ratio = ratio;
            }
            if ratio >= 1.0 && entry.first_violation.is_none() {
                entry.first_violation = Some(s.t);
            }
        }
        prev = Some(s);
    }
    let all_below_one = series.iter().all(|s| s.first_violation.is_none());
    BootstrapReport {
        series,
        all_below_one,
    }
}

/// Helper for tests and the report subcommand: rebuild a trace from raw
/// CSV values in `TRACE_COLUMNS` order.
pub fn sample_from_values(values: &[f64]) -> Option<TraceSample> {
    if values.len() != TRACE_COLUMNS.len() {
        return None;
    }
    let mut s = TraceSample {
        t: values[0],
        step: values[1] as u64,
        ..TraceSample::default()
    };
    s.e_sigma = values[2];
    s.e_v = values[3];
    s.a_sigma_norm = values[4];
    s.ck_w = values[5];
    s.sqrt_dl_a_sigma = values[6];
    s.a_e_norm = values[7];
    s.sqrt_dl_a_e = values[8];
    s.h_sigma_norm = values[9];
    s.nonzero_enstrophy = values[10];
    s.ux_neq_norm = values[11];
    s.uy_norm = values[12];
    s.stability_ratio = values[13];
    s.g_hs = values[14];
    s.g_hs6 = values[15];
    s.dv_g_hs6 = values[16];
    s.h_hs = values[17];
    s.h_hs1 = values[18];
    s.dv_h_hs = values[19];
    s.dv_h_hs1 = values[20];
    s.hbar_asig = values[21];
    s.hbar_hs1 = values[22];
    s.hbar_hs6 = values[23];
    s.dv_hbar_hs6 = values[24];
    s.dv_hbar_asig = values[25];
    s.ck_hbar = values[26];
    s.f0_hs = values[27];
    s.dv_f0_hs = values[28];
    s.env_enhanced = values[29];
    s.env_inviscid = values[30];
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::random_smooth_field;
    use crate::multiplier::weight;
    use num_complex::Complex64;

    fn grid() -> Arc<Grid> {
        Grid::new(6, 128, 32.0 * std::f64::consts::PI).unwrap()
    }

    fn params() -> WeightParams {
        WeightParams::with_nu(1e-3).unwrap()
    }

    #[test]
    fn zero_field_has_zero_energy() {
        let g = grid();
        let f = SpectralField::zeros(&g);
        let (e, ev) = energy_sigma(&f, None, 2.0, &params());
        assert_eq!(e, 0.0);
        assert_eq!(ev, 0.0);
        assert_eq!(ck_w(&f, 6.0, &params()), 0.0);
    }

    #[test]
    fn before_windows_a_sigma_is_plain_sobolev() {
        let g = grid();
        let f = random_smooth_field(&g, 3, 3, 12);
        let p = params();
        // every occupied |varrho| is below 3 or its window starts later
        // than t = 0.1
        let a = a_sigma_norm(&f, 0.1, &p);
        let hs = sobolev_norm(&f, p.sigma);
        assert!((a - hs).abs() < 1e-10 * hs, "{a} vs {hs}");
    }

    #[test]
    fn ck_w_single_mode_value() {
        // single occupied (k, eta) = (2, 12) at t = 6 (inside its window):
        // CK_w = dtw/w * |A^sigma f_hat|^2
        let g = Grid::new(6, 1024, 32.0 * std::f64::consts::PI).unwrap();
        let p = params();
        let j = (12.0 / g.deta()).round() as usize;
        let mut f = SpectralField::zeros(&g);
        f.coeffs[[2, j]] = Complex64::new(0.3, -0.1);
        let t = 6.0;
        // varrho(2, 12) = 12 (eta dominates)
        let rate = weight_log_deriv(t, 12.0, &p);
        assert!(rate > 0.0);
        let asig = a_sigma(2, 12.0, t, &p);
        let expected = rate * asig * asig * f.coeffs[[2, j]].norm_sqr();
        let got = ck_w(&f, t, &p);
        assert!((got - expected).abs() < 1e-12 * expected, "{got} vs {expected}");
        // outside every window of the occupied frequencies: zero
        assert_eq!(ck_w(&f, 30.0, &p), 0.0);
    }

    #[test]
    fn ck_w_integral_bounded_by_log_growth() {
        // int CK_w dt <= sup_t log-growth of w times sup_t ||A f||^2:
        // quadrature comparison on a single-mode field
        let g = Grid::new(6, 1024, 32.0 * std::f64::consts::PI).unwrap();
        let p = params();
        let j = (12.0 / g.deta()).round() as usize;
        let mut f = SpectralField::zeros(&g);
        f.coeffs[[1, j]] = Complex64::new(1.0, 0.0);
        let mut integral = 0.0;
        let dt = 0.01;
        let mut sup_a2: f64 = 0.0;
        let mut t = 1.0;
        while t < 30.0 {
            integral += ck_w(&f, t, &p) * dt;
            let a = a_sigma_norm(&f, t, &p);
            sup_a2 = sup_a2.max(a * a);
            t += dt;
        }
        let log_growth = weight(1e9, 12.0, &p).ln();
        assert!(
            integral <= log_growth * sup_a2 * (1.0 + 1e-6),
            "{integral} vs {}",
            log_growth * sup_a2
        );
        assert!(integral > 0.0);
    }

    #[test]
    fn theorem_report_trivial_and_ceilings() {
        // zero data: all ratios 0, trivially passing
        let trace = EnergyTrace {
            samples: vec![TraceSample {
                t: 1.0,
                ..TraceSample::default()
            }],
            terminal: TerminalEvent::Completed,
        };
        let r = theorem_report(
            &trace,
            1e-3,
            Some(ReportCeilings {
                stability_ratio: 2.0,
                enhanced_c: 10.0,
                inviscid_c: 10.0,
            }),
        );
        assert!(r.complete);
        assert_eq!(r.stability_sup_ratio, 0.0);
        assert_eq!(r.stability_pass, Some(true));
        assert_eq!(r.enhanced_pass, Some(true));

        // a sample breaching the ceiling flips the flag
        let mut s = TraceSample::default();
        s.t = 5.0;
        s.stability_ratio = 5.0;
        let trace = EnergyTrace {
            samples: vec![s],
            terminal: TerminalEvent::CeilingExceeded { t: 5.0 },
        };
        let r = theorem_report(
            &trace,
            1e-3,
            Some(ReportCeilings {
                stability_ratio: 2.0,
                enhanced_c: 10.0,
                inviscid_c: 10.0,
            }),
        );
        assert!(!r.complete);
        assert_eq!(r.stability_pass, Some(false));
    }

    #[test]
    fn bootstrap_zero_data_is_all_zero() {
        let mut samples = Vec::new();
        for n in 0..5 {
            samples.push(TraceSample {
                t: 1.0 + n as f64,
                ..TraceSample::default()
            });
        }
        let trace = EnergyTrace {
            samples,
            terminal: TerminalEvent::Completed,
        };
        let report = bootstrap_monitor(&trace, 0.05, 1e-3);
        assert!(report.all_below_one);
        assert_eq!(report.series.len(), BOOTSTRAP_NAMES.len());
        for s in &report.series {
            assert_eq!(s.max_ratio, 0.0);
        }
    }

    #[test]
    fn bootstrap_ratio_hand_check() {
        // one sample, no integrals: main_high ratio is
        // ||A f||^2 / (8 eps nu^{1/3})^2
        let eps = 0.05;
        let nu = 1e-3f64;
        let mut s = TraceSample::default();
        s.t = 2.0;
        s.a_sigma_norm = 0.7 * 8.0 * eps * nu.cbrt();
        let trace = EnergyTrace {
            samples: vec![s],
            terminal: TerminalEvent::Completed,
        };
        let report = bootstrap_monitor(&trace, eps, nu);
        let main = &report.series[0];
        assert!((main.max_ratio - 0.49).abs() < 1e-12, "{}", main.max_ratio);
        assert!(report.all_below_one);

        // violation detection
        let mut s = TraceSample::default();
        s.t = 2.0;
        s.a_sigma_norm = 1.1 * 8.0 * eps * nu.cbrt();
        let trace = EnergyTrace {
            samples: vec![s],
            terminal: TerminalEvent::Completed,
        };
        let report = bootstrap_monitor(&trace, eps, nu);
        assert!(!report.all_below_one);
        assert_eq!(report.series[0].first_violation, Some(2.0));
    }
}
