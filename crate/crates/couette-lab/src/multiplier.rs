//! Resonant-interval bookkeeping, the toy-model growth factor, the ghost
//! weight `w(t, eta)`, the frequency blender `varrho`, and the Fourier
//! multipliers `A^sigma`, `A_E^s`, `D` and `dw/w` built from them.
//!
//! A resonant interval `I_{m,eta} = [2eta/(2m+1), 2eta/(2m-1)]` contains the
//! single critical time `eta/m`. Crossing it multiplies the weight by the
//! jump `G_m(eta)` of the scalar growth ODE, so `w` is 1 before the first
//! window, nondecreasing inside `[t(eta), 2|eta|]`, and frozen afterwards.
//! Everything here is a pure function of `(t, k, eta)` and a parameter pack.

use std::sync::Arc;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::spectral::{bracket, Grid};

/// Viscosity, ghost-weight exponent and the two Sobolev indices used by the
/// monitored norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub nu: f64,
    pub beta: f64,
    pub sigma: f64,
    pub s: f64,
}

impl WeightParams {
    pub const DEFAULT_BETA: f64 = 0.5;
    pub const DEFAULT_SIGMA: f64 = 12.0;
    pub const DEFAULT_S: f64 = 2.0;

    pub fn new(nu: f64, beta: f64, sigma: f64, s: f64) -> Result<Self> {
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "viscosity must lie in (0, 1], got {nu}"
            )));
        }
        if !(beta > 0.0 && beta <= 0.5) {
            return Err(Error::InvalidArgument(format!(
                "beta must lie in (0, 1/2], got {beta}"
            )));
        }
        if !(s > 0.0 && s <= sigma) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < s <= sigma, got s = {s}, sigma = {sigma}"
            )));
        }
        Ok(WeightParams { nu, beta, sigma, s })
    }

    pub fn with_nu(nu: f64) -> Result<Self> {
        Self::new(nu, Self::DEFAULT_BETA, Self::DEFAULT_SIGMA, Self::DEFAULT_S)
    }

    pub fn nu_third(&self) -> f64 {
        self.nu.cbrt()
    }
}

/// One resonant interval: `I_{m,eta} = [t_m, t_{m-1}]` around the critical
/// time `eta/m`, with half-widths `D^- = eta/m - t_m` and
/// `D^+ = t_{m-1} - eta/m`. Valid only for `m eta > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceIndex {
    pub m: u64,
    pub eta: f64,
    pub t_m: f64,
    pub d_minus: f64,
    pub d_plus: f64,
}

impl ResonanceIndex {
    pub fn new(m: u64, eta: f64) -> Result<Self> {
        if m == 0 || eta <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "resonant interval needs m >= 1 and eta > 0, got m = {m}, eta = {eta}"
            )));
        }
        let mf = m as f64;
        Ok(ResonanceIndex {
            m,
            eta,
            t_m: 2.0 * eta / (2.0 * mf + 1.0),
            d_minus: eta / ((2.0 * mf + 1.0) * mf),
            d_plus: eta / ((2.0 * mf - 1.0) * mf),
        })
    }

    /// Right endpoint `t_{m-1, eta}`.
    pub fn t_upper(&self) -> f64 {
        2.0 * self.eta / (2.0 * self.m as f64 - 1.0)
    }

    pub fn critical_time(&self) -> f64 {
        self.eta / self.m as f64
    }
}

/// Number of resonant intervals `E(sqrt(|eta|))`: the largest integer with
/// `(2E + 1) E <= |eta|`. `None` when `|eta| < 3` (no window).
pub fn interval_count(eta: f64) -> Option<u64> {
    let a = eta.abs();
    if a < 3.0 {
        return None;
    }
    // solve 2 E^2 + E <= a, then correct for float slop
    let mut e = ((-1.0 + (1.0 + 8.0 * a).sqrt()) / 4.0).floor() as u64;
    while (2 * (e + 1) + 1) * (e + 1) <= a as u64 {
        e += 1;
    }
    while e > 0 && ((2 * e + 1) * e) as f64 > a {
        e -= 1;
    }
    if e == 0 {
        None
    } else {
        Some(e)
    }
}

/// Start of the resonant window, `t(eta) = 2 eta / (2 E(sqrt(|eta|)) + 1)`.
pub fn window_start(eta: f64) -> Option<f64> {
    let e = interval_count(eta)? as f64;
    Some(2.0 * eta / (2.0 * e + 1.0))
}

/// The whole resonant window `I_t(eta) = [t(|eta|), 2|eta|]`, reported for
/// `|eta|` (the weight is even in `eta`).
pub fn resonant_window(eta: f64) -> Option<(f64, f64)> {
    let a = eta.abs();
    let start = window_start(a)?;
    Some((start, 2.0 * a))
}

fn damping_prefactor(m: u64, eta: f64, params: &WeightParams) -> f64 {
    let idx = ResonanceIndex::new(m, eta).expect("validated by caller");
    let x = params.nu_third() * idx.t_m;
    (1.0 + x * x).powf(-(1.0 + params.beta) / 2.0)
}

/// Exponent rate of the reduced growth ODE on `I_{m, eta}`:
/// `<nu^{1/3} t_m>^{-(1+beta)} nu^{1/3} eta / m^2`.
pub fn growth_rate(m: u64, eta: f64, params: &WeightParams) -> f64 {
    damping_prefactor(m, eta, params) * params.nu_third() * eta / (m * m) as f64
}

/// Solution `g_m(tau, eta)` of the reduced toy ODE, for
/// `tau in [-D^-, D^+]`; identically 1 outside the admissible range of `m`.
pub fn growth_factor(m: u64, eta: f64, tau: f64, params: &WeightParams) -> Result<f64> {
    let a = eta.abs();
    let Some(e) = interval_count(a) else {
        return Ok(1.0);
    };
    if m == 0 || m > e {
        // out-of-range m: g == 1
        return Ok(1.0);
    }
    let idx = ResonanceIndex::new(m, a)?;
    if tau < -idx.d_minus - 1e-12 || tau > idx.d_plus + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "tau = {tau} outside [-D^-, D^+] = [{}, {}]",
            -idx.d_minus, idx.d_plus
        )));
    }
    let rate = growth_rate(m, a, params);
    Ok((rate * (tau.atan() + idx.d_minus.atan())).exp())
}

/// Total jump `G_m(eta) = g_m(D^+, eta)` across one interval.
pub fn growth_jump(m: u64, eta: f64, params: &WeightParams) -> f64 {
    let a = eta.abs();
    match interval_count(a) {
        Some(e) if m >= 1 && m <= e => {
            let idx = ResonanceIndex::new(m, a).expect("m, a validated");
            let rate = growth_rate(m, a, params);
            (rate * (idx.d_plus.atan() + idx.d_minus.atan())).exp()
        }
        _ => 1.0,
    }
}

/// log of the total growth over the whole window,
/// `sum_{m=1}^{E} log G_m(eta)`. Accumulated in log space.
pub fn log_total_growth(eta: f64, params: &WeightParams) -> f64 {
    let a = eta.abs();
    let Some(e) = interval_count(a) else {
        return 0.0;
    };
    (1..=e)
        .map(|m| {
            let idx = ResonanceIndex::new(m, a).expect("valid interval");
            growth_rate(m, a, params) * (idx.d_plus.atan() + idx.d_minus.atan())
        })
        .sum()
}

/// The ghost weight `w(t, eta)`: 1 before the window, multiplicative
/// accumulation of the `g_j` across intervals, frozen at `t >= 2|eta|`.
/// Even in `eta`; nondecreasing in `t`; always `>= 1`.
pub fn weight(t: f64, eta: f64, params: &WeightParams) -> f64 {
    let a = eta.abs();
    let Some(e) = interval_count(a) else {
        return 1.0;
    };
    let start = 2.0 * a / (2.0 * e as f64 + 1.0);
    if t <= start {
        return 1.0;
    }
    if t >= 2.0 * a {
        return log_total_growth(a, params).exp();
    }
    // t sits in I_{j, a} with j = ceil((2a/t - 1) / 2), clamped to [1, E]
    let j = (((2.0 * a / t - 1.0) / 2.0).ceil().max(1.0) as u64).min(e);
    let mut log_w = 0.0;
    for m in (j + 1)..=e {
        let idx = ResonanceIndex::new(m, a).expect("valid interval");
        log_w += growth_rate(m, a, params) * (idx.d_plus.atan() + idx.d_minus.atan());
    }
    let idx = ResonanceIndex::new(j, a).expect("valid interval");
    let tau = (t - idx.critical_time()).clamp(-idx.d_minus, idx.d_plus);
    log_w += growth_rate(j, a, params) * (tau.atan() + idx.d_minus.atan());
    log_w.exp()
}

/// `d_t w / w` at `(t, eta)`: the Lorentzian rate inside the active interval,
/// zero outside the window. Even in `eta`.
pub fn weight_log_deriv(t: f64, eta: f64, params: &WeightParams) -> f64 {
    let a = eta.abs();
    let Some(e) = interval_count(a) else {
        return 0.0;
    };
    let start = 2.0 * a / (2.0 * e as f64 + 1.0);
    if t < start || t > 2.0 * a {
        return 0.0;
    }
    let j = (((2.0 * a / t - 1.0) / 2.0).ceil().max(1.0) as u64).min(e);
    let dt = t - a / j as f64;
    growth_rate(j, a, params) / (1.0 + dt * dt)
}

// Transition profile of the blender density on its window: the smoothstep
// 3u^2 - 2u^3 plus the correction 15 u^2 (1-u)^2, which keeps C^1 junctions
// and makes the window integral exactly the window width (mean value 1).
fn rho_profile(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        3.0 * u * u - 2.0 * u * u * u + 15.0 * u * u * (1.0 - u) * (1.0 - u)
    }
}

// Antiderivative of rho on [1/20, 1/10] in window coordinates:
// integral_0^u rho = 6u^3 - 8u^4 + 3u^5 (equals 1 at u = 1).
fn rho_integral(s: f64) -> f64 {
    const LO: f64 = 1.0 / 20.0;
    const HI: f64 = 1.0 / 10.0;
    if s <= LO {
        0.0
    } else if s >= HI {
        s - LO
    } else {
        let u = (s - LO) / (HI - LO);
        let q = 6.0 * u.powi(3) - 8.0 * u.powi(4) + 3.0 * u.powi(5);
        (HI - LO) * q
    }
}

/// The blender density `rho(x)`: 0 below 1/20, 1 above 1/10, smooth in
/// between with `int_{1/20}^{1/10} rho = 1/20`.
pub fn rho(x: f64) -> f64 {
    const LO: f64 = 1.0 / 20.0;
    const HI: f64 = 1.0 / 10.0;
    if x <= LO {
        0.0
    } else if x >= HI {
        1.0
    } else {
        rho_profile((x - LO) / (HI - LO))
    }
}

/// Frequency blender `varrho(k, eta)`, a smooth synthesis of `k/20` and
/// `eta`: equals `k/20` for `|eta| <= |k|/20`, equals `eta` for
/// `|eta| >= |k|/10`, and `eta` itself when `k = 0`. Odd under
/// `(k, eta) -> (-k, -eta)`.
pub fn varrho(k: i64, eta: f64) -> f64 {
    if k == 0 {
        return eta;
    }
    let kf = k as f64;
    // k/20 + int_0^eta rho(x/k) dx = k/20 + k * int_0^{eta/k} rho
    kf / 20.0 + kf * rho_integral(eta / kf)
}

/// `w_k(t, eta) = w(t, varrho(k, eta))`.
pub fn weight_k(t: f64, k: i64, eta: f64, params: &WeightParams) -> f64 {
    weight(t, varrho(k, eta), params)
}

/// `A^sigma_k(t, eta) = <k, eta>^sigma / w_k(t, eta)`.
pub fn a_sigma(k: i64, eta: f64, t: f64, params: &WeightParams) -> f64 {
    bracket(k, eta).powf(params.sigma) / weight_k(t, k, eta, params)
}

/// Enhanced-dissipation multiplier `D(t, eta) = nu |eta|^3 / 3 +
/// nu (t^3 - 8 |eta|^3)_+ / 24`.
pub fn d_mult(t: f64, eta: f64, nu: f64) -> f64 {
    let a3 = eta.abs().powi(3);
    nu * a3 / 3.0 + nu * (t.powi(3) - 8.0 * a3).max(0.0) / 24.0
}

/// `A_E^s(t, k, eta) = <k, eta>^s D(t, eta)`; a nonzero-mode multiplier,
/// rejected at `k = 0`.
pub fn a_enhanced(k: i64, eta: f64, t: f64, params: &WeightParams) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "A_E is a nonzero-mode multiplier; queried at k = 0".into(),
        ));
    }
    Ok(bracket(k, eta).powf(params.s) * d_mult(t, eta, params.nu))
}

/// `d_t w_k / w_k` at `(t, k, eta)` through the blender.
pub fn weight_log_deriv_k(t: f64, k: i64, eta: f64, params: &WeightParams) -> f64 {
    weight_log_deriv(t, varrho(k, eta), params)
}

/// `A^sigma` restricted to the zero x-mode: `<eta>^sigma / w(t, eta)`.
/// Used for the 1D coordinate-profile norms.
pub fn bracket_power_over_weight_1d(eta: f64, t: f64, params: &WeightParams) -> f64 {
    bracket(0, eta).powf(params.sigma) / weight(t, eta, params)
}

/// Indicator of the resonant window of `varrho(k, eta)`; used as the
/// `chi_R` cutoff in the weighted flux diagnostics.
pub fn in_resonant_window(t: f64, k: i64, eta: f64) -> bool {
    match resonant_window(varrho(k, eta)) {
        Some((lo, hi)) => t >= lo && t <= hi,
        None => false,
    }
}

/// Precomputed multiplier samples on a grid lattice at one time.
pub struct WeightTable {
    pub t: f64,
    pub a_sigma: Array2<f64>,
    pub a_enhanced: Array2<f64>,
    pub d: Array2<f64>,
    pub dtw_over_w: Array2<f64>,
    pub weight_k: Array2<f64>,
}

impl WeightTable {
    /// Evaluate all multipliers on the live lattice slots (Nyquist rows get
    /// zeros; `A_E` is zero on the `k = 0` row where it is undefined).
    pub fn build(grid: &Arc<Grid>, t: f64, params: &WeightParams) -> WeightTable {
        let shape = (grid.nx(), grid.nv());
        let mut tab = WeightTable {
            t,
            a_sigma: Array2::zeros(shape),
            a_enhanced: Array2::zeros(shape),
            d: Array2::zeros(shape),
            dtw_over_w: Array2::zeros(shape),
            weight_k: Array2::zeros(shape),
        };
        for i in 0..grid.nx() {
            let Some(k) = grid.wavenumber_x(i) else {
                continue;
            };
            for j in 0..grid.nv() {
                let Some(eta) = grid.eta(j) else { continue };
                let wk = weight_k(t, k, eta, params);
                tab.weight_k[[i, j]] = wk;
                tab.a_sigma[[i, j]] = bracket(k, eta).powf(params.sigma) / wk;
                tab.d[[i, j]] = d_mult(t, eta, params.nu);
                tab.dtw_over_w[[i, j]] = weight_log_deriv_k(t, k, eta, params);
                if k != 0 {
                    tab.a_enhanced[[i, j]] =
                        bracket(k, eta).powf(params.s) * tab.d[[i, j]];
                }
            }
        }
        tab
    }
}
