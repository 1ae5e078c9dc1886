//! The (nu, amplitude) threshold sweep: per-viscosity bisection of the
//! critical amplitude and the threshold-exponent fit.
//!
//! Bisection runs on the absolute amplitude (not on epsilon at a fixed
//! `nu^{1/3}` scaling) so the sweep can discover the exponent rather than
//! assume it. Cells are independent and may run on a thread pool; cell
//! failures are recorded as inconclusive and never abort the sweep.

use rayon::prelude::*;

use crate::config::{Classifier, SweepConfig};
use crate::diagnostics::theorem_report;
use crate::error::Result;
use crate::fit::linear_fit;
use crate::solver::{simulate, Classification};

/// One evaluated (nu, amplitude) cell.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub nu: f64,
    pub amplitude: f64,
    pub beta_amp_used: f64,
    pub classification: Classification,
    pub sup_energy_ratio: f64,
    pub fitted_envelope_c: f64,
    /// deterministic runtime measure (solver steps); wall clock goes to
    /// stderr only so outputs stay byte-identical across reruns
    pub runtime_steps: u64,
}

/// Critical amplitude found for one viscosity (None when the bracket never
/// straddled the threshold).
#[derive(Debug, Clone)]
pub struct CriticalAmplitude {
    pub nu: f64,
    pub amplitude: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub cells: Vec<SweepCell>,
    pub criticals: Vec<CriticalAmplitude>,
    /// fitted threshold exponent from log(critical) vs log(nu), with r^2
    pub gamma_fit: Option<(f64, f64)>,
}

fn classify_cell(cfg: &SweepConfig, nu: f64, amplitude: f64) -> SweepCell {
    let beta_amp_used = 0.0; // bisection runs on absolute amplitudes
    match cfg.classifier {
        Classifier::StubNuThird => {
            let critical = nu.cbrt();
            let classification = if amplitude <= critical {
                Classification::Stable
            } else {
                Classification::Unstable
            };
            SweepCell {
                nu,
                amplitude,
                beta_amp_used,
                classification,
                sup_energy_ratio: amplitude / critical,
                fitted_envelope_c: 0.0,
                runtime_steps: 0,
            }
        }
        Classifier::Simulate => {
            let mut run_cfg = cfg.base.clone();
            run_cfg.nu = nu;
            run_cfg.amplitude = amplitude;
            run_cfg.beta_amp = beta_amp_used;
            // derive a distinct deterministic seed per cell
            run_cfg.seed = cfg
                .base
                .seed
                .wrapping_mul(0x9e3779b97f4a7c15)
                .wrapping_add(cell_key(nu, amplitude));
            match simulate(&run_cfg) {
                Ok(run) => {
                    let decay = theorem_report(&run.trace, nu, None);
                    SweepCell {
                        nu,
                        amplitude,
                        beta_amp_used,
                        classification: run.classification,
                        sup_energy_ratio: decay.stability_sup_ratio,
                        fitted_envelope_c: decay.enhanced_c,
                        runtime_steps: run.steps_taken,
                    }
                }
                Err(_) => SweepCell {
                    nu,
                    amplitude,
                    beta_amp_used,
                    classification: Classification::Inconclusive,
                    sup_energy_ratio: f64::NAN,
                    fitted_envelope_c: f64::NAN,
                    runtime_steps: 0,
                },
            }
        }
    }
}

fn cell_key(nu: f64, amplitude: f64) -> u64 {
    nu.to_bits() ^ amplitude.to_bits().rotate_left(17)
}

/// Bisect the critical amplitude for one viscosity. Returns the evaluated
/// cells and the bracket midpoint when the threshold was straddled.
fn bisect_nu(cfg: &SweepConfig, nu: f64) -> (Vec<SweepCell>, Option<f64>) {
    let mut cells = Vec::new();
    let eval = |amp: f64, cells: &mut Vec<SweepCell>| -> Classification {
        let cell = classify_cell(cfg, nu, amp);
        let class = cell.classification;
        cells.push(cell);
        class
    };
    let mut lo = cfg.amp_min;
    let mut hi = cfg.amp_max;
    let lo_class = eval(lo, &mut cells);
    if lo_class != Classification::Stable {
        // bracket floor is already unstable (or inconclusive): no bisection
        return (cells, None);
    }
    let hi_class = eval(hi, &mut cells);
    if hi_class != Classification::Unstable {
        return (cells, None);
    }
    while hi / lo > 1.0 + cfg.rel_tol {
        let mid = (lo * hi).sqrt();
        match eval(mid, &mut cells) {
            Classification::Stable => lo = mid,
            Classification::Unstable => hi = mid,
            Classification::Inconclusive => return (cells, None),
        }
    }
    (cells, Some((lo * hi).sqrt()))
}

/// Run the sweep. `threads = 0` means one rayon task per viscosity with
/// the global pool; `threads = 1` forces sequential execution.
pub fn sweep(cfg: &SweepConfig, threads: usize) -> Result<SweepReport> {
    let run_one = |&nu: &f64| bisect_nu(cfg, nu);
    let results: Vec<(Vec<SweepCell>, Option<f64>)> = if threads == 1 {
        cfg.nus.iter().map(run_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| crate::error::Error::InvalidArgument(e.to_string()))?;
        pool.install(|| cfg.nus.par_iter().map(run_one).collect())
    };

    let mut cells = Vec::new();
    let mut criticals = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (nu, (cell_group, critical)) in cfg.nus.iter().zip(results) {
        cells.extend(cell_group);
        criticals.push(CriticalAmplitude {
            nu: *nu,
            amplitude: critical,
        });
        if let Some(a) = critical {
            xs.push(nu.ln());
            ys.push(a.ln());
        }
    }
    let gamma_fit = linear_fit(&xs, &ys).map(|(slope, _, r2)| (slope, r2));
    Ok(SweepReport {
        cells,
        criticals,
        gamma_fit,
    })
}
