//! Deterministic file emission: CSV tables, plain-text summaries, witness
//! files and the per-run manifest. Every artifact is a pure function of
//! (config, seed, code); wall-clock time never reaches these files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::diagnostics::{BootstrapReport, DecayReport, EnergyTrace, TRACE_COLUMNS};
use crate::error::Result;
use crate::lemmas::{BoundKind, LemmaSuiteResult};
use crate::linear::EnvelopeReport;
use crate::solver::SimRun;
use crate::sweep::SweepReport;
use crate::toy::GrowthTable;

/// Schema version stamped into every CSV header comment.
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Fixed-precision float formatting shared by all writers.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.12e}")
    }
}

fn header(kind: &str) -> String {
    format!("# schema = {kind} v{CSV_SCHEMA_VERSION}\n")
}

pub fn trace_csv(trace: &EnergyTrace) -> String {
    let mut s = header("trace");
    s.push_str(&TRACE_COLUMNS.join(","));
    s.push('\n');
    for sample in &trace.samples {
        let row: Vec<String> = sample.values().iter().map(|v| fmt_f64(*v)).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn run_summary_text(run: &SimRun, decay: &DecayReport, boot: &BootstrapReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "classification = {}", run.classification.name());
    let _ = writeln!(s, "terminal = {}", run.trace.terminal.name());
    let _ = writeln!(s, "steps = {}", run.steps_taken);
    let _ = writeln!(s, "epsilon = {}", fmt_f64(run.epsilon));
    let _ = writeln!(s, "initial_h_sigma = {}", fmt_f64(run.initial_h_sigma));
    let _ = writeln!(
        s,
        "stability_sup_ratio = {}",
        fmt_f64(decay.stability_sup_ratio)
    );
    let _ = writeln!(s, "enhanced_c = {}", fmt_f64(decay.enhanced_c));
    let _ = writeln!(s, "inviscid_c = {}", fmt_f64(decay.inviscid_c));
    let _ = writeln!(s, "enhanced_c_late = {}", fmt_f64(decay.enhanced_c_late));
    let _ = writeln!(s, "inviscid_c_late = {}", fmt_f64(decay.inviscid_c_late));
    let _ = writeln!(s, "bootstrap_all_below_one = {}", boot.all_below_one);
    for series in &boot.series {
        let _ = writeln!(
            s,
            "bootstrap_max_{} = {}",
            series.name,
            fmt_f64(series.max_ratio)
        );
        if let Some(t) = series.first_violation {
            let _ = writeln!(s, "bootstrap_violation_{} = {}", series.name, fmt_f64(t));
        }
    }
    s
}

pub fn envelope_csv(report: &EnvelopeReport) -> String {
    let mut s = header("linear-envelope");
    s.push_str("t,inviscid_quantity,dx_psi,dy_psi,nonzero_enstrophy\n");
    for (i, t) in report.times.iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            fmt_f64(*t),
            fmt_f64(report.inviscid_quantity[i]),
            fmt_f64(report.dx_psi[i]),
            fmt_f64(report.dy_psi[i]),
            fmt_f64(report.nonzero_enstrophy[i]),
        );
    }
    s
}

pub fn envelope_summary_text(report: &EnvelopeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "nu = {}", fmt_f64(report.nu));
    let _ = writeln!(
        s,
        "fit_range = {} {}",
        fmt_f64(report.fit_range.0),
        fmt_f64(report.fit_range.1)
    );
    if let Some((c, rate)) = report.enstrophy_fit {
        let _ = writeln!(s, "enstrophy_fit_c = {}", fmt_f64(c));
        let _ = writeln!(s, "enstrophy_fit_rate = {}", fmt_f64(rate));
    }
    if let Some((c, rate)) = report.inviscid_fit {
        let _ = writeln!(s, "inviscid_fit_c = {}", fmt_f64(c));
        let _ = writeln!(s, "inviscid_fit_rate = {}", fmt_f64(rate));
    }
    if let Some(p) = report.dx_psi_power {
        let _ = writeln!(s, "dx_psi_power = {}", fmt_f64(p));
    }
    if let Some(p) = report.dy_psi_power {
        let _ = writeln!(s, "dy_psi_power = {}", fmt_f64(p));
    }
    s
}

pub fn growth_csv(table: &GrowthTable) -> String {
    let mut s = header("toy-growth");
    s.push_str("eta,log_total_growth,regime\n");
    for row in &table.rows {
        let _ = writeln!(
            s,
            "{},{},{}",
            fmt_f64(row.eta),
            fmt_f64(row.log_product),
            row.regime.name()
        );
    }
    let _ = writeln!(
        s,
        "# sup_log = {} at eta = {}",
        fmt_f64(table.sup_log_product),
        fmt_f64(table.argmax_eta)
    );
    s
}

pub fn lemma_csv(result: &LemmaSuiteResult) -> String {
    let mut s = header("lemma-suite");
    s.push_str("lemma,samples,worst_constant,bound_kind,bound,violations,pass\n");
    let kind = match result.bound_kind {
        BoundKind::Ceiling => "ceiling",
        BoundKind::Floor => "floor",
    };
    let _ = writeln!(
        s,
        "{},{},{},{},{},{},{}",
        result.lemma.name(),
        result.samples,
        fmt_f64(result.worst_constant),
        kind,
        fmt_f64(result.bound),
        result.violations,
        result.pass
    );
    s
}

pub fn sweep_csv(report: &SweepReport) -> String {
    let mut s = header("sweep");
    s.push_str(
        "nu,amplitude,beta_amp_used,classification,sup_energy_ratio,fitted_envelope_c,runtime_steps\n",
    );
    for row in &report.cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt_f64(row.nu),
            fmt_f64(row.amplitude),
            fmt_f64(row.beta_amp_used),
            row.classification.name(),
            fmt_f64(row.sup_energy_ratio),
            fmt_f64(row.fitted_envelope_c),
            row.runtime_steps
        );
    }
    s
}

pub fn sweep_summary_text(report: &SweepReport) -> String {
    let mut s = String::new();
    for critical in &report.criticals {
        let _ = writeln!(
            s,
            "critical_amplitude nu={} = {}",
            fmt_f64(critical.nu),
            critical
                .amplitude
                .map(fmt_f64)
                .unwrap_or_else(|| "undefined".to_string())
        );
    }
    match report.gamma_fit {
        Some((gamma, r2)) => {
            let _ = writeln!(s, "gamma = {}", fmt_f64(gamma));
            let _ = writeln!(s, "gamma_fit_r2 = {}", fmt_f64(r2));
        }
        None => {
            let _ = writeln!(s, "gamma = undefined");
        }
    }
    s
}

pub fn coords_csv(coords: &crate::coords::CoordinateState) -> String {
    let mut s = header("coords");
    s.push_str("v,y_of_v,c,vprime,vsecond,g,h,hbar,u0_tilde,f0\n");
    let grid = &coords.grid;
    for j in 0..grid.nv() {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(grid.v_point(j)),
            fmt_f64(coords.y_of_v[j]),
            fmt_f64(coords.c_of_v[j]),
            fmt_f64(coords.vprime[j]),
            fmt_f64(coords.vsecond[j]),
            fmt_f64(coords.g[j]),
            fmt_f64(coords.h[j]),
            fmt_f64(coords.hbar[j]),
            fmt_f64(coords.u0_tilde[j]),
            fmt_f64(coords.f0_of_v[j]),
        );
    }
    s
}

/// Write a file and remember it for the manifest.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<(String, String)>, // (relative name, sha256)
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<OutputDir> {
        std::fs::create_dir_all(root)?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, contents)?;
        let mut hasher = Sha256::new();
        hasher.update(contents.as_bytes());
        self.written
            .push((name.to_string(), format!("{:x}", hasher.finalize())));
        Ok(path)
    }

    /// Write `manifest.txt`: config hash, seed, and a sha256 per artifact.
    pub fn finish_manifest(&mut self, config_text: &str, seed: u64) -> Result<()> {
        let mut hasher = Sha256::new();
        hasher.update(config_text.as_bytes());
        let mut s = String::new();
        let _ = writeln!(s, "config_sha256 = {:x}", hasher.finalize());
        let _ = writeln!(s, "seed = {seed}");
        let _ = writeln!(s, "schema_version = {CSV_SCHEMA_VERSION}");
        let mut rows = self.written.clone();
        rows.sort();
        for (name, hash) in rows {
            let _ = writeln!(s, "sha256 {name} = {hash}");
        }
        let path = self.root.join("manifest.txt");
        std::fs::write(path, s)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{TerminalEvent, TraceSample};

    #[test]
    fn float_formatting_is_stable() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(1.5), "1.500000000000e0");
        assert_eq!(fmt_f64(-2.25e-3), "-2.250000000000e-3");
    }

    #[test]
    fn trace_csv_has_schema_and_columns() {
        let trace = EnergyTrace {
            samples: vec![TraceSample {
                t: 1.0,
                ..TraceSample::default()
            }],
            terminal: TerminalEvent::Completed,
        };
        let csv = trace_csv(&trace);
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# schema = trace"));
        let cols = lines.next().unwrap();
        assert_eq!(cols.split(',').count(), TRACE_COLUMNS.len());
        assert_eq!(lines.next().unwrap().split(',').count(), TRACE_COLUMNS.len());
    }

    #[test]
    fn manifest_lists_written_files() {
        let dir = std::env::temp_dir().join(format!("couette-out-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let mut out = OutputDir::create(&dir).unwrap();
        out.write("a.csv", "hello\n").unwrap();
        out.write("b.txt", "world\n").unwrap();
        out.finish_manifest("nu = 0.001\n", 7).unwrap();
        let manifest = std::fs::read_to_string(dir.join("manifest.txt")).unwrap();
        assert!(manifest.contains("sha256 a.csv"));
        assert!(manifest.contains("sha256 b.txt"));
        assert!(manifest.contains("seed = 7"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
