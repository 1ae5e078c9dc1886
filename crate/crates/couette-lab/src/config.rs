//! Run configuration: a flat, line-oriented `key = value` file format with
//! line-anchored diagnostics, plus the typed configs built from it.
//!
//! Grammar per line: blank, `# comment`, or `key = value` where `key` is
//! `[A-Za-z_][A-Za-z0-9_]*`. Keys may not repeat. Unknown keys are errors
//! so typos fail loudly. Values are parsed by the consuming field.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::Preset;
use crate::multiplier::WeightParams;
use crate::spectral::Grid;

/// Raw parsed file: ordered key -> (line, value).
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    path: String,
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigMap {
    /// Parse the flat key = value format. `path` only labels diagnostics.
    pub fn parse(path: &str, text: &str) -> Result<ConfigMap> {
        let mut entries = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_err(path, line_no, "expected `key = value`"));
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty()
                || !key
                    .chars()
                    .next()
                    .map(|c| c.is_ascii_alphabetic() || c == '_')
                    .unwrap_or(false)
                || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(config_err(path, line_no, &format!("invalid key `{key}`")));
            }
            if value.is_empty() {
                return Err(config_err(
                    path,
                    line_no,
                    &format!("empty value for `{key}`"),
                ));
            }
            if entries
                .insert(key.to_string(), (line_no, value.to_string()))
                .is_some()
            {
                return Err(config_err(path, line_no, &format!("duplicate key `{key}`")));
            }
        }
        Ok(ConfigMap {
            path: path.to_string(),
            entries,
        })
    }

    pub fn load(path: &std::path::Path) -> Result<ConfigMap> {
        let text = std::fs::read_to_string(path)?;
        ConfigMap::parse(&path.display().to_string(), &text)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }

    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.entries.get(key)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<f64>().map(Some).map_err(|_| {
                config_err(&self.path, *line, &format!("`{key}` is not a number: `{v}`"))
            }),
        }
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<usize>().map(Some).map_err(|_| {
                config_err(
                    &self.path,
                    *line,
                    &format!("`{key}` is not a nonnegative integer: `{v}`"),
                )
            }),
        }
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => v.parse::<u64>().map(Some).map_err(|_| {
                config_err(
                    &self.path,
                    *line,
                    &format!("`{key}` is not a nonnegative integer: `{v}`"),
                )
            }),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.raw(key).map(|(_, v)| v.as_str())
    }

    /// Whitespace-separated list of floats.
    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, v)) => {
                let mut out = Vec::new();
                for tok in v.split_whitespace() {
                    out.push(tok.parse::<f64>().map_err(|_| {
                        config_err(
                            &self.path,
                            *line,
                            &format!("`{key}` has a non-numeric entry: `{tok}`"),
                        )
                    })?);
                }
                if out.is_empty() {
                    return Err(config_err(&self.path, *line, &format!("`{key}` is empty")));
                }
                Ok(Some(out))
            }
        }
    }

    /// Error if any key is outside the allowed set.
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        for (key, (line, _)) in &self.entries {
            if !allowed.contains(&key.as_str()) {
                return Err(config_err(
                    &self.path,
                    *line,
                    &format!("unknown key `{key}`"),
                ));
            }
        }
        Ok(())
    }

    fn line_of(&self, key: &str) -> usize {
        self.raw(key).map(|(l, _)| *l).unwrap_or(0)
    }

    pub fn value_err(&self, key: &str, msg: &str) -> Error {
        config_err(&self.path, self.line_of(key), msg)
    }
}

fn config_err(path: &str, line: usize, message: &str) -> Error {
    Error::Config {
        path: path.to_string(),
        line,
        message: message.to_string(),
    }
}

/// Time stepping: fixed dt or the step-doubling adaptive controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    Fixed(f64),
    Adaptive { tol: f64 },
}

/// Fully validated configuration of one simulation run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kmax: usize,
    pub nv: usize,
    pub lv: f64,
    pub dealias_fraction: f64,
    pub nu: f64,
    /// amplitude prefactor `a`; the initial norm is `a * nu^{beta_amp}`
    pub amplitude: f64,
    pub beta_amp: f64,
    pub preset: Preset,
    pub seed: u64,
    pub t_end: f64,
    pub dt: TimeStep,
    pub record_every: usize,
    pub sigma: f64,
    pub s: f64,
    pub beta: f64,
    /// run is classified unstable when ||f||_{H^sigma} exceeds
    /// `ceiling * ||f(0)||_{H^sigma}`
    pub instability_ceiling: f64,
    /// epsilon used by the bootstrap monitors; default `amplitude *
    /// nu^{beta_amp - 1/3}` so the initial norm is `epsilon nu^{1/3}`
    pub epsilon: Option<f64>,
}

pub const RUN_KEYS: &[&str] = &[
    "kmax",
    "nv",
    "lv_over_pi",
    "dealias_fraction",
    "nu",
    "amplitude",
    "beta_amp",
    "preset",
    "seed",
    "t_end",
    "dt",
    "adaptive_tol",
    "record_every",
    "sigma",
    "s",
    "beta",
    "instability_ceiling",
    "epsilon",
];

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kmax: 42,
            nv: 256,
            lv: Grid::DEFAULT_LV,
            dealias_fraction: Grid::DEFAULT_DEALIAS,
            nu: 1e-3,
            amplitude: 0.05,
            beta_amp: 1.0 / 3.0,
            preset: Preset::RandomBand,
            seed: 1,
            t_end: 40.0,
            dt: TimeStep::Fixed(0.05),
            record_every: 20,
            sigma: WeightParams::DEFAULT_SIGMA,
            s: WeightParams::DEFAULT_S,
            beta: WeightParams::DEFAULT_BETA,
            instability_ceiling: 4.0,
            epsilon: None,
        }
    }
}

impl RunConfig {
    pub fn from_map(map: &ConfigMap) -> Result<RunConfig> {
        map.reject_unknown(RUN_KEYS)?;
        let mut cfg = RunConfig::default();
        if let Some(v) = map.get_usize("kmax")? {
            cfg.kmax = v;
        }
        if let Some(v) = map.get_usize("nv")? {
            cfg.nv = v;
        }
        if let Some(v) = map.get_f64("lv_over_pi")? {
            cfg.lv = v * std::f64::consts::PI;
        }
        if let Some(v) = map.get_f64("dealias_fraction")? {
            cfg.dealias_fraction = v;
        }
        if let Some(v) = map.get_f64("nu")? {
            cfg.nu = v;
        }
        if let Some(v) = map.get_f64("amplitude")? {
            cfg.amplitude = v;
        }
        if let Some(v) = map.get_f64("beta_amp")? {
            cfg.beta_amp = v;
        }
        if let Some(v) = map.get_str("preset") {
            cfg.preset = Preset::parse(v).map_err(|e| map.value_err("preset", &e.to_string()))?;
        }
        if let Some(v) = map.get_u64("seed")? {
            cfg.seed = v;
        }
        if let Some(v) = map.get_f64("t_end")? {
            cfg.t_end = v;
        }
        match map.get_str("dt") {
            Some("adaptive") => {
                let tol = map.get_f64("adaptive_tol")?.unwrap_or(1e-8);
                cfg.dt = TimeStep::Adaptive { tol };
            }
            Some(v) => {
                let dt = v.parse::<f64>().map_err(|_| {
                    map.value_err("dt", &format!("`dt` must be a number or `adaptive`, got `{v}`"))
                })?;
                cfg.dt = TimeStep::Fixed(dt);
            }
            None => {}
        }
        if let Some(v) = map.get_usize("record_every")? {
            cfg.record_every = v;
        }
        if let Some(v) = map.get_f64("sigma")? {
            cfg.sigma = v;
        }
        if let Some(v) = map.get_f64("s")? {
            cfg.s = v;
        }
        if let Some(v) = map.get_f64("beta")? {
            cfg.beta = v;
        }
        if let Some(v) = map.get_f64("instability_ceiling")? {
            cfg.instability_ceiling = v;
        }
        cfg.epsilon = map.get_f64("epsilon")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        Grid::with_dealias(self.kmax, self.nv, self.lv, self.dealias_fraction)?;
        WeightParams::new(self.nu, self.beta, self.sigma, self.s)?;
        if !(self.amplitude > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if let TimeStep::Fixed(dt) = self.dt {
            if !(dt > 0.0 && dt <= self.t_end) {
                return Err(Error::InvalidArgument(format!(
                    "dt must lie in (0, t_end], got {dt}"
                )));
            }
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be >= 1".into()));
        }
        if !(self.instability_ceiling > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "instability_ceiling must exceed 1, got {}",
                self.instability_ceiling
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Arc<Grid>> {
        Grid::with_dealias(self.kmax, self.nv, self.lv, self.dealias_fraction)
    }

    pub fn weight_params(&self) -> Result<WeightParams> {
        WeightParams::new(self.nu, self.beta, self.sigma, self.s)
    }

    /// `||omega_in||_{H^sigma} = amplitude * nu^{beta_amp}`.
    pub fn effective_amplitude(&self) -> f64 {
        self.amplitude * self.nu.powf(self.beta_amp)
    }

    /// Epsilon for the bootstrap budgets: configured, or derived so the
    /// initial norm equals `epsilon * nu^{1/3}`.
    pub fn bootstrap_epsilon(&self) -> f64 {
        self.epsilon
            .unwrap_or_else(|| self.effective_amplitude() / self.nu.cbrt())
    }

    /// Serialize back to the file format (round-trips through `from_map`).
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        s.push_str("# simulation run configuration\n");
        s.push_str(&format!("kmax = {}\n", self.kmax));
        s.push_str(&format!("nv = {}\n", self.nv));
        s.push_str(&format!("lv_over_pi = {}\n", self.lv / std::f64::consts::PI));
        s.push_str(&format!("dealias_fraction = {}\n", self.dealias_fraction));
        s.push_str(&format!("nu = {}\n", self.nu));
        s.push_str(&format!("amplitude = {}\n", self.amplitude));
        s.push_str(&format!("beta_amp = {}\n", self.beta_amp));
        s.push_str(&format!("preset = {}\n", self.preset.name()));
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("t_end = {}\n", self.t_end));
        match self.dt {
            TimeStep::Fixed(dt) => s.push_str(&format!("dt = {dt}\n")),
            TimeStep::Adaptive { tol } => {
                s.push_str("dt = adaptive\n");
                s.push_str(&format!("adaptive_tol = {tol}\n"));
            }
        }
        s.push_str(&format!("record_every = {}\n", self.record_every));
        s.push_str(&format!("sigma = {}\n", self.sigma));
        s.push_str(&format!("s = {}\n", self.s));
        s.push_str(&format!("beta = {}\n", self.beta));
        s.push_str(&format!(
            "instability_ceiling = {}\n",
            self.instability_ceiling
        ));
        if let Some(eps) = self.epsilon {
            s.push_str(&format!("epsilon = {eps}\n"));
        }
        s
    }
}

/// How a sweep cell is classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classifier {
    /// run the full nonlinear simulation
    Simulate,
    /// synthetic oracle: stable iff amplitude <= nu^{1/3} (pipeline test)
    StubNuThird,
}

/// Configuration of a (nu, amplitude) threshold sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub nus: Vec<f64>,
    /// absolute amplitude bracket for the bisection
    pub amp_min: f64,
    pub amp_max: f64,
    /// relative tolerance on the critical amplitude
    pub rel_tol: f64,
    pub classifier: Classifier,
}

pub const SWEEP_KEYS: &[&str] = &[
    "nu_list",
    "amp_min",
    "amp_max",
    "rel_tol",
    "classifier",
    // base-run keys minus nu/amplitude (owned by the sweep)
    "kmax",
    "nv",
    "lv_over_pi",
    "dealias_fraction",
    "beta_amp",
    "preset",
    "seed",
    "t_end",
    "dt",
    "adaptive_tol",
    "record_every",
    "sigma",
    "s",
    "beta",
    "instability_ceiling",
    "epsilon",
];

impl SweepConfig {
    pub fn from_map(map: &ConfigMap) -> Result<SweepConfig> {
        map.reject_unknown(SWEEP_KEYS)?;
        let base = RunConfig::from_map(&strip_sweep_keys(map))?;
        let nus = map
            .get_f64_list("nu_list")?
            .ok_or_else(|| map.value_err("nu_list", "missing required key `nu_list`"))?;
        for &nu in &nus {
            if !(nu > 0.0 && nu <= 1.0) {
                return Err(map.value_err("nu_list", &format!("viscosity out of (0, 1]: {nu}")));
            }
        }
        let amp_min = map.get_f64("amp_min")?.unwrap_or(1e-3);
        let amp_max = map.get_f64("amp_max")?.unwrap_or(1.0);
        if !(amp_min > 0.0 && amp_min < amp_max) {
            return Err(map.value_err("amp_min", "need 0 < amp_min < amp_max"));
        }
        let rel_tol = map.get_f64("rel_tol")?.unwrap_or(0.1);
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(map.value_err("rel_tol", "rel_tol must lie in (0, 1)"));
        }
        let classifier = match map.get_str("classifier").unwrap_or("simulate") {
            "simulate" => Classifier::Simulate,
            "stub" => Classifier::StubNuThird,
            other => {
                return Err(map.value_err(
                    "classifier",
                    &format!("unknown classifier `{other}` (expected simulate or stub)"),
                ))
            }
        };
        Ok(SweepConfig {
            base,
            nus,
            amp_min,
            amp_max,
            rel_tol,
            classifier,
        })
    }
}

fn strip_sweep_keys(map: &ConfigMap) -> ConfigMap {
    let mut out = ConfigMap {
        path: map.path.clone(),
        entries: map.entries.clone(),
    };
    for key in ["nu_list", "amp_min", "amp_max", "rel_tol", "classifier"] {
        out.entries.remove(key);
    }
    out
}
