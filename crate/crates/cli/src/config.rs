//! Run configuration, read from TOML.
//!
//! ```toml
//! schema = 1
//! mode = "oscillator"        # oscillator | series-rlc | parallel-rlc | planar | sphere-plate
//! units = "reduced"          # reduced | si
//!
//! [parameters]
//! omega = 1.0
//! gamma0 = 0.5
//! temperature = 0.25
//! d_omega = 1.0
//!
//! [sweep]
//! parameter = "temperature"
//! start = 0.01
//! stop = 10.0
//! points = 50
//! spacing = "log"            # linear | log
//!
//! [output]
//! format = "csv"             # csv | json
//! path = "out.csv"
//!
//! [validation]
//! oracle = true
//! n_max = 100000
//! ```

use std::fmt;
use std::path::PathBuf;

use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn error<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Oscillator,
    SeriesRlc,
    ParallelRlc,
    Planar,
    SpherePlate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Reduced,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Every numeric parameter any mode understands. Which ones are required
/// depends on the mode; see [`Config::validate`].
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameters {
    pub omega: Option<f64>,
    pub gamma0: Option<f64>,
    pub omega_d: Option<f64>,
    pub temperature: Option<f64>,
    pub d_omega: Option<f64>,
    pub d_gamma0: Option<f64>,
    pub d_omega_d: Option<f64>,
    pub lambda: Option<f64>,

    pub resistance: Option<f64>,
    pub inductance: Option<f64>,
    pub capacitance: Option<f64>,
    pub d_capacitance: Option<f64>,
    pub d_inductance: Option<f64>,

    pub area: Option<f64>,
    pub gap: Option<f64>,
    pub permittivity: Option<f64>,
    pub radius: Option<f64>,

    /// Lumped-element advisory: element size r₀ and frequency cutoff ω_c.
    pub element_size: Option<f64>,
    pub cutoff: Option<f64>,

    pub regime: Option<String>,
    pub casimir_regime: Option<String>,
}

impl Parameters {
    fn slot(&mut self, name: &str) -> Option<&mut Option<f64>> {
        Some(match name {
            "omega" => &mut self.omega,
            "gamma0" => &mut self.gamma0,
            "omega_d" => &mut self.omega_d,
            "temperature" => &mut self.temperature,
            "d_omega" => &mut self.d_omega,
            "d_gamma0" => &mut self.d_gamma0,
            "d_omega_d" => &mut self.d_omega_d,
            "lambda" => &mut self.lambda,
            "resistance" => &mut self.resistance,
            "inductance" => &mut self.inductance,
            "capacitance" => &mut self.capacitance,
            "d_capacitance" => &mut self.d_capacitance,
            "d_inductance" => &mut self.d_inductance,
            "area" => &mut self.area,
            "gap" => &mut self.gap,
            "permittivity" => &mut self.permittivity,
            "radius" => &mut self.radius,
            "element_size" => &mut self.element_size,
            "cutoff" => &mut self.cutoff,
            _ => return None,
        })
    }

    /// Copy with `name` set to `value`.
    pub fn with(&self, name: &str, value: f64) -> Parameters {
        let mut out = self.clone();
        if let Some(slot) = out.slot(name) {
            *slot = Some(value);
        }
        out
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.clone().slot(name).and_then(|s| *s)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                let t = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * t,
                    Spacing::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Validation {
    #[serde(default)]
    pub oracle: bool,
    pub n_max: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema: u32,
    pub mode: Mode,
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub parameters: Parameters,
    pub sweep: Option<Sweep>,
    #[serde(default)]
    pub output: Output,
    #[serde(default)]
    pub validation: Validation,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let config: Config = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    fn required(&self) -> &'static [&'static str] {
        match self.mode {
            Mode::Oscillator => &["omega", "temperature"],
            Mode::SeriesRlc => &["resistance", "inductance", "capacitance", "temperature"],
            Mode::ParallelRlc => &["resistance", "inductance", "capacitance", "temperature"],
            Mode::Planar => &["area", "gap", "inductance", "temperature"],
            Mode::SpherePlate => &["radius", "gap", "inductance", "temperature"],
        }
    }

    fn allowed(&self) -> &'static [&'static str] {
        match self.mode {
            Mode::Oscillator => &[
                "omega", "gamma0", "omega_d", "temperature", "d_omega", "d_gamma0", "d_omega_d", "lambda",
            ],
            Mode::SeriesRlc => &[
                "resistance", "inductance", "capacitance", "d_capacitance", "temperature", "lambda",
                "element_size", "cutoff",
            ],
            Mode::ParallelRlc => &[
                "resistance", "inductance", "capacitance", "d_inductance", "temperature", "lambda",
                "element_size", "cutoff",
            ],
            Mode::Planar => &[
                "area", "gap", "permittivity", "resistance", "inductance", "temperature", "element_size", "cutoff",
            ],
            Mode::SpherePlate => &["radius", "gap", "resistance", "inductance", "temperature", "element_size", "cutoff"],
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema != SCHEMA_VERSION {
            return error(format!("unsupported schema {} (expected {SCHEMA_VERSION})", self.schema));
        }
        let allowed = self.allowed();
        for name in ALL_NUMERIC {
            if self.parameters.get(name).is_some() && !allowed.contains(name) {
                return error(format!("parameter `{name}` is not used in {:?} mode", self.mode));
            }
        }
        for name in self.required() {
            let swept = self.sweep.as_ref().is_some_and(|s| s.parameter == *name);
            if self.parameters.get(name).is_none() && !swept {
                return error(format!("missing parameter `{name}`"));
            }
        }
        if self.parameters.casimir_regime.is_some() && !matches!(self.mode, Mode::Planar | Mode::SpherePlate) {
            return error("casimir_regime only applies to planar and sphere-plate modes");
        }
        if let Some(s) = &self.sweep {
            if !allowed.contains(&s.parameter.as_str()) {
                return error(format!("cannot sweep `{}` in {:?} mode", s.parameter, self.mode));
            }
            if !(s.start > 0.0 && s.stop > s.start && s.stop.is_finite()) {
                return error("sweep range must satisfy 0 < start < stop");
            }
            if s.points == 0 {
                return error("sweep needs at least one point");
            }
        }
        if self.validation.n_max == Some(0) {
            return error("validation.n_max must be >= 1");
        }
        Ok(())
    }
}

const ALL_NUMERIC: &[&str] = &[
    "omega", "gamma0", "omega_d", "temperature", "d_omega", "d_gamma0", "d_omega_d", "lambda", "resistance",
    "inductance", "capacitance", "d_capacitance", "d_inductance", "area", "gap", "permittivity", "radius",
    "element_size", "cutoff",
];
