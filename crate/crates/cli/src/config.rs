//! The run configuration: a single JSON document holding the system
//! parameters plus one optional section per command. Unknown fields are
//! rejected so config drift surfaces immediately instead of being
//! silently ignored.

use crate::error::{CliError, Result};
use frqme_core::{
    DensityMatrix, GateKind, GateSpec, SampledEnvelope, ShapedPulse, SystemParams,
};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub system: SystemSection,
    #[serde(default)]
    pub gate: Option<GateSection>,
    #[serde(default)]
    pub pulse: Option<PulseSection>,
    #[serde(default)]
    pub initial: Option<InitialSection>,
    #[serde(default)]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub optimize: Option<OptimizeSection>,
    #[serde(default)]
    pub r3: Option<R3Section>,
    #[serde(default)]
    pub feasibility: Option<FeasibilitySection>,
}

/// Relaxation and fluctuation parameters. Omitting a relaxation time
/// means that channel is absent (the time is infinite).
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(default)]
    pub t1: Option<f64>,
    #[serde(default)]
    pub t2: Option<f64>,
    pub m: f64,
    pub tau_c: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GateSection {
    Hadamard { omega1: f64 },
    RotationX { omega1: f64, angle: f64 },
    RotationY { omega1: f64, angle: f64 },
    /// Chain of (phase, flip angle) rotations applied in order.
    Custom { omega1: f64, rotations: Vec<(f64, f64)> },
}

/// A shaped pulse read from sampled-envelope files: two whitespace-
/// separated columns per line (time in seconds, value), `#` comments
/// allowed. The phase is either a constant or its own sampled file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub amplitude_file: PathBuf,
    #[serde(default)]
    pub phase: Option<f64>,
    #[serde(default)]
    pub phase_file: Option<PathBuf>,
    pub dt: f64,
    #[serde(default = "default_true")]
    pub richardson_check: bool,
}

fn default_true() -> bool {
    true
}

/// Explicit initial state; when absent, simulation starts from the
/// pseudopure state with the system's polarization.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub bloch: [f64; 3],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub m: Option<f64>,
    #[serde(default)]
    pub beta: Option<AxisSection>,
    #[serde(default)]
    pub x: Option<AxisSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeSection {
    pub m: f64,
    #[serde(default = "default_method")]
    pub method: MethodName,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    ClosedForm,
    FullSimulation,
}

fn default_method() -> MethodName {
    MethodName::ClosedForm
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct R3Section {
    pub omega1: f64,
    #[serde(default)]
    pub initial_m: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeasibilitySection {
    pub j: f64,
}

impl FileConfig {
    /// Reads and parses the config document, with the parser's
    /// line/column diagnostics passed through on failure.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!("{} at {}", e, path.display()))
        })
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        SystemParams::new(
            self.system.t1.unwrap_or(f64::INFINITY),
            self.system.t2.unwrap_or(f64::INFINITY),
            self.system.m,
            self.system.tau_c,
        )
        .map_err(|e| CliError::from_library("system parameters", e))
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        match &self.initial {
            Some(init) => {
                let [x, y, z] = init.bloch;
                DensityMatrix::from_bloch(x, y, z)
                    .map_err(|e| CliError::from_library("initial state", e))
            }
            None => frqme_core::pseudopure_state(self.system.m)
                .map_err(|e| CliError::from_library("initial state", e)),
        }
    }
}

impl GateSection {
    pub fn to_gate_spec(&self) -> Result<GateSpec> {
        let (kind, omega1) = match self {
            GateSection::Hadamard { omega1 } => (GateKind::Hadamard, *omega1),
            GateSection::RotationX { omega1, angle } => (GateKind::RotationX(*angle), *omega1),
            GateSection::RotationY { omega1, angle } => (GateKind::RotationY(*angle), *omega1),
            GateSection::Custom { omega1, rotations } => {
                (GateKind::Custom(rotations.clone()), *omega1)
            }
        };
        GateSpec::new(kind, omega1).map_err(|e| CliError::from_library("gate definition", e))
    }
}

/// Parses a two-column sampled file.
fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read {}: {e}", path.display()))
    })?;
    let mut samples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split_whitespace();
        let parse = |field: Option<&str>, what: &str| -> Result<f64> {
            field
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "{}:{}: missing {what} column",
                        path.display(),
                        lineno + 1
                    ))
                })?
                .parse::<f64>()
                .map_err(|e| {
                    CliError::Config(format!(
                        "{}:{}: bad {what}: {e}",
                        path.display(),
                        lineno + 1
                    ))
                })
        };
        let t = parse(cols.next(), "time")?;
        let v = parse(cols.next(), "value")?;
        if cols.next().is_some() {
            return Err(CliError::Config(format!(
                "{}:{}: expected exactly two columns",
                path.display(),
                lineno + 1
            )));
        }
        samples.push((t, v));
    }
    Ok(samples)
}

fn read_envelope(path: &Path) -> Result<SampledEnvelope> {
    SampledEnvelope::new(&read_samples(path)?)
        .map_err(|e| CliError::from_library(&format!("envelope {}", path.display()), e))
}

impl PulseSection {
    /// Builds the shaped pulse and reports the largest sampled
    /// amplitude (for the validity-regime warning); with linear
    /// interpolation the extreme values sit at sample points.
    pub fn to_pulse(&self) -> Result<(ShapedPulse, f64)> {
        let samples = read_samples(&self.amplitude_file)?;
        let max_amplitude = samples.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
        let amplitude = SampledEnvelope::new(&samples).map_err(|e| {
            CliError::from_library(&format!("envelope {}", self.amplitude_file.display()), e)
        })?;
        let pulse = match (&self.phase, &self.phase_file) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "pulse: give either a constant phase or a phase_file, not both".into(),
                ));
            }
            (Some(phi), None) => ShapedPulse::from_envelope(amplitude, *phi),
            (None, Some(file)) => {
                let phase = read_envelope(file)?;
                ShapedPulse::from_envelopes(amplitude, phase)
            }
            (None, None) => {
                return Err(CliError::Config(
                    "pulse: a constant phase or a phase_file is required".into(),
                ));
            }
        }
        .map_err(|e| CliError::from_library("pulse definition", e))?;
        Ok((pulse, max_amplitude))
    }
}
