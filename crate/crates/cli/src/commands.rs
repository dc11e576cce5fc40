//! One function per subcommand, each returning the rendered output
//! document. Regime warnings go to stderr so they never contaminate
//! machine-readable stdout/file output.

use crate::config::{FileConfig, MethodName};
use crate::emit::{grid_csv, JsonObject};
use crate::error::{CliError, Result};
use frqme_core::{
    compile_gate, contour_grid, devectorize, multiqubit_feasibility,
    optimize_drive, propagate_sequence_vector, propagate_shaped_vector, pseudopure_state,
    r3_block_decay, vectorize, DidModel, LiouvilleVector, OptimizeMethod, StepControl,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// The fluctuation-regulated model assumes the drive is slow compared
/// to the fluctuation rate; past this product the results chart the
/// model outside its validity band.
const REGIME_CEILING: f64 = 0.1;

fn warn_if_fast_drive(omega1: f64, tau_c: f64) {
    let product = omega1 * tau_c;
    if product > REGIME_CEILING {
        eprintln!(
            "warning: omega1 * tau_c = {product:.3e} exceeds {REGIME_CEILING}; \
             the model assumes the drive is slow compared to the fluctuation rate"
        );
    }
}

fn state_report(v: &LiouvilleVector, extra: Option<f64>) -> Result<String> {
    let rho = devectorize(v).map_err(|e| CliError::from_library("final state extraction", e))?;
    let m = rho.matrix();
    let [bx, by, bz] = rho.bloch();
    let mut doc = JsonObject::new()
        .object(
            "rho",
            JsonObject::new()
                .complex("rho11", m[(0, 0)].re, m[(0, 0)].im)
                .complex("rho12", m[(0, 1)].re, m[(0, 1)].im)
                .complex("rho21", m[(1, 0)].re, m[(1, 0)].im)
                .complex("rho22", m[(1, 1)].re, m[(1, 1)].im),
        )
        .numbers("bloch", &[bx, by, bz])
        .object(
            "diagnostics",
            JsonObject::new()
                .number("trace_deviation", v.trace_deviation())
                .number("hermiticity_drift", v.hermiticity_drift()),
        );
    if let Some(delta) = extra {
        doc = doc.number("richardson_delta", delta);
    }
    Ok(doc.render())
}

/// Propagates the configured initial state through a gate or a shaped
/// pulse and reports the final state with conservation diagnostics.
pub fn simulate(config: &FileConfig) -> Result<String> {
    let sys = config.system_params()?;
    let initial = config.initial_state()?;
    let v0 = vectorize(&initial);

    match (&config.gate, &config.pulse) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "simulate: give either a gate or a pulse, not both".into(),
        )),
        (None, None) => Err(CliError::Config(
            "simulate: a gate or a pulse section is required".into(),
        )),
        (Some(gate), None) => {
            let spec = gate.to_gate_spec()?;
            warn_if_fast_drive(spec.omega1(), sys.tau_c());
            let sequence =
                compile_gate(&spec).map_err(|e| CliError::from_library("gate compilation", e))?;
            let v = propagate_sequence_vector(&v0, &sequence, &sys, &DidModel::FrQme)
                .map_err(|e| CliError::from_library("gate propagation", e))?;
            state_report(&v, None)
        }
        (None, Some(pulse)) => {
            let (shaped, max_amplitude) = pulse.to_pulse()?;
            warn_if_fast_drive(max_amplitude, sys.tau_c());
            let control = StepControl::new(pulse.dt, pulse.richardson_check)
                .map_err(|e| CliError::from_library("step control", e))?;
            let (v, delta) =
                propagate_shaped_vector(&v0, &shaped, &sys, &DidModel::FrQme, &control)
                    .map_err(|e| CliError::from_library("shaped-pulse propagation", e))?;
            state_report(&v, delta)
        }
    }
}

fn axis(section: Option<&crate::config::AxisSection>, default: (f64, f64, usize, bool)) -> Result<Vec<f64>> {
    let (start, stop, points, log) = match section {
        Some(s) => (s.start, s.stop, s.points, s.log),
        None => default,
    };
    if points < 2 {
        return Err(CliError::Config(format!(
            "grid axis needs at least 2 points, got {points}"
        )));
    }
    if !start.is_finite() || !stop.is_finite() {
        return Err(CliError::Config("grid axis bounds must be finite".into()));
    }
    if log && (start <= 0.0 || stop <= 0.0) {
        return Err(CliError::Config(
            "log-spaced grid axis needs positive bounds".into(),
        ));
    }
    let n = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let s = i as f64 / n;
            if log {
                start * (stop / start).powf(s)
            } else {
                start + (stop - start) * s
            }
        })
        .collect())
}

/// Charts the closed-form fidelity landscape over (beta, x).
pub fn fidelity_scan(config: &FileConfig, format: OutputFormat) -> Result<String> {
    let grid_section = config.grid.as_ref();
    let m = grid_section.and_then(|g| g.m).unwrap_or(0.1);
    let beta_axis = axis(grid_section.and_then(|g| g.beta.as_ref()), (0.0, 1.0, 101, false))?;
    let x_axis = axis(grid_section.and_then(|g| g.x.as_ref()), (1e-2, 1e2, 201, true))?;

    let grid = contour_grid(&beta_axis, &x_axis, m)
        .map_err(|e| CliError::from_library("fidelity landscape", e))?;

    Ok(match format {
        OutputFormat::Csv => grid_csv(&grid.beta_axis, &grid.x_axis, &grid.f_values),
        OutputFormat::Json => JsonObject::new()
            .number("m", grid.m)
            .numbers("beta_axis", &grid.beta_axis)
            .numbers("x_axis", &grid.x_axis)
            .number_rows("f_values", &grid.f_values)
            .render(),
    })
}

/// Finds the fidelity-maximizing drive amplitude.
pub fn optimize(config: &FileConfig) -> Result<String> {
    let sys = config.system_params()?;
    let section = config
        .optimize
        .as_ref()
        .ok_or_else(|| CliError::Config("optimize: an optimize section is required".into()))?;
    let (method, method_name) = match section.method {
        MethodName::ClosedForm => (OptimizeMethod::ClosedForm, "closed-form"),
        MethodName::FullSimulation => (OptimizeMethod::FullSimulation, "full-simulation"),
    };
    let result = optimize_drive(&sys, section.m, method)
        .map_err(|e| CliError::from_library("drive optimization", e))?;
    warn_if_fast_drive(result.omega1_opt_numeric, sys.tau_c());
    Ok(JsonObject::new()
        .string("method", method_name)
        .number("omega1_opt_analytic", result.omega1_opt_analytic)
        .number("omega1_opt_numeric", result.omega1_opt_numeric)
        .number("f_max", result.f_max)
        .number("beta", result.beta)
        .render())
}

/// Runs the zero-net-rotation flip block and compares the surviving
/// z-polarization with its closed-form decay.
pub fn r3_verify(config: &FileConfig) -> Result<String> {
    let sys = config.system_params()?;
    let section = config
        .r3
        .as_ref()
        .ok_or_else(|| CliError::Config("r3-verify: an r3 section is required".into()))?;
    let initial_m = section.initial_m.unwrap_or(config.system.m);
    let initial = pseudopure_state(initial_m)
        .map_err(|e| CliError::from_library("initial state", e))?;
    warn_if_fast_drive(section.omega1, sys.tau_c());
    let (mz_ratio, closed_form) = r3_block_decay(section.omega1, &sys, &initial)
        .map_err(|e| CliError::from_library("rotary-block propagation", e))?;
    Ok(JsonObject::new()
        .number("mz_ratio", mz_ratio)
        .number("closed_form", closed_form)
        .number("relative_error", (mz_ratio - closed_form).abs() / closed_form)
        .render())
}

/// Checks whether the optimal drive fits under a coupling ceiling.
pub fn feasibility(config: &FileConfig) -> Result<String> {
    let sys = config.system_params()?;
    let section = config.feasibility.as_ref().ok_or_else(|| {
        CliError::Config("feasibility: a feasibility section is required".into())
    })?;
    let verdict = multiqubit_feasibility(&sys, section.j)
        .map_err(|e| CliError::from_library("feasibility check", e))?;
    warn_if_fast_drive(verdict.omega1_opt, sys.tau_c());
    Ok(JsonObject::new()
        .boolean("feasible", verdict.feasible)
        .number("omega1_opt", verdict.omega1_opt)
        .number("coupling", verdict.coupling)
        .render())
}
