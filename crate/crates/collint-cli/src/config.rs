// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration files.
//!
//! A config is a JSON object:
//!
//! ```json
//! {
//!   "scenario": "scalar_toy",
//!   "parameters": { "a": 10, "b": 1 },
//!   "dt_grid": [0.02, 0.1, 0.15],
//!   "orders": [0, 1, 2, 3],
//!   "initial_state": [[1, 0]],
//!   "outputs": ["trajectory", "generator"],
//!   "steps": 10,
//!   "samples_per_step": 8
//! }
//! ```
//!
//! Complex matrices are nested arrays whose entries are `[re, im]` pairs
//! (a bare number is read as a real entry). Real matrices and vectors used
//! by the Gaussian scenario are plain nested arrays of numbers.

use std::path::Path;

use collint::gaussian::{GaussianBombardment, GaussianState};
use collint::numkit::{c, CMatrix, CVector, RMatrix, RVector};
use collint::scenarios::{BombardmentSpec, DysonConvention, EnsembleSpec};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// Names accepted in the `scenario` field.
pub const SCENARIOS: [(&str, &str); 8] = [
    ("scalar_toy", "scalar map 1 - b·dt - a·dt² (parameters: a, b)"),
    ("unitary", "exp(-iH dt) on state vectors (parameters: h)"),
    (
        "dyson",
        "time-dependent H0 + H1 s + H2 s² (parameters: h0, h1, h2, convention)",
    ),
    (
        "mixed_unitary",
        "random-unitary ensemble on density matrices (parameters: probabilities, hamiltonians)",
    ),
    (
        "partial_swap",
        "qubit partial swap on the augmented Bloch vector (parameters: omega, r)",
    ),
    (
        "zeno",
        "measured unitary on probability vectors (parameters: h, optional projectors)",
    ),
    (
        "bombardment",
        "ancillary bombardment on density matrices (parameters: h_s, h_a, terms, rho_a)",
    ),
    (
        "gaussian_bombardment",
        "Gaussian system coupled to Gaussian ancillas (parameters: f_s, f_a, g, alpha_s, alpha_a, ancilla)",
    ),
];

/// Requested output kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Trajectory,
    Generator,
    Series,
    Lindblad,
    Diagnostics,
    Classification,
}

impl Output {
    pub fn name(self) -> &'static str {
        match self {
            Output::Trajectory => "trajectory",
            Output::Generator => "generator",
            Output::Series => "series",
            Output::Lindblad => "lindblad",
            Output::Diagnostics => "diagnostics",
            Output::Classification => "classification",
        }
    }
}

fn default_orders() -> Vec<usize> {
    vec![0, 1, 2, 3]
}

fn default_outputs() -> Vec<Output> {
    vec![Output::Generator, Output::Series, Output::Diagnostics]
}

fn default_steps() -> usize {
    10
}

fn default_samples() -> usize {
    8
}

/// The file format as written on disk, with defaults filled in on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    #[serde(default)]
    pub parameters: serde_json::Map<String, Value>,
    pub dt_grid: Vec<f64>,
    #[serde(default = "default_orders")]
    pub orders: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Value>,
    #[serde(default = "default_outputs")]
    pub outputs: Vec<Output>,
    /// Number of collisions in trajectory output.
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// Interpolated samples per collision in trajectory output.
    #[serde(default = "default_samples")]
    pub samples_per_step: usize,
}

/// Fully typed scenario.
#[derive(Debug, Clone)]
pub enum Scenario {
    ScalarToy {
        a: f64,
        b: f64,
    },
    Unitary {
        h: CMatrix,
    },
    Dyson {
        h: [CMatrix; 3],
        convention: DysonConvention,
    },
    MixedUnitary(EnsembleSpec),
    PartialSwap {
        omega: f64,
        r: f64,
    },
    Zeno {
        h: CMatrix,
        projectors: Vec<CMatrix>,
    },
    Bombardment(BombardmentSpec),
    Gaussian(GaussianBombardment),
}

/// Initial state in the encoding the scenario propagates.
#[derive(Debug, Clone)]
pub enum InitialState {
    Vector(CVector),
    Gaussian(GaussianState),
}

/// A validated config ready to run.
#[derive(Debug, Clone)]
pub struct Validated {
    pub config: ScenarioConfig,
    pub scenario: Scenario,
    pub initial: InitialState,
}

/// Read, parse and validate a config file.
pub fn parse_config(path: &Path) -> Result<Validated, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_config_str(&text)
}

/// Parse and validate config text.
pub fn parse_config_str(text: &str) -> Result<Validated, CliError> {
    let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(config)
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// Check the config's invariants and build the typed scenario.
pub fn validate(config: ScenarioConfig) -> Result<Validated, CliError> {
    if config.dt_grid.is_empty() {
        return Err(invalid("dt_grid must not be empty"));
    }
    for (k, &dt) in config.dt_grid.iter().enumerate() {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(invalid(format!("dt_grid[{k}] = {dt} is not strictly positive")));
        }
        if k > 0 && dt <= config.dt_grid[k - 1] {
            return Err(invalid(format!("dt_grid is not strictly ascending at index {k}")));
        }
    }
    if config.orders.is_empty() {
        return Err(invalid("orders must not be empty"));
    }
    if config.samples_per_step == 0 {
        return Err(invalid("samples_per_step must be positive"));
    }
    let p = Params {
        map: &config.parameters,
    };
    let scenario = match config.scenario.as_str() {
        "scalar_toy" => Scenario::ScalarToy {
            a: p.real("a")?,
            b: p.real("b")?,
        },
        "unitary" => Scenario::Unitary { h: p.hermitian("h")? },
        "dyson" => {
            let convention = match p.optional_str("convention")?.unwrap_or("clock_reset") {
                "clock_reset" => DysonConvention::ClockReset,
                "duration_scaled" => DysonConvention::DurationScaled,
                other => {
                    return Err(invalid(format!(
                        "parameters.convention: unknown value {other:?} (expected clock_reset or duration_scaled)"
                    )))
                }
            };
            Scenario::Dyson {
                h: [p.hermitian("h0")?, p.hermitian("h1")?, p.hermitian("h2")?],
                convention,
            }
        }
        "mixed_unitary" => {
            let probabilities = p.real_list("probabilities")?;
            let hamiltonians = p.hermitian_list("hamiltonians")?;
            let spec = EnsembleSpec {
                probabilities,
                hamiltonians,
            };
            spec.validate().map_err(|e| invalid(format!("parameters: {e}")))?;
            Scenario::MixedUnitary(spec)
        }
        "partial_swap" => Scenario::PartialSwap {
            omega: p.real("omega")?,
            r: p.real("r")?,
        },
        "zeno" => {
            let h = p.hermitian("h")?;
            let projectors = if p.map.contains_key("projectors") {
                p.hermitian_list("projectors")?
            } else {
                (0..h.nrows())
                    .map(|k| {
                        CMatrix::from_fn(h.nrows(), h.nrows(), |i, j| {
                            c(f64::from(u8::from(i == k && j == k)), 0.0)
                        })
                    })
                    .collect()
            };
            Scenario::Zeno { h, projectors }
        }
        "bombardment" => {
            let terms_v = p.get("terms")?;
            let arr = terms_v
                .as_array()
                .ok_or_else(|| invalid("parameters.terms: expected an array of {q, r} objects"))?;
            let mut terms = Vec::with_capacity(arr.len());
            for (k, t) in arr.iter().enumerate() {
                let q = t
                    .get("q")
                    .ok_or_else(|| invalid(format!("parameters.terms[{k}].q: missing")))?;
                let r = t
                    .get("r")
                    .ok_or_else(|| invalid(format!("parameters.terms[{k}].r: missing")))?;
                terms.push((
                    hermitian_value(q, &format!("parameters.terms[{k}].q"))?,
                    hermitian_value(r, &format!("parameters.terms[{k}].r"))?,
                ));
            }
            let spec = BombardmentSpec {
                h_s: p.hermitian("h_s")?,
                h_a: p.hermitian("h_a")?,
                terms,
                rho_a: p.hermitian("rho_a")?,
            };
            spec.validate().map_err(|e| invalid(format!("parameters: {e}")))?;
            Scenario::Bombardment(spec)
        }
        "gaussian_bombardment" => {
            let ancilla = match p.map.get("ancilla") {
                Some(v) => gaussian_state_value(v, "parameters.ancilla")?,
                None => {
                    let f_a = p.real_matrix("f_a")?;
                    GaussianState::vacuum(f_a.nrows() / 2)
                }
            };
            let spec = GaussianBombardment::new(
                p.real_matrix("f_s")?,
                p.real_matrix("f_a")?,
                p.real_matrix("g")?,
                p.real_vector("alpha_s")?,
                p.real_vector("alpha_a")?,
                ancilla,
            )
            .map_err(|e| invalid(format!("parameters: {e}")))?;
            Scenario::Gaussian(spec)
        }
        other => {
            return Err(invalid(format!(
                "scenario: unknown value {other:?}; run `collint list-scenarios`"
            )))
        }
    };
    let initial = initial_state(&scenario, config.initial_state.as_ref())?;
    let density_only = matches!(scenario, Scenario::MixedUnitary(_) | Scenario::Bombardment(_));
    if config.outputs.contains(&Output::Lindblad) && !density_only {
        return Err(invalid(
            "outputs: lindblad needs a density-matrix scenario (mixed_unitary or bombardment)",
        ));
    }
    if config.outputs.contains(&Output::Classification) && !matches!(scenario, Scenario::Gaussian(_)) {
        return Err(invalid(
            "outputs: classification needs the gaussian_bombardment scenario",
        ));
    }
    Ok(Validated {
        config,
        scenario,
        initial,
    })
}

/// Linear dimension and encoding of the propagated vector.
fn state_dim(s: &Scenario) -> usize {
    match s {
        Scenario::ScalarToy { .. } => 1,
        Scenario::Unitary { h } | Scenario::Zeno { h, .. } => h.nrows(),
        Scenario::Dyson { h, .. } => h[0].nrows(),
        Scenario::MixedUnitary(e) => e.hamiltonians[0].nrows().pow(2),
        Scenario::PartialSwap { .. } => 4,
        Scenario::Bombardment(b) => b.h_s.nrows().pow(2),
        Scenario::Gaussian(g) => g.f_s.nrows(),
    }
}

fn initial_state(s: &Scenario, v: Option<&Value>) -> Result<InitialState, CliError> {
    let what = "initial_state";
    let n = state_dim(s);
    let basis0 = |n: usize| CVector::from_fn(n, |i, _| c(f64::from(u8::from(i == 0)), 0.0));
    let state = match s {
        Scenario::Gaussian(g) => InitialState::Gaussian(match v {
            Some(v) => {
                let st = gaussian_state_value(v, what)?;
                if st.mean.len() != n {
                    return Err(invalid(format!(
                        "{what}: mean has length {}, expected {n}",
                        st.mean.len()
                    )));
                }
                st
            }
            None => GaussianState::vacuum(g.f_s.nrows() / 2),
        }),
        Scenario::MixedUnitary(_) | Scenario::Bombardment(_) => {
            let d = (n as f64).sqrt().round() as usize;
            let rho = match v {
                Some(v) => {
                    let rho = hermitian_value(v, what)?;
                    if rho.nrows() != d {
                        return Err(invalid(format!("{what}: expected a {d}x{d} density matrix")));
                    }
                    rho
                }
                None => CMatrix::from_fn(d, d, |i, j| c(f64::from(u8::from(i == 0 && j == 0)), 0.0)),
            };
            InitialState::Vector(collint::numkit::vec(&rho))
        }
        Scenario::PartialSwap { .. } => {
            let bloch = match v {
                Some(v) => real_vector_value(v, what)?,
                None => RVector::from_vec(vec![0.0, 0.0, 1.0]),
            };
            if bloch.len() != 3 || bloch.norm() > 1.0 + 1e-12 {
                return Err(invalid(format!(
                    "{what}: expected a Bloch vector of length 3 inside the unit ball"
                )));
            }
            InitialState::Vector(CVector::from_fn(4, |i, _| {
                c(if i == 0 { 1.0 } else { bloch[i - 1] }, 0.0)
            }))
        }
        Scenario::Zeno { .. } => {
            let p = match v {
                Some(v) => real_vector_value(v, what)?,
                None => basis0(n).map(|z| z.re),
            };
            if p.len() != n || p.iter().any(|&x| x < 0.0) || (p.sum() - 1.0).abs() > 1e-12 {
                return Err(invalid(format!("{what}: expected a probability vector of length {n}")));
            }
            InitialState::Vector(p.map(|x| c(x, 0.0)))
        }
        _ => InitialState::Vector(match v {
            Some(v) => {
                let x = complex_vector_value(v, what)?;
                if x.len() != n {
                    return Err(invalid(format!("{what}: expected length {n}, got {}", x.len())));
                }
                x
            }
            None => basis0(n),
        }),
    };
    Ok(state)
}

struct Params<'a> {
    map: &'a serde_json::Map<String, Value>,
}

impl Params<'_> {
    fn get(&self, key: &str) -> Result<&Value, CliError> {
        self.map
            .get(key)
            .ok_or_else(|| invalid(format!("parameters.{key}: missing")))
    }

    fn real(&self, key: &str) -> Result<f64, CliError> {
        self.get(key)?
            .as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| invalid(format!("parameters.{key}: expected a finite number")))
    }

    fn optional_str(&self, key: &str) -> Result<Option<&str>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(Some)
                .ok_or_else(|| invalid(format!("parameters.{key}: expected a string"))),
        }
    }

    fn real_list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        Ok(real_vector_value(self.get(key)?, &format!("parameters.{key}"))?
            .iter()
            .copied()
            .collect())
    }

    fn hermitian(&self, key: &str) -> Result<CMatrix, CliError> {
        hermitian_value(self.get(key)?, &format!("parameters.{key}"))
    }

    fn hermitian_list(&self, key: &str) -> Result<Vec<CMatrix>, CliError> {
        let arr = self
            .get(key)?
            .as_array()
            .ok_or_else(|| invalid(format!("parameters.{key}: expected an array of matrices")))?;
        arr.iter()
            .enumerate()
            .map(|(k, v)| hermitian_value(v, &format!("parameters.{key}[{k}]")))
            .collect()
    }

    fn real_matrix(&self, key: &str) -> Result<RMatrix, CliError> {
        real_matrix_value(self.get(key)?, &format!("parameters.{key}"))
    }

    fn real_vector(&self, key: &str) -> Result<RVector, CliError> {
        real_vector_value(self.get(key)?, &format!("parameters.{key}"))
    }
}

fn complex_entry(v: &Value, what: &str) -> Result<(f64, f64), CliError> {
    if let Some(x) = v.as_f64() {
        return Ok((x, 0.0));
    }
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) if re.is_finite() && im.is_finite() => Ok((re, im)),
            _ => Err(invalid(format!("{what}: entries must be finite [re, im] pairs"))),
        },
        _ => Err(invalid(format!("{what}: entries must be [re, im] pairs"))),
    }
}

fn rows_of<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| invalid(format!("{what}: expected a matrix (array of rows)")))?;
    if rows.is_empty() {
        return Err(invalid(format!("{what}: matrix is empty")));
    }
    Ok(rows)
}

/// Parse a square complex matrix from nested `[re, im]` arrays.
pub fn complex_matrix_value(v: &Value, what: &str) -> Result<CMatrix, CliError> {
    let rows = rows_of(v, what)?;
    let n = rows.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| invalid(format!("{what}: row {i} must have {n} entries (square matrix)")))?;
        for (j, e) in row.iter().enumerate() {
            let (re, im) = complex_entry(e, what)?;
            m[(i, j)] = c(re, im);
        }
    }
    Ok(m)
}

fn hermitian_value(v: &Value, what: &str) -> Result<CMatrix, CliError> {
    let m = complex_matrix_value(v, what)?;
    let scale = 1.0 + m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let defect = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if defect > 1e-10 * scale {
        return Err(invalid(format!("{what}: matrix is not Hermitian (defect {defect:e})")));
    }
    Ok(m)
}

fn complex_vector_value(v: &Value, what: &str) -> Result<CVector, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| invalid(format!("{what}: expected an array of [re, im] pairs")))?;
    let entries = arr
        .iter()
        .map(|e| complex_entry(e, what).map(|(re, im)| c(re, im)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CVector::from_vec(entries))
}

fn real_vector_value(v: &Value, what: &str) -> Result<RVector, CliError> {
    let arr = v
        .as_array()
        .ok_or_else(|| invalid(format!("{what}: expected an array of numbers")))?;
    let xs = arr
        .iter()
        .map(|e| {
            e.as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| invalid(format!("{what}: entries must be finite numbers")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RVector::from_vec(xs))
}

fn real_matrix_value(v: &Value, what: &str) -> Result<RMatrix, CliError> {
    let rows = rows_of(v, what)?;
    let parsed = rows
        .iter()
        .map(|r| real_vector_value(r, what))
        .collect::<Result<Vec<_>, _>>()?;
    let cols = parsed[0].len();
    if parsed.iter().any(|r| r.len() != cols) {
        return Err(invalid(format!("{what}: rows have different lengths")));
    }
    Ok(RMatrix::from_fn(parsed.len(), cols, |i, j| parsed[i][j]))
}

fn gaussian_state_value(v: &Value, what: &str) -> Result<GaussianState, CliError> {
    let mean = v.get("mean").ok_or_else(|| invalid(format!("{what}.mean: missing")))?;
    let cov = v.get("cov").ok_or_else(|| invalid(format!("{what}.cov: missing")))?;
    GaussianState::new(
        real_vector_value(mean, &format!("{what}.mean"))?,
        real_matrix_value(cov, &format!("{what}.cov"))?,
    )
    .map_err(|e| invalid(format!("{what}: {e}")))
}
