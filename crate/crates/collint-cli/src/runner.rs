// Copyright 2026 Collint Contributors
// SPDX-License-Identifier: Apache-2.0

//! Execution of a validated scenario config.

use collint::diagnostics::{purification_first_order, unitality_defect};
use collint::gaussian::{
    self, classify_dynamics, excitation_rate, gaussian_cp_check, generator_cp_check, purification_possible,
    purity_rate, GaussianBombardment, GaussianChannel, GaussianGenerator, GaussianSeries, GaussianState,
};
use collint::interp::{self, generator_exact, locate_branch_failure, loglog_slope, UpdateMapSeries};
use collint::numkit::{CMatrix, CVector};
use collint::scenarios::{
    ancillary_bombardment, dyson_family, mixed_unitary, scalar_toy, toy_divergence_point, unitary_map,
    within_small_time_regime, zeno_transfer, PartialSwap,
};
use collint::superop::lindblad_decompose;
use collint::CollintError;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::config::{InitialState, Output, Scenario, Validated};
use crate::error::CliError;
use crate::output::{self, complex_matrix, number, real_matrix, real_vector, Table};

/// Collisions compared in the stroboscopic check.
pub const STROBOSCOPIC_STEPS: usize = 50;
/// Samples of the scan that brackets a branch failure.
pub const BRANCH_SCAN_SAMPLES: usize = 256;
/// Relative accuracy of the bisection onto a branch failure.
pub const BRANCH_REL_TOL: f64 = 1e-12;

/// Command-line overrides.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Tolerance for Lindblad and CP decisions.
    pub tol: f64,
    /// Replaces the config's `orders` when set.
    pub orders: Option<Vec<usize>>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            orders: None,
        }
    }
}

/// Everything a run produces, before it is written to disk.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Value,
    pub tables: Vec<(Output, Table)>,
    pub documents: Vec<(Output, Value)>,
    /// Located divergence of the principal logarithm, if the grid crossed one.
    pub divergence: Option<f64>,
}

fn is_branch_error(e: &CollintError) -> bool {
    matches!(e, CollintError::BranchFailure { .. } | CollintError::Singular { .. })
}

fn wants(v: &Validated, o: Output) -> bool {
    v.config.outputs.contains(&o)
}

/// Run a validated scenario.
pub fn run(v: &Validated, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let mut config = v.config.clone();
    if let Some(orders) = &opts.orders {
        config.orders = orders.clone();
    }
    let v = Validated {
        config,
        scenario: v.scenario.clone(),
        initial: v.initial.clone(),
    };
    let mut outcome = match (&v.scenario, &v.initial) {
        (Scenario::Gaussian(spec), InitialState::Gaussian(state)) => run_gaussian(&v, spec, state, opts)?,
        (_, InitialState::Vector(v0)) => run_linear(&v, v0, opts)?,
        _ => unreachable!("validation pairs Gaussian scenarios with Gaussian states"),
    };
    let status = if outcome.divergence.is_some() {
        "branch_failure"
    } else {
        "ok"
    };
    let files: Vec<Value> = outcome
        .tables
        .iter()
        .map(|(o, _)| json!(o.name()))
        .chain(outcome.documents.iter().map(|(o, _)| json!(o.name())))
        .collect();
    let mut report = Map::new();
    report.insert(
        "provenance".into(),
        json!({
            "config": serde_json::to_value(&v.config)?,
            "tolerances": {
                "tol": number(opts.tol),
                "stroboscopic_steps": STROBOSCOPIC_STEPS,
                "branch_scan_samples": BRANCH_SCAN_SAMPLES,
                "branch_rel_tol": number(BRANCH_REL_TOL),
            },
            "versions": {
                "collint": collint::VERSION,
                "collint-cli": env!("CARGO_PKG_VERSION"),
            },
        }),
    );
    report.insert("status".into(), json!(status));
    report.insert(
        "divergence".into(),
        outcome.divergence.map_or(Value::Null, |dt| json!({ "dt": number(dt) })),
    );
    report.insert("outputs".into(), Value::Array(files));
    let mut results = Map::new();
    for (o, doc) in &outcome.documents {
        results.insert(o.name().into(), doc.clone());
    }
    if let Value::Object(extra) = std::mem::take(&mut outcome.report) {
        for (k, val) in extra {
            results.insert(k, val);
        }
    }
    report.insert("results".into(), Value::Object(results));
    outcome.report = Value::Object(report);
    Ok(outcome)
}

// ---------------------------------------------------------------------------
// Linear families
// ---------------------------------------------------------------------------

struct Point {
    dt: f64,
    m: CMatrix,
    l: Option<CMatrix>,
    error: Option<String>,
}

fn build_linear(s: &Scenario) -> Result<(UpdateMapSeries, Value), CliError> {
    Ok(match s {
        Scenario::ScalarToy { a, b } => (
            scalar_toy(*a, *b)?,
            json!({ "closed_form_divergence": toy_divergence_point(*a, *b).map_or(Value::Null, number) }),
        ),
        Scenario::Unitary { h } => (unitary_map(h)?, Value::Null),
        Scenario::Dyson { h, convention } => (dyson_family(&h[0], &h[1], &h[2], *convention)?, Value::Null),
        Scenario::MixedUnitary(spec) => {
            let mu = mixed_unitary(spec)?;
            let modes: Vec<Value> = mu
                .modes
                .iter()
                .map(|m| json!({ "rate": number(m.rate), "operator": complex_matrix(&m.operator) }))
                .collect();
            let extra = json!({
                "mean_hamiltonian": complex_matrix(&mu.mean_hamiltonian),
                "q_matrix": real_matrix(&mu.q),
                "decoherence_modes": modes,
            });
            (mu.series, extra)
        }
        Scenario::PartialSwap { omega, r } => (PartialSwap::new(*omega, *r)?.series(), Value::Null),
        Scenario::Zeno { h, projectors } => (zeno_transfer(h, projectors)?.series, Value::Null),
        Scenario::Bombardment(spec) => {
            let b = ancillary_bombardment(spec)?;
            let extra = json!({
                "h0": complex_matrix(&b.h0),
                "h1": complex_matrix(&b.h1),
                "d": complex_matrix(&b.d),
                "first_order_purification": complex_matrix(&purification_first_order(spec)?),
            });
            (b.series, extra)
        }
        Scenario::Gaussian(_) => unreachable!("handled by run_gaussian"),
    })
}

fn is_density(s: &Scenario) -> bool {
    matches!(s, Scenario::MixedUnitary(_) | Scenario::Bombardment(_))
}

fn run_linear(v: &Validated, v0: &CVector, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let (series, extra) = build_linear(&v.scenario)?;
    let grid = &v.config.dt_grid;
    let points: Vec<Point> = grid
        .par_iter()
        .map(|&dt| {
            let m = series.evaluate(dt)?;
            match generator_exact(&m, dt) {
                Ok(l) => Ok(Point {
                    dt,
                    m,
                    l: Some(l),
                    error: None,
                }),
                Err(e) if is_branch_error(&e) => Ok(Point {
                    dt,
                    m,
                    l: None,
                    error: Some(e.to_string()),
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<collint::Result<Vec<_>>>()?;

    let dt_max = *grid.last().expect("validated non-empty");
    let scan = locate_branch_failure(&series, dt_max, BRANCH_SCAN_SAMPLES, BRANCH_REL_TOL)?;
    let grid_failed = points.iter().any(|p| p.l.is_none());
    let divergence = if grid_failed {
        Some(
            scan.as_ref()
                .map(|d| d.dt)
                .unwrap_or_else(|| points.iter().find(|p| p.l.is_none()).expect("a failure").dt),
        )
    } else {
        None
    };

    let kmax = *v.config.orders.iter().max().expect("validated non-empty");
    let gs = interp::generator_series(&series, kmax)?;
    let n = series.dim;

    let mut tables = Vec::new();
    let mut documents = Vec::new();

    if wants(v, Output::Generator) {
        let mut cols = vec!["dt".to_string()];
        cols.extend(output::complex_matrix_columns("L", n, n));
        let mut t = Table::new(cols);
        for p in &points {
            let mut row = vec![p.dt];
            match &p.l {
                Some(l) => row.extend(output::complex_matrix_cells(l)),
                None => row.extend(std::iter::repeat(f64::NAN).take(2 * n * n)),
            }
            t.push(row);
        }
        tables.push((Output::Generator, t));
    }

    if wants(v, Output::Series) {
        let mut cols = vec!["m".to_string()];
        cols.extend(output::complex_matrix_columns("L", n, n));
        let mut t = Table::new(cols);
        for (m, l) in gs.coefficients.iter().enumerate() {
            let mut row = vec![m as f64];
            row.extend(output::complex_matrix_cells(l));
            t.push(row);
        }
        tables.push((Output::Series, t));
    }

    if wants(v, Output::Trajectory) {
        tables.push((Output::Trajectory, linear_trajectory(v, &points, &gs, v0)?));
    }

    if wants(v, Output::Lindblad) {
        let mut per_dt = Vec::new();
        for p in points.iter().filter(|p| p.l.is_some()) {
            let form = lindblad_decompose(p.l.as_ref().expect("filtered"), opts.tol)?;
            per_dt.push(lindblad_json(p.dt, &form));
        }
        let continuum = lindblad_json(0.0, &lindblad_decompose(&gs.coefficients[0], opts.tol)?);
        documents.push((Output::Lindblad, json!({ "exact": per_dt, "continuum": continuum })));
    }

    if wants(v, Output::Diagnostics) {
        let mut per_dt = Vec::new();
        for p in &points {
            let mut entry = Map::new();
            entry.insert("dt".into(), number(p.dt));
            match &p.l {
                Some(l) => {
                    let res = interp::stroboscopic_residual_with(l, &p.m, p.dt, STROBOSCOPIC_STEPS, v0)?;
                    entry.insert("stroboscopic_residual".into(), number(res));
                    if is_density(&v.scenario) {
                        entry.insert("unitality_defect".into(), number(unitality_defect(l)?));
                    }
                    if let Scenario::Unitary { h } = &v.scenario {
                        entry.insert("small_time_regime".into(), json!(within_small_time_regime(h, p.dt)?));
                    }
                }
                None => {
                    entry.insert("error".into(), json!(p.error.clone().unwrap_or_default()));
                }
            }
            per_dt.push(Value::Object(entry));
        }
        let fits: Vec<Value> = v
            .config
            .orders
            .iter()
            .map(|&k| {
                let (xs, ys): (Vec<f64>, Vec<f64>) = points
                    .iter()
                    .filter_map(|p| p.l.as_ref().map(|l| (p.dt, (l - gs.truncated(p.dt, k)).norm())))
                    .unzip();
                let floor = 1e-12 * gs.coefficients[0].norm().max(1.0);
                let slope = if xs.len() >= 2 && ys.iter().all(|&r| r > floor) {
                    number(loglog_slope(&xs, &ys))
                } else {
                    Value::Null
                };
                json!({
                    "order": k,
                    "dt": xs.iter().map(|&x| number(x)).collect::<Vec<_>>(),
                    "residual": ys.iter().map(|&y| number(y)).collect::<Vec<_>>(),
                    "slope": slope,
                })
            })
            .collect();
        let scan_json = scan.as_ref().map_or(
            Value::Null,
            |d| json!({ "dt": number(d.dt), "error": d.error.to_string() }),
        );
        let mut doc = Map::new();
        doc.insert("per_dt".into(), Value::Array(per_dt));
        doc.insert("truncation_fits".into(), Value::Array(fits));
        doc.insert("branch_scan".into(), scan_json);
        if !extra.is_null() {
            doc.insert("scenario".into(), extra);
        }
        documents.push((Output::Diagnostics, Value::Object(doc)));
    }

    Ok(RunOutcome {
        report: Value::Object(Map::new()),
        tables,
        documents,
        divergence,
    })
}

fn lindblad_json(dt: f64, f: &collint::superop::LindbladForm) -> Value {
    json!({
        "dt": number(dt),
        "hamiltonian": complex_matrix(&f.hamiltonian),
        "rates": f.rates.iter().map(|&r| number(r)).collect::<Vec<_>>(),
        "modes": f.modes.iter().map(complex_matrix).collect::<Vec<_>>(),
        "completely_positive": f.completely_positive,
    })
}

/// Source column values in trajectory tables.
const SOURCE_INTERPOLATED: f64 = 0.0;
const SOURCE_DISCRETE: f64 = 1.0;
const SOURCE_SERIES: f64 = 2.0;

fn time_grid(v: &Validated, dt: f64) -> Vec<f64> {
    let total = v.config.steps * v.config.samples_per_step;
    (0..=total)
        .map(|k| dt * k as f64 / v.config.samples_per_step as f64)
        .collect()
}

fn linear_trajectory(
    v: &Validated,
    points: &[Point],
    gs: &interp::GeneratorSeries,
    v0: &CVector,
) -> Result<Table, CliError> {
    let n = v0.len();
    let mut cols: Vec<String> = ["dt", "t", "source", "order"].iter().map(|s| s.to_string()).collect();
    for k in 0..n {
        cols.push(format!("v[{k}].re"));
        cols.push(format!("v[{k}].im"));
    }
    let mut table = Table::new(cols);
    let push = |table: &mut Table, dt: f64, t: f64, src: f64, order: f64, x: &CVector| {
        let mut row = vec![dt, t, src, order];
        row.extend(x.iter().flat_map(|z| [z.re, z.im]));
        table.push(row);
    };
    for p in points {
        let mut x = v0.clone();
        for step in 0..=v.config.steps {
            if step > 0 {
                x = &p.m * x;
            }
            push(&mut table, p.dt, step as f64 * p.dt, SOURCE_DISCRETE, -1.0, &x);
        }
        let times = time_grid(v, p.dt);
        if let Some(l) = &p.l {
            for (t, x) in times.iter().zip(interp::propagate(l, v0, &times)?) {
                push(&mut table, p.dt, *t, SOURCE_INTERPOLATED, -1.0, &x);
            }
        }
        for &k in &v.config.orders {
            let lk = gs.truncated(p.dt, k);
            for (t, x) in times.iter().zip(interp::propagate(&lk, v0, &times)?) {
                push(&mut table, p.dt, *t, SOURCE_SERIES, k as f64, &x);
            }
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Gaussian bombardment
// ---------------------------------------------------------------------------

struct GaussianPoint {
    dt: f64,
    channel: GaussianChannel,
    generator: Option<GaussianGenerator>,
    error: Option<String>,
}

fn generator_cells(g: &GaussianGenerator) -> Vec<f64> {
    let mut row = output::real_matrix_cells(&g.a);
    row.extend(g.b.iter().copied());
    row.extend(output::real_matrix_cells(&g.c));
    row
}

fn generator_columns(n: usize) -> Vec<String> {
    let mut cols = output::real_matrix_columns("A", n, n);
    cols.extend((0..n).map(|k| format!("b[{k}]")));
    cols.extend(output::real_matrix_columns("C", n, n));
    cols
}

fn state_cells(s: &GaussianState) -> Vec<f64> {
    let mut row: Vec<f64> = s.mean.iter().copied().collect();
    row.extend(output::real_matrix_cells(&s.cov));
    row
}

fn generator_json(g: &GaussianGenerator) -> Value {
    json!({ "a": real_matrix(&g.a), "b": real_vector(&g.b), "c": real_matrix(&g.c) })
}

fn classification_json(g: &GaussianGenerator, tol: f64) -> Result<Value, CliError> {
    let cls = classify_dynamics(g)?;
    let kinds: Vec<Value> = cls
        .components
        .iter()
        .filter(|comp| comp.magnitude() > tol)
        .map(|comp| {
            let l = comp.kind.labels();
            json!({
                "name": comp.kind.name(),
                "single_mode": l.single_mode,
                "symplectic": l.symplectic,
                "passive": l.passive,
                "state_dependent": l.state_dependent,
                "magnitude": number(comp.magnitude()),
            })
        })
        .collect();
    Ok(json!({
        "dynamics": kinds,
        "a_passive": real_matrix(&cls.a_passive),
        "a_active": real_matrix(&cls.a_active),
    }))
}

fn gaussian_series(
    spec: &GaussianBombardment,
    kmax: usize,
) -> Result<(GaussianSeries, Option<GaussianSeries>), CliError> {
    let rec = gaussian::gaussian_generator_series_recursive(spec, kmax)?;
    let closed = gaussian::gaussian_generator_series(spec, kmax.min(2))?;
    Ok((rec, Some(closed)))
}

fn run_gaussian(
    v: &Validated,
    spec: &GaussianBombardment,
    state: &GaussianState,
    opts: &RunOptions,
) -> Result<RunOutcome, CliError> {
    let grid = &v.config.dt_grid;
    let points: Vec<GaussianPoint> = grid
        .par_iter()
        .map(|&dt| {
            let channel = spec.dilate_reduce(dt)?;
            match gaussian::gaussian_generator_exact(&channel, dt) {
                Ok(g) => Ok(GaussianPoint {
                    dt,
                    channel,
                    generator: Some(g),
                    error: None,
                }),
                Err(e) if is_branch_error(&e) => Ok(GaussianPoint {
                    dt,
                    channel,
                    generator: None,
                    error: Some(e.to_string()),
                }),
                Err(e) => Err(e),
            }
        })
        .collect::<collint::Result<Vec<_>>>()?;
    let divergence = gaussian_divergence(spec, &points)?;

    let n = spec.f_s.nrows();
    let kmax = *v.config.orders.iter().max().expect("validated non-empty");
    let (series, closed) = gaussian_series(spec, kmax)?;

    let mut tables = Vec::new();
    let mut documents = Vec::new();

    if wants(v, Output::Generator) {
        let mut cols = vec!["dt".to_string()];
        cols.extend(generator_columns(n));
        let mut t = Table::new(cols);
        for p in &points {
            let mut row = vec![p.dt];
            match &p.generator {
                Some(g) => row.extend(generator_cells(g)),
                None => row.extend(std::iter::repeat(f64::NAN).take(2 * n * n + n)),
            }
            t.push(row);
        }
        tables.push((Output::Generator, t));
    }

    if wants(v, Output::Series) {
        let mut cols = vec!["m".to_string()];
        cols.extend(generator_columns(n));
        let mut t = Table::new(cols);
        for m in 0..series.len() {
            let g = GaussianGenerator {
                a: series.a[m].clone(),
                b: series.b[m].clone(),
                c: series.c[m].clone(),
            };
            let mut row = vec![m as f64];
            row.extend(generator_cells(&g));
            t.push(row);
        }
        tables.push((Output::Series, t));
    }

    if wants(v, Output::Trajectory) {
        let mut cols: Vec<String> = ["dt", "t", "source", "order"].iter().map(|s| s.to_string()).collect();
        cols.extend((0..n).map(|k| format!("X[{k}]")));
        cols.extend(output::real_matrix_columns("sigma", n, n));
        let mut table = Table::new(cols);
        let push = |table: &mut Table, dt: f64, t: f64, src: f64, order: f64, s: &GaussianState| {
            let mut row = vec![dt, t, src, order];
            row.extend(state_cells(s));
            table.push(row);
        };
        for p in &points {
            let mut s = state.clone();
            for step in 0..=v.config.steps {
                if step > 0 {
                    s = p.channel.apply(&s)?;
                }
                push(&mut table, p.dt, step as f64 * p.dt, SOURCE_DISCRETE, -1.0, &s);
            }
            let times = time_grid(v, p.dt);
            if let Some(g) = &p.generator {
                for &t in &times {
                    push(
                        &mut table,
                        p.dt,
                        t,
                        SOURCE_INTERPOLATED,
                        -1.0,
                        &g.flow(t)?.apply(state)?,
                    );
                }
            }
            for &k in &v.config.orders {
                let gk = series.truncated(p.dt, k);
                for &t in &times {
                    push(&mut table, p.dt, t, SOURCE_SERIES, k as f64, &gk.flow(t)?.apply(state)?);
                }
            }
        }
        tables.push((Output::Trajectory, table));
    }

    if wants(v, Output::Diagnostics) {
        let mut per_dt = Vec::new();
        for p in &points {
            let mut entry = Map::new();
            entry.insert("dt".into(), number(p.dt));
            entry.insert(
                "channel_cp_min_eigenvalue".into(),
                number(gaussian_cp_check(&p.channel, opts.tol)?.min_eigenvalue),
            );
            match &p.generator {
                Some(g) => {
                    entry.insert(
                        "generator_cp_min_eigenvalue".into(),
                        number(generator_cp_check(g, opts.tol)?.min_eigenvalue),
                    );
                    entry.insert(
                        "stroboscopic_residual".into(),
                        number(gaussian_stroboscopic_residual(g, &p.channel, p.dt, state)?),
                    );
                    entry.insert("purification_possible".into(), json!(purification_possible(g)));
                    entry.insert("purity_rate".into(), purity_rate(state, g).map_or(Value::Null, number));
                    entry.insert("excitation_rate".into(), number(excitation_rate(state, g)?));
                    let residuals: Vec<Value> = v
                        .config
                        .orders
                        .iter()
                        .map(|&k| {
                            let gk = series.truncated(p.dt, k);
                            let r = (&gk.a - &g.a)
                                .norm()
                                .max((&gk.b - &g.b).norm())
                                .max((&gk.c - &g.c).norm());
                            json!({ "order": k, "residual": number(r) })
                        })
                        .collect();
                    entry.insert("truncation_residuals".into(), Value::Array(residuals));
                }
                None => {
                    entry.insert("error".into(), json!(p.error.clone().unwrap_or_default()));
                }
            }
            per_dt.push(Value::Object(entry));
        }
        let mut doc = Map::new();
        doc.insert("per_dt".into(), Value::Array(per_dt));
        if let Some(closed) = &closed {
            let diff = closed.max_difference(&series);
            doc.insert(
                "closed_form_vs_recursion".into(),
                Value::Array(diff.iter().map(|&d| number(d)).collect()),
            );
            if closed.len() > 2 {
                let printed = gaussian::printed_b2(spec);
                doc.insert("printed_b2_deviation".into(), number((&printed - &series.b[2]).amax()));
            }
        }
        documents.push((Output::Diagnostics, Value::Object(doc)));
    }

    if wants(v, Output::Classification) {
        let mut per_dt = Vec::new();
        for p in &points {
            if let Some(g) = &p.generator {
                per_dt.push(json!({ "dt": number(p.dt), "generator": generator_json(g), "classification": classification_json(g, opts.tol)? }));
            }
        }
        let mut per_order = Vec::new();
        for m in 0..series.len() {
            let g = GaussianGenerator {
                a: series.a[m].clone(),
                b: series.b[m].clone(),
                c: series.c[m].clone(),
            };
            per_order.push(json!({ "order": m, "classification": classification_json(&g, opts.tol)? }));
        }
        documents.push((Output::Classification, json!({ "exact": per_dt, "series": per_order })));
    }

    Ok(RunOutcome {
        report: Value::Object(Map::new()),
        tables,
        documents,
        divergence,
    })
}

fn gaussian_divergence(spec: &GaussianBombardment, points: &[GaussianPoint]) -> Result<Option<f64>, CliError> {
    let Some(first_bad) = points.iter().position(|p| p.generator.is_none()) else {
        return Ok(None);
    };
    let ok = |dt: f64| -> Result<bool, CliError> {
        match gaussian::gaussian_generator_exact(&spec.dilate_reduce(dt)?, dt) {
            Ok(_) => Ok(true),
            Err(e) if is_branch_error(&e) => Ok(false),
            Err(e) => Err(e.into()),
        }
    };
    let hi_start = points[first_bad].dt;
    let steps: Vec<f64> = (1..=BRANCH_SCAN_SAMPLES)
        .map(|k| hi_start * k as f64 / BRANCH_SCAN_SAMPLES as f64)
        .collect();
    let mut lo = 0.0;
    let mut hi = hi_start;
    for &dt in &steps {
        if !ok(dt)? {
            hi = dt;
            break;
        }
        lo = dt;
    }
    while hi - lo > BRANCH_REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(hi))
}

fn gaussian_stroboscopic_residual(
    g: &GaussianGenerator,
    ch: &GaussianChannel,
    dt: f64,
    s0: &GaussianState,
) -> Result<f64, CliError> {
    let mut discrete = s0.clone();
    let mut worst: f64 = 0.0;
    for k in 1..=STROBOSCOPIC_STEPS {
        discrete = ch.apply(&discrete)?;
        let interp = g.flow(k as f64 * dt)?.apply(s0)?;
        worst = worst
            .max((&interp.mean - &discrete.mean).norm())
            .max((&interp.cov - &discrete.cov).norm());
    }
    Ok(worst)
}
