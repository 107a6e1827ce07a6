//! Run orchestration: single solves, mass/σ/r₀ sweeps, and bit-stable
//! report emission.
//!
//! A single run writes four artifacts into the output directory
//! (thresholds.json, solve.json, trace.csv, pohozaev.json; plus u.csv when
//! csv output is enabled). Sweeps write one summary CSV with a row per
//! point, in input order, regardless of worker completion order; per-point
//! failures land in the error column and never abort the other points.
//! All emitted structures use declaration-ordered fields and no hash maps,
//! so reruns of the same config and build are byte-identical.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::discretization::ScalarField;
use crate::error::VardError;
use crate::exponents::{check_admissibility, AdmissibilityReport};
use crate::functional::{EnergyReport, Problem};
use crate::pohozaev::{
    self, pohozaev_terms, regularity_diagnostics, PohozaevReport, RegularityReport,
};
use crate::solver::{kkt_residual, minimize, positivity_margin, SolveResult};
use crate::thresholds::{
    decay_envelopes, estimate_k_alpha, separation_probe, threshold_c0, ThresholdReport,
};
use crate::Result;

/// Everything computed for one (c, σ) point.
#[derive(Debug, Clone)]
pub struct PointOutcome {
    pub c: f64,
    pub sigma: f64,
    pub thresholds: ThresholdReport,
    pub result: SolveResult,
    pub energy: EnergyReport,
    pub pohozaev: PohozaevReport,
    pub regularity: Option<RegularityReport>,
    pub regularity_error: Option<String>,
    pub positivity_bracket: f64,
    pub positivity_margin: f64,
    /// (energy of the trial function, probe minimum over the annulus, usable probes).
    pub separation: (f64, f64, usize),
    /// (printed envelope, amplitude-chain envelope) for ρ_X(u_c).
    pub envelopes: (f64, f64),
}

#[derive(Serialize)]
struct ThresholdsJson<'a> {
    c: f64,
    sigma: f64,
    report: &'a ThresholdReport,
    separation_trial_energy: f64,
    separation_probe_min: f64,
    separation_usable_probes: usize,
    envelope_printed: f64,
    envelope_amplitude_chain: f64,
}

#[derive(Serialize)]
struct SolveJson<'a> {
    dimension: usize,
    grid_mode: &'a str,
    truncation: f64,
    cells: usize,
    confinement_power: f64,
    p_label: &'a str,
    q_label: &'a str,
    eps_smoothing: f64,
    admissibility: &'a AdmissibilityReport,
    c: f64,
    sigma: f64,
    gamma_c: f64,
    lambda_c: f64,
    kkt_residual: f64,
    iterations: usize,
    converged: bool,
    on_ball_boundary: bool,
    ball_rejections: usize,
    mass_error: f64,
    energy: &'a EnergyReport,
    positivity_bracket: f64,
    positivity_margin: f64,
    remainder: f64,
    warnings: &'a [String],
}

#[derive(Serialize)]
struct PohozaevJson<'a> {
    lambda: f64,
    log_clamp: f64,
    report: &'a PohozaevReport,
    regularity: &'a Option<RegularityReport>,
    regularity_error: &'a Option<String>,
}

/// One row of the sweep summary CSV. Value cells are empty on failed points.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub c: f64,
    pub sigma: f64,
    pub r0: Option<f64>,
    pub gamma: Option<f64>,
    pub lambda: Option<f64>,
    pub rho_x: Option<f64>,
    pub norm_x: Option<f64>,
    pub kkt: Option<f64>,
    pub pohozaev_residual: Option<f64>,
    pub remainder: Option<f64>,
    pub envelope_printed: Option<f64>,
    pub envelope_amplitude_chain: Option<f64>,
    pub error: Option<String>,
}

pub enum Sweep {
    Mass(Vec<f64>),
    Sigma(Vec<f64>),
    CutoffRadius(Vec<f64>),
}

fn build_problem(cfg: &RunConfig) -> Result<Problem> {
    let grid = cfg.build_grid()?;
    let p = cfg.build_p()?;
    let q = cfg.build_q()?;
    Problem::new(grid, p, q, cfg.problem.confinement_power)
}

/// The full pipeline at one mass level: threshold chain, solve, identity
/// report, positivity margin, separation probe.
pub fn solve_point(cfg: &RunConfig, prob: &Problem, c: f64) -> Result<PointOutcome> {
    let sigma = cfg.solve.sigma;
    let k_alpha = estimate_k_alpha(&prob.grid, &prob.p_field, &prob.q_field, cfg.seed)?;
    let thresholds = threshold_c0(
        sigma,
        &prob.p_field,
        &prob.q_field,
        prob.grid.dim,
        &prob.grid,
        k_alpha,
    )?;
    let params = cfg.solve_params(c, &prob.grid)?;
    let result = minimize(prob, &params)?;
    let energy = prob.energy_report(&result.u_c)?;
    let pohozaev = pohozaev_terms(prob, &result.u_c, result.lambda_c)?;
    let (regularity, regularity_error) = match regularity_diagnostics(&prob.grid, &result.u_c) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (bracket, margin) = positivity_margin(prob, &result.u_c, pohozaev.remainder.abs());
    let separation = separation_probe(prob, c, sigma, thresholds.a2, 40, cfg.seed)?;
    let envelopes = decay_envelopes(
        c,
        thresholds.const_c1,
        thresholds.const_c2,
        prob.p.min,
        prob.p.max,
    );
    Ok(PointOutcome {
        c,
        sigma,
        thresholds,
        result,
        energy,
        pohozaev,
        regularity,
        regularity_error,
        positivity_bracket: bracket,
        positivity_margin: margin,
        separation,
        envelopes,
    })
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn write_trace_csv(path: &Path, result: &SolveResult) -> Result<()> {
    let mut out = String::from("iter,energy,mass_error,kkt,step,norm_x\n");
    for row in &result.trace {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.iter, row.energy, row.mass_error, row.kkt, row.step, row.norm_x
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn write_field_csv(path: &Path, prob: &Problem, u: &ScalarField) -> Result<()> {
    let mut out = String::from("index,radius,value\n");
    for i in 0..prob.grid.len() {
        out.push_str(&format!("{},{},{}\n", i, prob.grid.radius[i], u.values[i]));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn mode_name(prob: &Problem) -> &'static str {
    match prob.grid.mode {
        crate::discretization::GridMode::Radial => "radial",
        crate::discretization::GridMode::Tensor => "tensor",
    }
}

/// Write the four single-run artifacts for one outcome.
fn write_point_artifacts(
    cfg: &RunConfig,
    prob: &Problem,
    out: &PointOutcome,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let json = cfg.outputs.formats.contains(&OutputFormat::Json);
    let csv = cfg.outputs.formats.contains(&OutputFormat::Csv);
    let mut written = Vec::new();

    if json {
        let path = dir.join("thresholds.json");
        write_json(
            &path,
            &ThresholdsJson {
                c: out.c,
                sigma: out.sigma,
                report: &out.thresholds,
                separation_trial_energy: out.separation.0,
                separation_probe_min: out.separation.1,
                separation_usable_probes: out.separation.2,
                envelope_printed: out.envelopes.0,
                envelope_amplitude_chain: out.envelopes.1,
            },
        )?;
        written.push(path);

        let admissibility = check_admissibility(
            &prob.p_field,
            &prob.q_field,
            prob.grid.dim,
            prob.k,
            &prob.grid,
        )?;
        let mass_error = (prob.mass(&out.result.u_c) - out.c).abs();
        let path = dir.join("solve.json");
        write_json(
            &path,
            &SolveJson {
                dimension: prob.grid.dim,
                grid_mode: mode_name(prob),
                truncation: prob.grid.truncation,
                cells: cfg.grid.cells,
                confinement_power: prob.k,
                p_label: prob.p_field.label(),
                q_label: prob.q_field.label(),
                eps_smoothing: prob.eps,
                admissibility: &admissibility,
                c: out.c,
                sigma: out.sigma,
                gamma_c: out.result.gamma_c,
                lambda_c: out.result.lambda_c,
                kkt_residual: out.result.kkt_residual,
                iterations: out.result.iterations,
                converged: out.result.converged,
                on_ball_boundary: out.result.on_ball_boundary,
                ball_rejections: out.result.ball_rejections,
                mass_error,
                energy: &out.energy,
                positivity_bracket: out.positivity_bracket,
                positivity_margin: out.positivity_margin,
                remainder: out.pohozaev.remainder,
                warnings: &out.result.warnings,
            },
        )?;
        written.push(path);

        let path = dir.join("pohozaev.json");
        write_json(
            &path,
            &PohozaevJson {
                lambda: out.result.lambda_c,
                log_clamp: pohozaev::LOG_CLAMP,
                report: &out.pohozaev,
                regularity: &out.regularity,
                regularity_error: &out.regularity_error,
            },
        )?;
        written.push(path);
    }
    if csv {
        let path = dir.join("trace.csv");
        write_trace_csv(&path, &out.result)?;
        written.push(path);
        let path = dir.join("u.csv");
        write_field_csv(&path, prob, &out.result.u_c)?;
        written.push(path);
    }
    Ok(written)
}

/// Run the configured single solve and write its artifacts. Returns the
/// outcome for programmatic callers. A non-convergent solve still writes
/// every artifact (the trace shows how far it got) and then errors.
pub fn run_single(cfg: &RunConfig, quiet: bool) -> Result<PointOutcome> {
    let masses = cfg.masses();
    let c = *masses.first().ok_or_else(|| {
        VardError::config("config", "solve block has no mass to run")
    })?;
    let prob = build_problem(cfg)?;
    let outcome = solve_point(cfg, &prob, c)?;
    let dir = PathBuf::from(&cfg.outputs.directory);
    write_point_artifacts(cfg, &prob, &outcome, &dir)?;
    if !quiet {
        println!(
            "solve: c={} sigma={} converged={} iters={} gamma={:.8e} lambda={:.8e} kkt={:.3e}",
            outcome.c,
            outcome.sigma,
            outcome.result.converged,
            outcome.result.iterations,
            outcome.result.gamma_c,
            outcome.result.lambda_c,
            outcome.result.kkt_residual,
        );
        println!(
            "thresholds: c0={:.6e} c1={:.6e} bracket={:.6e} (c above c0: {})",
            outcome.thresholds.c0,
            outcome.thresholds.c1_sigma,
            outcome.thresholds.bracket,
            outcome.c > outcome.thresholds.c0,
        );
        println!(
            "positivity: bracket={:.6e} margin={:.6e}; remainder R={:.6e}",
            outcome.positivity_bracket, outcome.positivity_margin, outcome.pohozaev.remainder,
        );
        println!(
            "separation probe: E(trial)={:.6e} annulus min={:.6e} over {} usable probes",
            outcome.separation.0, outcome.separation.1, outcome.separation.2,
        );
    }
    if !outcome.result.converged {
        return Err(VardError::numeric(
            "solve",
            format!(
                "did not converge within {} iterations (kkt = {:.3e})",
                cfg.solve.max_iters, outcome.result.kkt_residual
            ),
        ));
    }
    Ok(outcome)
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let workers = std::env::var("VARD_WORKERS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|w| *w > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        });
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| VardError::numeric("worker_pool", e.to_string()))
}

fn point_row(cfg: &RunConfig, c: f64, sigma: f64) -> SweepRow {
    let mut cfg = cfg.clone();
    cfg.solve.mass = Some(c);
    cfg.solve.mass_list = None;
    cfg.solve.sigma = sigma;
    let mut row = SweepRow {
        c,
        sigma,
        r0: None,
        gamma: None,
        lambda: None,
        rho_x: None,
        norm_x: None,
        kkt: None,
        pohozaev_residual: None,
        remainder: None,
        envelope_printed: None,
        envelope_amplitude_chain: None,
        error: None,
    };
    let attempt = build_problem(&cfg).and_then(|prob| solve_point(&cfg, &prob, c));
    match attempt {
        Ok(out) => {
            row.gamma = Some(out.result.gamma_c);
            row.lambda = Some(out.result.lambda_c);
            row.rho_x = Some(out.energy.modular_x);
            row.norm_x = Some(out.energy.norm_x);
            row.kkt = Some(out.result.kkt_residual);
            row.pohozaev_residual = Some(out.pohozaev.residual);
            row.remainder = Some(out.pohozaev.remainder);
            row.envelope_printed = Some(out.envelopes.0);
            row.envelope_amplitude_chain = Some(out.envelopes.1);
            if !out.result.converged {
                row.error = Some("did not converge".to_string());
            }
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Evaluate the identity remainder of one fixed field under the cutoff
/// family at radius r0.
fn cutoff_row(
    cfg: &RunConfig,
    u: &ScalarField,
    lambda: f64,
    c: f64,
    r0: f64,
) -> SweepRow {
    let mut row = SweepRow {
        c,
        sigma: cfg.solve.sigma,
        r0: Some(r0),
        gamma: None,
        lambda: Some(lambda),
        rho_x: None,
        norm_x: None,
        kkt: None,
        pohozaev_residual: None,
        remainder: None,
        envelope_printed: None,
        envelope_amplitude_chain: None,
        error: None,
    };
    let attempt = (|| -> Result<()> {
        let grid = cfg.build_grid()?;
        let p = cfg.problem.p.with_r0(r0)?.build()?;
        let q = cfg.build_q()?;
        let prob = Problem::new(grid, p, q, cfg.problem.confinement_power)?;
        let rep = pohozaev_terms(&prob, u, lambda)?;
        row.gamma = Some(prob.energy(u));
        row.rho_x = Some(crate::modular::modular_x(
            &prob.grid,
            u,
            &prob.p_field,
            prob.k,
        ));
        row.norm_x = Some(crate::modular::norm_x(&prob.grid, u, &prob.p_field, prob.k)?);
        row.kkt = Some(kkt_residual(&prob, u, lambda));
        row.pohozaev_residual = Some(rep.residual);
        row.remainder = Some(rep.remainder);
        Ok(())
    })();
    if let Err(e) = attempt {
        row.error = Some(e.to_string());
    }
    row
}

/// Run a sweep and write its summary CSV. Points run concurrently on a pool
/// capped by VARD_WORKERS; rows come back in input order.
pub fn run_sweep(cfg: &RunConfig, sweep: &Sweep, quiet: bool) -> Result<Vec<SweepRow>> {
    let values = match sweep {
        Sweep::Mass(v) | Sweep::Sigma(v) | Sweep::CutoffRadius(v) => v,
    };
    if values.is_empty() {
        return Err(VardError::config("sweep", "sweep list is empty"));
    }
    let pool = worker_pool()?;

    let rows: Vec<SweepRow> = match sweep {
        Sweep::Mass(cs) => pool.install(|| {
            cs.par_iter()
                .map(|&c| point_row(cfg, c, cfg.solve.sigma))
                .collect()
        }),
        Sweep::Sigma(sigmas) => {
            let c = *cfg.masses().first().ok_or_else(|| {
                VardError::config("config", "sigma sweep needs a mass in the solve block")
            })?;
            pool.install(|| {
                sigmas
                    .par_iter()
                    .map(|&sigma| point_row(cfg, c, sigma))
                    .collect()
            })
        }
        Sweep::CutoffRadius(r0s) => {
            // One solve at the configured cutoff pins the field; each radius
            // then re-evaluates the identity remainder on that fixed field.
            cfg.problem.p.with_r0(r0s[0])?; // class_p check before solving
            let c = *cfg.masses().first().ok_or_else(|| {
                VardError::config("config", "r0 sweep needs a mass in the solve block")
            })?;
            let prob = build_problem(cfg)?;
            let params = cfg.solve_params(c, &prob.grid)?;
            let base = minimize(&prob, &params)?;
            if !base.converged {
                return Err(VardError::numeric(
                    "sweep",
                    "base solve for the r0 sweep did not converge",
                ));
            }
            let (u, lambda) = (base.u_c, base.lambda_c);
            pool.install(|| {
                r0s.par_iter()
                    .map(|&r0| cutoff_row(cfg, &u, lambda, c, r0))
                    .collect()
            })
        }
    };

    let dir = PathBuf::from(&cfg.outputs.directory);
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("sweep.csv");
    write_sweep_csv(&path, &rows)?;
    if !quiet {
        for row in &rows {
            match &row.error {
                None => println!(
                    "sweep point c={} sigma={}{}: rho_x={:?} R={:?}",
                    row.c,
                    row.sigma,
                    row.r0.map(|r| format!(" r0={r}")).unwrap_or_default(),
                    row.rho_x,
                    row.remainder,
                ),
                Some(e) => println!("sweep point c={} sigma={}: FAILED: {e}", row.c, row.sigma),
            }
        }
        println!("sweep: {} rows -> {}", rows.len(), path.display());
    }
    Ok(rows)
}

fn fmt_cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut out = String::from(
        "c,sigma,r0,gamma,lambda,rho_x,norm_x,kkt,pohozaev_residual,remainder,\
         envelope_printed,envelope_amplitude_chain,error\n",
    );
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            row.c,
            row.sigma,
            fmt_cell(row.r0),
            fmt_cell(row.gamma),
            fmt_cell(row.lambda),
            fmt_cell(row.rho_x),
            fmt_cell(row.norm_x),
            fmt_cell(row.kkt),
            fmt_cell(row.pohozaev_residual),
            fmt_cell(row.remainder),
            fmt_cell(row.envelope_printed),
            fmt_cell(row.envelope_amplitude_chain),
            row.error
                .as_deref()
                .map(|e| e.replace([',', '\n'], ";"))
                .unwrap_or_default(),
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use std::io::Write as _;

    fn config_json(dir: &Path, cells: usize) -> String {
        format!(
            r#"{{
            "problem": {{
                "dimension": 1,
                "confinement_power": 2.0,
                "p": {{ "kind": "constant", "value": 2.0 }},
                "q": {{ "kind": "constant", "value": 4.0 }}
            }},
            "grid": {{ "mode": "tensor", "truncation": 6.0, "cells": {cells} }},
            "solve": {{ "mass": 0.05, "sigma": 1.0, "tol_kkt": 1e-3 }},
            "outputs": {{ "directory": {dir:?} }}
        }}"#,
            cells = cells,
            dir = dir.join("out").to_str().unwrap(),
        )
    }

    fn parse(dir: &Path, cells: usize) -> RunConfig {
        let file = tempfile::NamedTempFile::new().unwrap();
        write!(file.as_file(), "{}", config_json(dir, cells)).unwrap();
        parse_config(file.path()).unwrap()
    }

    #[test]
    fn single_run_writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse(dir.path(), 256);
        let outcome = run_single(&cfg, true).unwrap();
        assert!(outcome.result.converged);
        let out = dir.path().join("out");
        for name in [
            "thresholds.json",
            "solve.json",
            "trace.csv",
            "pohozaev.json",
            "u.csv",
        ] {
            let path = out.join(name);
            assert!(path.is_file(), "missing {name}");
            assert!(std::fs::metadata(&path).unwrap().len() > 0);
        }
        // schema check: the JSON artifacts parse back
        for name in ["thresholds.json", "solve.json", "pohozaev.json"] {
            let text = std::fs::read_to_string(out.join(name)).unwrap();
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert!(v.is_object(), "{name} is not an object");
        }
    }

    #[test]
    fn rerun_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse(dir.path(), 256);
        run_single(&cfg, true).unwrap();
        let out = dir.path().join("out");
        let read_all = || -> Vec<Vec<u8>> {
            ["thresholds.json", "solve.json", "pohozaev.json", "trace.csv"]
                .iter()
                .map(|n| std::fs::read(out.join(n)).unwrap())
                .collect()
        };
        let first = read_all();
        run_single(&cfg, true).unwrap();
        let second = read_all();
        assert_eq!(first, second);
    }

    #[test]
    fn non_convergent_run_errors_with_partial_trace() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = parse(dir.path(), 256);
        cfg.solve.max_iters = 1;
        let err = run_single(&cfg, true).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let trace = std::fs::read_to_string(dir.path().join("out/trace.csv")).unwrap();
        assert!(trace.lines().count() >= 2, "partial trace missing");
    }

    #[test]
    fn mass_sweep_rows_in_input_order() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse(dir.path(), 256);
        let rows = run_sweep(&cfg, &Sweep::Mass(vec![0.04, 0.02, 0.01]), true).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].c, 0.04);
        assert_eq!(rows[1].c, 0.02);
        assert_eq!(rows[2].c, 0.01);
        for row in &rows {
            assert!(row.error.is_none(), "{:?}", row.error);
        }
        // decay: rho_x strictly decreasing along the mass sweep
        let rho: Vec<f64> = rows.iter().map(|r| r.rho_x.unwrap()).collect();
        assert!(rho[0] > rho[1] && rho[1] > rho[2], "{rho:?}");
        let csv = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("c,sigma,r0,"));
    }

    #[test]
    fn empty_sweep_is_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse(dir.path(), 256);
        let err = run_sweep(&cfg, &Sweep::Mass(vec![]), true).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn failed_point_recorded_sweep_continues() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse(dir.path(), 256);
        // negative mass cannot be validated into SolveParams
        let rows = run_sweep(&cfg, &Sweep::Mass(vec![0.05, -1.0]), true).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].error.is_none());
        assert!(rows[1].error.is_some());
        assert!(rows[1].gamma.is_none());
    }

    #[test]
    fn cutoff_sweep_remainder_decreases() {
        let dir = tempfile::tempdir().unwrap();
        let json = config_json(dir.path(), 512).replace(
            r#""p": { "kind": "constant", "value": 2.0 }"#,
            r#""p": { "kind": "class_p", "p0": 2.0, "amplitude": 0.3, "r0": 0.4 }"#,
        );
        let file = tempfile::NamedTempFile::new().unwrap();
        write!(file.as_file(), "{json}").unwrap();
        let mut cfg = parse_config(file.path()).unwrap();
        cfg.problem.dimension = 3;
        cfg.grid.mode = crate::discretization::GridMode::Radial;
        cfg.validate().unwrap();
        let rows = run_sweep(&cfg, &Sweep::CutoffRadius(vec![0.4, 0.2, 0.1]), true).unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            assert!(row.error.is_none(), "{:?}", row.error);
            assert_eq!(row.lambda, rows[0].lambda, "fixed field, fixed multiplier");
        }
        let r: Vec<f64> = rows.iter().map(|r| r.remainder.unwrap().abs()).collect();
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
    }

    #[test]
    fn r0_sweep_on_constant_p_is_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = parse(dir.path(), 256);
        let err = run_sweep(&cfg, &Sweep::CutoffRadius(vec![0.4, 0.2]), true).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
