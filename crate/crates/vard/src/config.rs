//! Run configuration: JSON schema, parsing, and validation.
//!
//! A config file fully determines a run; the README documents every field
//! with a worked example. Validation
//! rebuilds the grid and both exponent fields and runs the admissibility
//! gate, so an invalid file is rejected before any solve starts, naming the
//! violated condition ((p_H), (q_H), cond_q1, cond_q2, k>0).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::discretization::{build_grid, Grid, GridMode, ScalarField};
use crate::error::VardError;
use crate::exponents::{
    check_admissibility, make_class_p_exponent, make_constant_exponent, make_profile_exponent,
    solve_gate, ExponentField, ProfileShape,
};
use crate::solver::{Init, SolveParams};
use crate::Result;

/// Exponent specification. `class_p` blends the constant `p0` with a radial
/// bump of the given amplitude so that x·∇p is supported exactly in the
/// annulus r0 ≤ |x| ≤ 2 r0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExponentConfig {
    Constant {
        value: f64,
    },
    Profile {
        shape: ProfileShape,
        base: f64,
        amplitude: f64,
        scale: f64,
    },
    ClassP {
        p0: f64,
        amplitude: f64,
        r0: f64,
    },
}

impl ExponentConfig {
    pub fn build(&self) -> Result<ExponentField> {
        match *self {
            ExponentConfig::Constant { value } => make_constant_exponent(value),
            ExponentConfig::Profile {
                shape,
                base,
                amplitude,
                scale,
            } => make_profile_exponent(shape, base, amplitude, scale),
            ExponentConfig::ClassP { p0, amplitude, r0 } => {
                let inner =
                    make_profile_exponent(ProfileShape::RadialBump, p0, amplitude, 2.0 * r0)?;
                make_class_p_exponent(p0, &inner, r0)
            }
        }
    }

    /// The same family at a different cutoff radius (r0 sweeps). Only
    /// class_p specs form an r0-indexed family.
    pub fn with_r0(&self, r0: f64) -> Result<ExponentConfig> {
        match *self {
            ExponentConfig::ClassP { p0, amplitude, .. } => {
                Ok(ExponentConfig::ClassP { p0, amplitude, r0 })
            }
            _ => Err(VardError::config(
                "sweep",
                "r0 sweeps need a class_p exponent for p",
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Spatial dimension N (radial grids: 1..=3, tensor grids: 1..=2).
    pub dimension: usize,
    /// Confinement power k in the |x|^k weight; must be positive.
    pub confinement_power: f64,
    pub p: ExponentConfig,
    pub q: ExponentConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub mode: GridMode,
    /// Domain truncation radius L.
    pub truncation: f64,
    /// Nodes per axis (tensor) or radial shells.
    pub cells: usize,
}

/// Initial iterate for the descent. `trial` is the mass-projected Gaussian
/// trial function; `gaussian` is exp(−|x|²/width²), projected by the solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitConfig {
    Trial,
    Gaussian { width: f64 },
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig::Trial
    }
}

impl InitConfig {
    pub fn build(&self, grid: &Grid) -> Result<Init> {
        match *self {
            InitConfig::Trial => Ok(Init::Trial),
            InitConfig::Gaussian { width } => {
                if !(width > 0.0) || !width.is_finite() {
                    return Err(VardError::config(
                        "init",
                        format!("gaussian init width must be positive, got {width}"),
                    ));
                }
                let w2 = width * width;
                Ok(Init::Custom(ScalarField::from_fn(grid, |x| {
                    let r2: f64 = x.iter().map(|c| c * c).sum();
                    (-r2 / w2).exp()
                })))
            }
        }
    }
}

fn default_max_iters() -> usize {
    5000
}
fn default_step0() -> f64 {
    1.0
}
fn default_armijo_beta() -> f64 {
    0.5
}
fn default_armijo_tau() -> f64 {
    1e-4
}
fn default_tol_kkt() -> f64 {
    1e-4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveBlock {
    /// Single target mass c. Exactly one of `mass` and `mass_list` must be set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Mass sweep (one solve per entry).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_list: Option<Vec<f64>>,
    /// Working-ball radius σ.
    pub sigma: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_step0")]
    pub step0: f64,
    #[serde(default = "default_armijo_beta")]
    pub armijo_beta: f64,
    #[serde(default = "default_armijo_tau")]
    pub armijo_tau: f64,
    #[serde(default = "default_tol_kkt")]
    pub tol_kkt: f64,
    #[serde(default)]
    pub init: InitConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

fn default_directory() -> String {
    "out".to_string()
}
fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Json, OutputFormat::Csv]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_directory")]
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: default_directory(),
            formats: default_formats(),
        }
    }
}

fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub grid: GridConfig,
    pub solve: SolveBlock,
    #[serde(default)]
    pub outputs: OutputConfig,
    /// Seed for randomized probes (K_α estimation, separation probe).
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl RunConfig {
    pub fn build_grid(&self) -> Result<Grid> {
        build_grid(
            self.problem.dimension,
            self.grid.mode,
            self.grid.truncation,
            self.grid.cells,
        )
    }

    pub fn build_p(&self) -> Result<ExponentField> {
        self.problem.p.build()
    }

    pub fn build_q(&self) -> Result<ExponentField> {
        self.problem.q.build()
    }

    /// Target masses, in declared order.
    pub fn masses(&self) -> Vec<f64> {
        match (&self.solve.mass, &self.solve.mass_list) {
            (_, Some(list)) => list.clone(),
            (Some(c), None) => vec![*c],
            (None, None) => Vec::new(),
        }
    }

    /// Solver parameters for one target mass.
    pub fn solve_params(&self, c: f64, grid: &Grid) -> Result<SolveParams> {
        let mut params = SolveParams::new(c, self.solve.sigma);
        params.max_iters = self.solve.max_iters;
        params.step0 = self.solve.step0;
        params.armijo_beta = self.solve.armijo_beta;
        params.armijo_tau = self.solve.armijo_tau;
        params.tol_kkt = self.solve.tol_kkt;
        params.init = self.solve.init.build(grid)?;
        params.validate()?;
        Ok(params)
    }

    /// Validate every block; collects all independent violations into one
    /// error. Returns the admissibility gate's warnings on success.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut violations: Vec<String> = Vec::new();
        let mut warnings: Vec<String> = Vec::new();

        let grid = match self.build_grid() {
            Ok(g) => Some(g),
            Err(e) => {
                violations.push(e.to_string());
                None
            }
        };
        let p = match self.build_p() {
            Ok(f) => Some(f),
            Err(e) => {
                violations.push(format!("p: {e}"));
                None
            }
        };
        let q = match self.build_q() {
            Ok(f) => Some(f),
            Err(e) => {
                violations.push(format!("q: {e}"));
                None
            }
        };
        if let (Some(grid), Some(p), Some(q)) = (&grid, &p, &q) {
            match check_admissibility(p, q, self.problem.dimension, self.problem.confinement_power, grid)
            {
                Ok(report) => match solve_gate(&report, self.problem.dimension) {
                    Ok(w) => warnings.extend(w),
                    Err(e) => violations.push(e.to_string()),
                },
                Err(e) => violations.push(e.to_string()),
            }
        }

        match (&self.solve.mass, &self.solve.mass_list) {
            (None, None) => violations.push("solve: one of mass, mass_list is required".into()),
            (Some(_), Some(_)) => {
                violations.push("solve: mass and mass_list are mutually exclusive".into())
            }
            _ => {}
        }
        for (idx, c) in self.masses().iter().enumerate() {
            if !(*c > 0.0) || !c.is_finite() {
                violations.push(format!("solve: mass[{idx}] must be positive, got {c}"));
            }
        }
        if let Some(list) = &self.solve.mass_list {
            if list.is_empty() {
                violations.push("solve: mass_list must be nonempty".into());
            }
        }
        if let Some(grid) = &grid {
            if let Some(&c) = self.masses().first() {
                if c > 0.0 && c.is_finite() {
                    if let Err(e) = self.solve_params(c, grid) {
                        violations.push(e.to_string());
                    }
                }
            }
        }
        if self.outputs.formats.is_empty() {
            violations.push("outputs: formats must be nonempty".into());
        }
        if self.outputs.directory.is_empty() {
            violations.push("outputs: directory must be nonempty".into());
        }

        if violations.is_empty() {
            Ok(warnings)
        } else {
            Err(VardError::config("config", violations.join("; ")))
        }
    }
}

/// Read, parse, and validate a config file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let cfg: RunConfig = serde_json::from_str(&text)?;
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn minimal_json() -> String {
        r#"{
            "problem": {
                "dimension": 1,
                "confinement_power": 2.0,
                "p": { "kind": "constant", "value": 2.0 },
                "q": { "kind": "constant", "value": 4.0 }
            },
            "grid": { "mode": "tensor", "truncation": 6.0, "cells": 1024 },
            "solve": { "mass": 0.05, "sigma": 1.0 }
        }"#
        .to_string()
    }

    #[test]
    fn minimal_valid_config_parses() {
        let file = tempfile::NamedTempFile::new().unwrap();
        write!(file.as_file(), "{}", minimal_json()).unwrap();
        let cfg = parse_config(file.path()).unwrap();
        assert_eq!(cfg.problem.dimension, 1);
        assert_eq!(cfg.masses(), vec![0.05]);
        assert_eq!(cfg.solve.max_iters, 5000);
        assert_eq!(cfg.solve.tol_kkt, 1e-4);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.outputs.directory, "out");
        let grid = cfg.build_grid().unwrap();
        let params = cfg.solve_params(0.05, &grid).unwrap();
        assert_eq!(params.c, 0.05);
        assert_eq!(params.init, Init::Trial);
    }

    #[test]
    fn subcritical_q_rejected_naming_cond_q1() {
        let json = minimal_json()
            .replace("\"dimension\": 1", "\"dimension\": 3")
            .replace("\"mode\": \"tensor\"", "\"mode\": \"radial\"")
            .replace("\"value\": 4.0", "\"value\": 3.0");
        let cfg: RunConfig = serde_json::from_str(&json).unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("cond_q1"), "{err}");
    }

    #[test]
    fn zero_confinement_rejected_naming_k() {
        let json = minimal_json().replace("\"confinement_power\": 2.0", "\"confinement_power\": 0.0");
        let cfg: RunConfig = serde_json::from_str(&json).unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("k>0"), "{err}");
    }

    #[test]
    fn multiple_violations_all_listed() {
        let json = minimal_json()
            .replace("\"confinement_power\": 2.0", "\"confinement_power\": 0.0")
            .replace("\"sigma\": 1.0", "\"sigma\": -1.0");
        let cfg: RunConfig = serde_json::from_str(&json).unwrap();
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("k>0"), "{msg}");
        assert!(msg.contains("sigma"), "{msg}");
    }

    #[test]
    fn mass_and_mass_list_are_exclusive() {
        let json = minimal_json().replace(
            "\"mass\": 0.05",
            "\"mass\": 0.05, \"mass_list\": [0.04, 0.02]",
        );
        let cfg: RunConfig = serde_json::from_str(&json).unwrap();
        assert!(cfg.validate().is_err());

        let json = minimal_json().replace("\"mass\": 0.05, ", "");
        let cfg: RunConfig = serde_json::from_str(&json).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let json = minimal_json().replace("\"mass\": 0.05", "\"mass\": 0.05, \"typo\": true");
        assert!(serde_json::from_str::<RunConfig>(&json).is_err());
    }

    #[test]
    fn unsupported_grid_dimension_combination() {
        let json = minimal_json().replace("\"dimension\": 1", "\"dimension\": 3");
        let cfg: RunConfig = serde_json::from_str(&json).unwrap();
        // tensor mode stops at two dimensions
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn class_p_spec_builds_annulus_supported_drift() {
        let spec = ExponentConfig::ClassP {
            p0: 2.0,
            amplitude: 0.3,
            r0: 0.4,
        };
        let p = spec.build().unwrap();
        assert_eq!(p.radial_drift(&[0.2]), 0.0);
        assert_eq!(p.radial_drift(&[1.0]), 0.0);
        assert!(p.radial_drift(&[0.6]) != 0.0);
        let moved = spec.with_r0(0.1).unwrap();
        let p = moved.build().unwrap();
        assert!(p.radial_drift(&[0.15]) != 0.0);
        assert_eq!(p.radial_drift(&[0.3]), 0.0);

        let constant = ExponentConfig::Constant { value: 2.0 };
        assert!(constant.with_r0(0.1).is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg: RunConfig = serde_json::from_str(&minimal_json()).unwrap();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.problem.dimension, cfg.problem.dimension);
        assert_eq!(back.solve.mass, cfg.solve.mass);
        assert_eq!(back.outputs.formats, cfg.outputs.formats);
    }

    #[test]
    fn gaussian_init_builds_field() {
        let grid = build_grid(1, GridMode::Tensor, 6.0, 128).unwrap();
        let init = InitConfig::Gaussian { width: 2.0 };
        match init.build(&grid).unwrap() {
            Init::Custom(u) => {
                assert_eq!(u.len(), grid.len());
                assert!(u.values.iter().all(|v| *v > 0.0));
            }
            other => panic!("expected custom init, got {other:?}"),
        }
        assert!(InitConfig::Gaussian { width: 0.0 }.build(&grid).is_err());
    }
}
