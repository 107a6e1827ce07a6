//! Variable exponent fields p(x), q(x) and their admissibility conditions.
//!
//! Exponents are analytic objects (value, radial drift x·∇p, Lipschitz
//! bound) that get sampled once per grid. The cutoff class blends a constant
//! p0 with an inner profile through a radial C² smoothstep so that x·∇p is
//! supported in the annulus r₀ ≤ |x| ≤ 2r₀; shrinking r₀ shrinks the
//! variational identity's remainder term.

use crate::discretization::Grid;
use crate::error::VardError;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Quintic smoothstep 6t⁵ − 15t⁴ + 10t³ clamped to [0,1]; C² at both ends.
pub fn smoothstep_quintic(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
    }
}

/// Derivative of [`smoothstep_quintic`]; its maximum is 15/8 at t = 1/2.
pub fn smoothstep_quintic_deriv(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        30.0 * t * t * (t - 1.0) * (t - 1.0)
    }
}

/// Maximum slope of the quintic smoothstep.
pub const SMOOTHSTEP_SLOPE: f64 = 15.0 / 8.0;

/// Radial cutoff η of the exponent class: 0 on [0, r₀], 1 on [2r₀, ∞),
/// quintic in between. Returns (η(r), η'(r)); |η'| ≤ (15/8)/r₀.
pub fn cutoff_eta(r: f64, r0: f64) -> (f64, f64) {
    let t = (r - r0) / r0;
    (smoothstep_quintic(t), smoothstep_quintic_deriv(t) / r0)
}

/// Tag of an [`ExponentField`] construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentKind {
    Constant,
    Radial,
    ClassP,
    Custom,
}

type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A variable exponent: pointwise value, analytic radial drift x·∇p, and a
/// Lipschitz bound. Immutable after construction; shared read-only across
/// concurrent runs.
#[derive(Clone)]
pub struct ExponentField {
    kind: ExponentKind,
    label: String,
    eval: EvalFn,
    drift: EvalFn,
    lipschitz: f64,
    /// Recorded bound C₀ on |x·∇p| (zero for constants).
    drift_bound: f64,
}

impl fmt::Debug for ExponentField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExponentField({})", self.label)
    }
}

impl ExponentField {
    /// Exponent value at a point (coordinates padded to the grid dimension;
    /// radial grids pass [r, 0, 0]).
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    /// x·∇p at a point.
    pub fn radial_drift(&self, x: &[f64]) -> f64 {
        (self.drift)(x)
    }

    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz
    }

    /// Recorded bound C₀ with |x·∇p(x)| ≤ C₀ everywhere.
    pub fn drift_bound(&self) -> f64 {
        self.drift_bound
    }

    pub fn kind(&self) -> ExponentKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Sample value, edge value, and drift arrays on a grid; bounds are the
    /// node extrema. All downstream quadratures consume these arrays.
    pub fn sample(&self, grid: &Grid) -> SampledExponent {
        let node: Vec<f64> = (0..grid.len()).map(|i| self.evaluate(grid.node(i))).collect();
        let drift: Vec<f64> = (0..grid.len())
            .map(|i| self.radial_drift(grid.node(i)))
            .collect();
        let edge: Vec<f64> = grid
            .edges
            .iter()
            .map(|e| self.evaluate(&e.coords[..grid.dim]))
            .collect();
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in &node {
            min = min.min(v);
            max = max.max(v);
        }
        SampledExponent {
            node,
            edge,
            drift,
            min,
            max,
        }
    }
}

/// Node/edge samples of one exponent on one grid, with grid-extremum bounds.
#[derive(Debug, Clone)]
pub struct SampledExponent {
    pub node: Vec<f64>,
    pub edge: Vec<f64>,
    /// x·∇p at nodes.
    pub drift: Vec<f64>,
    /// Grid minimum (written p⁻ in reports).
    pub min: f64,
    /// Grid maximum (written p⁺ in reports).
    pub max: f64,
}

/// Constant exponent field p ≡ p0. Errors when p0 ≤ 1: the space is no
/// longer uniformly convex there. The upper bound p0 < N is a property of
/// the ambient dimension and is reported by [`check_admissibility`].
pub fn make_constant_exponent(p0: f64) -> Result<ExponentField> {
    if !(p0 > 1.0) || !p0.is_finite() {
        return Err(VardError::config(
            "(p_H)",
            format!("constant exponent must satisfy p0 > 1, got {p0}"),
        ));
    }
    Ok(ExponentField {
        kind: ExponentKind::Constant,
        label: format!("constant({p0})"),
        eval: Arc::new(move |_| p0),
        drift: Arc::new(|_| 0.0),
        lipschitz: 0.0,
        drift_bound: 0.0,
    })
}

/// Named inner profiles available to run configurations. All are radial and
/// constant outside [0, scale], so their own drift vanishes for r ≥ scale —
/// exactly what the cutoff-class construction requires of its inner field
/// (with scale = 2r₀).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileShape {
    /// p(r) ≡ base.
    Constant,
    /// base + amplitude·(1 − (r/scale)²)³ inside r < scale, base outside.
    RadialBump,
    /// base + amplitude·S(r/scale) rising to base + amplitude for r ≥ scale
    /// (S the quintic smoothstep).
    Plateau,
}

/// Radial exponent profile from the registry.
pub fn make_profile_exponent(
    shape: ProfileShape,
    base: f64,
    amplitude: f64,
    scale: f64,
) -> Result<ExponentField> {
    if !(base > 1.0) {
        return Err(VardError::config(
            "(p_H)",
            format!("profile base must exceed 1, got {base}"),
        ));
    }
    if !(scale > 0.0) && shape != ProfileShape::Constant {
        return Err(VardError::config(
            "(p_H)",
            format!("profile scale must be positive, got {scale}"),
        ));
    }
    let lo = base + amplitude.min(0.0);
    if !(lo > 1.0) {
        return Err(VardError::config(
            "(p_H)",
            format!("profile range [{lo}, {}] leaves (1, N)", base + amplitude.max(0.0)),
        ));
    }
    let label = format!("{shape:?}(base={base}, amp={amplitude}, scale={scale})");
    let (eval, drift, lipschitz, drift_bound): (EvalFn, EvalFn, f64, f64) = match shape {
        ProfileShape::Constant => (Arc::new(move |_| base), Arc::new(|_| 0.0), 0.0, 0.0),
        ProfileShape::RadialBump => {
            // d/dt (1-t²)³ = -6t(1-t²)², max |·| = 6√(1/5)(4/5)² ≈ 1.7174
            let slope = 6.0 * (0.2f64).sqrt() * 0.64;
            let value = move |x: &[f64]| {
                let t = norm(x) / scale;
                if t >= 1.0 {
                    base
                } else {
                    let s = 1.0 - t * t;
                    base + amplitude * s * s * s
                }
            };
            let drift = move |x: &[f64]| {
                let r = norm(x);
                let t = r / scale;
                if t >= 1.0 {
                    0.0
                } else {
                    let s = 1.0 - t * t;
                    // r · d/dr value = r · amplitude · (-6t s²)/scale
                    r * amplitude * (-6.0 * t * s * s) / scale
                }
            };
            (
                Arc::new(value),
                Arc::new(drift),
                amplitude.abs() * slope / scale,
                amplitude.abs() * slope, // |r·p'| ≤ scale·max|p'|
            )
        }
        ProfileShape::Plateau => {
            let value = move |x: &[f64]| base + amplitude * smoothstep_quintic(norm(x) / scale);
            let drift = move |x: &[f64]| {
                let r = norm(x);
                r * amplitude * smoothstep_quintic_deriv(r / scale) / scale
            };
            (
                Arc::new(value),
                Arc::new(drift),
                amplitude.abs() * SMOOTHSTEP_SLOPE / scale,
                amplitude.abs() * SMOOTHSTEP_SLOPE,
            )
        }
    };
    Ok(ExponentField {
        kind: ExponentKind::Radial,
        label,
        eval,
        drift,
        lipschitz,
        drift_bound,
    })
}

/// Cutoff-class exponent p̃(x) = (1−η(|x|))·p0 + η(|x|)·inner(x) with η the
/// radial quintic cutoff on [r₀, 2r₀].
///
/// The drift is assembled analytically:
/// x·∇p̃ = |x| η'(|x|) (inner(x) − p0) + η(|x|) · (x·∇inner),
/// so it vanishes identically for |x| ≤ r₀ and, provided the inner drift
/// dies off by 2r₀ (contract of the profile registry), for |x| ≥ 2r₀ too.
pub fn make_class_p_exponent(p0: f64, inner: &ExponentField, r0: f64) -> Result<ExponentField> {
    if !(p0 > 1.0) {
        return Err(VardError::config(
            "(p_H)",
            format!("blend constant must exceed 1, got {p0}"),
        ));
    }
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(VardError::config(
            "class_P",
            format!("cutoff radius must be positive, got {r0}"),
        ));
    }
    // Probe the blended range and the inner drift contract on a dense radial
    // sample; analytic bounds are not available for arbitrary inner fields.
    let mut inner_lo = f64::INFINITY;
    let mut inner_hi = f64::NEG_INFINITY;
    let mut inner_dev = 0.0f64; // max |inner - p0| (enters the drift bound)
    for i in 0..=4096 {
        let r = 4.0 * r0 * i as f64 / 4096.0;
        let v = inner.evaluate(&[r, 0.0, 0.0]);
        if !v.is_finite() {
            return Err(VardError::config(
                "class_P",
                format!("inner exponent non-finite at r={r}"),
            ));
        }
        inner_lo = inner_lo.min(v);
        inner_hi = inner_hi.max(v);
        inner_dev = inner_dev.max((v - p0).abs());
        if r >= 2.0 * r0 {
            let d = inner.radial_drift(&[r, 0.0, 0.0]);
            if d.abs() > 1e-12 {
                return Err(VardError::config(
                    "class_P",
                    format!("inner drift must vanish for |x| >= 2 r0; found {d} at r={r}"),
                ));
            }
        }
    }
    if !(inner_lo.min(p0) > 1.0) {
        return Err(VardError::config(
            "(p_H)",
            format!("blended exponent range [{}, {}] leaves (1, N)", inner_lo.min(p0), inner_hi.max(p0)),
        ));
    }

    let label = format!("class_P(p0={p0}, inner={}, r0={r0})", inner.label);
    let inner_eval = inner.clone();
    let inner_drift = inner.clone();
    let eval = move |x: &[f64]| {
        let r = norm(x);
        let (eta, _) = cutoff_eta(r, r0);
        (1.0 - eta) * p0 + eta * inner_eval.evaluate(x)
    };
    let drift = move |x: &[f64]| {
        let r = norm(x);
        let (eta, eta_d) = cutoff_eta(r, r0);
        r * eta_d * (inner_drift.evaluate(x) - p0) + eta * inner_drift.radial_drift(x)
    };
    // |r η'| ≤ 2r₀·(15/8)/r₀ = 15/4 on the annulus
    let drift_bound = 2.0 * SMOOTHSTEP_SLOPE * inner_dev + inner.drift_bound;
    let lipschitz =
        SMOOTHSTEP_SLOPE / r0 * inner_dev + inner.lipschitz;
    Ok(ExponentField {
        kind: ExponentKind::ClassP,
        label,
        eval: Arc::new(eval),
        drift: Arc::new(drift),
        lipschitz,
        drift_bound,
    })
}

/// Fully custom exponent (tests and programmatic callers): the caller owns
/// consistency between `eval` and `drift`.
pub fn make_custom_exponent(
    label: impl Into<String>,
    eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    drift: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    lipschitz: f64,
    drift_bound: f64,
) -> ExponentField {
    ExponentField {
        kind: ExponentKind::Custom,
        label: label.into(),
        eval: Arc::new(eval),
        drift: Arc::new(drift),
        lipschitz,
        drift_bound,
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Admissibility of an exponent pair on a grid: bounds, the Sobolev gap
/// inf(p*(x) − q(x)), and the growth conditions.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub p_minus: f64,
    pub p_plus: f64,
    pub q_minus: f64,
    pub q_plus: f64,
    /// inf over nodes of p*(x) − q(x), with p* = Np/(N−p) where p < N and
    /// +∞ otherwise (serialized as null in JSON).
    pub sobolev_gap: f64,
    /// 1 < p⁻ ≤ p⁺ < N.
    pub cond_ph: bool,
    /// k > 0, q > p pointwise, and positive Sobolev gap.
    pub cond_qh: bool,
    /// q⁻ > p⁺ + (p⁺)²/N with positive gap.
    pub cond_q1: bool,
    /// q⁻ > 2p⁺ − p⁻ + p⁺p⁻/N with positive gap.
    pub cond_q2: bool,
    /// The two q⁻ lower bounds, in the order (q1, q2).
    pub thresholds: (f64, f64),
}

/// Compute the admissibility report. Hard errors only for structurally
/// broken inputs (empty grid, non-finite samples, k ≤ 0, q ≤ p somewhere,
/// p ≤ 1); the growth conditions are reported as booleans and gated by the
/// caller (see [`solve_gate`]).
pub fn check_admissibility(
    p: &ExponentField,
    q: &ExponentField,
    dim: usize,
    k: f64,
    grid: &Grid,
) -> Result<AdmissibilityReport> {
    if grid.is_empty() {
        return Err(VardError::config("grid", "empty grid"));
    }
    if !(k > 0.0) {
        return Err(VardError::config(
            "k>0",
            format!("confinement power must be positive, got {k}"),
        ));
    }
    let n = dim as f64;
    let mut p_minus = f64::INFINITY;
    let mut p_plus = f64::NEG_INFINITY;
    let mut q_minus = f64::INFINITY;
    let mut q_plus = f64::NEG_INFINITY;
    let mut gap = f64::INFINITY;
    let mut ordering_ok = true;
    for i in 0..grid.len() {
        let x = grid.node(i);
        let pv = p.evaluate(x);
        let qv = q.evaluate(x);
        if !pv.is_finite() || !qv.is_finite() {
            return Err(VardError::numeric(
                "check_admissibility",
                format!("non-finite exponent at node {i}"),
            ));
        }
        p_minus = p_minus.min(pv);
        p_plus = p_plus.max(pv);
        q_minus = q_minus.min(qv);
        q_plus = q_plus.max(qv);
        if qv <= pv {
            ordering_ok = false;
        }
        let p_star = if pv < n { n * pv / (n - pv) } else { f64::INFINITY };
        gap = gap.min(p_star - qv);
    }
    if !(p_minus > 1.0) {
        return Err(VardError::config(
            "(p_H)",
            format!("need inf p > 1, got {p_minus}"),
        ));
    }
    if !ordering_ok {
        return Err(VardError::config(
            "(q_H)",
            "need q(x) > p(x) at every node",
        ));
    }
    let t1 = p_plus + p_plus * p_plus / n;
    let t2 = 2.0 * p_plus - p_minus + p_plus * p_minus / n;
    Ok(AdmissibilityReport {
        p_minus,
        p_plus,
        q_minus,
        q_plus,
        sobolev_gap: gap,
        cond_ph: p_minus > 1.0 && p_plus < n,
        cond_qh: k > 0.0 && ordering_ok && gap > 0.0,
        cond_q1: q_minus > t1 && gap > 0.0,
        cond_q2: q_minus > t2 && gap > 0.0,
        thresholds: (t1, t2),
    })
}

/// Gate a report before a solve. Returns warnings for conditions that the
/// desk-scale configurations legitimately relax; errors when the growth
/// condition fails in the regime where it is binding (p⁺ < N, so the
/// Sobolev ceiling is finite and the small-mass analysis needs cond_q1).
pub fn solve_gate(report: &AdmissibilityReport, dim: usize) -> Result<Vec<String>> {
    let mut warnings = Vec::new();
    let n = dim as f64;
    if report.p_plus < n && !report.cond_q1 {
        return Err(VardError::config(
            "cond_q1",
            format!(
                "q- = {} must exceed p+ + (p+)^2/N = {}",
                report.q_minus, report.thresholds.0
            ),
        ));
    }
    if !report.cond_ph {
        warnings.push(format!(
            "(p_H) not satisfied in dimension {dim}: p range [{}, {}] is not inside (1, {dim}); \
             proceeding (truncated problem remains well posed)",
            report.p_minus, report.p_plus
        ));
    }
    if !report.cond_q1 {
        warnings.push(format!(
            "cond_q1 not satisfied (q- = {} <= {}); small-mass threshold guarantees do not apply",
            report.q_minus, report.thresholds.0
        ));
    }
    if !report.cond_q2 {
        warnings.push(format!(
            "cond_q2 not satisfied (q- = {} <= {}); positivity-bracket guarantees do not apply",
            report.q_minus, report.thresholds.1
        ));
    }
    Ok(warnings)
}
