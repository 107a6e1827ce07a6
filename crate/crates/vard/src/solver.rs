//! Projected gradient descent on S(c) ∩ B_σ.
//!
//! Iteration: take the energy gradient, remove its component along the mass
//! constraint gradient (Lagrange least squares), precondition with the fixed
//! linear operator T = −Δ_edge + (1 + |x|^k) — tridiagonal for radial and
//! one-dimensional tensor grids, conjugate gradients otherwise — re-project
//! the preconditioned direction onto the constraint tangent, then Armijo
//! backtracking with multiplicative mass retraction after every candidate.
//! T is symmetric positive definite in the quadrature inner product, so the
//! projected direction is a descent direction whenever the KKT residual is
//! nonzero; energy decreases monotonically along accepted steps.
//!
//! The ball constraint is monitored, not projected: candidates with
//! ‖u‖_X > σ are rejected and the step halved, since sub-threshold masses
//! keep the minimizer strictly inside the ball.

use crate::discretization::{Grid, GridMode, ScalarField};
use crate::error::VardError;
use crate::exponents::ExponentField;
use crate::functional::{mass_scaling, Problem};
use crate::modular;
use crate::thresholds::trial_function;
use crate::Result;
use serde::Serialize;

/// Iteration parameters for one solve.
#[derive(Debug, Clone)]
pub struct SolveParams {
    /// Mass level c > 0.
    pub c: f64,
    /// Ball radius σ > 0.
    pub sigma: f64,
    pub max_iters: usize,
    /// Initial Armijo step; 0 means evaluate the initial point and return.
    pub step0: f64,
    /// Backtracking factor in (0,1).
    pub armijo_beta: f64,
    /// Sufficient-decrease fraction in (0,1).
    pub armijo_tau: f64,
    /// Stop when ‖∇E − λ∇mass‖/‖∇E‖ falls below this.
    pub tol_kkt: f64,
    pub init: Init,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// Start from the Gaussian trial function at mass c.
    Trial,
    /// Start from a caller-supplied field (projected onto S(c) first).
    Custom(ScalarField),
}

impl SolveParams {
    pub fn new(c: f64, sigma: f64) -> Self {
        SolveParams {
            c,
            sigma,
            max_iters: 5000,
            step0: 1.0,
            armijo_beta: 0.5,
            armijo_tau: 1e-4,
            tol_kkt: 1e-4,
            init: Init::Trial,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) || !(self.sigma > 0.0) {
            return Err(VardError::config(
                "solve",
                format!("need c > 0 and sigma > 0, got c={}, sigma={}", self.c, self.sigma),
            ));
        }
        if !(self.armijo_beta > 0.0 && self.armijo_beta < 1.0)
            || !(self.armijo_tau > 0.0 && self.armijo_tau < 1.0)
        {
            return Err(VardError::config(
                "solve",
                "Armijo parameters must lie in (0,1)",
            ));
        }
        if self.step0 < 0.0 || !self.step0.is_finite() {
            return Err(VardError::config("solve", "step0 must be finite and >= 0"));
        }
        Ok(())
    }
}

/// One accepted iterate of the descent loop.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub energy: f64,
    pub mass_error: f64,
    pub kkt: f64,
    pub step: f64,
    pub norm_x: f64,
}

/// Converged (or stopped) state of one solve.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub u_c: ScalarField,
    pub lambda_c: f64,
    /// Final energy E(u_c).
    pub gamma_c: f64,
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Whether any accepted iterate sat on ‖u‖_X = σ (within 1e−9 σ).
    pub on_ball_boundary: bool,
    /// Steps rejected because the candidate left B_σ.
    pub ball_rejections: usize,
    pub trace: Vec<TraceRow>,
    pub warnings: Vec<String>,
}

/// Scale u multiplicatively onto the mass level c.
pub fn project_to_mass(prob: &Problem, u: &ScalarField, c: f64) -> Result<ScalarField> {
    let profile = mass_scaling(prob, u);
    if profile.is_zero() {
        return Err(VardError::numeric(
            "project_to_mass",
            "cannot project the zero field onto a positive mass level",
        ));
    }
    let mut lo = 1.0;
    let mut hi = 1.0;
    let mut guard = 0;
    while profile.mass(lo) > c && guard < 2000 {
        lo *= 0.5;
        guard += 1;
    }
    while profile.mass(hi) < c && guard < 4000 {
        hi *= 2.0;
        guard += 1;
    }
    if guard >= 4000 {
        return Err(VardError::numeric(
            "project_to_mass",
            "failed to bracket the mass scaling root",
        ));
    }
    let mut t = 0.5 * (lo + hi);
    let mut residual = f64::INFINITY;
    for _ in 0..200 {
        let m = profile.mass(t);
        residual = m - c;
        if residual.abs() <= 1e-13 * c {
            break;
        }
        if residual > 0.0 {
            hi = hi.min(t);
        } else {
            lo = lo.max(t);
        }
        let next = t - residual / profile.derivative(t);
        t = if next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    if residual.abs() > 1e-10 * c {
        return Err(VardError::numeric(
            "project_to_mass",
            format!("mass residual {residual:e} after projection"),
        ));
    }
    Ok(ScalarField {
        values: u.values.iter().map(|v| v * t).collect(),
    })
}

/// Least-squares Lagrange multiplier: λ = ⟨g, gm⟩/⟨gm, gm⟩ in the quadrature
/// inner product, with the relative stationarity residual ‖g − λgm‖/‖g‖.
pub fn least_squares_multiplier(
    grid: &Grid,
    g: &ScalarField,
    gm: &ScalarField,
) -> Result<(f64, f64)> {
    let gm_sq = grid.inner(gm, gm);
    if gm_sq == 0.0 {
        return Err(VardError::numeric(
            "recover_multiplier",
            "constraint gradient vanishes identically",
        ));
    }
    let lambda = grid.inner(g, gm) / gm_sq;
    let g_norm = grid.norm_l2(g);
    let residual = ScalarField {
        values: (0..g.len())
            .map(|i| g.values[i] - lambda * gm.values[i])
            .collect(),
    };
    let rel = if g_norm == 0.0 {
        0.0
    } else {
        grid.norm_l2(&residual) / g_norm
    };
    Ok((lambda, rel))
}

/// Multiplier recovery for a field under a problem instance.
pub fn recover_multiplier(prob: &Problem, u: &ScalarField) -> Result<(f64, f64)> {
    let g = prob.energy_gradient(u);
    let gm = prob.constraint_gradient(u);
    least_squares_multiplier(&prob.grid, &g, &gm)
}

/// Weak-form multiplier: λ = (∫|∇u|^p + ∫|x|^k|u|^p − ∫|u|^q)/∫|u|^p, using
/// the same edge-based gradient modular as the energy, so the identity
/// ⟨∇E(u), u⟩ = λ_weak·⟨∇mass(u), u⟩ holds by construction.
pub fn weak_form_multiplier(prob: &Problem, u: &ScalarField) -> Result<f64> {
    let g = prob.energy_gradient(u);
    let gm = prob.constraint_gradient(u);
    let denom = prob.grid.inner(&gm, u);
    if denom == 0.0 {
        return Err(VardError::numeric(
            "weak_form_multiplier",
            "∫|u|^p vanishes; weak form undefined",
        ));
    }
    Ok(prob.grid.inner(&g, u) / denom)
}

/// ‖∇E(u) − λ·∇mass(u)‖ / ‖∇E(u)‖ in the quadrature norm. Returns 0 when
/// both gradients vanish and +∞ when only ∇E does.
pub fn kkt_residual(prob: &Problem, u: &ScalarField, lambda: f64) -> f64 {
    let g = prob.energy_gradient(u);
    let gm = prob.constraint_gradient(u);
    let g_norm = prob.grid.norm_l2(&g);
    let residual = ScalarField {
        values: (0..g.len())
            .map(|i| g.values[i] - lambda * gm.values[i])
            .collect(),
    };
    let r_norm = prob.grid.norm_l2(&residual);
    if g_norm == 0.0 {
        if r_norm == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        r_norm / g_norm
    }
}

/// Fixed preconditioner T = −Δ_edge + diag(1 + |x|^k), stored in the
/// weight-symmetrized form W·T (symmetric positive definite).
enum Preconditioner {
    /// Chain grids: symmetric tridiagonal, solved by the Thomas algorithm.
    Tridiag { diag: Vec<f64>, off: Vec<f64> },
    /// General grids: Jacobi-preconditioned conjugate gradients on W·T.
    Conjugate { diag: Vec<f64> },
}

fn apply_wt(prob: &Problem, y: &[f64], out: &mut [f64]) {
    let grid = &prob.grid;
    for i in 0..grid.len() {
        out[i] = grid.weights[i] * (1.0 + prob.confine[i]) * y[i];
    }
    let h2 = grid.h * grid.h;
    for e in &grid.edges {
        let lo = e.lo.map_or(0.0, |i| y[i]);
        let hi = e.hi.map_or(0.0, |i| y[i]);
        let f = e.weight * (hi - lo) / h2;
        if let Some(i) = e.hi {
            out[i] += f;
        }
        if let Some(i) = e.lo {
            out[i] -= f;
        }
    }
}

fn build_preconditioner(prob: &Problem) -> Preconditioner {
    let grid = &prob.grid;
    let n = grid.len();
    let h2 = grid.h * grid.h;
    let chain = matches!(grid.mode, GridMode::Radial) || grid.dim == 1;
    let mut diag: Vec<f64> = (0..n)
        .map(|i| grid.weights[i] * (1.0 + prob.confine[i]))
        .collect();
    if chain {
        let mut off = vec![0.0; n.saturating_sub(1)];
        for e in &grid.edges {
            match (e.lo, e.hi) {
                (Some(i), Some(j)) => {
                    diag[i] += e.weight / h2;
                    diag[j] += e.weight / h2;
                    off[i.min(j)] = -e.weight / h2;
                }
                (Some(i), None) | (None, Some(i)) => diag[i] += e.weight / h2,
                (None, None) => {}
            }
        }
        Preconditioner::Tridiag { diag, off }
    } else {
        for e in &grid.edges {
            if let Some(i) = e.lo {
                diag[i] += e.weight / h2;
            }
            if let Some(i) = e.hi {
                diag[i] += e.weight / h2;
            }
        }
        Preconditioner::Conjugate { diag }
    }
}

/// Solve (W·T) y = rhs. The Thomas path is exact; the CG path iterates to
/// relative residual 1e−10 with a fixed summation order, so repeated runs
/// are bit-identical.
fn solve_wt(prob: &Problem, pre: &Preconditioner, rhs: &[f64]) -> Vec<f64> {
    match pre {
        Preconditioner::Tridiag { diag, off } => {
            let n = rhs.len();
            let mut c = vec![0.0; n];
            let mut d = vec![0.0; n];
            let mut y = vec![0.0; n];
            c[0] = off.first().copied().unwrap_or(0.0) / diag[0];
            d[0] = rhs[0] / diag[0];
            for i in 1..n {
                let denom = diag[i] - off[i - 1] * c[i - 1];
                if i < n - 1 {
                    c[i] = off[i] / denom;
                }
                d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
            }
            y[n - 1] = d[n - 1];
            for i in (0..n - 1).rev() {
                y[i] = d[i] - c[i] * y[i + 1];
            }
            y
        }
        Preconditioner::Conjugate { diag } => {
            let n = rhs.len();
            let mut y = vec![0.0; n];
            let mut r = rhs.to_vec();
            let mut z: Vec<f64> = r.iter().zip(diag).map(|(r, d)| r / d).collect();
            let mut p = z.clone();
            let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let rhs_norm: f64 = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
            if rhs_norm == 0.0 {
                return y;
            }
            let mut ap = vec![0.0; n];
            for _ in 0..10 * n {
                apply_wt(prob, &p, &mut ap);
                let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
                if pap <= 0.0 {
                    break;
                }
                let alpha = rz / pap;
                for i in 0..n {
                    y[i] += alpha * p[i];
                    r[i] -= alpha * ap[i];
                }
                let r_norm: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
                if r_norm <= 1e-10 * rhs_norm {
                    break;
                }
                for i in 0..n {
                    z[i] = r[i] / diag[i];
                }
                let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
                let beta = rz_new / rz;
                rz = rz_new;
                for i in 0..n {
                    p[i] = z[i] + beta * p[i];
                }
            }
            y
        }
    }
}

/// Cheap upper bound on ‖u‖_X from the two partial modulars; the exact
/// Luxemburg norms are computed only when this bound crowds σ.
fn norm_x_upper_bound(prob: &Problem, u: &ScalarField) -> f64 {
    let g = prob.grid.gradient(u);
    let part = |coef: &dyn Fn(usize) -> f64, v: &[f64]| -> f64 {
        let mut rho = 0.0;
        for i in 0..v.len() {
            let a = v[i].abs();
            if a > 0.0 {
                rho += coef(i) * a.powf(prob.p.node[i]);
            }
        }
        if rho == 0.0 {
            0.0
        } else {
            rho.powf(1.0 / prob.p.min).max(rho.powf(1.0 / prob.p.max))
        }
    };
    let w = &prob.grid.weights;
    part(&|i| w[i], &g.values) + part(&|i| w[i] * prob.confine[i], &u.values)
}

fn norm_x_exact(prob: &Problem, u: &ScalarField) -> Result<f64> {
    modular::norm_x(&prob.grid, u, &prob.p_field, prob.k)
}

/// Minimize E over S(c) ∩ B_σ. The caller is responsible for gating the
/// configuration through the admissibility checks first.
pub fn minimize(prob: &Problem, params: &SolveParams) -> Result<SolveResult> {
    params.validate()?;
    let grid = &prob.grid;
    let mut warnings = Vec::new();

    let init = match &params.init {
        Init::Trial => trial_function(params.c, &prob.p_field, grid)?.1,
        Init::Custom(u) => u.clone(),
    };
    let mut u = project_to_mass(prob, &init, params.c)?;
    let init_norm = norm_x_exact(prob, &u)?;
    if init_norm > params.sigma {
        warnings.push(format!(
            "initial point lies outside B_sigma: norm_X = {init_norm} > {}",
            params.sigma
        ));
    }

    let pre = build_preconditioner(prob);
    let mut energy = prob.energy(&u);
    let mut step = params.step0;
    let mut trace = Vec::new();
    let mut ball_rejections = 0usize;
    let mut on_ball_boundary = init_norm >= params.sigma * (1.0 - 1e-9);
    let mut converged = false;
    let mut lambda = 0.0;
    let mut kkt = f64::INFINITY;
    let mut iterations = 0;

    for iter in 0..params.max_iters {
        iterations = iter;
        if !energy.is_finite() {
            return Err(VardError::numeric(
                "minimize",
                format!("energy became non-finite at iteration {iter} (last kkt {kkt:e})"),
            ));
        }
        let g = prob.energy_gradient(&u);
        let gm = prob.constraint_gradient(&u);
        let gm_sq = grid.inner(&gm, &gm);
        if gm_sq == 0.0 {
            return Err(VardError::numeric(
                "minimize",
                "constraint gradient vanished during iteration",
            ));
        }
        lambda = grid.inner(&g, &gm) / gm_sq;
        let r = ScalarField {
            values: (0..grid.len())
                .map(|i| g.values[i] - lambda * gm.values[i])
                .collect(),
        };
        let g_norm = grid.norm_l2(&g);
        kkt = if g_norm == 0.0 {
            0.0
        } else {
            grid.norm_l2(&r) / g_norm
        };
        if kkt <= params.tol_kkt {
            converged = true;
            break;
        }
        if params.step0 == 0.0 {
            break;
        }

        // precondition and re-tangentialize: d ⊥ gm in the quadrature metric
        let rhs: Vec<f64> = (0..grid.len())
            .map(|i| grid.weights[i] * r.values[i])
            .collect();
        let y = solve_wt(prob, &pre, &rhs);
        let y_field = ScalarField { values: y };
        let beta = grid.inner(&y_field, &gm) / gm_sq;
        let d = ScalarField {
            values: (0..grid.len())
                .map(|i| y_field.values[i] - beta * gm.values[i])
                .collect(),
        };
        // F'(0) = −⟨r, d⟩ = −⟨r, T⁻¹r⟩ < 0 since T is SPD and r ⊥ gm
        let decrease = grid.inner(&r, &d);
        if decrease <= 0.0 {
            warnings.push(format!(
                "preconditioned direction lost descent at iteration {iter}; stopping"
            ));
            break;
        }

        let mut accepted = false;
        let mut backtracks = 0;
        while backtracks < 80 {
            let candidate = ScalarField {
                values: (0..grid.len())
                    .map(|i| u.values[i] - step * d.values[i])
                    .collect(),
            };
            let projected = match project_to_mass(prob, &candidate, params.c) {
                Ok(v) => v,
                Err(_) => {
                    step *= params.armijo_beta;
                    backtracks += 1;
                    continue;
                }
            };
            let e_new = prob.energy(&projected);
            if !e_new.is_finite() || e_new > energy - params.armijo_tau * step * decrease {
                step *= params.armijo_beta;
                backtracks += 1;
                continue;
            }
            // ball monitoring: exact norm only when the cheap bound crowds σ
            let mut norm_val = norm_x_upper_bound(prob, &projected);
            if norm_val > 0.9 * params.sigma {
                norm_val = norm_x_exact(prob, &projected)?;
                if norm_val > params.sigma {
                    ball_rejections += 1;
                    step *= params.armijo_beta;
                    backtracks += 1;
                    continue;
                }
            }
            if norm_val >= params.sigma * (1.0 - 1e-9) {
                on_ball_boundary = true;
            }
            u = projected;
            energy = e_new;
            trace.push(TraceRow {
                iter,
                energy,
                mass_error: (prob.mass(&u) - params.c).abs(),
                kkt,
                step,
                norm_x: norm_val,
            });
            step = (step * 2.0).min(1e8);
            accepted = true;
            break;
        }
        if !accepted {
            warnings.push(format!(
                "line search stalled at iteration {iter} (kkt {kkt:e}); returning best iterate"
            ));
            break;
        }
    }
    if converged {
        // refresh λ and the residual at the accepted final point
        let (l, rel) = recover_multiplier(prob, &u)?;
        lambda = l;
        kkt = rel;
    } else if params.step0 > 0.0 && iterations + 1 >= params.max_iters {
        warnings.push(format!(
            "not converged after {} iterations (kkt {kkt:e} > {})",
            params.max_iters, params.tol_kkt
        ));
    }
    let gamma_c = prob.energy(&u);
    Ok(SolveResult {
        lambda_c: lambda,
        gamma_c,
        kkt_residual: kkt,
        iterations,
        converged,
        on_ball_boundary,
        ball_rejections,
        trace,
        warnings,
        u_c: u,
    })
}

/// Bracket coefficient of the positivity inequality at convergence under the
/// stronger growth condition:
/// 1/p⁺ − (N(p⁺−p⁻)+p⁺p⁻)/(Np⁺(q⁻−p⁻)) − (p⁺−p⁻)/(p⁺(q⁻−p⁻)).
pub fn positivity_bracket(p_minus: f64, p_plus: f64, q_minus: f64, dim: usize) -> f64 {
    let n = dim as f64;
    1.0 / p_plus
        - (n * (p_plus - p_minus) + p_plus * p_minus) / (n * p_plus * (q_minus - p_minus))
        - (p_plus - p_minus) / (p_plus * (q_minus - p_minus))
}

/// Margin of E(u) ≥ bracket·ρ_X(u) − |R|·p⁻/(N(q⁻−p⁻)). Positive margin
/// means the inequality held.
pub fn positivity_margin(
    prob: &Problem,
    u: &ScalarField,
    remainder_abs: f64,
) -> (f64, f64) {
    let bracket = positivity_bracket(prob.p.min, prob.p.max, prob.q.min, prob.grid.dim);
    let rho_x = modular::modular_x(&prob.grid, u, &prob.p_field, prob.k);
    let slack = remainder_abs * prob.p.min / (prob.grid.dim as f64 * (prob.q.min - prob.p.min));
    let margin = prob.energy(u) - (bracket * rho_x - slack);
    (bracket, margin)
}

/// Convenience constructor used by tests and the run layer.
pub fn problem_for(
    grid: Grid,
    p: &ExponentField,
    q: &ExponentField,
    k: f64,
) -> Result<Problem> {
    Problem::new(grid, p.clone(), q.clone(), k)
}
