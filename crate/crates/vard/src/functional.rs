//! The constrained energy functional and its discrete gradients.
//!
//! The gradient term of the energy is discretized on the dual edge mesh:
//! E_grad = Σ_e W_e |D_e u|^{p(x_e)} / p(x_e) with D_e the two-point
//! difference across edge e (ghost values zero). Differentiating this sum
//! exactly in the node values gives the discrete Euler–Lagrange operator, so
//! gradient/energy consistency holds to roundoff by construction, and at
//! p ≡ 2 the gradient is the classical tridiagonal −Δ stencil. Node-centered
//! gradients (see [`crate::discretization::Grid::gradient`]) are reserved for
//! diagnostic quantities: ρ_X, the X norm, and interpolation ratios.

use crate::discretization::{Grid, ScalarField};
use crate::error::VardError;
use crate::exponents::{ExponentField, SampledExponent};
use crate::modular;
use crate::Result;
use serde::Serialize;

/// Gradient-term smoothing floor, used only when inf p < 2 where the
/// p-Laplacian's second derivative degenerates at ∇u = 0.
pub const GRAD_SMOOTHING: f64 = 1e-10;

/// One variational problem instance: grid, exponent samples, confinement
/// weights. Immutable; built once and shared by solver, reports, and tests.
pub struct Problem {
    pub grid: Grid,
    pub k: f64,
    pub p: SampledExponent,
    pub q: SampledExponent,
    /// |x_i|^k per node.
    pub confine: Vec<f64>,
    /// Smoothing ε inside the p-power of the gradient term (0 when inf p ≥ 2).
    pub eps: f64,
    pub p_field: ExponentField,
    pub q_field: ExponentField,
}

/// Energy components of one field. `energy` is assembled from the three
/// terms in one expression, so the identity energy = grad + confine −
/// nonlinear holds to machine precision.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    /// ∫ |∇u|^{p(x)}/p(x).
    pub grad_term: f64,
    /// ∫ |x|^k |u|^{p(x)}/p(x).
    pub confine_term: f64,
    /// ∫ |u|^{q(x)}/q(x).
    pub nonlinear_term: f64,
    pub energy: f64,
    /// ∫ |u|^{p(x)}/p(x).
    pub mass: f64,
    pub norm_x: f64,
    pub modular_x: f64,
}

/// Interpolation-inequality diagnostics: ‖u‖_q against ‖u‖_p^{1−α}‖∇u‖_p^α.
/// Only the ratio is reported; no constant is assumed.
#[derive(Debug, Clone, Serialize)]
pub struct GNReport {
    /// Scalar convention N(1/p⁺ − 1/q⁻).
    pub alpha: f64,
    pub lhs: f64,
    pub rhs_base: f64,
    pub ratio: f64,
}

/// sign(u)·|u|^{p−1}; continuous at 0 for every p > 1.
fn spow(u: f64, p: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u.signum() * u.abs().powf(p - 1.0)
    }
}

impl Problem {
    pub fn new(grid: Grid, p_field: ExponentField, q_field: ExponentField, k: f64) -> Result<Self> {
        if !k.is_finite() || k < 0.0 {
            return Err(VardError::config(
                "k>0",
                format!("confinement power must be finite and nonnegative, got {k}"),
            ));
        }
        let p = p_field.sample(&grid);
        let q = q_field.sample(&grid);
        if !(p.min > 1.0) {
            return Err(VardError::config(
                "(p_H)",
                format!("inf p = {} must exceed 1", p.min),
            ));
        }
        let confine: Vec<f64> = if k == 0.0 {
            vec![1.0; grid.len()]
        } else {
            grid.radius.iter().map(|r| r.powf(k)).collect()
        };
        let eps = if p.min < 2.0 { GRAD_SMOOTHING } else { 0.0 };
        Ok(Problem {
            grid,
            k,
            p,
            q,
            confine,
            eps,
            p_field,
            q_field,
        })
    }

    /// |t|^p, smoothed to (t²+ε²)^{p/2} − ε^p when ε > 0 (zero at t = 0
    /// either way).
    fn phi(&self, t: f64, p: f64) -> f64 {
        if self.eps == 0.0 {
            if t == 0.0 {
                0.0
            } else {
                t.abs().powf(p)
            }
        } else {
            let e2 = self.eps * self.eps;
            (t * t + e2).powf(0.5 * p) - self.eps.powf(p)
        }
    }

    /// dφ/dt: sign(t)|t|^{p−1}, or t(t²+ε²)^{(p−2)/2} when smoothed.
    fn phi_prime(&self, t: f64, p: f64) -> f64 {
        if self.eps == 0.0 {
            spow(t, p)
        } else {
            let e2 = self.eps * self.eps;
            t * (t * t + e2).powf(0.5 * p - 1.0)
        }
    }

    /// (grad_term, confine_term, nonlinear_term).
    pub fn energy_terms(&self, u: &ScalarField) -> (f64, f64, f64) {
        let mut grad = 0.0;
        for (e, &pe) in self.grid.edges.iter().zip(&self.p.edge) {
            let d = self.grid.edge_difference(u, e);
            grad += e.weight * self.phi(d, pe) / pe;
        }
        let mut confine = 0.0;
        let mut nonlinear = 0.0;
        for i in 0..self.grid.len() {
            let a = u.values[i].abs();
            if a == 0.0 {
                continue;
            }
            let w = self.grid.weights[i];
            confine += w * self.confine[i] * a.powf(self.p.node[i]) / self.p.node[i];
            nonlinear += w * a.powf(self.q.node[i]) / self.q.node[i];
        }
        (grad, confine, nonlinear)
    }

    pub fn energy(&self, u: &ScalarField) -> f64 {
        let (g, c, n) = self.energy_terms(u);
        g + c - n
    }

    /// ∫ |u|^{p(x)}/p(x).
    pub fn mass(&self, u: &ScalarField) -> f64 {
        let mut m = 0.0;
        for i in 0..self.grid.len() {
            let a = u.values[i].abs();
            if a > 0.0 {
                m += self.grid.weights[i] * a.powf(self.p.node[i]) / self.p.node[i];
            }
        }
        m
    }

    /// Edge-based gradient modular Σ_e W_e |D_e u|^{p(x_e)} (the modular the
    /// energy and its gradient are built from; satisfies the discrete weak
    /// form ⟨∇E(u), u⟩ = ρ_grad + ρ_confine − ρ_q exactly).
    pub fn gradient_modular_edge(&self, u: &ScalarField) -> f64 {
        let mut rho = 0.0;
        for (e, &pe) in self.grid.edges.iter().zip(&self.p.edge) {
            let d = self.grid.edge_difference(u, e);
            rho += e.weight * self.phi(d, pe);
        }
        rho
    }

    /// ∫ |x|^k |u|^{p(x)} (confinement modular, no 1/p factor).
    pub fn confine_modular(&self, u: &ScalarField) -> f64 {
        let mut m = 0.0;
        for i in 0..self.grid.len() {
            let a = u.values[i].abs();
            if a > 0.0 {
                m += self.grid.weights[i] * self.confine[i] * a.powf(self.p.node[i]);
            }
        }
        m
    }

    /// ∫ |u|^{p(x)} (plain p-modular, no 1/p factor).
    pub fn mass_modular(&self, u: &ScalarField) -> f64 {
        let mut m = 0.0;
        for i in 0..self.grid.len() {
            let a = u.values[i].abs();
            if a > 0.0 {
                m += self.grid.weights[i] * a.powf(self.p.node[i]);
            }
        }
        m
    }

    /// ∫ |u|^{q(x)} (enters the coercivity fingerprint).
    pub fn nonlinear_modular(&self, u: &ScalarField) -> f64 {
        let mut m = 0.0;
        for i in 0..self.grid.len() {
            let a = u.values[i].abs();
            if a > 0.0 {
                m += self.grid.weights[i] * a.powf(self.q.node[i]);
            }
        }
        m
    }

    /// Full report including the diagnostic X-space quantities.
    pub fn energy_report(&self, u: &ScalarField) -> Result<EnergyReport> {
        let (grad_term, confine_term, nonlinear_term) = self.energy_terms(u);
        Ok(EnergyReport {
            grad_term,
            confine_term,
            nonlinear_term,
            energy: grad_term + confine_term - nonlinear_term,
            mass: self.mass(u),
            norm_x: modular::norm_x(&self.grid, u, &self.p_field, self.k)?,
            modular_x: modular::modular_x(&self.grid, u, &self.p_field, self.k),
        })
    }

    /// The three gradient parts (grad-term, confine-term, nonlinear-term),
    /// each divided by the node quadrature weight so that
    /// d/dt E(u + tδ)|₀ = ⟨part sum, δ⟩ under [`Grid::inner`].
    pub fn energy_gradient_parts(&self, u: &ScalarField) -> [ScalarField; 3] {
        let n = self.grid.len();
        let mut grad = vec![0.0; n];
        for (e, &pe) in self.grid.edges.iter().zip(&self.p.edge) {
            let d = self.grid.edge_difference(u, e);
            if d == 0.0 && self.eps == 0.0 {
                continue;
            }
            let f = e.weight * self.phi_prime(d, pe) / self.grid.h;
            if let Some(i) = e.hi {
                grad[i] += f;
            }
            if let Some(i) = e.lo {
                grad[i] -= f;
            }
        }
        let mut confine = vec![0.0; n];
        let mut nonlinear = vec![0.0; n];
        for i in 0..n {
            grad[i] /= self.grid.weights[i];
            confine[i] = self.confine[i] * spow(u.values[i], self.p.node[i]);
            nonlinear[i] = spow(u.values[i], self.q.node[i]);
        }
        [
            ScalarField { values: grad },
            ScalarField { values: confine },
            ScalarField { values: nonlinear },
        ]
    }

    /// Exact gradient of the discretized energy, weight-divided. Realizes
    /// the operator −Δ_{p(x)}u + |x|^k|u|^{p−2}u − |u|^{q−2}u on the grid.
    pub fn energy_gradient(&self, u: &ScalarField) -> ScalarField {
        let [g, c, nl] = self.energy_gradient_parts(u);
        let values = (0..self.grid.len())
            .map(|i| g.values[i] + c.values[i] - nl.values[i])
            .collect();
        ScalarField { values }
    }

    /// Gradient of the mass functional: |u|^{p(x)−2}u per node.
    pub fn constraint_gradient(&self, u: &ScalarField) -> ScalarField {
        let values = (0..self.grid.len())
            .map(|i| spow(u.values[i], self.p.node[i]))
            .collect();
        ScalarField { values }
    }

    /// E(u) − (ρ_X/p⁺ − ρ_q/q⁻), evaluated with identical integrands on
    /// both sides (edge gradient, same smoothing), so the result is
    /// nonnegative up to roundoff for every field.
    pub fn coercivity_margin(&self, u: &ScalarField) -> f64 {
        let mut p_sup = self.p.max;
        let mut rho_grad = 0.0;
        let mut e_grad = 0.0;
        for (e, &pe) in self.grid.edges.iter().zip(&self.p.edge) {
            let d = self.grid.edge_difference(u, e);
            let v = e.weight * self.phi(d, pe);
            rho_grad += v;
            e_grad += v / pe;
            p_sup = p_sup.max(pe);
        }
        let mut rho_conf = 0.0;
        let mut e_conf = 0.0;
        let mut rho_q = 0.0;
        let mut e_nl = 0.0;
        for i in 0..self.grid.len() {
            let a = u.values[i].abs();
            if a == 0.0 {
                continue;
            }
            let w = self.grid.weights[i];
            let vp = w * self.confine[i] * a.powf(self.p.node[i]);
            rho_conf += vp;
            e_conf += vp / self.p.node[i];
            let vq = w * a.powf(self.q.node[i]);
            rho_q += vq;
            e_nl += vq / self.q.node[i];
        }
        let energy = e_grad + e_conf - e_nl;
        energy - ((rho_grad + rho_conf) / p_sup - rho_q / self.q.min)
    }

    /// Interpolation diagnostics with the scalar exponent convention
    /// α = N(1/p⁺ − 1/q⁻). Errors when ∇u vanishes identically.
    pub fn gn_ratio(&self, u: &ScalarField) -> Result<GNReport> {
        let alpha = self.grid.dim as f64 * (1.0 / self.p.max - 1.0 / self.q.min);
        let g = self.grid.gradient(u);
        let grad_norm = modular::luxemburg_root(
            &self.grid.weights,
            &self.p.node,
            &g.values,
            self.p.min,
            self.p.max,
        )?;
        if grad_norm == 0.0 {
            return Err(VardError::numeric(
                "gn_ratio",
                "gradient vanishes identically; ratio undefined",
            ));
        }
        let u_p = modular::luxemburg_root(
            &self.grid.weights,
            &self.p.node,
            &u.values,
            self.p.min,
            self.p.max,
        )?;
        let lhs = modular::luxemburg_root(
            &self.grid.weights,
            &self.q.node,
            &u.values,
            self.q.min,
            self.q.max,
        )?;
        let rhs_base = u_p.powf(1.0 - alpha) * grad_norm.powf(alpha);
        Ok(GNReport {
            alpha,
            lhs,
            rhs_base,
            ratio: lhs / rhs_base,
        })
    }
}

/// Scaling profile of the mass along t ↦ mass(t·u): m(t) = Σ a_i t^{p_i}
/// with a_i ≥ 0. Strictly increasing on (0, ∞) whenever u ≠ 0, so the mass
/// retraction has a unique positive root for every target.
pub struct MassScaling {
    terms: Vec<(f64, f64)>,
}

impl MassScaling {
    pub fn mass(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(a, p)| a * t.powf(p)).sum()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.terms.iter().map(|&(a, p)| a * p * t.powf(p - 1.0)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn mass_scaling(prob: &Problem, u: &ScalarField) -> MassScaling {
    let mut terms = Vec::new();
    for i in 0..prob.grid.len() {
        let a = u.values[i].abs();
        if a > 0.0 {
            let p = prob.p.node[i];
            terms.push((prob.grid.weights[i] * a.powf(p) / p, p));
        }
    }
    MassScaling { terms }
}

/// One-shot energy report (samples exponents on the fly; prefer [`Problem`]
/// for repeated evaluation).
pub fn energy(
    grid: &Grid,
    u: &ScalarField,
    p: &ExponentField,
    q: &ExponentField,
    k: f64,
) -> Result<EnergyReport> {
    Problem::new(grid.clone(), p.clone(), q.clone(), k)?.energy_report(u)
}

/// ∫ |u|^{p(x)}/p(x) without constructing a [`Problem`].
pub fn mass(grid: &Grid, u: &ScalarField, p: &ExponentField) -> f64 {
    let s = p.sample(grid);
    let mut m = 0.0;
    for i in 0..grid.len() {
        let a = u.values[i].abs();
        if a > 0.0 {
            m += grid.weights[i] * a.powf(s.node[i]) / s.node[i];
        }
    }
    m
}

pub fn energy_gradient(
    grid: &Grid,
    u: &ScalarField,
    p: &ExponentField,
    q: &ExponentField,
    k: f64,
) -> Result<ScalarField> {
    Ok(Problem::new(grid.clone(), p.clone(), q.clone(), k)?.energy_gradient(u))
}

pub fn constraint_gradient(grid: &Grid, u: &ScalarField, p: &ExponentField) -> ScalarField {
    let s = p.sample(grid);
    let values = (0..grid.len())
        .map(|i| spow(u.values[i], s.node[i]))
        .collect();
    ScalarField { values }
}

pub fn gn_ratio(
    grid: &Grid,
    u: &ScalarField,
    p: &ExponentField,
    q: &ExponentField,
) -> Result<GNReport> {
    Problem::new(grid.clone(), p.clone(), q.clone(), 0.0)?.gn_ratio(u)
}
