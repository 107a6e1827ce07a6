//! Numerical toolkit for mass-constrained ground states of the
//! variable-exponent problem
//!
//! ```text
//! -div(|∇u|^{p(x)-2}∇u) + |x|^k |u|^{p(x)-2}u = λ|u|^{p(x)-2}u + |u|^{q(x)-2}u   on ℝ^N,
//! ∫ |u|^{p(x)}/p(x) dx = c,
//! ```
//!
//! discretized on truncated radial or tensor grids. The crate provides
//!
//! * variable-exponent fields p(x), q(x) with analytic radial drift x·∇p
//!   ([`exponents`]),
//! * quadrature grids, scalar fields, and discrete gradients
//!   ([`discretization`]),
//! * modulars and Luxemburg norms of L^{p(x)} type together with the
//!   modular–norm comparison relations ([`modular`]),
//! * the constrained energy, its exact discrete gradient, and the
//!   Gagliardo–Nirenberg ratio diagnostic ([`functional`]),
//! * Gaussian trial functions and the admissible-mass thresholds built from
//!   them ([`thresholds`]),
//! * a projected-gradient solver with mass retraction and Armijo
//!   backtracking ([`solver`]),
//! * the variational identity checker with its annulus-supported remainder
//!   and regularity diagnostics ([`pohozaev`]),
//! * a JSON-configured CLI runner with deterministic outputs ([`config`],
//!   [`runner`]).

pub mod config;
pub mod discretization;
pub mod error;
pub mod exponents;
pub mod functional;
pub mod modular;
pub mod pohozaev;
pub mod runner;
pub mod solver;
pub mod special;
pub mod thresholds;

pub use error::VardError;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, VardError>;
