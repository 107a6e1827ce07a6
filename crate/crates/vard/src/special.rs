//! Small special-function helpers: Γ(x) and unit-sphere areas.
//!
//! The threshold constants need Γ at arguments in roughly [0.5, 6]; libm's
//! `tgamma` (musl port) is accurate to a couple of ulp there, far inside the
//! 1e-12 relative accuracy the closed-form constants require.

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "gamma: argument must be positive, got {x}");
    libm::tgamma(x)
}

/// Surface area ω_N of the unit sphere S^{N-1} in ℝ^N: ω_N = 2 π^{N/2} / Γ(N/2).
///
/// ω_1 = 2 (two half-lines), ω_2 = 2π, ω_3 = 4π.
pub fn unit_sphere_area(n: usize) -> f64 {
    debug_assert!((1..=3).contains(&n), "unit_sphere_area: N must be 1..=3");
    let nh = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(nh) / gamma(nh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Exact values at integers and half-integers spanning the argument
    /// range used by the Gaussian moment constants.
    #[test]
    fn gamma_matches_exact_values() {
        let sqrt_pi = PI.sqrt();
        let cases = [
            (0.5, sqrt_pi),
            (1.0, 1.0),
            (1.5, sqrt_pi / 2.0),
            (2.0, 1.0),
            (2.5, 3.0 * sqrt_pi / 4.0),
            (3.0, 2.0),
            (3.5, 15.0 * sqrt_pi / 8.0),
            (4.0, 6.0),
            (4.5, 105.0 * sqrt_pi / 16.0),
            (5.0, 24.0),
            (6.0, 120.0),
        ];
        for (x, exact) in cases {
            let rel = (gamma(x) - exact).abs() / exact;
            assert!(rel <= 1e-13, "gamma({x}) off by {rel:.3e}");
        }
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0).abs() <= 1e-14);
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() <= 1e-13);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() <= 1e-13);
    }
}
