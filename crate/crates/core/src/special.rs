//! Gamma function with exact products at the integer and half-integer
//! arguments the kernel constants use.

use std::f64::consts::PI;

/// Gamma function for real `x`.
///
/// Positive integers up to 171 and positive half-integers are evaluated by the
/// factorial recursion; other arguments fall back to the Lanczos approximation
/// from `statrs` (relative error around 1e-15).
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 && x <= 171.0 {
        if x.fract() == 0.0 {
            return (1..x as u32).fold(1.0, |acc, k| acc * k as f64);
        }
        if (x - 0.5).fract() == 0.0 {
            // Γ(n + 1/2) = √π · Π_{k=1}^{n} (k − 1/2)
            let n = (x - 0.5) as u32;
            return (1..=n).fold(PI.sqrt(), |acc, k| acc * (k as f64 - 0.5));
        }
    }
    statrs::function::gamma::gamma(x)
}

/// Upper constant of the kernel-mean bracket for `c != 0`:
/// Γ(c)/Γ²((1+c)/2) for c > 0 and Γ(−c)/Γ²((1−c)/2) for c < 0.
pub fn kernel_mean_sharp_constant(c: f64) -> f64 {
    if c > 0.0 {
        gamma(c) / gamma((1.0 + c) / 2.0).powi(2)
    } else if c < 0.0 {
        gamma(-c) / gamma((1.0 - c) / 2.0).powi(2)
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_branches() {
        assert_eq!(gamma(1.0), 1.0);
        assert_eq!(gamma(5.0), 24.0);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-15);
        assert!((gamma(1.5) - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((gamma(2.5) - 0.75 * PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn generic_branch_matches_reflection() {
        // Γ(x)Γ(1−x) = π / sin(πx)
        for &x in &[0.1, 0.25, 0.3, 0.7, 0.9] {
            let lhs = gamma(x) * gamma(1.0 - x);
            let rhs = PI / (PI * x).sin();
            assert!((lhs / rhs - 1.0).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn sharp_constants() {
        assert!((kernel_mean_sharp_constant(2.0) - 4.0 / PI).abs() < 1e-15);
        assert_eq!(kernel_mean_sharp_constant(1.0), 1.0);
        assert_eq!(kernel_mean_sharp_constant(3.0), 2.0);
        // Γ(1/2)/Γ²(3/4) for c = −1/2
        let v = kernel_mean_sharp_constant(-0.5);
        assert!((v - 1.180_340_599_016_096).abs() < 1e-12);
    }
}
