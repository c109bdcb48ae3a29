//! Gauss–Legendre rules and the geometrically graded composite rules used for
//! every endpoint-singular integral in the crate.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

const MAX_ORDER: usize = 64;

/// Cached Gauss–Legendre rule of the given order (1..=64).
pub fn gauss_legendre(order: usize) -> &'static GaussRule {
    static RULES: [OnceLock<GaussRule>; MAX_ORDER + 1] = [const { OnceLock::new() }; MAX_ORDER + 1];
    assert!((1..=MAX_ORDER).contains(&order), "unsupported Gauss order {order}");
    RULES[order].get_or_init(|| compute_gauss_legendre(order))
}

fn compute_gauss_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Composite Gauss rule on an interval [a, b] split into `pieces` equal cells.
pub fn composite(a: f64, b: f64, pieces: usize, order: usize) -> Vec<(f64, f64)> {
    let rule = gauss_legendre(order);
    let h = (b - a) / pieces as f64;
    let mut out = Vec::with_capacity(pieces * order);
    for p in 0..pieces {
        let lo = a + h * p as f64;
        let half = 0.5 * h;
        let mid = lo + half;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            out.push((mid + half * x, half * w));
        }
    }
    out
}

/// Quadrature nodes in a distance variable `s ∈ (floor, 1]`, graded toward
/// `s = 0`: cells [2^{-k-1}, 2^{-k}] for k < depth, each split into `subdiv`
/// equal pieces. The uncovered piece [0, floor] with `floor = 2^{-depth}` is
/// left to the caller.
#[derive(Debug, Clone)]
pub struct GradedRule {
    /// (s, weight) pairs, in order of decreasing s.
    pub points: Vec<(f64, f64)>,
    pub floor: f64,
}

pub fn graded_toward_zero(depth: u32, subdiv: usize, order: usize) -> GradedRule {
    let mut points = Vec::with_capacity(depth as usize * subdiv * order);
    for k in 0..depth {
        let hi = (-(k as f64)).exp2();
        let lo = 0.5 * hi;
        points.extend(composite(lo, hi, subdiv, order).into_iter().rev());
    }
    GradedRule {
        points,
        floor: (-(depth as f64)).exp2(),
    }
}

/// Angular nodes (θ, weight) for a 2π-periodic integrand peaked at θ = 0 with
/// width of order `scale`. Cells are geometric in |θ| from π down to below
/// `scale / 8`; the innermost cell [0, π 2^{-K}] is a plain Gauss cell.
/// With `even = true` only θ ∈ [0, π] is covered and weights are doubled.
/// Weights always sum to 2π.
pub fn angular_graded(scale: f64, order: usize, even: bool) -> Vec<(f64, f64)> {
    let scale = scale.clamp(1e-300, 1.0);
    let levels = ((8.0 * PI / scale).log2().ceil().max(1.0)) as u32;
    let mut half = Vec::with_capacity((levels as usize + 1) * order);
    for k in 0..levels {
        let hi = PI * (-(k as f64)).exp2();
        half.extend(composite(0.5 * hi, hi, 1, order));
    }
    half.extend(composite(0.0, PI * (-(levels as f64)).exp2(), 1, order));
    if even {
        half.into_iter().map(|(t, w)| (t, 2.0 * w)).collect()
    } else {
        let mut all = Vec::with_capacity(2 * half.len());
        all.extend(half.iter().map(|&(t, w)| (-t, w)));
        all.extend(half);
        all
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 12, 20, 32] {
            let r = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let approx: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(x, w)| w * x.powi(deg as i32))
                    .sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn graded_rule_covers_interval() {
        let g = graded_toward_zero(40, 2, 10);
        let total: f64 = g.points.iter().map(|p| p.1).sum();
        assert!((total + g.floor - 1.0).abs() < 1e-14);
        // ∫_0^1 s^{-1/2} ds = 2 on the graded cells plus the exact floor piece
        let v: f64 = g.points.iter().map(|&(s, w)| w / s.sqrt()).sum::<f64>() + 2.0 * g.floor.sqrt();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn angular_weights_sum_to_two_pi() {
        for even in [false, true] {
            let nodes = angular_graded(1e-5, 12, even);
            let total: f64 = nodes.iter().map(|n| n.1).sum();
            assert!((total - 2.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn angular_rule_resolves_poisson_kernel() {
        // (1/2π)∫ (1−r²)/|1−re^{iθ}|² dθ = 1 for every r < 1
        let s = 2f64.powi(-20);
        let r = 1.0 - s;
        let nodes = angular_graded(s, 16, true);
        let mean: f64 = nodes
            .iter()
            .map(|&(t, w)| {
                let d2 = s * s + 4.0 * r * (0.5 * t).sin().powi(2);
                w * s * (2.0 - s) / d2
            })
            .sum::<f64>()
            / (2.0 * PI);
        assert!((mean - 1.0).abs() < 1e-12, "{mean}");
    }
}
