//! Norm evaluators for the function spaces on the disk, the kernel means
//! I_c, the ℓ^q moment criterion and the dyadic-block comparison.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::analytic::{normalized_tail, CircleMeanSpec, Complex, TaylorSeries, Truncation};
use crate::error::{invalid, Error, Result};
use crate::grid::{gap, DiskPoint, GridConfig};
use crate::measure::RadialMeasure;
use crate::quadrature::{angular_graded, gauss_legendre};
use crate::special::gamma;

pub use crate::special::kernel_mean_sharp_constant;

const RADIAL_ORDER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpaceFamily {
    Bloch,
    Zygmund1,
    MeanLipschitz { p: f64, alpha: f64 },
    Hardy { q: f64 },
    Dirichlet { q: f64 },
    HardyLittlewood { q: f64 },
    Bq { q: f64 },
}

impl SpaceFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::MeanLipschitz { p, alpha } if !(p > 1.0 && p.is_finite() && alpha > 0.0 && alpha <= 1.0) => {
                invalid(format!("mean Lipschitz space needs 1 < p < ∞ and 0 < α ≤ 1, got p={p}, α={alpha}"))
            }
            Self::Hardy { q } | Self::Dirichlet { q } if !(q > 0.0 && q.is_finite()) => {
                invalid(format!("exponent must be positive and finite, got {q}"))
            }
            Self::HardyLittlewood { q } if !(q >= 1.0 && q.is_finite()) => invalid(format!("HL(q) needs q ≥ 1, got {q}")),
            Self::Bq { q } if !(q > 0.0 && q < 1.0) => invalid(format!("B_q needs 0 < q < 1, got {q}")),
            _ => Ok(()),
        }
    }

    /// True for the quasi-normed families (exponent below 1), where the
    /// triangle inequality does not hold.
    pub fn is_quasi_norm(&self) -> bool {
        match *self {
            Self::Hardy { q } | Self::Dirichlet { q } => q < 1.0,
            Self::Bq { .. } => true,
            _ => false,
        }
    }

    /// Parse `bloch`, `zygmund1`, `meanlip:p=<p>[,alpha=<α>]`, `hardy:q=<q>`,
    /// `dirichlet:q=<q>`, `hl:q=<q>` or `bq:q=<q>`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (name, params) = match text.split_once(':') {
            Some((n, p)) => (n, Some((p, n.len() + 1))),
            None => (text, None),
        };
        let lookup = |key: &str| -> Result<Option<f64>> {
            let Some((body, at)) = params else { return Ok(None) };
            let mut offset = at;
            for part in body.split(',') {
                if let Some((k, v)) = part.split_once('=') {
                    if k.trim() == key {
                        return v.trim().parse::<f64>().map(Some).map_err(|_| Error::Parse {
                            position: offset + k.len() + 1,
                            message: format!("'{}' is not a number", v.trim()),
                        });
                    }
                } else {
                    return Err(Error::Parse {
                        position: offset,
                        message: format!("expected key=value, got '{part}'"),
                    });
                }
                offset += part.len() + 1;
            }
            Ok(None)
        };
        let need = |key: &str| -> Result<f64> {
            lookup(key)?.ok_or_else(|| Error::Parse {
                position: text.len(),
                message: format!("space '{name}' needs parameter {key}=<value>"),
            })
        };
        let family = match name {
            "bloch" => Self::Bloch,
            "zygmund1" => Self::Zygmund1,
            "meanlip" => {
                let p = need("p")?;
                Self::MeanLipschitz {
                    p,
                    alpha: lookup("alpha")?.unwrap_or(1.0 / p),
                }
            }
            "hardy" => Self::Hardy { q: need("q")? },
            "dirichlet" => Self::Dirichlet { q: need("q")? },
            "hl" => Self::HardyLittlewood { q: need("q")? },
            "bq" => Self::Bq { q: need("q")? },
            other => {
                return Err(Error::Parse {
                    position: 0,
                    message: format!("unknown space '{other}'"),
                })
            }
        };
        family.validate()?;
        Ok(family)
    }
}

impl fmt::Display for SpaceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bloch => write!(f, "bloch"),
            Self::Zygmund1 => write!(f, "zygmund1"),
            Self::MeanLipschitz { p, alpha } => write!(f, "meanlip:p={p},alpha={alpha}"),
            Self::Hardy { q } => write!(f, "hardy:q={q}"),
            Self::Dirichlet { q } => write!(f, "dirichlet:q={q}"),
            Self::HardyLittlewood { q } => write!(f, "hl:q={q}"),
            Self::Bq { q } => write!(f, "bq:q={q}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceSpec {
    pub family: SpaceFamily,
    pub grid: GridConfig,
}

impl SpaceSpec {
    pub fn new(family: SpaceFamily, grid: GridConfig) -> Result<Self> {
        family.validate()?;
        grid.validate()?;
        Ok(Self { family, grid })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormStatus {
    Converged,
    NotConverged,
    UnboundedAtGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    /// Radius where a sup-type norm peaked.
    pub attained_at: Option<f64>,
    pub converged: bool,
    pub status: NormStatus,
    /// Sup-type: running sup per radial level. HL: partial sums at n = 2^k.
    /// Integral-type: estimates at successive quadrature refinements.
    pub trace: Vec<f64>,
    /// Quadrature and truncation error estimate for integral-type norms.
    pub error_estimate: Option<f64>,
}

/// Relative change over the last level under which a sup-type trace counts
/// as settled.
pub const SUP_SETTLED: f64 = 0.01;
/// Largest relative error estimate for which an integral-type or coefficient
/// norm counts as converged; comparisons between such values should use the
/// reported error bars.
pub const INTEGRAL_SETTLED: f64 = 0.1;
/// Node-doubling tolerance for the circle means inside radial integrals. The
/// check compares against the half grid, whose error dominates, so the
/// accepted mean is far more accurate than this.
pub const RADIAL_MEAN_TOL: f64 = 1e-7;

pub fn norm(f: &TaylorSeries, space: &SpaceSpec) -> Result<NormResult> {
    space.family.validate()?;
    let grid = &space.grid;
    let a0 = f.coeffs()[0].norm();
    match space.family {
        SpaceFamily::Bloch => sup_norm(&f.differentiate(1), a0, f64::INFINITY, 1.0, grid),
        SpaceFamily::Zygmund1 => {
            let a1 = f.coeffs().get(1).map_or(0.0, |c| c.norm());
            sup_norm(&f.differentiate(2), a0 + a1, 1.0, 1.0, grid)
        }
        SpaceFamily::MeanLipschitz { p, alpha } => sup_norm(&f.differentiate(1), a0, p, 1.0 - alpha, grid),
        SpaceFamily::Hardy { q } => sup_norm(f, 0.0, q, 0.0, grid),
        SpaceFamily::HardyLittlewood { q } => Ok(hardy_littlewood(f, q)),
        SpaceFamily::Dirichlet { q } => dirichlet(f, q, grid),
        SpaceFamily::Bq { q } => bq(f, q, grid),
    }
}

/// base + sup_j (1 − r_j²)^e M_p(r_j, g) over the reliable part of the grid
/// (and r = 1 when e = 0 and g is a polynomial).
fn sup_norm(g: &TaylorSeries, base: f64, p: f64, e: f64, grid: &GridConfig) -> Result<NormResult> {
    let spec = CircleMeanSpec::new(p, grid.angular_nodes)?;
    let mut points: Vec<(f64, f64)> = grid
        .levels()
        .map(|j| (1.0 - gap(j), gap(j)))
        .take_while(|&(r, _)| g.is_reliable_at(r))
        .collect();
    if e == 0.0 && g.is_exact() {
        points.push((1.0, 0.0));
    }
    if points.is_empty() {
        return Err(Error::TruncationUnreliable { modulus: 0.0 });
    }
    let mut trace = Vec::with_capacity(points.len());
    let mut sup = f64::NEG_INFINITY;
    let mut attained_at = 0.0;
    for (r, s) in points {
        let weight = if e == 0.0 { 1.0 } else { (s * (2.0 - s)).powf(e) };
        let m = g.integral_mean_detailed(r, spec, grid.rel_tol)?.value;
        let v = base + weight * m;
        if v > sup {
            sup = v;
            attained_at = r;
        }
        trace.push(sup);
    }
    let status = classify_sup_trace(&trace);
    Ok(NormResult {
        value: sup,
        attained_at: Some(attained_at),
        converged: status == NormStatus::Converged,
        status,
        trace,
        error_estimate: None,
    })
}

pub(crate) fn classify_sup_trace(trace: &[f64]) -> NormStatus {
    let n = trace.len();
    if n >= 4 && (n - 4..n - 1).all(|i| trace[i + 1] > 1.1 * trace[i]) {
        return NormStatus::UnboundedAtGrid;
    }
    if n >= 2 {
        let (a, b) = (trace[n - 2], trace[n - 1]);
        if (b - a).abs() <= SUP_SETTLED * b.abs() {
            return NormStatus::Converged;
        }
    } else if n == 1 {
        return NormStatus::Converged;
    }
    NormStatus::NotConverged
}

fn hardy_littlewood(f: &TaylorSeries, q: f64) -> NormResult {
    let mut sum = 0.0;
    let mut trace = Vec::new();
    let mut next = 1;
    for (n, a) in f.coeffs().iter().enumerate() {
        sum += (n as f64 + 1.0).powf(q - 2.0) * a.norm().powf(q);
        if n + 1 == next || n == f.degree() {
            trace.push(sum.powf(1.0 / q));
            next *= 2;
        }
    }
    let tail = match f.truncation() {
        Truncation::Exact => 0.0,
        // Σ_{n>N} (n+1)^{q−2} (C (n+1)^d ρ^n)^q
        Truncation::Tail(t) => t.bound.powf(q) * normalized_tail(f.degree(), q - 2.0 + q * t.growth, t.ratio.powf(q)),
    };
    let value = sum.powf(1.0 / q);
    let error = (sum + tail).powf(1.0 / q) - value;
    let converged = error.is_finite() && error <= INTEGRAL_SETTLED * value.max(1e-300);
    NormResult {
        value,
        attained_at: None,
        converged,
        status: if converged { NormStatus::Converged } else { NormStatus::NotConverged },
        trace,
        error_estimate: Some(error),
    }
}

/// Dyadic depth for radial integrals of a degree-N polynomial: cells reach
/// 1 − r ≈ 2^{-12}/N, well inside the scale 1/N on which its means vary.
pub fn radial_depth(degree: usize) -> u32 {
    ((degree.max(1) as f64).log2().ceil() as u32 + 12).min(60)
}

fn dirichlet(f: &TaylorSeries, q: f64, grid: &GridConfig) -> Result<NormResult> {
    let poly = f.to_polynomial();
    let h1 = poly.differentiate(1);
    let spec = CircleMeanSpec::new(q, grid.angular_nodes)?;
    let h0 = f.coeffs()[0].norm().powf(q);
    let mean = |u: f64| {
        let r = 1.0 - u;
        h1.integral_mean_detailed(r, spec, grid.rel_tol.max(RADIAL_MEAN_TOL)).map(|m| r * m.value.powf(q))
    };
    let est = radial_integral(q - 1.0, radial_depth(h1.degree()), grid.rel_tol.max(1e-10), mean)?;
    let area = 2.0 * PI * est.value;
    let value = (h0 + area).powf(1.0 / q);
    let error = (h0 + area + 2.0 * PI * est.error).powf(1.0 / q) - value;
    Ok(integral_result(value, error, est.converged, est.trace.iter().map(|v| (h0 + 2.0 * PI * v).powf(1.0 / q)).collect()))
}

fn bq(f: &TaylorSeries, q: f64, grid: &GridConfig) -> Result<NormResult> {
    let poly = f.to_polynomial();
    let spec = CircleMeanSpec::new(1.0, grid.angular_nodes)?;
    let a = 1.0 / q - 2.0;
    let mean = |u: f64| poly.integral_mean_detailed(1.0 - u, spec, grid.rel_tol.max(RADIAL_MEAN_TOL)).map(|m| m.value);
    let est = radial_integral(a, radial_depth(poly.degree()), grid.rel_tol.max(1e-10), mean)?;
    // omitted coefficients: Σ_{n>N} |a_n| ∫ (1−r)^a r^n dr with
    // ∫ (1−r)^a r^n dr = Γ(a+1)Γ(n+1)/Γ(n+a+2) ≤ Γ(a+1) W (n+1)^{-(a+1)}
    let tail = match f.truncation() {
        Truncation::Exact => 0.0,
        Truncation::Tail(t) => {
            let b = a + 1.0;
            let w = if b < 1.0 { (1.0 + b).powf(1.0 - b) } else { 1.0 };
            let triangle = gamma(b) * w * t.bound * normalized_tail(f.degree(), t.growth - b, t.ratio);
            // M_1 ≤ M_2 of the omitted part; for d ≤ 0 with x = (ρ(1−u))²,
            // Σ_{n>N} (n+1)^{2d} x^n ≤ (N+2)^{2d} x^{N+1}/(1−x), 1 − x ≥ u and
            // (1−u)^{N+1} ≤ e^{−(N+1)u}, leaving ∫ u^{a−1/2} e^{−(N+1)u} du
            let n = f.degree() as f64;
            let l2 = if t.growth <= 0.0 && a > -0.5 {
                t.bound * (n + 2.0).powf(t.growth) * t.ratio.powf(n + 1.0) * gamma(a + 0.5) * (n + 1.0).powf(-(a + 0.5))
            } else {
                f64::INFINITY
            };
            triangle.min(l2)
        }
    };
    Ok(integral_result(est.value, est.error + tail, est.converged, est.trace))
}

fn integral_result(value: f64, error: f64, quad_ok: bool, trace: Vec<f64>) -> NormResult {
    let converged = quad_ok && error <= INTEGRAL_SETTLED * value.abs().max(1e-300);
    NormResult {
        value,
        attained_at: None,
        converged,
        status: if converged { NormStatus::Converged } else { NormStatus::NotConverged },
        trace,
        error_estimate: Some(error),
    }
}

#[derive(Debug, Clone)]
pub struct RadialEstimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub trace: Vec<f64>,
}

/// ∫_0^1 u^e g(u) du with dyadic cells in u (the distance 1 − r) down to 2^{-depth};
/// the last piece [0, 2^{-depth}] uses the exact weight integral times g at
/// its midpoint. Panels double until consecutive estimates agree to
/// `rel_tol`.
pub fn radial_integral<G>(e: f64, depth: u32, rel_tol: f64, g: G) -> Result<RadialEstimate>
where
    G: Fn(f64) -> Result<f64>,
{
    if !(e > -1.0) {
        return invalid(format!("radial weight exponent {e} is not integrable"));
    }
    let rule = gauss_legendre(RADIAL_ORDER);
    let at = |subdiv: usize| -> Result<f64> {
        let mut total = 0.0;
        for k in 0..depth {
            let hi = gap(k);
            let h = 0.5 * hi / subdiv as f64;
            for p in 0..subdiv {
                let lo = 0.5 * hi + h * p as f64;
                let mid = lo + 0.5 * h;
                for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                    let u = mid + 0.5 * h * x;
                    total += 0.5 * h * w * u.powf(e) * g(u)?;
                }
            }
        }
        let floor = gap(depth);
        Ok(total + g(0.5 * floor)? * floor.powf(e + 1.0) / (e + 1.0))
    };
    let mut trace = vec![at(1)?];
    for level in 1..4 {
        let v = at(1 << level)?;
        let prev = *trace.last().unwrap();
        trace.push(v);
        if (v - prev).abs() <= rel_tol * v.abs().max(1e-300) {
            return Ok(RadialEstimate {
                value: v,
                error: (v - prev).abs(),
                converged: true,
                trace,
            });
        }
    }
    let n = trace.len();
    Ok(RadialEstimate {
        value: trace[n - 1],
        error: (trace[n - 1] - trace[n - 2]).abs(),
        converged: false,
        trace,
    })
}

/// I_c(z) = (1/2π) ∫ dθ / |1 − z e^{-iθ}|^{1+c}.
pub fn kernel_mean_ic(z: Complex, c: f64) -> Result<f64> {
    kernel_mean_ic_at(DiskPoint::from_complex(z)?.gap, c)
}

/// I_c at |z| = 1 − gap, with |1 − ρe^{iθ}|² = gap² + 4ρ sin²(θ/2).
pub fn kernel_mean_ic_at(gap_: f64, c: f64) -> Result<f64> {
    if !(gap_ > 0.0 && gap_ <= 1.0) {
        return invalid(format!("|z| = {} is not inside the unit disk", 1.0 - gap_));
    }
    if gap_ == 1.0 {
        return Ok(1.0);
    }
    let rho = 1.0 - gap_;
    let expo = -0.5 * (1.0 + c);
    let at = |order: usize| -> f64 {
        angular_graded(gap_, order, true)
            .iter()
            .map(|&(t, w)| w * (gap_ * gap_ + 4.0 * rho * (0.5 * t).sin().powi(2)).powf(expo))
            .sum::<f64>()
            / (2.0 * PI)
    };
    let (a, b) = (at(16), at(24));
    if (a - b).abs() <= 1e-12 * b {
        Ok(b)
    } else {
        Err(Error::NonConvergence {
            what: "kernel mean",
            previous: a,
            last: b,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Finiteness {
    Finite,
    Divergent,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllQEstimate {
    /// Partial sum plus the midpoint of the tail bracket.
    pub value: f64,
    pub partial_sum: f64,
    pub tail_estimate: f64,
    pub tail_bracket: (f64, f64),
    /// Local power-law exponent of the summands at the cutoff.
    pub decay_exponent: f64,
    pub verdict: Finiteness,
    /// Partial sums at n + 1 = 2^k.
    pub trace: Vec<f64>,
}

/// Relative tail size below which the ℓ^q sum is called finite.
pub const ELL_Q_FINITE_TAIL: f64 = 1e-3;
/// Growth of the sum over the last dyadic block above which it is called divergent.
pub const ELL_Q_DIVERGENT_BLOCK: f64 = 0.01;

/// Σ_n (n+1)^{q−2} μ_n^q with an integral-comparison tail.
pub fn ell_q_criterion(mu: &RadialMeasure, q: f64, cutoff: usize) -> Result<EllQEstimate> {
    if !(q >= 1.0 && q.is_finite()) {
        return invalid(format!("ℓ^q criterion needs q ≥ 1, got {q}"));
    }
    if cutoff < 16 {
        return invalid("cutoff must be at least 16");
    }
    let moments = mu.moments(cutoff)?;
    let term = |n: usize| (n as f64 + 1.0).powf(q - 2.0) * moments.values()[n].powf(q);
    let mut partial = 0.0;
    let mut trace = Vec::new();
    let mut half_sum = 0.0;
    for n in 0..=cutoff {
        partial += term(n);
        if (n + 1).is_power_of_two() {
            trace.push(partial);
        }
        if n == cutoff / 2 {
            half_sum = partial;
        }
    }
    let (s_half, s_last) = (term(cutoff / 2), term(cutoff));
    let nn = cutoff as f64;
    let decay = if s_last > 0.0 && s_half > 0.0 {
        (s_half / s_last).ln() / ((nn + 1.0) / (nn / 2.0 + 1.0)).ln()
    } else {
        f64::INFINITY
    };
    let (lo, hi) = if s_last == 0.0 {
        (0.0, 0.0)
    } else if decay > 1.0 && decay.is_finite() {
        let a = decay;
        (
            s_last * (nn + 1.0).powf(a) * (nn + 2.0).powf(1.0 - a) / (a - 1.0),
            s_last * (nn + 1.0) / (a - 1.0),
        )
    } else if decay.is_infinite() {
        (0.0, 0.0)
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    let tail = 0.5 * (lo + hi);
    let block_growth = (partial - half_sum) / half_sum.max(1e-300);
    let verdict = if tail.is_finite() && tail <= ELL_Q_FINITE_TAIL * partial {
        Finiteness::Finite
    } else if block_growth > ELL_Q_DIVERGENT_BLOCK {
        Finiteness::Divergent
    } else {
        Finiteness::Inconclusive
    };
    Ok(EllQEstimate {
        value: partial + tail,
        partial_sum: partial,
        tail_estimate: tail,
        tail_bracket: (lo, hi),
        decay_exponent: decay,
        verdict,
        trace,
    })
}

/// The two sides of the dyadic-block comparison for a nonnegative sequence:
/// lhs = ∫_0^1 (1−r)^{pβ−1} (Σ λ_n r^n)^p dr and
/// rhs = Σ_n 2^{−npβ} (Σ_{k∈I_n} λ_k)^p with I_0 = {0}, I_n = [2^{n−1}, 2^n).
pub fn block_equivalence(lambda: &[f64], p: f64, beta: f64) -> Result<(f64, f64)> {
    if !(p > 0.0 && beta > 0.0) {
        return invalid("p and β must be positive");
    }
    if lambda.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
        return invalid("sequence entries must be finite and nonnegative");
    }
    if lambda.iter().all(|l| *l == 0.0) {
        return Ok((0.0, 0.0));
    }
    let pb = p * beta;
    let mut rhs = 0.0;
    let mut block = 0;
    let mut start = 0;
    while start < lambda.len() {
        let end = if block == 0 { 1 } else { (1usize << block).min(lambda.len()) };
        let s: f64 = lambda[start..end].iter().sum();
        rhs += (-(block as f64) * pb).exp2() * s.powf(p);
        start = end;
        block += 1;
    }
    let series = |r: f64| lambda.iter().rev().fold(0.0, |acc, &l| acc * r + l);
    let est = radial_integral(pb - 1.0, radial_depth(lambda.len()), 1e-10, |u| Ok(series(1.0 - u).powf(p)))?;
    if !est.converged {
        return Err(Error::NonConvergence {
            what: "block comparison integral",
            previous: est.trace[est.trace.len() - 2],
            last: est.value,
        });
    }
    Ok((est.value, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::make_function;
    use crate::special::kernel_mean_sharp_constant;

    fn spec(family: SpaceFamily) -> SpaceSpec {
        SpaceSpec::new(family, GridConfig::default().with_level(12).unwrap()).unwrap()
    }

    fn poly(c: &[f64]) -> TaylorSeries {
        TaylorSeries::polynomial_real(c).unwrap()
    }

    #[test]
    fn trivial_norms() {
        assert!((norm(&poly(&[0.0, 1.0]), &spec(SpaceFamily::Bloch)).unwrap().value - 1.0).abs() < 1e-15);
        assert!((norm(&poly(&[0.0, 0.0, 1.0]), &spec(SpaceFamily::Zygmund1)).unwrap().value - 2.0).abs() < 1e-15);
        assert!((norm(&poly(&[0.0, 1.0]), &spec(SpaceFamily::Hardy { q: 2.0 })).unwrap().value - 1.0).abs() < 1e-15);
        let b = norm(&poly(&[1.0]), &spec(SpaceFamily::Bq { q: 0.5 })).unwrap();
        assert!((b.value - 1.0).abs() < 1e-12, "{}", b.value);
    }

    #[test]
    fn hardy_littlewood_of_h1() {
        let h = make_function("hlog:N=10000").unwrap();
        let r = norm(&h, &spec(SpaceFamily::HardyLittlewood { q: 2.0 })).unwrap();
        // partial-sum oracle Σ_{n≤N} (n+1)^{-2}
        let oracle: f64 = (1..=10_001).map(|k| 1.0 / (k as f64 * k as f64)).sum::<f64>().sqrt();
        assert!((r.value - oracle).abs() < 1e-13);
        assert!(((PI * PI / 6.0).sqrt() - r.value).abs() <= r.error_estimate.unwrap());
        assert!(r.converged);
    }

    #[test]
    fn dirichlet_two_matches_coefficient_oracle() {
        // dA = r dr dθ and Parseval: |h(0)|² + 2π Σ n²|b_n|² ∫ r^{2n−1}(1−r) dr
        let f = make_function("poly:0.5,1,-0.25,0.125i").unwrap();
        let r = norm(&f, &spec(SpaceFamily::Dirichlet { q: 2.0 })).unwrap();
        let mut s = 0.25; // |h(0)|²
        for (n, a) in f.coeffs().iter().enumerate().skip(1) {
            let n = n as f64;
            // 2π n² ∫ r^{2n−1}(1−r) dr = 2π n² (1/(2n) − 1/(2n+1))
            s += 2.0 * PI * n * n * a.norm_sqr() * (1.0 / (2.0 * n) - 1.0 / (2.0 * n + 1.0));
        }
        assert!((r.value - s.sqrt()).abs() < 1e-10 * s.sqrt(), "{} vs {}", r.value, s.sqrt());
    }

    #[test]
    fn kernel_mean_examples() {
        for c in [-0.5, 0.0, 0.5, 2.0] {
            assert_eq!(kernel_mean_ic(Complex::new(0.0, 0.0), c).unwrap(), 1.0);
        }
        let r: f64 = 0.999;
        let v = (1.0 - r * r).powi(2) * kernel_mean_ic(Complex::new(r, 0.0), 2.0).unwrap();
        let limit = kernel_mean_sharp_constant(2.0);
        assert!((1.0..=limit).contains(&v) && (limit - v) / limit < 5e-3, "{v}");
        let r: f64 = 0.9;
        let v = r * r / (1.0 / (1.0 - r * r)).ln() * kernel_mean_ic(Complex::new(0.0, r), 0.0).unwrap();
        assert!((1.0 / PI..=1.0).contains(&v));
        // c = 1: I_1(r) = 1/(1 − r²) exactly (Parseval)
        let v = kernel_mean_ic(Complex::new(0.6, 0.0), 1.0).unwrap();
        assert!((v - 1.0 / 0.64).abs() < 1e-13);
    }

    #[test]
    fn ell_q_examples() {
        let leb = RadialMeasure::lebesgue();
        for q in [1.0, 1.5, 2.0, 3.0] {
            let e = ell_q_criterion(&leb, q, 1 << 14).unwrap();
            assert_eq!(e.verdict, Finiteness::Finite);
            assert!((e.value - PI * PI / 6.0).abs() < 1e-6, "q={q} {}", e.value);
        }
        let a = RadialMeasure::atomic(vec![(0.5, 1.0)]).unwrap();
        let e = ell_q_criterion(&a, 2.0, 1 << 14).unwrap();
        assert!((e.value - 4.0 / 3.0).abs() < 1e-10 && e.verdict == Finiteness::Finite);
        let half = RadialMeasure::power_weight(0.5).unwrap();
        assert_eq!(ell_q_criterion(&half, 2.0, 1 << 14).unwrap().verdict, Finiteness::Divergent);
        assert!(ell_q_criterion(&leb, 0.5, 100).is_err());
    }

    #[test]
    fn block_equivalence_examples() {
        let (l, r) = block_equivalence(&[1.0], 2.0, 0.75).unwrap();
        assert!((l - 1.0 / 1.5).abs() < 1e-12 && r == 1.0);
        assert_eq!(block_equivalence(&[0.0; 10], 2.0, 0.5).unwrap(), (0.0, 0.0));
        let ratio = |n: usize| {
            let (l, r) = block_equivalence(&vec![1.0; n], 2.0, 0.5).unwrap();
            l / r
        };
        let (a, b) = (ratio(1 << 12), ratio(1 << 13));
        assert!((a / b - 1.0).abs() < 0.05, "{a} {b}");
    }

    #[test]
    fn space_descriptors() {
        assert_eq!(SpaceFamily::parse("bloch").unwrap(), SpaceFamily::Bloch);
        assert_eq!(
            SpaceFamily::parse("meanlip:p=4").unwrap(),
            SpaceFamily::MeanLipschitz { p: 4.0, alpha: 0.25 }
        );
        assert_eq!(SpaceFamily::parse("bq:q=0.5").unwrap(), SpaceFamily::Bq { q: 0.5 });
        assert!(SpaceFamily::parse("bq:q=1.5").is_err());
        assert!(SpaceFamily::parse("hl:q=0.5").is_err());
        assert!(matches!(SpaceFamily::parse("hardy"), Err(Error::Parse { .. })));
        assert!(matches!(SpaceFamily::parse("hardy:q=x"), Err(Error::Parse { position: 8, .. })));
        for s in ["zygmund1", "meanlip:p=2,alpha=0.5", "dirichlet:q=2", "hl:q=2"] {
            let f = SpaceFamily::parse(s).unwrap();
            assert_eq!(SpaceFamily::parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn zygmund_of_h1_is_in_bracket() {
        let h = make_function("hlog:N=10000").unwrap();
        let r = norm(&h, &spec(SpaceFamily::Zygmund1)).unwrap();
        assert!(r.converged);
        assert!(r.value > 1.5 + 2.0 / PI && r.value < 1.5 + 4.0 / PI, "{}", r.value);
        for p in [2.0, 4.0] {
            let m = norm(&h, &spec(SpaceFamily::MeanLipschitz { p, alpha: 1.0 / p })).unwrap();
            assert!(m.value.is_finite() && m.status != NormStatus::UnboundedAtGrid);
        }
    }
}
