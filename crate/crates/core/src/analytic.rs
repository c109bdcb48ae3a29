//! Truncated Taylor series on the unit disk: evaluation, derivatives and
//! circle integral means.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};

pub type Complex = Complex64;

/// A truncated series is trusted at radius ρ when its normalized tail bound
/// `tail_bound(ρ) / bound` is below this.
pub const TRUNCATION_TOL: f64 = 1e-10;

/// Default relative tolerance of the node-doubling circle quadrature.
pub const MEAN_REL_TOL: f64 = 1e-9;

const MAX_CIRCLE_NODES: usize = 1 << 23;

/// What is known about the coefficients beyond the stored ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// The stored coefficients are the whole function (a polynomial).
    Exact,
    /// Omitted coefficients are dominated by the envelope.
    Tail(TailModel),
}

/// Envelope |a_n| ≤ bound · (n+1)^growth · ratio^n for the omitted coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub bound: f64,
    pub growth: f64,
    pub ratio: f64,
}

impl TailModel {
    pub fn power(bound: f64, growth: f64) -> Self {
        Self {
            bound,
            growth,
            ratio: 1.0,
        }
    }

    pub fn at(&self, n: usize) -> f64 {
        let n = n as f64;
        if self.bound == 0.0 {
            return 0.0;
        }
        self.bound * (self.growth * (n + 1.0).ln() + n * self.ratio.ln()).exp()
    }

    /// Bound on Σ_{n>degree} |a_n| ρ^n.
    pub fn sum_beyond(&self, degree: usize, modulus: f64) -> f64 {
        if self.bound == 0.0 {
            return 0.0;
        }
        self.bound * normalized_tail(degree, self.growth, modulus * self.ratio)
    }
}

/// An analytic function on the disk represented by its Taylor coefficients
/// a_0..a_N.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    coeffs: Vec<Complex>,
    sup_bound: Option<f64>,
    truncation: Truncation,
}

impl TaylorSeries {
    pub fn polynomial(coeffs: Vec<Complex>) -> Result<Self> {
        Self::build(coeffs, Truncation::Exact)
    }

    pub fn polynomial_real(coeffs: &[f64]) -> Result<Self> {
        Self::polynomial(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    /// A truncation whose omitted coefficients obey |a_n| ≤ bound·(n+1)^growth.
    pub fn truncated(coeffs: Vec<Complex>, bound: f64, growth: f64) -> Result<Self> {
        Self::with_tail(coeffs, TailModel::power(bound, growth))
    }

    pub fn with_tail(coeffs: Vec<Complex>, tail: TailModel) -> Result<Self> {
        if !(tail.bound.is_finite() && tail.bound >= 0.0 && tail.growth.is_finite()) {
            return invalid("tail bound must be finite and nonnegative");
        }
        if !(0.0..=1.0).contains(&tail.ratio) {
            return invalid("tail ratio must lie in [0, 1]");
        }
        Self::build(coeffs, Truncation::Tail(tail))
    }

    fn build(coeffs: Vec<Complex>, truncation: Truncation) -> Result<Self> {
        if coeffs.is_empty() {
            return invalid("a series needs at least one coefficient");
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return invalid("coefficients must be finite");
        }
        Ok(Self {
            coeffs,
            sup_bound: None,
            truncation,
        })
    }

    /// Attach a bound on ‖f‖_∞. Rejected when it contradicts the Cauchy
    /// estimate |a_n| ≤ ‖f‖_∞.
    pub fn with_sup_bound(mut self, bound: f64) -> Result<Self> {
        if !(bound.is_finite() && bound >= 0.0) {
            return invalid("sup bound must be finite and nonnegative");
        }
        let slack = 1e-12 * bound.max(1.0);
        if let Some(n) = self.coeffs.iter().position(|c| c.norm() > bound + slack) {
            return invalid(format!("|a_{n}| exceeds the declared sup bound {bound}"));
        }
        self.sup_bound = Some(bound);
        Ok(self)
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    /// Index of the last stored coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn sup_bound(&self) -> Option<f64> {
        self.sup_bound
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// The stored coefficients as a polynomial, dropping the tail model.
    pub fn to_polynomial(&self) -> TaylorSeries {
        TaylorSeries {
            coeffs: self.coeffs.clone(),
            sup_bound: None,
            truncation: Truncation::Exact,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.truncation == Truncation::Exact
    }

    /// Upper bound for |Σ_{n>N} a_n z^n| at |z| = modulus (infinite outside
    /// the region where the geometric bound applies).
    pub fn tail_bound(&self, modulus: f64) -> f64 {
        match self.truncation {
            Truncation::Exact => 0.0,
            Truncation::Tail(tail) => tail.sum_beyond(self.degree(), modulus),
        }
    }

    /// Whether the stored coefficients represent f to [`TRUNCATION_TOL`] at
    /// the given modulus (always true for polynomials).
    pub fn is_reliable_at(&self, modulus: f64) -> bool {
        match self.truncation {
            Truncation::Exact => true,
            Truncation::Tail(tail) => {
                tail.bound == 0.0 || normalized_tail(self.degree(), tail.growth, modulus * tail.ratio) <= TRUNCATION_TOL
            }
        }
    }

    /// Horner evaluation of Σ a_n z^n.
    pub fn eval(&self, z: Complex) -> Result<Complex> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return invalid("evaluation point must be finite");
        }
        if !self.is_exact() && !self.tail_bound(z.norm()).is_finite() {
            return Err(Error::TruncationUnreliable { modulus: z.norm() });
        }
        Ok(self.horner(z))
    }

    pub fn horner(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// Horner evaluation at a real point of the stored coefficients, with no
    /// reliability check.
    pub fn horner_real(&self, x: f64) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &a| acc * x + a)
    }

    /// The `order`-th derivative. Differentiating past the stored degree
    /// leaves the zero polynomial (still carrying the tail model).
    pub fn differentiate(&self, order: usize) -> TaylorSeries {
        if order == 0 {
            return self.clone();
        }
        let coeffs: Vec<Complex> = if order > self.degree() {
            vec![Complex::new(0.0, 0.0)]
        } else {
            (order..self.coeffs.len())
                .map(|m| {
                    let n = m - order;
                    let falling: f64 = (n + 1..=m).map(|i| i as f64).product();
                    self.coeffs[m] * falling
                })
                .collect()
        };
        let truncation = match self.truncation {
            Truncation::Exact => Truncation::Exact,
            Truncation::Tail(tail) => {
                // (n+k)!/n! ≤ (k(n+1))^k and (n+k+1)^d ≤ ((k+1)(n+1))^d for d ≥ 0
                let k = order as f64;
                let factor = k.powf(k) * (k + 1.0).powf(tail.growth.max(0.0)) * tail.ratio.powi(order as i32);
                Truncation::Tail(TailModel {
                    bound: tail.bound * factor,
                    growth: tail.growth + k,
                    ratio: tail.ratio,
                })
            }
        };
        TaylorSeries {
            coeffs,
            sup_bound: None,
            truncation,
        }
    }

    /// D^t f = Σ (n+1)^t a_n z^n.
    pub fn fractional_derivative(&self, t: f64) -> TaylorSeries {
        if t == 0.0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &a)| a * ((n + 1) as f64).powf(t))
            .collect();
        let truncation = match self.truncation {
            Truncation::Exact => Truncation::Exact,
            Truncation::Tail(tail) => Truncation::Tail(TailModel {
                growth: tail.growth + t,
                ..tail
            }),
        };
        TaylorSeries {
            coeffs,
            sup_bound: None,
            truncation,
        }
    }

    pub fn scale(&self, c: Complex) -> TaylorSeries {
        let m = c.norm();
        TaylorSeries {
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
            sup_bound: self.sup_bound.map(|b| b * m),
            truncation: match self.truncation {
                Truncation::Exact => Truncation::Exact,
                Truncation::Tail(tail) => Truncation::Tail(TailModel {
                    bound: tail.bound * m,
                    ..tail
                }),
            },
        }
    }

    /// f + g. When either operand is truncated the sum is cut at the smaller
    /// truncated degree and the tail model absorbs everything beyond it.
    pub fn add(&self, other: &TaylorSeries) -> TaylorSeries {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex::new(0.0, 0.0);
        let sum: Vec<Complex> = (0..len)
            .map(|n| {
                self.coeffs.get(n).copied().unwrap_or(zero) + other.coeffs.get(n).copied().unwrap_or(zero)
            })
            .collect();
        let sup_bound = match (self.sup_bound, other.sup_bound) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let tails: Vec<(usize, TailModel)> = [self, other]
            .iter()
            .filter_map(|s| match s.truncation {
                Truncation::Tail(tail) => Some((s.degree(), tail)),
                Truncation::Exact => None,
            })
            .collect();
        if tails.is_empty() {
            return TaylorSeries {
                coeffs: sum,
                sup_bound,
                truncation: Truncation::Exact,
            };
        }
        let cut = tails.iter().map(|t| t.0).min().unwrap();
        let growth = tails.iter().map(|t| t.1.growth).fold(f64::NEG_INFINITY, f64::max);
        let mut ratio = tails.iter().map(|t| t.1.ratio).fold(0.0, f64::max);
        let unit = TailModel { bound: 1.0, growth, ratio };
        let mut extra = sum[cut + 1..]
            .iter()
            .enumerate()
            .map(|(i, a)| if a.norm() == 0.0 { 0.0 } else { a.norm() / unit.at(cut + 1 + i) })
            .fold(0.0, f64::max);
        if !extra.is_finite() {
            // stored coefficients outrun the geometric envelope; fall back to a power envelope
            ratio = 1.0;
            let unit = TailModel::power(1.0, growth);
            extra = sum[cut + 1..]
                .iter()
                .enumerate()
                .map(|(i, a)| a.norm() / unit.at(cut + 1 + i))
                .fold(0.0, f64::max);
        }
        let bound = tails.iter().map(|t| t.1.bound).sum::<f64>() + extra;
        let mut coeffs = sum;
        coeffs.truncate(cut + 1);
        TaylorSeries {
            coeffs,
            sup_bound,
            truncation: Truncation::Tail(TailModel { bound, growth, ratio }),
        }
    }

    /// Values f(r e^{-2πik/M}) for k = 0..M, exact for the stored coefficients
    /// (coefficients are folded modulo M before the transform).
    pub fn circle_values(&self, r: f64, nodes: usize) -> Vec<Complex> {
        let mut buf = vec![Complex::new(0.0, 0.0); nodes];
        let mut rn = 1.0;
        for (n, &a) in self.coeffs.iter().enumerate() {
            buf[n % nodes] += a * rn;
            rn *= r;
            if rn == 0.0 {
                break;
            }
        }
        fft(nodes).process(&mut buf);
        buf
    }

    /// M_p(r, f) with the default tolerance.
    pub fn integral_mean(&self, r: f64, spec: CircleMeanSpec) -> Result<f64> {
        Ok(self.integral_mean_detailed(r, spec, MEAN_REL_TOL)?.value)
    }

    /// M_p(r, f) by the trapezoid rule on uniform nodes, doubling the node
    /// count until consecutive estimates agree to `rel_tol`. For p = ∞ the
    /// grid maximum is polished by a local golden-section search, so the
    /// result is a lower estimate of the true supremum.
    pub fn integral_mean_detailed(&self, r: f64, spec: CircleMeanSpec, rel_tol: f64) -> Result<MeanEstimate> {
        if !(0.0..=1.0).contains(&r) {
            return invalid(format!("radius {r} outside [0, 1]"));
        }
        if !self.is_exact() && !self.tail_bound(r).is_finite() {
            return Err(Error::TruncationUnreliable { modulus: r });
        }
        let mut nodes = spec.nodes.max((self.degree() + 1).next_power_of_two());
        if spec.p.is_finite() {
            // the even-indexed nodes form the next coarser grid, so one
            // transform yields both estimates
            loop {
                let values = self.circle_values(r, nodes);
                let current = power_mean(values.iter(), spec.p);
                let previous = power_mean(values.iter().step_by(2), spec.p);
                let scale = current.abs().max(previous.abs());
                if (current - previous).abs() <= rel_tol * scale || scale < 1e-12 {
                    return Ok(MeanEstimate {
                        value: current,
                        previous,
                        nodes,
                    });
                }
                if nodes >= MAX_CIRCLE_NODES {
                    return Err(Error::NonConvergence {
                        what: "circle integral mean",
                        previous,
                        last: current,
                    });
                }
                nodes *= 2;
            }
        }
        let mut previous = self.polished_max(r, &self.circle_values(r, nodes));
        loop {
            nodes *= 2;
            let current = self.polished_max(r, &self.circle_values(r, nodes));
            let scale = current.abs().max(previous.abs());
            if (current - previous).abs() <= rel_tol * scale || scale < 1e-12 {
                return Ok(MeanEstimate {
                    value: current,
                    previous,
                    nodes,
                });
            }
            if nodes >= MAX_CIRCLE_NODES {
                return Err(Error::NonConvergence {
                    what: "circle integral mean",
                    previous,
                    last: current,
                });
            }
            previous = current;
        }
    }

    fn polished_max(&self, r: f64, values: &[Complex]) -> f64 {
        let m = values.len();
        let mags: Vec<f64> = values.iter().map(|v| v.norm()).collect();
        let mut peaks: Vec<usize> = (0..m)
            .filter(|&k| mags[k] >= mags[(k + m - 1) % m] && mags[k] >= mags[(k + 1) % m])
            .collect();
        peaks.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]).then(a.cmp(&b)));
        peaks.truncate(3);
        let h = 2.0 * PI / m as f64;
        let mut best = mags.iter().copied().fold(0.0, f64::max);
        for k in peaks {
            let centre = -(k as f64) * h;
            let g = |t: f64| self.horner(Complex::from_polar(r, t)).norm();
            best = best.max(golden_max(g, centre - h, centre + h));
        }
        best
    }
}

fn power_mean<'a>(values: impl ExactSizeIterator<Item = &'a Complex>, p: f64) -> f64 {
    let m = values.len() as f64;
    if p == 1.0 {
        values.map(|v| v.norm()).sum::<f64>() / m
    } else if p == 2.0 {
        (values.map(|v| v.norm_sqr()).sum::<f64>() / m).sqrt()
    } else {
        (values.map(|v| v.norm().powf(p)).sum::<f64>() / m).powf(1.0 / p)
    }
}

fn golden_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = g(x1);
        }
    }
    f1.max(f2)
}

/// Σ_{n>N} (n+1)^d ρ^n, bounded by a geometric series starting at n = N+1
/// and, for d < −1, also by the integral ∫_{N+1}^∞ x^d dx.
pub(crate) fn normalized_tail(degree: usize, growth: f64, modulus: f64) -> f64 {
    if modulus == 0.0 {
        return 0.0;
    }
    let n = degree as f64;
    let zeta = if growth < -1.0 && modulus <= 1.0 {
        (n + 1.0).powf(growth + 1.0) / (-growth - 1.0)
    } else {
        f64::INFINITY
    };
    if modulus >= 1.0 {
        return zeta;
    }
    let log_first = growth * (n + 2.0).ln() + (n + 1.0) * modulus.ln();
    let ratio = modulus * ((n + 3.0) / (n + 2.0)).powf(growth.max(0.0));
    if ratio >= 1.0 {
        return zeta;
    }
    (log_first.exp() / (1.0 - ratio)).min(zeta)
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

/// Exponent and starting node count of a circle mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleMeanSpec {
    /// Mean exponent, `f64::INFINITY` for the maximum modulus.
    pub p: f64,
    pub nodes: usize,
}

impl CircleMeanSpec {
    pub fn new(p: f64, nodes: usize) -> Result<Self> {
        if !(p > 0.0) {
            return invalid(format!("mean exponent must be positive, got {p}"));
        }
        if nodes < 16 || nodes % 2 != 0 {
            return invalid(format!("angular node count must be even and at least 16, got {nodes}"));
        }
        Ok(Self { p, nodes })
    }

    pub fn sup(nodes: usize) -> Result<Self> {
        Self::new(f64::INFINITY, nodes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub value: f64,
    pub previous: f64,
    pub nodes: usize,
}

/// Build a test function from its descriptor:
/// `const:<c>`, `poly:<a0>,<a1>,...`, `monomial:k=<k>`, `geom:N=<N>`, `hlog:N=<N>`.
/// Complex scalars are written `1.5`, `2i`, `1-0.5i`.
pub fn make_function(descriptor: &str) -> Result<TaylorSeries> {
    let (kind, body, body_at) = match descriptor.find(':') {
        Some(i) => (&descriptor[..i], &descriptor[i + 1..], i + 1),
        None => return parse_err(descriptor.len(), "expected '<kind>:<parameters>'"),
    };
    match kind.trim() {
        "const" => {
            let c = parse_complex(body, body_at)?;
            TaylorSeries::polynomial(vec![c])?.with_sup_bound(c.norm())
        }
        "poly" => {
            let mut coeffs = Vec::new();
            let mut at = body_at;
            for part in body.split(',') {
                coeffs.push(parse_complex(part, at)?);
                at += part.len() + 1;
            }
            let bound = coeffs.iter().map(|c| c.norm()).sum();
            TaylorSeries::polynomial(coeffs)?.with_sup_bound(bound)
        }
        "monomial" => {
            let k = parse_keyed_usize(body, body_at, "k")?;
            let mut coeffs = vec![Complex::new(0.0, 0.0); k + 1];
            coeffs[k] = Complex::new(1.0, 0.0);
            TaylorSeries::polynomial(coeffs)?.with_sup_bound(1.0)
        }
        "geom" => {
            let n = parse_keyed_usize(body, body_at, "N")?;
            TaylorSeries::truncated(vec![Complex::new(1.0, 0.0); n + 1], 1.0, 0.0)
        }
        "hlog" => {
            let n = parse_keyed_usize(body, body_at, "N")?;
            let coeffs = (0..=n).map(|k| Complex::new(1.0 / (k as f64 + 1.0), 0.0)).collect();
            TaylorSeries::truncated(coeffs, 1.0, -1.0)
        }
        other => parse_err(0, format!("unknown function kind '{other}'")),
    }
}

fn parse_err<T>(position: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        position,
        message: message.into(),
    })
}

fn parse_keyed_usize(body: &str, at: usize, key: &str) -> Result<usize> {
    let Some(value) = body.trim().strip_prefix(key).and_then(|r| r.trim_start().strip_prefix('=')) else {
        return parse_err(at, format!("expected '{key}=<integer>'"));
    };
    value
        .trim()
        .parse::<usize>()
        .or_else(|_| parse_err(at + body.len() - value.len(), format!("'{}' is not a nonnegative integer", value.trim())))
}

/// Parse a real or complex literal; `at` is the byte offset of `text` in the
/// full descriptor, used for diagnostics.
pub(crate) fn parse_complex(text: &str, at: usize) -> Result<Complex> {
    let lead = text.len() - text.trim_start().len();
    let s = text.trim();
    let at = at + lead;
    if s.is_empty() {
        return parse_err(at, "empty number");
    }
    let bad = |pos: usize| Error::Parse {
        position: at + pos,
        message: format!("cannot parse '{s}' as a number"),
    };
    match s.strip_suffix('i') {
        None => s.parse::<f64>().map(|re| Complex::new(re, 0.0)).map_err(|_| bad(0)),
        Some(head) => {
            // split "a+b" / "a-b" at the last sign that is not an exponent sign
            let split = head
                .char_indices()
                .rev()
                .find(|&(i, ch)| (ch == '+' || ch == '-') && i > 0 && !matches!(head.as_bytes()[i - 1], b'e' | b'E'))
                .map(|(i, _)| i);
            let im_of = |t: &str, pos: usize| -> Result<f64> {
                match t {
                    "" | "+" => Ok(1.0),
                    "-" => Ok(-1.0),
                    _ => t.parse::<f64>().map_err(|_| bad(pos)),
                }
            };
            match split {
                Some(i) => {
                    let re = head[..i].parse::<f64>().map_err(|_| bad(0))?;
                    Ok(Complex::new(re, im_of(&head[i..], i)?))
                }
                None => Ok(Complex::new(0.0, im_of(head, 0)?)),
            }
        }
    }
}

impl fmt::Display for TaylorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TaylorSeries(degree {}, {:?})", self.degree(), self.truncation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let one = TaylorSeries::polynomial_real(&[1.0]).unwrap();
        assert_eq!(one.eval(c(0.7, 0.0)).unwrap(), c(1.0, 0.0));
        let id = TaylorSeries::polynomial_real(&[0.0, 1.0]).unwrap();
        assert_eq!(id.eval(c(0.3, 0.4)).unwrap(), c(0.3, 0.4));
        let geom = make_function("geom:N=1999").unwrap();
        assert_eq!(geom.degree(), 1999);
        let v = geom.eval(c(0.9, 0.0)).unwrap();
        assert!((v - c(10.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn eval_rejects_boundary_for_truncations() {
        let geom = make_function("geom:N=10").unwrap();
        assert!(matches!(geom.eval(c(1.0, 0.0)), Err(Error::TruncationUnreliable { .. })));
        assert!(matches!(geom.eval(c(0.0, -1.5)), Err(Error::TruncationUnreliable { .. })));
        let p = TaylorSeries::polynomial_real(&[1.0, 1.0]).unwrap();
        assert_eq!(p.eval(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
    }

    #[test]
    fn differentiate_examples() {
        let f = TaylorSeries::polynomial_real(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(f.differentiate(1).coeffs(), &[c(1.0, 0.0), c(2.0, 0.0)]);
        let k = TaylorSeries::polynomial_real(&[5.0]).unwrap();
        assert_eq!(k.differentiate(1).coeffs(), &[c(0.0, 0.0)]);
        let h = make_function("hlog:N=50").unwrap();
        let d2 = h.differentiate(2);
        for (n, a) in d2.coeffs().iter().enumerate() {
            let n = n as f64;
            let expected = (n + 1.0) * (n + 2.0) / (n + 3.0);
            assert!((a.re - expected).abs() < 1e-12 * expected && a.im == 0.0);
        }
    }

    #[test]
    fn derivative_tail_model_dominates_true_coefficients() {
        // hlog'' has coefficients (n+1)(n+2)/(n+3); check the derived bound on the omitted ones.
        let h = make_function("hlog:N=20").unwrap();
        let Truncation::Tail(TailModel { bound, growth, .. }) = h.differentiate(2).truncation() else {
            panic!("expected tail")
        };
        for n in 19..500 {
            let n = n as f64;
            assert!((n + 1.0) * (n + 2.0) / (n + 3.0) <= bound * (n + 1.0).powf(growth));
        }
    }

    #[test]
    fn fractional_derivative_examples() {
        let f = make_function("poly:1,2-1i,0.5").unwrap();
        assert_eq!(f.fractional_derivative(0.0), f);
        let id = TaylorSeries::polynomial_real(&[0.0, 1.0]).unwrap();
        assert_eq!(id.fractional_derivative(1.0).coeffs(), &[c(0.0, 0.0), c(2.0, 0.0)]);
        let g = TaylorSeries::polynomial_real(&[1.0, 1.0]).unwrap();
        assert_eq!(g.fractional_derivative(-1.0).coeffs(), &[c(1.0, 0.0), c(0.5, 0.0)]);
    }

    #[test]
    fn integral_mean_examples() {
        let spec = |p| CircleMeanSpec::new(p, 64).unwrap();
        let k = make_function("const:-3+4i").unwrap();
        for p in [0.5, 1.0, 2.0, 3.0, f64::INFINITY] {
            assert!((k.integral_mean(0.8, spec(p)).unwrap() - 5.0).abs() < 1e-12);
        }
        let id = TaylorSeries::polynomial_real(&[0.0, 1.0]).unwrap();
        assert!((id.integral_mean(0.5, spec(2.0)).unwrap() - 0.5).abs() < 1e-15);
        let geom = make_function("geom:N=4000").unwrap();
        let m2 = geom.integral_mean(0.9, spec(2.0)).unwrap();
        assert!((m2 - (1.0f64 - 0.81).powf(-0.5)).abs() < 1e-5, "{m2}");
    }

    #[test]
    fn sup_mean_finds_off_grid_peak() {
        // |1 + e^{iφ} z| peaks at arg z = -φ; choose φ away from the uniform nodes
        let phi = 0.123_456;
        let f = TaylorSeries::polynomial(vec![c(1.0, 0.0), Complex::from_polar(1.0, phi)]).unwrap();
        let v = f.integral_mean(0.7, CircleMeanSpec::sup(16).unwrap()).unwrap();
        assert!((v - 1.7).abs() < 1e-12, "{v}");
    }

    #[test]
    fn mean_spec_validation() {
        assert!(CircleMeanSpec::new(1.0, 15).is_err());
        assert!(CircleMeanSpec::new(1.0, 18).is_ok());
        assert!(CircleMeanSpec::new(1.0, 17).is_err());
        assert!(CircleMeanSpec::new(0.0, 64).is_err());
    }

    #[test]
    fn sup_bound_respects_cauchy_estimate() {
        let f = TaylorSeries::polynomial_real(&[0.2, 2.0]).unwrap();
        assert!(f.clone().with_sup_bound(1.0).is_err());
        assert!(f.with_sup_bound(2.2).is_ok());
        assert!(TaylorSeries::polynomial_real(&[f64::NAN]).is_err());
        assert!(TaylorSeries::polynomial(vec![]).is_err());
    }

    #[test]
    fn make_function_examples() {
        assert_eq!(make_function("const:1").unwrap().coeffs(), &[c(1.0, 0.0)]);
        let m = make_function("monomial:k=5").unwrap();
        assert_eq!(m.degree(), 5);
        assert_eq!(m.coeffs()[5], c(1.0, 0.0));
        assert!(m.coeffs()[..5].iter().all(|a| *a == c(0.0, 0.0)));
        let h = make_function("hlog:N=100").unwrap();
        assert_eq!(h.degree(), 100);
        for (n, a) in h.coeffs().iter().enumerate() {
            assert_eq!(a.re, 1.0 / (n as f64 + 1.0));
        }
        let p = make_function("poly:1, -2.5e-1, 3i, 1-1i").unwrap();
        assert_eq!(p.coeffs(), &[c(1.0, 0.0), c(-0.25, 0.0), c(0.0, 3.0), c(1.0, -1.0)]);
        assert_eq!(p.sup_bound(), Some(1.0 + 0.25 + 3.0 + 2f64.sqrt()));
    }

    #[test]
    fn make_function_reports_positions() {
        match make_function("poly:1,2,x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 9),
            other => panic!("{other:?}"),
        }
        match make_function("hlog:N=abc") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
        assert!(matches!(make_function("nothing"), Err(Error::Parse { .. })));
        assert!(matches!(make_function("sine:k=1"), Err(Error::Parse { position: 0, .. })));
    }

    #[test]
    fn reliability_tracks_tail() {
        let h = make_function("hlog:N=10000").unwrap();
        let d2 = h.differentiate(2);
        assert!(d2.is_reliable_at(1.0 - 2f64.powi(-8)));
        assert!(!d2.is_reliable_at(1.0 - 2f64.powi(-9)));
        assert!(!h.is_reliable_at(1.0));
        assert!(TaylorSeries::polynomial_real(&[1.0]).unwrap().is_reliable_at(1.0));
    }

    #[test]
    fn sum_of_truncations_has_dominating_tail() {
        let a = make_function("geom:N=30").unwrap();
        let b = make_function("poly:0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,7").unwrap();
        let s = a.add(&b);
        assert_eq!(s.degree(), 30);
        match s.truncation() {
            Truncation::Tail(tail) => {
                assert_eq!(tail.growth, 0.0);
                assert!(tail.bound >= 8.0);
            }
            Truncation::Exact => panic!(),
        }
    }
}
