//! Finite positive measures on [0, 1): moments, tails, quadrature against
//! kernels that blow up at t = 1, and Carleson-condition testing.
//!
//! Continuous parts are integrated in the distance variable s = 1 − t on
//! dyadic cells [2^{-k-1}, 2^{-k}], so integrands receive both t and s and can
//! form 1 − tz as (1 − z) + sz without cancellation.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::analytic::{parse_complex, Complex, TailModel};
use crate::error::{invalid, Error, Result};
use crate::grid::{gap, DiskPoint, GridConfig};
use crate::quadrature::graded_toward_zero;
use crate::special::gamma;

const GRADED_DEPTH: u32 = 64;
const GAUSS_ORDER: usize = 20;
const REFINE_LEVELS: usize = 5;
/// Octaves nearest t = 1 whose share of an integral signals an unresolved
/// endpoint.
const DEPTH_CHECK_OCTAVES: u32 = 8;
const DEPTH_CHECK_SHARE: f64 = 1e-4;

/// Weight function of an absolutely continuous measure, called as w(t, s)
/// with s = 1 − t.
pub type WeightFn = dyn Fn(f64, f64) -> f64 + Send + Sync;

#[derive(Clone)]
pub enum MeasureKind {
    Lebesgue,
    /// dμ = α(1−t)^{α−1} dt, so μ([t,1)) = (1−t)^α and the total mass is 1.
    PowerWeight { alpha: f64 },
    Atomic(Vec<(f64, f64)>),
    Density { label: String, weight: Arc<WeightFn> },
}

impl fmt::Debug for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lebesgue => write!(f, "Lebesgue"),
            Self::PowerWeight { alpha } => write!(f, "PowerWeight({alpha})"),
            Self::Atomic(atoms) => write!(f, "Atomic({atoms:?})"),
            Self::Density { label, .. } => write!(f, "Density({label})"),
        }
    }
}

/// A quadrature node: position t, distance s = 1 − t, and μ-weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub t: f64,
    pub s: f64,
    pub weight: f64,
}

struct Inner {
    kind: MeasureKind,
    total_mass: f64,
    nodes: [OnceLock<Arc<Vec<Node>>>; REFINE_LEVELS],
}

/// A finite positive Borel measure on [0, 1). Cheap to clone.
#[derive(Clone)]
pub struct RadialMeasure(Arc<Inner>);

impl fmt::Debug for RadialMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.kind)
    }
}

impl fmt::Display for RadialMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            MeasureKind::Lebesgue => write!(f, "lebesgue"),
            MeasureKind::PowerWeight { alpha } => write!(f, "power:alpha={alpha}"),
            MeasureKind::Atomic(atoms) => {
                let parts: Vec<String> = atoms.iter().map(|(t, w)| format!("t={t},w={w}")).collect();
                write!(f, "atomic:{}", parts.join(";"))
            }
            MeasureKind::Density { label, .. } => write!(f, "density:{label}"),
        }
    }
}

impl RadialMeasure {
    fn from_kind(kind: MeasureKind, total_mass: f64) -> Self {
        Self(Arc::new(Inner {
            kind,
            total_mass,
            nodes: Default::default(),
        }))
    }

    pub fn lebesgue() -> Self {
        Self::from_kind(MeasureKind::Lebesgue, 1.0)
    }

    pub fn power_weight(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return invalid(format!("power weight exponent must be positive, got {alpha}"));
        }
        Ok(Self::from_kind(MeasureKind::PowerWeight { alpha }, 1.0))
    }

    pub fn atomic(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return invalid("an atomic measure needs at least one atom");
        }
        for &(t, w) in &atoms {
            if !(0.0..1.0).contains(&t) {
                return invalid(format!("atom position {t} outside [0, 1)"));
            }
            if !(w > 0.0 && w.is_finite()) {
                return invalid(format!("atom weight {w} must be positive"));
            }
        }
        let mass = atoms.iter().map(|a| a.1).sum();
        Ok(Self::from_kind(MeasureKind::Atomic(atoms), mass))
    }

    /// dμ = w(t, 1−t) dt. `integrable` is the caller's assertion that w has
    /// finite integral; non-integrable weights do not define a finite measure
    /// and are rejected.
    pub fn density(label: impl Into<String>, weight: Arc<WeightFn>, integrable: bool) -> Result<Self> {
        if !integrable {
            return invalid("density weight must be integrable on [0, 1)");
        }
        let probe = Self::from_kind(
            MeasureKind::Density {
                label: label.into(),
                weight,
            },
            1.0,
        );
        let mass = probe.integrate_real(|_, _| 1.0, 1e-10)?;
        if !(mass > 0.0 && mass.is_finite()) {
            return invalid(format!("density has non-positive or infinite mass {mass}"));
        }
        let Inner { kind, .. } = Arc::try_unwrap(probe.0).unwrap_or_else(|_| unreachable!());
        Ok(Self::from_kind(kind, mass))
    }

    /// Parse `lebesgue`, `power:alpha=<α>` or `atomic:t=<t>,w=<w>;...`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let text = descriptor.trim();
        let perr = |position: usize, message: String| Error::Parse { position, message };
        if text == "lebesgue" {
            return Ok(Self::lebesgue());
        }
        let Some((kind, body)) = text.split_once(':') else {
            return Err(perr(0, format!("unknown measure '{text}'")));
        };
        let body_at = kind.len() + 1;
        match kind {
            "power" => {
                let value = body
                    .trim()
                    .strip_prefix("alpha=")
                    .ok_or_else(|| perr(body_at, "expected 'alpha=<value>'".into()))?;
                let alpha = value
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| perr(body_at + 6, format!("'{value}' is not a number")))?;
                Self::power_weight(alpha)
            }
            "atomic" => {
                let mut atoms = Vec::new();
                let mut at = body_at;
                for atom in body.split(';') {
                    let mut t = None;
                    let mut w = None;
                    let mut inner = at;
                    for field in atom.split(',') {
                        let (key, value) = field
                            .split_once('=')
                            .ok_or_else(|| perr(inner, format!("expected key=value, got '{field}'")))?;
                        let v = parse_complex(value, inner + key.len() + 1)?;
                        if v.im != 0.0 {
                            return Err(perr(inner, "atom data must be real".into()));
                        }
                        match key.trim() {
                            "t" => t = Some(v.re),
                            "w" => w = Some(v.re),
                            other => return Err(perr(inner, format!("unknown atom key '{other}'"))),
                        }
                        inner += field.len() + 1;
                    }
                    match (t, w) {
                        (Some(t), Some(w)) => atoms.push((t, w)),
                        _ => return Err(perr(at, "each atom needs t= and w=".into())),
                    }
                    at += atom.len() + 1;
                }
                Self::atomic(atoms)
            }
            other => Err(perr(0, format!("unknown measure kind '{other}'"))),
        }
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.0.kind
    }

    pub fn total_mass(&self) -> f64 {
        self.0.total_mass
    }

    /// Largest point of the support when it stays away from 1.
    pub fn support_max(&self) -> Option<f64> {
        match &self.0.kind {
            MeasureKind::Atomic(atoms) => Some(atoms.iter().map(|a| a.0).fold(0.0, f64::max)),
            _ => None,
        }
    }

    /// Envelope μ_n ≤ C (n+1)^{-γ} q^n valid for every n.
    pub fn moment_envelope(&self) -> TailModel {
        match &self.0.kind {
            MeasureKind::Lebesgue => TailModel::power(1.0, -1.0),
            MeasureKind::PowerWeight { alpha } => {
                // μ_n = Γ(α+1)Γ(n+1)/Γ(n+1+α); log-convexity of Γ gives
                // Γ(x)/Γ(x+α) ≤ x^{-α} for α ≥ 1, Wendel's inequality adds
                // the factor (1+α)^{1−α} for α < 1 (x = n+1 ≥ 1).
                let a = *alpha;
                let c = gamma(a + 1.0) * if a < 1.0 { (1.0 + a).powf(1.0 - a) } else { 1.0 };
                TailModel::power(c, -a)
            }
            MeasureKind::Atomic(atoms) => TailModel {
                bound: self.total_mass(),
                growth: 0.0,
                ratio: atoms.iter().map(|a| a.0).fold(0.0, f64::max),
            },
            MeasureKind::Density { .. } => TailModel::power(self.total_mass(), 0.0),
        }
    }

    /// Density in the s variable, for continuous kinds.
    fn s_density(&self, t: f64, s: f64) -> f64 {
        match &self.0.kind {
            MeasureKind::Lebesgue => 1.0,
            MeasureKind::PowerWeight { alpha } => alpha * s.powf(alpha - 1.0),
            MeasureKind::Density { weight, .. } => weight(t, s),
            MeasureKind::Atomic(_) => 0.0,
        }
    }

    /// μ of the interval t ∈ [1 − floor, 1), used for the piece below the
    /// finest graded cell.
    fn tail_below(&self, floor: f64) -> f64 {
        match &self.0.kind {
            MeasureKind::Lebesgue => floor,
            MeasureKind::PowerWeight { alpha } => floor.powf(*alpha),
            MeasureKind::Density { weight, .. } => weight(1.0, 0.5 * floor) * floor,
            MeasureKind::Atomic(_) => 0.0,
        }
    }

    /// Discretization at refinement `level` (each dyadic cell split into
    /// 2^level Gauss panels). Atoms appear with their exact weights; the
    /// continuous piece below 2^{-64} is a single node carrying its mass.
    pub fn nodes(&self, level: usize) -> Arc<Vec<Node>> {
        let level = level.min(REFINE_LEVELS - 1);
        self.0.nodes[level]
            .get_or_init(|| Arc::new(self.build_nodes(level)))
            .clone()
    }

    fn build_nodes(&self, level: usize) -> Vec<Node> {
        if let MeasureKind::Atomic(atoms) = &self.0.kind {
            return atoms
                .iter()
                .map(|&(t, w)| Node { t, s: 1.0 - t, weight: w })
                .collect();
        }
        let rule = graded_toward_zero(GRADED_DEPTH, 1 << level, GAUSS_ORDER);
        let mut out: Vec<Node> = rule
            .points
            .iter()
            .map(|&(s, w)| {
                let t = 1.0 - s;
                Node {
                    t,
                    s,
                    weight: w * self.s_density(t, s),
                }
            })
            .collect();
        let s = 0.5 * rule.floor;
        out.push(Node {
            t: 1.0 - s,
            s,
            weight: self.tail_below(rule.floor),
        });
        out
    }

    /// ∫ g(t, 1−t) dμ(t), refining the panels until consecutive levels agree
    /// to `rel_tol`.
    pub fn integrate<F>(&self, g: F, rel_tol: f64) -> Result<Complex>
    where
        F: Fn(f64, f64) -> Complex,
    {
        let sum_at = |level: usize| -> (Complex, Complex) {
            let nodes = self.nodes(level);
            let cut = gap(GRADED_DEPTH - DEPTH_CHECK_OCTAVES);
            let mut total = Complex::new(0.0, 0.0);
            let mut deep = Complex::new(0.0, 0.0);
            for n in nodes.iter() {
                let v = g(n.t, n.s) * n.weight;
                total += v;
                if n.s < cut {
                    deep += v;
                }
            }
            (total, deep)
        };
        let (mut previous, _) = sum_at(0);
        if matches!(self.0.kind, MeasureKind::Atomic(_)) {
            return Ok(previous);
        }
        let mut before = previous;
        for level in 1..REFINE_LEVELS {
            let (current, deep) = sum_at(level);
            let scale = current.norm().max(previous.norm());
            if (current - previous).norm() <= rel_tol * scale || scale < 1e-300 {
                if deep.norm() > DEPTH_CHECK_SHARE * current.norm() {
                    return Err(Error::NonConvergence {
                        what: "mass concentrated at the endpoint t = 1",
                        previous: previous.norm(),
                        last: current.norm(),
                    });
                }
                return Ok(current);
            }
            before = previous;
            previous = current;
        }
        Err(Error::NonConvergence {
            what: "measure quadrature",
            previous: before.norm(),
            last: previous.norm(),
        })
    }

    pub fn integrate_real<F>(&self, g: F, rel_tol: f64) -> Result<f64>
    where
        F: Fn(f64, f64) -> f64,
    {
        self.integrate(|t, s| Complex::new(g(t, s), 0.0), rel_tol).map(|v| v.re)
    }

    /// μ_n = ∫ t^n dμ.
    pub fn moment(&self, n: usize) -> Result<f64> {
        match &self.0.kind {
            MeasureKind::Lebesgue => Ok(1.0 / (n as f64 + 1.0)),
            MeasureKind::PowerWeight { alpha } => Ok(power_moments(*alpha, n)[n]),
            MeasureKind::Atomic(atoms) => Ok(atoms.iter().map(|&(t, w)| w * t.powi(n as i32)).sum()),
            MeasureKind::Density { .. } => {
                let n = n as f64;
                self.integrate_real(|_, s| (n * (-s).ln_1p()).exp(), 1e-11)
            }
        }
    }

    /// μ_0..=μ_max in one pass.
    pub fn moments(&self, max: usize) -> Result<MomentSequence> {
        let values = match &self.0.kind {
            MeasureKind::Lebesgue => (0..=max).map(|n| 1.0 / (n as f64 + 1.0)).collect(),
            MeasureKind::PowerWeight { alpha } => power_moments(*alpha, max),
            MeasureKind::Atomic(atoms) => {
                let mut v = vec![0.0; max + 1];
                for &(t, w) in atoms {
                    let mut p = w;
                    for slot in v.iter_mut() {
                        *slot += p;
                        p *= t;
                        if p == 0.0 {
                            break;
                        }
                    }
                }
                v
            }
            MeasureKind::Density { .. } => {
                let coarse = self.batch_moments(REFINE_LEVELS - 2, max);
                let fine = self.batch_moments(REFINE_LEVELS - 1, max);
                for (a, b) in coarse.iter().zip(&fine) {
                    if (a - b).abs() > 1e-8 * b.abs().max(1e-300) {
                        return Err(Error::NonConvergence {
                            what: "moment sequence",
                            previous: *a,
                            last: *b,
                        });
                    }
                }
                fine
            }
        };
        Ok(MomentSequence {
            values,
            source: self.clone(),
        })
    }

    fn batch_moments(&self, level: usize, max: usize) -> Vec<f64> {
        let nodes = self.nodes(level);
        let mut v = vec![0.0; max + 1];
        for n in nodes.iter() {
            let step = (-n.s).ln_1p();
            for (k, slot) in v.iter_mut().enumerate() {
                let p = n.weight * (k as f64 * step).exp();
                if p == 0.0 {
                    break;
                }
                *slot += p;
            }
        }
        v
    }

    /// μ([t, 1)).
    pub fn tail(&self, t: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&t) {
            return invalid(format!("tail point {t} outside [0, 1)"));
        }
        self.tail_at_gap(1.0 - t)
    }

    /// μ([1 − g, 1)) for a gap g ∈ (0, 1], exact when g is a power of two.
    pub fn tail_at_gap(&self, g: f64) -> Result<f64> {
        match &self.0.kind {
            MeasureKind::Lebesgue => Ok(g),
            MeasureKind::PowerWeight { alpha } => Ok(g.powf(*alpha)),
            MeasureKind::Atomic(atoms) => Ok(atoms.iter().filter(|a| 1.0 - a.0 <= g).map(|a| a.1).sum()),
            MeasureKind::Density { weight, .. } => {
                // rescale the graded rule onto s ∈ (0, g]
                let rule = graded_toward_zero(GRADED_DEPTH, 4, GAUSS_ORDER);
                let body: f64 = rule.points.iter().map(|&(u, w)| {
                    let s = g * u;
                    w * weight(1.0 - s, s)
                }).sum();
                let floor = g * rule.floor;
                Ok(g * body + weight(1.0, 0.5 * floor) * floor)
            }
        }
    }

    /// Running sup of μ([t,1))/(1−t)^s over t_j = 1 − 2^{-j}, j = 0..=J, with
    /// atom positions added at the level where they first fall below t_j.
    pub fn carleson_constant(&self, s: f64, grid: &GridConfig) -> Result<CarlesonEstimate> {
        self.carleson_constant_with(s, grid, StabilityThresholds::default())
    }

    pub fn carleson_constant_with(&self, s: f64, grid: &GridConfig, th: StabilityThresholds) -> Result<CarlesonEstimate> {
        if !(s > 0.0) {
            return invalid(format!("Carleson exponent must be positive, got {s}"));
        }
        let mut trace = Vec::with_capacity(grid.j_max as usize + 1);
        let mut sup: f64 = 0.0;
        let mut attained_at = 0.0;
        for j in grid.levels() {
            let g = gap(j);
            let mut candidates = vec![g];
            if let MeasureKind::Atomic(atoms) = &self.0.kind {
                let upper = if j == 0 { f64::INFINITY } else { gap(j - 1) };
                candidates.extend(atoms.iter().map(|a| 1.0 - a.0).filter(|&d| d < upper && d > g));
            }
            for d in candidates {
                let v = self.tail_at_gap(d)? / d.powf(s);
                if v > sup {
                    sup = v;
                    attained_at = 1.0 - d;
                }
            }
            trace.push(sup);
        }
        Ok(CarlesonEstimate {
            value: sup,
            attained_at,
            verdict: th.classify(&trace),
            trace,
        })
    }

    /// S₁: ∫ (1−|w|)^β / ((1−t)^q (1−|w|t)^{s+β−q}) dμ, or S₂ with |1 − wt| in
    /// place of 1 − |w|t.
    pub fn carleson_integral(&self, w: DiskPoint, beta: f64, q: f64, s: f64, variant: CarlesonVariant, rel_tol: f64) -> Result<f64> {
        if !(beta > 0.0 && s > 0.0 && q >= 0.0 && q < s) {
            return invalid("Carleson integral needs β > 0, s > 0 and 0 ≤ q < s");
        }
        let rho = w.modulus();
        let lead = w.gap.powf(beta);
        let expo = s + beta - q;
        self.integrate_real(
            |_, sigma| {
                let d = match variant {
                    CarlesonVariant::S1 => w.gap + sigma * rho,
                    CarlesonVariant::S2 => w.one_minus_tz(sigma).norm(),
                };
                lead / (sigma.powf(q) * d.powf(expo))
            },
            rel_tol,
        )
    }

    /// Running sup of a Carleson integral over w = r_j e^{iφ}, φ in `angles`,
    /// j = 0..=J.
    pub fn carleson_integral_sup(&self, beta: f64, q: f64, s: f64, variant: CarlesonVariant, grid: &GridConfig, angles: &[f64]) -> Result<CarlesonEstimate> {
        let mut trace = Vec::new();
        let mut sup: f64 = 0.0;
        let mut attained_at = 0.0;
        for j in grid.levels() {
            for &phi in angles {
                let wpt = DiskPoint::level(j, phi);
                let v = self.carleson_integral(wpt, beta, q, s, variant, grid.rel_tol.max(1e-10))?;
                if v > sup {
                    sup = v;
                    attained_at = wpt.modulus();
                }
            }
            trace.push(sup);
        }
        Ok(CarlesonEstimate {
            value: sup,
            attained_at,
            verdict: StabilityThresholds::default().classify(&trace),
            trace,
        })
    }
}

/// μ_n of α(1−t)^{α−1}dt via μ_{n+1} = μ_n (n+1)/(n+1+α).
fn power_moments(alpha: f64, max: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(max + 1);
    let mut m = 1.0;
    for n in 0..=max {
        v.push(m);
        let k = n as f64 + 1.0;
        m *= k / (k + alpha);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CarlesonVariant {
    S1,
    S2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Diverging,
    Inconclusive,
}

/// Thresholds deciding whether a running sup has settled or is running away.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityThresholds {
    /// Largest relative change over the window still called stable.
    pub stable_change: f64,
    /// Smallest per-level growth, at every step of the window, called diverging.
    pub diverging_growth: f64,
    pub window: usize,
}

impl Default for StabilityThresholds {
    fn default() -> Self {
        Self {
            stable_change: 0.01,
            diverging_growth: 0.10,
            window: 3,
        }
    }
}

impl StabilityThresholds {
    pub fn classify(&self, trace: &[f64]) -> Stability {
        let n = trace.len();
        if n <= self.window {
            return Stability::Inconclusive;
        }
        let last = trace[n - 1];
        let first = trace[n - 1 - self.window];
        if (last - first).abs() <= self.stable_change * last.abs() {
            return Stability::Stable;
        }
        let growing = (n - 1 - self.window..n - 1).all(|i| trace[i + 1] > (1.0 + self.diverging_growth) * trace[i]);
        if growing {
            Stability::Diverging
        } else {
            Stability::Inconclusive
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarlesonEstimate {
    pub value: f64,
    pub attained_at: f64,
    pub verdict: Stability,
    /// Running sup after each radial level.
    pub trace: Vec<f64>,
}

/// Cached μ_0..μ_M of a measure.
#[derive(Debug, Clone)]
pub struct MomentSequence {
    values: Vec<f64>,
    source: RadialMeasure,
}

impl MomentSequence {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> &RadialMeasure {
        &self.source
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn moment_examples() {
        assert_eq!(RadialMeasure::lebesgue().moment(3).unwrap(), 0.25);
        assert_eq!(RadialMeasure::atomic(vec![(0.5, 1.0)]).unwrap().moment(2).unwrap(), 0.25);
        // brute-force midpoint oracle for ∫ t · 2(1−t) dt
        let m = 200_000;
        let oracle: f64 = (0..m)
            .map(|i| {
                let t = (i as f64 + 0.5) / m as f64;
                t * 2.0 * (1.0 - t) / m as f64
            })
            .sum();
        let p2 = RadialMeasure::power_weight(2.0).unwrap();
        assert!(close(p2.moment(1).unwrap(), oracle, 1e-9));
        assert!(close(p2.moment(1).unwrap(), 1.0 / 3.0, 1e-15));
    }

    #[test]
    fn power_moments_match_quadrature() {
        for alpha in [0.5, 1.0, 2.0, 3.5] {
            let mu = RadialMeasure::power_weight(alpha).unwrap();
            for n in [0usize, 1, 7, 100, 5000] {
                let direct = mu.integrate_real(|_, s| (n as f64 * (-s).ln_1p()).exp(), 1e-12).unwrap();
                assert!(close(mu.moment(n).unwrap(), direct, 1e-10), "α={alpha} n={n}");
            }
        }
    }

    #[test]
    fn tail_examples() {
        assert_eq!(RadialMeasure::lebesgue().tail(0.75).unwrap(), 0.25);
        let p2 = RadialMeasure::power_weight(2.0).unwrap();
        assert!(close(p2.tail(0.9).unwrap(), 0.01, 1e-14));
        // midpoint oracle for ∫_{0.9}^1 2(1−t) dt
        let m = 10_000;
        let oracle: f64 = (0..m).map(|i| 2.0 * (0.1 - 0.1 * (i as f64 + 0.5) / m as f64) * 0.1 / m as f64).sum();
        assert!(close(p2.tail(0.9).unwrap(), oracle, 1e-12));
        let a = RadialMeasure::atomic(vec![(0.3, 2.0), (0.8, 1.0)]).unwrap();
        assert_eq!(a.tail(0.5).unwrap(), 1.0);
        assert_eq!(a.tail(0.0).unwrap(), 3.0);
    }

    #[test]
    fn integrate_examples() {
        let leb = RadialMeasure::lebesgue();
        assert!(close(leb.integrate_real(|_, _| 1.0, 1e-12).unwrap(), 1.0, 1e-14));
        // u = 1 − t/2 turns the integral into 4∫_{1/2}^1 (1−u)/u² du = 4 − 4 ln 2
        let v = leb.integrate_real(|t, _| t / (1.0 - 0.5 * t).powi(2), 1e-12).unwrap();
        assert!(close(v, 4.0 - 4.0 * 2f64.ln(), 1e-12));
        let a = RadialMeasure::atomic(vec![(0.5, 1.0)]).unwrap();
        assert_eq!(a.integrate_real(|t, _| t.powi(3), 1e-12).unwrap(), 0.125);
    }

    #[test]
    fn lebesgue_matches_unit_power_weight() {
        let a = RadialMeasure::lebesgue();
        let b = RadialMeasure::power_weight(1.0).unwrap();
        for n in [0usize, 3, 50] {
            assert!(close(a.moment(n).unwrap(), b.moment(n).unwrap(), 1e-12));
        }
        for t in [0.0, 0.3, 0.99] {
            assert!(close(a.tail(t).unwrap(), b.tail(t).unwrap(), 1e-12));
        }
        let g = |t: f64, s: f64| (1.0 + t * t) / (s + 1e-3).sqrt();
        assert!(close(a.integrate_real(g, 1e-12).unwrap(), b.integrate_real(g, 1e-12).unwrap(), 1e-12));
    }

    #[test]
    fn density_measure() {
        let w: Arc<WeightFn> = Arc::new(|t, _| 3.0 * t * t);
        let mu = RadialMeasure::density("3t^2", w, true).unwrap();
        assert!(close(mu.total_mass(), 1.0, 1e-12));
        assert!(close(mu.moment(2).unwrap(), 0.6, 1e-11));
        assert!(close(mu.tail(0.5).unwrap(), 0.875, 1e-12));
        let seq = mu.moments(40).unwrap();
        assert!(close(seq.values()[40], 3.0 / 43.0, 1e-10));
        let bad: Arc<WeightFn> = Arc::new(|_, s| 1.0 / s);
        assert!(RadialMeasure::density("1/s", bad, false).is_err());
    }

    #[test]
    fn constructor_contracts() {
        assert!(RadialMeasure::atomic(vec![(1.0, 1.0)]).is_err());
        assert!(RadialMeasure::atomic(vec![(0.5, 0.0)]).is_err());
        assert!(RadialMeasure::atomic(vec![]).is_err());
        assert!(RadialMeasure::power_weight(0.0).is_err());
    }

    #[test]
    fn measure_descriptors() {
        assert!(matches!(RadialMeasure::parse("lebesgue").unwrap().kind(), MeasureKind::Lebesgue));
        let p = RadialMeasure::parse("power:alpha=0.5").unwrap();
        assert!(matches!(p.kind(), MeasureKind::PowerWeight { alpha } if *alpha == 0.5));
        let a = RadialMeasure::parse("atomic:t=0.3,w=2;t=0.8,w=1").unwrap();
        assert_eq!(a.total_mass(), 3.0);
        assert_eq!(a.to_string(), "atomic:t=0.3,w=2;t=0.8,w=1");
        assert!(matches!(RadialMeasure::parse("atomic:t=0.3,x=2"), Err(Error::Parse { position: 13, .. })));
        assert!(RadialMeasure::parse("gauss").is_err());
    }

    #[test]
    fn carleson_constant_examples() {
        let grid = GridConfig::default();
        let leb = RadialMeasure::lebesgue().carleson_constant(1.0, &grid).unwrap();
        assert!(close(leb.value, 1.0, 1e-15) && leb.verdict == Stability::Stable);
        // elementary oracle: sup_t (1−t)^2/(1−t) on a dense grid
        let oracle = (0..10_000).map(|i| 1.0 - i as f64 / 10_000.0).fold(0.0, f64::max);
        let p2 = RadialMeasure::power_weight(2.0).unwrap().carleson_constant(1.0, &grid).unwrap();
        assert!(close(p2.value, oracle, 1e-12) && p2.verdict == Stability::Stable);
        let half = RadialMeasure::power_weight(0.5).unwrap().carleson_constant(1.0, &grid).unwrap();
        assert_eq!(half.verdict, Stability::Diverging);
        assert!(half.trace[20] >= 100.0 * half.trace[4]);
        let atoms = RadialMeasure::atomic(vec![(0.3, 2.0), (0.8, 1.0)]).unwrap();
        let c = atoms.carleson_constant(1.0, &grid).unwrap();
        assert!(close(c.value, 5.0, 1e-12) && c.verdict == Stability::Stable);
    }

    #[test]
    fn carleson_integral_examples() {
        let origin = DiskPoint::polar(1.0, 0.0).unwrap();
        let a = RadialMeasure::atomic(vec![(0.3, 2.0), (0.8, 1.0)]).unwrap();
        for mu in [RadialMeasure::lebesgue(), a] {
            let v = mu.carleson_integral(origin, 1.0, 0.0, 1.0, CarlesonVariant::S1, 1e-12).unwrap();
            assert!(close(v, mu.total_mass(), 1e-12));
        }
        let w = DiskPoint::polar(0.1, 0.0).unwrap();
        let v = RadialMeasure::lebesgue()
            .carleson_integral(w, 1.0, 0.0, 1.0, CarlesonVariant::S1, 1e-12)
            .unwrap();
        assert!(close(v, 1.0, 1e-12));
        let w = DiskPoint::polar(0.01, 0.0).unwrap();
        let v = RadialMeasure::power_weight(2.0)
            .unwrap()
            .carleson_integral(w, 1.0, 0.0, 1.0, CarlesonVariant::S1, 1e-12)
            .unwrap();
        assert!(v <= 1.0 + 1e-9, "{v}");
    }

    #[test]
    fn envelopes_dominate_moments() {
        let measures = [
            RadialMeasure::lebesgue(),
            RadialMeasure::power_weight(0.5).unwrap(),
            RadialMeasure::power_weight(0.9).unwrap(),
            RadialMeasure::power_weight(2.0).unwrap(),
            RadialMeasure::power_weight(3.7).unwrap(),
            RadialMeasure::atomic(vec![(0.3, 2.0), (0.8, 1.0)]).unwrap(),
        ];
        for mu in measures {
            let env = mu.moment_envelope();
            let seq = mu.moments(20_000).unwrap();
            for (n, m) in seq.values().iter().enumerate() {
                assert!(*m <= env.at(n) * (1.0 + 1e-12) + 1e-300, "{mu:?} n={n}");
            }
        }
    }

    #[test]
    fn moment_sequences_are_hausdorff() {
        for mu in [
            RadialMeasure::power_weight(0.5).unwrap(),
            RadialMeasure::atomic(vec![(0.3, 2.0), (0.8, 1.0)]).unwrap(),
            RadialMeasure::lebesgue(),
        ] {
            let v = mu.moments(500).unwrap();
            let v = v.values();
            assert!((v[0] - mu.total_mass()).abs() < 1e-12);
            for n in 0..v.len() - 2 {
                assert!(v[n + 1] <= v[n]);
                assert!(v[n] - 2.0 * v[n + 1] + v[n + 2] >= -1e-12);
            }
        }
    }

    #[test]
    fn classify_thresholds() {
        let th = StabilityThresholds::default();
        assert_eq!(th.classify(&[1.0, 2.0, 4.0, 8.0, 16.0]), Stability::Diverging);
        assert_eq!(th.classify(&[1.0, 2.0, 2.0, 2.0, 2.001]), Stability::Stable);
        assert_eq!(th.classify(&[1.0, 1.5, 1.6, 1.7]), Stability::Inconclusive);
        assert_eq!(th.classify(&[1.0]), Stability::Inconclusive);
    }
}
