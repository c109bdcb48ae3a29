//! The generalized Hilbert operator H_μ: coefficient action through the
//! Hankel matrix (μ_{n+k}), integral form and its derivative kernels, the
//! change-of-contour form for Lebesgue measure, and the Cesàro operator.

use std::sync::{Arc, RwLock};

use crate::analytic::{normalized_tail, Complex, TailModel, TaylorSeries, Truncation};
use crate::error::{invalid, Error, Result};
use crate::grid::DiskPoint;
use crate::measure::RadialMeasure;
use crate::quadrature::graded_toward_zero;

/// Relative tolerance for kernel integrals unless a caller asks otherwise.
pub const KERNEL_REL_TOL: f64 = 1e-11;
/// Absolute bound on the neglected inner sum of the coefficient action.
pub const COEFF_TAIL_TOL: f64 = 1e-10;

/// H_μ with a lazily extended moment table.
#[derive(Debug)]
pub struct OperatorInstance {
    measure: RadialMeasure,
    moments: RwLock<Arc<Vec<f64>>>,
    max_degree: usize,
}

impl Clone for OperatorInstance {
    fn clone(&self) -> Self {
        Self {
            measure: self.measure.clone(),
            moments: RwLock::new(self.moments.read().map(|m| m.clone()).unwrap_or_default()),
            max_degree: self.max_degree,
        }
    }
}

/// Coefficient action together with the bound on what the truncated inner
/// sums left out.
#[derive(Debug, Clone)]
pub struct CoeffAction {
    pub series: TaylorSeries,
    /// Upper bound on |b_n − computed b_n| for the stored n.
    pub inner_error: f64,
}

impl OperatorInstance {
    pub fn new(measure: RadialMeasure) -> Self {
        Self {
            measure,
            moments: RwLock::new(Arc::new(Vec::new())),
            max_degree: 1 << 20,
        }
    }

    /// Largest output degree `coeff_action` accepts.
    pub fn with_max_degree(mut self, max_degree: usize) -> Self {
        self.max_degree = max_degree;
        self
    }

    pub fn measure(&self) -> &RadialMeasure {
        &self.measure
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// μ_0..=μ_m. The cached table only ever grows; each extension publishes
    /// a fresh immutable vector, so readers never see a partially written
    /// entry.
    pub fn moments_upto(&self, m: usize) -> Result<Arc<Vec<f64>>> {
        {
            let cached = self.moments.read().expect("moment cache poisoned");
            if cached.len() > m {
                return Ok(cached.clone());
            }
        }
        let target = (m + 1).next_power_of_two().max(64) - 1;
        let fresh = Arc::new(self.measure.moments(target)?.values().to_vec());
        let mut slot = self.moments.write().expect("moment cache poisoned");
        if slot.len() < fresh.len() {
            *slot = fresh;
        }
        Ok(slot.clone())
    }

    pub fn coeff_action(&self, f: &TaylorSeries, out_degree: usize) -> Result<TaylorSeries> {
        Ok(self.coeff_action_detailed(f, out_degree, COEFF_TAIL_TOL)?.series)
    }

    /// b_n = Σ_k μ_{n+k} a_k for n ≤ out_degree, inner sums cut at the degree
    /// K of f. For truncated f the omitted inner terms are bounded through
    /// the envelopes of μ_n and of a_k; the result carries the envelope
    /// |b_n| ≤ E_μ(n)·(Σ_{k≤K}|a_k| + T) as its own tail model.
    pub fn coeff_action_detailed(&self, f: &TaylorSeries, out_degree: usize, tolerance: f64) -> Result<CoeffAction> {
        if out_degree > self.max_degree {
            return invalid(format!("output degree {out_degree} exceeds the operator limit {}", self.max_degree));
        }
        let env = self.measure.moment_envelope();
        let k_max = f.degree();
        let inner = match f.truncation() {
            Truncation::Exact => 0.0,
            Truncation::Tail(tail) => {
                // μ_{n+k} ≤ E(n)·q^k with E the moment envelope, hence
                // Σ_{k>K} μ_{n+k}|a_k| ≤ E(n)·bound·Σ_{k>K}(k+1)^d (q q_a)^k
                tail.bound * normalized_tail(k_max, tail.growth, tail.ratio * env.ratio)
            }
        };
        if !inner.is_finite() || env.bound * inner > tolerance {
            return Err(Error::CoefficientTail {
                bound: env.bound * inner,
                tolerance,
            });
        }
        let moments = self.moments_upto(out_degree + k_max)?;
        let a = f.coeffs();
        let nonzero: Vec<(usize, Complex)> = a.iter().copied().enumerate().filter(|(_, c)| c.norm() != 0.0).collect();
        let coeffs: Vec<Complex> = (0..=out_degree)
            .map(|n| {
                nonzero
                    .iter()
                    .fold(Complex::new(0.0, 0.0), |acc, &(k, c)| acc + c * moments[n + k])
            })
            .collect();
        let mass: f64 = a.iter().map(|c| c.norm()).sum();
        // μ_{n+k} ≤ E(n)·q^k, so the lowest nonzero index of f tightens the envelope
        let shift = nonzero.first().map_or(0, |&(k, _)| k) as i32;
        let series = TaylorSeries::with_tail(
            coeffs,
            TailModel {
                bound: env.bound * (mass + inner) * env.ratio.powi(shift),
                ..env
            },
        )?;
        Ok(CoeffAction {
            series,
            inner_error: env.bound * inner,
        })
    }

    /// I_μ(f)(z) = ∫ f(t)/(1 − tz) dμ(t).
    pub fn integral_action(&self, f: &TaylorSeries, z: Complex) -> Result<Complex> {
        self.kernel_at(f, DiskPoint::from_complex(z)?, 0, KERNEL_REL_TOL)
    }

    /// H_μ(f)' or H_μ(f)'' through ∫ k! t^k f(t)/(1 − tz)^{k+1} dμ(t).
    pub fn kernel_derivative(&self, f: &TaylorSeries, z: Complex, order: u32) -> Result<Complex> {
        if !(1..=2).contains(&order) {
            return invalid(format!("derivative order must be 1 or 2, got {order}"));
        }
        self.kernel_at(f, DiskPoint::from_complex(z)?, order, KERNEL_REL_TOL)
    }

    /// ∫ k! t^k f(t)/(1 − tz)^{k+1} dμ(t) for k = 0, 1, 2, with 1 − tz formed
    /// from the exact gap of `z`.
    pub fn kernel_at(&self, f: &TaylorSeries, z: DiskPoint, order: u32, rel_tol: f64) -> Result<Complex> {
        if order > 2 {
            return invalid(format!("kernel order {order} is not supported"));
        }
        let fact = [1.0, 1.0, 2.0][order as usize];
        let p = order as i32 + 1;
        self.measure.integrate(
            |t, s| f.horner_real(t) * (fact * t.powi(order as i32)) / z.one_minus_tz(s).powi(p),
            rel_tol,
        )
    }

    /// Pre-tabulated kernel k! t^k f(t) w_i at the measure's nodes, so that
    /// many evaluations of the same kernel integral cost one pass each. The
    /// refinement level is the first at which all `probes` agree with the
    /// next coarser level to `rel_tol`.
    pub fn kernel_evaluator(&self, f: &TaylorSeries, order: u32, probes: &[DiskPoint], rel_tol: f64) -> Result<KernelEvaluator> {
        if order > 2 {
            return invalid(format!("kernel order {order} is not supported"));
        }
        let build = |level: usize| {
            let fact = [1.0, 1.0, 2.0][order as usize];
            let nodes = self.measure.nodes(level);
            KernelEvaluator {
                order,
                table: nodes
                    .iter()
                    .map(|n| (n.s, f.horner_real(n.t) * (fact * n.t.powi(order as i32) * n.weight)))
                    .filter(|(_, c)| c.norm() != 0.0)
                    .collect(),
            }
        };
        let mut coarse = build(0);
        if matches!(self.measure.kind(), crate::measure::MeasureKind::Atomic(_)) {
            return Ok(coarse);
        }
        for level in 1..5 {
            let fine = build(level);
            let agree = probes.iter().all(|&z| {
                let (a, b) = (coarse.eval(z), fine.eval(z));
                (a - b).norm() <= rel_tol * b.norm().max(1e-300)
            });
            if agree {
                return Ok(fine);
            }
            coarse = fine;
        }
        let z = probes[0];
        Err(Error::NonConvergence {
            what: "kernel tabulation",
            previous: build(3).eval(z).norm(),
            last: coarse.eval(z).norm(),
        })
    }
}

/// See [`OperatorInstance::kernel_evaluator`].
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    order: u32,
    /// (s_i, k! t_i^k f(t_i) w_i)
    table: Vec<(f64, Complex)>,
}

impl KernelEvaluator {
    pub fn eval(&self, z: DiskPoint) -> Complex {
        let one_minus = z.one_minus();
        let zz = z.z();
        let p = self.order as i32 + 1;
        self.table
            .iter()
            .fold(Complex::new(0.0, 0.0), |acc, &(s, c)| acc + c / (one_minus + zz * s).powi(p))
    }
}

/// H(f)'(z) for Lebesgue measure via the path ψ_t(z) = t/(1 − (1−t)z):
/// (1/(1−z)) ∫_0^1 ψ_t f(ψ_t) dt. The integrand changes on the scale
/// t ~ |1 − z|, so the rule is graded toward t = 0.
pub fn contour_form_derivative(f: &TaylorSeries, z: Complex) -> Result<Complex> {
    contour_form_at(f, DiskPoint::from_complex(z)?, KERNEL_REL_TOL)
}

pub fn contour_form_at(f: &TaylorSeries, z: DiskPoint, rel_tol: f64) -> Result<Complex> {
    let one_minus = z.one_minus();
    let zz = z.z();
    let sum_at = |subdiv: usize| -> Complex {
        let rule = graded_toward_zero(64, subdiv, 20);
        rule.points.iter().fold(Complex::new(0.0, 0.0), |acc, &(t, w)| {
            // 1 − (1−t)z = (1 − z) + tz
            let psi = Complex::new(t, 0.0) / (one_minus + zz * t);
            acc + psi * f.horner(psi) * w
        })
    };
    let mut previous = sum_at(1);
    for e in 1..5 {
        let current = sum_at(1 << e);
        if (current - previous).norm() <= rel_tol * current.norm().max(1e-300) {
            return Ok(current / one_minus);
        }
        previous = current;
    }
    Err(Error::NonConvergence {
        what: "contour form quadrature",
        previous: (sum_at(8) / one_minus).norm(),
        last: (previous / one_minus).norm(),
    })
}

/// Cesàro transform in coefficient form: c_n = (1/(n+1)) Σ_{k≤n} a_k, n ≤ out_degree.
pub fn cesaro_coefficients(f: &TaylorSeries, out_degree: usize) -> Result<TaylorSeries> {
    let a = f.coeffs();
    let mut running = Complex::new(0.0, 0.0);
    let coeffs: Vec<Complex> = (0..=out_degree)
        .map(|n| {
            if let Some(&c) = a.get(n) {
                running += c;
            }
            running / (n as f64 + 1.0)
        })
        .collect();
    let mass: f64 = a.iter().map(|c| c.norm()).sum();
    let tail = match f.truncation() {
        Truncation::Exact => TailModel::power(mass, -1.0),
        Truncation::Tail(t) => {
            let beyond = t.sum_beyond(f.degree(), 1.0);
            if beyond.is_finite() {
                TailModel::power(mass + beyond, -1.0)
            } else if t.growth >= 0.0 {
                // Σ_{k≤n} (k+1)^d ≤ (n+1)^{d+1}
                TailModel::power(mass + t.bound, t.growth)
            } else if t.growth > -1.0 {
                TailModel::power(mass + t.bound / (t.growth + 1.0), t.growth)
            } else {
                // d = −1 (a logarithm): log(n+1) + 1 ≤ (1 + 10/e)(n+1)^{1/10}
                TailModel::power(mass + t.bound * (1.0 + 10.0 / std::f64::consts::E), -0.9)
            }
        }
    };
    TaylorSeries::with_tail(coeffs, tail)
}

/// Cesàro transform at a point: ∫_0^1 f(tz)/(1 − tz) dt.
pub fn cesaro_point(f: &TaylorSeries, z: Complex) -> Result<Complex> {
    let p = DiskPoint::from_complex(z)?;
    let zz = p.z();
    RadialMeasure::lebesgue().integrate(|t, s| f.horner(zz * t) / p.one_minus_tz(s), KERNEL_REL_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::make_function;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn one() -> TaylorSeries {
        TaylorSeries::polynomial_real(&[1.0]).unwrap()
    }

    #[test]
    fn coeff_action_examples() {
        let leb = OperatorInstance::new(RadialMeasure::lebesgue());
        let b = leb.coeff_action(&one(), 100).unwrap();
        for (n, v) in b.coeffs().iter().enumerate() {
            assert_eq!(v.re, 1.0 / (n as f64 + 1.0));
        }
        let zero = TaylorSeries::polynomial_real(&[0.0]).unwrap();
        assert!(leb.coeff_action(&zero, 20).unwrap().coeffs().iter().all(|v| v.norm() == 0.0));
        let atom = OperatorInstance::new(RadialMeasure::atomic(vec![(0.5, 1.0)]).unwrap());
        let b = atom.coeff_action(&one(), 30).unwrap();
        for (n, v) in b.coeffs().iter().enumerate() {
            assert_eq!(v.re, 0.5f64.powi(n as i32));
        }
    }

    #[test]
    fn coeff_action_tail_handling() {
        let leb = OperatorInstance::new(RadialMeasure::lebesgue());
        assert!(matches!(
            leb.coeff_action(&make_function("geom:N=100").unwrap(), 10),
            Err(Error::CoefficientTail { .. })
        ));
        let atom = OperatorInstance::new(RadialMeasure::atomic(vec![(0.5, 1.0)]).unwrap());
        let r = atom
            .coeff_action_detailed(&make_function("geom:N=60").unwrap(), 10, 1e-10)
            .unwrap();
        // H_δ(1/(1−z)) has b_n = 0.5^n/(1 − 0.5) = 2^{1−n}
        for (n, v) in r.series.coeffs().iter().enumerate() {
            assert!((v.re - 2f64.powi(1 - n as i32)).abs() <= r.inner_error + 1e-15);
        }
        assert!(r.inner_error > 0.0 && r.inner_error < 1e-15);
    }

    #[test]
    fn integral_action_examples() {
        let leb = OperatorInstance::new(RadialMeasure::lebesgue());
        assert!((leb.integral_action(&one(), c(0.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        let v = leb.integral_action(&one(), c(0.5, 0.0)).unwrap();
        assert!((v.re - 2.0 * 2f64.ln()).abs() < 1e-12 && v.im.abs() < 1e-15);
        // linear in the measure: halving the atom weight halves the output
        let f = make_function("poly:1,2,-1").unwrap();
        let z = c(0.3, -0.5);
        let a1 = OperatorInstance::new(RadialMeasure::atomic(vec![(0.4, 1.0)]).unwrap());
        let a2 = OperatorInstance::new(RadialMeasure::atomic(vec![(0.4, 0.5)]).unwrap());
        let (v1, v2) = (a1.integral_action(&f, z).unwrap(), a2.integral_action(&f, z).unwrap());
        assert!((v1 - v2 * 2.0).norm() < 1e-15);
    }

    #[test]
    fn kernel_derivative_examples() {
        let leb = OperatorInstance::new(RadialMeasure::lebesgue());
        let o = c(0.0, 0.0);
        assert!((leb.kernel_derivative(&one(), o, 1).unwrap() - c(0.5, 0.0)).norm() < 1e-14);
        assert!((leb.kernel_derivative(&one(), o, 2).unwrap() - c(2.0 / 3.0, 0.0)).norm() < 1e-14);
        let zero = TaylorSeries::polynomial_real(&[0.0]).unwrap();
        for order in [1, 2] {
            assert_eq!(leb.kernel_derivative(&zero, c(0.2, 0.7), order).unwrap(), o);
        }
        assert!(leb.kernel_derivative(&one(), o, 3).is_err());
    }

    #[test]
    fn contour_form_examples() {
        assert!((contour_form_derivative(&one(), c(0.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-14);
        let leb = OperatorInstance::new(RadialMeasure::lebesgue());
        for z in [c(0.5, 0.0), c(-0.3, 0.6), c(0.0, 0.9)] {
            let a = contour_form_derivative(&one(), z).unwrap();
            let b = leb.kernel_derivative(&one(), z, 1).unwrap();
            assert!((a - b).norm() < 1e-9 * b.norm(), "{z}");
        }
        let zero = TaylorSeries::polynomial_real(&[0.0]).unwrap();
        assert_eq!(contour_form_derivative(&zero, c(0.4, 0.1)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn cesaro_examples() {
        let c1 = cesaro_coefficients(&one(), 20).unwrap();
        for (n, v) in c1.coeffs().iter().enumerate() {
            assert_eq!(v.re, 1.0 / (n as f64 + 1.0));
        }
        let id = TaylorSeries::polynomial_real(&[0.0, 1.0]).unwrap();
        let cz = cesaro_coefficients(&id, 5).unwrap();
        let expected = [0.0, 0.5, 1.0 / 3.0, 0.25, 0.2, 1.0 / 6.0];
        for (v, e) in cz.coeffs().iter().zip(expected) {
            assert!((v.re - e).abs() < 1e-16);
        }
        let f = make_function("poly:1,-0.5,0.25i").unwrap();
        let series = cesaro_coefficients(&f, 400).unwrap();
        for z in [c(0.5, 0.2), c(-0.9, 0.0), c(0.0, 0.9)] {
            let a = series.eval(z).unwrap();
            let b = cesaro_point(&f, z).unwrap();
            assert!((a - b).norm() < 1e-9, "{z}: {a} vs {b}");
        }
    }

    #[test]
    fn cesaro_bloch_bound_approaches_three() {
        // C(1)(z) = (1/z) log(1/(1−z)); C(1)'(r) = −log(1/(1−r))/r² + 1/(r(1−r))
        let d = |r: f64| -(-r).ln_1p() * -1.0 / (r * r) + 1.0 / (r * (1.0 - r));
        let mut best: f64 = 0.0;
        for j in 1..=30u32 {
            let s = (-(j as f64)).exp2();
            let r = 1.0 - s;
            best = best.max(s * (2.0 - s) * d(r));
        }
        assert!(1.0 + best > 2.999 && 1.0 + best <= 3.0);
        // the coefficient route agrees on reliable radii
        let series = cesaro_coefficients(&one(), 4000).unwrap();
        let v = series.differentiate(1).eval(c(0.9, 0.0)).unwrap();
        assert!((v.re - d(0.9)).abs() < 1e-8);
    }

    #[test]
    fn moment_cache_only_grows() {
        let op = OperatorInstance::new(RadialMeasure::power_weight(2.0).unwrap());
        let a = op.moments_upto(10).unwrap();
        let b = op.moments_upto(1000).unwrap();
        assert!(b.len() > 1000);
        assert_eq!(&b[..a.len()], &a[..]);
        let c = op.moments_upto(5).unwrap();
        assert_eq!(c.len(), b.len());
    }
}
