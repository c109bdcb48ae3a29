#![allow(dead_code)]

use hilbert_core::spaces::SpaceFamily;
use hilbert_core::{make_function, Complex, GridConfig, RadialMeasure, TaylorSeries};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn random_polynomial(rng: &mut StdRng, max_degree: usize) -> TaylorSeries {
    let degree = rng.random_range(1..=max_degree);
    let coeffs = (0..=degree)
        .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    TaylorSeries::polynomial(coeffs).unwrap()
}

/// Twenty fixed test functions: random polynomials, constants, monomials,
/// a decaying polynomial and two truncated series.
pub fn corpus() -> Vec<TaylorSeries> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut out: Vec<TaylorSeries> = (0..12).map(|_| random_polynomial(&mut rng, 40)).collect();
    for d in ["const:1.5", "const:0.5-0.25i", "monomial:k=1", "monomial:k=3", "monomial:k=17"] {
        out.push(make_function(d).unwrap());
    }
    let decaying: Vec<f64> = (0..=30).map(|n| 1.0 / ((n + 1) as f64).powi(2)).collect();
    out.push(TaylorSeries::polynomial_real(&decaying).unwrap());
    out.push(make_function("hlog:N=300").unwrap());
    out.push(make_function("geom:N=300").unwrap());
    out
}

/// One instance of each of the seven families, plus parameter variants.
pub fn families() -> Vec<SpaceFamily> {
    vec![
        SpaceFamily::Bloch,
        SpaceFamily::Zygmund1,
        SpaceFamily::MeanLipschitz { p: 2.0, alpha: 0.5 },
        SpaceFamily::MeanLipschitz { p: 3.0, alpha: 1.0 / 3.0 },
        SpaceFamily::Hardy { q: 1.0 },
        SpaceFamily::Hardy { q: 2.0 },
        SpaceFamily::Hardy { q: 4.0 },
        SpaceFamily::Dirichlet { q: 2.0 },
        SpaceFamily::Dirichlet { q: 1.5 },
        SpaceFamily::HardyLittlewood { q: 1.0 },
        SpaceFamily::HardyLittlewood { q: 2.0 },
        SpaceFamily::Bq { q: 0.5 },
    ]
}

pub fn property_grid() -> GridConfig {
    GridConfig::new(10, 256, 1000, 1e-9).unwrap()
}

pub fn measures() -> Vec<RadialMeasure> {
    vec![
        RadialMeasure::lebesgue(),
        RadialMeasure::power_weight(0.5).unwrap(),
        RadialMeasure::power_weight(2.0).unwrap(),
        RadialMeasure::atomic(vec![(0.5, 1.0)]).unwrap(),
        RadialMeasure::atomic(vec![(0.3, 2.0), (0.8, 1.0)]).unwrap(),
    ]
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
