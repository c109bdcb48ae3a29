//! Verification experiments, batch runner and configuration for the CLI.

pub mod experiments;
pub mod report;

use std::path::Path;

use serde::Deserialize;

pub use experiments::{
    verify_lemma_2_2, verify_remark_2_1, verify_thm_1_1, verify_thm_1_2, verify_thm_1_3, verify_thm_1_3_profile,
    verify_thm_1_4, verify_thm_1_5,
};
pub use report::{to_csv, Computed, CSV_HEADER, Provenance, Report, Status, Target, Verdict};

use crate::error::{Error, Result};
use crate::grid::GridConfig;
use crate::measure::RadialMeasure;

/// Environment variable holding the default radial level J.
pub const GRID_LEVEL_ENV: &str = "HILBERT_GRID_J";

pub const EXPERIMENT_IDS: [&str; 7] = ["thm1.1", "thm1.2", "thm1.3", "thm1.4", "thm1.5", "lem2.2", "rem2.1"];

pub const DEFAULT_EXPONENTS: [f64; 6] = [-0.5, 0.0, 0.5, 1.0, 2.0, 3.0];

/// Lebesgue, PowerWeight(1/2), PowerWeight(2), one atom at 1/2, and two atoms.
pub fn bundled_families() -> Vec<RadialMeasure> {
    vec![
        RadialMeasure::lebesgue(),
        RadialMeasure::power_weight(0.5).expect("valid exponent"),
        RadialMeasure::power_weight(2.0).expect("valid exponent"),
        RadialMeasure::atomic(vec![(0.5, 1.0)]).expect("valid atoms"),
        RadialMeasure::atomic(vec![(0.3, 2.0), (0.8, 1.0)]).expect("valid atoms"),
    ]
}

fn failed(id: &str, err: Error) -> Report {
    let mut r = Report::new(id);
    r.verdict("experiment ran", Status::Inconclusive, err.to_string());
    r
}

/// Run one experiment by id. `measures` defaults to the bundled families
/// (Lebesgue alone for thm1.4 / thm1.5 when empty), `q` to 2 and 1/2.
pub fn run_experiment(id: &str, measures: &[RadialMeasure], q: Option<f64>, grid: &GridConfig) -> Result<Vec<Report>> {
    let single = |default_q: f64, f: &dyn Fn(&RadialMeasure, f64) -> Result<Report>| -> Result<Vec<Report>> {
        let list = if measures.is_empty() {
            vec![RadialMeasure::lebesgue()]
        } else {
            measures.to_vec()
        };
        list.iter().map(|m| f(m, q.unwrap_or(default_q))).collect()
    };
    match id {
        "thm1.1" => {
            let fams = if measures.is_empty() { bundled_families() } else { measures.to_vec() };
            Ok(vec![verify_thm_1_1(&fams, grid)])
        }
        "thm1.2" => Ok(vec![verify_thm_1_2(grid)]),
        "thm1.3" => Ok(vec![verify_thm_1_3(grid)]),
        "thm1.4" => single(2.0, &|m, q| verify_thm_1_4(m, q, grid)),
        "thm1.5" => single(0.5, &|m, q| verify_thm_1_5(m, q, grid)),
        "lem2.2" => Ok(vec![verify_lemma_2_2(&DEFAULT_EXPONENTS, grid)?]),
        "rem2.1" => Ok(vec![verify_remark_2_1(grid)]),
        "all" => Ok(run_all(grid)),
        other => Err(Error::InvalidInput(format!(
            "unknown experiment '{other}', expected one of {} or all",
            EXPERIMENT_IDS.join(", ")
        ))),
    }
}

/// Every experiment over the bundled families; a failing experiment is
/// reported and the batch continues.
pub fn run_all(grid: &GridConfig) -> Vec<Report> {
    let families = bundled_families();
    let mut out = vec![verify_thm_1_1(&families, grid), verify_thm_1_2(grid), verify_thm_1_3(grid)];
    for mu in &families {
        out.push(verify_thm_1_4(mu, 2.0, grid).unwrap_or_else(|e| failed("thm1.4", e)));
    }
    for mu in &families {
        out.push(verify_thm_1_5(mu, 0.5, grid).unwrap_or_else(|e| failed("thm1.5", e)));
    }
    out.push(verify_lemma_2_2(&DEFAULT_EXPONENTS, grid).unwrap_or_else(|e| failed("lem2.2", e)));
    out.push(verify_remark_2_1(grid));
    out
}

/// Optional TOML config; any key left out keeps the lower-priority value.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub j_max: Option<u32>,
    pub angular_nodes: Option<usize>,
    pub truncation: Option<usize>,
    pub rel_tol: Option<f64>,
    pub measure: Option<String>,
    pub q: Option<f64>,
}

impl FileConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&self, mut grid: GridConfig) -> Result<GridConfig> {
        if let Some(j) = self.j_max {
            grid.j_max = j;
        }
        if let Some(n) = self.angular_nodes {
            grid.angular_nodes = n;
        }
        if let Some(n) = self.truncation {
            grid.truncation = n;
        }
        if let Some(t) = self.rel_tol {
            grid.rel_tol = t;
        }
        grid.validate()?;
        Ok(grid)
    }
}

/// Resolve the grid: defaults, then the environment level, then the config
/// file, then the `--grid` descriptor.
pub fn resolve_grid(env_level: Option<&str>, file: Option<&FileConfig>, descriptor: Option<&str>) -> Result<GridConfig> {
    let mut grid = GridConfig::default();
    if let Some(level) = env_level {
        let j = level
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{GRID_LEVEL_ENV}='{level}' is not a level")))?;
        grid = grid.with_level(j)?;
    }
    if let Some(f) = file {
        grid = f.apply(grid)?;
    }
    if let Some(d) = descriptor {
        grid = grid.apply_descriptor(d)?;
    }
    Ok(grid)
}
