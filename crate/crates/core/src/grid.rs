//! Dyadic radial grid r_j = 1 − 2^{-j} shared by every sup and limit estimate.

use serde::{Deserialize, Serialize};

use crate::analytic::Complex;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Deepest radial level J.
    pub j_max: u32,
    pub angular_nodes: usize,
    /// Default truncation degree for series built by experiments.
    pub truncation: usize,
    pub rel_tol: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            j_max: 24,
            angular_nodes: 512,
            truncation: 10_000,
            rel_tol: 1e-9,
        }
    }
}

impl GridConfig {
    pub fn new(j_max: u32, angular_nodes: usize, truncation: usize, rel_tol: f64) -> Result<Self> {
        let g = Self {
            j_max,
            angular_nodes,
            truncation,
            rel_tol,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_level(self, j_max: u32) -> Result<Self> {
        Self { j_max, ..self }.validate_owned()
    }

    fn validate_owned(self) -> Result<Self> {
        self.validate().map(|_| self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.j_max < 4 || self.j_max > 52 {
            return invalid(format!("grid level J must lie in [4, 52], got {}", self.j_max));
        }
        if self.angular_nodes < 64 || self.angular_nodes % 2 != 0 {
            return invalid(format!("angular node count must be even and at least 64, got {}", self.angular_nodes));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return invalid(format!("relative tolerance must lie in (0, 1e-3], got {}", self.rel_tol));
        }
        Ok(())
    }

    /// Levels 0..=J; level 0 is the centre r = 0.
    pub fn levels(&self) -> impl Iterator<Item = u32> {
        0..=self.j_max
    }

    /// Apply a `J=<J>,nodes=<M>` descriptor (either key may be omitted).
    pub fn apply_descriptor(self, text: &str) -> Result<Self> {
        let mut g = self;
        let mut at = 0;
        for part in text.split(',') {
            let Some((key, value)) = part.split_once('=') else {
                return Err(Error::Parse {
                    position: at,
                    message: format!("expected key=value, got '{part}'"),
                });
            };
            let bad = |what: &str| Error::Parse {
                position: at + key.len() + 1,
                message: format!("'{}' is not a valid {what}", value.trim()),
            };
            match key.trim() {
                "J" | "j" => g.j_max = value.trim().parse().map_err(|_| bad("level"))?,
                "nodes" => g.angular_nodes = value.trim().parse().map_err(|_| bad("node count"))?,
                "N" | "truncation" => g.truncation = value.trim().parse().map_err(|_| bad("degree"))?,
                "tol" => g.rel_tol = value.trim().parse().map_err(|_| bad("tolerance"))?,
                other => {
                    return Err(Error::Parse {
                        position: at,
                        message: format!("unknown grid key '{other}'"),
                    })
                }
            }
            at += part.len() + 1;
        }
        g.validate_owned()
    }
}

/// 1 − r_j = 2^{-j}, exact in floating point.
pub fn gap(j: u32) -> f64 {
    (-(j as f64)).exp2()
}

pub fn radius(j: u32) -> f64 {
    1.0 - gap(j)
}

/// A point ρe^{iφ} of the open disk stored through its exact gap 1 − ρ, so
/// that 1 − z and |1 − z| stay accurate as ρ → 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint {
    pub gap: f64,
    pub angle: f64,
}

impl DiskPoint {
    pub fn polar(gap: f64, angle: f64) -> Result<Self> {
        if !(gap > 0.0 && gap <= 1.0 && angle.is_finite()) {
            return invalid(format!("point with gap {gap} is not in the open disk"));
        }
        Ok(Self { gap, angle })
    }

    pub fn level(j: u32, angle: f64) -> Self {
        Self { gap: gap(j), angle }
    }

    pub fn from_complex(z: Complex) -> Result<Self> {
        let m = z.norm();
        if !(m < 1.0) {
            return invalid(format!("|z| = {m} is not inside the unit disk"));
        }
        Ok(Self {
            gap: 1.0 - m,
            angle: if m == 0.0 { 0.0 } else { z.arg() },
        })
    }

    pub fn modulus(&self) -> f64 {
        1.0 - self.gap
    }

    pub fn z(&self) -> Complex {
        Complex::from_polar(self.modulus(), self.angle)
    }

    /// 1 − z computed without cancellation.
    pub fn one_minus(&self) -> Complex {
        let rho = self.modulus();
        let half = 0.5 * self.angle;
        Complex::new(self.gap + 2.0 * rho * half.sin().powi(2), -rho * self.angle.sin())
    }

    /// 1 − t z given s = 1 − t, i.e. (1 − z) + s z.
    pub fn one_minus_tz(&self, s: f64) -> Complex {
        self.one_minus() + self.z() * s
    }
}
