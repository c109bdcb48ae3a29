//! Numerical toolkit for generalized Hilbert matrix operators H_μ acting on
//! analytic functions of the unit disk: truncated Taylor series, radial
//! measures and their moments, the operator in coefficient and integral form,
//! norm evaluators for the usual function spaces, and a verification harness.

pub mod analytic;
pub mod error;
pub mod grid;
pub mod harness;
pub mod measure;
pub mod operator;
pub mod quadrature;
pub mod spaces;
pub mod special;

pub use analytic::{make_function, CircleMeanSpec, Complex, TailModel, TaylorSeries, Truncation};
pub use error::{Error, Result};
pub use grid::{DiskPoint, GridConfig};
pub use measure::{MomentSequence, RadialMeasure};
pub use operator::OperatorInstance;
pub use spaces::{NormResult, SpaceFamily, SpaceSpec};
