//! Thin interpolating sequences in the unit disk: pseudohyperbolic geometry, inner
//! functions, reproducing and model-space kernels, Carleson constants, interpolation
//! and Earl's bounded interpolation.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleson;
pub mod disk;
pub mod earl;
pub mod error;
pub mod exec;
pub mod grid;
pub mod inner;
pub mod interpolation;
mod invariants;
pub mod kernels;
pub mod spectral;
pub mod suites;
pub mod sweep;

pub use carleson::{DiscreteMeasure, Estimate, MeasureKind};
pub use disk::{BlaschkeSequence, DiskPoint, GapPoint, Generator, Window};
pub use earl::{BeurlingSystem, BoundedInterpolant, Construction};
pub use error::{Error, Result};
pub use exec::Exec;
pub use grid::{GridSpec, SupResult};
pub use inner::{Factor, InnerFunction, InnerValue};
pub use interpolation::{ApproxSolver, InterpolationProblem, IterationTrace, MinNormSolution};
pub use kernels::{GramWindow, KernelFamily};
pub use num_complex::Complex64;
pub use spectral::{EigenOptions, ExtremalEigen, HermitianMatrix};
pub use suites::{Corpus, SuiteId, SuiteReport};
pub use sweep::{Cutoff, Measured, SweepConfig, SweepReport, SweepRow, WindowPolicy};
