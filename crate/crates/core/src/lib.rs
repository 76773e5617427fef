//! Meshfree Poisson solver: Kansa collocation with generalized multiquadrics,
//! extended-precision dense linear algebra, and boundary-RMS-directed shape
//! parameter search.
//!
//! The crate is organized around the pipeline:
//!
//! - [`precision`]: decimal-precision contexts, dense storage, LU with
//!   partial pivoting, and 1-norm condition estimation;
//! - [`kernel`]: the generalized multiquadric family and its Laplacian;
//! - [`problem`]: Dirichlet Poisson problems with manufactured Gaussian
//!   solutions, collocation grids, and test point sets;
//! - [`solver`]: system assembly, solve with residual gating, evaluation,
//!   and RMS error reports;
//! - [`search`]: shape-parameter sweeps and the boundary-RMS directed search;
//! - [`expr`], [`config`], [`report`]: the batch front end (scalar
//!   expressions like `800*sqrt(2)*1e14`, run configuration, report/manifest
//!   files, and reference verification).

pub mod config;
pub mod expr;
pub mod kernel;
pub mod precision;
pub mod problem;
pub mod report;
pub mod search;
pub mod solver;

pub use kernel::{Dim, MultiquadricKernel};
pub use precision::{BigScalar, DenseMatrix, DenseVector, PrecisionContext};
pub use problem::{CollocationProblem, Domain, GridSpec, ManufacturedGaussian, Point};
pub use search::{directed_search, sweep, SearchConfig, SweepRecord};
pub use solver::{assemble, error_report, solve, CollocationSolution, ErrorReport};
