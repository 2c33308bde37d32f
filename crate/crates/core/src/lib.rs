//! Boundary knot method: boundary-only, integration-free collocation with
//! non-singular general solutions and dual-reciprocity particular solutions.
//!
//! Every numerical type is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the bottom of this file fix the precision.
//!
//! ```
//! use bkm_core::cases::{builtin, run_case, CaseName, RunOverrides};
//!
//! let case = builtin::<f64>(CaseName::Laplace);
//! let report = run_case(&case, 5, 0, &RunOverrides::default()).unwrap();
//! assert!(report.summary.max_abs_err < 5e-3);
//! ```

pub mod cases;
pub mod drm;
pub mod geometry;
pub mod gensol;
pub mod kernels;
pub mod linalg;
pub mod scalar;
pub mod solver;
pub mod verify;

pub use cases::{builtin, run_case, BenchmarkCase, CaseError, CaseName, Report, RunOverrides};
pub use drm::{Derivative, DrmError, DrmSystem, OperatorSpec};
pub use geometry::{EllipseDomain, GeometryError, Knot, KnotKind, KnotSet, Point2};
pub use gensol::{ConvDiffForm, GeneralSolutionKernel, GensolError};
pub use kernels::{BesselSpec, KernelError, ParticularPair, RbfKind};
pub use linalg::{LinalgError, Matrix};
pub use scalar::Scalar;
pub use solver::{BkmSolution, NonlinearTerm, ProblemSpec, SolverError};

pub type Point64 = Point2<f64>;
pub type EllipseDomain64 = EllipseDomain<f64>;
pub type KnotSet64 = KnotSet<f64>;
pub type Matrix64 = Matrix<f64>;
pub type ParticularPair64 = ParticularPair<f64>;
pub type DrmSystem64 = DrmSystem<f64>;
pub type Kernel64 = GeneralSolutionKernel<f64>;
pub type ProblemSpec64 = ProblemSpec<f64>;
pub type BkmSolution64 = BkmSolution<f64>;
pub type Report64 = Report<f64>;

pub type Point32 = Point2<f32>;
pub type EllipseDomain32 = EllipseDomain<f32>;
pub type KnotSet32 = KnotSet<f32>;
pub type Matrix32 = Matrix<f32>;
pub type ParticularPair32 = ParticularPair<f32>;
pub type DrmSystem32 = DrmSystem<f32>;
pub type Kernel32 = GeneralSolutionKernel<f32>;
pub type ProblemSpec32 = ProblemSpec<f32>;
pub type BkmSolution32 = BkmSolution<f32>;
pub type Report32 = Report<f32>;
