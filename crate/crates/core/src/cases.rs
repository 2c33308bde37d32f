//! Built-in benchmark problems on the `2 × 1` ellipse.
//!
//! | name | equation | exact solution | centre |
//! |---|---|---|---|
//! | `helmholtz` | `∇²u + u = 0` | `sin x` | `(0, 0)` |
//! | `laplace` | `∇²u = 0` | `x + y` | `(0, 0)` |
//! | `convdiff_x` | `∇²u = −u_x` | `e^{−x}` | `(0, 0)` |
//! | `convdiff_xy` | `∇²u = −u_x − u_y` | `e^{−x} + e^{−y}` | `(0, 0)` |
//! | `nonlinear_poisson` | `∇²u + u_xx u = 2 + 2x²` | `x²` | `(3, 0)` |
//! | `burger` | `∇²u + u_x u = 0` | `2/x` | `(3, 0)` |
//!
//! Each is rewritten into the Helmholtz split by adding `u` to both sides.
//! The exact solution doubles as the Dirichlet data. The nonlinear domains
//! are shifted so that `2/x` stays regular; their evaluation points are the
//! `convdiff_x` layout shifted by `+3` in `x`.
//!
//! The fourth evaluation point of the `helmholtz` and `laplace` tables is
//! `(0, −0.45)`: the `laplace` exact value listed there is `−0.450 = x + y`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::drm::{Derivative, OperatorSpec, ScalarField};
use crate::geometry::{EllipseDomain, GeometryError, KnotSet, Point2};
use crate::gensol::GeneralSolutionKernel;
use crate::kernels::ParticularPair;
use crate::scalar::Scalar;
use crate::solver::{self, BkmSolution, NonlinearTerm, ProblemSpec, SolverError};

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("unknown case '{name}'; valid names: {}", CaseName::ALL.map(|c| c.as_str()).join(", "))]
    UnknownName { name: String },
    #[error("unknown table {0}; valid tables are 1 to 6")]
    UnknownTable(usize),
    #[error("{case} is a nonlinear case and is solved with boundary knots only (got {interior} interior knots)")]
    BoundaryOnly { case: CaseName, interior: usize },
    #[error("at least one boundary knot is required")]
    NoBoundaryKnots,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseName {
    Helmholtz,
    Laplace,
    ConvDiffX,
    ConvDiffXY,
    NonlinearPoisson,
    Burger,
}

impl CaseName {
    pub const ALL: [Self; 6] = [
        Self::Helmholtz,
        Self::Laplace,
        Self::ConvDiffX,
        Self::ConvDiffXY,
        Self::NonlinearPoisson,
        Self::Burger,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Helmholtz => "helmholtz",
            Self::Laplace => "laplace",
            Self::ConvDiffX => "convdiff_x",
            Self::ConvDiffXY => "convdiff_xy",
            Self::NonlinearPoisson => "nonlinear_poisson",
            Self::Burger => "burger",
        }
    }

    /// Table number reproduced by this case.
    pub fn table(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).map_or(0, |i| i + 1)
    }

    pub fn from_table(index: usize) -> Result<Self, CaseError> {
        index
            .checked_sub(1)
            .and_then(|i| Self::ALL.get(i).copied())
            .ok_or(CaseError::UnknownTable(index))
    }

    pub fn is_nonlinear(self) -> bool {
        matches!(self, Self::NonlinearPoisson | Self::Burger)
    }

    /// Published average `|relative error|` in percent, where one is quoted.
    pub fn published_average_rel_err_pct(self) -> Option<f64> {
        match self {
            Self::NonlinearPoisson => Some(0.91),
            Self::Burger => Some(3.97),
            _ => None,
        }
    }
}

impl fmt::Display for CaseName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseName {
    type Err = CaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| CaseError::UnknownName { name: s.to_string() })
    }
}

/// A published comparison column, kept as reference constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedColumn {
    pub label: &'static str,
    pub values: &'static [f64],
}

const LINEAR_POINTS: [(f64, f64); 7] = [
    (1.5, 0.0),
    (1.2, -0.35),
    (0.6, -0.45),
    (0.0, -0.45),
    (0.9, 0.0),
    (0.3, 0.0),
    (0.0, 0.0),
];

const CONVDIFF_POINTS: [(f64, f64); 8] = [
    (1.5, 0.0),
    (1.2, -0.35),
    (0.0, -0.45),
    (-0.6, -0.45),
    (-1.5, 0.0),
    (0.3, 0.0),
    (-0.3, 0.0),
    (0.0, 0.0),
];

const NONLINEAR_POINTS: [(f64, f64); 12] = [
    (4.5, 0.0),
    (4.2, -0.35),
    (3.6, -0.45),
    (3.0, -0.45),
    (2.4, -0.45),
    (1.8, -0.35),
    (1.5, 0.0),
    (3.9, 0.0),
    (3.3, 0.0),
    (3.0, 0.0),
    (2.7, 0.0),
    (2.1, 0.0),
];

const HELMHOLTZ_COLUMNS: [PublishedColumn; 4] = [
    PublishedColumn {
        label: "Exact",
        values: &[0.997, 0.932, 0.565, 0.0, 0.783, 0.296, 0.0],
    },
    PublishedColumn {
        label: "DRBEM (33)",
        values: &[0.994, 0.928, 0.562, 0.0, 0.780, 0.294, 0.0],
    },
    PublishedColumn {
        label: "BKM (7)",
        values: &[0.999, 0.931, 0.557, 0.0, 0.779, 0.289, 0.0],
    },
    PublishedColumn {
        label: "BKM (11)",
        values: &[0.997, 0.932, 0.565, 0.0, 0.783, 0.296, 0.0],
    },
];

const LAPLACE_COLUMNS: [PublishedColumn; 4] = [
    PublishedColumn {
        label: "Exact",
        values: &[1.500, 0.850, 0.150, -0.450, 0.900, 0.300, 0.0],
    },
    PublishedColumn {
        label: "BEM (16)",
        values: &[1.507, 0.857, 0.154, -0.451, 0.913, 0.304, 0.0],
    },
    PublishedColumn {
        label: "BKM (3)",
        values: &[1.500, 0.850, 0.150, -0.450, 0.900, 0.300, 0.0],
    },
    PublishedColumn {
        label: "BKM (5)",
        values: &[1.500, 0.850, 0.150, -0.450, 0.900, 0.300, 0.0],
    },
];

const CONVDIFF_X_COLUMNS: [PublishedColumn; 4] = [
    PublishedColumn {
        label: "Exact",
        values: &[0.223, 0.301, 1.000, 1.822, 4.482, 0.741, 1.350, 1.000],
    },
    PublishedColumn {
        label: "DRBEM (33)",
        values: &[0.229, 0.307, 1.003, 1.819, 4.489, 0.745, 1.348, 1.002],
    },
    PublishedColumn {
        label: "BKM (15)",
        values: &[0.229, 0.301, 1.010, 1.822, 4.484, 0.744, 1.353, 1.003],
    },
    PublishedColumn {
        label: "BKM (18)",
        values: &[0.224, 0.305, 1.000, 1.818, 4.477, 0.743, 1.354, 1.004],
    },
];

const CONVDIFF_XY_COLUMNS: [PublishedColumn; 4] = [
    PublishedColumn {
        label: "Exact",
        values: &[1.223, 1.720, 2.568, 3.390, 5.482, 1.741, 2.350, 2.000],
    },
    PublishedColumn {
        label: "DRBEM (33)",
        values: &[1.231, 1.714, 2.557, 3.378, 5.485, 1.731, 2.335, 1.989],
    },
    PublishedColumn {
        label: "BKM (15)",
        values: &[1.225, 1.725, 2.546, 3.403, 5.490, 1.729, 2.349, 1.992],
    },
    PublishedColumn {
        label: "BKM (18)",
        values: &[1.224, 1.723, 2.551, 3.405, 5.491, 1.731, 2.350, 1.993],
    },
];

const NONLINEAR_POISSON_COLUMNS: [PublishedColumn; 3] = [
    PublishedColumn {
        label: "Exact",
        values: &[20.25, 17.64, 12.96, 9.00, 5.76, 3.24, 2.25, 15.21, 10.89, 9.00, 7.29, 4.41],
    },
    PublishedColumn {
        label: "BKM (5)",
        values: &[20.34, 17.74, 13.07, 9.09, 5.82, 3.26, 2.25, 15.36, 11.03, 9.12, 7.38, 4.46],
    },
    PublishedColumn {
        label: "Relative error %",
        values: &[-0.44, -0.58, -0.86, -0.98, -0.94, -0.77, -0.18, -0.99, -1.28, -1.32, -1.31, -1.14],
    },
];

const BURGER_COLUMNS: [PublishedColumn; 3] = [
    PublishedColumn {
        label: "Exact",
        values: &[0.444, 0.476, 0.555, 0.666, 0.833, 1.111, 1.333, 0.512, 0.606, 0.666, 0.740, 0.952],
    },
    PublishedColumn {
        label: "BKM (5)",
        values: &[0.479, 0.515, 0.585, 0.666, 0.808, 1.089, 1.300, 0.563, 0.632, 0.672, 0.725, 0.918],
    },
    PublishedColumn {
        label: "Relative error %",
        values: &[-7.9, -8.2, -5.4, 0.15, 3.1, 2.0, 2.5, -9.7, -4.2, -7.3, 2.0, 3.6],
    },
];

/// A benchmark problem with its exact solution and published table.
#[derive(Clone)]
pub struct BenchmarkCase<T> {
    pub name: CaseName,
    pub title: &'static str,
    pub problem: ProblemSpec<T>,
    pub exact: ScalarField<T>,
    pub eval_points: Vec<Point2<T>>,
    pub published_columns: &'static [PublishedColumn],
    pub default_boundary: usize,
    pub default_interior: usize,
}

impl<T: Scalar> fmt::Debug for BenchmarkCase<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BenchmarkCase")
            .field("name", &self.name)
            .field("problem", &self.problem)
            .field("eval_points", &self.eval_points)
            .finish()
    }
}

impl<T: Scalar> BenchmarkCase<T> {
    pub fn exact_at(&self, p: Point2<T>) -> T {
        (self.exact)(p)
    }
}

fn points<T: Scalar>(raw: &[(f64, f64)]) -> Vec<Point2<T>> {
    raw.iter().map(|&(x, y)| Point2::new(T::lit(x), T::lit(y))).collect()
}

/// Builds the named benchmark with its published defaults.
pub fn builtin<T: Scalar>(name: CaseName) -> BenchmarkCase<T> {
    let origin = EllipseDomain::benchmark(Point2::origin());
    let shifted = EllipseDomain::benchmark(Point2::new(T::lit(3.0), T::zero()));
    let unit = GeneralSolutionKernel::Helmholtz2D { lambda: T::one() };
    let one = T::one();
    let mq = |c: f64| ParticularPair::Multiquadric { shape: T::lit(c) };
    let (title, domain, source, forcing, exact, shape, nonlinear, n, l, pts, columns): (
        &'static str,
        EllipseDomain<T>,
        OperatorSpec<T>,
        Option<ScalarField<T>>,
        ScalarField<T>,
        f64,
        Vec<NonlinearTerm<T>>,
        usize,
        usize,
        Vec<Point2<T>>,
        &'static [PublishedColumn],
    ) = match name {
        CaseName::Helmholtz => (
            "Results for Helmholtz equation",
            origin,
            OperatorSpec::zero(),
            None,
            Arc::new(|p: Point2<T>| p.x.sin()),
            1.0,
            Vec::new(),
            11,
            0,
            points(&LINEAR_POINTS),
            &HELMHOLTZ_COLUMNS,
        ),
        CaseName::Laplace => (
            "Results for Laplace equation",
            origin,
            OperatorSpec::identity(),
            None,
            Arc::new(|p: Point2<T>| p.x + p.y),
            25.0,
            Vec::new(),
            5,
            0,
            points(&LINEAR_POINTS),
            &LAPLACE_COLUMNS,
        ),
        CaseName::ConvDiffX => (
            "Results for ∇²u = −∂u/∂x",
            origin,
            OperatorSpec::identity().with(Derivative::Dx, -one),
            None,
            Arc::new(|p: Point2<T>| (-p.x).exp()),
            4.0,
            Vec::new(),
            7,
            11,
            points(&CONVDIFF_POINTS),
            &CONVDIFF_X_COLUMNS,
        ),
        CaseName::ConvDiffXY => (
            "Results for ∇²u = −∂u/∂x − ∂u/∂y",
            origin,
            OperatorSpec::identity()
                .with(Derivative::Dx, -one)
                .with(Derivative::Dy, -one),
            None,
            Arc::new(|p: Point2<T>| (-p.x).exp() + (-p.y).exp()),
            5.5,
            Vec::new(),
            7,
            11,
            points(&CONVDIFF_POINTS),
            &CONVDIFF_XY_COLUMNS,
        ),
        CaseName::NonlinearPoisson => (
            "Results for nonlinear equation ∇²u + u_xx u = 2 + 2x²",
            shifted,
            OperatorSpec::identity(),
            Some(Arc::new(|p: Point2<T>| T::lit(2.0) + T::lit(2.0) * p.x * p.x)),
            Arc::new(|p: Point2<T>| p.x * p.x),
            2.0,
            vec![NonlinearTerm {
                derivative: Derivative::Dxx,
                coefficient: -one,
                multiplies_u: true,
            }],
            5,
            0,
            points(&NONLINEAR_POINTS),
            &NONLINEAR_POISSON_COLUMNS,
        ),
        CaseName::Burger => (
            "Results for Burger equation",
            shifted,
            OperatorSpec::identity(),
            None,
            Arc::new(|p: Point2<T>| T::lit(2.0) / p.x),
            1.0,
            vec![NonlinearTerm {
                derivative: Derivative::Dx,
                coefficient: -one,
                multiplies_u: true,
            }],
            5,
            0,
            points(&NONLINEAR_POINTS),
            &BURGER_COLUMNS,
        ),
    };
    BenchmarkCase {
        name,
        title,
        problem: ProblemSpec {
            domain,
            source_operator: source,
            forcing,
            dirichlet: exact.clone(),
            neumann: None,
            assignment: None,
            kernel: unit,
            rbf_pair: mq(shape),
            nonlinear_terms: nonlinear,
        },
        exact,
        eval_points: pts,
        published_columns: columns,
        default_boundary: n,
        default_interior: l,
    }
}

/// Optional replacements for the case defaults.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides<T> {
    pub rbf_pair: Option<ParticularPair<T>>,
    pub eval_points: Option<Vec<Point2<T>>>,
    /// Use these knots instead of the generated layout.
    pub knots: Option<KnotSet<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow<T> {
    pub point: Point2<T>,
    pub exact: T,
    pub computed: T,
    /// `(exact − computed) / exact · 100`; `None` where the exact value is zero.
    pub rel_err_pct: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary<T> {
    /// Mean `|rel_err_pct|` over the rows where it is defined.
    pub avg_abs_rel_err_pct: Option<T>,
    pub max_abs_err: T,
    pub condition_estimate_drm: Option<T>,
    pub condition_estimate_bkm: T,
    pub n_boundary: usize,
    pub n_interior: usize,
}

#[derive(Debug, Clone)]
pub struct Report<T> {
    pub case: CaseName,
    pub rows: Vec<ReportRow<T>>,
    pub summary: ReportSummary<T>,
    pub solution: BkmSolution<T>,
}

/// Signed relative error in percent, `None` when `exact` is zero.
pub fn relative_error_pct<T: Scalar>(exact: T, computed: T) -> Option<T> {
    (exact != T::zero()).then(|| (exact - computed) / exact * T::lit(100.0))
}

/// Solves a benchmark with the given knot counts and tabulates the errors.
pub fn run_case<T: Scalar>(
    case: &BenchmarkCase<T>,
    boundary_n: usize,
    interior_l: usize,
    overrides: &RunOverrides<T>,
) -> Result<Report<T>, CaseError> {
    let knots = match &overrides.knots {
        Some(k) => k.clone(),
        None => {
            if boundary_n == 0 {
                return Err(CaseError::NoBoundaryKnots);
            }
            KnotSet::on_ellipse(&case.problem.domain, boundary_n, interior_l)?
        }
    };
    if case.name.is_nonlinear() && knots.n_interior() > 0 {
        return Err(CaseError::BoundaryOnly {
            case: case.name,
            interior: knots.n_interior(),
        });
    }
    let mut problem = case.problem.clone();
    if let Some(pair) = overrides.rbf_pair {
        problem.rbf_pair = pair;
    }
    let solution = solver::solve(&problem, &knots)?;
    let eval_points = overrides.eval_points.as_ref().unwrap_or(&case.eval_points);
    let rows: Vec<ReportRow<T>> = eval_points
        .iter()
        .map(|&p| {
            let exact = case.exact_at(p);
            let computed = solution.evaluate(p);
            ReportRow {
                point: p,
                exact,
                computed,
                rel_err_pct: relative_error_pct(exact, computed),
            }
        })
        .collect();
    let defined: Vec<T> = rows.iter().filter_map(|r| r.rel_err_pct.map(T::abs)).collect();
    let avg_abs_rel_err_pct =
        (!defined.is_empty()).then(|| defined.iter().copied().sum::<T>() / T::from_count(defined.len()));
    let max_abs_err = rows
        .iter()
        .map(|r| (r.computed - r.exact).abs())
        .fold(T::zero(), T::max);
    Ok(Report {
        case: case.name,
        summary: ReportSummary {
            avg_abs_rel_err_pct,
            max_abs_err,
            condition_estimate_drm: solution.diagnostics.condition_drm,
            condition_estimate_bkm: solution.diagnostics.condition_bkm,
            n_boundary: knots.n_boundary(),
            n_interior: knots.n_interior(),
        },
        rows,
        solution,
    })
}
