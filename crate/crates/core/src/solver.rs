//! Boundary knot collocation.
//!
//! A problem `∇²u + u = f + S{u}` (the Helmholtz split, `S` a linear operator
//! of order at most two) is solved as `u = Σₖ βₖ K(x, xₖ) + u_p`, with `K` a
//! non-singular general solution sourced at the boundary knots and `u_p` the
//! dual-reciprocity particular solution. For purely homogeneous problems
//! (`S = 0`, no forcing) `u_p` vanishes and any stationary 2D kernel may be
//! used; otherwise the kernel must be `J0(r)`, the homogeneous solution of
//! `∇² + 1` that the paired bases are built for.
//!
//! Unknowns are laid out as `[β (N) | interior u (L) | u at Neumann knots]`.
//! Rows, by knot:
//!
//! * Dirichlet: `Σ βₖ K(xᵢ, xₖ) + u_p(xᵢ) = b₁(xᵢ)`.
//! * Neumann: `Σ βₖ ∂K/∂n + ∂u_p/∂n = b₂(xᵢ)`, plus the value identity below,
//!   since `u` at that knot is an unknown of the particular solution.
//! * Interior and Neumann value identity: `Σ βₖ K(xₗ, xₖ) + u_p(xₗ) − uₗ = 0`.
//!
//! `u_p` at the nodes is `P u + q` (see [`DrmSystem::particular_affine_map`]);
//! its normal derivative is `Pₙ u + qₙ` with the same construction.
//!
//! The nonlinear path ([`solve_nonlinear_boundary_only`]) uses boundary knots
//! only: with Dirichlet data everywhere, every nodal `u` is known, so the
//! nonlinear right-hand side is evaluated once and a single boundary solve
//! `J β = b₁ − u_p` remains.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::drm::{Derivative, DrmError, DrmSystem, OperatorSpec, ScalarField};
use crate::geometry::{EllipseDomain, GeometryError, Knot, KnotSet, Point2};
use crate::gensol::{GeneralSolutionKernel, GensolError};
use crate::kernels::ParticularPair;
use crate::linalg::{self, LinalgError, LuFactor, Matrix};
use crate::scalar::Scalar;

pub use crate::linalg::hadamard;

/// Largest Dirichlet mismatch at the knots accepted after a solve.
pub const COLLOCATION_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid problem: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("the nonlinear path is boundary-only, got {count} interior knots")]
    InteriorKnots { count: usize },
    #[error("problem has nonlinear terms; use the boundary-only nonlinear solver")]
    NonlinearProblem,
    #[error("singular {stage} system (zero pivot at column {pivot})")]
    Singular { stage: &'static str, pivot: usize },
    #[error(transparent)]
    Drm(DrmError),
    #[error(transparent)]
    Kernel(#[from] GensolError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(LinalgError),
}

impl SolverError {
    fn from_linalg(stage: &'static str, e: LinalgError) -> Self {
        match e {
            LinalgError::Singular { pivot } => Self::Singular { stage, pivot },
            other => Self::Linalg(other),
        }
    }

    fn from_drm(e: DrmError) -> Self {
        match e {
            DrmError::Linalg(l) => Self::from_linalg("interpolation", l),
            other => Self::Drm(other),
        }
    }
}

/// Boundary condition attached to a boundary knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// Chooses the condition type of each boundary knot.
pub type BoundaryAssignment<T> = Arc<dyn Fn(&Knot<T>) -> BoundaryCondition + Send + Sync>;

/// Nonlinear source contribution `coefficient · ∂^α u`, optionally times `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearTerm<T> {
    pub derivative: Derivative,
    pub coefficient: T,
    pub multiplies_u: bool,
}

/// A boundary value problem written as `∇²u + u = f + S{u} + Σ nonlinear terms`.
#[derive(Clone)]
pub struct ProblemSpec<T> {
    pub domain: EllipseDomain<T>,
    /// `S`, the linear part moved to the right-hand side.
    pub source_operator: OperatorSpec<T>,
    pub forcing: Option<ScalarField<T>>,
    pub dirichlet: ScalarField<T>,
    pub neumann: Option<ScalarField<T>>,
    /// `None` makes every boundary knot Dirichlet.
    pub assignment: Option<BoundaryAssignment<T>>,
    pub kernel: GeneralSolutionKernel<T>,
    pub rbf_pair: ParticularPair<T>,
    pub nonlinear_terms: Vec<NonlinearTerm<T>>,
}

impl<T: Scalar> fmt::Debug for ProblemSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("domain", &self.domain)
            .field("source_operator", &self.source_operator)
            .field("forcing", &self.forcing.is_some())
            .field("neumann", &self.neumann.is_some())
            .field("kernel", &self.kernel)
            .field("rbf_pair", &self.rbf_pair)
            .field("nonlinear_terms", &self.nonlinear_terms)
            .finish()
    }
}

impl<T: Scalar> ProblemSpec<T> {
    /// A Dirichlet problem with no source, forcing, or nonlinear terms.
    pub fn dirichlet(
        domain: EllipseDomain<T>,
        kernel: GeneralSolutionKernel<T>,
        rbf_pair: ParticularPair<T>,
        dirichlet: ScalarField<T>,
    ) -> Self {
        Self {
            domain,
            source_operator: OperatorSpec::zero(),
            forcing: None,
            dirichlet,
            neumann: None,
            assignment: None,
            kernel,
            rbf_pair,
            nonlinear_terms: Vec::new(),
        }
    }

    /// Whether a particular solution has to be approximated.
    pub fn has_particular(&self) -> bool {
        !self.source_operator.is_zero() || self.forcing.is_some() || !self.nonlinear_terms.is_empty()
    }

    pub fn is_nonlinear(&self) -> bool {
        !self.nonlinear_terms.is_empty()
    }

    pub fn condition_of(&self, knot: &Knot<T>) -> BoundaryCondition {
        self.assignment
            .as_ref()
            .map_or(BoundaryCondition::Dirichlet, |assign| assign(knot))
    }

    /// Checks the problem against a knot set, collecting every violation.
    pub fn validate(&self, knots: &KnotSet<T>) -> Result<(), SolverError> {
        let mut issues = Vec::new();
        if let Err(e) = self.kernel.validate() {
            issues.push(e.to_string());
        }
        if !self.kernel.is_stationary_2d() {
            issues.push(format!("{} is not a stationary 2D kernel", self.kernel.name()));
        }
        if self.has_particular() && !is_unit_helmholtz(&self.kernel) {
            issues.push(format!(
                "particular solutions are paired with ∇² + 1, so the kernel must be Helmholtz2D with λ = 1 (got {:?})",
                self.kernel
            ));
        }
        if knots.n_boundary() == 0 {
            issues.push("at least one boundary knot is required".into());
        }
        let neumann = knots
            .boundary()
            .iter()
            .filter(|k| self.condition_of(k) == BoundaryCondition::Neumann)
            .count();
        if neumann > 0 && self.neumann.is_none() {
            issues.push(format!("{neumann} knots are assigned Neumann conditions but no Neumann data is given"));
        }
        if let Err(e) = knots.check_inside(&self.domain) {
            issues.push(e.to_string());
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(SolverError::Validation(issues))
        }
    }
}

fn is_unit_helmholtz<T: Scalar>(kernel: &GeneralSolutionKernel<T>) -> bool {
    matches!(kernel, GeneralSolutionKernel::Helmholtz2D { lambda } if *lambda == T::one())
}

/// Dual-reciprocity data reused between assembly and recovery of `α`.
#[derive(Debug, Clone)]
struct Particular<T> {
    drm: DrmSystem<T>,
    /// `S{A} A⁻¹` on node columns, mapping nodal `u` to nodal `S{u}`.
    source: Matrix<T>,
    forcing: Vec<T>,
}

impl<T: Scalar> Particular<T> {
    /// Nodal right-hand side `g = f + S{u}`.
    fn rhs(&self, u: &[T]) -> Result<Vec<T>, SolverError> {
        let su = self.source.mul_vec(u).map_err(|e| SolverError::from_linalg("recovery", e))?;
        Ok(su.iter().zip(&self.forcing).map(|(&a, &b)| a + b).collect())
    }
}

/// An assembled square collocation system.
#[derive(Debug, Clone)]
pub struct LinearSystem<T> {
    pub matrix: Matrix<T>,
    pub rhs: Vec<T>,
    /// Number of kernel coefficients `β`, the leading unknowns.
    pub n_beta: usize,
    /// Node index of each trailing unknown (interior knots, then Neumann knots).
    pub unknown_nodes: Vec<usize>,
    /// Nodal `u`, known at Dirichlet knots.
    known_u: Vec<Option<T>>,
    particular: Option<Particular<T>>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn size(&self) -> usize {
        self.rhs.len()
    }

    /// Condition estimate of the dual-reciprocity interpolation matrix.
    pub fn drm_condition_estimate(&self) -> Option<T> {
        self.particular.as_ref().map(|p| p.drm.condition_estimate())
    }
}

/// Assembles the collocation system of a linear problem.
pub fn assemble_linear<T: Scalar>(problem: &ProblemSpec<T>, knots: &KnotSet<T>) -> Result<LinearSystem<T>, SolverError> {
    if problem.is_nonlinear() {
        return Err(SolverError::NonlinearProblem);
    }
    problem.validate(knots)?;
    let kernel = problem.kernel;
    let n = knots.n_boundary();
    let nodes: Vec<Knot<T>> = knots.iter().copied().collect();
    let m = nodes.len();
    let conditions: Vec<Option<BoundaryCondition>> = nodes
        .iter()
        .map(|k| (k.normal.is_some()).then(|| problem.condition_of(k)))
        .collect();

    let known_u: Vec<Option<T>> = nodes
        .iter()
        .zip(&conditions)
        .map(|(k, c)| (*c == Some(BoundaryCondition::Dirichlet)).then(|| (problem.dirichlet)(k.position)))
        .collect();
    let neumann_nodes: Vec<usize> = (0..n).filter(|&i| conditions[i] == Some(BoundaryCondition::Neumann)).collect();
    let unknown_nodes: Vec<usize> = (n..m).chain(neumann_nodes.iter().copied()).collect();
    let mut column_of = vec![None; m];
    for (c, &node) in unknown_nodes.iter().enumerate() {
        column_of[node] = Some(n + c);
    }
    let size = n + unknown_nodes.len();

    let particular = if problem.has_particular() {
        let drm = DrmSystem::build(knots, problem.rbf_pair).map_err(SolverError::from_drm)?;
        let nodal_source = drm.nodal_operator(&problem.source_operator).map_err(SolverError::from_drm)?;
        let forcing: Vec<T> = match &problem.forcing {
            Some(f) => nodes.iter().map(|k| f(k.position)).collect(),
            None => vec![T::zero(); m],
        };
        Some(Particular {
            drm,
            source: nodal_source,
            forcing,
        })
    } else {
        None
    };

    // Rows of the nodal maps u_p = P u + q and ∂u_p/∂n = Pn u + qn.
    let up_row = |i: usize, normal: Option<Point2<T>>| -> Result<Option<(Vec<T>, T)>, SolverError> {
        let Some(p) = &particular else {
            return Ok(None);
        };
        let psi: Vec<T> = match normal {
            None => p.drm.particular_matrix().row(i).to_vec(),
            Some(nv) => p.drm.particular_normal_row(nodes[i].position, nv),
        };
        let y = p.drm.right_solve(&psi).map_err(SolverError::from_drm)?;
        let mut row = vec![T::zero(); m];
        for (j, r) in row.iter_mut().enumerate() {
            *r = (0..m).map(|k| y[k] * p.source[(k, j)]).sum();
        }
        let q = (0..m).map(|k| y[k] * p.forcing[k]).sum();
        Ok(Some((row, q)))
    };

    let mut matrix = Matrix::zeros(size, size);
    let mut rhs = vec![T::zero(); size];
    let sources: Vec<Point2<T>> = knots.boundary().iter().map(|k| k.position).collect();

    let mut write_row = |row: usize, node: usize, normal: Option<Point2<T>>, target: T, identity: bool| -> Result<(), SolverError> {
        let x = nodes[node].position;
        for (k, &xk) in sources.iter().enumerate() {
            matrix[(row, k)] = match normal {
                None => kernel.eval_2d(x, xk)?,
                Some(nv) => kernel.normal_derivative(x, xk, nv)?,
            };
        }
        let mut b = target;
        if let Some((p_row, q)) = up_row(node, normal)? {
            b = b - q;
            for (j, &pj) in p_row.iter().enumerate() {
                match (known_u[j], column_of[j]) {
                    (Some(u), _) => b = b - pj * u,
                    (None, Some(c)) => matrix[(row, c)] = matrix[(row, c)] + pj,
                    (None, None) => unreachable!("every node is known or unknown"),
                }
            }
        }
        if identity {
            let c = column_of[node].expect("identity rows belong to unknown nodes");
            matrix[(row, c)] = matrix[(row, c)] - T::one();
        }
        rhs[row] = b;
        Ok(())
    };

    for i in 0..n {
        let k = &nodes[i];
        match conditions[i] {
            Some(BoundaryCondition::Dirichlet) => write_row(i, i, None, (problem.dirichlet)(k.position), false)?,
            Some(BoundaryCondition::Neumann) => {
                let b2 = problem.neumann.as_ref().expect("validated")(k.position);
                write_row(i, i, k.normal, b2, false)?;
            }
            None => unreachable!("boundary knots carry normals"),
        }
    }
    for (c, &node) in unknown_nodes.iter().enumerate() {
        write_row(n + c, node, None, T::zero(), true)?;
    }

    Ok(LinearSystem {
        matrix,
        rhs,
        n_beta: n,
        unknown_nodes,
        known_u,
        particular,
    })
}

/// Dense solve of an assembled system; see [`linalg::solve_dense`].
pub fn solve_dense<T: Scalar>(system: &LinearSystem<T>) -> Result<linalg::DenseSolution<T>, SolverError> {
    linalg::solve_dense(&system.matrix, &system.rhs).map_err(|e| SolverError::from_linalg("collocation", e))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics<T> {
    /// One-norm condition estimate of the interpolation matrix, when used.
    pub condition_drm: Option<T>,
    /// One-norm condition estimate of the collocation matrix.
    pub condition_bkm: T,
    /// `‖Ax − b‖∞` of the collocation solve.
    pub residual_norm: T,
    /// Largest `|u − b₁|` over the Dirichlet knots.
    pub dirichlet_residual: T,
}

/// A solved problem: `u(x) = Σₖ βₖ K(x, xₖ) + u_p(x)`.
#[derive(Debug, Clone)]
pub struct BkmSolution<T> {
    pub beta: Vec<T>,
    /// Interpolation coefficients of `u_p`; empty when there is no particular part.
    pub alpha: Vec<T>,
    pub interior_u: Vec<T>,
    /// Nodal `u` at every knot, boundary first.
    pub nodal_u: Vec<T>,
    pub diagnostics: Diagnostics<T>,
    /// Nodal right-hand side `g` with `α = A⁻¹ [g; 0]`.
    source_values: Vec<T>,
    kernel: GeneralSolutionKernel<T>,
    sources: Vec<Point2<T>>,
    drm: Option<DrmSystem<T>>,
}

impl<T: Scalar> BkmSolution<T> {
    pub fn evaluate(&self, x: Point2<T>) -> T {
        let homogeneous = self
            .beta
            .iter()
            .zip(&self.sources)
            .fold(T::zero(), |acc, (&b, &xk)| acc + b * self.kernel.value_2d(x, xk));
        homogeneous + self.particular(x)
    }

    /// `u_p(x)`, evaluated as `ψ(x) A⁻¹ [g; 0]` rather than `ψ(x)·α`.
    pub fn particular(&self, x: Point2<T>) -> T {
        self.drm.as_ref().map_or(T::zero(), |d| {
            d.evaluate_up_from_source(&self.source_values, x)
                .expect("source length fixed at construction")
        })
    }

    pub fn kernel(&self) -> GeneralSolutionKernel<T> {
        self.kernel
    }

    pub fn drm(&self) -> Option<&DrmSystem<T>> {
        self.drm.as_ref()
    }

    fn dirichlet_residual(&mut self, problem: &ProblemSpec<T>, knots: &KnotSet<T>) {
        self.diagnostics.dirichlet_residual = knots
            .boundary()
            .iter()
            .filter(|k| problem.condition_of(k) == BoundaryCondition::Dirichlet)
            .map(|k| (self.evaluate(k.position) - (problem.dirichlet)(k.position)).abs())
            .fold(T::zero(), T::max);
    }
}

/// Solves a linear problem.
pub fn solve_linear<T: Scalar>(problem: &ProblemSpec<T>, knots: &KnotSet<T>) -> Result<BkmSolution<T>, SolverError> {
    let system = assemble_linear(problem, knots)?;
    let dense = solve_dense(&system)?;
    let n = system.n_beta;
    let mut nodal_u: Vec<T> = system.known_u.iter().map(|u| u.unwrap_or_else(T::zero)).collect();
    for (c, &node) in system.unknown_nodes.iter().enumerate() {
        nodal_u[node] = dense.x[n + c];
    }
    let (alpha, source_values, drm, condition_drm) = match system.particular {
        Some(p) => {
            let g = p.rhs(&nodal_u)?;
            let alpha = p.drm.solve_alpha(&g).map_err(SolverError::from_drm)?;
            let cond = p.drm.condition_estimate();
            (alpha, g, Some(p.drm), Some(cond))
        }
        None => (Vec::new(), Vec::new(), None, None),
    };
    let mut solution = BkmSolution {
        beta: dense.x[..n].to_vec(),
        alpha,
        interior_u: nodal_u[n..].to_vec(),
        nodal_u,
        diagnostics: Diagnostics {
            condition_drm,
            condition_bkm: dense.condition_estimate,
            residual_norm: dense.residual_norm,
            dirichlet_residual: T::zero(),
        },
        source_values,
        kernel: problem.kernel,
        sources: knots.boundary().iter().map(|k| k.position).collect(),
        drm,
    };
    solution.dirichlet_residual(problem, knots);
    Ok(solution)
}

/// One-step solve of a nonlinear Dirichlet problem with boundary knots only.
///
/// With `u = b₁` known at every node, the right-hand side
/// `g = f + S{u} + Σ c · (∂^α u) ∘ u` is evaluated through the interpolant,
/// `α = A⁻¹[g; 0]`, and `β` solves `J β = b₁ − u_p`. Exactly one interpolation
/// and one collocation factorization are performed.
pub fn solve_nonlinear_boundary_only<T: Scalar>(
    problem: &ProblemSpec<T>,
    knots: &KnotSet<T>,
) -> Result<BkmSolution<T>, SolverError> {
    if knots.n_interior() > 0 {
        return Err(SolverError::InteriorKnots {
            count: knots.n_interior(),
        });
    }
    problem.validate(knots)?;
    if knots
        .boundary()
        .iter()
        .any(|k| problem.condition_of(k) != BoundaryCondition::Dirichlet)
    {
        return Err(SolverError::Validation(vec![
            "the nonlinear path supports Dirichlet boundaries only".into(),
        ]));
    }
    let positions: Vec<Point2<T>> = knots.positions().collect();
    let u: Vec<T> = positions.iter().map(|&p| (problem.dirichlet)(p)).collect();
    let drm = DrmSystem::build(knots, problem.rbf_pair).map_err(SolverError::from_drm)?;

    let mut g: Vec<T> = match &problem.forcing {
        Some(f) => positions.iter().map(|&p| f(p)).collect(),
        None => vec![T::zero(); u.len()],
    };
    if !problem.source_operator.is_zero() {
        let su = drm
            .apply_operator(&problem.source_operator, &u)
            .map_err(SolverError::from_drm)?;
        g.iter_mut().zip(&su).for_each(|(a, &b)| *a = *a + b);
    }
    for term in &problem.nonlinear_terms {
        let op = OperatorSpec::zero().with(term.derivative, term.coefficient);
        let du = drm.apply_operator(&op, &u).map_err(SolverError::from_drm)?;
        let contribution = if term.multiplies_u {
            hadamard(&du, &u).map_err(|e| SolverError::from_linalg("nonlinear", e))?
        } else {
            du
        };
        g.iter_mut().zip(&contribution).for_each(|(a, &b)| *a = *a + b);
    }
    let alpha = drm.solve_alpha(&g).map_err(SolverError::from_drm)?;
    let up: Vec<T> = (0..positions.len())
        .map(|i| {
            let y = drm.right_solve(drm.particular_matrix().row(i))?;
            Ok(y.iter().zip(&g).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
        })
        .collect::<Result<_, DrmError>>()
        .map_err(SolverError::from_drm)?;

    let kernel = problem.kernel;
    let n = positions.len();
    let mut j = Matrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            j[(i, k)] = kernel.eval_2d(positions[i], positions[k])?;
        }
    }
    let rhs: Vec<T> = u.iter().zip(&up).map(|(&b, &p)| b - p).collect();
    let lu = LuFactor::new(&j).map_err(|e| SolverError::from_linalg("collocation", e))?;
    let beta = lu.solve(&rhs).map_err(|e| SolverError::from_linalg("collocation", e))?;
    let jb = j.mul_vec(&beta).map_err(|e| SolverError::from_linalg("collocation", e))?;
    let residual_norm = jb
        .iter()
        .zip(&rhs)
        .map(|(&a, &b)| (a - b).abs())
        .fold(T::zero(), T::max);

    let condition_drm = Some(drm.condition_estimate());
    let mut solution = BkmSolution {
        beta,
        alpha,
        interior_u: Vec::new(),
        nodal_u: u,
        diagnostics: Diagnostics {
            condition_drm,
            condition_bkm: lu.condition_estimate(),
            residual_norm,
            dirichlet_residual: T::zero(),
        },
        source_values: g,
        kernel,
        sources: positions,
        drm: Some(drm),
    };
    solution.dirichlet_residual(problem, knots);
    Ok(solution)
}

/// Dispatches to the linear or the nonlinear path.
pub fn solve<T: Scalar>(problem: &ProblemSpec<T>, knots: &KnotSet<T>) -> Result<BkmSolution<T>, SolverError> {
    if problem.is_nonlinear() {
        solve_nonlinear_boundary_only(problem, knots)
    } else {
        solve_linear(problem, knots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::factorization_count;

    fn domain() -> EllipseDomain<f64> {
        EllipseDomain::benchmark(Point2::origin())
    }

    fn helmholtz_problem() -> ProblemSpec<f64> {
        ProblemSpec::dirichlet(
            domain(),
            GeneralSolutionKernel::Helmholtz2D { lambda: 1.0 },
            ParticularPair::Multiquadric { shape: 1.0 },
            Arc::new(|p: Point2<f64>| p.x.sin()),
        )
    }

    #[test]
    fn homogeneous_dirichlet_is_plain_collocation() {
        let problem = helmholtz_problem();
        let knots = KnotSet::on_ellipse(&domain(), 6, 0).unwrap();
        let system = assemble_linear(&problem, &knots).unwrap();
        assert!(system.drm_condition_estimate().is_none());
        for (i, ki) in knots.boundary().iter().enumerate() {
            assert_eq!(system.rhs[i], ki.position.x.sin());
            for (j, kj) in knots.boundary().iter().enumerate() {
                let expected = crate::kernels::j0(ki.position.distance(kj.position));
                assert!((system.matrix[(i, j)] - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn collocation_reproduces_boundary_data() {
        let problem = helmholtz_problem();
        let knots = KnotSet::on_ellipse(&domain(), 9, 0).unwrap();
        let sol = solve_linear(&problem, &knots).unwrap();
        assert!(sol.diagnostics.dirichlet_residual < 1e-8);
        assert!(sol.alpha.is_empty());
    }

    #[test]
    fn nonlinear_problem_rejected_by_linear_path() {
        let mut problem = helmholtz_problem();
        problem.kernel = GeneralSolutionKernel::Helmholtz2D { lambda: 1.0 };
        problem.nonlinear_terms.push(NonlinearTerm {
            derivative: Derivative::Dx,
            coefficient: -1.0,
            multiplies_u: true,
        });
        let knots = KnotSet::on_ellipse(&domain(), 5, 0).unwrap();
        assert!(matches!(assemble_linear(&problem, &knots), Err(SolverError::NonlinearProblem)));
        let knots = KnotSet::on_ellipse(&domain(), 5, 2).unwrap();
        assert!(matches!(
            solve_nonlinear_boundary_only(&problem, &knots),
            Err(SolverError::InteriorKnots { count: 2 })
        ));
    }

    #[test]
    fn particular_part_requires_unit_helmholtz_kernel() {
        let mut problem = helmholtz_problem();
        problem.source_operator = OperatorSpec::identity();
        problem.kernel = GeneralSolutionKernel::Helmholtz2D { lambda: 2.0 };
        let knots = KnotSet::on_ellipse(&domain(), 5, 0).unwrap();
        assert!(matches!(solve_linear(&problem, &knots), Err(SolverError::Validation(_))));
    }

    #[test]
    fn neumann_without_data_reports_every_issue() {
        let mut problem = helmholtz_problem();
        problem.kernel = GeneralSolutionKernel::Helmholtz2D { lambda: -1.0 };
        problem.assignment = Some(Arc::new(|_: &Knot<f64>| BoundaryCondition::Neumann));
        let knots = KnotSet::on_ellipse(&domain(), 5, 0).unwrap();
        match solve_linear(&problem, &knots) {
            Err(SolverError::Validation(issues)) => assert_eq!(issues.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nonlinear_path_factors_twice() {
        let d = EllipseDomain::benchmark(Point2::new(3.0, 0.0));
        let problem = ProblemSpec {
            domain: d,
            source_operator: OperatorSpec::identity(),
            forcing: None,
            dirichlet: Arc::new(|p: Point2<f64>| 2.0 / p.x),
            neumann: None,
            assignment: None,
            kernel: GeneralSolutionKernel::Helmholtz2D { lambda: 1.0 },
            rbf_pair: ParticularPair::Multiquadric { shape: 1.0 },
            nonlinear_terms: vec![NonlinearTerm {
                derivative: Derivative::Dx,
                coefficient: -1.0,
                multiplies_u: true,
            }],
        };
        let knots = KnotSet::on_ellipse(&d, 5, 0).unwrap();
        let before = factorization_count();
        let sol = solve_nonlinear_boundary_only(&problem, &knots).unwrap();
        assert_eq!(factorization_count() - before, 2);
        assert!(sol.diagnostics.dirichlet_residual < 1e-8);
    }
}
