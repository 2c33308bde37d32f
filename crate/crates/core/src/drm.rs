//! Dual-reciprocity approximation of particular solutions.
//!
//! The right-hand side `g` of `∇²u_p + u_p = g` is interpolated at the knots
//! with a paired basis `ϕ` plus the linear tail `[x, y, 1]`,
//!
//! ```text
//! g(x) ≈ Σⱼ αⱼ ϕ(‖x − xⱼ‖) + α_x x + α_y y + α₁,
//! ```
//!
//! under the moment conditions `Σⱼ αⱼ xⱼ = Σⱼ αⱼ yⱼ = Σⱼ αⱼ = 0`. Because the
//! paired `φ` satisfies `∇²φ + φ = ϕ` and the tail polynomials have vanishing
//! Laplacian (so `∇²p + p = p`), the same coefficients give the particular
//! solution `u_p = Σⱼ αⱼ φ(‖x − xⱼ‖) + α_x x + α_y y + α₁`.
//!
//! Nodes are ordered boundary first, then interior; the tail occupies the last
//! three rows and columns of the interpolation matrix.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{KnotSet, Point2};
use crate::kernels::ParticularPair;
use crate::linalg::{LinalgError, LuFactor, Matrix};
use crate::scalar::Scalar;

/// Number of polynomial tail terms in 2D: `x`, `y`, `1`.
pub const TAIL: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DrmError {
    #[error("interpolation matrix: {0}")]
    Linalg(#[from] LinalgError),
    #[error("expected {expected} nodal values, got {found}")]
    Length { expected: usize, found: usize },
    #[error("unsupported derivative of order {order} (at most 2)")]
    UnsupportedDerivative { order: usize },
    #[error("second derivatives of the {0} basis are unbounded at coincident knots")]
    SingularDerivative(&'static str),
}

/// Partial derivative of order at most two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Derivative {
    Value,
    Dx,
    Dy,
    Dxx,
    Dyy,
    Dxy,
}

impl Derivative {
    /// From a multi-index `(i, j)` meaning `∂^{i+j} / ∂x^i ∂y^j`.
    pub fn from_multi_index(i: usize, j: usize) -> Result<Self, DrmError> {
        Ok(match (i, j) {
            (0, 0) => Self::Value,
            (1, 0) => Self::Dx,
            (0, 1) => Self::Dy,
            (2, 0) => Self::Dxx,
            (0, 2) => Self::Dyy,
            (1, 1) => Self::Dxy,
            _ => return Err(DrmError::UnsupportedDerivative { order: i + j }),
        })
    }

    pub fn order(self) -> usize {
        match self {
            Self::Value => 0,
            Self::Dx | Self::Dy => 1,
            Self::Dxx | Self::Dyy | Self::Dxy => 2,
        }
    }
}

/// A scalar function of position.
pub type ScalarField<T> = Arc<dyn Fn(Point2<T>) -> T + Send + Sync>;

#[derive(Clone)]
pub enum Coefficient<T> {
    Constant(T),
    Field(ScalarField<T>),
}

impl<T: Scalar> Coefficient<T> {
    pub fn at(&self, p: Point2<T>) -> T {
        match self {
            Self::Constant(c) => *c,
            Self::Field(f) => f(p),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Coefficient<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c:?})"),
            Self::Field(_) => f.write_str("Field(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Term<T> {
    pub derivative: Derivative,
    pub coefficient: Coefficient<T>,
}

/// A linear differential operator `Σ cₖ(x) ∂^{αₖ}` of order at most two.
#[derive(Debug, Clone, Default)]
pub struct OperatorSpec<T> {
    terms: Vec<Term<T>>,
}

impl<T: Scalar> OperatorSpec<T> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::zero().with(Derivative::Value, T::one())
    }

    /// Adds a constant-coefficient term.
    pub fn with(mut self, derivative: Derivative, coefficient: T) -> Self {
        self.terms.push(Term {
            derivative,
            coefficient: Coefficient::Constant(coefficient),
        });
        self
    }

    /// Adds a variable-coefficient term.
    pub fn with_field(mut self, derivative: Derivative, coefficient: ScalarField<T>) -> Self {
        self.terms.push(Term {
            derivative,
            coefficient: Coefficient::Field(coefficient),
        });
        self
    }

    /// Builds an operator from `(multi-index, constant coefficient)` pairs.
    pub fn from_multi_indices(terms: &[((usize, usize), T)]) -> Result<Self, DrmError> {
        terms.iter().try_fold(Self::zero(), |op, &((i, j), c)| {
            Ok(op.with(Derivative::from_multi_index(i, j)?, c))
        })
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> usize {
        self.terms.iter().map(|t| t.derivative.order()).max().unwrap_or(0)
    }
}

/// Nodal affine map `u_p = P u + q` of the particular solution.
#[derive(Debug, Clone)]
pub struct AffineMap<T> {
    pub p: Matrix<T>,
    pub q: Vec<T>,
}

/// Factored interpolation system on a fixed knot set.
#[derive(Clone)]
pub struct DrmSystem<T> {
    nodes: Vec<Point2<T>>,
    n_boundary: usize,
    pair: ParticularPair<T>,
    a: Matrix<T>,
    lu: LuFactor<T>,
    phi: Matrix<T>,
}

impl<T: fmt::Debug> fmt::Debug for DrmSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DrmSystem")
            .field("nodes", &self.nodes)
            .field("n_boundary", &self.n_boundary)
            .field("pair", &self.pair)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> DrmSystem<T> {
    /// Assembles and factors the augmented interpolation matrix.
    pub fn build(knots: &KnotSet<T>, pair: ParticularPair<T>) -> Result<Self, DrmError> {
        let nodes: Vec<Point2<T>> = knots.positions().collect();
        let n = nodes.len();
        let m = n + TAIL;
        let mut a = Matrix::zeros(m, m);
        let mut phi = Matrix::zeros(n, m);
        for i in 0..n {
            for j in 0..=i {
                let r = nodes[i].distance(nodes[j]);
                let v = pair.rbf(r);
                a[(i, j)] = v;
                a[(j, i)] = v;
                let p = pair.particular(r);
                phi[(i, j)] = p;
                phi[(j, i)] = p;
            }
            let tail = [nodes[i].x, nodes[i].y, T::one()];
            for (k, &t) in tail.iter().enumerate() {
                a[(i, n + k)] = t;
                a[(n + k, i)] = t;
                phi[(i, n + k)] = t;
            }
        }
        let lu = LuFactor::new(&a)?;
        Ok(Self {
            nodes,
            n_boundary: knots.n_boundary(),
            pair,
            a,
            lu,
            phi,
        })
    }

    pub fn nodes(&self) -> &[Point2<T>] {
        &self.nodes
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_boundary(&self) -> usize {
        self.n_boundary
    }

    /// Size of the augmented system, nodes plus tail.
    pub fn size(&self) -> usize {
        self.nodes.len() + TAIL
    }

    pub fn pair(&self) -> ParticularPair<T> {
        self.pair
    }

    /// Augmented interpolation matrix.
    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    /// Particular-solution evaluations at the nodes, with tail columns.
    pub fn particular_matrix(&self) -> &Matrix<T> {
        &self.phi
    }

    pub fn condition_estimate(&self) -> T {
        self.lu.condition_estimate()
    }

    fn check_len(&self, v: &[T]) -> Result<(), DrmError> {
        if v.len() != self.n_nodes() {
            return Err(DrmError::Length {
                expected: self.n_nodes(),
                found: v.len(),
            });
        }
        Ok(())
    }

    fn padded(&self, g: &[T]) -> Vec<T> {
        let mut rhs = g.to_vec();
        rhs.extend([T::zero(); TAIL]);
        rhs
    }

    /// Interpolation coefficients `α = A⁻¹ [g; 0]`.
    pub fn solve_alpha(&self, g: &[T]) -> Result<Vec<T>, DrmError> {
        self.check_len(g)?;
        Ok(self.lu.solve(&self.padded(g))?)
    }

    /// `A⁻¹` restricted to its node columns, `size × n_nodes`.
    pub fn inverse_node_columns(&self) -> Result<Matrix<T>, DrmError> {
        let n = self.n_nodes();
        let mut out = Matrix::zeros(self.size(), n);
        let mut e = vec![T::zero(); self.size()];
        for j in 0..n {
            e[j] = T::one();
            let col = self.lu.solve(&e)?;
            e[j] = T::zero();
            for (i, v) in col.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    /// `D{ϕ(‖x − xⱼ‖)}` for a single partial derivative, evaluated at `x`.
    fn basis_derivative(&self, d: Derivative, x: Point2<T>, j: usize) -> Result<T, DrmError> {
        let n = self.n_nodes();
        if j >= n {
            let tail = j - n;
            return Ok(match (d, tail) {
                (Derivative::Value, 0) => x.x,
                (Derivative::Value, 1) => x.y,
                (Derivative::Value, _) => T::one(),
                (Derivative::Dx, 0) | (Derivative::Dy, 1) => T::one(),
                _ => T::zero(),
            });
        }
        let s = x - self.nodes[j];
        let r = s.norm();
        let rd = self.pair.rbf_derivatives(r);
        Ok(match d {
            Derivative::Value => rd.value,
            Derivative::Dx => rd.gradient(s.x, s.y)[0],
            Derivative::Dy => rd.gradient(s.x, s.y)[1],
            Derivative::Dxx | Derivative::Dyy | Derivative::Dxy => {
                let h = rd.hessian(s.x, s.y).ok_or(DrmError::SingularDerivative(pair_name(&self.pair)))?;
                match d {
                    Derivative::Dxx => h[0],
                    Derivative::Dyy => h[1],
                    _ => h[2],
                }
            }
        })
    }

    /// `op{A}`: the operator applied to every basis column, evaluated at the
    /// nodes (`n_nodes × size`).
    pub fn operator_matrix(&self, op: &OperatorSpec<T>) -> Result<Matrix<T>, DrmError> {
        let n = self.n_nodes();
        let m = self.size();
        let mut out = Matrix::zeros(n, m);
        for term in op.terms() {
            for i in 0..n {
                let x = self.nodes[i];
                let c = term.coefficient.at(x);
                if c == T::zero() {
                    continue;
                }
                for j in 0..m {
                    out[(i, j)] = out[(i, j)] + c * self.basis_derivative(term.derivative, x, j)?;
                }
            }
        }
        Ok(out)
    }

    /// Nodal matrix `op{A} A⁻¹` restricted to node columns, mapping nodal
    /// values of `u` to nodal values of `op{u}` through the interpolant.
    pub fn nodal_operator(&self, op: &OperatorSpec<T>) -> Result<Matrix<T>, DrmError> {
        Ok(self.operator_matrix(op)?.matmul(&self.inverse_node_columns()?)?)
    }

    /// `op{A} A⁻¹ [u; 0]` at the nodes.
    pub fn apply_operator(&self, op: &OperatorSpec<T>, u: &[T]) -> Result<Vec<T>, DrmError> {
        self.check_len(u)?;
        let lambda = self.lu.solve(&self.padded(u))?;
        Ok(self.operator_matrix(op)?.mul_vec(&lambda)?)
    }

    /// `(P, q)` with `u_p = P u + q` at the nodes, for
    /// `u_p = Φ A⁻¹ [f + op{u}; 0]` and `op{u}` taken through the interpolant.
    pub fn particular_affine_map(&self, op: &OperatorSpec<T>, f: &[T]) -> Result<AffineMap<T>, DrmError> {
        self.check_len(f)?;
        let w = self.inverse_node_columns()?;
        let phi_w = self.phi.matmul(&w)?;
        let p = if op.is_zero() {
            Matrix::zeros(self.n_nodes(), self.n_nodes())
        } else {
            phi_w.matmul(&self.operator_matrix(op)?.matmul(&w)?)?
        };
        let q = phi_w.mul_vec(f)?;
        Ok(AffineMap { p, q })
    }

    /// Row vector `r` with `r·α = ∂u_p/∂n` at `x` for outward normal `n`.
    pub fn particular_normal_row(&self, x: Point2<T>, n: Point2<T>) -> Vec<T> {
        let mut row = Vec::with_capacity(self.size());
        for &node in &self.nodes {
            let s = x - node;
            let g = self.pair.particular_derivatives(s.norm()).gradient(s.x, s.y);
            row.push(g[0] * n.x + g[1] * n.y);
        }
        row.extend([n.x, n.y, T::zero()]);
        row
    }

    /// `u_p(x) = Σⱼ αⱼ φ(‖x − xⱼ‖) + α_x x + α_y y + α₁`.
    pub fn evaluate_up(&self, alpha: &[T], x: Point2<T>) -> T {
        let n = self.n_nodes();
        let mut s = T::zero();
        for (j, &node) in self.nodes.iter().enumerate() {
            s = s + alpha[j] * self.pair.particular(x.distance(node));
        }
        s + alpha[n] * x.x + alpha[n + 1] * x.y + alpha[n + 2]
    }

    /// Row `ψ(x)` with `ψ(x)·α = u_p(x)`.
    pub fn particular_row(&self, x: Point2<T>) -> Vec<T> {
        let mut row: Vec<T> = self.nodes.iter().map(|&node| self.pair.particular(x.distance(node))).collect();
        row.extend([x.x, x.y, T::one()]);
        row
    }

    /// `r A⁻¹` for a row vector `r`, by a solve against the symmetric `A`.
    ///
    /// For the rows of `Φ` these weights stay moderate even when `α` itself
    /// is large and oscillating, so `(r A⁻¹)·[g; 0]` loses far less to
    /// cancellation than `r·(A⁻¹ [g; 0])`.
    pub fn right_solve(&self, r: &[T]) -> Result<Vec<T>, DrmError> {
        if r.len() != self.size() {
            return Err(DrmError::Length {
                expected: self.size(),
                found: r.len(),
            });
        }
        Ok(self.lu.solve(r)?)
    }

    /// `u_p(x) = ψ(x) A⁻¹ [g; 0]` from the nodal right-hand side `g`.
    pub fn evaluate_up_from_source(&self, g: &[T], x: Point2<T>) -> Result<T, DrmError> {
        self.check_len(g)?;
        let y = self.right_solve(&self.particular_row(x))?;
        Ok(y.iter().zip(g).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
    }

    /// Gradient of `u_p` at `x`.
    pub fn gradient_up(&self, alpha: &[T], x: Point2<T>) -> Point2<T> {
        let n = self.n_nodes();
        let mut gx = alpha[n];
        let mut gy = alpha[n + 1];
        for (j, &node) in self.nodes.iter().enumerate() {
            let s = x - node;
            let g = self.pair.particular_derivatives(s.norm()).gradient(s.x, s.y);
            gx = gx + alpha[j] * g[0];
            gy = gy + alpha[j] * g[1];
        }
        Point2::new(gx, gy)
    }

    /// The interpolant `Σⱼ αⱼ ϕ(‖x − xⱼ‖) + tail` at `x`.
    pub fn evaluate_interpolant(&self, alpha: &[T], x: Point2<T>) -> T {
        let n = self.n_nodes();
        let mut s = T::zero();
        for (j, &node) in self.nodes.iter().enumerate() {
            s = s + alpha[j] * self.pair.rbf(x.distance(node));
        }
        s + alpha[n] * x.x + alpha[n + 1] * x.y + alpha[n + 2]
    }
}

fn pair_name<T>(pair: &ParticularPair<T>) -> &'static str {
    match pair {
        ParticularPair::Linear => "paired linear",
        ParticularPair::Multiquadric { .. } => "paired multiquadric",
        ParticularPair::ThinPlate => "paired thin plate",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{EllipseDomain, Knot};

    fn knots(points: &[(f64, f64)]) -> KnotSet<f64> {
        KnotSet::new(vec![], points.iter().map(|&(x, y)| Knot::interior(Point2::new(x, y))).collect()).unwrap()
    }

    #[test]
    fn two_knot_matrix_entries() {
        // Two nodes plus a tail cannot be factored (the tail is rank 3), so
        // only the assembled block is inspected.
        let k = knots(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(matches!(
            DrmSystem::build(&k, ParticularPair::Linear),
            Err(DrmError::Linalg(LinalgError::Singular { .. }))
        ));
        let k = knots(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let sys = DrmSystem::build(&k, ParticularPair::Linear).unwrap();
        assert_eq!(sys.matrix()[(0, 1)], 10.0);
        assert_eq!(sys.matrix()[(0, 0)], 0.0);
        assert!(sys.matrix().is_symmetric());
        for i in 3..6 {
            for j in 3..6 {
                assert_eq!(sys.matrix()[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn zero_data_gives_zero_coefficients() {
        let d = EllipseDomain::benchmark(Point2::origin());
        let k = KnotSet::on_ellipse(&d, 6, 2).unwrap();
        let sys = DrmSystem::build(&k, ParticularPair::Multiquadric { shape: 1.0 }).unwrap();
        assert!(sys.solve_alpha(&[0.0; 8]).unwrap().iter().all(|&a| a == 0.0));
        let map = sys.particular_affine_map(&OperatorSpec::zero(), &[0.0; 8]).unwrap();
        assert!(map.q.iter().all(|&v| v == 0.0));
        assert!(sys.solve_alpha(&[0.0; 7]).is_err());
    }

    #[test]
    fn tail_coefficients_evaluate_polynomials() {
        let d = EllipseDomain::benchmark(Point2::origin());
        let k = KnotSet::on_ellipse(&d, 5, 0).unwrap();
        let sys = DrmSystem::build(&k, ParticularPair::ThinPlate).unwrap();
        let mut alpha = vec![0.0; sys.size()];
        assert_eq!(sys.evaluate_up(&alpha, Point2::new(0.4, 0.1)), 0.0);
        alpha[7] = 1.0;
        assert_eq!(sys.evaluate_up(&alpha, Point2::new(0.4, 0.1)), 1.0);
        assert_eq!(sys.evaluate_up(&alpha, Point2::new(-7.0, 3.0)), 1.0);
    }

    #[test]
    fn second_derivative_of_linear_pair_is_reported() {
        let d = EllipseDomain::benchmark(Point2::origin());
        let k = KnotSet::on_ellipse(&d, 5, 0).unwrap();
        let sys = DrmSystem::build(&k, ParticularPair::Linear).unwrap();
        let op = OperatorSpec::zero().with(Derivative::Dxx, 1.0);
        assert!(matches!(sys.apply_operator(&op, &[1.0; 5]), Err(DrmError::SingularDerivative(_))));
        let op = OperatorSpec::zero().with(Derivative::Dx, 1.0);
        assert!(sys.apply_operator(&op, &[1.0; 5]).is_ok());
    }

    #[test]
    fn multi_index_order_limit() {
        assert_eq!(Derivative::from_multi_index(1, 1).unwrap(), Derivative::Dxy);
        assert_eq!(
            Derivative::from_multi_index(2, 1),
            Err(DrmError::UnsupportedDerivative { order: 3 })
        );
        assert!(OperatorSpec::<f64>::from_multi_indices(&[((0, 3), 1.0)]).is_err());
    }
}
