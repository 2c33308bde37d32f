//! Non-singular general solutions used as collocation kernels.
//!
//! | variant | kernel | governing equation |
//! |---|---|---|
//! | `Helmholtz2D` | `J0(λr)` | `∇²u + λ²u = 0` |
//! | `ModifiedHelmholtz2D` | `I0(λr)` | `∇²u − λ²u = 0` |
//! | `Helmholtz3D` | `sin(λr)/r` | `∇²u + λ²u = 0` |
//! | `ModifiedHelmholtz3D` | `sinh(λr)/r` | `∇²u − λ²u = 0` |
//! | `Biharmonic2D` | `c₁J0(λr) + c₂I0(λr)` | `∇⁴w − λ⁴w = 0` |
//! | `Biharmonic3D` | `c₀ sin(λr)/r + c₁ sinh(λr)/r` | `∇⁴w − λ⁴w = 0` |
//! | `ConvDiff2D` | `e^{−v·s/2D} J0(μr) / 2πD` | `D∇²φ + v·∇φ + kφ = 0` |
//! | `DiffusionTime2D` | `e^{−kt} J0(r)` | `∇²u = u_t / k` |
//! | `WaveTime2D` | `[A cos ct + B sin ct] J0(r)` | `∇²u = u_tt / c²` |
//!
//! `s = x − x_k` is the separation vector and `r = ‖s‖`.
//!
//! The biharmonic kernels satisfy the fourth-power form: `∇²J0(λr) = −λ²J0(λr)`
//! and `∇²I0(λr) = λ²I0(λr)` give `∇⁴ = λ⁴` on both parts.
//!
//! For `ConvDiff2D`, substituting `φ = e^{−v·s/2D} w` into the governing
//! equation leaves `∇²w + (k/D − |v|²/4D²) w = 0`. [`ConvDiffForm::Printed`]
//! uses `μ = √(|v|²/4D² + k/D)`, which only solves the equation when `v = 0`.
//! [`ConvDiffForm::Verified`] uses `μ² = k/D − |v|²/4D²` with the same
//! exponent, switching to `I0(√(−μ²) r)` when `μ² < 0`.

use std::fmt;

use thiserror::Error;

use crate::geometry::{dr_dn, Point2};
use crate::kernels::bessel::{i0, i1, j0, j1};
use crate::kernels::KernelError;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GensolError {
    #[error("invalid kernel parameter: {0}")]
    Parameter(String),
    #[error("{0}")]
    Time(String),
    #[error("expected {expected}-dimensional points, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("{0} has no normal-derivative rule (stationary 2D kernels only)")]
    Unsupported(&'static str),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Wavenumber convention for [`GeneralSolutionKernel::ConvDiff2D`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvDiffForm {
    /// `μ² = |v|²/4D² + k/D`.
    Printed,
    /// `μ² = k/D − |v|²/4D²`; solves the governing equation for all `v`.
    Verified,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneralSolutionKernel<T> {
    Helmholtz2D { lambda: T },
    ModifiedHelmholtz2D { lambda: T },
    Helmholtz3D { lambda: T },
    ModifiedHelmholtz3D { lambda: T },
    Biharmonic2D { lambda: T, c1: T, c2: T },
    Biharmonic3D { lambda: T, c0: T, c1: T },
    ConvDiff2D { diffusivity: T, velocity: [T; 2], reaction: T, form: ConvDiffForm },
    DiffusionTime2D { diffusivity: T },
    WaveTime2D { speed: T, a: T, b: T },
}

impl<T: Scalar> fmt::Display for GeneralSolutionKernel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Radial profile of the `J0`/`I0` part of a 2D kernel.
#[derive(Debug, Clone, Copy)]
enum Radial<T> {
    J { mu: T },
    I { kappa: T },
}

impl<T: Scalar> Radial<T> {
    fn value(self, r: T) -> T {
        match self {
            Self::J { mu } => j0(mu * r),
            Self::I { kappa } => i0(kappa * r),
        }
    }

    fn derivative(self, r: T) -> T {
        match self {
            Self::J { mu } => -mu * j1(mu * r),
            Self::I { kappa } => kappa * i1(kappa * r),
        }
    }
}

/// `sin(λr)/r` with the limit value `λ` at `r = 0`.
fn sinc<T: Scalar>(lambda: T, r: T) -> T {
    if r == T::zero() {
        lambda
    } else {
        (lambda * r).sin() / r
    }
}

/// `sinh(λr)/r` with the limit value `λ` at `r = 0`.
fn sinhc<T: Scalar>(lambda: T, r: T) -> T {
    if r == T::zero() {
        lambda
    } else {
        (lambda * r).sinh() / r
    }
}

impl<T: Scalar> GeneralSolutionKernel<T> {
    /// `J0(λr)` kernel of the 2D Helmholtz operator.
    pub fn helmholtz(lambda: T) -> Result<Self, GensolError> {
        let k = Self::Helmholtz2D { lambda };
        k.validate()?;
        Ok(k)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Helmholtz2D { .. } => "Helmholtz2D",
            Self::ModifiedHelmholtz2D { .. } => "ModifiedHelmholtz2D",
            Self::Helmholtz3D { .. } => "Helmholtz3D",
            Self::ModifiedHelmholtz3D { .. } => "ModifiedHelmholtz3D",
            Self::Biharmonic2D { .. } => "Biharmonic2D",
            Self::Biharmonic3D { .. } => "Biharmonic3D",
            Self::ConvDiff2D { .. } => "ConvDiff2D",
            Self::DiffusionTime2D { .. } => "DiffusionTime2D",
            Self::WaveTime2D { .. } => "WaveTime2D",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::Helmholtz3D { .. } | Self::ModifiedHelmholtz3D { .. } | Self::Biharmonic3D { .. } => 3,
            _ => 2,
        }
    }

    pub fn is_time_dependent(&self) -> bool {
        matches!(self, Self::DiffusionTime2D { .. } | Self::WaveTime2D { .. })
    }

    /// Stationary kernels in the plane, the ones usable for collocation.
    pub fn is_stationary_2d(&self) -> bool {
        self.dimension() == 2 && !self.is_time_dependent()
    }

    /// Checks the parameter ranges.
    pub fn validate(&self) -> Result<(), GensolError> {
        let positive = |name: &str, v: T| {
            if v.is_finite() && v > T::zero() {
                Ok(())
            } else {
                Err(GensolError::Parameter(format!(
                    "{} requires {name} > 0, got {v}",
                    self.name()
                )))
            }
        };
        let finite = |name: &str, v: T| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(GensolError::Parameter(format!("{} requires finite {name}", self.name())))
            }
        };
        match *self {
            Self::Helmholtz2D { lambda }
            | Self::ModifiedHelmholtz2D { lambda }
            | Self::Helmholtz3D { lambda }
            | Self::ModifiedHelmholtz3D { lambda } => positive("λ", lambda),
            Self::Biharmonic2D { lambda, c1, c2 } => {
                positive("λ", lambda)?;
                finite("c₁", c1)?;
                finite("c₂", c2)
            }
            Self::Biharmonic3D { lambda, c0, c1 } => {
                positive("λ", lambda)?;
                finite("c₀", c0)?;
                finite("c₁", c1)
            }
            Self::ConvDiff2D {
                diffusivity,
                velocity,
                reaction,
                form,
            } => {
                positive("D", diffusivity)?;
                finite("v_x", velocity[0])?;
                finite("v_y", velocity[1])?;
                finite("k", reaction)?;
                if form == ConvDiffForm::Printed && self.conv_diff_mu_squared() < T::zero() {
                    return Err(GensolError::Parameter(
                        "ConvDiff2D printed form requires |v|²/4D² + k/D ≥ 0".into(),
                    ));
                }
                Ok(())
            }
            Self::DiffusionTime2D { diffusivity } => positive("k", diffusivity),
            Self::WaveTime2D { speed, a, b } => {
                positive("c", speed)?;
                finite("A", a)?;
                finite("B", b)
            }
        }
    }

    /// `μ²` of the `ConvDiff2D` wavenumber under its form; zero for other variants.
    pub fn conv_diff_mu_squared(&self) -> T {
        match *self {
            Self::ConvDiff2D {
                diffusivity: d,
                velocity: v,
                reaction: k,
                form,
            } => {
                let drift = (v[0] * v[0] + v[1] * v[1]) / (T::lit(4.0) * d * d);
                match form {
                    ConvDiffForm::Printed => drift + k / d,
                    ConvDiffForm::Verified => k / d - drift,
                }
            }
            _ => T::zero(),
        }
    }

    fn conv_diff_radial(&self) -> Radial<T> {
        let mu2 = self.conv_diff_mu_squared();
        if mu2 >= T::zero() {
            Radial::J { mu: mu2.sqrt() }
        } else {
            Radial::I { kappa: (-mu2).sqrt() }
        }
    }

    fn check_time(&self, t: Option<T>) -> Result<Option<T>, GensolError> {
        match (self.is_time_dependent(), t) {
            (true, None) => Err(GensolError::Time(format!("{} requires a time argument", self.name()))),
            (false, Some(_)) => Err(GensolError::Time(format!("{} is stationary; no time argument allowed", self.name()))),
            (_, Some(t)) if !t.is_finite() => Err(GensolError::Time("time must be finite".into())),
            (_, t) => Ok(t),
        }
    }

    /// Kernel value for response point `x` and source `x_k`; `t` is required
    /// exactly for the time-dependent variants.
    pub fn eval(&self, x: &[T], xk: &[T], t: Option<T>) -> Result<T, GensolError> {
        self.validate()?;
        let dim = self.dimension();
        for p in [x, xk] {
            if p.len() != dim {
                return Err(GensolError::Dimension {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let t = self.check_time(t)?;
        let s: Vec<T> = x.iter().zip(xk).map(|(&a, &b)| a - b).collect();
        Ok(self.eval_separation(&s, t.unwrap_or_else(T::zero)))
    }

    /// Value of a stationary 2D kernel; the fast path used by the solver.
    pub fn eval_2d(&self, x: Point2<T>, xk: Point2<T>) -> Result<T, GensolError> {
        self.eval(&[x.x, x.y], &[xk.x, xk.y], None)
    }

    /// Stationary 2D value without parameter checks, for kernels already validated.
    pub(crate) fn value_2d(&self, x: Point2<T>, xk: Point2<T>) -> T {
        self.eval_separation(&[x.x - xk.x, x.y - xk.y], T::zero())
    }

    /// Kernel value for a validated variant at separation `s` and time `t`.
    fn eval_separation(&self, s: &[T], t: T) -> T {
        let r = s.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt();
        match *self {
            Self::Helmholtz2D { lambda } => j0(lambda * r),
            Self::ModifiedHelmholtz2D { lambda } => i0(lambda * r),
            Self::Helmholtz3D { lambda } => sinc(lambda, r),
            Self::ModifiedHelmholtz3D { lambda } => sinhc(lambda, r),
            Self::Biharmonic2D { lambda, c1, c2 } => c1 * j0(lambda * r) + c2 * i0(lambda * r),
            Self::Biharmonic3D { lambda, c0, c1 } => c0 * sinc(lambda, r) + c1 * sinhc(lambda, r),
            Self::ConvDiff2D {
                diffusivity: d,
                velocity: v,
                ..
            } => {
                let two_d = d + d;
                let drift = -(v[0] * s[0] + v[1] * s[1]) / two_d;
                drift.exp() * self.conv_diff_radial().value(r) / (T::PI() * two_d)
            }
            Self::DiffusionTime2D { diffusivity } => (-diffusivity * t).exp() * j0(r),
            Self::WaveTime2D { speed, a, b } => (a * (speed * t).cos() + b * (speed * t).sin()) * j0(r),
        }
    }

    /// Derivative of the kernel along the unit vector `n` at `x`, for the
    /// stationary 2D variants. Zero at coincident points for the radial ones.
    pub fn normal_derivative(&self, x: Point2<T>, xk: Point2<T>, n: Point2<T>) -> Result<T, GensolError> {
        self.validate()?;
        let s = x - xk;
        let r = s.norm();
        let drdn = dr_dn(x, xk, n);
        Ok(match *self {
            Self::Helmholtz2D { lambda } => -lambda * j1(lambda * r) * drdn,
            Self::ModifiedHelmholtz2D { lambda } => lambda * i1(lambda * r) * drdn,
            Self::Biharmonic2D { lambda, c1, c2 } => {
                lambda * (c2 * i1(lambda * r) - c1 * j1(lambda * r)) * drdn
            }
            Self::ConvDiff2D {
                diffusivity: d,
                velocity: v,
                ..
            } => {
                let two_d = d + d;
                let drift = -(v[0] * s.x + v[1] * s.y) / two_d;
                let drift_n = -(v[0] * n.x + v[1] * n.y) / two_d;
                let radial = self.conv_diff_radial();
                drift.exp() * (drift_n * radial.value(r) + radial.derivative(r) * drdn) / (T::PI() * two_d)
            }
            _ => return Err(GensolError::Unsupported(self.name())),
        })
    }

    /// Finite-difference residual of the governing equation, maximised over
    /// `points` (separations from the source, away from `r = 0`) and `times`
    /// (ignored for stationary variants), normalised by the largest kernel
    /// magnitude seen.
    pub fn pde_residual(&self, points: &[Vec<T>], times: &[T]) -> Result<T, GensolError> {
        self.validate()?;
        let dim = self.dimension();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(GensolError::Dimension {
                expected: dim,
                found: p.len(),
            });
        }
        let stationary = [T::zero()];
        let times = if self.is_time_dependent() {
            if times.is_empty() {
                return Err(GensolError::Time(format!("{} requires time samples", self.name())));
            }
            times
        } else {
            &stationary[..]
        };
        let h = T::lit(1e-4);
        let h4 = T::lit(1e-2);
        let mut worst = T::zero();
        let mut scale = T::zero();
        for p in points {
            for &t in times {
                let u = |q: &[T]| self.eval_separation(q, t);
                let value = u(p);
                scale = scale.max(value.abs());
                let res = match *self {
                    Self::Helmholtz2D { lambda } | Self::Helmholtz3D { lambda } => {
                        laplacian(&u, p, h) + lambda * lambda * value
                    }
                    Self::ModifiedHelmholtz2D { lambda } | Self::ModifiedHelmholtz3D { lambda } => {
                        laplacian(&u, p, h) - lambda * lambda * value
                    }
                    Self::Biharmonic2D { lambda, .. } | Self::Biharmonic3D { lambda, .. } => {
                        let l2 = lambda * lambda;
                        let lap = |q: &[T]| laplacian(&u, q, h4);
                        laplacian(&lap, p, h4) - l2 * l2 * value
                    }
                    Self::ConvDiff2D {
                        diffusivity: d,
                        velocity: v,
                        reaction: k,
                        ..
                    } => {
                        let g = gradient(&u, p, h);
                        d * laplacian(&u, p, h) + v[0] * g[0] + v[1] * g[1] + k * value
                    }
                    Self::DiffusionTime2D { diffusivity } => {
                        let ut = (self.eval_separation(p, t + h) - self.eval_separation(p, t - h)) / (h + h);
                        laplacian(&u, p, h) - ut / diffusivity
                    }
                    Self::WaveTime2D { speed, .. } => {
                        let utt = (self.eval_separation(p, t + h) - value - value + self.eval_separation(p, t - h))
                            / (h * h);
                        laplacian(&u, p, h) - utt / (speed * speed)
                    }
                };
                worst = worst.max(res.abs());
            }
        }
        Ok(if scale > T::zero() { worst / scale } else { worst })
    }
}

/// Central second-difference Laplacian in any dimension.
fn laplacian<T: Scalar>(f: &dyn Fn(&[T]) -> T, p: &[T], h: T) -> T {
    let centre = f(p);
    let mut q = p.to_vec();
    let mut sum = T::zero();
    for i in 0..p.len() {
        q[i] = p[i] + h;
        let plus = f(&q);
        q[i] = p[i] - h;
        let minus = f(&q);
        q[i] = p[i];
        sum = sum + plus + minus - centre - centre;
    }
    sum / (h * h)
}

fn gradient<T: Scalar>(f: &dyn Fn(&[T]) -> T, p: &[T], h: T) -> Vec<T> {
    let mut q = p.to_vec();
    (0..p.len())
        .map(|i| {
            q[i] = p[i] + h;
            let plus = f(&q);
            q[i] = p[i] - h;
            let minus = f(&q);
            q[i] = p[i];
            (plus - minus) / (h + h)
        })
        .collect()
}

/// Deterministic sample separations with radius in `[0.3, 3]`, spread over
/// directions by a golden-angle rule.
pub fn residual_samples<T: Scalar>(dim: usize, count: usize) -> Vec<Vec<T>> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let u = (i as f64 + 0.5) / count as f64;
            let r = 0.3 + 2.7 * u;
            let theta = golden * i as f64;
            let p = if dim == 3 {
                let z = 1.0 - 2.0 * u;
                let rho = (1.0 - z * z).sqrt();
                vec![r * rho * theta.cos(), r * rho * theta.sin(), r * z]
            } else {
                vec![r * theta.cos(), r * theta.sin()]
            };
            p.into_iter().map(T::lit).collect()
        })
        .collect()
}
