//! Radial basis functions and the paired particular solutions of the 2D
//! Helmholtz operator `∇² + 1`.
//!
//! A paired family starts from a smooth particular solution `φ(r)` and defines
//! its basis function by applying the radial operator,
//! `ϕ(r) = φ''(r) + φ'(r)/r + φ(r)`. Interpolating with `ϕ` then makes
//! `Σ αⱼ φ(‖x − xⱼ‖)` an exact particular solution of the interpolant.
//!
//! Multiquadric pair: `φ = (r² + c²)^{3/2}` gives
//! `ϕ = 6√(r² + c²) + 3r²/√(r² + c²) + (r² + c²)^{3/2}`. The first term is a
//! square root; a form with `6(r² + c²)` does not satisfy the identity.

use super::KernelError;
use crate::scalar::Scalar;

/// Selector used when an RBF is described by a tag plus optional parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RbfTag {
    Linear,
    Multiquadric,
    ThinPlate,
    PairedLinear,
    PairedMultiquadric,
    PairedThinPlate,
}

/// Radial basis function families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RbfKind<T> {
    /// `r`
    Linear,
    /// `√(r² + c²)`
    Multiquadric { shape: T },
    /// `r^{2m} log r`
    ThinPlate { order: u32 },
    /// `9r + r³`
    PairedLinear,
    /// `6√(r²+c²) + 3r²/√(r²+c²) + (r²+c²)^{3/2}`
    PairedMultiquadric { shape: T },
    /// `36 r⁴ log r + 12 r⁴ + r⁶ log r`
    PairedThinPlate,
}

impl<T: Scalar> RbfKind<T> {
    /// Builds a kind from a tag, validating the parameters the tag needs.
    pub fn from_parts(tag: RbfTag, shape: Option<T>, order: Option<u32>) -> Result<Self, KernelError> {
        let need_shape = || match shape {
            Some(c) if c > T::zero() && c.is_finite() => Ok(c),
            Some(c) => Err(KernelError::Config(format!("multiquadric shape must be positive, got {c}"))),
            None => Err(KernelError::Config("multiquadric requires a shape parameter".into())),
        };
        Ok(match tag {
            RbfTag::Linear => Self::Linear,
            RbfTag::Multiquadric => Self::Multiquadric { shape: need_shape()? },
            RbfTag::ThinPlate => match order {
                Some(m) if m >= 1 => Self::ThinPlate { order: m },
                Some(_) => return Err(KernelError::Config("thin plate order must be at least 1".into())),
                None => return Err(KernelError::Config("thin plate spline requires an order".into())),
            },
            RbfTag::PairedLinear => Self::PairedLinear,
            RbfTag::PairedMultiquadric => Self::PairedMultiquadric { shape: need_shape()? },
            RbfTag::PairedThinPlate => Self::PairedThinPlate,
        })
    }

    pub fn eval(&self, r: T) -> Result<T, KernelError> {
        check_distance(r)?;
        Ok(match *self {
            Self::Linear => r,
            Self::Multiquadric { shape } => (r * r + shape * shape).sqrt(),
            Self::ThinPlate { order } => r.powi(2 * order as i32) * log_or_zero(r),
            Self::PairedLinear => ParticularPair::Linear.rbf(r),
            Self::PairedMultiquadric { shape } => ParticularPair::Multiquadric { shape }.rbf(r),
            Self::PairedThinPlate => ParticularPair::ThinPlate.rbf(r),
        })
    }

    /// The paired particular solution, for the paired families.
    pub fn pair(&self) -> Option<ParticularPair<T>> {
        match *self {
            Self::PairedLinear => Some(ParticularPair::Linear),
            Self::PairedMultiquadric { shape } => Some(ParticularPair::Multiquadric { shape }),
            Self::PairedThinPlate => Some(ParticularPair::ThinPlate),
            _ => None,
        }
    }
}

fn check_distance<T: Scalar>(r: T) -> Result<(), KernelError> {
    if r.is_finite() && r >= T::zero() {
        Ok(())
    } else {
        Err(KernelError::Domain(format!("radial distance must be finite and non-negative, got {r}")))
    }
}

// `log r` multiplied into a positive power of r; the product's limit at 0 is 0.
#[inline]
fn log_or_zero<T: Scalar>(r: T) -> T {
    if r == T::zero() {
        T::zero()
    } else {
        r.ln()
    }
}

/// Radial value and derivatives `f(r)`, `f'(r)`, `f''(r)`, plus `f'(r)/r`
/// (`None` when that ratio is unbounded at `r = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialDerivatives<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
    pub d1_over_r: Option<T>,
}

impl<T: Scalar> RadialDerivatives<T> {
    /// Gradient of `f(‖p‖)` at separation `(dx, dy)`; zero at the origin.
    pub fn gradient(&self, dx: T, dy: T) -> [T; 2] {
        if dx == T::zero() && dy == T::zero() {
            return [T::zero(); 2];
        }
        let g = self.d1_over_r.unwrap_or_else(|| self.d1 / (dx * dx + dy * dy).sqrt());
        [g * dx, g * dy]
    }

    /// Second derivatives `[f_xx, f_yy, f_xy]` at separation `(dx, dy)`.
    /// `None` if the Hessian is unbounded at the origin.
    pub fn hessian(&self, dx: T, dy: T) -> Option<[T; 3]> {
        let r2 = dx * dx + dy * dy;
        if r2 == T::zero() {
            // Smooth radial function: Hessian is f''(0)·I and f'(r)/r → f''(0).
            let g = self.d1_over_r?;
            return Some([g, g, T::zero()]);
        }
        let g = self.d1_over_r.unwrap_or_else(|| self.d1 / r2.sqrt());
        let k = (self.d2 - g) / r2;
        Some([g + k * dx * dx, g + k * dy * dy, k * dx * dy])
    }
}

/// A twice-differentiable radial profile `φ(r)`.
pub trait RadialProfile<T: Scalar> {
    fn value(&self, r: T) -> T;
    fn d1(&self, r: T) -> T;
    fn d2(&self, r: T) -> T;
}

/// Built-in particular solutions of `∇² + 1` with their basis functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParticularPair<T> {
    /// `φ = r³`, `ϕ = 9r + r³`.
    Linear,
    /// `φ = (r² + c²)^{3/2}`.
    Multiquadric { shape: T },
    /// `φ = r⁶ log r`, second-order thin plate spline pairing.
    ThinPlate,
}

impl<T: Scalar> ParticularPair<T> {
    pub fn multiquadric(shape: T) -> Result<Self, KernelError> {
        if shape > T::zero() && shape.is_finite() {
            Ok(Self::Multiquadric { shape })
        } else {
            Err(KernelError::Config(format!("multiquadric shape must be positive, got {shape}")))
        }
    }

    pub fn kind(&self) -> RbfKind<T> {
        match *self {
            Self::Linear => RbfKind::PairedLinear,
            Self::Multiquadric { shape } => RbfKind::PairedMultiquadric { shape },
            Self::ThinPlate => RbfKind::PairedThinPlate,
        }
    }

    /// Basis function `ϕ(r)`.
    pub fn rbf(&self, r: T) -> T {
        self.rbf_derivatives(r).value
    }

    /// Particular solution `φ(r)`.
    pub fn particular(&self, r: T) -> T {
        self.particular_derivatives(r).value
    }

    /// `dφ/dr`.
    pub fn particular_radial_derivative(&self, r: T) -> T {
        self.particular_derivatives(r).d1
    }

    pub fn particular_eval(&self, r: T) -> Result<T, KernelError> {
        check_distance(r)?;
        Ok(self.particular(r))
    }

    pub fn rbf_eval(&self, r: T) -> Result<T, KernelError> {
        check_distance(r)?;
        Ok(self.rbf(r))
    }

    pub fn particular_derivatives(&self, r: T) -> RadialDerivatives<T> {
        let l = T::lit;
        match *self {
            Self::Linear => RadialDerivatives {
                value: r * r * r,
                d1: l(3.0) * r * r,
                d2: l(6.0) * r,
                d1_over_r: Some(l(3.0) * r),
            },
            Self::Multiquadric { shape } => {
                let s = r * r + shape * shape;
                let q = s.sqrt();
                RadialDerivatives {
                    value: s * q,
                    d1: l(3.0) * r * q,
                    d2: l(3.0) * q + l(3.0) * r * r / q,
                    d1_over_r: Some(l(3.0) * q),
                }
            }
            Self::ThinPlate => {
                let lg = log_or_zero(r);
                let r2 = r * r;
                let r4 = r2 * r2;
                RadialDerivatives {
                    value: r4 * r2 * lg,
                    d1: l(6.0) * r4 * r * lg + r4 * r,
                    d2: l(30.0) * r4 * lg + l(11.0) * r4,
                    d1_over_r: Some(l(6.0) * r4 * lg + r4),
                }
            }
        }
    }

    pub fn rbf_derivatives(&self, r: T) -> RadialDerivatives<T> {
        let l = T::lit;
        match *self {
            Self::Linear => RadialDerivatives {
                value: l(9.0) * r + r * r * r,
                d1: l(9.0) + l(3.0) * r * r,
                d2: l(6.0) * r,
                d1_over_r: if r == T::zero() {
                    None
                } else {
                    Some(l(9.0) / r + l(3.0) * r)
                },
            },
            Self::Multiquadric { shape } => {
                let s = r * r + shape * shape;
                let q = s.sqrt();
                let q3 = s * q;
                let q5 = q3 * s;
                let r2 = r * r;
                // ϕ'(r) = r·g(r) with g finite at r = 0.
                let g = l(12.0) / q - l(3.0) * r2 / q3 + l(3.0) * q;
                let dg_over_r = -l(18.0) / q3 + l(9.0) * r2 / q5 + l(3.0) / q;
                RadialDerivatives {
                    value: l(6.0) * q + l(3.0) * r2 / q + q3,
                    d1: r * g,
                    d2: g + r2 * dg_over_r,
                    d1_over_r: Some(g),
                }
            }
            Self::ThinPlate => {
                let lg = log_or_zero(r);
                let r2 = r * r;
                let r4 = r2 * r2;
                let d1_over_r = l(144.0) * r2 * lg + l(84.0) * r2 + l(6.0) * r4 * lg + r4;
                RadialDerivatives {
                    value: l(36.0) * r4 * lg + l(12.0) * r4 + r4 * r2 * lg,
                    d1: r * d1_over_r,
                    d2: l(432.0) * r2 * lg + l(396.0) * r2 + l(30.0) * r4 * lg + l(11.0) * r4,
                    d1_over_r: Some(d1_over_r),
                }
            }
        }
    }
}

impl<T: Scalar> RadialProfile<T> for ParticularPair<T> {
    fn value(&self, r: T) -> T {
        self.particular(r)
    }
    fn d1(&self, r: T) -> T {
        self.particular_derivatives(r).d1
    }
    fn d2(&self, r: T) -> T {
        self.particular_derivatives(r).d2
    }
}

/// A pair obtained by the reverse construction from an arbitrary profile.
#[derive(Debug, Clone)]
pub struct ReversePair<P> {
    profile: P,
}

/// Builds the basis function paired with a given particular solution by
/// applying `∇² + 1` in radial form. Rejects profiles that are singular at
/// `r = 0` or whose `φ'/r` has no finite limit there.
pub fn pair_from_particular<T: Scalar, P: RadialProfile<T>>(profile: P) -> Result<ReversePair<P>, KernelError> {
    let v0 = profile.value(T::zero());
    let d1 = profile.d1(T::zero());
    let d2 = profile.d2(T::zero());
    if !v0.is_finite() || !d1.is_finite() || !d2.is_finite() {
        return Err(KernelError::Singular("particular solution is singular at r = 0".into()));
    }
    if d1.abs() > T::epsilon().sqrt() * (T::one() + v0.abs()) {
        return Err(KernelError::Singular(format!(
            "φ'(0) = {d1} is nonzero, so φ'/r is unbounded at r = 0"
        )));
    }
    Ok(ReversePair { profile })
}

impl<P> ReversePair<P> {
    pub fn profile(&self) -> &P {
        &self.profile
    }

    pub fn particular<T: Scalar>(&self, r: T) -> T
    where
        P: RadialProfile<T>,
    {
        self.profile.value(r)
    }

    /// `ϕ(r) = φ'' + φ'/r + φ`, with `φ'/r → φ''(0)` at the origin.
    pub fn rbf<T: Scalar>(&self, r: T) -> T
    where
        P: RadialProfile<T>,
    {
        let p = &self.profile;
        if r == T::zero() {
            T::lit(2.0) * p.d2(r) + p.value(r)
        } else {
            p.d2(r) + p.d1(r) / r + p.value(r)
        }
    }
}
