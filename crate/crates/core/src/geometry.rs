//! Elliptical domains, knot placement and outward normals.

use std::fmt;
use std::io::{Read, Write};
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("invalid ellipse: {0}")]
    InvalidDomain(String),
    #[error("knots {first} and {second} are closer than {min_separation:e}")]
    CoincidentKnots {
        first: usize,
        second: usize,
        min_separation: f64,
    },
    #[error("boundary knot {index} has an invalid normal: {reason}")]
    InvalidNormal { index: usize, reason: String },
    #[error("interior knot {index} at {position} is not strictly inside the domain")]
    OutsideDomain { index: usize, position: String },
    #[error("knot CSV line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error(transparent)]
    CsvBackend(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Minimum admissible distance between two knots.
pub const MIN_KNOT_SEPARATION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: fmt::Display> fmt::Display for Point2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Axis-aligned ellipse with semi-axes `a ≥ b > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseDomain<T> {
    center: Point2<T>,
    semi_major: T,
    semi_minor: T,
}

impl<T: Scalar> EllipseDomain<T> {
    pub fn new(center: Point2<T>, semi_major: T, semi_minor: T) -> Result<Self, GeometryError> {
        if !(center.x.is_finite() && center.y.is_finite()) {
            return Err(GeometryError::InvalidDomain("center must be finite".into()));
        }
        if !(semi_minor > T::zero() && semi_major >= semi_minor && semi_major.is_finite()) {
            return Err(GeometryError::InvalidDomain(format!(
                "require a >= b > 0, got a = {semi_major}, b = {semi_minor}"
            )));
        }
        Ok(Self {
            center,
            semi_major,
            semi_minor,
        })
    }

    /// The benchmark ellipse: semi-axes 2 and 1.
    pub fn benchmark(center: Point2<T>) -> Self {
        Self::new(center, T::lit(2.0), T::one()).expect("valid benchmark ellipse")
    }

    pub fn center(&self) -> Point2<T> {
        self.center
    }

    pub fn semi_major(&self) -> T {
        self.semi_major
    }

    pub fn semi_minor(&self) -> T {
        self.semi_minor
    }

    /// `((x−x₀)/a)² + ((y−y₀)/b)²`; 1 on the boundary, < 1 inside.
    pub fn implicit(&self, p: Point2<T>) -> T {
        let u = (p.x - self.center.x) / self.semi_major;
        let v = (p.y - self.center.y) / self.semi_minor;
        u * u + v * v
    }

    pub fn contains_strictly(&self, p: Point2<T>) -> bool {
        self.implicit(p) < T::one()
    }

    /// Boundary point at parametric angle `t`.
    pub fn point_at(&self, t: T) -> Point2<T> {
        self.center + Point2::new(self.semi_major * t.cos(), self.semi_minor * t.sin())
    }

    /// Unit outward normal at parametric angle `t`.
    pub fn normal_at(&self, t: T) -> Point2<T> {
        Point2::new(t.cos() / self.semi_major, t.sin() / self.semi_minor).normalized()
    }

    /// A copy of this ellipse uniformly scaled about its center.
    fn scaled(&self, factor: T) -> Self {
        Self {
            center: self.center,
            semi_major: self.semi_major * factor,
            semi_minor: self.semi_minor * factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnotKind {
    Boundary,
    Interior,
}

impl KnotKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Boundary => "boundary",
            Self::Interior => "interior",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knot<T> {
    pub position: Point2<T>,
    pub kind: KnotKind,
    /// Unit outward normal; present exactly for boundary knots.
    pub normal: Option<Point2<T>>,
}

impl<T: Scalar> Knot<T> {
    pub fn boundary(position: Point2<T>, normal: Point2<T>) -> Self {
        Self {
            position,
            kind: KnotKind::Boundary,
            normal: Some(normal),
        }
    }

    pub fn interior(position: Point2<T>) -> Self {
        Self {
            position,
            kind: KnotKind::Interior,
            normal: None,
        }
    }
}

/// `n` boundary knots at parametric angles `2πi/n`.
pub fn place_boundary_knots<T: Scalar>(domain: &EllipseDomain<T>, n: usize) -> Vec<Knot<T>> {
    (0..n)
        .map(|i| {
            let t = (T::PI() + T::PI()) * T::from_count(i) / T::from_count(n);
            Knot::boundary(domain.point_at(t), domain.normal_at(t))
        })
        .collect()
}

/// Scale factors of the concentric rings used for interior knots.
pub const INTERIOR_RING_SCALES: [f64; 2] = [0.5, 0.75];
/// Knots held by the inner ring before the outer ring starts filling.
pub const INNER_RING_CAPACITY: usize = 10;

/// `l` interior knots: the center first, then up to
/// [`INNER_RING_CAPACITY`] knots on the half-scale ellipse, then the rest on
/// the three-quarter-scale ellipse. Each ring is spaced uniformly in
/// parametric angle starting at angle 0.
pub fn place_interior_knots<T: Scalar>(domain: &EllipseDomain<T>, l: usize) -> Vec<Knot<T>> {
    let mut knots = Vec::with_capacity(l);
    if l == 0 {
        return knots;
    }
    knots.push(Knot::interior(domain.center()));
    let remaining = l - 1;
    let inner = remaining.min(INNER_RING_CAPACITY);
    let outer = remaining - inner;
    for (scale, count) in INTERIOR_RING_SCALES.iter().zip([inner, outer]) {
        let ring = domain.scaled(T::lit(*scale));
        for i in 0..count {
            let t = (T::PI() + T::PI()) * T::from_count(i) / T::from_count(count);
            knots.push(Knot::interior(ring.point_at(t)));
        }
    }
    knots
}

/// `∂r/∂n` at `x` for `r = ‖x − x_k‖`; zero when the points coincide.
pub fn dr_dn<T: Scalar>(x: Point2<T>, x_k: Point2<T>, n: Point2<T>) -> T {
    let d = x - x_k;
    let r = d.norm();
    if r == T::zero() {
        T::zero()
    } else {
        d.dot(n) / r
    }
}

/// Boundary knots (ordered) followed by interior knots.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotSet<T> {
    boundary: Vec<Knot<T>>,
    interior: Vec<Knot<T>>,
}

impl<T: Scalar> KnotSet<T> {
    /// Validates knot kinds, unit normals and pairwise separation.
    pub fn new(boundary: Vec<Knot<T>>, interior: Vec<Knot<T>>) -> Result<Self, GeometryError> {
        let tol = T::lit(1e-9);
        for (index, k) in boundary.iter().enumerate() {
            let normal = match (k.kind, k.normal) {
                (KnotKind::Boundary, Some(n)) => n,
                (KnotKind::Boundary, None) => {
                    return Err(GeometryError::InvalidNormal {
                        index,
                        reason: "missing".into(),
                    })
                }
                (KnotKind::Interior, _) => {
                    return Err(GeometryError::InvalidNormal {
                        index,
                        reason: "interior knot in boundary list".into(),
                    })
                }
            };
            if (normal.norm() - T::one()).abs() > tol {
                return Err(GeometryError::InvalidNormal {
                    index,
                    reason: format!("length {} is not 1", normal.norm()),
                });
            }
        }
        if let Some(index) = interior.iter().position(|k| k.kind != KnotKind::Interior) {
            return Err(GeometryError::InvalidNormal {
                index: boundary.len() + index,
                reason: "boundary knot in interior list".into(),
            });
        }
        let set = Self { boundary, interior };
        let pos: Vec<Point2<T>> = set.positions().collect();
        let min_sep = T::lit(MIN_KNOT_SEPARATION);
        for i in 0..pos.len() {
            for j in 0..i {
                if !(pos[i].distance(pos[j]) > min_sep) {
                    return Err(GeometryError::CoincidentKnots {
                        first: j,
                        second: i,
                        min_separation: MIN_KNOT_SEPARATION,
                    });
                }
            }
        }
        Ok(set)
    }

    /// Uniform boundary knots plus ring-placed interior knots.
    pub fn on_ellipse(domain: &EllipseDomain<T>, n_boundary: usize, n_interior: usize) -> Result<Self, GeometryError> {
        let set = Self::new(place_boundary_knots(domain, n_boundary), place_interior_knots(domain, n_interior))?;
        set.check_inside(domain)?;
        Ok(set)
    }

    /// Checks that every interior knot lies strictly inside `domain`.
    pub fn check_inside(&self, domain: &EllipseDomain<T>) -> Result<(), GeometryError> {
        for (i, k) in self.interior.iter().enumerate() {
            if !domain.contains_strictly(k.position) {
                return Err(GeometryError::OutsideDomain {
                    index: self.boundary.len() + i,
                    position: k.position.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn boundary(&self) -> &[Knot<T>] {
        &self.boundary
    }

    pub fn interior(&self) -> &[Knot<T>] {
        &self.interior
    }

    pub fn n_boundary(&self) -> usize {
        self.boundary.len()
    }

    pub fn n_interior(&self) -> usize {
        self.interior.len()
    }

    pub fn len(&self) -> usize {
        self.boundary.len() + self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All knots, boundary first.
    pub fn iter(&self) -> impl Iterator<Item = &Knot<T>> {
        self.boundary.iter().chain(&self.interior)
    }

    pub fn positions(&self) -> impl Iterator<Item = Point2<T>> + '_ {
        self.iter().map(|k| k.position)
    }

    /// Writes `x,y,kind,nx,ny`; normals are blank for interior knots.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), GeometryError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["x", "y", "kind", "nx", "ny"])?;
        for k in self.iter() {
            let (nx, ny) = match k.normal {
                Some(n) => (n.x.to_string(), n.y.to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([
                k.position.x.to_string(),
                k.position.y.to_string(),
                k.kind.as_str().to_string(),
                nx,
                ny,
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the format produced by [`KnotSet::write_csv`]. Rows may appear in
    /// any order; boundary rows keep their relative order, as do interior rows.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self, GeometryError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let expected = ["x", "y", "kind", "nx", "ny"];
        if headers.len() != expected.len() || headers.iter().zip(expected).any(|(h, e)| h != e) {
            return Err(GeometryError::Csv {
                line: 1,
                reason: format!("expected header `x,y,kind,nx,ny`, got `{}`", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let mut boundary = Vec::new();
        let mut interior = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 2;
            let rec = rec?;
            let num = |idx: usize| -> Result<T, GeometryError> {
                let s = rec.get(idx).unwrap_or("");
                s.parse::<f64>().map(T::lit).map_err(|_| GeometryError::Csv {
                    line,
                    reason: format!("`{s}` is not a number"),
                })
            };
            let position = Point2::new(num(0)?, num(1)?);
            match rec.get(2).unwrap_or("") {
                "boundary" => boundary.push(Knot::boundary(position, Point2::new(num(3)?, num(4)?))),
                "interior" => {
                    if rec.get(3).is_some_and(|s| !s.is_empty()) || rec.get(4).is_some_and(|s| !s.is_empty()) {
                        return Err(GeometryError::Csv {
                            line,
                            reason: "interior knots must leave nx,ny blank".into(),
                        });
                    }
                    interior.push(Knot::interior(position));
                }
                other => {
                    return Err(GeometryError::Csv {
                        line,
                        reason: format!("unknown kind `{other}`"),
                    })
                }
            }
        }
        Self::new(boundary, interior)
    }
}
