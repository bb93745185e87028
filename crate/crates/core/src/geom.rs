//! Exact rational kernel: scalars, points, planes, lines and the sign
//! predicates everything else is built on.
//!
//! Every predicate here is decided exactly. There is no epsilon anywhere in
//! the crate; degenerate configurations are resolved by the sign of an exact
//! rational expression.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(s: &Scalar) -> f64 {
    s.to_f64().unwrap_or(f64::NAN)
}

/// Sign of `cross(d, p - o)` computed in floating point from correctly
/// rounded inputs, or `None` when the error bound does not settle it.
pub fn orient_filter(o: [f64; 2], d: [f64; 2], p: [f64; 2]) -> Option<Sign> {
    let ok = |v: f64| v == 0.0 || (1e-150..1e150).contains(&v.abs());
    if ![o[0], o[1], d[0], d[1], p[0], p[1]].into_iter().all(ok) {
        return None;
    }
    let (ax, ay) = (p[0] - o[0], p[1] - o[1]);
    let r = d[0] * ay - d[1] * ax;
    let scale = (p[0].abs() + o[0].abs()) * d[1].abs() + (p[1].abs() + o[1].abs()) * d[0].abs();
    let bound = 1e-14 * scale;
    if r > bound {
        Some(Sign::Positive)
    } else if r < -bound {
        Some(Sign::Negative)
    } else {
        None
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("point does not lie on the frame's plane")]
    OffPlane,
    #[error("degenerate plane: the three points are collinear")]
    DegeneratePlane,
    #[error("cannot parse rational literal `{0}`")]
    BadScalar(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(s: &Scalar) -> Sign {
        if s.is_positive() {
            Sign::Positive
        } else if s.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn from_i8(v: i8) -> Sign {
        match v.cmp(&0) {
            Ordering::Less => Sign::Negative,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Positive,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * other.as_i8())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Scalar,
    pub y: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point3 {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

/// Direction vectors share the point representation.
pub type Vector2 = Point2;
pub type Vector3 = Point3;

impl Point2 {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point2 { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Point2::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Point2::from_i64(0, 0)
    }

    pub fn sub(&self, o: &Point2) -> Vector2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn add(&self, o: &Vector2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn scale(&self, s: &Scalar) -> Vector2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    pub fn neg(&self) -> Vector2 {
        Point2::new(-&self.x, -&self.y)
    }

    pub fn dot(&self, o: &Vector2) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(&self, o: &Vector2) -> Scalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `self + t * (o - self)`
    pub fn lerp(&self, o: &Point2, t: &Scalar) -> Point2 {
        self.add(&o.sub(self).scale(t))
    }

    pub fn midpoint(&self, o: &Point2) -> Point2 {
        self.lerp(o, &ratio(1, 2))
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(&self) -> Vector2 {
        Point2::new(-&self.y, self.x.clone())
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [to_f64(&self.x), to_f64(&self.y)]
    }
}

impl Point3 {
    pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Self {
        Point3 { x, y, z }
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        Point3::new(int(x), int(y), int(z))
    }

    pub fn coord(&self, axis: usize) -> &Scalar {
        match axis {
            0 => &self.x,
            1 => &self.y,
            _ => &self.z,
        }
    }

    pub fn from_coords(c: [Scalar; 3]) -> Self {
        let [x, y, z] = c;
        Point3 { x, y, z }
    }

    pub fn sub(&self, o: &Point3) -> Vector3 {
        Point3::new(&self.x - &o.x, &self.y - &o.y, &self.z - &o.z)
    }

    pub fn add(&self, o: &Vector3) -> Point3 {
        Point3::new(&self.x + &o.x, &self.y + &o.y, &self.z + &o.z)
    }

    pub fn scale(&self, s: &Scalar) -> Vector3 {
        Point3::new(&self.x * s, &self.y * s, &self.z * s)
    }

    pub fn dot(&self, o: &Vector3) -> Scalar {
        &self.x * &o.x + &self.y * &o.y + &self.z * &o.z
    }

    pub fn cross(&self, o: &Vector3) -> Vector3 {
        Point3::new(
            &self.y * &o.z - &self.z * &o.y,
            &self.z * &o.x - &self.x * &o.z,
            &self.x * &o.y - &self.y * &o.x,
        )
    }

    pub fn norm2(&self) -> Scalar {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    pub fn lerp(&self, o: &Point3, t: &Scalar) -> Point3 {
        self.add(&o.sub(self).scale(t))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [to_f64(&self.x), to_f64(&self.y), to_f64(&self.z)]
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Unreduced fraction with positive denominator; sign computations on it
/// skip the gcd normalization of `Scalar` arithmetic.
struct Frac {
    n: BigInt,
    d: BigInt,
}

impl Frac {
    fn of(s: &Scalar) -> Frac {
        Frac {
            n: s.numer().clone(),
            d: s.denom().clone(),
        }
    }

    fn sub(&self, o: &Frac) -> Frac {
        if self.d == o.d {
            Frac {
                n: &self.n - &o.n,
                d: self.d.clone(),
            }
        } else {
            Frac {
                n: &self.n * &o.d - &o.n * &self.d,
                d: &self.d * &o.d,
            }
        }
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac {
            n: &self.n * &o.n,
            d: &self.d * &o.d,
        }
    }
}

/// Exact sign of `dx * ay - dy * ax`.
fn cross_sign(dx: &Frac, dy: &Frac, ax: &Frac, ay: &Frac) -> Sign {
    let l = dx.mul(ay);
    let r = dy.mul(ax);
    let v = &l.n * &r.d - &r.n * &l.d;
    if v.is_positive() {
        Sign::Positive
    } else if v.is_negative() {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

fn orient_float(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<Sign> {
    let ok = |v: f64| v == 0.0 || (1e-150..1e150).contains(&v.abs());
    if ![a[0], a[1], b[0], b[1], c[0], c[1]].into_iter().all(ok) {
        return None;
    }
    let l = (b[0] - a[0]) * (c[1] - a[1]);
    let r = (b[1] - a[1]) * (c[0] - a[0]);
    let scale = (b[0].abs() + a[0].abs()) * (c[1].abs() + a[1].abs())
        + (b[1].abs() + a[1].abs()) * (c[0].abs() + a[0].abs());
    let bound = 1e-14 * scale;
    let v = l - r;
    if v > bound {
        Some(Sign::Positive)
    } else if v < -bound {
        Some(Sign::Negative)
    } else {
        None
    }
}

/// Sign of `(b - a) x (c - a)`: positive for a counter-clockwise turn.
pub fn orient2d(a: &Point2, b: &Point2, c: &Point2) -> Sign {
    if let Some(s) = orient_float(a.to_f64(), b.to_f64(), c.to_f64()) {
        return s;
    }
    let (ax, ay) = (Frac::of(&a.x), Frac::of(&a.y));
    cross_sign(
        &Frac::of(&b.x).sub(&ax),
        &Frac::of(&b.y).sub(&ay),
        &Frac::of(&c.x).sub(&ax),
        &Frac::of(&c.y).sub(&ay),
    )
}

/// Sign of `cross(a, b)`.
pub fn cross_sign_of(a: &Vector2, b: &Vector2) -> Sign {
    if let Some(s) = orient_filter([0.0, 0.0], a.to_f64(), b.to_f64()) {
        return s;
    }
    cross_sign(&Frac::of(&a.x), &Frac::of(&a.y), &Frac::of(&b.x), &Frac::of(&b.y))
}

/// Sign of `cross(d, p - o)`.
pub fn side_of(o: &Point2, d: &Vector2, p: &Point2) -> Sign {
    if let Some(s) = orient_filter(o.to_f64(), d.to_f64(), p.to_f64()) {
        return s;
    }
    cross_sign(
        &Frac::of(&d.x),
        &Frac::of(&d.y),
        &Frac::of(&p.x).sub(&Frac::of(&o.x)),
        &Frac::of(&p.y).sub(&Frac::of(&o.y)),
    )
}

/// Sign of `(b - a) . ((c - a) x (d - a))`.
pub fn orient3d(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> Sign {
    Sign::of(&b.sub(a).dot(&c.sub(a).cross(&d.sub(a))))
}

/// Compares the polar angles of two nonzero directions, measured
/// counter-clockwise in `[0, 2π)` from the positive x axis.
pub fn angle_cmp(a: &Vector2, b: &Vector2) -> Ordering {
    fn half(d: &Vector2) -> u8 {
        if d.y.is_positive() || (d.y.is_zero() && d.x.is_positive()) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| match cross_sign_of(a, b) {
        Sign::Positive => Ordering::Less,
        Sign::Negative => Ordering::Greater,
        Sign::Zero => Ordering::Equal,
    })
}

/// Plane `{p : normal . p = offset}`, stored with primitive integer
/// coefficients so equal planes compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plane {
    pub normal: Vector3,
    pub offset: Scalar,
}

impl Plane {
    pub fn new(normal: Vector3, offset: Scalar) -> Option<Plane> {
        if normal.is_zero() {
            return None;
        }
        let mut coeffs = [normal.x, normal.y, normal.z, offset];
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lcm = Scalar::from_integer(lcm);
        for c in coeffs.iter_mut() {
            *c = &*c * &lcm;
        }
        let gcd = coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
        if !gcd.is_zero() && !gcd.is_one() {
            let g = Scalar::from_integer(gcd);
            for c in coeffs.iter_mut() {
                *c = &*c / &g;
            }
        }
        let [x, y, z, offset] = coeffs;
        Some(Plane {
            normal: Point3::new(x, y, z),
            offset,
        })
    }

    /// Plane through three points, oriented so that `a, b, c` is
    /// counter-clockwise when seen from the positive side.
    pub fn through(a: &Point3, b: &Point3, c: &Point3) -> Result<Plane, GeomError> {
        let n = b.sub(a).cross(&c.sub(a));
        let off = n.dot(a);
        Plane::new(n, off).ok_or(GeomError::DegeneratePlane)
    }

    pub fn eval(&self, p: &Point3) -> Scalar {
        self.normal.dot(p) - &self.offset
    }

    pub fn contains(&self, p: &Point3) -> bool {
        self.eval(p).is_zero()
    }

    pub fn flipped(&self) -> Plane {
        Plane {
            normal: self.normal.scale(&int(-1)),
            offset: -&self.offset,
        }
    }

    /// Same plane regardless of orientation.
    pub fn same_carrier(&self, o: &Plane) -> bool {
        self == o || *self == o.flipped()
    }
}

pub fn side_of_plane(plane: &Plane, p: &Point3) -> Sign {
    Sign::of(&plane.eval(p))
}

/// Intersection of segment `pq` with `plane` when the endpoints lie strictly
/// on opposite sides; touching endpoints do not count.
pub fn segment_plane_crossing(p: &Point3, q: &Point3, plane: &Plane) -> Option<Point3> {
    let sp = plane.eval(p);
    let sq = plane.eval(q);
    crossing_from_values(p, q, &sp, &sq)
}

pub(crate) fn crossing_from_values(
    p: &Point3,
    q: &Point3,
    sp: &Scalar,
    sq: &Scalar,
) -> Option<Point3> {
    if Sign::of(sp).times(Sign::of(sq)) != Sign::Negative {
        return None;
    }
    let t = sp / (sp - sq);
    Some(p.lerp(q, &t))
}

/// Affine 2D coordinates on a plane obtained by dropping the coordinate axis
/// along which the normal is largest. The retained pair is ordered so that
/// counter-clockwise in 2D is counter-clockwise seen from the positive side
/// of the plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneFrame {
    pub plane: Plane,
    drop: usize,
    axes: [usize; 2],
}

impl PlaneFrame {
    pub fn new(plane: &Plane) -> PlaneFrame {
        let n = &plane.normal;
        let mags = [n.x.abs(), n.y.abs(), n.z.abs()];
        let mut drop = 0;
        for k in 1..3 {
            if mags[k] > mags[drop] {
                drop = k;
            }
        }
        let mut axes = [(drop + 1) % 3, (drop + 2) % 3];
        if n.coord(drop).is_negative() {
            axes.swap(0, 1);
        }
        PlaneFrame {
            plane: plane.clone(),
            drop,
            axes,
        }
    }

    pub fn dropped_axis(&self) -> usize {
        self.drop
    }

    /// 2D coordinates of a point known to lie on the plane.
    pub fn project(&self, p: &Point3) -> Point2 {
        Point2::new(p.coord(self.axes[0]).clone(), p.coord(self.axes[1]).clone())
    }

    pub fn lift(&self, p: &Point2) -> Point3 {
        let n = &self.plane.normal;
        let rest = &self.plane.offset - n.coord(self.axes[0]) * &p.x - n.coord(self.axes[1]) * &p.y;
        let d = rest / n.coord(self.drop);
        let mut c = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        c[self.axes[0]] = p.x.clone();
        c[self.axes[1]] = p.y.clone();
        c[self.drop] = d;
        Point3::from_coords(c)
    }

    /// Lifts a 2D direction to the 3D direction it represents on the plane.
    pub fn lift_direction(&self, d: &Vector2) -> Vector3 {
        self.lift(d).sub(&self.origin())
    }

    pub fn origin(&self) -> Point3 {
        self.lift(&Point2::origin())
    }

    pub fn basis(&self) -> [Vector3; 2] {
        let o = self.origin();
        [
            self.lift(&Point2::from_i64(1, 0)).sub(&o),
            self.lift(&Point2::from_i64(0, 1)).sub(&o),
        ]
    }
}

pub fn project_to_frame(frame: &PlaneFrame, p: &Point3) -> Result<Point2, GeomError> {
    if !frame.plane.contains(p) {
        return Err(GeomError::OffPlane);
    }
    Ok(frame.project(p))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line2 {
    pub point: Point2,
    pub direction: Vector2,
}

impl Line2 {
    pub fn new(point: Point2, direction: Vector2) -> Option<Line2> {
        if direction.is_zero() {
            None
        } else {
            Some(Line2 { point, direction })
        }
    }

    pub fn through(a: &Point2, b: &Point2) -> Option<Line2> {
        Line2::new(a.clone(), b.sub(a))
    }

    /// Positive on the left of the directed line.
    pub fn side(&self, p: &Point2) -> Sign {
        side_of(&self.point, &self.direction, p)
    }

    /// Implicit form `a x + b y = c` with the left side positive.
    pub fn implicit(&self) -> (Scalar, Scalar, Scalar) {
        let a = -&self.direction.y;
        let b = self.direction.x.clone();
        let c = &a * &self.point.x + &b * &self.point.y;
        (a, b, c)
    }

    pub fn at(&self, t: &Scalar) -> Point2 {
        self.point.add(&self.direction.scale(t))
    }

    /// Parameter of the intersection with another line, if not parallel.
    pub fn intersect_param(&self, o: &Line2) -> Option<Scalar> {
        let den = self.direction.cross(&o.direction);
        if den.is_zero() {
            return None;
        }
        Some(o.point.sub(&self.point).cross(&o.direction) / den)
    }

    pub fn intersection(&self, o: &Line2) -> Option<Point2> {
        self.intersect_param(o).map(|t| self.at(&t))
    }
}

/// Closed half-plane: the points on `side` of the boundary, plus the
/// boundary itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfPlane2 {
    pub boundary: Line2,
    pub side: Sign,
}

impl HalfPlane2 {
    pub fn contains(&self, p: &Point2) -> bool {
        let s = self.boundary.side(p);
        s == Sign::Zero || s == self.side
    }

    pub fn contains_strictly(&self, p: &Point2) -> bool {
        self.boundary.side(p) == self.side
    }
}

/// Closed ray `{origin + s * direction : s >= 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ray2 {
    pub origin: Point2,
    pub direction: Vector2,
}

impl Ray2 {
    pub fn at(&self, s: &Scalar) -> Point2 {
        self.origin.add(&self.direction.scale(s))
    }
}

/// True iff `a` lies weakly on one side of `line` and `b` weakly on the
/// other. Points on the line count for both sides.
pub fn weakly_separates(line: &Line2, a: &[Point2], b: &[Point2]) -> bool {
    let side_ok = |pts: &[Point2], forbidden: Sign| pts.iter().all(|p| line.side(p) != forbidden);
    (side_ok(a, Sign::Negative) && side_ok(b, Sign::Positive))
        || (side_ok(a, Sign::Positive) && side_ok(b, Sign::Negative))
}

/// Parses integer (`-3`), fraction (`7/4`) and decimal (`1.25`, `-2e-3`)
/// literals exactly.
pub fn parse_scalar(s: &str) -> Result<Scalar, GeomError> {
    let bad = || GeomError::BadScalar(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Scalar::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = digits.split_once('.').unwrap_or((digits, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{ip}{fp}");
    let mut n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let v = if scale >= 0 {
        Scalar::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Scalar::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(v)
}

/// `p/q` with `q > 0` in lowest terms.
pub fn format_scalar(s: &Scalar) -> String {
    format!("{}/{}", s.numer(), s.denom())
}
