//! Triangulated polytopes: OFF input/output, ear clipping of polygonal
//! faces, validation, edge extraction and exact interior membership.

use crate::geom::{
    format_scalar, orient2d, parse_scalar, Plane, PlaneFrame, Point2, Point3, Scalar, Sign,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeshError {
    #[error("missing or malformed OFF header")]
    BadHeader,
    #[error("malformed counts line")]
    BadCounts,
    #[error("unexpected end of input: {0}")]
    UnexpectedEof(&'static str),
    #[error("malformed vertex {0}")]
    BadVertex(usize),
    #[error("malformed face {0}")]
    BadFace(usize),
    #[error("face {face} references vertex {index} but only {count} vertices exist")]
    IndexOutOfRange { face: usize, index: usize, count: usize },
    #[error("face {0} has fewer than three distinct vertices")]
    FaceTooSmall(usize),
    #[error("face {0} is not planar")]
    NonPlanarFace(usize),
    #[error("face {0} is not a simple polygon")]
    NonSimpleFace(usize),
    #[error("mesh failed validation: {0}")]
    Invalid(String),
}

/// Closed, consistently oriented triangulated polytope. Triangles are
/// counter-clockwise seen from outside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriMesh {
    pub vertices: Vec<Point3>,
    pub triangles: Vec<[usize; 3]>,
    /// Id of the input polygon each triangle was cut from.
    pub face_of_triangle: Vec<usize>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Point3>, triangles: Vec<[usize; 3]>) -> TriMesh {
        let face_of_triangle = (0..triangles.len()).collect();
        TriMesh {
            vertices,
            triangles,
            face_of_triangle,
        }
    }

    /// Builds a mesh from planar simple polygons, ear-clipping each one.
    pub fn from_polygons(vertices: Vec<Point3>, faces: &[Vec<usize>]) -> Result<TriMesh, MeshError> {
        let mut triangles = Vec::new();
        let mut face_of_triangle = Vec::new();
        for (fi, face) in faces.iter().enumerate() {
            for &i in face {
                if i >= vertices.len() {
                    return Err(MeshError::IndexOutOfRange {
                        face: fi,
                        index: i,
                        count: vertices.len(),
                    });
                }
            }
            for t in triangulate_polygon(&vertices, face, fi)? {
                triangles.push(t);
                face_of_triangle.push(fi);
            }
        }
        Ok(TriMesh {
            vertices,
            triangles,
            face_of_triangle,
        })
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_points(&self, t: usize) -> [&Point3; 3] {
        let [a, b, c] = self.triangles[t];
        [&self.vertices[a], &self.vertices[b], &self.vertices[c]]
    }

    /// Outward-oriented supporting plane of triangle `t`.
    pub fn triangle_plane(&self, t: usize) -> Option<Plane> {
        let [a, b, c] = self.triangle_points(t);
        Plane::through(a, b, c).ok()
    }

    /// Applies `f` to every vertex. Orientation-reversing maps also flip
    /// the triangle winding so the mesh stays outward-oriented.
    pub fn map_vertices(&self, f: impl Fn(&Point3) -> Point3, reverses_orientation: bool) -> TriMesh {
        let mut m = self.clone();
        m.vertices = self.vertices.iter().map(f).collect();
        if reverses_orientation {
            for t in &mut m.triangles {
                t.swap(1, 2);
            }
        }
        m
    }

    /// Six times the signed volume; positive for an outward-oriented mesh.
    pub fn signed_volume6(&self) -> Scalar {
        let mut v = Scalar::zero();
        for t in 0..self.triangles.len() {
            let [a, b, c] = self.triangle_points(t);
            v += a.dot(&b.cross(c));
        }
        v
    }
}

fn is_comment_or_blank(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses the ASCII OFF dialect. Coordinates may be integers, decimals or
/// `p/q` fractions and are read exactly.
pub fn parse_off(text: &str) -> Result<TriMesh, MeshError> {
    let mut lines = text
        .lines()
        .filter(|l| !is_comment_or_blank(l))
        .map(strip_comment);
    let header = lines.next().ok_or(MeshError::BadHeader)?.trim();
    let rest = header.strip_prefix("OFF").ok_or(MeshError::BadHeader)?;
    let counts_line = if rest.trim().is_empty() {
        lines.next().ok_or(MeshError::UnexpectedEof("counts"))?
    } else {
        rest
    };
    let counts: Vec<usize> = counts_line
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| MeshError::BadCounts)?;
    if counts.len() < 2 {
        return Err(MeshError::BadCounts);
    }
    let (nv, nf) = (counts[0], counts[1]);
    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let line = lines.next().ok_or(MeshError::UnexpectedEof("vertices"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(MeshError::BadVertex(i));
        }
        let c: Vec<Scalar> = toks[..3]
            .iter()
            .map(|t| parse_scalar(t))
            .collect::<Result<_, _>>()
            .map_err(|_| MeshError::BadVertex(i))?;
        vertices.push(Point3::new(c[0].clone(), c[1].clone(), c[2].clone()));
    }
    let mut faces = Vec::with_capacity(nf);
    for fi in 0..nf {
        let line = lines.next().ok_or(MeshError::UnexpectedEof("faces"))?;
        let toks: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|_| MeshError::BadFace(fi))?;
        let k = *toks.first().ok_or(MeshError::BadFace(fi))?;
        if toks.len() < k + 1 {
            return Err(MeshError::BadFace(fi));
        }
        faces.push(toks[1..=k].to_vec());
    }
    TriMesh::from_polygons(vertices, &faces)
}

fn scalar_token(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format_scalar(s)
    }
}

/// Writes the mesh as OFF with one triangular face per triangle.
pub fn emit_off(mesh: &TriMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "OFF");
    let _ = writeln!(out, "{} {} 0", mesh.vertices.len(), mesh.triangles.len());
    for v in &mesh.vertices {
        let _ = writeln!(
            out,
            "{} {} {}",
            scalar_token(&v.x),
            scalar_token(&v.y),
            scalar_token(&v.z)
        );
    }
    for [a, b, c] in &mesh.triangles {
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    out
}

/// Newell normal of a closed polygon; exact, and nonzero for any simple
/// planar polygon with positive area.
fn newell_normal(pts: &[&Point3]) -> Point3 {
    let mut n = Point3::from_i64(0, 0, 0);
    for i in 0..pts.len() {
        let p = pts[i];
        let q = pts[(i + 1) % pts.len()];
        n.x += (&p.y - &q.y) * (&p.z + &q.z);
        n.y += (&p.z - &q.z) * (&p.x + &q.x);
        n.z += (&p.x - &q.x) * (&p.y + &q.y);
    }
    n
}

/// Ear clipping of one planar polygon; collinear runs are allowed.
fn triangulate_polygon(
    vertices: &[Point3],
    face: &[usize],
    fi: usize,
) -> Result<Vec<[usize; 3]>, MeshError> {
    let mut idx: Vec<usize> = face.to_vec();
    // drop consecutive repeats
    idx.dedup();
    if idx.len() > 1 && idx.first() == idx.last() {
        idx.pop();
    }
    let mut seen = idx.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != idx.len() {
        return Err(MeshError::NonSimpleFace(fi));
    }
    if idx.len() < 3 {
        return Err(MeshError::FaceTooSmall(fi));
    }
    let pts: Vec<&Point3> = idx.iter().map(|&i| &vertices[i]).collect();
    let n = newell_normal(&pts);
    let plane = Plane::new(n.clone(), n.dot(pts[0])).ok_or(MeshError::NonSimpleFace(fi))?;
    if pts.iter().any(|p| !plane.contains(p)) {
        return Err(MeshError::NonPlanarFace(fi));
    }
    if idx.len() == 3 {
        return Ok(vec![[idx[0], idx[1], idx[2]]]);
    }
    let frame = PlaneFrame::new(&plane);
    let p2: Vec<Point2> = pts.iter().map(|p| frame.project(p)).collect();
    let mut ring: Vec<usize> = (0..idx.len()).collect();
    let mut out = Vec::with_capacity(idx.len() - 2);
    while ring.len() > 3 {
        let m = ring.len();
        let mut clipped = false;
        for k in 0..m {
            let (a, b, c) = (ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]);
            if orient2d(&p2[a], &p2[b], &p2[c]) != Sign::Positive {
                continue;
            }
            let blocked = ring.iter().any(|&j| {
                j != a
                    && j != b
                    && j != c
                    && orient2d(&p2[a], &p2[b], &p2[j]) != Sign::Negative
                    && orient2d(&p2[b], &p2[c], &p2[j]) != Sign::Negative
                    && orient2d(&p2[c], &p2[a], &p2[j]) != Sign::Negative
            });
            if blocked {
                continue;
            }
            out.push([idx[a], idx[b], idx[c]]);
            ring.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            return Err(MeshError::NonSimpleFace(fi));
        }
    }
    let (a, b, c) = (ring[0], ring[1], ring[2]);
    if orient2d(&p2[a], &p2[b], &p2[c]) != Sign::Positive {
        return Err(MeshError::NonSimpleFace(fi));
    }
    out.push([idx[a], idx[b], idx[c]]);
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub closed: bool,
    pub oriented: bool,
    pub nondegenerate: bool,
    pub enough_vertices: bool,
    /// `None` when the quadratic self-intersection scan was not requested.
    pub no_self_intersection: Option<bool>,
    pub open_edges: Vec<(usize, usize)>,
    pub misoriented_edges: Vec<(usize, usize)>,
    pub degenerate_triangles: Vec<usize>,
    pub intersecting_pairs: Vec<(usize, usize)>,
}

impl ValidationReport {
    /// All mandatory checks pass (and the optional one, if it was run).
    pub fn is_valid(&self) -> bool {
        self.closed
            && self.oriented
            && self.nondegenerate
            && self.enough_vertices
            && self.no_self_intersection != Some(false)
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.closed {
            parts.push(format!("{} open edges", self.open_edges.len()));
        }
        if !self.oriented {
            parts.push(format!("{} misoriented edges", self.misoriented_edges.len()));
        }
        if !self.nondegenerate {
            parts.push(format!(
                "{} degenerate triangles",
                self.degenerate_triangles.len()
            ));
        }
        if !self.enough_vertices {
            parts.push("fewer than 4 vertices".into());
        }
        if self.no_self_intersection == Some(false) {
            parts.push(format!(
                "{} intersecting triangle pairs",
                self.intersecting_pairs.len()
            ));
        }
        if parts.is_empty() {
            "ok".into()
        } else {
            parts.join(", ")
        }
    }
}

pub fn validate(mesh: &TriMesh, check_self_intersection: bool) -> ValidationReport {
    let mut r = ValidationReport {
        enough_vertices: mesh.vertices.len() >= 4,
        ..Default::default()
    };
    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    for (ti, t) in mesh.triangles.iter().enumerate() {
        let distinct = t[0] != t[1] && t[1] != t[2] && t[0] != t[2];
        let in_range = t.iter().all(|&i| i < mesh.vertices.len());
        if !distinct || !in_range || mesh.triangle_plane(ti).is_none() {
            r.degenerate_triangles.push(ti);
            continue;
        }
        for k in 0..3 {
            *directed.entry((t[k], t[(k + 1) % 3])).or_default() += 1;
        }
    }
    let mut undirected: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&(u, v), &c) in &directed {
        *undirected.entry((u.min(v), u.max(v))).or_default() += c;
        if c != 1 || directed.get(&(v, u)) != Some(&1) {
            r.misoriented_edges.push((u, v));
        }
    }
    r.open_edges = undirected
        .iter()
        .filter(|(_, &c)| c != 2)
        .map(|(&e, _)| e)
        .collect();
    r.misoriented_edges.sort_unstable();
    r.closed = r.open_edges.is_empty();
    r.oriented = r.misoriented_edges.is_empty();
    r.nondegenerate = r.degenerate_triangles.is_empty();
    if check_self_intersection && r.nondegenerate {
        r.intersecting_pairs = self_intersections(mesh);
        r.no_self_intersection = Some(r.intersecting_pairs.is_empty());
    }
    r
}

/// Validates and turns any failure into an error.
pub fn require_valid(mesh: &TriMesh) -> Result<(), MeshError> {
    let r = validate(mesh, false);
    if r.is_valid() {
        Ok(())
    } else {
        Err(MeshError::Invalid(r.summary()))
    }
}

/// Undirected edges, each stored once as `(min, max)` and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSet {
    pub edges: Vec<(usize, usize)>,
}

impl EdgeSet {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn edges(mesh: &TriMesh) -> EdgeSet {
    let mut e: Vec<(usize, usize)> = mesh
        .triangles
        .iter()
        .flat_map(|t| (0..3).map(move |k| (t[k].min(t[(k + 1) % 3]), t[k].max(t[(k + 1) % 3]))))
        .collect();
    e.sort_unstable();
    e.dedup();
    EdgeSet { edges: e }
}

/// Closed point-in-triangle test for a point already known to be coplanar.
pub(crate) fn coplanar_point_in_triangle(plane: &Plane, tri: [&Point3; 3], p: &Point3) -> bool {
    let f = PlaneFrame::new(plane);
    let (a, b, c, q) = (f.project(tri[0]), f.project(tri[1]), f.project(tri[2]), f.project(p));
    orient2d(&a, &b, &q) != Sign::Negative
        && orient2d(&b, &c, &q) != Sign::Negative
        && orient2d(&c, &a, &q) != Sign::Negative
}

/// True iff `p` lies on the closed surface of the mesh.
pub fn on_boundary(mesh: &TriMesh, p: &Point3) -> bool {
    (0..mesh.triangles.len()).any(|t| {
        let Some(plane) = mesh.triangle_plane(t) else {
            return false;
        };
        plane.contains(p) && coplanar_point_in_triangle(&plane, mesh.triangle_points(t), p)
    })
}

pub const DEFAULT_RAY_SEED: u64 = 0x5eed;

/// Exact membership in the open interior of a closed mesh.
pub fn point_in_interior(mesh: &TriMesh, p: &Point3) -> bool {
    point_in_interior_seeded(mesh, p, DEFAULT_RAY_SEED)
}

/// Same as [`point_in_interior`] with a caller-chosen seed for the ray
/// directions; the answer does not depend on it.
pub fn point_in_interior_seeded(mesh: &TriMesh, p: &Point3, seed: u64) -> bool {
    if on_boundary(mesh, p) {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let d = Point3::from_i64(
            rng.gen_range(-997..=997),
            rng.gen_range(-997..=997),
            rng.gen_range(-997..=997),
        );
        if d.is_zero() {
            continue;
        }
        if let Some(parity) = ray_parity(mesh, p, &d) {
            return parity;
        }
    }
}

/// Integer-scaled copy of a mesh for repeated interior queries. A query
/// point `P / w` and the scaled vertices `V / L` are compared through
/// `w V - L P`, a positive multiple of the true offsets, so every sign is
/// exact without rational normalization.
#[derive(Clone, Debug)]
pub struct InteriorLocator {
    scale: BigInt,
    verts: Vec<[BigInt; 3]>,
    tris: Vec<[usize; 3]>,
    /// Per triangle: integer normal `n` and offset `c` with `n . X = c` on
    /// the scaled vertices.
    planes: Vec<([BigInt; 3], BigInt)>,
}

type I3 = [BigInt; 3];

fn sub3(a: &I3, b: &I3) -> I3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn cross3(a: &I3, b: &I3) -> I3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot3(a: &I3, b: &I3) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn isign(v: &BigInt) -> Sign {
    match v.sign() {
        num_bigint::Sign::Minus => Sign::Negative,
        num_bigint::Sign::NoSign => Sign::Zero,
        num_bigint::Sign::Plus => Sign::Positive,
    }
}

/// `(P, w)` with `p = P / w` and `w > 0`.
fn homogenize(p: &Point3) -> (I3, BigInt) {
    let w = [&p.x, &p.y, &p.z].iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled = |c: &Scalar| c.numer() * (&w / c.denom());
    ([scaled(&p.x), scaled(&p.y), scaled(&p.z)], w)
}

impl InteriorLocator {
    pub fn new(mesh: &TriMesh) -> InteriorLocator {
        let scale = mesh
            .vertices
            .iter()
            .flat_map(|v| [&v.x, &v.y, &v.z])
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let verts: Vec<I3> = mesh
            .vertices
            .iter()
            .map(|v| [&v.x, &v.y, &v.z].map(|c| c.numer() * (&scale / c.denom())))
            .collect();
        let planes = mesh
            .triangles
            .iter()
            .map(|t| {
                let n = cross3(&sub3(&verts[t[1]], &verts[t[0]]), &sub3(&verts[t[2]], &verts[t[0]]));
                let c = dot3(&n, &verts[t[0]]);
                (n, c)
            })
            .collect();
        InteriorLocator {
            scale,
            verts,
            tris: mesh.triangles.clone(),
            planes,
        }
    }

    /// Exact membership in the open interior.
    pub fn contains(&self, p: &Point3) -> bool {
        self.contains_seeded(p, DEFAULT_RAY_SEED)
    }

    pub fn contains_seeded(&self, p: &Point3, seed: u64) -> bool {
        let (pp, w) = homogenize(p);
        let lp = pp.clone().map(|c| c * &self.scale);
        let rel: Vec<I3> = self.verts.iter().map(|v| sub3(&v.clone().map(|c| c * &w), &lp)).collect();
        // on the surface
        for (t, (n, c)) in self.tris.iter().zip(&self.planes) {
            if n.iter().all(|x| x.is_zero()) || dot3(n, &pp) * &self.scale != c * &w {
                continue;
            }
            let [a, b, cc] = t.map(|i| &rel[i]);
            if [(a, b), (b, cc), (cc, a)]
                .iter()
                .all(|(u, v)| isign(&dot3(n, &cross3(u, v))) != Sign::Negative)
            {
                return false;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let d: I3 = std::array::from_fn(|_| BigInt::from(rng.gen_range(-997i64..=997)));
            if d.iter().all(|x| x.is_zero()) {
                continue;
            }
            if let Some(parity) = self.parity(&rel, &d) {
                return parity;
            }
        }
    }

    fn parity(&self, rel: &[I3], d: &I3) -> Option<bool> {
        let mut odd = false;
        for (t, (n, _)) in self.tris.iter().zip(&self.planes) {
            let [a, b, c] = t.map(|i| &rel[i]);
            let signs = [(a, b), (b, c), (c, a)].map(|(u, v)| isign(&dot3(d, &cross3(u, v))));
            if signs.contains(&Sign::Positive) && signs.contains(&Sign::Negative) {
                continue;
            }
            let dn = isign(&dot3(d, n));
            let an = isign(&dot3(a, n));
            if dn == Sign::Zero {
                if an == Sign::Zero {
                    return None;
                }
                continue;
            }
            if an != dn {
                continue;
            }
            if signs.contains(&Sign::Zero) {
                return None;
            }
            odd = !odd;
        }
        Some(odd)
    }
}

/// Crossing parity of the ray `p + t d`, `t > 0`, or `None` if the ray
/// touches an edge or vertex, or runs inside a triangle's plane.
fn ray_parity(mesh: &TriMesh, p: &Point3, d: &Point3) -> Option<bool> {
    let mut odd = false;
    for t in &mesh.triangles {
        let a = mesh.vertices[t[0]].sub(p);
        let b = mesh.vertices[t[1]].sub(p);
        let c = mesh.vertices[t[2]].sub(p);
        let sab = Sign::of(&d.dot(&a.cross(&b)));
        let sbc = Sign::of(&d.dot(&b.cross(&c)));
        let sca = Sign::of(&d.dot(&c.cross(&a)));
        let signs = [sab, sbc, sca];
        let has_pos = signs.contains(&Sign::Positive);
        let has_neg = signs.contains(&Sign::Negative);
        if has_pos && has_neg {
            continue;
        }
        let n = b.sub(&a).cross(&c.sub(&a));
        let dn = Sign::of(&d.dot(&n));
        if dn == Sign::Zero {
            // The line is parallel to the plane; it can only meet the
            // triangle if it lies inside the plane.
            if Sign::of(&a.dot(&n)) == Sign::Zero {
                return None;
            }
            continue;
        }
        // hit parameter sign: (a . n) / (d . n)
        let ahead = Sign::of(&a.dot(&n)) == dn;
        if !ahead {
            continue;
        }
        if signs.contains(&Sign::Zero) {
            return None;
        }
        odd = !odd;
    }
    Some(odd)
}

fn segment_meets_triangle(p: &Point3, q: &Point3, tri: [&Point3; 3], plane: &Plane) -> bool {
    let sp = plane.eval(p);
    let sq = plane.eval(q);
    let (gp, gq) = (Sign::of(&sp), Sign::of(&sq));
    if gp == gq && gp != Sign::Zero {
        return false;
    }
    if gp == Sign::Zero && gq == Sign::Zero {
        let f = PlaneFrame::new(plane);
        let (a, b, c) = (f.project(tri[0]), f.project(tri[1]), f.project(tri[2]));
        let (s, e) = (f.project(p), f.project(q));
        let inside = |x: &Point2| {
            orient2d(&a, &b, x) != Sign::Negative
                && orient2d(&b, &c, x) != Sign::Negative
                && orient2d(&c, &a, x) != Sign::Negative
        };
        if inside(&s) || inside(&e) {
            return true;
        }
        return [(&a, &b), (&b, &c), (&c, &a)]
            .iter()
            .any(|(u, v)| segments_intersect_closed(&s, &e, u, v));
    }
    let x = if gp == Sign::Zero {
        p.clone()
    } else if gq == Sign::Zero {
        q.clone()
    } else {
        let t = &sp / (&sp - &sq);
        p.lerp(q, &t)
    };
    coplanar_point_in_triangle(plane, tri, &x)
}

pub(crate) fn segments_intersect_closed(a: &Point2, b: &Point2, c: &Point2, d: &Point2) -> bool {
    let o1 = orient2d(a, b, c);
    let o2 = orient2d(a, b, d);
    let o3 = orient2d(c, d, a);
    let o4 = orient2d(c, d, b);
    let within = |p: &Point2, q: &Point2, r: &Point2| {
        r.x >= p.x.clone().min(q.x.clone())
            && r.x <= p.x.clone().max(q.x.clone())
            && r.y >= p.y.clone().min(q.y.clone())
            && r.y <= p.y.clone().max(q.y.clone())
    };
    if o1 != o2 && o3 != o4 && o1 != Sign::Zero && o2 != Sign::Zero && o3 != Sign::Zero && o4 != Sign::Zero {
        return true;
    }
    (o1 == Sign::Zero && within(a, b, c))
        || (o2 == Sign::Zero && within(a, b, d))
        || (o3 == Sign::Zero && within(c, d, a))
        || (o4 == Sign::Zero && within(c, d, b))
        || (o1.times(o2) == Sign::Negative && o3.times(o4) == Sign::Negative)
}

/// Pairwise scan for intersecting triangles. Pairs sharing an edge are not
/// examined; pairs sharing one vertex are tested through their opposite
/// edges only.
fn self_intersections(mesh: &TriMesh) -> Vec<(usize, usize)> {
    let n = mesh.triangles.len();
    let planes: Vec<Plane> = (0..n).map(|t| mesh.triangle_plane(t).unwrap()).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let ti = mesh.triangles[i];
            let tj = mesh.triangles[j];
            let shared: Vec<usize> = ti.iter().copied().filter(|v| tj.contains(v)).collect();
            if shared.len() >= 2 {
                continue;
            }
            let edges_of = |t: [usize; 3]| -> Vec<(usize, usize)> {
                (0..3)
                    .map(|k| (t[k], t[(k + 1) % 3]))
                    .filter(|(u, v)| !shared.contains(u) && !shared.contains(v) || shared.is_empty())
                    .collect()
            };
            let hit = edges_of(ti).iter().any(|&(u, v)| {
                segment_meets_triangle(&mesh.vertices[u], &mesh.vertices[v], mesh.triangle_points(j), &planes[j])
            }) || edges_of(tj).iter().any(|&(u, v)| {
                segment_meets_triangle(&mesh.vertices[u], &mesh.vertices[v], mesh.triangle_points(i), &planes[i])
            });
            if hit {
                out.push((i, j));
            }
        }
    }
    out
}

/// Flips triangles so that neighbours agree in winding, component by
/// component. Returns `false` if some component is non-orientable or an
/// edge has more than two triangles.
pub fn orient_consistently(mesh: &mut TriMesh) -> bool {
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, tri) in mesh.triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            by_edge.entry((a.min(b), a.max(b))).or_default().push(t);
        }
    }
    if by_edge.values().any(|v| v.len() > 2) {
        return false;
    }
    let has_directed = |tri: &[usize; 3], a: usize, b: usize| (0..3).any(|k| tri[k] == a && tri[(k + 1) % 3] == b);
    let n = mesh.triangles.len();
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            let tri = mesh.triangles[t];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                for &u in &by_edge[&(a.min(b), a.max(b))] {
                    if u == t {
                        continue;
                    }
                    let same = has_directed(&mesh.triangles[u], a, b);
                    if seen[u] {
                        if same {
                            return false;
                        }
                        continue;
                    }
                    if same {
                        mesh.triangles[u].swap(1, 2);
                    }
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    true
}

/// Signed volume check: flips every triangle if the mesh is inside out.
pub fn orient_outward(mesh: &mut TriMesh) {
    if mesh.signed_volume6().is_negative() {
        for t in &mut mesh.triangles {
            t.swap(1, 2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ratio;

    pub(crate) const CUBE_OFF: &str = "OFF
8 6 0
0 0 0
1 0 0
1 1 0
0 1 0
0 0 1
1 0 1
1 1 1
0 1 1
4 0 3 2 1
4 4 5 6 7
4 0 1 5 4
4 1 2 6 5
4 2 3 7 6
4 3 0 4 7
";

    const TET_OFF: &str = "OFF
# unit tetrahedron
4 4 0
0 0 0
1 0 0
0 1 0
0 0 1
3 0 2 1
3 0 1 3
3 1 2 3
3 0 3 2
";

    fn cube() -> TriMesh {
        parse_off(CUBE_OFF).unwrap()
    }

    #[test]
    fn parse_examples() {
        let t = parse_off(TET_OFF).unwrap();
        assert_eq!(t.triangles.len(), 4);
        let c = cube();
        assert_eq!(c.triangles.len(), 12);
        let mut ids = c.face_of_triangle.clone();
        ids.dedup();
        assert_eq!(ids.len(), 6);
        let bad = CUBE_OFF.replace("4 3 0 4 7", "4 3 0 4 99");
        assert!(matches!(
            parse_off(&bad),
            Err(MeshError::IndexOutOfRange { index: 99, count: 8, .. })
        ));
        assert!(parse_off("NOFF\n").is_err());
    }

    #[test]
    fn decimal_coordinates_are_exact() {
        let text = TET_OFF.replace("0 0 1\n3", "0 0 0.1\n3");
        let t = parse_off(&text).unwrap();
        assert_eq!(t.vertices[3].z, ratio(1, 10));
    }

    #[test]
    fn validate_examples() {
        let c = cube();
        assert!(validate(&c, true).is_valid());
        let mut missing = c.clone();
        missing.triangles.pop();
        missing.face_of_triangle.pop();
        assert!(!validate(&missing, false).closed);
        let mut flipped = c.clone();
        flipped.triangles[0].swap(1, 2);
        assert!(!validate(&flipped, false).oriented);
    }

    #[test]
    fn self_intersection_detected() {
        let c = cube();
        let mut two = c.clone();
        let off = c.vertices.len();
        two.vertices
            .extend(c.vertices.iter().map(|v| v.add(&Point3::new(ratio(1, 2), ratio(1, 2), ratio(1, 2)))));
        two.triangles
            .extend(c.triangles.iter().map(|t| [t[0] + off, t[1] + off, t[2] + off]));
        two.face_of_triangle.extend(c.face_of_triangle.iter().map(|f| f + 6));
        let r = validate(&two, true);
        assert!(r.closed && r.oriented);
        assert_eq!(r.no_self_intersection, Some(false));
    }

    #[test]
    fn edge_counts() {
        assert_eq!(edges(&parse_off(TET_OFF).unwrap()).len(), 6);
        assert_eq!(edges(&cube()).len(), 18);
    }

    #[test]
    fn interior_examples() {
        let c = cube();
        let h = ratio(1, 2);
        assert!(point_in_interior(&c, &Point3::new(h.clone(), h.clone(), h.clone())));
        assert!(!point_in_interior(&c, &Point3::from_i64(2, 0, 0)));
        assert!(!point_in_interior(&c, &Point3::new(ratio(0, 1), h.clone(), h.clone())));
        for seed in 0..8 {
            assert!(point_in_interior_seeded(&c, &Point3::new(h.clone(), ratio(1, 3), ratio(9, 10)), seed));
            assert!(!point_in_interior_seeded(&c, &Point3::new(h.clone(), ratio(4, 3), h.clone()), seed));
        }
    }

    #[test]
    fn off_round_trip() {
        let c = cube();
        let back = parse_off(&emit_off(&c)).unwrap();
        assert_eq!(back.vertices, c.vertices);
        assert_eq!(back.triangles, c.triangles);
    }

    #[test]
    fn ear_clipping_with_collinear_vertices() {
        // rectangle with extra points along its top edge
        let mut vs = vec![Point3::from_i64(0, 0, 0), Point3::from_i64(4, 0, 0)];
        for x in (0..=4).rev() {
            vs.push(Point3::from_i64(x, 1, 0));
        }
        let face: Vec<usize> = (0..vs.len()).collect();
        let tris = triangulate_polygon(&vs, &face, 0).unwrap();
        assert_eq!(tris.len(), vs.len() - 2);
    }

    #[test]
    fn ear_clipping_rejects_bowtie() {
        let vs = vec![
            Point3::from_i64(0, 0, 0),
            Point3::from_i64(2, 2, 0),
            Point3::from_i64(2, 0, 0),
            Point3::from_i64(0, 2, 0),
        ];
        assert!(triangulate_polygon(&vs, &[0, 1, 2, 3], 0).is_err());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn locator_matches_rational_route(x in -2i64..=10, y in -2i64..=10, z in -2i64..=10, dx in 0i64..4, dy in 0i64..4) {
            // a U-shaped prism with the grid aligned to its walls, so
            // many points land on the surface
            let m = crate::generators::blind_slot(3).unwrap();
            let loc = InteriorLocator::new(&m);
            let p = Point3::new(ratio(x * 4 + dx, 4), ratio(y * 4 + dy, 4), ratio(z, 4));
            proptest::prop_assert_eq!(loc.contains(&p), point_in_interior(&m, &p));
        }
    }
}
