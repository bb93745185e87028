//! Exact-coordinate test shapes: the figure families, adversarial solids
//! and a random corpus, plus rational rigid motions.

use crate::geom::{int, ratio, Point2, Point3, Scalar};
use crate::mesh::{orient_consistently, orient_outward, validate, MeshError, TriMesh};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameters for {family}: {reason}")]
    BadParams { family: &'static str, reason: String },
    #[error("generated mesh is invalid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

fn bad(family: &'static str, reason: impl Into<String>) -> GenError {
    GenError::BadParams {
        family,
        reason: reason.into(),
    }
}

/// Collects polygons over shared vertices, then triangulates and orients.
#[derive(Default)]
struct Builder {
    vertices: Vec<Point3>,
    index: HashMap<Point3, usize>,
    faces: Vec<Vec<usize>>,
}

impl Builder {
    fn v(&mut self, p: Point3) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        self.vertices.push(p.clone());
        self.index.insert(p, self.vertices.len() - 1);
        self.vertices.len() - 1
    }

    fn face(&mut self, pts: Vec<Point3>) {
        let ids = pts.into_iter().map(|p| self.v(p)).collect();
        self.faces.push(ids);
    }

    fn finish(self) -> Result<TriMesh, GenError> {
        let mut m = TriMesh::from_polygons(self.vertices, &self.faces)?;
        if !orient_consistently(&mut m) {
            return Err(GenError::Invalid("not orientable".into()));
        }
        orient_outward(&mut m);
        let report = validate(&m, false);
        if !report.is_valid() {
            return Err(GenError::Invalid(report.summary()));
        }
        Ok(m)
    }
}

fn q3(x: &Scalar, y: &Scalar, z: &Scalar) -> Point3 {
    Point3::new(x.clone(), y.clone(), z.clone())
}

/// Prism over a simple polygon between heights `z0 < z1`, with every
/// vertical edge split at the given extra heights.
fn extrude(b: &mut Builder, ring: &[Point2], z0: &Scalar, z1: &Scalar) {
    b.face(ring.iter().map(|p| q3(&p.x, &p.y, z0)).collect());
    b.face(ring.iter().rev().map(|p| q3(&p.x, &p.y, z1)).collect());
    let n = ring.len();
    for i in 0..n {
        let (p, q) = (&ring[i], &ring[(i + 1) % n]);
        b.face(vec![q3(&p.x, &p.y, z0), q3(&q.x, &q.y, z0), q3(&q.x, &q.y, z1), q3(&p.x, &p.y, z1)]);
    }
}

fn pts(c: &[(i64, i64)]) -> Vec<Point2> {
    c.iter().map(|&(x, y)| Point2::from_i64(x, y)).collect()
}

/// Axis-aligned box `[0,w] x [0,h] x [0,d]`: 12 triangles.
pub fn make_box(w: i64, h: i64, d: i64) -> Result<TriMesh, GenError> {
    if w <= 0 || h <= 0 || d <= 0 {
        return Err(bad("box", "sides must be positive"));
    }
    let mut b = Builder::default();
    extrude(&mut b, &pts(&[(0, 0), (w, 0), (w, h), (0, h)]), &int(0), &int(d));
    b.finish()
}

/// Convex hull of `n` random integer points in general position. Hull
/// facets are found by testing every triple, so keep `n` small.
pub fn convex_hull(n: usize, seed: u64) -> Result<TriMesh, GenError> {
    if !(4..=40).contains(&n) {
        return Err(bad("convex_hull", "n must be in 4..=40"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let p: Vec<Point3> = (0..n)
            .map(|_| Point3::from_i64(rng.gen_range(-30..=30), rng.gen_range(-30..=30), rng.gen_range(-30..=30)))
            .collect();
        if let Some(m) = hull_of(&p) {
            return Ok(m);
        }
    }
}

/// Hull by brute force; `None` unless the points are in general position.
fn hull_of(p: &[Point3]) -> Option<TriMesh> {
    let n = p.len();
    let orient = |a: usize, b: usize, c: usize, d: usize| {
        p[b].sub(&p[a]).cross(&p[c].sub(&p[a])).dot(&p[d].sub(&p[a]))
    };
    let mut tris = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut pos = 0;
                let mut neg = 0;
                for l in 0..n {
                    if l == i || l == j || l == k {
                        continue;
                    }
                    let o = orient(i, j, k, l);
                    if o.is_zero() {
                        return None;
                    }
                    if o.is_positive() {
                        pos += 1;
                    } else {
                        neg += 1;
                    }
                }
                if pos == 0 {
                    tris.push([i, j, k]);
                } else if neg == 0 {
                    tris.push([i, k, j]);
                }
            }
        }
    }
    let mut used: Vec<usize> = tris.iter().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();
    let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(a, &b)| (b, a)).collect();
    let vertices = used.iter().map(|&i| p[i].clone()).collect();
    let triangles = tris.iter().map(|t| t.map(|i| remap[&i])).collect();
    Some(TriMesh::new(vertices, triangles))
}

const TORUS_VERTICES: [[i64; 3]; 18] = [
    [25, 0, 13], [15, 0, 13], [20, 0, 22],
    [17, 29, -21], [13, 23, -15], [18, 31, -12],
    [-12, 22, 13], [-8, 13, 13], [-10, 17, 22],
    [-34, 0, -21], [-27, 0, -15], [-36, 0, -12],
    [-12, -22, 13], [-8, -13, 13], [-10, -17, 22],
    [17, -29, -21], [13, -23, -15], [18, -31, -12],
];

const TORUS_TRIANGLES: [[usize; 3]; 36] = [
    [0, 1, 4], [0, 4, 3], [1, 2, 5], [1, 5, 4], [2, 0, 5], [0, 3, 5],
    [3, 4, 6], [4, 7, 6], [4, 5, 7], [5, 8, 7], [5, 3, 6], [5, 6, 8],
    [6, 7, 10], [6, 10, 9], [7, 8, 11], [7, 11, 10], [8, 6, 11], [6, 9, 11],
    [9, 10, 12], [10, 13, 12], [10, 11, 13], [11, 14, 13], [11, 9, 12], [11, 12, 14],
    [12, 13, 16], [12, 16, 15], [13, 14, 17], [13, 17, 16], [14, 12, 17], [12, 15, 17],
    [15, 16, 0], [16, 1, 0], [16, 17, 1], [17, 2, 1], [17, 15, 0], [17, 0, 2],
];

/// Genus-one solid that half-planes can carve: a ring of six triangular
/// tube segments whose cross-sections alternate in height and twist, so
/// every facial plane leaves the rest of the ring on one side of the face.
/// A flat rectangular frame does not have this property (see
/// [`flat_frame`]). 36 triangles; `scale` multiplies all coordinates.
pub fn genus1_frame(scale: i64) -> Result<TriMesh, GenError> {
    if scale <= 0 {
        return Err(bad("genus1_frame", "scale must be positive"));
    }
    let vertices = TORUS_VERTICES
        .iter()
        .map(|c| Point3::from_i64(c[0] * scale, c[1] * scale, c[2] * scale))
        .collect();
    let mut m = TriMesh::new(vertices, TORUS_TRIANGLES.to_vec());
    if !orient_consistently(&mut m) {
        return Err(GenError::Invalid("torus not orientable".into()));
    }
    orient_outward(&mut m);
    let report = validate(&m, false);
    if !report.is_valid() {
        return Err(GenError::Invalid(report.summary()));
    }
    Ok(m)
}

/// Square frame with a square through-hole: outer side `outer`, hole side
/// `inner`, thickness 1. Each inner wall's plane meets the frame on both
/// sides of the wall, so half-planes cannot carve it.
pub fn flat_frame(outer: i64, inner: i64) -> Result<TriMesh, GenError> {
    if inner <= 0 || outer <= inner || (outer - inner) % 2 != 0 {
        return Err(bad("flat_frame", "need 0 < inner < outer with outer - inner even"));
    }
    let g = (outer - inner) / 2;
    let o = pts(&[(0, 0), (outer, 0), (outer, outer), (0, outer)]);
    let i = pts(&[(g, g), (g + inner, g), (g + inner, g + inner), (g, g + inner)]);
    let mut b = Builder::default();
    let (z0, z1) = (int(0), int(1));
    for k in 0..4 {
        let (o0, o1, i0, i1) = (&o[k], &o[(k + 1) % 4], &i[k], &i[(k + 1) % 4]);
        for z in [&z0, &z1] {
            b.face(vec![q3(&o0.x, &o0.y, z), q3(&o1.x, &o1.y, z), q3(&i1.x, &i1.y, z), q3(&i0.x, &i0.y, z)]);
        }
        for (p, q) in [(o0, o1), (i0, i1)] {
            b.face(vec![q3(&p.x, &p.y, &z0), q3(&q.x, &q.y, &z0), q3(&q.x, &q.y, &z1), q3(&p.x, &p.y, &z1)]);
        }
    }
    b.finish()
}

/// A slab `[0,2m] x [0,2] x [-1,0]` topped by a row of `m` square
/// pyramids of height 2. Every face plane keeps the other pyramids on its
/// outer side, so the solid is half-plane carveable; each face still has to
/// scan all edges, which makes the deterministic decider quadratic.
/// `6m + 8` triangles.
pub fn pillars(m: usize) -> Result<TriMesh, GenError> {
    if m == 0 {
        return Err(bad("pillars", "need at least one pillar"));
    }
    let m = m as i64;
    let p = |x: i64, y: i64, z: i64| Point3::from_i64(x, y, z);
    let mut b = Builder::default();
    for i in 0..m {
        let (x0, x1) = (2 * i, 2 * i + 2);
        let apex = p(2 * i + 1, 1, 2);
        b.face(vec![p(x0, 0, 0), p(x1, 0, 0), apex.clone()]);
        b.face(vec![p(x1, 0, 0), p(x1, 2, 0), apex.clone()]);
        b.face(vec![p(x1, 2, 0), p(x0, 2, 0), apex.clone()]);
        b.face(vec![p(x0, 2, 0), p(x0, 0, 0), apex]);
    }
    let w = 2 * m;
    b.face(vec![p(0, 0, -1), p(0, 2, -1), p(w, 2, -1), p(w, 0, -1)]);
    b.face(vec![p(0, 0, -1), p(0, 0, 0), p(0, 2, 0), p(0, 2, -1)]);
    b.face(vec![p(w, 0, -1), p(w, 2, -1), p(w, 2, 0), p(w, 0, 0)]);
    for y in [0, 2] {
        let mut ring = vec![p(0, y, -1), p(w, y, -1)];
        ring.extend((0..=m).rev().map(|i| p(2 * i, y, 0)));
        b.face(ring);
    }
    b.finish()
}

/// Slab `[0,6] x [0,6] x [0,2]` with a slot `y in [2,4]` cut through its
/// full thickness from the side `x = 0` to `x = depth`. Only the slot's end
/// wall fails for half-planes (the slab surrounds it on both sides in its
/// plane), and rays along `z` still reach it.
pub fn blind_slot(depth: i64) -> Result<TriMesh, GenError> {
    if !(1..=5).contains(&depth) {
        return Err(bad("blind_slot", "depth must be in 1..=5"));
    }
    let ring = pts(&[(0, 0), (6, 0), (6, 6), (0, 6), (0, 4), (depth, 4), (depth, 2), (0, 2)]);
    let mut b = Builder::default();
    extrude(&mut b, &ring, &int(0), &int(2));
    b.finish()
}

/// Block `[0,4]^3` with a pocket `[1,3]^2 x [2,4]` open only at the top.
/// The pocket floor is enclosed in its plane on all four sides, so neither
/// half-planes nor ray sweeps reach it.
pub fn blind_pocket() -> Result<TriMesh, GenError> {
    let o = pts(&[(0, 0), (4, 0), (4, 4), (0, 4)]);
    let i = pts(&[(1, 1), (3, 1), (3, 3), (1, 3)]);
    let (z0, zf, z1) = (int(0), int(2), int(4));
    let mut b = Builder::default();
    b.face(o.iter().map(|p| q3(&p.x, &p.y, &z0)).collect());
    b.face(i.iter().map(|p| q3(&p.x, &p.y, &zf)).collect());
    for k in 0..4 {
        let (o0, o1, i0, i1) = (&o[k], &o[(k + 1) % 4], &i[k], &i[(k + 1) % 4]);
        b.face(vec![q3(&o0.x, &o0.y, &z1), q3(&o1.x, &o1.y, &z1), q3(&i1.x, &i1.y, &z1), q3(&i0.x, &i0.y, &z1)]);
        for (p, q, lo) in [(o0, o1, &z0), (i0, i1, &zf)] {
            b.face(vec![q3(&p.x, &p.y, lo), q3(&q.x, &q.y, lo), q3(&q.x, &q.y, &z1), q3(&p.x, &p.y, &z1)]);
        }
    }
    b.finish()
}

/// Grid of `nx x ny` unit columns with random integer heights in `1..=4`
/// over a common base at `z = 0`. Height grids with a saddle (diagonal
/// columns sharing only an edge at some level) are redrawn.
pub fn heightfield(nx: usize, ny: usize, seed: u64) -> Result<TriMesh, GenError> {
    if nx == 0 || ny == 0 || nx * ny > 64 {
        return Err(bad("heightfield", "need 1 <= nx * ny <= 64"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // diagonal columns meeting along a vertical edge are rejected
    loop {
        let h: Vec<Vec<i64>> = (0..nx).map(|_| (0..ny).map(|_| rng.gen_range(1..=4)).collect()).collect();
        if let Ok(m) = heightfield_from(&h) {
            return Ok(m);
        }
    }
}

/// Heightfield from explicit column heights (all positive).
pub fn heightfield_from(h: &[Vec<i64>]) -> Result<TriMesh, GenError> {
    let nx = h.len() as i64;
    let ny = h[0].len() as i64;
    if h.iter().flatten().any(|&v| v <= 0) {
        return Err(bad("heightfield", "heights must be positive"));
    }
    let height = |i: i64, j: i64| -> i64 {
        if i < 0 || j < 0 || i >= nx || j >= ny {
            0
        } else {
            h[i as usize][j as usize]
        }
    };
    // heights at which a vertical grid line carries a vertex
    let breaks = |x: i64, y: i64| -> Vec<i64> {
        let mut v = vec![height(x - 1, y - 1), height(x, y - 1), height(x - 1, y), height(x, y), 0];
        v.sort_unstable();
        v.dedup();
        v
    };
    let p = |x: i64, y: i64, z: i64| Point3::from_i64(x, y, z);
    let mut b = Builder::default();
    for i in 0..nx {
        for j in 0..ny {
            let z = height(i, j);
            b.face(vec![p(i, j, z), p(i + 1, j, z), p(i + 1, j + 1, z), p(i, j + 1, z)]);
        }
    }
    // walls along grid edges between cells (or a cell and the outside)
    let wall = |b: &mut Builder, a: (i64, i64), c: (i64, i64), lo: i64, hi: i64| {
        if lo == hi {
            return;
        }
        let mut ring = vec![p(a.0, a.1, lo), p(c.0, c.1, lo)];
        ring.extend(breaks(c.0, c.1).into_iter().filter(|&z| z > lo && z < hi).map(|z| p(c.0, c.1, z)));
        ring.push(p(c.0, c.1, hi));
        ring.push(p(a.0, a.1, hi));
        ring.extend(breaks(a.0, a.1).into_iter().rev().filter(|&z| z > lo && z < hi).map(|z| p(a.0, a.1, z)));
        b.face(ring);
    };
    for i in 0..=nx {
        for j in 0..ny {
            let (l, r) = (height(i - 1, j), height(i, j));
            wall(&mut b, (i, j), (i, j + 1), l.min(r), l.max(r));
        }
    }
    for j in 0..=ny {
        for i in 0..nx {
            let (l, r) = (height(i, j - 1), height(i, j));
            wall(&mut b, (i, j), (i + 1, j), l.min(r), l.max(r));
        }
    }
    let mut base = Vec::new();
    base.extend((0..nx).map(|i| p(i, 0, 0)));
    base.extend((0..ny).map(|j| p(nx, j, 0)));
    base.extend((1..=nx).rev().map(|i| p(i, ny, 0)));
    base.extend((1..=ny).rev().map(|j| p(0, j, 0)));
    b.face(base);
    b.finish()
}

/// Prism of height 3 over a star polygon with `k` random spikes.
pub fn star_prism(k: usize, seed: u64) -> Result<TriMesh, GenError> {
    if !(3..=12).contains(&k) {
        return Err(bad("star_prism", "k must be in 3..=12"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let ring: Vec<Point2> = (0..2 * k)
            .map(|i| {
                let r = if i % 2 == 0 { rng.gen_range(14.0..20.0) } else { rng.gen_range(4.0..9.0) };
                let a = std::f64::consts::PI * i as f64 / k as f64;
                Point2::from_i64((r * a.cos()).round() as i64, (r * a.sin()).round() as i64)
            })
            .collect();
        let mut b = Builder::default();
        extrude(&mut b, &ring, &int(0), &int(3));
        if let Ok(m) = b.finish() {
            if validate(&m, true).is_valid() {
                return Ok(m);
            }
        }
    }
}

/// Named family with integer parameters, as accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeSpec {
    Box { w: i64, h: i64, d: i64 },
    ConvexHull { n: usize, seed: u64 },
    Genus1Frame { scale: i64 },
    FlatFrame { outer: i64, inner: i64 },
    Pillars { m: usize },
    BlindSlot { depth: i64 },
    BlindPocket,
    Heightfield { nx: usize, ny: usize, seed: u64 },
    StarPrism { k: usize, seed: u64 },
}

pub const FAMILIES: [&str; 9] = [
    "box",
    "convex_hull",
    "genus1_frame",
    "flat_frame",
    "pillars",
    "blind_slot",
    "blind_pocket",
    "heightfield",
    "star_prism",
];

impl ShapeSpec {
    /// Parses a family name and its parameters; missing parameters take
    /// defaults.
    pub fn parse(family: &str, params: &[i64]) -> Result<ShapeSpec, GenError> {
        let get = |i: usize, d: i64| params.get(i).copied().unwrap_or(d);
        let nonneg = |v: i64, name: &'static str| -> Result<u64, GenError> {
            u64::try_from(v).map_err(|_| bad(name, "parameters must be non-negative"))
        };
        Ok(match family {
            "box" => ShapeSpec::Box { w: get(0, 1), h: get(1, 1), d: get(2, 1) },
            "convex_hull" => ShapeSpec::ConvexHull {
                n: nonneg(get(0, 10), "convex_hull")? as usize,
                seed: nonneg(get(1, 0), "convex_hull")?,
            },
            "genus1_frame" => ShapeSpec::Genus1Frame { scale: get(0, 1) },
            "flat_frame" => ShapeSpec::FlatFrame { outer: get(0, 6), inner: get(1, 2) },
            "pillars" => ShapeSpec::Pillars { m: nonneg(get(0, 4), "pillars")? as usize },
            "blind_slot" => ShapeSpec::BlindSlot { depth: get(0, 3) },
            "blind_pocket" => ShapeSpec::BlindPocket,
            "heightfield" => ShapeSpec::Heightfield {
                nx: nonneg(get(0, 2), "heightfield")? as usize,
                ny: nonneg(get(1, 2), "heightfield")? as usize,
                seed: nonneg(get(2, 0), "heightfield")?,
            },
            "star_prism" => ShapeSpec::StarPrism {
                k: nonneg(get(0, 5), "star_prism")? as usize,
                seed: nonneg(get(1, 0), "star_prism")?,
            },
            other => return Err(GenError::UnknownFamily(other.to_string())),
        })
    }

    pub fn make(&self) -> Result<TriMesh, GenError> {
        match *self {
            ShapeSpec::Box { w, h, d } => make_box(w, h, d),
            ShapeSpec::ConvexHull { n, seed } => convex_hull(n, seed),
            ShapeSpec::Genus1Frame { scale } => genus1_frame(scale),
            ShapeSpec::FlatFrame { outer, inner } => flat_frame(outer, inner),
            ShapeSpec::Pillars { m } => pillars(m),
            ShapeSpec::BlindSlot { depth } => blind_slot(depth),
            ShapeSpec::BlindPocket => blind_pocket(),
            ShapeSpec::Heightfield { nx, ny, seed } => heightfield(nx, ny, seed),
            ShapeSpec::StarPrism { k, seed } => star_prism(k, seed),
        }
    }
}

impl fmt::Display for ShapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeSpec::Box { w, h, d } => write!(f, "box({w},{h},{d})"),
            ShapeSpec::ConvexHull { n, seed } => write!(f, "convex_hull({n},{seed})"),
            ShapeSpec::Genus1Frame { scale } => write!(f, "genus1_frame({scale})"),
            ShapeSpec::FlatFrame { outer, inner } => write!(f, "flat_frame({outer},{inner})"),
            ShapeSpec::Pillars { m } => write!(f, "pillars({m})"),
            ShapeSpec::BlindSlot { depth } => write!(f, "blind_slot({depth})"),
            ShapeSpec::BlindPocket => write!(f, "blind_pocket"),
            ShapeSpec::Heightfield { nx, ny, seed } => write!(f, "heightfield({nx},{ny},{seed})"),
            ShapeSpec::StarPrism { k, seed } => write!(f, "star_prism({k},{seed})"),
        }
    }
}

/// Random shapes with at most `max_triangles` triangles: heightfields,
/// star prisms and convex hulls in rotation.
pub fn random_corpus(count: usize, max_triangles: usize, seed: u64) -> Vec<(ShapeSpec, TriMesh)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = rng.gen::<u64>();
        let spec = match out.len() % 3 {
            0 => ShapeSpec::Heightfield {
                nx: rng.gen_range(1..=3),
                ny: rng.gen_range(1..=2),
                seed: s,
            },
            1 => ShapeSpec::StarPrism {
                k: rng.gen_range(3..=6),
                seed: s,
            },
            _ => ShapeSpec::ConvexHull {
                n: rng.gen_range(5..=14),
                seed: s,
            },
        };
        if let Ok(m) = spec.make() {
            if m.num_triangles() <= max_triangles {
                out.push((spec, m));
            }
        }
    }
    out
}

/// `x -> scale * R x + t` with `R` a rational rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidMotion {
    pub rotation: [[Scalar; 3]; 3],
    pub scale: Scalar,
    pub translation: Point3,
}

impl RigidMotion {
    /// Rotation from the Cayley transform of a random skew matrix with small
    /// integer entries, a scale in `[1/3, 3]` and a small translation.
    pub fn random(seed: u64) -> RigidMotion {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = || int(rng.gen_range(-3..=3));
        let (a, b, c) = (g(), g(), g());
        // R = ((1 - s) I + 2 (w w^T + [w]x)) / (1 + s), s = |w|^2
        let s = &a * &a + &b * &b + &c * &c;
        let d = Scalar::one() + &s;
        let w = [a, b, c];
        let skew = [
            [Scalar::zero(), -w[2].clone(), w[1].clone()],
            [w[2].clone(), Scalar::zero(), -w[0].clone()],
            [-w[1].clone(), w[0].clone(), Scalar::zero()],
        ];
        let rotation = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let diag = if i == j { Scalar::one() - &s } else { Scalar::zero() };
                (diag + (&w[i] * &w[j] + &skew[i][j]) * int(2)) / &d
            })
        });
        let scale = ratio(rng.gen_range(1..=9), rng.gen_range(1..=3));
        let translation = Point3::from_i64(rng.gen_range(-50..=50), rng.gen_range(-50..=50), rng.gen_range(-50..=50));
        RigidMotion {
            rotation,
            scale,
            translation,
        }
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        let c = [&p.x, &p.y, &p.z];
        let r: [Scalar; 3] = std::array::from_fn(|i| {
            (0..3).fold(Scalar::zero(), |acc, j| acc + &self.rotation[i][j] * c[j]) * &self.scale
        });
        Point3::new(
            &r[0] + &self.translation.x,
            &r[1] + &self.translation.y,
            &r[2] + &self.translation.z,
        )
    }

    pub fn apply_mesh(&self, m: &TriMesh) -> TriMesh {
        m.map_vertices(|p| self.apply(p), false)
    }
}

/// Planar similarity `x -> scale * R x + t` with `R` from a Pythagorean
/// triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Motion2 {
    pub cos: Scalar,
    pub sin: Scalar,
    pub scale: Scalar,
    pub translation: Point2,
}

impl Motion2 {
    pub fn random(seed: u64) -> Motion2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, n) = (rng.gen_range(1..=6i64), rng.gen_range(0..=6i64));
        let h = m * m + n * n;
        Motion2 {
            cos: ratio(m * m - n * n, h),
            sin: ratio(2 * m * n, h),
            scale: ratio(rng.gen_range(1..=9), rng.gen_range(1..=3)),
            translation: Point2::from_i64(rng.gen_range(-20..=20), rng.gen_range(-20..=20)),
        }
    }

    pub fn apply(&self, p: &Point2) -> Point2 {
        let x = (&self.cos * &p.x - &self.sin * &p.y) * &self.scale + &self.translation.x;
        let y = (&self.sin * &p.x + &self.cos * &p.y) * &self.scale + &self.translation.y;
        Point2::new(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{require_valid, validate};

    fn assert_valid(m: &TriMesh) {
        let r = validate(m, true);
        assert!(r.is_valid(), "{}", r.summary());
        assert!(m.signed_volume6().is_positive());
    }

    #[test]
    fn families_are_valid() {
        assert_eq!(make_box(1, 1, 1).unwrap().num_triangles(), 12);
        for name in FAMILIES {
            let m = ShapeSpec::parse(name, &[]).unwrap().make().unwrap();
            assert_valid(&m);
        }
        for m in 1..6 {
            assert_eq!(pillars(m).unwrap().num_triangles(), 6 * m + 8);
        }
        for d in 1..=5 {
            assert_valid(&blind_slot(d).unwrap());
        }
        assert_eq!(genus1_frame(1).unwrap().num_triangles(), 36);
        assert!(ShapeSpec::parse("sphere", &[]).is_err());
    }

    #[test]
    fn torus_has_genus_one() {
        let m = genus1_frame(1).unwrap();
        let e = crate::mesh::edges(&m).len() as i64;
        let chi = m.vertices.len() as i64 - e + m.num_triangles() as i64;
        assert_eq!(chi, 0);
        let f = flat_frame(6, 2).unwrap();
        let e = crate::mesh::edges(&f).len() as i64;
        assert_eq!(f.vertices.len() as i64 - e + f.num_triangles() as i64, 0);
    }

    #[test]
    fn random_shapes_are_valid() {
        for (spec, m) in random_corpus(12, 60, 5) {
            assert!(m.num_triangles() <= 60, "{spec}");
            require_valid(&m).unwrap();
            assert_valid(&m);
        }
        let h = heightfield_from(&[vec![1, 3], vec![2, 4]]).unwrap();
        assert_valid(&h);
        assert!(heightfield_from(&[vec![1, 3], vec![4, 2]]).is_err());
    }

    #[test]
    fn motions_preserve_validity_and_orientation() {
        let m = blind_slot(3).unwrap();
        for seed in 0..4 {
            let mv = RigidMotion::random(seed);
            let t = mv.apply_mesh(&m);
            assert_valid(&t);
            // orthogonality
            for i in 0..3 {
                for j in 0..3 {
                    let d = (0..3).fold(Scalar::zero(), |a, k| a + &mv.rotation[i][k] * &mv.rotation[j][k]);
                    assert_eq!(d, if i == j { Scalar::one() } else { Scalar::zero() });
                }
            }
            let m2 = Motion2::random(seed);
            assert_eq!(&m2.cos * &m2.cos + &m2.sin * &m2.sin, Scalar::one());
        }
    }

    #[test]
    fn halfplane_verdicts_of_families() {
        use crate::halfplane_det::decide_halfplane;
        use crate::halfplane_rand::decide_halfplane_randomized;
        use crate::oracles::halfplane_carveable_bruteforce;
        let cases: Vec<(TriMesh, bool)> = vec![
            (make_box(2, 3, 1).unwrap(), true),
            (convex_hull(9, 3).unwrap(), true),
            (genus1_frame(1).unwrap(), true),
            (flat_frame(6, 2).unwrap(), false),
            (pillars(3).unwrap(), true),
            (blind_slot(3).unwrap(), false),
            (blind_pocket().unwrap(), false),
        ];
        for (i, (m, expected)) in cases.iter().enumerate() {
            assert_eq!(decide_halfplane(m).is_ok(), *expected, "case {i}");
            assert_eq!(halfplane_carveable_bruteforce(m).unwrap(), *expected, "case {i}");
            assert_eq!(decide_halfplane_randomized(m, 2, 7).is_ok(), *expected, "case {i}");
        }
    }
}
