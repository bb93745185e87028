//! Ray sweeps in a plane: all maximal valid sweeps around obstacle
//! vertices, the line arrangement of their boundaries, and the decision
//! whether a triangle is covered by their union.

use crate::geom::{angle_cmp, int, orient2d, orient_filter, ratio, side_of, Line2, Point2, Scalar, Sign, Vector2};
use crate::xsection::{in_section_interior, probe_points, CrossSection};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::HashMap;

/// Axis-aligned closed box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBox {
    pub min: Point2,
    pub max: Point2,
}

impl BBox {
    /// Smallest box holding `pts`; `None` when `pts` is empty.
    pub fn around<'a>(pts: impl IntoIterator<Item = &'a Point2>) -> Option<BBox> {
        let mut it = pts.into_iter();
        let first = it.next()?;
        let mut b = BBox {
            min: first.clone(),
            max: first.clone(),
        };
        for p in it {
            if p.x < b.min.x {
                b.min.x = p.x.clone();
            }
            if p.y < b.min.y {
                b.min.y = p.y.clone();
            }
            if p.x > b.max.x {
                b.max.x = p.x.clone();
            }
            if p.y > b.max.y {
                b.max.y = p.y.clone();
            }
        }
        Some(b)
    }

    /// Scales the box by `factor` about its center, widening degenerate
    /// extents to at least one unit.
    pub fn inflated(&self, factor: i64) -> BBox {
        let c = self.center();
        let half = ratio(1, 2);
        let hx = ((&self.max.x - &self.min.x) * &half).max(half.clone()) * int(factor);
        let hy = ((&self.max.y - &self.min.y) * &half).max(half.clone()) * int(factor);
        BBox {
            min: Point2::new(&c.x - &hx, &c.y - &hy),
            max: Point2::new(&c.x + &hx, &c.y + &hy),
        }
    }

    pub fn center(&self) -> Point2 {
        self.min.midpoint(&self.max)
    }

    /// Counter-clockwise from the lower left.
    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min.clone(),
            Point2::new(self.max.x.clone(), self.min.y.clone()),
            self.max.clone(),
            Point2::new(self.min.x.clone(), self.max.y.clone()),
        ]
    }

    pub fn contains(&self, p: &Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn contains_strictly(&self, p: &Point2) -> bool {
        p.x > self.min.x && p.x < self.max.x && p.y > self.min.y && p.y < self.max.y
    }

    /// Parameter interval of `line` inside the closed box.
    pub fn clip(&self, line: &Line2) -> Option<(Scalar, Scalar)> {
        let mut lo: Option<Scalar> = None;
        let mut hi: Option<Scalar> = None;
        let p = &line.point;
        let d = &line.direction;
        for (pc, dc, mn, mx) in [
            (&p.x, &d.x, &self.min.x, &self.max.x),
            (&p.y, &d.y, &self.min.y, &self.max.y),
        ] {
            if dc.is_zero() {
                if pc < mn || pc > mx {
                    return None;
                }
                continue;
            }
            let t1 = (mn - pc) / dc;
            let t2 = (mx - pc) / dc;
            let (a, b) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            lo = Some(match lo {
                Some(l) if l >= a => l,
                _ => a,
            });
            hi = Some(match hi {
                Some(h) if h <= b => h,
                _ => b,
            });
        }
        let (lo, hi) = (lo?, hi?);
        (lo <= hi).then_some((lo, hi))
    }

    /// Where the ray `origin + s dir` leaves the box; `origin` must be inside.
    pub fn exit_point(&self, origin: &Point2, dir: &Vector2) -> Point2 {
        let line = Line2::new(origin.clone(), dir.clone()).expect("nonzero direction");
        let (_, hi) = self.clip(&line).expect("origin inside box");
        line.at(&hi)
    }

    pub fn edges(&self) -> [Line2; 4] {
        let c = self.corners();
        [0, 1, 2, 3].map(|i| Line2::through(&c[i], &c[(i + 1) % 4]).unwrap())
    }
}

/// Region swept by the closed rays from `a(t)` through `b(t)`, where both
/// points move linearly for `t` in `[0, 1]` and `s >= 0` runs along each
/// ray. The pivot form keeps `b` fixed (`b_start == b_end`); the fan form
/// keeps `a` fixed and turns the direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearRaySweep {
    pub a_start: Point2,
    pub a_end: Point2,
    pub b_start: Point2,
    pub b_end: Point2,
}

/// Part of a sweep's boundary lying on one carrier line.
#[derive(Clone, Debug)]
pub struct BoundaryPiece {
    pub origin: Point2,
    pub direction: Vector2,
    /// `true` for the segment `origin .. origin + direction`, `false` for
    /// the ray.
    pub bounded: bool,
    /// A point on the interior side near the piece's origin.
    pub inside_ref: Point2,
    /// Parameter past which the interior switches sides.
    pub flip_at: Option<Scalar>,
}

impl BoundaryPiece {
    /// Side of the directed line `origin -> origin + direction` on which the
    /// region lies at `m`, or `None` if `m` is not on the piece (or is at
    /// the switch point).
    pub fn interior_side_at(&self, m: &Point2) -> Option<Sign> {
        if self.direction.is_zero() || side_of(&self.origin, &self.direction, m) != Sign::Zero {
            return None;
        }
        self.side_on_carrier(m, side_of(&self.origin, &self.direction, &self.inside_ref))
    }

    /// As [`Self::interior_side_at`] for `m` known to lie on the carrier,
    /// with the side of `inside_ref` supplied.
    fn side_on_carrier(&self, m: &Point2, side: Sign) -> Option<Sign> {
        let dot = m.sub(&self.origin).dot(&self.direction);
        if dot.is_negative() {
            return None;
        }
        let n2 = self.direction.norm2();
        if self.bounded && dot > n2 {
            return None;
        }
        match &self.flip_at {
            Some(f) => match dot.cmp(&(f * &n2)) {
                Ordering::Equal => None,
                Ordering::Greater => Some(side.flip()),
                Ordering::Less => Some(side),
            },
            None => Some(side),
        }
    }
}


impl LinearRaySweep {
    pub fn pivot(b: Point2, a_start: Point2, a_end: Point2) -> Self {
        LinearRaySweep {
            a_start,
            a_end,
            b_start: b.clone(),
            b_end: b,
        }
    }

    /// Rays from `apex` with directions interpolating `d_start` to `d_end`.
    pub fn fan(apex: Point2, d_start: &Vector2, d_end: &Vector2) -> Self {
        LinearRaySweep {
            b_start: apex.add(d_start),
            b_end: apex.add(d_end),
            a_start: apex.clone(),
            a_end: apex,
        }
    }

    pub fn is_pivot(&self) -> bool {
        self.b_start == self.b_end
    }

    pub fn is_fan(&self) -> bool {
        !self.is_pivot() && self.a_start == self.a_end
    }

    pub fn a_at(&self, t: &Scalar) -> Point2 {
        self.a_start.lerp(&self.a_end, t)
    }

    pub fn b_at(&self, t: &Scalar) -> Point2 {
        self.b_start.lerp(&self.b_end, t)
    }

    /// Point `a(t) + s (b(t) - a(t))`.
    pub fn sample(&self, t: &Scalar, s: &Scalar) -> Point2 {
        let a = self.a_at(t);
        a.lerp(&self.b_at(t), s)
    }

    pub fn has_area(&self) -> bool {
        if self.is_pivot() {
            orient2d(&self.a_start, &self.a_end, &self.b_start) != Sign::Zero
        } else {
            let d0 = self.b_start.sub(&self.a_start);
            let d1 = self.b_end.sub(&self.a_end);
            self.is_fan() && !d0.cross(&d1).is_zero()
        }
    }

    /// Closed membership, decided by splitting the region into a triangle
    /// and a cone.
    pub fn contains(&self, p: &Point2) -> bool {
        if self.is_pivot() {
            let (a0, a1, b) = (&self.a_start, &self.a_end, &self.b_start);
            let det = orient2d(a0, a1, b);
            if det != Sign::Zero {
                // triangle a0 a1 b, then the cone at b spanned by b - a0 and b - a1
                let (o1, o2, o3) = (orient2d(a0, a1, p), orient2d(a1, b, p), orient2d(a0, b, p));
                let s = [o1, o2, o3.flip()];
                let in_triangle = !(s.contains(&Sign::Positive) && s.contains(&Sign::Negative));
                return in_triangle || (o2.times(det) != Sign::Positive && o3.times(det) != Sign::Negative);
            }
            // collinear: every ray lies in one of the two end rays
            return p == b || [a0, a1].iter().any(|a| *a != b && on_closed_ray(a, &b.sub(a), p));
        }
        let apex = &self.a_start;
        let det = orient2d(apex, &self.b_start, &self.b_end);
        if det == Sign::Zero {
            let d0 = self.b_start.sub(apex);
            let d1 = self.b_end.sub(apex);
            return p == apex || [&d0, &d1].iter().any(|d| !d.is_zero() && on_closed_ray(apex, d, p));
        }
        orient2d(apex, &self.b_end, p).times(det) != Sign::Positive
            && orient2d(apex, &self.b_start, p).times(det) != Sign::Negative
    }

    /// Carrier lines of the boundary (empty for zero-area sweeps).
    pub fn boundary_pieces(&self) -> Vec<BoundaryPiece> {
        if !self.has_area() {
            return Vec::new();
        }
        if self.is_pivot() {
            let (a0, a1, b) = (&self.a_start, &self.a_end, &self.b_start);
            vec![
                BoundaryPiece {
                    origin: a0.clone(),
                    direction: a1.sub(a0),
                    bounded: true,
                    inside_ref: b.clone(),
                    flip_at: None,
                },
                BoundaryPiece {
                    origin: a0.clone(),
                    direction: b.sub(a0),
                    bounded: false,
                    inside_ref: a1.clone(),
                    flip_at: Some(Scalar::one()),
                },
                BoundaryPiece {
                    origin: a1.clone(),
                    direction: b.sub(a1),
                    bounded: false,
                    inside_ref: a0.clone(),
                    flip_at: Some(Scalar::one()),
                },
            ]
        } else {
            let apex = &self.a_start;
            vec![
                BoundaryPiece {
                    origin: apex.clone(),
                    direction: self.b_start.sub(apex),
                    bounded: false,
                    inside_ref: self.b_end.clone(),
                    flip_at: None,
                },
                BoundaryPiece {
                    origin: apex.clone(),
                    direction: self.b_end.sub(apex),
                    bounded: false,
                    inside_ref: self.b_start.clone(),
                    flip_at: None,
                },
            ]
        }
    }
}

fn on_closed_ray(origin: &Point2, dir: &Vector2, p: &Point2) -> bool {
    side_of(origin, dir, p) == Sign::Zero && !p.sub(origin).dot(dir).is_negative()
}

/// What a ray meets at one parameter value.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Feature {
    /// Proper crossing through the relative interior of a retained segment.
    Crossing(usize),
    /// A section vertex.
    Vertex(usize),
    /// Touch point or inert segment: no interior nearby.
    Other,
}

/// Ray queries against one cross-section. Each vertex keeps its incident
/// retained segments in angular order with the interior side of the
/// sector that follows each one counter-clockwise.
pub struct RayCaster<'a> {
    pub section: &'a CrossSection,
    stars: Vec<Vec<(Vector2, bool)>>,
    index: HashMap<Point2, usize>,
    approx: Vec<[f64; 2]>,
}

impl<'a> RayCaster<'a> {
    pub fn new(section: &'a CrossSection) -> Self {
        let mut stars: Vec<Vec<(Vector2, bool)>> = vec![Vec::new(); section.vertices.len()];
        for (i, &(ia, ib)) in section.segments.iter().enumerate() {
            let (pl, pr) = probe_points(section, i);
            let (left, right) = (section.contains(&pl), section.contains(&pr));
            let (a, b) = (&section.vertices[ia], &section.vertices[ib]);
            stars[ia].push((b.sub(a), left));
            stars[ib].push((a.sub(b), right));
        }
        for s in stars.iter_mut() {
            s.sort_by(|x, y| angle_cmp(&x.0, &y.0));
        }
        let index = section
            .vertices
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let approx = section.vertices.iter().map(|v| v.to_f64()).collect();
        RayCaster {
            section,
            stars,
            index,
            approx,
        }
    }

    /// Whether points `w + eps d` lie in the interior for all small `eps`.
    fn interior_after(&self, w: usize, d: &Vector2) -> bool {
        let star = &self.stars[w];
        if star.is_empty() {
            return false;
        }
        let pos = star.partition_point(|(e, _)| angle_cmp(e, d).is_lt());
        if pos < star.len() && angle_cmp(&star[pos].0, d).is_eq() {
            return false;
        }
        star[(pos + star.len() - 1) % star.len()].1
    }

    /// Features on the open ray `origin + s dir`, `s > 0`, sorted by `s`.
    fn features(&self, origin: &Point2, dir: &Vector2) -> Vec<(Scalar, Feature)> {
        let s = self.section;
        let line = Line2::new(origin.clone(), dir.clone()).expect("nonzero direction");
        let d2 = dir.norm2();
        let param = |p: &Point2| p.sub(origin).dot(dir) / &d2;
        let mut hits: Vec<(Scalar, Feature)> = Vec::new();
        let (of, df) = (origin.to_f64(), dir.to_f64());
        let side: Vec<Sign> = s
            .vertices
            .iter()
            .zip(&self.approx)
            .map(|(v, &vf)| orient_filter(of, df, vf).unwrap_or_else(|| line.side(v)))
            .collect();
        for (i, &v) in side.iter().enumerate() {
            if v == Sign::Zero {
                hits.push((param(&s.vertices[i]), Feature::Vertex(i)));
            }
        }
        for (i, &(ia, ib)) in s.segments.iter().enumerate() {
            let (sa, sb) = (side[ia], side[ib]);
            if sa == Sign::Zero || sb == Sign::Zero || sa == sb {
                continue;
            }
            let seg = Line2::through(&s.vertices[ia], &s.vertices[ib]).unwrap();
            if let Some(t) = line.intersect_param(&seg) {
                hits.push((t, Feature::Crossing(i)));
            }
        }
        for (a, b) in &s.inert_segments {
            let (sa, sb) = (line.side(a), line.side(b));
            if sa == Sign::Zero {
                hits.push((param(a), Feature::Other));
            }
            if sb == Sign::Zero {
                hits.push((param(b), Feature::Other));
            }
            if sa != Sign::Zero && sb != Sign::Zero && sa != sb {
                let seg = Line2::through(a, b).unwrap();
                if let Some(t) = line.intersect_param(&seg) {
                    hits.push((t, Feature::Other));
                }
            }
        }
        for p in &s.touch_points {
            if line.side(p) == Sign::Zero {
                hits.push((param(p), Feature::Other));
            }
        }
        hits.retain(|(t, _)| t.is_positive());
        let rank = |f: &Feature| match f {
            Feature::Vertex(_) => 0,
            Feature::Crossing(_) => 1,
            Feature::Other => 2,
        };
        hits.sort_by(|a, b| a.0.cmp(&b.0).then(rank(&a.1).cmp(&rank(&b.1))));
        hits.dedup_by(|a, b| a.0 == b.0);
        hits
    }

    /// Whether the first stretch of the ray after `origin` is interior.
    fn starts_inside(&self, origin: &Point2, dir: &Vector2, first: Option<&Scalar>) -> bool {
        if let Some(&w) = self.index.get(origin) {
            return self.interior_after(w, dir);
        }
        let step = first.map(|t| t / int(2)).unwrap_or_else(Scalar::one);
        self.section.contains(&origin.add(&dir.scale(&step)))
    }

    /// Float-filtered sides of all section vertices relative to the line
    /// through `origin` along `dir`.
    fn sides(&self, origin: &Point2, dir: &Vector2) -> Vec<Sign> {
        let (of, df) = (origin.to_f64(), dir.to_f64());
        self.section
            .vertices
            .iter()
            .zip(&self.approx)
            .map(|(v, &vf)| orient_filter(of, df, vf).unwrap_or_else(|| side_of(origin, dir, v)))
            .collect()
    }

    /// Retained segments crossed properly by the open ray, with the sides
    /// already computed. The crossing lies ahead of `origin` iff the turn
    /// `origin, a, b` has the sign of `b`'s side.
    fn crossings_ahead<'s>(
        &'s self,
        origin: &'s Point2,
        side: &'s [Sign],
    ) -> impl Iterator<Item = usize> + 's {
        let s = self.section;
        s.segments.iter().enumerate().filter_map(move |(i, &(ia, ib))| {
            let (sa, sb) = (side[ia], side[ib]);
            if sa == Sign::Zero || sb == Sign::Zero || sa == sb {
                return None;
            }
            (orient2d(origin, &s.vertices[ia], &s.vertices[ib]) == sb).then_some(i)
        })
    }

    /// Section vertices on the open ray.
    fn vertices_ahead<'s>(
        &'s self,
        origin: &'s Point2,
        dir: &'s Vector2,
        side: &'s [Sign],
    ) -> impl Iterator<Item = usize> + 's {
        let s = self.section;
        (0..s.vertices.len())
            .filter(move |&i| side[i] == Sign::Zero && s.vertices[i].sub(origin).dot(dir).is_positive())
    }

    /// True iff the closed ray from `origin` along `dir` avoids the open
    /// obstacle region.
    pub fn ray_valid(&self, origin: &Point2, dir: &Vector2) -> bool {
        let Some(&w0) = self.index.get(origin) else {
            return self.ray_valid_general(origin, dir);
        };
        if self.interior_after(w0, dir) {
            return false;
        }
        let side = self.sides(origin, dir);
        if self.crossings_ahead(origin, &side).next().is_some() {
            return false;
        }
        let blocked = self.vertices_ahead(origin, dir, &side).any(|w| self.interior_after(w, dir));
        !blocked
    }

    fn ray_valid_general(&self, origin: &Point2, dir: &Vector2) -> bool {
        if self.section.contains(origin) {
            return false;
        }
        let feats = self.features(origin, dir);
        if self.starts_inside(origin, dir, feats.first().map(|f| &f.0)) {
            return false;
        }
        feats.iter().all(|(_, f)| match f {
            Feature::Crossing(_) => false,
            Feature::Vertex(w) => !self.interior_after(*w, dir),
            Feature::Other => true,
        })
    }

    /// First point where the ray from vertex `v` enters the interior.
    fn backward_stop(&self, v: &Point2, back: &Vector2) -> BackStop {
        let w0 = self.index[v];
        if self.interior_after(w0, back) {
            return BackStop::Immediate;
        }
        let side = self.sides(v, back);
        let line = Line2::new(v.clone(), back.clone()).expect("nonzero direction");
        let d2 = back.norm2();
        let mut best: Option<(Scalar, Option<usize>)> = None;
        let mut offer = |t: Scalar, seg: Option<usize>| {
            let better = match &best {
                None => true,
                // at equal parameters a vertex wins over a crossing
                Some((bt, bseg)) => t < *bt || (t == *bt && seg.is_none() && bseg.is_some()),
            };
            if better {
                best = Some((t, seg));
            }
        };
        for w in self.vertices_ahead(v, back, &side) {
            if self.interior_after(w, back) {
                offer(self.section.vertices[w].sub(v).dot(back) / &d2, None);
            }
        }
        for i in self.crossings_ahead(v, &side) {
            let (a, b) = self.section.segment(i);
            let seg = Line2::through(a, b).unwrap();
            let t = line.intersect_param(&seg).expect("proper crossing");
            offer(t, Some(i));
        }
        match best {
            Some((t, seg)) => BackStop::Entry(t, seg),
            None => BackStop::Box,
        }
    }

    /// True iff some closed ray from `p` avoids the open obstacle region.
    pub fn point_visible(&self, p: &Point2) -> bool {
        let s = self.section;
        if s.contains(p) {
            return false;
        }
        if s.is_empty() {
            return true;
        }
        s.obstacle_vertices()
            .into_iter()
            .map(|w| &s.vertices[w])
            .filter(|w| *w != p)
            .any(|w| self.ray_valid(p, &w.sub(p)))
    }
}

/// True iff the closed ray from `origin` along `dir` avoids the open
/// obstacle region.
pub fn ray_valid(section: &CrossSection, origin: &Point2, dir: &Vector2) -> bool {
    RayCaster::new(section).ray_valid(origin, dir)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum BackStop {
    /// The obstacle interior starts right at the origin.
    Immediate,
    /// First entry into the interior, with the segment crossed there.
    Entry(Scalar, Option<usize>),
    /// No entry before leaving the box.
    Box,
}

/// Output of [`free_ray_sweeps`].
#[derive(Clone, Debug, Default)]
pub struct SweepSet {
    pub sweeps: Vec<LinearRaySweep>,
    /// No obstacles: every ray is valid.
    pub whole_plane: bool,
}

impl SweepSet {
    pub fn contains(&self, p: &Point2) -> bool {
        self.whole_plane || self.sweeps.iter().any(|s| s.contains(p))
    }
}

/// Angularly sorted, deduplicated event directions around `v`: both
/// directions towards every other obstacle vertex and every box corner, so
/// a backward wedge never spans a corner.
fn event_directions(section: &CrossSection, v: usize, bbox: &BBox) -> Vec<Vector2> {
    let pv = &section.vertices[v];
    let mut dirs: Vec<Vector2> = Vec::new();
    for w in section.obstacle_vertices() {
        if w != v {
            let d = section.vertices[w].sub(pv);
            dirs.push(d.neg());
            dirs.push(d);
        }
    }
    for c in bbox.corners() {
        let d = c.sub(pv);
        dirs.push(d.neg());
        dirs.push(d);
    }
    dirs.sort_by(angle_cmp);
    dirs.dedup_by(|a, b| angle_cmp(a, b).is_eq());
    dirs
}

/// Intersection of the line through `v` along `d` with `target`.
fn meet(v: &Point2, d: &Vector2, target: &Line2) -> Point2 {
    let l = Line2::new(v.clone(), d.clone()).unwrap();
    l.intersection(target).expect("boundary direction meets the stop line")
}

fn sweeps_around(caster: &RayCaster, v: usize, bbox: &BBox) -> Vec<LinearRaySweep> {
    let section = caster.section;
    let pv = &section.vertices[v];
    let dirs = event_directions(section, v, bbox);
    let box_edges = bbox.edges();
    let mut out = Vec::new();
    let k = dirs.len();
    for j in 0..k {
        let dj = &dirs[j];
        // the event ray itself
        if caster.ray_valid(pv, dj) {
            let back = dj.neg();
            let s = match caster.backward_stop(pv, &back) {
                BackStop::Immediate => LinearRaySweep::fan(pv.clone(), dj, dj),
                BackStop::Entry(t, _) => {
                    let a = pv.add(&back.scale(&t));
                    LinearRaySweep::pivot(pv.clone(), a.clone(), a)
                }
                BackStop::Box => {
                    let a = bbox.exit_point(pv, &back);
                    LinearRaySweep::pivot(pv.clone(), a.clone(), a)
                }
            };
            out.push(s);
        }
        // the open interval up to the next event
        let dn = &dirs[(j + 1) % k];
        let rep = dj.add(dn);
        if !caster.ray_valid(pv, &rep) {
            continue;
        }
        let back = rep.neg();
        let stop_line = match caster.backward_stop(pv, &back) {
            BackStop::Immediate => {
                out.push(LinearRaySweep::fan(pv.clone(), dj, dn));
                continue;
            }
            BackStop::Entry(_, Some(seg)) => {
                let (a, b) = section.segment(seg);
                Line2::through(a, b).unwrap()
            }
            BackStop::Entry(_, None) => unreachable!("open interval meets no vertex"),
            BackStop::Box => {
                let exit = bbox.exit_point(pv, &back);
                box_edges
                    .iter()
                    .find(|e| e.side(&exit) == Sign::Zero)
                    .cloned()
                    .unwrap()
            }
        };
        let a0 = meet(pv, dj, &stop_line);
        let a1 = meet(pv, dn, &stop_line);
        out.push(LinearRaySweep::pivot(pv.clone(), a0, a1));
    }
    out
}

/// All maximal linear ray sweeps pivoting at obstacle vertices. Backward
/// extensions end at the first obstacle entry or at `bbox`, which must
/// strictly contain every obstacle.
pub fn free_ray_sweeps(section: &CrossSection, bbox: &BBox) -> SweepSet {
    if section.is_empty() {
        return SweepSet {
            sweeps: Vec::new(),
            whole_plane: true,
        };
    }
    let caster = RayCaster::new(section);
    let verts = section.obstacle_vertices();
    let sweeps: Vec<LinearRaySweep> = verts
        .par_iter()
        .map(|&v| sweeps_around(&caster, v, bbox))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    SweepSet {
        sweeps,
        whole_plane: false,
    }
}

/// True iff some closed ray from `p` avoids the open obstacle region,
/// testing the ray from `p` through every obstacle vertex. Validity of each
/// ray is checked at midpoints between consecutive hits with
/// [`in_section_interior`]; slow but independent of [`RayCaster`].
pub fn point_ray_oracle(section: &CrossSection, p: &Point2) -> bool {
    if in_section_interior(section, p) {
        return false;
    }
    if section.is_empty() {
        return true;
    }
    section
        .obstacle_vertices()
        .into_iter()
        .map(|w| &section.vertices[w])
        .filter(|w| *w != p)
        .any(|w| ray_valid_by_midpoints(section, p, &w.sub(p)))
}

fn ray_valid_by_midpoints(section: &CrossSection, origin: &Point2, dir: &Vector2) -> bool {
    let line = Line2::new(origin.clone(), dir.clone()).unwrap();
    let d2 = dir.norm2();
    let param = |q: &Point2| q.sub(origin).dot(dir) / &d2;
    let mut ts: Vec<Scalar> = Vec::new();
    let segs = section
        .segments
        .iter()
        .map(|&(a, b)| (&section.vertices[a], &section.vertices[b]))
        .chain(section.inert_segments.iter().map(|(a, b)| (a, b)));
    for (a, b) in segs {
        let (sa, sb) = (line.side(a), line.side(b));
        if sa == Sign::Zero {
            ts.push(param(a));
        }
        if sb == Sign::Zero {
            ts.push(param(b));
        }
        if sa != Sign::Zero && sb != Sign::Zero && sa != sb {
            ts.push(line.intersect_param(&Line2::through(a, b).unwrap()).unwrap());
        }
    }
    ts.extend(section.touch_points.iter().filter(|q| line.side(q) == Sign::Zero).map(param));
    ts.retain(|t| t.is_positive());
    ts.sort();
    ts.dedup();
    let mut prev = Scalar::zero();
    for t in &ts {
        let mid = (&prev + t) / int(2);
        if in_section_interior(section, &origin.add(&dir.scale(&mid))) {
            return false;
        }
        prev = t.clone();
    }
    !in_section_interior(section, &origin.add(&dir.scale(&(prev + Scalar::one()))))
}

/// One sweep covering everything in `bbox`, for an obstacle-free plane.
pub fn trivial_sweep(bbox: &BBox) -> LinearRaySweep {
    let y = &bbox.min.y - int(1);
    let a_start = Point2::new(&bbox.min.x - int(1), y.clone());
    let a_end = Point2::new(&bbox.max.x + int(1), y);
    let b = Point2::new(bbox.center().x, &bbox.min.y - ratio(1, 2));
    LinearRaySweep::pivot(b, a_start, a_end)
}

/// Primitive integer coefficients `(a, b, c)` of `a x + b y = c`, sign
/// fixed so the first nonzero of `a, b` is positive.
fn canonical_line(l: &Line2) -> (BigInt, BigInt, BigInt) {
    let (a, b, c) = l.implicit();
    let lcm = [&a, &b, &c].iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let lcm = Scalar::from_integer(lcm);
    let mut v: Vec<BigInt> = [a, b, c].iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        v = v.into_iter().map(|x| x / &g).collect();
    }
    let neg = if v[0].is_zero() { v[1].is_negative() } else { v[0].is_negative() };
    if neg {
        v = v.into_iter().map(|x| -x).collect();
    }
    (v[0].clone(), v[1].clone(), v[2].clone())
}

#[derive(Clone, Debug)]
pub struct HalfEdge {
    pub origin: usize,
    pub twin: usize,
    pub next: usize,
    pub face: usize,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct Face {
    pub half_edge: usize,
    /// The unbounded face outside the box.
    pub outer: bool,
    /// Strictly interior point (bounded faces only).
    pub rep: Option<Point2>,
    pub covered: bool,
    /// Number of sweep regions containing the face, after marking.
    pub cover_count: i64,
}

/// Half-edge structure of the arrangement of sweep boundary lines clipped
/// to a box.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub bbox: BBox,
    pub lines: Vec<Line2>,
    pub vertices: Vec<Point2>,
    pub half_edges: Vec<HalfEdge>,
    pub faces: Vec<Face>,
    /// Per half-edge: `(sweep, interior of that sweep lies to the left)`
    /// for every sweep whose boundary contains the edge.
    pub annotations: Vec<Vec<(usize, bool)>>,
}

impl Arrangement {
    pub fn num_edges(&self) -> usize {
        self.half_edges.len() / 2
    }

    pub fn bounded_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&f| !self.faces[f].outer)
    }

    /// Vertices of a face in boundary order.
    pub fn face_polygon(&self, f: usize) -> Vec<Point2> {
        let start = self.faces[f].half_edge;
        let mut h = start;
        let mut out = Vec::new();
        loop {
            out.push(self.vertices[self.half_edges[h].origin].clone());
            h = self.half_edges[h].next;
            if h == start {
                break;
            }
        }
        out
    }

    /// `V - E + F`, which is 2 for a connected planar subdivision.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.num_edges() as i64 + self.faces.len() as i64
    }
}

/// Lines carrying the boundary of every sweep with positive area.
pub fn carrier_lines(sweeps: &[LinearRaySweep]) -> Vec<Line2> {
    sweeps
        .iter()
        .flat_map(|s| s.boundary_pieces())
        .filter_map(|p| Line2::new(p.origin, p.direction))
        .collect()
}

/// Arrangement of the boundary lines of `sweeps` together with the box
/// edges, built by intersecting every pair of lines and sorting each line's
/// intersections.
pub fn build_arrangement(sweeps: &[LinearRaySweep], bbox: &BBox) -> Arrangement {
    let mut lines: Vec<Line2> = Vec::new();
    let mut seen: HashMap<(BigInt, BigInt, BigInt), ()> = HashMap::new();
    for l in bbox.edges().into_iter().chain(carrier_lines(sweeps)) {
        let key = canonical_line(&l);
        if seen.insert(key, ()).is_some() {
            continue;
        }
        // keep only lines crossing the open box
        if let Some((lo, hi)) = bbox.clip(&l) {
            let mid = l.at(&((&lo + &hi) / int(2)));
            if lo < hi && (bbox.contains_strictly(&mid) || lines.len() < 4) {
                lines.push(l);
            }
        }
    }
    let n = lines.len();
    let mut on_line: Vec<Vec<(Scalar, usize)>> = vec![Vec::new(); n];
    let mut vertices: Vec<Point2> = Vec::new();
    let mut vindex: HashMap<Point2, usize> = HashMap::new();
    let mut vid = |p: Point2, vertices: &mut Vec<Point2>| -> usize {
        *vindex.entry(p.clone()).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };
    let clips: Vec<(Scalar, Scalar)> = lines.iter().map(|l| bbox.clip(l).unwrap()).collect();
    for i in 0..n {
        for (t, end) in [(&clips[i].0, 0), (&clips[i].1, 1)] {
            let _ = end;
            let id = vid(lines[i].at(t), &mut vertices);
            on_line[i].push((t.clone(), id));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let Some(ti) = lines[i].intersect_param(&lines[j]) else {
                continue;
            };
            if ti < clips[i].0 || ti > clips[i].1 {
                continue;
            }
            let p = lines[i].at(&ti);
            if !bbox.contains(&p) {
                continue;
            }
            let tj = p.sub(&lines[j].point).dot(&lines[j].direction) / lines[j].direction.norm2();
            let id = vid(p, &mut vertices);
            on_line[i].push((ti, id));
            on_line[j].push((tj, id));
        }
    }
    // undirected edges between consecutive vertices along each line
    let mut half_edges: Vec<HalfEdge> = Vec::new();
    let mut edge_seen: HashMap<(usize, usize), ()> = HashMap::new();
    for (li, pts) in on_line.iter_mut().enumerate() {
        pts.sort_by(|a, b| a.0.cmp(&b.0));
        pts.dedup_by(|a, b| a.1 == b.1);
        for w in pts.windows(2) {
            let (u, v) = (w[0].1, w[1].1);
            if u == v || edge_seen.insert((u.min(v), u.max(v)), ()).is_some() {
                continue;
            }
            let h = half_edges.len();
            half_edges.push(HalfEdge { origin: u, twin: h + 1, next: usize::MAX, face: usize::MAX, line: li });
            half_edges.push(HalfEdge { origin: v, twin: h, next: usize::MAX, face: usize::MAX, line: li });
        }
    }
    // angular order of outgoing half-edges at each vertex
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for (h, e) in half_edges.iter().enumerate() {
        outgoing[e.origin].push(h);
    }
    let dir = |h: usize, he: &Vec<HalfEdge>| {
        let e = &he[h];
        vertices[he[e.twin].origin].sub(&vertices[e.origin])
    };
    let mut pos_in_ring: Vec<usize> = vec![0; half_edges.len()];
    for ring in outgoing.iter_mut() {
        ring.sort_by(|&a, &b| angle_cmp(&dir(a, &half_edges), &dir(b, &half_edges)));
        for (k, &h) in ring.iter().enumerate() {
            pos_in_ring[h] = k;
        }
    }
    for h in 0..half_edges.len() {
        let t = half_edges[h].twin;
        let v = half_edges[t].origin;
        let ring = &outgoing[v];
        let k = pos_in_ring[t];
        half_edges[h].next = ring[(k + ring.len() - 1) % ring.len()];
    }
    // faces
    let mut faces: Vec<Face> = Vec::new();
    for h0 in 0..half_edges.len() {
        if half_edges[h0].face != usize::MAX {
            continue;
        }
        let f = faces.len();
        let mut h = h0;
        let mut area2 = Scalar::zero();
        let mut poly = Vec::new();
        loop {
            half_edges[h].face = f;
            let a = &vertices[half_edges[h].origin];
            let b = &vertices[half_edges[half_edges[h].twin].origin];
            area2 += a.cross(b);
            poly.push(a.clone());
            h = half_edges[h].next;
            if h == h0 {
                break;
            }
        }
        let outer = !area2.is_positive();
        let rep = if outer { None } else { representative_point(&poly) };
        faces.push(Face {
            half_edge: h0,
            outer,
            rep,
            covered: false,
            cover_count: 0,
        });
    }
    let annotations = vec![Vec::new(); half_edges.len()];
    Arrangement {
        bbox: bbox.clone(),
        lines,
        vertices,
        half_edges,
        faces,
        annotations,
    }
}

/// Centroid of the first non-degenerate fan triangle of a convex polygon.
fn representative_point(poly: &[Point2]) -> Option<Point2> {
    let third = ratio(1, 3);
    for i in 1..poly.len().saturating_sub(1) {
        if orient2d(&poly[0], &poly[i], &poly[i + 1]) == Sign::Positive {
            let s = poly[0].add(&poly[i]).add(&poly[i + 1]);
            return Some(s.scale(&third));
        }
    }
    None
}

/// Annotates every half-edge with the sweeps whose boundary it lies on and
/// flags covered faces by a depth-first walk that adjusts the count of
/// containing sweeps at each annotated crossing. The starting face is
/// counted directly.
pub fn mark_coverage(mut arr: Arrangement, sweeps: &[LinearRaySweep]) -> Arrangement {
    let mut by_line: HashMap<(BigInt, BigInt, BigInt), Vec<(usize, BoundaryPiece, Sign)>> = HashMap::new();
    for (si, s) in sweeps.iter().enumerate() {
        for p in s.boundary_pieces() {
            if let Some(l) = Line2::new(p.origin.clone(), p.direction.clone()) {
                let side = l.side(&p.inside_ref);
                by_line.entry(canonical_line(&l)).or_default().push((si, p, side));
            }
        }
    }
    let line_keys: Vec<_> = arr.lines.iter().map(canonical_line).collect();
    for h in 0..arr.half_edges.len() {
        let e = &arr.half_edges[h];
        let a = &arr.vertices[e.origin];
        let b = &arr.vertices[arr.half_edges[e.twin].origin];
        let Some(pieces) = by_line.get(&line_keys[e.line]) else {
            continue;
        };
        let m = a.midpoint(b);
        let hd = b.sub(a);
        let mut ann = Vec::new();
        for (si, piece, inside) in pieces {
            if let Some(side) = piece.side_on_carrier(&m, *inside) {
                let same_dir = hd.dot(&piece.direction).is_positive();
                let left = (side == Sign::Positive) == same_dir;
                ann.push((*si, left));
            }
        }
        arr.annotations[h] = ann;
    }
    let Some(start) = arr.bounded_faces().next() else {
        return arr;
    };
    let rep = arr.faces[start].rep.clone().expect("bounded face has a point");
    let count = sweeps.iter().filter(|s| s.contains(&rep)).count() as i64;
    let mut visited = vec![false; arr.faces.len()];
    visited[start] = true;
    arr.faces[start].cover_count = count;
    let mut stack = vec![start];
    while let Some(f) = stack.pop() {
        let c = arr.faces[f].cover_count;
        let h0 = arr.faces[f].half_edge;
        let mut h = h0;
        loop {
            let g = arr.half_edges[arr.half_edges[h].twin].face;
            if !visited[g] && !arr.faces[g].outer {
                let delta: i64 = arr.annotations[h]
                    .iter()
                    .map(|&(_, left)| if left { -1 } else { 1 })
                    .sum();
                arr.faces[g].cover_count = c + delta;
                visited[g] = true;
                stack.push(g);
            }
            h = arr.half_edges[h].next;
            if h == h0 {
                break;
            }
        }
    }
    for f in 0..arr.faces.len() {
        arr.faces[f].covered = arr.faces[f].cover_count > 0;
    }
    arr
}

/// Part of a convex polygon weakly left of the directed line `o -> o + d`.
fn clip_left(poly: &[Point2], o: &Point2, d: &Vector2) -> Vec<Point2> {
    let Some(edge) = Line2::new(o.clone(), d.clone()) else {
        return poly.to_vec();
    };
    let mut out = Vec::new();
    let n = poly.len();
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        let (sp, sq) = (edge.side(p), edge.side(q));
        if sp != Sign::Negative {
            out.push(p.clone());
        }
        if (sp == Sign::Positive && sq == Sign::Negative) || (sp == Sign::Negative && sq == Sign::Positive) {
            let seg = Line2::through(p, q).unwrap();
            out.push(seg.intersection(&edge).unwrap());
        }
    }
    out
}

/// Exact clip of a convex polygon against a counter-clockwise triangle.
pub fn clip_to_triangle(poly: &[Point2], tri: &[Point2; 3]) -> Vec<Point2> {
    let mut out = poly.to_vec();
    for k in 0..3 {
        if out.is_empty() {
            break;
        }
        let (a, b) = (&tri[k], &tri[(k + 1) % 3]);
        out = clip_left(&out, a, &b.sub(a));
    }
    out
}

fn has_positive_area(poly: &[Point2]) -> bool {
    poly.len() >= 3 && !polygon_area2(poly).is_zero()
}

/// Closed convex cone at `apex` spanned by `d0` and `d1` (not parallel),
/// clipped to a counter-clockwise triangle.
fn cone_meets(apex: &Point2, d0: &Vector2, d1: &Vector2, tri: &[Point2; 3]) -> bool {
    has_positive_area(&clip_cone(tri, apex, d0, d1))
}

/// Closed convex cone at `apex` spanned by `d0` and `d1` (not parallel),
/// clipped to a convex polygon.
fn clip_cone(poly: &[Point2], apex: &Point2, d0: &Vector2, d1: &Vector2) -> Vec<Point2> {
    let (d0, d1) = if d0.cross(d1).is_positive() { (d0, d1) } else { (d1, d0) };
    let p = clip_left(poly, apex, d0);
    clip_left(&p, apex, &d1.neg())
}

impl LinearRaySweep {
    /// The region meets the counter-clockwise triangle `tri` in a set of
    /// positive area.
    pub fn overlaps_triangle(&self, tri: &[Point2; 3]) -> bool {
        if !self.has_area() {
            return false;
        }
        if self.is_pivot() {
            let (a0, a1, b) = (&self.a_start, &self.a_end, &self.b_start);
            let piece = ccw_triangle(&[a0.clone(), a1.clone(), b.clone()]);
            has_positive_area(&clip_to_triangle(tri, &piece)) || cone_meets(b, &b.sub(a0), &b.sub(a1), tri)
        } else {
            let apex = &self.a_start;
            cone_meets(apex, &self.b_start.sub(apex), &self.b_end.sub(apex), tri)
        }
    }

    /// The region inside `bbox` as convex polygons (empty for zero-area
    /// sweeps).
    pub fn clipped_pieces(&self, bbox: &BBox) -> Vec<Vec<Point2>> {
        if !self.has_area() {
            return Vec::new();
        }
        let rect = bbox.corners().to_vec();
        let mut out = Vec::new();
        if self.is_pivot() {
            let (a0, a1, b) = (&self.a_start, &self.a_end, &self.b_start);
            out.push(ccw_triangle(&[a0.clone(), a1.clone(), b.clone()]).to_vec());
            out.push(clip_cone(&rect, b, &b.sub(a0), &b.sub(a1)));
        } else {
            let apex = &self.a_start;
            out.push(clip_cone(&rect, apex, &self.b_start.sub(apex), &self.b_end.sub(apex)));
        }
        out.retain(|p| has_positive_area(p));
        out
    }
}

pub(crate) fn polygon_area2(poly: &[Point2]) -> Scalar {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(&poly[(i + 1) % n])).fold(Scalar::zero(), |a, b| a + b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepPlan2D {
    /// Sweeps whose union covers the triangle.
    Coverable { sweeps: Vec<LinearRaySweep> },
    /// A point of the triangle no valid ray reaches.
    NotCoverable { witness: Point2 },
}

impl SweepPlan2D {
    pub fn is_coverable(&self) -> bool {
        matches!(self, SweepPlan2D::Coverable { .. })
    }
}

fn ccw_triangle(t: &[Point2; 3]) -> [Point2; 3] {
    if orient2d(&t[0], &t[1], &t[2]) == Sign::Negative {
        [t[0].clone(), t[2].clone(), t[1].clone()]
    } else {
        t.clone()
    }
}

/// Candidate interior points of a convex polygon with positive area.
fn interior_candidates(poly: &[Point2]) -> Vec<Point2> {
    let weights = [(1, 1, 1), (1, 2, 3), (3, 1, 2), (2, 3, 1), (1, 3, 5), (5, 1, 3), (7, 2, 4)];
    let mut out = Vec::new();
    for i in 1..poly.len().saturating_sub(1) {
        if orient2d(&poly[0], &poly[i], &poly[i + 1]) != Sign::Positive {
            continue;
        }
        for (a, b, c) in weights {
            let s = poly[0].scale(&int(a)).add(&poly[i].scale(&int(b))).add(&poly[i + 1].scale(&int(c)));
            out.push(s.scale(&ratio(1, a + b + c)));
        }
    }
    out
}

/// Box used for backward extensions: the joint extent of obstacles and the
/// triangle, doubled about its center.
pub fn sweep_bbox(section: &CrossSection, tri: &[Point2; 3]) -> BBox {
    BBox::around(section.vertices.iter().chain(tri.iter()))
        .unwrap()
        .inflated(2)
}

/// Whether the union of all valid sweeps covers the triangle `tri`, which
/// must not meet the open obstacle region.
pub fn triangle_coverable(section: &CrossSection, tri: &[Point2; 3]) -> SweepPlan2D {
    let bbox = sweep_bbox(section, tri);
    if section.is_empty() {
        return SweepPlan2D::Coverable {
            sweeps: vec![trivial_sweep(&bbox)],
        };
    }
    let set = free_ray_sweeps(section, &bbox);
    let tri = ccw_triangle(tri);
    let area: Vec<LinearRaySweep> = set.sweeps.iter().filter(|s| s.overlaps_triangle(&tri)).cloned().collect();
    let tbox = BBox::around(tri.iter()).unwrap();
    let arr = mark_coverage(build_arrangement(&area, &tbox), &area);
    let mut chosen: Vec<usize> = Vec::new();
    for f in arr.bounded_faces() {
        let clipped = clip_to_triangle(&arr.face_polygon(f), &tri);
        if clipped.len() < 3 || !polygon_area2(&clipped).is_positive() {
            continue;
        }
        if !arr.faces[f].covered {
            let candidates = interior_candidates(&clipped);
            let witness = candidates
                .iter()
                .find(|p| !set.sweeps.iter().any(|s| s.contains(p)))
                .or(candidates.first())
                .cloned()
                .expect("positive-area polygon has interior points");
            return SweepPlan2D::NotCoverable { witness };
        }
        let rep = arr.faces[f].rep.as_ref().unwrap();
        if !chosen.iter().any(|&i| area[i].contains(rep)) {
            if let Some(i) = area.iter().position(|s| s.contains(rep)) {
                chosen.push(i);
            }
        }
    }
    chosen.sort_unstable();
    SweepPlan2D::Coverable {
        sweeps: chosen.into_iter().map(|i| area[i].clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn in_closed_triangle(a: &Point2, b: &Point2, c: &Point2, p: &Point2) -> bool {
        let s = [orient2d(a, b, p), orient2d(b, c, p), orient2d(c, a, p)];
        !(s.contains(&Sign::Positive) && s.contains(&Sign::Negative))
    }

    fn p(x: i64, y: i64) -> Point2 {
        Point2::from_i64(x, y)
    }

    fn square(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<Point2> {
        vec![p(x0, y0), p(x1, y0), p(x1, y1), p(x0, y1)]
    }

    fn big_box() -> BBox {
        BBox { min: p(-20, -20), max: p(20, 20) }
    }

    #[test]
    fn empty_obstacles_give_whole_plane() {
        let s = CrossSection::from_polygons(vec![]);
        let set = free_ray_sweeps(&s, &big_box());
        assert!(set.whole_plane);
        let t = [p(0, 0), p(1, 0), p(0, 1)];
        assert!(triangle_coverable(&s, &t).is_coverable());
    }

    #[test]
    fn oracle_examples() {
        let s = CrossSection::from_polygons(vec![vec![
            Point2::new(int(1), ratio(-1, 2)),
            Point2::new(int(2), ratio(-1, 2)),
            Point2::new(int(2), ratio(1, 2)),
            Point2::new(int(1), ratio(1, 2)),
        ]]);
        assert!(point_ray_oracle(&s, &p(0, 0)));
        assert!(!point_ray_oracle(&s, &Point2::new(ratio(3, 2), int(0))));
        // ring: outer square with a square hole, point in the hole
        let ring = CrossSection::from_polygons(vec![square(-4, -4, 4, 4), square(-2, -2, 2, 2)]);
        assert!(!point_ray_oracle(&ring, &p(0, 0)));
        assert!(point_ray_oracle(&ring, &p(6, 0)));
    }

    #[test]
    fn sweep_membership_forms() {
        let s = LinearRaySweep::pivot(p(0, 1), p(-1, 0), p(1, 0));
        assert!(s.contains(&p(0, 1)));
        assert!(s.contains(&p(0, 5)));
        assert!(s.contains(&p(3, 4)));
        assert!(!s.contains(&p(4, 3)));
        assert!(!s.contains(&p(0, -1)));
        let f = LinearRaySweep::fan(p(0, 0), &p(1, 0), &p(0, 1));
        assert!(f.contains(&p(2, 3)));
        assert!(!f.contains(&p(-1, 3)));
        let r = LinearRaySweep::pivot(p(0, 1), p(0, 0), p(0, 0));
        assert!(r.contains(&p(0, 7)));
        assert!(!r.contains(&p(0, -1)));
    }

    #[test]
    fn arrangement_counts() {
        let bbox = BBox { min: p(-10, -10), max: p(10, 10) };
        let arr = build_arrangement(&[], &bbox);
        assert_eq!(arr.bounded_faces().count(), 1);
        assert_eq!(arr.euler_characteristic(), 2);
        // two crossing lines, as two fans sharing nothing but their lines
        let fans = [
            LinearRaySweep::fan(p(0, 0), &p(1, 0), &p(0, 1)),
        ];
        let arr = build_arrangement(&fans, &bbox);
        assert_eq!(arr.bounded_faces().count(), 4);
        assert_eq!(arr.euler_characteristic(), 2);
        let one = [LinearRaySweep::pivot(p(1, 3), p(-2, -1), p(3, -2))];
        let arr = build_arrangement(&one, &bbox);
        assert_eq!(arr.bounded_faces().count(), 7);
        assert_eq!(arr.euler_characteristic(), 2);
        for f in arr.bounded_faces() {
            let rep = arr.faces[f].rep.clone().unwrap();
            assert!(bbox.contains_strictly(&rep));
        }
    }

    #[test]
    fn coverage_matches_membership() {
        let bbox = BBox { min: p(-10, -10), max: p(10, 10) };
        let sweeps = vec![
            LinearRaySweep::pivot(p(1, 3), p(-2, -1), p(3, -2)),
            LinearRaySweep::fan(p(-5, 5), &p(1, 0), &p(1, -1)),
            LinearRaySweep::pivot(p(6, -6), p(2, -8), p(8, -4)),
        ];
        let arr = mark_coverage(build_arrangement(&sweeps, &bbox), &sweeps);
        for f in arr.bounded_faces() {
            let rep = arr.faces[f].rep.clone().unwrap();
            let direct = sweeps.iter().filter(|s| s.contains(&rep)).count() as i64;
            assert_eq!(arr.faces[f].cover_count, direct);
        }
    }

    #[test]
    fn ring_blocks_triangle_but_opening_does_not() {
        // closed ring around the origin
        let ring = CrossSection::from_polygons(vec![square(-4, -4, 4, 4), square(-2, -2, 2, 2)]);
        let t = [p(-1, -1), p(1, -1), p(0, 1)];
        match triangle_coverable(&ring, &t) {
            SweepPlan2D::NotCoverable { witness } => {
                assert!(!point_ray_oracle(&ring, &witness));
                assert!(in_closed_triangle(&t[0], &t[1], &t[2], &witness));
            }
            other => panic!("{other:?}"),
        }
        // U shape open towards +x
        let u = CrossSection::from_polygons(vec![vec![
            p(-4, -4),
            p(4, -4),
            p(4, -2),
            p(-2, -2),
            p(-2, 2),
            p(4, 2),
            p(4, 4),
            p(-4, 4),
        ]]);
        let plan = triangle_coverable(&u, &t);
        assert!(plan.is_coverable());
        for i in 0..=4 {
            for j in 0..=4 - i {
                let q = t[0]
                    .scale(&ratio(i, 4))
                    .add(&t[1].scale(&ratio(j, 4)))
                    .add(&t[2].scale(&ratio(4 - i - j, 4)));
                assert!(point_ray_oracle(&u, &q));
            }
        }
    }

    fn cells(mask: u16) -> CrossSection {
        let mut rings = Vec::new();
        for k in 0..9 {
            if mask & (1 << k) != 0 {
                let (i, j) = ((k % 3) as i64, (k / 3) as i64);
                rings.push(square(3 * i, 3 * j, 3 * i + 2, 3 * j + 2));
            }
        }
        CrossSection::from_polygons(rings)
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
        #[test]
        fn overlap_filter_keeps_every_meeting_sweep(
            c in proptest::collection::vec((-6i64..6, -6i64..6), 6),
            fan in proptest::bool::ANY,
            ts in proptest::collection::vec((0i64..=8, 0i64..=24), 30),
        ) {
            let p: Vec<Point2> = c.iter().map(|&(x, y)| Point2::from_i64(x, y)).collect();
            let sweep = if fan {
                LinearRaySweep::fan(p[0].clone(), &p[1], &p[2])
            } else {
                LinearRaySweep::pivot(p[0].clone(), p[1].clone(), p[2].clone())
            };
            let tri = ccw_triangle(&[p[3].clone(), p[4].clone(), p[5].clone()]);
            proptest::prop_assume!(orient2d(&tri[0], &tri[1], &tri[2]) == Sign::Positive);
            let overlaps = sweep.overlaps_triangle(&tri);
            for (t, s) in ts {
                let q = sweep.sample(&ratio(t, 8), &ratio(s, 8));
                let strictly_inside = (0..3).all(|k| orient2d(&tri[k], &tri[(k + 1) % 3], &q) == Sign::Positive);
                if strictly_inside && sweep.has_area() {
                    proptest::prop_assert!(overlaps, "{q} in sweep and inside the triangle");
                }
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn union_agrees_with_point_oracle(mask in 1u16..512, pts in proptest::collection::vec((-8i64..40, -8i64..40), 12)) {
            let s = cells(mask);
            let bbox = BBox::around(s.vertices.iter()).unwrap().inflated(2);
            let set = free_ray_sweeps(&s, &bbox);
            let caster = RayCaster::new(&s);
            for (x, y) in pts {
                let q = Point2::new(ratio(x, 4), ratio(y, 4));
                proptest::prop_assert_eq!(set.contains(&q), caster.point_visible(&q), "{}", q);
            }
        }

        #[test]
        fn fast_visibility_matches_oracle(mask in 1u16..512, pts in proptest::collection::vec((-8i64..40, -8i64..40), 16)) {
            let s = cells(mask);
            let caster = RayCaster::new(&s);
            for (x, y) in pts {
                let q = Point2::new(ratio(x, 4), ratio(y, 4));
                proptest::prop_assert_eq!(caster.point_visible(&q), point_ray_oracle(&s, &q), "{}", q);
            }
        }

        #[test]
        fn sweep_samples_have_valid_rays(mask in 1u16..512, t in 0i64..=8, u in 0i64..=8) {
            let s = cells(mask);
            let bbox = BBox::around(s.vertices.iter()).unwrap().inflated(2);
            let set = free_ray_sweeps(&s, &bbox);
            let caster = RayCaster::new(&s);
            let t = ratio(t, 8);
            for sw in &set.sweeps {
                let a = sw.a_at(&t);
                let d = sw.b_at(&t).sub(&a);
                if d.is_zero() {
                    continue;
                }
                proptest::prop_assert!(caster.ray_valid(&a, &d), "{:?}", sw);
                let q = sw.sample(&t, &ratio(u, 3));
                proptest::prop_assert!(caster.point_visible(&q));
            }
        }
    }
}
