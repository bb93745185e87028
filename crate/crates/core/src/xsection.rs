//! Slicing a polytope with a plane: strict edge crossings and the 2D
//! obstacle set `B = L ∩ Int(P)`.

use crate::geom::{orient2d, Line2, Plane, PlaneFrame, Point2, Point3, Scalar, Sign};
use crate::mesh::{EdgeSet, InteriorLocator, TriMesh};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct CrossingSet {
    pub plane: Plane,
    pub frame: PlaneFrame,
    /// `(edge id, crossing point in frame coordinates)`
    pub points: Vec<(usize, Point2)>,
    pub excluded_face: Option<usize>,
}

impl CrossingSet {
    pub fn coords(&self) -> Vec<Point2> {
        self.points.iter().map(|(_, p)| p.clone()).collect()
    }
}

/// Edges whose endpoints lie strictly on opposite sides of `plane`, with
/// their crossing points. Edges of a face lying in the plane never qualify.
pub fn crossing_points(
    mesh: &TriMesh,
    edges: &EdgeSet,
    plane: &Plane,
    exclude_face: Option<usize>,
) -> CrossingSet {
    let frame = PlaneFrame::new(plane);
    let values: Vec<Scalar> = mesh.vertices.iter().map(|v| plane.eval(v)).collect();
    let mut points = Vec::new();
    for (id, &(u, v)) in edges.edges.iter().enumerate() {
        let (su, sv) = (&values[u], &values[v]);
        if !((su.is_positive() && sv.is_negative()) || (su.is_negative() && sv.is_positive())) {
            continue;
        }
        let t = su / (su - sv);
        let a = frame.project(&mesh.vertices[u]);
        let b = frame.project(&mesh.vertices[v]);
        points.push((id, a.lerp(&b, &t)));
    }
    CrossingSet {
        plane: plane.clone(),
        frame,
        points,
        excluded_face: exclude_face,
    }
}

/// Where interior membership of a section is decided.
#[derive(Clone, Debug)]
pub enum Membership {
    /// Lift to 3D and ask the mesh.
    Mesh(Arc<InteriorLocator>),
    /// Standalone 2D region: even-odd rule over closed polygon rings,
    /// boundary excluded.
    Polygons(Vec<Vec<Point2>>),
}

#[derive(Clone, Debug)]
pub struct CrossSection {
    pub plane: Plane,
    pub frame: PlaneFrame,
    /// Deduplicated segment endpoints.
    pub vertices: Vec<Point2>,
    /// Retained obstacle segments as vertex index pairs.
    pub segments: Vec<(usize, usize)>,
    /// Per retained segment: interior lies on exactly one side, so
    /// crossing it changes membership. Slits have interior on both sides.
    pub toggles: Vec<bool>,
    /// Filtered segments: surface contact with no interior on either side.
    pub inert_segments: Vec<(Point2, Point2)>,
    /// Mesh vertices lying on the plane.
    pub touch_points: Vec<Point2>,
    pub membership: Membership,
}

impl CrossSection {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segment(&self, i: usize) -> (&Point2, &Point2) {
        let (a, b) = self.segments[i];
        (&self.vertices[a], &self.vertices[b])
    }

    /// Vertices that are endpoints of at least one retained segment.
    pub fn obstacle_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.segments.iter().flat_map(|&(a, b)| [a, b]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// A standalone 2D obstacle set given as closed polygon rings.
    pub fn from_polygons(rings: Vec<Vec<Point2>>) -> CrossSection {
        let plane = Plane::new(Point3::from_i64(0, 0, 1), Scalar::zero()).unwrap();
        let frame = PlaneFrame::new(&plane);
        let mut b = SegmentCollector::default();
        for ring in &rings {
            for i in 0..ring.len() {
                b.add(ring[i].clone(), ring[(i + 1) % ring.len()].clone());
            }
        }
        let toggles = vec![true; b.segments.len()];
        CrossSection {
            plane,
            frame,
            vertices: b.vertices,
            segments: b.segments,
            toggles,
            inert_segments: Vec::new(),
            touch_points: Vec::new(),
            membership: Membership::Polygons(rings),
        }
    }

    /// Exact membership in the open section decided in the plane: parity
    /// of toggling segments crossed by a horizontal ray, with every
    /// segment and touch point excluded. Agrees with
    /// [`in_section_interior`].
    pub fn contains(&self, p: &Point2) -> bool {
        if self.touch_points.contains(p) {
            return false;
        }
        if self
            .inert_segments
            .iter()
            .any(|(a, b)| on_closed_segment(a, b, p))
        {
            return false;
        }
        let mut inside = false;
        for (i, &(ia, ib)) in self.segments.iter().enumerate() {
            let (a, b) = (&self.vertices[ia], &self.vertices[ib]);
            if on_closed_segment(a, b, p) {
                return false;
            }
            if self.toggles[i] && crosses_rightward(a, b, p) {
                inside = !inside;
            }
        }
        inside
    }
}

pub(crate) fn on_closed_segment(a: &Point2, b: &Point2, p: &Point2) -> bool {
    orient2d(a, b, p) == Sign::Zero
        && !p.sub(a).dot(&p.sub(b)).is_positive()
}

/// Half-open crossing rule for the horizontal ray from `p` towards +x.
fn crosses_rightward(a: &Point2, b: &Point2, p: &Point2) -> bool {
    if (a.y > p.y) == (b.y > p.y) {
        return false;
    }
    let s = orient2d(a, b, p);
    if b.y > a.y {
        s == Sign::Positive
    } else {
        s == Sign::Negative
    }
}

#[derive(Default)]
struct SegmentCollector {
    vertices: Vec<Point2>,
    index: HashMap<Point2, usize>,
    segments: Vec<(usize, usize)>,
    seen: HashMap<(usize, usize), ()>,
}

impl SegmentCollector {
    fn vertex(&mut self, p: Point2) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        let i = self.vertices.len();
        self.vertices.push(p.clone());
        self.index.insert(p, i);
        i
    }

    fn add(&mut self, a: Point2, b: Point2) {
        if a == b {
            return;
        }
        let (i, j) = (self.vertex(a), self.vertex(b));
        let key = (i.min(j), i.max(j));
        if self.seen.insert(key, ()).is_none() {
            self.segments.push(key);
        }
    }
}

/// Intersection of the closed section plane with every facial triangle,
/// keeping only segments with interior on at least one side.
pub fn cross_section(mesh: &Arc<TriMesh>, plane: &Plane) -> CrossSection {
    let frame = PlaneFrame::new(plane);
    let values: Vec<Sign> = mesh.vertices.iter().map(|v| Sign::of(&plane.eval(v))).collect();
    let proj = |i: usize| frame.project(&mesh.vertices[i]);
    let cross = |i: usize, j: usize| {
        let (si, sj) = (plane.eval(&mesh.vertices[i]), plane.eval(&mesh.vertices[j]));
        let t = &si / (&si - &sj);
        proj(i).lerp(&proj(j), &t)
    };
    let mut col = SegmentCollector::default();
    for t in &mesh.triangles {
        let s = [values[t[0]], values[t[1]], values[t[2]]];
        let zeros: Vec<usize> = (0..3).filter(|&k| s[k] == Sign::Zero).collect();
        match zeros.len() {
            3 => {}
            2 => col.add(proj(t[zeros[0]]), proj(t[zeros[1]])),
            1 => {
                let k = zeros[0];
                let (i, j) = (t[(k + 1) % 3], t[(k + 2) % 3]);
                if values[i] != values[j] {
                    col.add(proj(t[k]), cross(i, j));
                }
            }
            _ => {
                if s[0] == s[1] && s[1] == s[2] {
                    continue;
                }
                let mut pts = Vec::with_capacity(2);
                for k in 0..3 {
                    let (i, j) = (t[k], t[(k + 1) % 3]);
                    if values[i] != values[j] {
                        pts.push(cross(i, j));
                    }
                }
                col.add(pts[0].clone(), pts[1].clone());
            }
        }
    }
    let mut touch_points: Vec<Point2> = (0..mesh.vertices.len())
        .filter(|&i| values[i] == Sign::Zero)
        .map(proj)
        .collect();
    touch_points.sort();
    touch_points.dedup();

    let membership = Membership::Mesh(Arc::new(InteriorLocator::new(mesh)));
    let mut raw = CrossSection {
        plane: plane.clone(),
        frame,
        vertices: col.vertices,
        segments: col.segments,
        toggles: Vec::new(),
        inert_segments: Vec::new(),
        touch_points,
        membership,
    };
    let sides: Vec<(bool, bool)> = (0..raw.segments.len())
        .map(|i| {
            let (lo, hi) = probe_points(&raw, i);
            (in_section_interior(&raw, &lo), in_section_interior(&raw, &hi))
        })
        .collect();
    let mut segs: HashMap<(usize, usize), bool> = HashMap::new();
    for (seg, &(lo, hi)) in raw.segments.iter().zip(&sides) {
        if lo || hi {
            segs.insert(*seg, lo != hi);
        } else {
            let (a, b) = (raw.vertices[seg.0].clone(), raw.vertices[seg.1].clone());
            raw.inert_segments.push((a, b));
        }
    }
    let segs = merge_collinear(&raw.vertices, segs);
    // reindex so that every stored vertex is used by a retained segment
    let mut remap = HashMap::new();
    let mut vertices = Vec::new();
    let mut segments = Vec::with_capacity(segs.len());
    let mut toggles = Vec::with_capacity(segs.len());
    for ((a, b), t) in segs {
        toggles.push(t);
        let mut id = |v: usize| {
            *remap.entry(v).or_insert_with(|| {
                vertices.push(raw.vertices[v].clone());
                vertices.len() - 1
            })
        };
        let (ia, ib) = (id(a), id(b));
        segments.push((ia, ib));
    }
    raw.vertices = vertices;
    raw.segments = segments;
    raw.toggles = toggles;
    raw
}

/// Joins pairs of collinear segments meeting at a vertex of degree two,
/// such as the splits introduced by triangulating a planar face.
fn merge_collinear(
    vertices: &[Point2],
    mut flags: HashMap<(usize, usize), bool>,
) -> Vec<((usize, usize), bool)> {
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in flags.keys() {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut order: Vec<usize> = adj.keys().copied().collect();
    order.sort_unstable();
    for v in order {
        let nb = &adj[&v];
        if nb.len() != 2 {
            continue;
        }
        let (a, b) = (nb[0], nb[1]);
        let (pa, pv, pb) = (&vertices[a], &vertices[v], &vertices[b]);
        if a == b
            || orient2d(pa, pv, pb) != Sign::Zero
            || !pa.sub(pv).dot(&pb.sub(pv)).is_negative()
            || adj[&a].contains(&b)
            || flags[&key(a, v)] != flags[&key(v, b)]
        {
            continue;
        }
        let f = flags.remove(&key(a, v)).unwrap();
        flags.remove(&key(v, b));
        flags.insert(key(a, b), f);
        adj.remove(&v);
        for (x, y) in [(a, b), (b, a)] {
            let l = adj.get_mut(&x).unwrap();
            let k = l.iter().position(|&w| w == v).unwrap();
            l[k] = y;
        }
    }
    let mut out: Vec<((usize, usize), bool)> = flags.into_iter().collect();
    out.sort_unstable();
    out
}

/// Two points on either side of segment `i`'s midpoint along its normal,
/// closer than any other feature of the section.
pub fn probe_points(section: &CrossSection, i: usize) -> (Point2, Point2) {
    let (a, b) = section.segment(i);
    let m = a.midpoint(b);
    let n = b.sub(a).perp();
    let probe = Line2::new(m.clone(), n.clone()).unwrap();
    let mut best_pos: Option<Scalar> = None;
    let mut best_neg: Option<Scalar> = None;
    let mut consider = |lam: Scalar| {
        if lam.is_positive() {
            if best_pos.as_ref().is_none_or(|b| lam < *b) {
                best_pos = Some(lam);
            }
        } else if lam.is_negative() {
            let l = -lam;
            if best_neg.as_ref().is_none_or(|b| l < *b) {
                best_neg = Some(l);
            }
        }
    };
    let n2 = n.norm2();
    for j in 0..section.segments.len() {
        if j == i {
            continue;
        }
        let (c, d) = section.segment(j);
        let sc = probe.side(c);
        let sd = probe.side(d);
        if sc == Sign::Zero && sd == Sign::Zero {
            // collinear with the probe line: both endpoints are features
            consider(c.sub(&m).dot(&n) / &n2);
            consider(d.sub(&m).dot(&n) / &n2);
            continue;
        }
        if sc == sd {
            continue;
        }
        let seg_line = Line2::through(c, d).unwrap();
        if let Some(lam) = probe.intersect_param(&seg_line) {
            consider(lam);
        }
    }
    for p in section.touch_points.iter().chain(section.vertices.iter()) {
        if orient2d(&m, &m.add(&n), p) == Sign::Zero {
            consider(p.sub(&m).dot(&n) / &n2);
        }
    }
    let half = Scalar::new(1.into(), 2.into());
    let step_pos = best_pos.map(|v| v * &half).unwrap_or_else(Scalar::one);
    let step_neg = best_neg.map(|v| v * &half).unwrap_or_else(Scalar::one);
    (m.add(&n.scale(&step_pos)), m.sub(&n.scale(&step_neg)))
}

/// Membership in the open set `Int(P) ∩ L` (or the open polygonal region
/// for standalone sections).
pub fn in_section_interior(section: &CrossSection, p: &Point2) -> bool {
    match &section.membership {
        Membership::Mesh(loc) => loc.contains(&section.frame.lift(p)),
        Membership::Polygons(rings) => in_polygons_interior(rings, p),
    }
}

fn in_polygons_interior(rings: &[Vec<Point2>], p: &Point2) -> bool {
    let mut inside = false;
    for ring in rings {
        for i in 0..ring.len() {
            let (a, b) = (&ring[i], &ring[(i + 1) % ring.len()]);
            if on_closed_segment(a, b, p) {
                return false;
            }
            if crosses_rightward(a, b, p) {
                inside = !inside;
            }
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{int, ratio};
    use crate::mesh::{edges, parse_off};

    const CUBE_OFF: &str = "OFF
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

    fn cube() -> Arc<TriMesh> {
        Arc::new(parse_off(CUBE_OFF).unwrap())
    }

    fn zplane(z: Scalar) -> Plane {
        Plane::new(Point3::from_i64(0, 0, 1), z).unwrap()
    }

    #[test]
    fn crossing_examples() {
        let c = cube();
        let e = edges(&c);
        let bottom = c.triangle_plane(0).unwrap();
        assert!(crossing_points(&c, &e, &bottom, Some(0)).points.is_empty());
        let mid = crossing_points(&c, &e, &zplane(ratio(1, 2)), None);
        // four vertical edges plus the four side diagonals
        assert_eq!(mid.points.len(), 8);
        let mut pts = mid.coords();
        pts.sort();
        pts.retain(|p| p.x.is_integer() && p.y.is_integer());
        assert_eq!(
            pts,
            vec![
                Point2::from_i64(0, 0),
                Point2::from_i64(0, 1),
                Point2::from_i64(1, 0),
                Point2::from_i64(1, 1)
            ]
        );
    }

    #[test]
    fn cube_section_is_square() {
        let c = cube();
        let s = cross_section(&c, &zplane(ratio(1, 2)));
        assert_eq!(s.segments.len(), 4);
        assert_eq!(s.vertices.len(), 4);
        let h = ratio(1, 2);
        assert!(in_section_interior(&s, &Point2::new(h.clone(), h.clone())));
        assert!(!in_section_interior(&s, &Point2::from_i64(5, 5)));
        assert!(!in_section_interior(&s, &Point2::new(h.clone(), int(0))));
    }

    #[test]
    fn face_plane_of_convex_mesh_gives_empty_section() {
        let c = cube();
        let s = cross_section(&c, &zplane(int(1)));
        assert!(s.is_empty());
    }

    #[test]
    fn pyramid_apex_contact_is_not_an_obstacle() {
        let text = "OFF
5 5 0
0 0 0
2 0 0
2 2 0
0 2 0
1 1 1
4 0 3 2 1
3 0 1 4
3 1 2 4
3 2 3 4
3 3 0 4
";
        let m = Arc::new(parse_off(text).unwrap());
        let s = cross_section(&m, &zplane(int(1)));
        assert!(s.is_empty());
        assert_eq!(s.touch_points, vec![Point2::from_i64(1, 1)]);
    }

    #[test]
    fn tangential_edge_is_filtered() {
        // wedge resting on its ridge edge along z = 0: material only above
        let text = "OFF
6 5 0
0 0 0
0 4 0
-1 0 1
-1 4 1
1 0 1
1 4 1
3 0 4 2
3 1 3 5
4 0 1 5 4
4 0 2 3 1
4 2 4 5 3
";
        let mut m = parse_off(text).unwrap();
        crate::mesh::orient_outward(&mut m);
        assert!(crate::mesh::validate(&m, true).is_valid());
        let m = Arc::new(m);
        let s = cross_section(&m, &zplane(int(0)));
        assert!(s.is_empty());
        let s = cross_section(&m, &zplane(ratio(1, 2)));
        assert_eq!(s.segments.len(), 4);
    }

    #[test]
    fn polygon_membership() {
        let sq = vec![
            Point2::from_i64(0, 0),
            Point2::from_i64(2, 0),
            Point2::from_i64(2, 2),
            Point2::from_i64(0, 2),
        ];
        let s = CrossSection::from_polygons(vec![sq]);
        assert!(in_section_interior(&s, &Point2::from_i64(1, 1)));
        assert!(!in_section_interior(&s, &Point2::from_i64(2, 1)));
        assert!(!in_section_interior(&s, &Point2::from_i64(0, 0)));
        assert!(!in_section_interior(&s, &Point2::from_i64(3, 1)));
    }

    fn check_routes_agree(m: &Arc<TriMesh>, plane: &Plane, samples: &[(i64, i64)], den: i64) {
        let s = cross_section(m, plane);
        for &(x, y) in samples {
            let p = Point2::new(ratio(x, den), ratio(y, den));
            assert_eq!(s.contains(&p), in_section_interior(&s, &p), "{p}");
        }
        for v in &s.vertices {
            assert!(!s.contains(v));
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn planar_membership_matches_solid(
            pts in proptest::collection::vec((-12i64..24, -12i64..24), 20),
            nx in -3i64..4, ny in -3i64..4, off in 0i64..6,
        ) {
            proptest::prop_assume!(nx != 0 || ny != 0);
            let c = cube();
            let plane = Plane::new(Point3::from_i64(nx, ny, 3), ratio(off, 2)).unwrap();
            check_routes_agree(&c, &plane, &pts, 8);
        }
    }

    #[test]
    fn planar_membership_on_integer_grid() {
        let c = cube();
        let pts: Vec<(i64, i64)> = (-2..=6).flat_map(|x| (-2..=6).map(move |y| (x, y))).collect();
        check_routes_agree(&c, &zplane(ratio(1, 2)), &pts, 4);
        check_routes_agree(&c, &zplane(int(1)), &pts, 4);
    }
}
