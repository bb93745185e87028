//! Deterministic half-plane carveability: one linear scan per facial
//! triangle, quadratic overall.

use crate::geom::{angle_cmp, orient2d, weakly_separates, Line2, Plane, PlaneFrame, Point2, Point3, Sign, Vector3};
use crate::mesh::{edges, EdgeSet, TriMesh};
use crate::xsection::crossing_points;
use rayon::prelude::*;

/// Tangents from a point to the hull of a point set, as indices into the
/// set. All points lie weakly left of the directed line `v -> xs[cw]` and
/// weakly right of `v -> xs[ccw]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tangents {
    Lines { cw: usize, ccw: usize },
    /// `v` lies in the interior of the hull.
    InsideHull,
    /// Every point coincides with `v`.
    Empty,
}

fn is_cw_tangent(v: &Point2, xs: &[Point2], i: usize) -> bool {
    xs.iter().all(|x| orient2d(v, &xs[i], x) != Sign::Negative)
}

fn is_ccw_tangent(v: &Point2, xs: &[Point2], i: usize) -> bool {
    xs.iter().all(|x| orient2d(v, &xs[i], x) != Sign::Positive)
}

/// One gift-wrapping pass for the clockwise-most and counter-clockwise-most
/// points seen from `v`, then a verification pass. If verification fails,
/// the exact angular-gap computation decides between boundary tangents and
/// an interior `v`.
pub fn extreme_tangents(v: &Point2, xs: &[Point2]) -> Tangents {
    let live: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] != *v).collect();
    let Some(&first) = live.first() else {
        return Tangents::Empty;
    };
    let (mut cw, mut ccw) = (first, first);
    for &i in &live[1..] {
        if orient2d(v, &xs[cw], &xs[i]) == Sign::Negative {
            cw = i;
        }
        if orient2d(v, &xs[ccw], &xs[i]) == Sign::Positive {
            ccw = i;
        }
    }
    if is_cw_tangent(v, xs, cw) && is_ccw_tangent(v, xs, ccw) {
        return Tangents::Lines { cw, ccw };
    }
    angular_gap_tangents(v, xs, &live)
}

fn sorted_directions(v: &Point2, xs: &[Point2], live: &[usize]) -> Vec<usize> {
    let mut order = live.to_vec();
    order.sort_by(|&a, &b| angle_cmp(&xs[a].sub(v), &xs[b].sub(v)));
    order.dedup_by(|a, b| angle_cmp(&xs[*a].sub(v), &xs[*b].sub(v)).is_eq());
    order
}

fn angular_gap_tangents(v: &Point2, xs: &[Point2], live: &[usize]) -> Tangents {
    let order = sorted_directions(v, xs, live);
    let k = order.len();
    if k == 1 {
        return Tangents::Lines { cw: order[0], ccw: order[0] };
    }
    let mut straight = None;
    for i in 0..k {
        let a = &xs[order[i]].sub(v);
        let b = &xs[order[(i + 1) % k]].sub(v);
        match Sign::of(&a.cross(b)) {
            // empty ccw wedge from a to b wider than a half turn
            Sign::Negative => {
                return Tangents::Lines {
                    cw: order[(i + 1) % k],
                    ccw: order[i],
                }
            }
            Sign::Zero if straight.is_none() => straight = Some(i),
            _ => {}
        }
    }
    match straight {
        Some(i) => Tangents::Lines {
            cw: order[(i + 1) % k],
            ccw: order[i],
        },
        None => Tangents::InsideHull,
    }
}

fn in_closed_triangle(a: &Point2, b: &Point2, c: &Point2, p: &Point2) -> bool {
    let s = [orient2d(a, b, p), orient2d(b, c, p), orient2d(c, a, p)];
    !(s.contains(&Sign::Positive) && s.contains(&Sign::Negative))
}

/// Three points of `xs` whose closed triangle contains `v`, for a `v`
/// inside the hull.
pub fn witness_triple(v: &Point2, xs: &[Point2]) -> Option<[usize; 3]> {
    let live: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] != *v).collect();
    let order = sorted_directions(v, xs, &live);
    if let Some(&a) = order.first() {
        // the wedge between consecutive directions that holds -(x_a - v)
        let back = xs[a].sub(v).neg();
        let k = order.len();
        for i in 0..k {
            let (j, l) = (order[i], order[(i + 1) % k]);
            let (dj, dl) = (xs[j].sub(v), xs[l].sub(v));
            if Sign::of(&dj.cross(&dl)) != Sign::Positive {
                continue;
            }
            if Sign::of(&dj.cross(&back)) != Sign::Negative
                && Sign::of(&back.cross(&dl)) != Sign::Negative
                && in_closed_triangle(&xs[a], &xs[j], &xs[l], v)
            {
                return Some([a, j, l]);
            }
        }
    }
    // exhaustive scan
    let n = xs.len();
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                if orient2d(&xs[i], &xs[j], &xs[l]) != Sign::Zero
                    && in_closed_triangle(&xs[i], &xs[j], &xs[l], v)
                {
                    return Some([i, j, l]);
                }
            }
        }
    }
    None
}

/// Half-plane cut on the plane of one facial triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlaneCut {
    pub face: usize,
    pub plane: Plane,
    /// Boundary in the frame of `plane` (see [`PlaneFrame`]).
    pub boundary: Line2,
    /// Side of `boundary` holding the cut.
    pub side: Sign,
    pub line_point: Point3,
    pub line_direction: Vector3,
}

impl HalfPlaneCut {
    pub fn new(face: usize, plane: &Plane, boundary: Line2, side: Sign) -> HalfPlaneCut {
        let frame = PlaneFrame::new(plane);
        let line_point = frame.lift(&boundary.point);
        let line_direction = frame.lift(&boundary.point.add(&boundary.direction)).sub(&line_point);
        HalfPlaneCut {
            face,
            plane: plane.clone(),
            boundary,
            side,
            line_point,
            line_direction,
        }
    }

    pub fn frame(&self) -> PlaneFrame {
        PlaneFrame::new(&self.plane)
    }

    /// Closed membership for a point given in frame coordinates.
    pub fn contains(&self, p: &Point2) -> bool {
        let s = self.boundary.side(p);
        s == Sign::Zero || s == self.side
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureWitness {
    /// Face vertex `vertex` lies in the closed triangle of the crossing
    /// points of `edges` (points in the face frame).
    VertexInsideHull {
        face: usize,
        vertex: usize,
        vertex_point: Point2,
        edges: [usize; 3],
        points: [Point2; 3],
    },
    NoSeparatingTangent { face: usize, candidates_tested: usize },
}

impl FailureWitness {
    pub fn face(&self) -> usize {
        match self {
            FailureWitness::VertexInsideHull { face, .. } => *face,
            FailureWitness::NoSeparatingTangent { face, .. } => *face,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CarvePlan {
    pub cuts: Vec<HalfPlaneCut>,
}

pub type FaceDecision = Result<HalfPlaneCut, FailureWitness>;

/// Precomputed per-mesh data shared by all face queries.
#[derive(Clone, Debug)]
pub struct HalfplaneContext<'a> {
    pub mesh: &'a TriMesh,
    pub edges: EdgeSet,
}

impl<'a> HalfplaneContext<'a> {
    pub fn new(mesh: &'a TriMesh) -> Self {
        HalfplaneContext {
            mesh,
            edges: edges(mesh),
        }
    }
}

/// Orients `line` so the face lies on a definite side and builds the cut.
pub(crate) fn cut_from_line(face: usize, plane: &Plane, line: Line2, tri: &[Point2; 3]) -> HalfPlaneCut {
    let side = tri
        .iter()
        .map(|p| line.side(p))
        .find(|s| *s != Sign::Zero)
        .unwrap_or(Sign::Positive);
    HalfPlaneCut::new(face, plane, line, side)
}

pub(crate) fn longest_edge_cut(face: usize, plane: &Plane, tri: &[Point2; 3], tri3: [&Point3; 3]) -> HalfPlaneCut {
    let mut best = 0;
    for k in 1..3 {
        if tri3[(k + 1) % 3].sub(tri3[k]).norm2() > tri3[(best + 1) % 3].sub(tri3[best]).norm2() {
            best = k;
        }
    }
    let line = Line2::through(&tri[best], &tri[(best + 1) % 3]).unwrap();
    cut_from_line(face, plane, line, tri)
}

pub fn find_halfplane_for_face(ctx: &HalfplaneContext<'_>, face: usize) -> FaceDecision {
    let mesh = ctx.mesh;
    let plane = mesh.triangle_plane(face).expect("validated mesh");
    let cs = crossing_points(mesh, &ctx.edges, &plane, Some(face));
    let tri3 = mesh.triangle_points(face);
    let tri: [Point2; 3] = [
        cs.frame.project(tri3[0]),
        cs.frame.project(tri3[1]),
        cs.frame.project(tri3[2]),
    ];
    if cs.points.is_empty() {
        return Ok(longest_edge_cut(face, &plane, &tri, tri3));
    }
    let xs = cs.coords();
    let tangents: Vec<Tangents> = tri.iter().map(|v| extreme_tangents(v, &xs)).collect();
    for (k, t) in tangents.iter().enumerate() {
        if *t == Tangents::InsideHull {
            let v = &tri[k];
            let [a, b, c] = witness_triple(v, &xs).expect("interior point has a containing triple");
            return Err(FailureWitness::VertexInsideHull {
                face,
                vertex: mesh.triangles[face][k],
                vertex_point: v.clone(),
                edges: [cs.points[a].0, cs.points[b].0, cs.points[c].0],
                points: [xs[a].clone(), xs[b].clone(), xs[c].clone()],
            });
        }
    }
    let mut tested = 0;
    for (k, t) in tangents.iter().enumerate() {
        let v = &tri[k];
        let candidates: Vec<Line2> = match *t {
            Tangents::Lines { cw, ccw } => [cw, ccw]
                .iter()
                .filter_map(|&i| Line2::through(v, &xs[i]))
                .collect(),
            _ => [1, 2]
                .iter()
                .filter_map(|&d| Line2::through(v, &tri[(k + d) % 3]))
                .collect(),
        };
        for line in candidates {
            tested += 1;
            if weakly_separates(&line, &xs, &tri) {
                return Ok(cut_from_line(face, &plane, line, &tri));
            }
        }
    }
    Err(FailureWitness::NoSeparatingTangent {
        face,
        candidates_tested: tested,
    })
}

/// Decides every face, in parallel, in face order.
pub fn decide_all_faces(mesh: &TriMesh) -> Vec<FaceDecision> {
    let ctx = HalfplaneContext::new(mesh);
    (0..mesh.triangles.len())
        .into_par_iter()
        .map(|f| find_halfplane_for_face(&ctx, f))
        .collect()
}

/// A plan with one cut per facial triangle, or the first failing face.
pub fn decide_halfplane(mesh: &TriMesh) -> Result<CarvePlan, (usize, FailureWitness)> {
    collect_plan(decide_all_faces(mesh))
}

pub(crate) fn collect_plan(results: Vec<FaceDecision>) -> Result<CarvePlan, (usize, FailureWitness)> {
    let mut cuts = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(c) => cuts.push(c),
            Err(w) => return Err((w.face(), w)),
        }
    }
    Ok(CarvePlan { cuts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use crate::mesh::parse_off;
    use proptest::prelude::*;

    fn p(x: i64, y: i64) -> Point2 {
        Point2::from_i64(x, y)
    }

    /// Independent check: every point of `xs` lies weakly on one side of the
    /// line through `v` and `x`.
    fn one_sided(v: &Point2, x: &Point2, xs: &[Point2]) -> bool {
        let s: Vec<Sign> = xs.iter().map(|q| orient2d(v, x, q)).collect();
        !(s.contains(&Sign::Positive) && s.contains(&Sign::Negative))
    }

    #[test]
    fn tangents_examples() {
        let v = p(0, 0);
        let xs = vec![p(1, 0), p(2, 1), p(2, -1)];
        match extreme_tangents(&v, &xs) {
            Tangents::Lines { cw, ccw } => {
                assert_eq!(xs[cw], p(2, -1));
                assert_eq!(xs[ccw], p(2, 1));
            }
            t => panic!("{t:?}"),
        }
        // only these two of all candidate lines are one-sided
        let good: Vec<_> = xs.iter().filter(|x| one_sided(&v, x, &xs)).collect();
        assert_eq!(good, vec![&p(2, 1), &p(2, -1)]);

        assert_eq!(
            extreme_tangents(&v, &[p(1, 1)]),
            Tangents::Lines { cw: 0, ccw: 0 }
        );
        let xs = vec![p(1, 0), p(-1, 1), p(-1, -1)];
        assert_eq!(extreme_tangents(&v, &xs), Tangents::InsideHull);
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            assert_eq!(orient2d(&xs[a], &xs[b], &v), Sign::Positive);
        }
    }

    #[test]
    fn tangents_on_hull_boundary() {
        let v = p(0, 0);
        let xs = vec![p(-1, 0), p(0, 1), p(1, 0)];
        match extreme_tangents(&v, &xs) {
            Tangents::Lines { cw, ccw } => {
                assert!(is_cw_tangent(&v, &xs, cw));
                assert!(is_ccw_tangent(&v, &xs, ccw));
            }
            t => panic!("{t:?}"),
        }
    }

    fn pts() -> impl Strategy<Value = Vec<Point2>> {
        prop::collection::vec((-6i64..6, -6i64..6).prop_map(|(x, y)| p(x, y)), 1..12)
    }

    proptest! {
        #[test]
        fn tangents_match_exhaustive(xs in pts(), vx in -6i64..6, vy in -6i64..6) {
            let v = p(vx, vy);
            let live: Vec<&Point2> = xs.iter().filter(|x| **x != v).collect();
            let any_one_sided = live.iter().any(|x| one_sided(&v, x, &xs));
            match extreme_tangents(&v, &xs) {
                Tangents::Empty => prop_assert!(live.is_empty()),
                Tangents::InsideHull => {
                    prop_assert!(!any_one_sided);
                    let t = witness_triple(&v, &xs).unwrap();
                    prop_assert!(in_closed_triangle(&xs[t[0]], &xs[t[1]], &xs[t[2]], &v));
                }
                Tangents::Lines { cw, ccw } => {
                    prop_assert!(is_cw_tangent(&v, &xs, cw));
                    prop_assert!(is_ccw_tangent(&v, &xs, ccw));
                }
            }
        }
    }

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

    #[test]
    fn convex_cube_is_carveable() {
        let m = parse_off(CUBE_OFF).unwrap();
        let plan = decide_halfplane(&m).unwrap();
        assert_eq!(plan.cuts.len(), 12);
        for c in &plan.cuts {
            let f = c.frame();
            for q in m.triangle_points(c.face) {
                assert!(c.contains(&f.project(q)));
            }
        }
    }

    #[test]
    fn tetrahedron_plan_has_four_cuts() {
        let m = parse_off("OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 1 2 3\n3 0 3 2\n").unwrap();
        assert_eq!(decide_halfplane(&m).unwrap().cuts.len(), 4);
    }
}
