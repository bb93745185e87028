//! Randomized half-plane carveability by bottom-up sampling. Edges are
//! thinned into a chain of nested random subsets; tangent half-planes for
//! every (face, vertex) query are computed on the empty top level and
//! repaired level by level using only the edges added at that level.

use crate::geom::{orient2d, Line2, Plane, PlaneFrame, Point2, Point3, Sign};
use crate::halfplane_det::{
    cut_from_line, extreme_tangents, longest_edge_cut, witness_triple, CarvePlan, FailureWitness,
    HalfPlaneCut, Tangents,
};
use crate::mesh::{edges, EdgeSet, TriMesh};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Nested edge samples `levels[0] = E ⊇ levels[1] ⊇ ... ⊇ levels[k] = ∅`,
/// as sorted indices into an [`EdgeSet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleChain {
    pub levels: Vec<Vec<usize>>,
    pub r: u32,
    pub seed: u64,
}

impl SampleChain {
    /// Index of the empty top level.
    pub fn k(&self) -> usize {
        self.levels.len() - 1
    }

    /// Edges in level `i` but not in level `i + 1`.
    pub fn added_at(&self, i: usize) -> Vec<usize> {
        let upper = &self.levels[i + 1];
        self.levels[i]
            .iter()
            .copied()
            .filter(|e| upper.binary_search(e).is_err())
            .collect()
    }
}

/// Keeps each edge of a level with probability `1/r` to form the next,
/// until nothing is left.
///
/// # Panics
/// If `r < 2`.
pub fn build_chain(edges: &EdgeSet, r: u32, seed: u64) -> SampleChain {
    assert!(r >= 2, "sampling parameter must be at least 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels = vec![(0..edges.len()).collect::<Vec<_>>()];
    while !levels.last().unwrap().is_empty() {
        let next: Vec<usize> = levels
            .last()
            .unwrap()
            .iter()
            .copied()
            .filter(|_| rng.gen_range(0..r) == 0)
            .collect();
        levels.push(next);
    }
    SampleChain { levels, r, seed }
}

/// A closed half-plane on a carrier plane, in the plane's frame. `None`
/// boundary means the whole plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetectorHalfPlane {
    pub plane: Plane,
    pub boundary: Option<Line2>,
    pub side: Sign,
}

impl DetectorHalfPlane {
    pub fn contains(&self, p: &Point2) -> bool {
        match &self.boundary {
            None => true,
            Some(l) => {
                let s = l.side(p);
                s == Sign::Zero || s == self.side
            }
        }
    }
}

/// Reports every `(half-plane, segment)` pair where the segment strictly
/// crosses the half-plane's carrier at a point of the closed half-plane.
pub trait IntersectionDetector: Sync {
    fn detect(&self, halfplanes: &[DetectorHalfPlane], segments: &[(Point3, Point3)]) -> Vec<(usize, usize)>;
}

/// Exhaustive pairwise test.
#[derive(Clone, Copy, Debug, Default)]
pub struct NaiveDetector;

impl IntersectionDetector for NaiveDetector {
    fn detect(&self, halfplanes: &[DetectorHalfPlane], segments: &[(Point3, Point3)]) -> Vec<(usize, usize)> {
        naive_detector(halfplanes, segments)
    }
}

pub fn naive_detector(halfplanes: &[DetectorHalfPlane], segments: &[(Point3, Point3)]) -> Vec<(usize, usize)> {
    let mut by_plane: HashMap<&Plane, Vec<usize>> = HashMap::new();
    for (i, h) in halfplanes.iter().enumerate() {
        by_plane.entry(&h.plane).or_default().push(i);
    }
    let mut out = Vec::new();
    for (plane, hs) in by_plane {
        let frame = PlaneFrame::new(plane);
        for (j, (p, q)) in segments.iter().enumerate() {
            let (fp, fq) = (plane.eval(p), plane.eval(q));
            if !((fp.is_positive() && fq.is_negative()) || (fp.is_negative() && fq.is_positive())) {
                continue;
            }
            let x = frame.project(&p.lerp(q, &(&fp / (&fp - &fq))));
            out.extend(hs.iter().filter(|&&h| halfplanes[h].contains(&x)).map(|&h| (h, j)));
        }
    }
    out.sort_unstable();
    out
}

/// A crossing point of a face's plane with the edge that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub edge: usize,
    pub point: Point2,
}

/// Tangent state of one (face, vertex) query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryState {
    /// No crossing point yet: both half-planes are the whole plane.
    Whole,
    /// Every crossing point lies weakly left of `v -> cw` and weakly right
    /// of `v -> ccw`; the regions strictly beyond are the stored
    /// half-planes.
    Tangents { cw: Anchor, ccw: Anchor },
    /// Every crossing point lies on the line through `v`, `a` and `b`, with
    /// `a` and `b` on opposite sides of `v`. Either side may still be cut.
    Line { a: Anchor, b: Anchor },
}

/// Per-mesh data: edges and face frames.
pub struct RandContext<'a> {
    pub mesh: &'a TriMesh,
    pub edges: EdgeSet,
    planes: Vec<Plane>,
    frames: Vec<PlaneFrame>,
    tris: Vec<[Point2; 3]>,
}

impl<'a> RandContext<'a> {
    pub fn new(mesh: &'a TriMesh) -> Self {
        let planes: Vec<Plane> = (0..mesh.num_triangles())
            .map(|f| mesh.triangle_plane(f).expect("validated mesh"))
            .collect();
        let frames: Vec<PlaneFrame> = planes.iter().map(PlaneFrame::new).collect();
        let tris = (0..mesh.num_triangles())
            .map(|f| {
                let t = mesh.triangle_points(f);
                [0, 1, 2].map(|k| frames[f].project(t[k]))
            })
            .collect();
        RandContext {
            mesh,
            edges: edges(mesh),
            planes,
            frames,
            tris,
        }
    }

    pub fn num_queries(&self) -> usize {
        3 * self.mesh.num_triangles()
    }

    fn segment(&self, e: usize) -> (Point3, Point3) {
        let (a, b) = self.edges.edges[e];
        (self.mesh.vertices[a].clone(), self.mesh.vertices[b].clone())
    }

    /// Strict crossing of edge `e` with face `f`'s plane, in its frame.
    fn crossing(&self, f: usize, e: usize) -> Option<Point2> {
        let (p, q) = self.segment(e);
        let plane = &self.planes[f];
        let (fp, fq) = (plane.eval(&p), plane.eval(&q));
        if !((fp.is_positive() && fq.is_negative()) || (fp.is_negative() && fq.is_positive())) {
            return None;
        }
        Some(self.frames[f].project(&p.lerp(&q, &(&fp / (&fp - &fq)))))
    }

    /// Crossings of face `f`'s plane by the given edges.
    pub fn crossings(&self, f: usize, level: &[usize]) -> Vec<Anchor> {
        level
            .iter()
            .filter_map(|&e| self.crossing(f, e).map(|point| Anchor { edge: e, point }))
            .collect()
    }

    fn vertex(&self, q: usize) -> &Point2 {
        &self.tris[q / 3][q % 3]
    }
}

/// Tangent state over `pts`, or a witness if the query vertex lies in
/// their hull.
fn tangents_over(ctx: &RandContext<'_>, q: usize, pts: &[Anchor]) -> Result<QueryState, FailureWitness> {
    let v = ctx.vertex(q);
    let xs: Vec<Point2> = pts.iter().map(|a| a.point.clone()).collect();
    match extreme_tangents(v, &xs) {
        Tangents::Lines { cw, ccw } => {
            let a = &xs[cw];
            if xs.iter().all(|x| orient2d(v, a, x) == Sign::Zero) {
                if let Some(b) = xs.iter().position(|x| behind(v, a, x)) {
                    return Ok(QueryState::Line {
                        a: pts[cw].clone(),
                        b: pts[b].clone(),
                    });
                }
            }
            Ok(QueryState::Tangents {
                cw: pts[cw].clone(),
                ccw: pts[ccw].clone(),
            })
        }
        Tangents::Empty => Ok(QueryState::Whole),
        Tangents::InsideHull => {
            let [a, b, c] = witness_triple(v, &xs).expect("interior point has a containing triple");
            Err(inside_witness(ctx, q, [&pts[a], &pts[b], &pts[c]]))
        }
    }
}

/// `a` and `b` point the same way from `v`: a wedge of angle zero.
fn same_direction(v: &Point2, a: &Point2, b: &Point2) -> bool {
    orient2d(v, a, b) == Sign::Zero && a.sub(v).dot(&b.sub(v)).is_positive()
}

/// `p` lies on the line through `v` and `a`, strictly on the far side of `v`.
fn behind(v: &Point2, a: &Point2, p: &Point2) -> bool {
    orient2d(v, a, p) == Sign::Zero && a.sub(v).dot(&p.sub(v)).is_negative()
}

fn inside_witness(ctx: &RandContext<'_>, q: usize, t: [&Anchor; 3]) -> FailureWitness {
    let face = q / 3;
    FailureWitness::VertexInsideHull {
        face,
        vertex: ctx.mesh.triangles[face][q % 3],
        vertex_point: ctx.vertex(q).clone(),
        edges: t.map(|a| a.edge),
        points: t.map(|a| a.point.clone()),
    }
}

/// Detector half-planes of a state: the regions a new point must hit to
/// change it.
fn detector_halfplanes(ctx: &RandContext<'_>, q: usize, s: &QueryState) -> Vec<DetectorHalfPlane> {
    let plane = ctx.planes[q / 3].clone();
    let v = ctx.vertex(q);
    match s {
        QueryState::Whole => vec![DetectorHalfPlane {
            plane,
            boundary: None,
            side: Sign::Zero,
        }],
        QueryState::Tangents { cw, ccw } => vec![
            DetectorHalfPlane {
                plane: plane.clone(),
                boundary: Line2::through(v, &cw.point),
                side: Sign::Negative,
            },
            DetectorHalfPlane {
                plane,
                boundary: Line2::through(v, &ccw.point),
                side: Sign::Positive,
            },
        ],
        QueryState::Line { a, .. } => [Sign::Negative, Sign::Positive]
            .into_iter()
            .map(|side| DetectorHalfPlane {
                plane: plane.clone(),
                boundary: Line2::through(v, &a.point),
                side,
            })
            .collect(),
    }
}

/// Work done at one level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelStats {
    pub level: usize,
    pub added_edges: usize,
    pub incidences: usize,
    pub rebuilt: usize,
    pub repaired: usize,
}

/// Updates every query from level `i + 1` to level `i`.
pub fn refine_level(
    ctx: &RandContext<'_>,
    chain: &SampleChain,
    i: usize,
    states: &mut [QueryState],
    detector: &dyn IntersectionDetector,
) -> Result<LevelStats, (usize, FailureWitness)> {
    let added = chain.added_at(i);
    let mut stats = LevelStats {
        level: i,
        added_edges: added.len(),
        ..Default::default()
    };
    if added.is_empty() {
        return Ok(stats);
    }
    let mut hps = Vec::new();
    let mut owner = Vec::new();
    for (q, s) in states.iter().enumerate() {
        for h in detector_halfplanes(ctx, q, s) {
            hps.push(h);
            owner.push(q);
        }
    }
    let segs: Vec<(Point3, Point3)> = added.iter().map(|&e| ctx.segment(e)).collect();
    let hits = detector.detect(&hps, &segs);
    stats.incidences = hits.len();
    let mut per_query: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
    for (h, j) in hits {
        per_query[owner[h]].push(added[j]);
    }
    for (q, mut new_edges) in per_query.into_iter().enumerate() {
        if new_edges.is_empty() {
            continue;
        }
        new_edges.sort_unstable();
        new_edges.dedup();
        let f = q / 3;
        let v = ctx.vertex(q).clone();
        match states[q].clone() {
            QueryState::Whole => {
                // bootstrapping: recompute over everything at this level
                stats.rebuilt += 1;
                let pts = ctx.crossings(f, &chain.levels[i]);
                states[q] = tangents_over(ctx, q, &pts).map_err(|w| (f, w))?;
            }
            QueryState::Line { a, b } => {
                let off_line: Vec<Anchor> = ctx
                    .crossings(f, &new_edges)
                    .into_iter()
                    .filter(|x| orient2d(&v, &a.point, &x.point) != Sign::Zero)
                    .collect();
                if off_line.is_empty() {
                    continue;
                }
                stats.repaired += 1;
                let mut pts = off_line;
                pts.push(a);
                pts.push(b);
                states[q] = tangents_over(ctx, q, &pts).map_err(|w| (f, w))?;
            }
            QueryState::Tangents { cw, ccw } => {
                let beyond_cw = |p: &Point2| orient2d(&v, &cw.point, p) == Sign::Negative;
                let beyond_ccw = |p: &Point2| orient2d(&v, &ccw.point, p) == Sign::Positive;
                // a zero-angle wedge also changes when a point appears behind v
                let ray = same_direction(&v, &cw.point, &ccw.point);
                let violators: Vec<Anchor> = ctx
                    .crossings(f, &new_edges)
                    .into_iter()
                    .filter(|a| beyond_cw(&a.point) || beyond_ccw(&a.point) || (ray && behind(&v, &cw.point, &a.point)))
                    .collect();
                if violators.is_empty() {
                    continue;
                }
                if let Some(x) = violators.iter().find(|a| beyond_cw(&a.point) && beyond_ccw(&a.point)) {
                    return Err((f, inside_witness(ctx, q, [x, &cw, &ccw])));
                }
                stats.repaired += 1;
                let mut pts = violators;
                pts.push(cw);
                pts.push(ccw);
                states[q] = tangents_over(ctx, q, &pts).map_err(|w| (f, w))?;
            }
        }
    }
    Ok(stats)
}

/// Checks that every crossing point of the given level lies weakly outside
/// both stored half-planes of every query; returns the offending query.
pub fn check_level_invariant(
    ctx: &RandContext<'_>,
    level: &[usize],
    states: &[QueryState],
) -> Result<(), usize> {
    for (q, s) in states.iter().enumerate() {
        let pts = ctx.crossings(q / 3, level);
        let v = ctx.vertex(q);
        let ok = match s {
            QueryState::Whole => pts.iter().all(|a| a.point == *v),
            QueryState::Tangents { cw, ccw } => pts.iter().all(|a| {
                orient2d(v, &cw.point, &a.point) != Sign::Negative && orient2d(v, &ccw.point, &a.point) != Sign::Positive
            }),
            QueryState::Line { a: l, .. } => pts.iter().all(|a| orient2d(v, &l.point, &a.point) == Sign::Zero),
        };
        if !ok {
            return Err(q);
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandOptions {
    pub r: u32,
    pub seed: u64,
    /// Check the level invariant after every level (quadratic extra work).
    pub verify_levels: bool,
}

impl Default for RandOptions {
    fn default() -> Self {
        RandOptions {
            r: 2,
            seed: DEFAULT_SEED,
            verify_levels: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandRun {
    pub result: Result<CarvePlan, (usize, FailureWitness)>,
    pub levels: Vec<LevelStats>,
    /// `(level, query)` pairs where the invariant check failed.
    pub invariant_failures: Vec<(usize, usize)>,
}

/// Final O(1) test per face: a stored tangent through a face vertex
/// separates when the other two face vertices lie weakly on its empty side.
fn face_cut(ctx: &RandContext<'_>, f: usize, states: &[QueryState]) -> Result<HalfPlaneCut, FailureWitness> {
    let tri = &ctx.tris[f];
    let plane = &ctx.planes[f];
    let qs = &states[3 * f..3 * f + 3];
    if qs.iter().all(|s| *s == QueryState::Whole) {
        return Ok(longest_edge_cut(f, plane, tri, ctx.mesh.triangle_points(f)));
    }
    let mut tested = 0;
    for (k, s) in qs.iter().enumerate() {
        let v = &tri[k];
        let others = [&tri[(k + 1) % 3], &tri[(k + 2) % 3]];
        let candidates: Vec<(Line2, Sign)> = match s {
            QueryState::Tangents { cw, ccw } => [(&cw.point, Sign::Negative), (&ccw.point, Sign::Positive)]
                .into_iter()
                .filter_map(|(p, empty)| Line2::through(v, p).map(|l| (l, empty)))
                .collect(),
            QueryState::Line { a, .. } => Line2::through(v, &a.point)
                .map(|l| vec![(l.clone(), Sign::Negative), (l, Sign::Positive)])
                .unwrap_or_default(),
            QueryState::Whole => Vec::new(),
        };
        for (line, empty) in candidates {
            tested += 1;
            if others.iter().all(|p| {
                let sd = line.side(p);
                sd == Sign::Zero || sd == empty
            }) {
                return Ok(cut_from_line(f, plane, line, tri));
            }
        }
    }
    Err(FailureWitness::NoSeparatingTangent {
        face: f,
        candidates_tested: tested,
    })
}

/// Full run with statistics.
pub fn run_randomized(mesh: &TriMesh, opts: &RandOptions, detector: &dyn IntersectionDetector) -> RandRun {
    let ctx = RandContext::new(mesh);
    let chain = build_chain(&ctx.edges, opts.r, opts.seed);
    let mut states = vec![QueryState::Whole; ctx.num_queries()];
    let mut levels = Vec::new();
    let mut invariant_failures = Vec::new();
    for i in (0..chain.k()).rev() {
        match refine_level(&ctx, &chain, i, &mut states, detector) {
            Ok(s) => levels.push(s),
            Err(e) => {
                return RandRun {
                    result: Err(e),
                    levels,
                    invariant_failures,
                }
            }
        }
        if opts.verify_levels {
            if let Err(q) = check_level_invariant(&ctx, &chain.levels[i], &states) {
                invariant_failures.push((i, q));
            }
        }
    }
    let mut cuts = Vec::with_capacity(mesh.num_triangles());
    for f in 0..mesh.num_triangles() {
        match face_cut(&ctx, f, &states) {
            Ok(c) => cuts.push(c),
            Err(w) => {
                return RandRun {
                    result: Err((f, w)),
                    levels,
                    invariant_failures,
                }
            }
        }
    }
    RandRun {
        result: Ok(CarvePlan { cuts }),
        levels,
        invariant_failures,
    }
}

/// Randomized decision with the naive detector.
pub fn decide_halfplane_randomized(mesh: &TriMesh, r: u32, seed: u64) -> Result<CarvePlan, (usize, FailureWitness)> {
    let opts = RandOptions {
        r,
        seed,
        verify_levels: false,
    };
    run_randomized(mesh, &opts, &NaiveDetector).result
}
