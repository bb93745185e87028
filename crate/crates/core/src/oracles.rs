//! Brute-force checkers. Each recomputes what it needs from the mesh with
//! the geometry kernel only, so a bug in an algorithm module cannot hide
//! itself here.

use crate::geom::{
    int, ratio, weakly_separates, Line2, Plane, PlaneFrame, Point2, Point3, Scalar, Sign,
};
use crate::halfplane_det::HalfPlaneCut;
use crate::mesh::TriMesh;
use crate::raysweep2d::LinearRaySweep;
use crate::xsection::{in_section_interior, CrossSection};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use thiserror::Error;

/// Largest mesh the cubic-time oracles accept.
pub const MAX_ORACLE_TRIANGLES: usize = 600;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("mesh has {0} triangles; oracles accept at most {MAX_ORACLE_TRIANGLES}")]
    TooLarge(usize),
    #[error("face {0} is degenerate")]
    DegenerateFace(usize),
}

fn face_plane(mesh: &TriMesh, face: usize) -> Option<Plane> {
    let [a, b, c] = mesh.triangles[face];
    Plane::through(&mesh.vertices[a], &mesh.vertices[b], &mesh.vertices[c]).ok()
}

/// Points where mesh edges strictly cross `plane`, deduplicated.
pub fn strict_crossings(mesh: &TriMesh, plane: &Plane) -> Vec<Point3> {
    let mut edges = BTreeSet::new();
    for t in &mesh.triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let mut out = BTreeSet::new();
    for (a, b) in edges {
        let (pa, pb) = (&mesh.vertices[a], &mesh.vertices[b]);
        let (fa, fb) = (plane.eval(pa), plane.eval(pb));
        if (fa.is_positive() && fb.is_negative()) || (fa.is_negative() && fb.is_positive()) {
            let t = &fa / (&fa - &fb);
            out.insert(pa.lerp(pb, &t));
        }
    }
    out.into_iter().collect()
}

/// Whether `cut` lies on `face`'s plane, contains the face and avoids the
/// interior of the solid: every strict edge crossing of the plane must lie
/// weakly outside the cut.
pub fn halfplane_valid(mesh: &TriMesh, face: usize, cut: &HalfPlaneCut) -> bool {
    let Some(plane) = face_plane(mesh, face) else {
        return false;
    };
    if !plane.same_carrier(&cut.plane) || !plane.contains(&cut.line_point) {
        return false;
    }
    let frame = PlaneFrame::new(&cut.plane);
    let inside = |p: &Point3| {
        let s = cut.boundary.side(&frame.project(p));
        s == Sign::Zero || s == cut.side
    };
    let strictly_inside = |p: &Point3| cut.boundary.side(&frame.project(p)) == cut.side;
    let [a, b, c] = mesh.triangles[face];
    [a, b, c].iter().all(|&v| inside(&mesh.vertices[v]))
        && strict_crossings(mesh, &plane).iter().all(|x| !strictly_inside(x))
}

/// Per-face verdicts from testing every line through a face vertex and a
/// crossing point, plus the face's own edge lines.
pub fn halfplane_decide_bruteforce(mesh: &TriMesh) -> Result<Vec<bool>, OracleError> {
    if mesh.triangles.len() > MAX_ORACLE_TRIANGLES {
        return Err(OracleError::TooLarge(mesh.triangles.len()));
    }
    (0..mesh.triangles.len())
        .map(|f| {
            let plane = face_plane(mesh, f).ok_or(OracleError::DegenerateFace(f))?;
            let frame = PlaneFrame::new(&plane);
            let tri: Vec<Point2> = mesh.triangles[f]
                .iter()
                .map(|&v| frame.project(&mesh.vertices[v]))
                .collect();
            let xs: Vec<Point2> = strict_crossings(mesh, &plane)
                .iter()
                .map(|p| frame.project(p))
                .collect();
            if xs.is_empty() {
                return Ok(true);
            }
            let mut lines: Vec<Line2> = Vec::new();
            for v in &tri {
                for x in &xs {
                    if let Some(l) = Line2::through(v, x) {
                        lines.push(l);
                    }
                }
            }
            for k in 0..3 {
                lines.extend(Line2::through(&tri[k], &tri[(k + 1) % 3]));
            }
            Ok(lines.iter().any(|l| weakly_separates(l, &tri, &xs)))
        })
        .collect()
}

/// Overall verdict of [`halfplane_decide_bruteforce`].
pub fn halfplane_carveable_bruteforce(mesh: &TriMesh) -> Result<bool, OracleError> {
    Ok(halfplane_decide_bruteforce(mesh)?.into_iter().all(|b| b))
}

/// Exact membership in a sweep region by solving `p = a(t) + s (b(t) - a(t))`
/// for `t` in `[0, 1]`, `s >= 0`. The collinearity condition is linear in
/// `t` whenever either `a` or `b` is fixed, which holds for every sweep the
/// library emits.
///
/// # Panics
/// If both `a` and `b` move.
pub fn sweep_region_member(sweep: &LinearRaySweep, p: &Point2) -> bool {
    let moving_a = sweep.a_start != sweep.a_end;
    let moving_b = sweep.b_start != sweep.b_end;
    assert!(!(moving_a && moving_b), "sweep with both endpoints moving");
    let at = |t: &Scalar| -> bool {
        let a = sweep.a_start.lerp(&sweep.a_end, t);
        let b = sweep.b_start.lerp(&sweep.b_end, t);
        let d = b.sub(&a);
        let q = p.sub(&a);
        if d.is_zero() {
            return q.is_zero();
        }
        q.cross(&d).is_zero() && !q.dot(&d).is_negative()
    };
    // f(t) = cross(p - a(t), b(t) - a(t)) = c0 + c1 t
    let f = |t: &Scalar| {
        let a = sweep.a_start.lerp(&sweep.a_end, t);
        let b = sweep.b_start.lerp(&sweep.b_end, t);
        p.sub(&a).cross(&b.sub(&a))
    };
    let c0 = f(&Scalar::zero());
    let c1 = f(&Scalar::one()) - &c0;
    if !c1.is_zero() {
        let t = -c0 / c1;
        return !t.is_negative() && t <= Scalar::one() && at(&t);
    }
    if !c0.is_zero() {
        return false;
    }
    // collinear for every t: s(t) >= 0 is a quadratic condition; its
    // maximum over [0, 1] is at an end or at the vertex
    let h = |t: &Scalar| {
        let a = sweep.a_start.lerp(&sweep.a_end, t);
        let b = sweep.b_start.lerp(&sweep.b_end, t);
        p.sub(&a).dot(&b.sub(&a))
    };
    let (h0, hh, h1) = (h(&Scalar::zero()), h(&ratio(1, 2)), h(&Scalar::one()));
    let qa = (&h0 - &hh * int(2) + &h1) * int(2);
    let qb = &h1 - &h0 - &qa;
    let mut cands = vec![Scalar::zero(), Scalar::one()];
    if qa.is_negative() {
        let t = -qb / (qa * int(2));
        if !t.is_negative() && t <= Scalar::one() {
            cands.push(t);
        }
    }
    cands.iter().any(at)
}

/// Checks `samples` random points `(t, s)` of the sweep region against the
/// open section. Returns the first offending point.
pub fn sweep_soundness(
    section: &CrossSection,
    sweep: &LinearRaySweep,
    samples: usize,
    seed: u64,
) -> Result<(), Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..samples {
        let t = ratio(rng.gen_range(0..=1000), 1000);
        // mostly near the ray origin, sometimes far out
        let s = if k % 5 == 0 {
            ratio(rng.gen_range(0..=100_000), 100)
        } else {
            ratio(rng.gen_range(0..=4000), 1000)
        };
        let a = sweep.a_start.lerp(&sweep.a_end, &t);
        let b = sweep.b_start.lerp(&sweep.b_end, &t);
        let q = a.lerp(&b, &s);
        if in_section_interior(section, &q) {
            return Err(q);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfplane_det::decide_halfplane;
    use crate::mesh::parse_off;

    const CUBE: &str = "OFF\n8 6 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n\
        4 0 3 2 1\n4 4 5 6 7\n4 0 1 5 4\n4 1 2 6 5\n4 2 3 7 6\n4 3 0 4 7\n";

    fn p(x: i64, y: i64) -> Point2 {
        Point2::from_i64(x, y)
    }

    #[test]
    fn cube_cuts_are_valid_and_flips_are_not() {
        let m = parse_off(CUBE).unwrap();
        let plan = decide_halfplane(&m).unwrap();
        assert_eq!(plan.cuts.len(), 12);
        for cut in &plan.cuts {
            assert!(halfplane_valid(&m, cut.face, cut));
            let flipped = HalfPlaneCut::new(cut.face, &cut.plane, cut.boundary.clone(), cut.side.flip());
            // the flipped cut misses at least one face vertex
            assert!(!halfplane_valid(&m, cut.face, &flipped));
        }
        assert!(halfplane_carveable_bruteforce(&m).unwrap());
    }

    #[test]
    fn crossings_of_cube_midplane() {
        let m = parse_off(CUBE).unwrap();
        let plane = Plane::new(Point3::from_i64(0, 0, 2), int(1)).unwrap();
        // 4 vertical edges and 4 side-face diagonals
        assert_eq!(strict_crossings(&m, &plane).len(), 8);
    }

    #[test]
    fn sweep_membership_examples() {
        let s = LinearRaySweep::pivot(p(0, 1), p(-1, 0), p(1, 0));
        assert!(sweep_region_member(&s, &p(0, 0)));
        assert!(sweep_region_member(&s, &p(0, 9)));
        assert!(sweep_region_member(&s, &p(-3, 4)));
        assert!(!sweep_region_member(&s, &p(0, -1)));
        assert!(!sweep_region_member(&s, &p(4, 3)));
        let ray = LinearRaySweep::pivot(p(0, 1), p(0, 0), p(0, 0));
        assert!(sweep_region_member(&ray, &p(0, 0)));
        assert!(sweep_region_member(&ray, &p(0, 5)));
        assert!(!sweep_region_member(&ray, &p(0, -1)));
        let collinear = LinearRaySweep::pivot(p(3, 0), p(0, 0), p(1, 0));
        assert!(sweep_region_member(&collinear, &p(0, 0)));
        assert!(!sweep_region_member(&collinear, &p(-1, 0)));
        let fan = LinearRaySweep::fan(p(0, 0), &p(1, 0), &p(0, 1));
        assert!(sweep_region_member(&fan, &p(1, 1)));
        assert!(!sweep_region_member(&fan, &p(-1, 1)));
    }

    /// Floating-point search for `t` with `q` on the ray at `t`: scan for
    /// sign changes of the collinearity residual, then bisect.
    fn float_member(s: &LinearRaySweep, q: &Point2) -> bool {
        let f = |v: &Point2| v.to_f64();
        let (a0, a1, b0, b1, q) = (f(&s.a_start), f(&s.a_end), f(&s.b_start), f(&s.b_end), f(q));
        let ray = |t: f64| {
            let a = [a0[0] + t * (a1[0] - a0[0]), a0[1] + t * (a1[1] - a0[1])];
            let b = [b0[0] + t * (b1[0] - b0[0]), b0[1] + t * (b1[1] - b0[1])];
            (a, [b[0] - a[0], b[1] - a[1]])
        };
        let resid = |t: f64| {
            let (a, d) = ray(t);
            (q[0] - a[0]) * d[1] - (q[1] - a[1]) * d[0]
        };
        let close = |t: f64| {
            let (a, d) = ray(t);
            let dd = d[0] * d[0] + d[1] * d[1];
            if dd < 1e-18 {
                return (q[0] - a[0]).hypot(q[1] - a[1]) < 1e-6;
            }
            let sp = (((q[0] - a[0]) * d[0] + (q[1] - a[1]) * d[1]) / dd).max(0.0);
            (a[0] + sp * d[0] - q[0]).hypot(a[1] + sp * d[1] - q[1]) < 1e-6
        };
        let n = 1000;
        (0..n).any(|i| {
            let (mut lo, mut hi) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            if close(lo) || close(hi) {
                return true;
            }
            let (flo, fhi) = (resid(lo), resid(hi));
            if flo.signum() == fhi.signum() {
                return false;
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if resid(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            close(lo) || close(hi)
        })
    }

    proptest::proptest! {
        #[test]
        fn membership_agrees_with_library_and_raster(
            coords in proptest::collection::vec(-6i64..=6, 6),
            qx in -40i64..=40, qy in -40i64..=40, fan in proptest::bool::ANY,
        ) {
            let pt = |i: usize| p(coords[2 * i], coords[2 * i + 1]);
            let s = if fan {
                LinearRaySweep::fan(pt(0), &pt(1), &pt(2))
            } else {
                LinearRaySweep::pivot(pt(0), pt(1), pt(2))
            };
            let q = Point2::new(ratio(qx, 4), ratio(qy, 4));
            let m = sweep_region_member(&s, &q);
            proptest::prop_assert_eq!(m, s.contains(&q));
            proptest::prop_assert_eq!(m, float_member(&s, &q));
        }
    }
}
