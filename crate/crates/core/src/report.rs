//! JSON encoding of reports. Rationals are written as `"p/q"` strings and
//! object keys come out sorted, so equal reports serialize identically.

use crate::carve3d::{CarveReport, FaceRaysweep, HalfplaneAlgo, HalfplaneReport, SweepOutcome, Violation};
use crate::geom::{format_scalar, Plane, Point2, Point3, Sign};
use crate::halfplane_det::{FailureWitness, HalfPlaneCut};
use crate::mesh::{edges, TriMesh, ValidationReport};
use crate::raysweep2d::LinearRaySweep;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct JsonOptions {
    /// Include wall-clock timings (breaks byte-for-byte reproducibility).
    pub timings: bool,
}

pub fn p2(p: &Point2) -> Value {
    json!([format_scalar(&p.x), format_scalar(&p.y)])
}

pub fn p3(p: &Point3) -> Value {
    json!([format_scalar(&p.x), format_scalar(&p.y), format_scalar(&p.z)])
}

fn plane(pl: &Plane) -> Value {
    json!({ "normal": p3(&pl.normal), "offset": format_scalar(&pl.offset) })
}

fn cut(c: &HalfPlaneCut) -> Value {
    json!({
        "plane": plane(&c.plane),
        "boundary": { "point": p2(&c.boundary.point), "direction": p2(&c.boundary.direction) },
        "side": if c.side == Sign::Positive { "left" } else { "right" },
        "line_point": p3(&c.line_point),
        "line_direction": p3(&c.line_direction),
    })
}

fn witness(w: &FailureWitness, edge_list: &[(usize, usize)]) -> Value {
    match w {
        FailureWitness::VertexInsideHull {
            face,
            vertex,
            vertex_point,
            edges,
            points,
        } => json!({
            "kind": "vertex_inside_hull",
            "face": face,
            "vertex": vertex,
            "vertex_point": p2(vertex_point),
            "edges": edges.iter().map(|&e| json!([edge_list[e].0, edge_list[e].1])).collect::<Vec<_>>(),
            "points": points.iter().map(p2).collect::<Vec<_>>(),
        }),
        FailureWitness::NoSeparatingTangent {
            face,
            candidates_tested,
        } => json!({
            "kind": "no_separating_tangent",
            "face": face,
            "candidates_tested": candidates_tested,
        }),
    }
}

pub fn sweep(s: &LinearRaySweep) -> Value {
    json!({
        "a_start": p2(&s.a_start),
        "a_end": p2(&s.a_end),
        "b_start": p2(&s.b_start),
        "b_end": p2(&s.b_end),
    })
}

fn halfplane(h: &HalfplaneReport, mesh: &TriMesh, opts: JsonOptions) -> Value {
    let edge_list = edges(mesh).edges;
    let faces: Vec<Value> = h
        .faces
        .iter()
        .map(|f| {
            let mut v = json!({
                "face": f.face,
                "carveable": f.carveable,
                "cut": f.cut.as_ref().map(cut),
                "witness": f.witness.as_ref().map(|w| witness(w, &edge_list)),
            });
            if opts.timings {
                v["seconds"] = json!(f.seconds);
            }
            v
        })
        .collect();
    let mut v = json!({
        "carveable": h.carveable,
        "faces": faces,
    });
    match h.algo {
        HalfplaneAlgo::Deterministic => v["algo"] = json!("det"),
        HalfplaneAlgo::Randomized { r, seed } => {
            v["algo"] = json!("rand");
            v["r"] = json!(r);
            v["seed"] = json!(seed);
            v["levels"] = h
                .levels
                .iter()
                .map(|l| {
                    json!({
                        "level": l.level,
                        "added_edges": l.added_edges,
                        "incidences": l.incidences,
                        "rebuilt": l.rebuilt,
                        "repaired": l.repaired,
                    })
                })
                .collect();
        }
    }
    if opts.timings {
        v["seconds"] = json!(h.seconds);
    }
    v
}

fn ray_face(f: &FaceRaysweep, opts: JsonOptions) -> Value {
    let (kind, w2, w3) = match &f.outcome {
        SweepOutcome::Trivial(_) => ("trivial", None, None),
        SweepOutcome::Covered(_) => ("covered", None, None),
        SweepOutcome::Blocked { witness, witness_3d } => ("blocked", Some(p2(witness)), Some(p3(witness_3d))),
    };
    let mut v = json!({
        "face": f.face,
        "carveable": f.carveable(),
        "plane": plane(&f.plane),
        "triangle": f.triangle.iter().map(p2).collect::<Vec<_>>(),
        "section_segments": f.section_segments,
        "kind": kind,
        "sweeps": f.sweeps().iter().map(sweep).collect::<Vec<_>>(),
        "witness": w2,
        "witness_3d": w3,
    });
    if opts.timings {
        v["seconds"] = json!(f.seconds);
    }
    v
}

/// The full report. `mesh` resolves edge indices in witnesses to vertex
/// pairs.
pub fn carve_report(r: &CarveReport, mesh: &TriMesh, opts: JsonOptions) -> Value {
    let mut v = json!({
        "faces": r.num_faces,
        "carveable": r.carveable(),
    });
    if let Some(h) = &r.halfplane {
        v["halfplane"] = halfplane(h, mesh, opts);
    }
    if let Some(rs) = &r.raysweep {
        let mut o = json!({
            "carveable": rs.carveable,
            "faces": rs.faces.iter().map(|f| ray_face(f, opts)).collect::<Vec<_>>(),
        });
        if opts.timings {
            o["seconds"] = json!(rs.seconds);
        }
        v["raysweep"] = o;
    }
    v
}

pub fn violations(vs: &[Violation]) -> Value {
    vs.iter()
        .map(|v| match v {
            Violation::BadCut { face } => json!({ "kind": "bad_cut", "face": face }),
            Violation::SweepLeaves { face, sweep, point } => {
                json!({ "kind": "sweep_leaves", "face": face, "sweep": sweep, "point": p2(point) })
            }
            Violation::FalseBlock { face } => json!({ "kind": "false_block", "face": face }),
        })
        .collect()
}

pub fn validation(r: &ValidationReport) -> Value {
    json!({
        "valid": r.is_valid(),
        "closed": r.closed,
        "oriented": r.oriented,
        "nondegenerate": r.nondegenerate,
        "enough_vertices": r.enough_vertices,
        "no_self_intersection": r.no_self_intersection,
        "open_edges": r.open_edges,
        "misoriented_edges": r.misoriented_edges,
        "degenerate_triangles": r.degenerate_triangles,
        "intersecting_pairs": r.intersecting_pairs,
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carve3d::decide_both;
    use crate::generators::{blind_pocket, make_box};

    #[test]
    fn cube_report_shape() {
        let m = make_box(1, 1, 1).unwrap();
        let r = decide_both(&m, HalfplaneAlgo::Deterministic);
        let v = carve_report(&r, &m, JsonOptions::default());
        assert_eq!(v["faces"], 12);
        assert_eq!(v["carveable"], true);
        assert_eq!(v["halfplane"]["faces"].as_array().unwrap().len(), 12);
        assert_eq!(v["raysweep"]["faces"][0]["kind"], "trivial");
        assert!(v["halfplane"]["faces"][0]["cut"]["plane"]["offset"].as_str().unwrap().contains('/'));
        assert!(v["halfplane"].get("seconds").is_none());
    }

    #[test]
    fn reports_are_reproducible() {
        let m = blind_pocket().unwrap();
        let a = to_pretty(&carve_report(&decide_both(&m, HalfplaneAlgo::Randomized { r: 4, seed: 1 }), &m, JsonOptions::default()));
        let b = to_pretty(&carve_report(&decide_both(&m, HalfplaneAlgo::Randomized { r: 4, seed: 1 }), &m, JsonOptions::default()));
        assert_eq!(a, b);
        assert!(a.contains("\"blocked\""));
    }
}
