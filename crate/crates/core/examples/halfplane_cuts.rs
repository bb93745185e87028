//! Deterministic half-plane decision: one cut per face, or a witness.

use polycarve::generators::{blind_pocket, make_box};
use polycarve::geom::format_scalar;
use polycarve::halfplane_det::{decide_halfplane, FailureWitness};
use polycarve::oracles::halfplane_valid;

fn main() {
    let cube = make_box(2, 1, 1).unwrap();
    let plan = decide_halfplane(&cube).expect("boxes are carveable");
    println!("box: {} cuts", plan.cuts.len());
    for cut in plan.cuts.iter().take(3) {
        let n = &cut.plane.normal;
        println!(
            "  face {}: plane normal ({}, {}, {}), boundary through {} along {}, valid {}",
            cut.face,
            format_scalar(&n.x),
            format_scalar(&n.y),
            format_scalar(&n.z),
            cut.boundary.point,
            cut.boundary.direction,
            halfplane_valid(&cube, cut.face, cut)
        );
    }

    let pocket = blind_pocket().unwrap();
    match decide_halfplane(&pocket) {
        Ok(_) => println!("pocket: carveable?"),
        Err((face, FailureWitness::VertexInsideHull { vertex, vertex_point, points, .. })) => {
            println!("pocket: face {face} fails; its vertex {vertex} at {vertex_point} lies in the triangle of crossings");
            for p in points {
                println!("  {p}");
            }
        }
        Err((face, w)) => println!("pocket: face {face} fails: {w:?}"),
    }
}
