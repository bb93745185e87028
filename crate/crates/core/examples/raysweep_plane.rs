//! Ray sweeps in the plane: which points can be reached by a ray from
//! infinity that never enters an obstacle, and whether a triangle is
//! covered by such rays.

use polycarve::geom::{ratio, Point2};
use polycarve::raysweep2d::{free_ray_sweeps, point_ray_oracle, triangle_coverable, BBox, SweepPlan2D};
use polycarve::xsection::CrossSection;

fn square(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<Point2> {
    [(x0, y0), (x1, y0), (x1, y1), (x0, y1)].map(|(x, y)| Point2::from_i64(x, y)).to_vec()
}

fn main() {
    // a U-shaped obstacle opening upwards, and a closed ring
    let u = vec![[(0, 0), (6, 0), (6, 6), (4, 6), (4, 2), (2, 2), (2, 6), (0, 6)].map(|(x, y)| Point2::from_i64(x, y)).to_vec()];
    let ring = vec![square(10, 0, 16, 6), square(12, 2, 14, 4)];
    for (name, rings, probe) in [("U", u, (3, 4)), ("ring", ring, (13, 3))] {
        let section = CrossSection::from_polygons(rings);
        let bbox = BBox::around(section.vertices.iter()).unwrap().inflated(2);
        let set = free_ray_sweeps(&section, &bbox);
        println!("{name}: {} sweeps", set.sweeps.len());
        // inside the U's opening, or inside the ring's hole
        for q in [Point2::from_i64(probe.0, probe.1), Point2::new(ratio(2 * probe.0 + 1, 2), ratio(-1, 2))] {
            println!("  {q}: in union {}, oracle {}", set.contains(&q), point_ray_oracle(&section, &q));
        }
    }

    let section = CrossSection::from_polygons(vec![square(10, 0, 16, 6), square(12, 2, 14, 4)]);
    let inside = [Point2::from_i64(12, 2), Point2::from_i64(14, 2), Point2::from_i64(13, 4)];
    match triangle_coverable(&section, &inside) {
        SweepPlan2D::Coverable { sweeps } => println!("hole triangle covered by {} sweeps", sweeps.len()),
        SweepPlan2D::NotCoverable { witness } => println!("hole triangle blocked at {witness}"),
    }
}
