//! Slicing a solid with the plane of one of its faces.

use polycarve::carve3d::face_section;
use polycarve::generators::blind_slot;
use polycarve::mesh::edges;
use polycarve::xsection::crossing_points;
use std::sync::Arc;

fn main() {
    let mesh = Arc::new(blind_slot(3).unwrap());
    let es = edges(&mesh);
    for face in 0..mesh.num_triangles() {
        let (plane, tri, section) = face_section(&mesh, face);
        let xs = crossing_points(&mesh, &es, &plane, Some(face));
        if section.segments.is_empty() {
            continue;
        }
        println!(
            "face {face}: triangle {} {} {}, {} crossing points, {} section segments, {} obstacle vertices",
            tri[0],
            tri[1],
            tri[2],
            xs.points.len(),
            section.segments.len(),
            section.obstacle_vertices().len()
        );
    }
}
