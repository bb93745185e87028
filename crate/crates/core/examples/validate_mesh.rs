//! Parse an OFF mesh and check that it bounds a proper solid.
//!
//!     cargo run --example validate_mesh [file.off]

use polycarve::mesh::{parse_off, validate};

const CUBE: &str = "OFF
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

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable file"),
        None => CUBE.to_string(),
    };
    let mesh = parse_off(&text).expect("well-formed OFF");
    println!("{} vertices, {} triangles", mesh.vertices.len(), mesh.num_triangles());
    let report = validate(&mesh, true);
    println!("valid: {} ({})", report.is_valid(), report.summary());

    // drop one face: the surface is no longer closed
    let mut open = mesh.clone();
    open.triangles.pop();
    let report = validate(&open, false);
    println!("without its last triangle: valid {}, open edges {:?}", report.is_valid(), report.open_edges);
}
