//! Every generator family, written as OFF into a directory.
//!
//!     cargo run --example generate_shapes [out-dir]

use polycarve::generators::{random_corpus, RigidMotion, ShapeSpec, FAMILIES};
use polycarve::mesh::{emit_off, validate};

fn main() {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "shapes".into()));
    std::fs::create_dir_all(&dir).unwrap();
    for family in FAMILIES {
        let spec = ShapeSpec::parse(family, &[]).unwrap();
        let mesh = spec.make().unwrap();
        let path = dir.join(format!("{family}.off"));
        std::fs::write(&path, emit_off(&mesh)).unwrap();
        println!("{spec}: {} triangles -> {}", mesh.num_triangles(), path.display());
    }
    for (spec, mesh) in random_corpus(5, 60, 9) {
        let moved = RigidMotion::random(3).apply_mesh(&mesh);
        println!("random {spec}: {} triangles, moved copy valid {}", mesh.num_triangles(), validate(&moved, false).is_valid());
    }
}
