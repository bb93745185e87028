//! Machine-readable report and a picture of a blocked face.
//!
//!     cargo run --example report_and_svg [out-dir]

use polycarve::carve3d::{decide_both, face_section, HalfplaneAlgo, SweepOutcome};
use polycarve::generators::blind_pocket;
use polycarve::report::{carve_report, to_pretty, JsonOptions};
use polycarve::svg::{render, Overlay};
use std::sync::Arc;

fn main() {
    let dir = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let mesh = blind_pocket().unwrap();
    let rep = decide_both(&mesh, HalfplaneAlgo::Randomized { r: 4, seed: 7 });
    let json = to_pretty(&carve_report(&rep, &mesh, JsonOptions::default()));
    std::fs::write(dir.join("pocket.json"), &json).unwrap();
    println!("report: {} bytes", json.len());

    let rs = rep.raysweep.as_ref().unwrap();
    let blocked = rs.faces.iter().find(|f| !f.carveable()).unwrap();
    let (_, tri, section) = face_section(&Arc::new(mesh.clone()), blocked.face);
    let witness = match &blocked.outcome {
        SweepOutcome::Blocked { witness, .. } => Some(witness),
        _ => None,
    };
    let svg = render(
        &section,
        &Overlay {
            triangle: Some(&tri),
            witness,
            title: format!("face {}", blocked.face),
            ..Default::default()
        },
    );
    std::fs::write(dir.join("pocket.svg"), svg).unwrap();
    println!("face {} drawn to pocket.svg", blocked.face);
}
