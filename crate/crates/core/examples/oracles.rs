//! Brute-force references: per-face half-plane search, cut validity, and
//! region soundness of a sweep.

use polycarve::generators::{flat_frame, genus1_frame};
use polycarve::halfplane_det::decide_all_faces;
use polycarve::oracles::{halfplane_decide_bruteforce, halfplane_valid, sweep_soundness};
use polycarve::raysweep2d::{free_ray_sweeps, BBox};
use polycarve::geom::Point2;
use polycarve::xsection::CrossSection;

fn main() {
    for (name, mesh) in [("genus1_frame", genus1_frame(1).unwrap()), ("flat_frame", flat_frame(6, 2).unwrap())] {
        let brute = halfplane_decide_bruteforce(&mesh).unwrap();
        let fast = decide_all_faces(&mesh);
        let agree = brute.iter().zip(&fast).all(|(b, f)| *b == f.is_ok());
        let valid = fast.iter().flatten().all(|c| halfplane_valid(&mesh, c.face, c));
        println!(
            "{name}: {}/{} faces carveable, deciders agree {agree}, cuts valid {valid}",
            brute.iter().filter(|&&b| b).count(),
            brute.len()
        );
    }

    let tri = [(0, 0), (4, 0), (2, 3)].map(|(x, y)| Point2::from_i64(x, y)).to_vec();
    let section = CrossSection::from_polygons(vec![tri]);
    let bbox = BBox::around(section.vertices.iter()).unwrap().inflated(2);
    let set = free_ray_sweeps(&section, &bbox);
    let sound = set.sweeps.iter().enumerate().all(|(k, s)| sweep_soundness(&section, s, 200, k as u64).is_ok());
    println!("triangle obstacle: {} sweeps, all sound {sound}", set.sweeps.len());
}
