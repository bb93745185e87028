//! Both carving models on the family shapes, with the oracle re-check of
//! every emitted plan.

use polycarve::carve3d::{check_implication, decide_both, verify_report, HalfplaneAlgo, SweepOutcome};
use polycarve::generators::ShapeSpec;

fn main() {
    for spec in [
        ShapeSpec::Box { w: 2, h: 2, d: 1 },
        ShapeSpec::Pillars { m: 3 },
        ShapeSpec::BlindSlot { depth: 2 },
        ShapeSpec::BlindPocket,
    ] {
        let mesh = spec.make().unwrap();
        let rep = decide_both(&mesh, HalfplaneAlgo::Deterministic);
        let hp = rep.halfplane.as_ref().unwrap();
        let rs = rep.raysweep.as_ref().unwrap();
        println!("{spec}: half-plane {}, ray sweep {}", hp.carveable, rs.carveable);
        check_implication(&rep).expect("half-plane carving implies ray carving");
        for f in &rs.faces {
            if let SweepOutcome::Blocked { witness_3d, .. } = &f.outcome {
                println!("  face {} unreachable at {witness_3d}", f.face);
            }
        }
        let violations = verify_report(&mesh, &rep, 100, 1);
        println!("  oracle violations: {}", violations.len());
    }
}
