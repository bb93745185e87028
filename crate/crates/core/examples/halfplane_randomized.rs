//! The randomized half-plane decider, level by level, against the
//! deterministic one.

use polycarve::generators::{pillars, star_prism};
use polycarve::halfplane_det::decide_halfplane;
use polycarve::halfplane_rand::{run_randomized, NaiveDetector, RandOptions, DEFAULT_SEED};

fn main() {
    for (name, mesh) in [("pillars(6)", pillars(6).unwrap()), ("star_prism(7)", star_prism(7, 1).unwrap())] {
        let det = decide_halfplane(&mesh).is_ok();
        for r in [2, 4, 16] {
            let run = run_randomized(
                &mesh,
                &RandOptions {
                    r,
                    seed: DEFAULT_SEED,
                    verify_levels: true,
                },
                &NaiveDetector,
            );
            println!(
                "{name} r={r}: carveable {} (deterministic {det}), {} levels, invariant failures {}",
                run.result.is_ok(),
                run.levels.len(),
                run.invariant_failures.len()
            );
            for l in &run.levels {
                println!(
                    "  level {}: +{} edges, {} incidences, {} rebuilt, {} repaired",
                    l.level, l.added_edges, l.incidences, l.rebuilt, l.repaired
                );
            }
        }
    }
}
