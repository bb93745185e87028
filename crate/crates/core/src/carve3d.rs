//! Per-face drivers for both cutting models and their comparison.

use crate::geom::{Plane, PlaneFrame, Point2, Point3};
use crate::halfplane_det::{find_halfplane_for_face, FailureWitness, HalfPlaneCut, HalfplaneContext};
use crate::halfplane_rand::{run_randomized, LevelStats, NaiveDetector, RandOptions};
use crate::mesh::TriMesh;
use crate::oracles::{halfplane_valid, sweep_soundness};
use crate::raysweep2d::{sweep_bbox, triangle_coverable, trivial_sweep, LinearRaySweep, SweepPlan2D};
use crate::xsection::{cross_section, CrossSection};
use rayon::prelude::*;
use std::sync::Arc;
use std::time::Instant;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfplaneAlgo {
    Deterministic,
    Randomized { r: u32, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceHalfplane {
    pub face: usize,
    /// `None` when a randomized run stopped at another face first.
    pub carveable: Option<bool>,
    pub cut: Option<HalfPlaneCut>,
    pub witness: Option<FailureWitness>,
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HalfplaneReport {
    pub algo: HalfplaneAlgo,
    pub carveable: bool,
    pub faces: Vec<FaceHalfplane>,
    /// Sampling-chain statistics, randomized runs only.
    pub levels: Vec<LevelStats>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SweepOutcome {
    /// Empty cross-section: one sweep over the whole bounding box.
    Trivial(LinearRaySweep),
    Covered(Vec<LinearRaySweep>),
    /// A point of the face that no valid ray reaches.
    Blocked { witness: Point2, witness_3d: Point3 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceRaysweep {
    pub face: usize,
    pub plane: Plane,
    /// Face corners in the frame of `plane`.
    pub triangle: [Point2; 3],
    pub section_segments: usize,
    pub outcome: SweepOutcome,
    pub seconds: f64,
}

impl FaceRaysweep {
    pub fn carveable(&self) -> bool {
        !matches!(self.outcome, SweepOutcome::Blocked { .. })
    }

    pub fn sweeps(&self) -> &[LinearRaySweep] {
        match &self.outcome {
            SweepOutcome::Trivial(s) => std::slice::from_ref(s),
            SweepOutcome::Covered(v) => v,
            SweepOutcome::Blocked { .. } => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RaysweepReport {
    pub carveable: bool,
    pub faces: Vec<FaceRaysweep>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CarveReport {
    pub num_faces: usize,
    pub halfplane: Option<HalfplaneReport>,
    pub raysweep: Option<RaysweepReport>,
}

impl CarveReport {
    /// Conjunction over the models that were run.
    pub fn carveable(&self) -> bool {
        self.halfplane.as_ref().is_none_or(|h| h.carveable) && self.raysweep.as_ref().is_none_or(|r| r.carveable)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Carve3dError {
    #[error("half-plane carveable but face {face} is not ray-carveable")]
    ImplicationViolated { face: usize },
}

pub fn decide_halfplane_report(mesh: &TriMesh, algo: HalfplaneAlgo) -> HalfplaneReport {
    let start = Instant::now();
    let n = mesh.num_triangles();
    match algo {
        HalfplaneAlgo::Deterministic => {
            let ctx = HalfplaneContext::new(mesh);
            let faces: Vec<FaceHalfplane> = (0..n)
                .into_par_iter()
                .map(|f| {
                    let t = Instant::now();
                    let d = find_halfplane_for_face(&ctx, f);
                    let seconds = Some(t.elapsed().as_secs_f64());
                    match d {
                        Ok(cut) => FaceHalfplane {
                            face: f,
                            carveable: Some(true),
                            cut: Some(cut),
                            witness: None,
                            seconds,
                        },
                        Err(w) => FaceHalfplane {
                            face: f,
                            carveable: Some(false),
                            cut: None,
                            witness: Some(w),
                            seconds,
                        },
                    }
                })
                .collect();
            HalfplaneReport {
                algo,
                carveable: faces.iter().all(|f| f.carveable == Some(true)),
                faces,
                levels: Vec::new(),
                seconds: start.elapsed().as_secs_f64(),
            }
        }
        HalfplaneAlgo::Randomized { r, seed } => {
            let opts = RandOptions {
                r,
                seed,
                verify_levels: false,
            };
            let run = run_randomized(mesh, &opts, &NaiveDetector);
            let mut faces: Vec<FaceHalfplane> = (0..n)
                .map(|f| FaceHalfplane {
                    face: f,
                    carveable: None,
                    cut: None,
                    witness: None,
                    seconds: None,
                })
                .collect();
            let carveable = match run.result {
                Ok(plan) => {
                    for c in plan.cuts {
                        let f = c.face;
                        faces[f].carveable = Some(true);
                        faces[f].cut = Some(c);
                    }
                    true
                }
                Err((f, w)) => {
                    faces[f].carveable = Some(false);
                    faces[f].witness = Some(w);
                    false
                }
            };
            HalfplaneReport {
                algo,
                carveable,
                faces,
                levels: run.levels,
                seconds: start.elapsed().as_secs_f64(),
            }
        }
    }
}

/// The face's plane, its corners in that plane's frame, and the open
/// cross-section of the solid there.
pub fn face_section(mesh: &Arc<TriMesh>, face: usize) -> (Plane, [Point2; 3], CrossSection) {
    let plane = mesh.triangle_plane(face).expect("validated mesh has no degenerate faces");
    let frame = PlaneFrame::new(&plane);
    let tri = mesh.triangle_points(face).map(|p| frame.project(p));
    let section = cross_section(mesh, &plane);
    (plane, tri, section)
}

/// Ray-sweep decision for one face, using nothing but the mesh.
pub fn decide_raysweep_face(mesh: &Arc<TriMesh>, face: usize) -> FaceRaysweep {
    let start = Instant::now();
    let (plane, triangle, section) = face_section(mesh, face);
    let outcome = if section.is_empty() {
        SweepOutcome::Trivial(trivial_sweep(&sweep_bbox(&section, &triangle)))
    } else {
        match triangle_coverable(&section, &triangle) {
            SweepPlan2D::Coverable { sweeps } => SweepOutcome::Covered(sweeps),
            SweepPlan2D::NotCoverable { witness } => {
                let witness_3d = PlaneFrame::new(&plane).lift(&witness);
                SweepOutcome::Blocked { witness, witness_3d }
            }
        }
    };
    FaceRaysweep {
        face,
        plane,
        triangle,
        section_segments: section.segments.len(),
        outcome,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Every face decided independently in parallel, reported in face order.
pub fn decide_raysweep(mesh: &TriMesh) -> CarveReport {
    let start = Instant::now();
    let shared = Arc::new(mesh.clone());
    let faces: Vec<FaceRaysweep> = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|f| decide_raysweep_face(&shared, f))
        .collect();
    CarveReport {
        num_faces: mesh.num_triangles(),
        halfplane: None,
        raysweep: Some(RaysweepReport {
            carveable: faces.iter().all(FaceRaysweep::carveable),
            faces,
            seconds: start.elapsed().as_secs_f64(),
        }),
    }
}

/// Both models, with the half-plane decision made by `algo`.
pub fn decide_both(mesh: &TriMesh, algo: HalfplaneAlgo) -> CarveReport {
    let mut report = decide_raysweep(mesh);
    report.halfplane = Some(decide_halfplane_report(mesh, algo));
    report
}

/// Checks that a face with a half-plane cut is also ray-carveable.
pub fn check_implication(report: &CarveReport) -> Result<(), Carve3dError> {
    let (Some(h), Some(r)) = (&report.halfplane, &report.raysweep) else {
        return Ok(());
    };
    for (fh, fr) in h.faces.iter().zip(&r.faces) {
        if fh.carveable == Some(true) && !fr.carveable() {
            return Err(Carve3dError::ImplicationViolated { face: fr.face });
        }
    }
    Ok(())
}

/// `(half-plane carveable, ray carveable)`, deterministic half-plane route.
pub fn compare_models(mesh: &TriMesh) -> Result<(bool, bool), Carve3dError> {
    let report = decide_both(mesh, HalfplaneAlgo::Deterministic);
    check_implication(&report)?;
    Ok((report.halfplane.unwrap().carveable, report.raysweep.unwrap().carveable))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadCut { face: usize },
    SweepLeaves { face: usize, sweep: usize, point: Point2 },
    /// The witness is reached by some valid ray after all.
    FalseBlock { face: usize },
}

/// Re-checks every emitted cut and sweep with the oracles.
pub fn verify_report(mesh: &TriMesh, report: &CarveReport, samples: usize, seed: u64) -> Vec<Violation> {
    let mut out = Vec::new();
    if let Some(h) = &report.halfplane {
        for f in &h.faces {
            if let Some(c) = &f.cut {
                if !halfplane_valid(mesh, f.face, c) {
                    out.push(Violation::BadCut { face: f.face });
                }
            }
        }
    }
    if let Some(r) = &report.raysweep {
        let shared = Arc::new(mesh.clone());
        let found: Vec<Vec<Violation>> = r
            .faces
            .par_iter()
            .map(|f| {
                let mut v = Vec::new();
                let section = cross_section(&shared, &f.plane);
                for (i, s) in f.sweeps().iter().enumerate() {
                    if let Err(point) = sweep_soundness(&section, s, samples, seed ^ (f.face as u64) << 8 ^ i as u64) {
                        v.push(Violation::SweepLeaves {
                            face: f.face,
                            sweep: i,
                            point,
                        });
                    }
                }
                if let SweepOutcome::Blocked { witness, .. } = &f.outcome {
                    if crate::raysweep2d::point_ray_oracle(&section, witness) {
                        v.push(Violation::FalseBlock { face: f.face });
                    }
                }
                v
            })
            .collect();
        out.extend(found.into_iter().flatten());
    }
    out
}
