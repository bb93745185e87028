//! Command-line front end. Exit codes: 0 carveable / valid, 2 not
//! carveable / invalid / failed check (details in the JSON), 1 usage or
//! input error.

use crate::carve3d::{
    decide_both, decide_halfplane_report, decide_raysweep, face_section, verify_report, CarveReport, HalfplaneAlgo,
    SweepOutcome,
};
use crate::generators::{ShapeSpec, FAMILIES};
use crate::halfplane_det::{decide_halfplane, FailureWitness};
use crate::halfplane_rand::decide_halfplane_randomized;
use crate::mesh::{emit_off, parse_off, validate, TriMesh};
use crate::oracles::{halfplane_decide_bruteforce, MAX_ORACLE_TRIANGLES};
use crate::report::{self, JsonOptions};
use crate::svg::{self, Overlay};
use crate::xsection::crossing_points;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "polycarve", version, about = "Carveability of triangulated polytopes by half-plane cuts and ray sweeps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that an OFF mesh bounds a closed, oriented, non-degenerate solid.
    Validate {
        mesh: PathBuf,
        /// Also run the quadratic self-intersection scan.
        #[arg(long)]
        self_intersection: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide half-plane carveability and emit one cut per face.
    Halfplane(DecideArgs),
    /// Decide ray-sweep carveability and emit sweeps per face.
    Raysweep(DecideArgs),
    /// Run both models and check that half-plane implies ray-sweep.
    Both(DecideArgs),
    /// Write a generated shape as OFF.
    Gen {
        #[arg(long)]
        family: String,
        /// Comma-separated integer parameters; missing ones take defaults.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        params: Vec<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check both deciders against the brute-force oracles.
    Verify {
        mesh: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, value_parser = parse_seed, default_value = "0x5eed")]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time a decider over a ladder of family sizes; prints `n,seconds` CSV.
    Bench {
        #[arg(long, default_value = "pillars")]
        family: String,
        /// First family parameter for each run.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        sizes: Vec<i64>,
        #[arg(long, value_enum, default_value_t = Model::Halfplane)]
        model: Model,
        #[arg(long, value_enum, default_value_t = Algo::Det)]
        algo: Algo,
        #[arg(long, default_value_t = 2)]
        r: u32,
        #[arg(long, value_parser = parse_seed, default_value = "0x5eed")]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct DecideArgs {
    pub mesh: PathBuf,
    /// Half-plane decider.
    #[arg(long, value_enum, default_value_t = Algo::Det)]
    pub algo: Algo,
    /// Sampling ratio of the randomized decider.
    #[arg(long, default_value_t = 2)]
    pub r: u32,
    /// Seed of the randomized decider (decimal or 0x hex).
    #[arg(long, value_parser = parse_seed, default_value = "0x5eed")]
    pub seed: u64,
    /// Re-check every emitted cut and sweep with the oracles.
    #[arg(long)]
    pub verify: bool,
    /// Write an SVG of one interesting face's plane.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings in the JSON.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Det,
    Rand,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Halfplane,
    Raysweep,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed `{s}`: {e}"))
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn read_mesh(path: &Path) -> Result<TriMesh, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let mesh = parse_off(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let v = validate(&mesh, false);
    if !v.is_valid() {
        return Err(Failure(format!("{}: invalid mesh: {}", path.display(), v.summary())));
    }
    Ok(mesh)
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(Failure::from),
    }
}

fn algo_of(a: &DecideArgs) -> HalfplaneAlgo {
    match a.algo {
        Algo::Det => HalfplaneAlgo::Deterministic,
        Algo::Rand => HalfplaneAlgo::Randomized { r: a.r, seed: a.seed },
    }
}

/// Picture of the most telling face: a blocked or failing one if any,
/// otherwise the face with the largest section.
fn write_svg(path: &Path, mesh: &TriMesh, rep: &CarveReport) -> Result<(), Failure> {
    let shared = Arc::new(mesh.clone());
    let text = if let Some(rs) = &rep.raysweep {
        let f = rs
            .faces
            .iter()
            .find(|f| !f.carveable())
            .or_else(|| rs.faces.iter().max_by_key(|f| (f.section_segments, std::cmp::Reverse(f.face))))
            .expect("mesh has faces");
        let (_, tri, section) = face_section(&shared, f.face);
        let witness = match &f.outcome {
            SweepOutcome::Blocked { witness, .. } => Some(witness),
            _ => None,
        };
        svg::render(
            &section,
            &Overlay {
                triangle: Some(&tri),
                sweeps: f.sweeps(),
                witness,
                title: format!("face {} ray sweeps", f.face),
                ..Default::default()
            },
        )
    } else {
        let h = rep.halfplane.as_ref().expect("some model ran");
        let f = h.faces.iter().find(|f| f.carveable == Some(false)).unwrap_or(&h.faces[0]);
        let (_, tri, section) = face_section(&shared, f.face);
        let plane = mesh.triangle_plane(f.face).expect("valid face");
        let xs = crossing_points(mesh, &crate::mesh::edges(mesh), &plane, Some(f.face)).coords();
        let witness = match &f.witness {
            Some(FailureWitness::VertexInsideHull { vertex_point, .. }) => Some(vertex_point),
            _ => None,
        };
        svg::render(
            &section,
            &Overlay {
                triangle: Some(&tri),
                cut: f.cut.as_ref(),
                points: &xs,
                witness,
                title: format!("face {} half-plane", f.face),
                ..Default::default()
            },
        )
    };
    std::fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn decide(which: &Command, a: &DecideArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mesh = read_mesh(&a.mesh)?;
    let rep = match which {
        Command::Halfplane(_) => CarveReport {
            num_faces: mesh.num_triangles(),
            halfplane: Some(decide_halfplane_report(&mesh, algo_of(a))),
            raysweep: None,
        },
        Command::Raysweep(_) => decide_raysweep(&mesh),
        _ => decide_both(&mesh, algo_of(a)),
    };
    crate::carve3d::check_implication(&rep)?;
    let mut v = report::carve_report(&rep, &mesh, JsonOptions { timings: a.timings });
    let mut ok = rep.carveable();
    if a.verify {
        let violations = verify_report(&mesh, &rep, 200, a.seed);
        ok &= violations.is_empty();
        v["verify"] = json!({ "passed": violations.is_empty(), "violations": report::violations(&violations) });
    }
    if let Some(p) = &a.svg {
        write_svg(p, &mesh, &rep)?;
    }
    emit(&a.out, &report::to_pretty(&v), stdout)?;
    Ok(if ok { 0 } else { 2 })
}

fn verify(mesh: &Path, samples: usize, seed: u64, out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mesh = read_mesh(mesh)?;
    let rep = decide_both(&mesh, HalfplaneAlgo::Deterministic);
    let implication = crate::carve3d::check_implication(&rep).is_ok();
    let violations = verify_report(&mesh, &rep, samples, seed);
    let det = decide_halfplane(&mesh).is_ok();
    let rnd = decide_halfplane_randomized(&mesh, 2, seed).is_ok();
    let brute = if mesh.num_triangles() <= MAX_ORACLE_TRIANGLES {
        let per_face = halfplane_decide_bruteforce(&mesh)?;
        let det_faces: Vec<bool> = rep
            .halfplane
            .as_ref()
            .unwrap()
            .faces
            .iter()
            .map(|f| f.carveable == Some(true))
            .collect();
        Some(per_face == det_faces)
    } else {
        None
    };
    let passed = implication && violations.is_empty() && det == rnd && brute != Some(false);
    let v = json!({
        "passed": passed,
        "halfplane_carveable": det,
        "raysweep_carveable": rep.raysweep.as_ref().unwrap().carveable,
        "implication_holds": implication,
        "randomized_agrees": det == rnd,
        "bruteforce_agrees": brute,
        "violations": report::violations(&violations),
    });
    emit(out, &report::to_pretty(&v), stdout)?;
    Ok(if passed { 0 } else { 2 })
}

fn run_command(cli: Cli, stdout: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Validate {
            mesh,
            self_intersection,
            out,
        } => {
            let text = std::fs::read_to_string(mesh).map_err(|e| Failure(format!("{}: {e}", mesh.display())))?;
            let m = parse_off(&text).map_err(|e| Failure(format!("{}: {e}", mesh.display())))?;
            let r = validate(&m, *self_intersection);
            let mut v = report::validation(&r);
            v["vertices"] = json!(m.vertices.len());
            v["triangles"] = json!(m.num_triangles());
            emit(out, &report::to_pretty(&v), stdout)?;
            Ok(if r.is_valid() { 0 } else { 2 })
        }
        c @ (Command::Halfplane(a) | Command::Raysweep(a) | Command::Both(a)) => decide(c, a, stdout),
        Command::Gen { family, params, out } => {
            let spec = ShapeSpec::parse(family, params)
                .map_err(|e| Failure(format!("{e} (families: {})", FAMILIES.join(", "))))?;
            let m = spec.make()?;
            emit(out, &emit_off(&m), stdout)?;
            Ok(0)
        }
        Command::Verify {
            mesh,
            samples,
            seed,
            out,
        } => verify(mesh, *samples, *seed, out, stdout),
        Command::Bench {
            family,
            sizes,
            model,
            algo,
            r,
            seed,
            out,
        } => {
            let mut csv = String::from("n,seconds\n");
            for &size in sizes {
                let m = ShapeSpec::parse(family, &[size])?.make()?;
                let start = Instant::now();
                match (model, algo) {
                    (Model::Halfplane, Algo::Det) => drop(decide_halfplane(&m)),
                    (Model::Halfplane, Algo::Rand) => drop(decide_halfplane_randomized(&m, *r, *seed)),
                    (Model::Raysweep, _) => drop(decide_raysweep(&m)),
                }
                csv.push_str(&format!("{},{:.6}\n", m.num_triangles(), start.elapsed().as_secs_f64()));
            }
            emit(out, &csv, stdout)?;
            Ok(0)
        }
    }
}

/// Runs the command line `args` (program name first), writing reports to
/// `stdout` unless `--out` is given and errors to standard error. Returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli, stdout) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

