use polycarve::cli::run;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;

fn tmpdir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("polycarve-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut full = vec!["polycarve"];
    full.extend_from_slice(args);
    let code = run(full, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn gen(dir: &Path, family: &str, params: &str) -> String {
    let path = dir.join(format!("{family}.off"));
    let p = path.to_str().unwrap().to_string();
    let mut args = vec!["gen", "--family", family, "--out", &p];
    if !params.is_empty() {
        args.extend(["--params", params]);
    }
    assert_eq!(call(&args).0, 0);
    p
}

#[test]
fn cube_gets_twelve_cuts() {
    let d = tmpdir("cube");
    let cube = gen(&d, "box", "1,1,1");
    let (code, out) = call(&["halfplane", &cube]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let faces = v["halfplane"]["faces"].as_array().unwrap();
    assert_eq!(faces.len(), 12);
    assert!(faces.iter().all(|f| f["cut"].is_object()));
}

#[test]
fn pocket_fails_both_models_with_witnesses() {
    let d = tmpdir("pocket");
    let pocket = gen(&d, "blind_pocket", "");
    let (code, out) = call(&["both", &pocket]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["halfplane"]["carveable"], false);
    assert_eq!(v["raysweep"]["carveable"], false);
    assert!(v["halfplane"]["faces"].as_array().unwrap().iter().any(|f| f["witness"].is_object()));
    let blocked: Vec<&Value> = v["raysweep"]["faces"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["kind"] == "blocked")
        .collect();
    assert!(!blocked.is_empty());
    assert!(blocked.iter().all(|f| f["witness"].is_array() && f["witness_3d"].is_array()));
}

#[test]
fn slot_splits_the_models() {
    let d = tmpdir("slot");
    let slot = gen(&d, "blind_slot", "2");
    assert_eq!(call(&["halfplane", &slot]).0, 2);
    assert_eq!(call(&["raysweep", &slot, "--verify"]).0, 0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let d = tmpdir("det");
    let slot = gen(&d, "blind_slot", "3");
    for algo in [["--algo", "det"], ["--algo", "rand"]] {
        let args = ["both", slot.as_str(), algo[0], algo[1], "--r", "4", "--seed", "0x1234"];
        assert_eq!(call(&args).1, call(&args).1);
    }
}

#[test]
fn seed_accepts_hex_and_decimal() {
    let d = tmpdir("seed");
    let hull = gen(&d, "convex_hull", "12,7");
    let a = call(&["halfplane", &hull, "--algo", "rand", "--seed", "0x10"]).1;
    let b = call(&["halfplane", &hull, "--algo", "rand", "--seed", "16"]).1;
    assert_eq!(a, b);
    assert!(a.contains("\"seed\": 16"));
}

#[test]
fn usage_and_input_errors_exit_one() {
    assert_eq!(call(&["frobnicate"]).0, 1);
    assert_eq!(call(&["halfplane"]).0, 1);
    assert_eq!(call(&["halfplane", "/nonexistent/x.off"]).0, 1);
    assert_eq!(call(&["gen", "--family", "nope"]).0, 1);
    assert_eq!(call(&["both", "x.off", "--algo", "fast"]).0, 1);
    let d = tmpdir("bad");
    let p = d.join("open.off");
    std::fs::write(&p, "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n").unwrap();
    assert_eq!(call(&["halfplane", p.to_str().unwrap()]).0, 1);
    let (code, out) = call(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("\"closed\": false"));
}

#[test]
fn gen_output_round_trips() {
    let (code, off) = call(&["gen", "--family", "pillars", "--params", "3"]);
    assert_eq!(code, 0);
    let m = polycarve::mesh::parse_off(&off).unwrap();
    assert_eq!(m.num_triangles(), 6 * 3 + 8);
}

#[test]
fn bench_writes_csv() {
    let (code, out) = call(&["bench", "--family", "pillars", "--sizes", "2,4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,seconds");
    assert!(lines[1].starts_with("20,"));
    assert!(lines[2].starts_with("32,"));
}

#[test]
fn verify_and_svg() {
    let d = tmpdir("verify");
    let pocket = gen(&d, "blind_pocket", "");
    let (code, out) = call(&["verify", &pocket]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["bruteforce_agrees"], true);
    let svg = d.join("p.svg");
    let report = d.join("p.json");
    let (code, out) = call(&[
        "both",
        &pocket,
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(svg).unwrap().starts_with("<svg"));
    assert!(std::fs::read_to_string(report).unwrap().contains("\"blocked\""));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_polycarve");
    let d = tmpdir("bin");
    let cube = gen(&d, "box", "2,1,1");
    let pocket = gen(&d, "blind_pocket", "");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["both", &cube]), Some(0));
    assert_eq!(status(&["both", &pocket]), Some(2));
    assert_eq!(status(&["both"]), Some(1));
}
