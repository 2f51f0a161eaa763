use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn docergo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_docergo")).args(args).output().expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = docergo(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    docergo(args).status.code().expect("exited normally")
}

fn flags(v: &Value) -> [bool; 4] {
    ["ergodic", "mixing", "irreducible", "primitive"].map(|k| v[k].as_bool().unwrap())
}

#[test]
fn stochastic_fixtures() {
    let transient3 = json_of(&["classify-stochastic", fixture("transient3_stochastic.json").to_str().unwrap()]);
    assert_eq!(flags(&transient3), [true, true, false, false]);
    let st = transient3["stationary"].as_array().unwrap();
    for (x, want) in st.iter().zip([0.5, 0.5, 0.0]) {
        assert!((x.as_f64().unwrap() - want).abs() < 1e-12);
    }
    let id = json_of(&["classify-stochastic", fixture("identity3.json").to_str().unwrap()]);
    assert_eq!(id["ergodic"], false);
    assert_eq!(id["closed_class_count"], 3);
}

#[test]
fn doc_example_fixtures() {
    let cases = [
        ("transient3_x0.5.json", [false, false, false, false]),
        ("transient3_x0.3.json", [true, true, false, false]),
        ("transient3_x-0.5.json", [true, false, false, false]),
        ("primitive3.json", [true, true, true, true]),
        ("flat2.json", [false, false, false, false]),
        ("signed2.json", [true, false, true, false]),
    ];
    for (name, want) in cases {
        let r = json_of(&["classify-doc", fixture(name).to_str().unwrap()]);
        assert_eq!(flags(&r), want, "{name}");
    }
    // The classical core of flat2 is primitive even though the channel is not ergodic.
    let r = json_of(&["classify-doc", fixture("flat2.json").to_str().unwrap()]);
    assert_eq!(flags(&r["core"]), [true, true, true, true]);
}

#[test]
fn gate_and_circuit_fixtures() {
    let ones = fixture("ldui_all_ones_d3.json");
    let g = json_of(&["check-gate", ones.to_str().unwrap()]);
    assert_eq!(g["certificates"]["dual_unitary"], true);
    assert_eq!(g["structural"]["dual_unitary"], true);
    let v = json_of(&["lambda", ones.to_str().unwrap()]);
    assert_eq!(v["verdict"]["non_interacting"], true);

    let phases = fixture("ldui_phases_d3.json");
    let v = json_of(&["lambda", "--shift", phases.to_str().unwrap()]);
    assert_eq!(v["verdict"]["ergodic"], true);
    assert_eq!(v["verdict"]["mixing"], false);
    assert_eq!(v["cycle_products"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["classify-stochastic", fixture("not_stochastic.json").to_str().unwrap()]), 2);
    assert_eq!(code(&["classify-stochastic", fixture("malformed.json").to_str().unwrap()]), 1);
    assert_eq!(code(&["classify-stochastic", fixture("no_such_file.json").to_str().unwrap()]), 1);
    assert_eq!(code(&["classify-doc", fixture("transient3_stochastic.json").to_str().unwrap()]), 1);
    assert_eq!(code(&["lambda", fixture("flat2.json").to_str().unwrap()]), 2);
    assert_eq!(code(&["simulate", fixture("chain_too_big.json").to_str().unwrap()]), 3);
    assert_eq!(code(&["classify-stochastic", "--format", "csv", fixture("identity3.json").to_str().unwrap()]), 1);
    assert_eq!(code(&["sweep", "--family", "nope"]), 1);
    assert_eq!(code(&["--tol-eig", "-1", "check-gate", fixture("flat2.json").to_str().unwrap()]), 1);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn non_channel_needs_the_map_route() {
    let bad = tempfile::tempdir().unwrap();
    let path = bad.path().join("t.json");
    let mut t: Value = serde_json::from_slice(&std::fs::read(fixture("flat2.json")).unwrap()).unwrap();
    t["B"]["entries"][0][1] = serde_json::json!([2.0, 0.0]);
    std::fs::write(&path, t.to_string()).unwrap();
    assert_eq!(code(&["classify-doc", path.to_str().unwrap()]), 2);
    let r = json_of(&["classify-doc", "--allow-map", path.to_str().unwrap()]);
    assert_eq!(r["route"], "spectral");
}

#[test]
fn projection_sweep_is_primitive() {
    let r = json_of(&["sweep", "--family", "projection-dual", "--seeds", "100", "--d", "3"]);
    assert_eq!(r["counts"]["primitive"], 100, "misses: {}", r["misses"]["primitive"]);
    assert_eq!(r["counts"]["bernoulli"], 0);
    assert!(r["errors"].as_array().unwrap().is_empty());
}

#[test]
fn simulated_chain_vanishes_off_the_edge() {
    let out = docergo(&["simulate", fixture("chain_d2_L3.json").to_str().unwrap()]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,t,re,im,re_norm,im_norm"));
    let mut on_edge = 0.0f64;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let (x, t): (i64, i64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let v = f[2].parse::<f64>().unwrap().hypot(f[3].parse().unwrap());
        if x.abs() == t {
            on_edge = on_edge.max(v);
        } else {
            assert!(v <= 1e-9, "C({x},{t}) = {v}");
        }
    }
    assert!(on_edge > 1.0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (chain, primitive3) = (fixture("chain_d2_L3.json"), fixture("primitive3.json"));
    let runs: [&[&str]; 3] = [
        &["simulate", chain.to_str().unwrap()],
        &["sweep", "--family", "unitary-ldoi", "--seeds", "12", "--d", "3", "--seed", "5"],
        &["classify-doc", "--tol-eig", "1e-8", primitive3.to_str().unwrap()],
    ];
    for args in runs {
        let mut full = args.to_vec();
        full.extend(["--out", out]);
        let snapshot = |full: &[&str]| {
            assert_eq!(code(full), 0);
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
                .unwrap()
                .map(|e| e.unwrap().path())
                .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
                .collect();
            files.sort();
            files
        };
        let first = snapshot(&full);
        let second = snapshot(&full);
        assert_eq!(first, second, "{args:?}");
    }
    let m: Value = serde_json::from_slice(&std::fs::read(dir.path().join("simulate.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["seed"], 0);
    assert_eq!(m["output"]["file"], "simulate.csv");
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    let m: Value = serde_json::from_slice(&std::fs::read(dir.path().join("classify-doc.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["tolerance_overrides"]["eig"], 1e-8);
    assert_eq!(m["tolerances"]["eig"], 1e-8);
}

#[test]
fn stdout_matches_written_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("transient3_x-0.5.json");
    let stdout = docergo(&["classify-doc", f.to_str().unwrap()]).stdout;
    assert_eq!(code(&["classify-doc", f.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]), 0);
    assert_eq!(std::fs::read(dir.path().join("classify-doc.json")).unwrap(), stdout);
}
