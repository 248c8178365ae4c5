use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn immgate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_immgate")).args(args).env_remove("IMMGATE_TABLE_PATH").output().unwrap()
}

fn immgate_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_immgate"))
        .args(args)
        .env_remove("IMMGATE_TABLE_PATH")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn payload(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn classify_examples() {
    let out = immgate(&["classify", "immersion", "--m", "8", "--n", "10", "--cat", "smooth"]);
    assert_eq!(code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["status"], "Undecidable");
    assert_eq!(v["schema"], "range-verdict/1");

    let out = immgate(&["classify", "immersion", "--m", "8", "--n", "10", "--cat", "pl"]);
    assert_eq!(code(&out), 0);
    assert_eq!(payload(&out)["status"], "Decidable");

    let out = immgate(&["classify", "immersion", "--m", "10", "--n", "14", "--cat", "smooth"]);
    assert_eq!(code(&out), 3);
    assert_eq!(payload(&out)["status"], "Open");
}

#[test]
fn classify_out_of_scope_and_bad_flags() {
    let out = immgate(&["classify", "immersion", "--m", "10", "--n", "8", "--cat", "smooth"]);
    assert_eq!(code(&out), 3);
    assert_eq!(payload(&out)["status"], "OutOfTheoremScope");

    let out = immgate(&["stabilize", "--m", "10", "--n", "11"]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let out = immgate(&["classify", "embedding", "--m", "4", "--n", "9", "--cat", "smooth", "--boundary", "--closed"]);
    assert_eq!(code(&out), 1);
    let out = immgate(&["classify", "immersion", "--m", "4", "--n", "9", "--cat", "topological"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn solve_one_equation() {
    let dir = tempfile::tempdir().unwrap();
    let sys = write(dir.path(), "one-eq.json", r#"{"r":2,"equations":[{"coeffs":[[1,2,1]],"target":1}]}"#);
    let out = immgate(&["solve", "-i", &sys, "--bound", "1"]);
    assert_eq!(code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["outcome"], "Solution");
    assert_eq!(v["assignment"], serde_json::json!([1, 1]));
}

#[test]
fn solve_negative_and_budget() {
    let even = r#"{"r":2,"equations":[{"coeffs":[[1,2,2]],"target":1}]}"#;
    let out = immgate_stdin(&["solve", "-i", "-", "--bound", "4"], even);
    assert_eq!(code(&out), 2);
    assert_eq!(payload(&out)["outcome"], "NoSolutionWithinBound");

    let out = immgate_stdin(&["solve", "-i", "-", "--bound", "4", "--mod-filter", "up-to", "8"], even);
    assert_eq!(code(&out), 2);
    let v = payload(&out);
    assert_eq!(v["outcome"], "UnsatisfiableProof");
    assert_eq!(v["witness"]["modulus"], 2);

    let big = r#"{"r":4,"equations":[{"coeffs":[[1,2,1],[3,4,1]],"target":99999}]}"#;
    let out = immgate_stdin(&["--budget", "100", "solve", "-i", "-", "--bound", "1000"], big);
    assert_eq!(code(&out), 3);
    assert_eq!(payload(&out)["outcome"], "BudgetExceeded");

    let out = immgate_stdin(&["solve", "-i", "-", "--bound", "4", "--mod-filter", "below", "8"], even);
    assert_eq!(code(&out), 1);
}

#[test]
fn reduce_then_extract_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    // Unsorted and with a redundant zero coefficient; the first extract normalizes.
    let raw = write(
        dir.path(),
        "raw.json",
        r#"{"equations":[{"coeffs":[[2,3,4],[1,3,0],[1,2,-1]],"target":7},{"coeffs":[[1,3,2]],"target":-3}],"r":3}"#,
    );
    let inst = dir.path().join("inst.json");
    let norm = dir.path().join("norm.json");
    let out = immgate(&["reduce", "h10", "--c", "2", "-i", &raw, "-o", inst.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let out = immgate(&["extract", "-i", inst.to_str().unwrap(), "-o", norm.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let inst2 = dir.path().join("inst2.json");
    let back = dir.path().join("back.json");
    immgate(&["reduce", "h10", "--c", "2", "-i", norm.to_str().unwrap(), "-o", inst2.to_str().unwrap()]);
    immgate(&["extract", "-i", inst2.to_str().unwrap(), "-o", back.to_str().unwrap()]);
    assert_eq!(fs::read(&norm).unwrap(), fs::read(&back).unwrap());
    assert_eq!(fs::read(&inst).unwrap(), fs::read(&inst2).unwrap());
}

#[test]
fn reduce_rejects_odd_c_and_diagonal_terms() {
    let sys = r#"{"r":2,"equations":[{"coeffs":[[1,2,1]],"target":1}]}"#;
    assert_eq!(code(&immgate_stdin(&["reduce", "h10", "--c", "3", "-i", "-"], sys)), 1);
    let sq = r#"{"r":2,"include_squares":true,"equations":[{"coeffs":[[1,1,1]],"target":1}]}"#;
    assert_eq!(code(&immgate_stdin(&["reduce", "h10", "--c", "2", "-i", "-"], sq)), 1);
}

#[test]
fn unknown_schema_version_rejected() {
    let sys = r#"{"schema":"quad-system/2","r":2,"equations":[]}"#;
    let out = immgate_stdin(&["solve", "-i", "-", "--bound", "1"], sys);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());

    let sys = r#"{"schema":"quad-system/1","r":2,"equations":[{"coeffs":[[1,2,1]],"target":1}]}"#;
    assert_eq!(code(&immgate_stdin(&["solve", "-i", "-", "--bound", "1"], sys)), 0);

    let form = r#"{"schema":"symmetric-form/7","matrix":[[1]]}"#;
    assert_eq!(code(&immgate_stdin(&["signature", "-i", "-"], form)), 1);
}

#[test]
fn malformed_input_is_usage_error() {
    assert_eq!(code(&immgate_stdin(&["solve", "-i", "-", "--bound", "1"], "{not json")), 1);
    assert_eq!(code(&immgate(&["solve", "-i", "/nonexistent/sys.json", "--bound", "1"])), 1);
    assert_eq!(code(&immgate(&["frobnicate"])), 1);
    assert_eq!(code(&immgate(&[])), 1);
    assert_eq!(code(&immgate(&["--help"])), 0);
}

#[test]
fn sphere_and_stem_lookups() {
    let out = immgate(&["pi-sphere", "--n", "2", "--k", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(payload(&out)["group"], "Z");

    let out = immgate(&["stable-stem", "--k", "3"]);
    assert_eq!(code(&out), 0);
    let v = payload(&out);
    assert_eq!(v["group"], "Z/24");
    assert_eq!(v["im_j_order"], 24);

    let out = immgate(&["pi-sphere", "--n", "40", "--k", "90"]);
    assert_eq!(code(&out), 3);
    assert_eq!(payload(&out)["status"], "OutOfTable");
}

#[test]
fn pi_gn_codes() {
    let out = immgate(&["pi-gn", "--n", "2", "--k", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(payload(&out)["resolved"]["display"], "Z");

    let out = immgate(&["pi-gn", "--n", "30", "--k", "25"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn exotic_sphere_commands() {
    let out = immgate(&["theta", "--k", "7"]);
    assert_eq!(code(&out), 0);
    assert_eq!(payload(&out)["theta_order"], 28);

    let out = immgate(&["theta", "--k", "40"]);
    assert_eq!(code(&out), 3);

    let out = immgate(&["bp", "--k1", "16"]);
    assert_eq!(payload(&out)["order"], 8128);
    let out = immgate(&["bp", "--k1", "8", "--paper-divisor", "quarter"]);
    assert_eq!(code(&out), 0);
    assert_eq!(payload(&out)["convention"], "quarter");

    let out = immgate(&["p-group", "--k", "8"]);
    assert_eq!(payload(&out)["group"]["display"], "Z");

    let out = immgate(&["bernoulli", "--r", "2"]);
    assert_eq!(payload(&out)["value"], "1/30");
}

#[test]
fn signature_and_arf() {
    let e8 = r#"{"matrix":[[2,-1,0,0,0,0,0,0],[-1,2,-1,0,0,0,0,0],[0,-1,2,-1,0,0,0,-1],[0,0,-1,2,-1,0,0,0],[0,0,0,-1,2,-1,0,0],[0,0,0,0,-1,2,-1,0],[0,0,0,0,0,-1,2,0],[0,0,-1,0,0,0,0,2]]}"#;
    let out = immgate_stdin(&["signature", "-i", "-"], e8);
    assert_eq!(code(&out), 0);
    assert_eq!(payload(&out)["signature"], 8);

    let out = immgate_stdin(&["arf", "-i", "-"], r#"{"genus":2,"values":[1,1,0,0]}"#);
    assert_eq!(code(&out), 0);
    assert_eq!(payload(&out)["arf"], 1);
}

#[test]
fn obstruction_codes() {
    let dir = tempfile::tempdir().unwrap();
    let hp2 = write(
        dir.path(),
        "hp2.json",
        r#"{"m":8,"orientable":true,"cohomology":{"0":{"rank":1,"torsion":[]},"4":{"rank":1,"torsion":[]},"8":{"rank":1,"torsion":[]}},"pontryagin":{"1":[2],"2":[7]}}"#,
    );
    let out = immgate(&["obstruct", "immersion", "-i", &hp2, "--n", "11"]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(payload(&out)["witness_degree"], 2);

    let out = immgate(&["obstruct", "immersion", "-i", &hp2, "--n", "16"]);
    assert_eq!(code(&out), 0);

    let bare = write(dir.path(), "bare.json", r#"{"m":8,"orientable":true,"cohomology":{},"pontryagin":{}}"#);
    let out = immgate(&["obstruct", "immersion", "-i", &bare, "--n", "11"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn output_is_deterministic() {
    let runs = [
        vec!["classify", "embedding", "--m", "41", "--n", "51", "--cat", "smooth", "--boundary"],
        vec!["theta", "--k", "15"],
        vec!["pi-gn", "--n", "6", "--k", "5"],
        vec!["stabilize", "--m", "8", "--n", "10"],
    ];
    for args in &runs {
        let a = immgate(args);
        let b = immgate(args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), b.status.code());
        let v = payload(&a);
        assert_eq!(serde_json::to_string(&v).unwrap().as_bytes(), a.stdout.trim_ascii_end());
        assert!(v["schema"].as_str().unwrap().ends_with("/1"));
    }
}

#[test]
fn table_path_override() {
    let dir = tempfile::tempdir().unwrap();
    let bogus = write(dir.path(), "bad.table", "not a table\n");
    let out = Command::new(env!("CARGO_BIN_EXE_immgate"))
        .args(["pi-sphere", "--n", "2", "--k", "3"])
        .env("IMMGATE_TABLE_PATH", &bogus)
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);

    let copy = dir.path().join("copy.table");
    fs::copy(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/spheres.table"), &copy).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_immgate"))
        .args(["pi-sphere", "--n", "2", "--k", "3"])
        .env("IMMGATE_TABLE_PATH", &copy)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(payload(&out)["group"], "Z");
}
