use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_virtri")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

const CLOSED: [&str; 5] = [
    "figure_eight.vtc",
    "whitehead.vtc",
    "torus_square.vtc",
    "double_tetrahedron.vtc",
    "double_pyramid.vtc",
];

#[test]
fn validate_exit_codes() {
    for f in CLOSED {
        assert_eq!(code(&run(&["validate", path(&fixture(f))])), 0, "{f}");
    }
    let cube = fixture("cube.vtc");
    assert_eq!(code(&run(&["validate", path(&cube)])), 3);
    assert_eq!(code(&run(&["validate", path(&cube), "--free-boundary"])), 0);
    assert_eq!(code(&run(&["validate", "/nonexistent.vtc"])), 3);
}

#[test]
fn usage_errors_exit_3() {
    let f8 = fixture("figure_eight.vtc");
    assert_eq!(code(&run(&["validate", path(&f8), "--bogus"])), 3);
    assert_eq!(code(&run(&["frobnicate"])), 3);
    assert_eq!(code(&run(&["virtualize", path(&f8), "--max-degree", "zero"])), 3);
    assert_eq!(code(&run(&["virtualize", path(&f8), "--max-degree", "0"])), 3);
    assert_eq!(code(&run(&["virtualize", path(&f8), "--resume", "not-a-token"])), 3);
    assert_eq!(code(&run(&["pull", path(&f8)])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn diagonals_json() {
    let out = run(&["diagonals", path(&fixture("whitehead.vtc")), "--json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["returning"], 7);
}

#[test]
fn enumerate_counts() {
    let out = run(&["covers", "enumerate", path(&fixture("whitehead.vtc")), "--degree", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["reps"].as_array().unwrap().len(), 6);
}

#[test]
fn exhaustion_exits_2_and_resumes() {
    let f8 = fixture("figure_eight.vtc");
    let out = run(&["virtualize", path(&f8), "--max-degree", "1", "--json"]);
    assert_eq!(code(&out), 2);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "exhausted");

    let full = stdout(&run(&["covers", "search", path(&f8), "--json"]));
    // one rep per invocation until found
    let mut token: Option<String> = None;
    let last = loop {
        let mut args = vec!["covers", "search", path(&f8), "--json", "--budget", "1"];
        if let Some(t) = &token {
            args.extend(["--resume", t.as_str()]);
        }
        let out = run(&args);
        match code(&out) {
            0 => break stdout(&out),
            2 => {
                let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
                token = Some(v["checkpoint"].as_str().unwrap().to_string());
            }
            c => panic!("exit {c}"),
        }
    };
    assert_eq!(last, full);
}

#[test]
fn virtualize_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["figure_eight.vtc", "whitehead.vtc", "double_pyramid.vtc"] {
        let tri = dir.path().join(format!("{f}.tri"));
        let rep = dir.path().join(format!("{f}.report"));
        let out = run(&["virtualize", path(&fixture(f)), "-o", path(&tri), "--report", path(&rep)]);
        assert_eq!(code(&out), 0, "{f}");
        let report: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
        assert_eq!(report["format"], "vtr-1");
        assert_eq!(report["certificate"]["passed"], true);
        assert_eq!(code(&run(&["verify", path(&tri), "--against", path(&fixture(f))])), 0);

        // re-glue two simplex facets to each other's targets
        let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&tri).unwrap()).unwrap();
        let a = doc["pairings"][0]["dst"].clone();
        doc["pairings"][0]["dst"] = doc["pairings"][1]["dst"].clone();
        doc["pairings"][1]["dst"] = a;
        let bad = dir.path().join(format!("{f}.bad"));
        std::fs::write(&bad, doc.to_string()).unwrap();
        assert_eq!(code(&run(&["verify", path(&bad), "--against", path(&fixture(f))])), 1, "{f}");
    }
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for f in CLOSED {
        let mut seen: Option<(String, Vec<u8>)> = None;
        for i in 0..2 {
            let tri = dir.path().join(format!("{f}.{i}"));
            let out = run(&["virtualize", path(&fixture(f)), "--json", "-o", path(&tri)]);
            assert_eq!(code(&out), 0, "{f}");
            let pair = (stdout(&out), std::fs::read(&tri).unwrap());
            if let Some(first) = &seen {
                assert_eq!(first, &pair, "{f}");
            }
            seen = Some(pair);
        }
    }
}

#[test]
fn pull_free_boundary_cube() {
    let dir = tempfile::tempdir().unwrap();
    let cube = fixture("cube.vtc");
    let tri = dir.path().join("cube.tri");
    let out = run(&["pull", path(&cube), "--free-boundary", "--order", "random:4", "-o", path(&tri), "--json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["triangulation"]["simplices"], 6);
    assert_eq!(code(&run(&["verify", path(&tri), "--against", path(&cube), "--free-boundary"])), 0);

    let order = dir.path().join("order.txt");
    std::fs::write(&order, "7 6 5 4 3 2 1 0\n").unwrap();
    let spec = format!("file:{}", path(&order));
    assert_eq!(code(&run(&["pull", path(&cube), "--free-boundary", "--order", &spec, "-o", path(&tri)])), 0);
    std::fs::write(&order, "0 0 1\n").unwrap();
    assert_eq!(code(&run(&["pull", path(&cube), "--free-boundary", "--order", &spec])), 3);
}
