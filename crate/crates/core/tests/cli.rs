use std::io::Write;
use std::process::{Command, Output};

use fixcert::catalog::CATALOG;
use fixcert::problem::Task;

fn fixcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fixcert"))
        .args(args)
        .env_remove("FIXCERT_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

fn problem_file(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

#[test]
fn linear_certificate_exits_zero_with_json() {
    let o = fixcert(&["certify", "--catalog", "miranda-linear", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["outcome"], "CERTIFIED");
}

#[test]
fn translation_is_refuted_with_a_witness() {
    let f = problem_file("dim 1\nmap g1 = x1 + 1\ndomain rect [0,1]\n");
    let o = fixcert(&["certify", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["outcome"], "REFUTED");
    assert!(!v["witness"].as_array().unwrap().is_empty());
}

#[test]
fn annulus_is_refused() {
    let o = fixcert(&["certify", "--catalog", "annulus-rotation"]);
    assert_eq!(code(&o), 4);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("finite dimension"), "{err}");
}

#[test]
fn unreadable_input_exits_four() {
    let f = problem_file("dim 2\nmap g1 = x1\ndomain rect [0,1]\n");
    let o = fixcert(&["certify", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    assert!(!o.stderr.is_empty());
    assert_eq!(code(&fixcert(&["certify", "/nonexistent/problem.fp"])), 4);
}

#[test]
fn localize_exit_codes() {
    let o = fixcert(&["localize", "--catalog", "localize-cos", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let enc = v["enclosures"].as_array().unwrap();
    assert_eq!(enc.iter().filter(|e| e["status"] == "PROVEN").count(), 1);
    let o = fixcert(&["localize", "--catalog", "localize-translation", "--format", "json"]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["enclosures"].as_array().unwrap().is_empty());
    let o = fixcert(&["localize", "--catalog", "localize-cos", "--budget", "1", "--format", "json"]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["budget_exhausted"], true);
}

#[test]
fn index_and_trace() {
    let o = fixcert(&["index", "--catalog", "index-constant-inside", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["value"], 1);
    assert_eq!(json(&o)["verified"], true);
    let o = fixcert(&["index", "--catalog", "index-holes", "--format", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["value"], -1);
    let o = fixcert(&["trace", "--catalog", "trace-averaging", "--format", "json", "--check-index"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["complete"], true);
    assert_eq!(v["start_index"], 1);
    assert_eq!(code(&fixcert(&["trace", "--catalog", "trace-translation"])), 1);
}

#[test]
fn stable_json_is_byte_identical() {
    for args in [
        ["certify", "--catalog", "holes-tanh"],
        ["certify", "--catalog", "cone-quadratic"],
        ["localize", "--catalog", "localize-linear"],
        ["trace", "--catalog", "trace-constant"],
    ] {
        let mut full = args.to_vec();
        full.extend(["--format", "json", "--stable"]);
        let a = fixcert(&full);
        let mut threaded = full.clone();
        threaded.extend(["--threads", "1"]);
        let b = fixcert(&threaded);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), code(&b));
    }
}

#[test]
fn thread_count_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fixcert"))
        .args(["certify", "--catalog", "miranda-linear"])
        .env("FIXCERT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}

fn expected_code(id: &str, task: Task) -> i32 {
    match id {
        "annulus-rotation" | "holes-single" | "index-identity" => 4,
        "cone-identity" => 2,
        _ if id.contains("translation") || id.starts_with("rotation") || id == "cone-tripling"
            || id == "holes-constant-in-hole" =>
        {
            match task {
                Task::Index => 0,
                _ => 1,
            }
        }
        _ => 0,
    }
}

#[test]
fn every_catalog_entry_runs_with_its_expected_code() {
    for e in CATALOG {
        let cmd = match e.task {
            Task::Certify => "certify",
            Task::Localize => "localize",
            Task::Index => "index",
            Task::Trace => "trace",
        };
        let o = fixcert(&[cmd, "--catalog", e.id]);
        assert_eq!(code(&o), expected_code(e.id, e.task), "{}: {}", e.id, e.expect);
    }
    let o = fixcert(&["catalog"]);
    assert_eq!(code(&o), 0);
    let listing = stdout(&o);
    assert!(CATALOG.iter().all(|e| listing.contains(e.id)));
    let o = fixcert(&["catalog", "holes-tanh"]);
    assert!(stdout(&o).contains("holedball"));
}
