use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_residue-sieve"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_parabola(dir: &Path, name: &str, limit: i64, bound: u64) -> PathBuf {
    let mut text = format!("{{\"field\":\"Q\",\"n\":2,\"N\":\"{bound}\"}}\n");
    for a in -limit..=limit {
        text.push_str(&format!("[\"1\",\"{a}\",\"{}\"]\n", a * a));
    }
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn primes_interval_count() {
    let out = run(&["primes", "--lower", "100", "--upper", "200"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("21 primes"), "{text}");
    assert!(text.contains("101\n"), "{text}");
}

#[test]
fn primes_degree_target() {
    let out = run(&["primes", "--q", "2", "--degree", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("2 primes"), "{}", stdout(&out));
}

#[test]
fn fit_verify_roundtrip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_parabola(dir.path(), "pts.jsonl", 60, 3600);
    let cert_a = dir.path().join("a.json");
    let cert_b = dir.path().join("b.json");

    let out = run(&[
        "fit",
        "--input",
        input.to_str().unwrap(),
        "--seed",
        "5",
        "--output",
        cert_a.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("status success"), "{}", stdout(&out));

    // same seed, different thread count: byte-identical certificate
    let out = bin()
        .args([
            "fit",
            "--input",
            input.to_str().unwrap(),
            "--seed",
            "5",
            "--threads",
            "1",
            "--output",
            cert_b.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(
        std::fs::read(&cert_a).unwrap(),
        std::fs::read(&cert_b).unwrap()
    );

    let out = run(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--certificate",
        cert_a.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("verified"), "{}", stdout(&out));
}

#[test]
fn fit_below_coverage_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // strictly convex second coordinates: no line covers more than two
    let mut text = String::from("{\"field\":\"Q\",\"n\":2,\"N\":\"1000\"}\n");
    for a in 0u32..10 {
        text.push_str(&format!("[\"1\",\"{a}\",\"{}\"]\n", 1u64 << a));
    }
    let input = dir.path().join("convex.jsonl");
    std::fs::write(&input, text).unwrap();
    let out = run(&[
        "fit",
        "--input",
        input.to_str().unwrap(),
        "--r",
        "2",
        "--max-iter",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stdout(&out).contains("max_iterations"), "{}", stdout(&out));
}

#[test]
fn verify_tampered_certificate_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_parabola(dir.path(), "pts.jsonl", 10, 100);
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "fit",
        "--input",
        input.to_str().unwrap(),
        "--output",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&cert).unwrap();
    let tampered = text.replace("\"covered\": 21", "\"covered\": 20");
    assert_ne!(text, tampered, "tamper target not found");
    std::fs::write(&cert, tampered).unwrap();
    let out = run(&[
        "verify",
        "--input",
        input.to_str().unwrap(),
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("integrity"), "{}", stderr(&out));
}

#[test]
fn malformed_input_exits_one_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.jsonl");
    std::fs::write(
        &input,
        "{\"field\":\"Q\",\"n\":1,\"N\":\"10\"}\n[\"1\",\"2\"]\nnot json\n",
    )
    .unwrap();
    let out = run(&["oracle", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn oracle_reports_conic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_parabola(dir.path(), "pts.jsonl", 5, 100);
    let out = run(&["oracle", "--input", input.to_str().unwrap(), "--dmax", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("least vanishing degree 2"), "{text}");
    assert!(text.contains("x0*x2 - x1^2"), "{text}");
}

#[test]
fn probe_exp_graph_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("probe.json");
    let out = run(&[
        "probe",
        "--exp-graph",
        "1000000",
        "--base",
        "2",
        "--order-primes",
        "3,5,7,11,13",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("p 11: order 10"), "{text}");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], serde_json::json!(1));
    assert_eq!(doc["kind"], serde_json::json!("probe"));
    assert_eq!(doc["report"]["order_profile"]["base"], serde_json::json!(2));
}

#[test]
fn siegel_solves_example_system() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("sys.json");
    std::fs::write(&input, "{\"field\":\"Q\",\"rows\":[[\"1\",\"2\",\"3\"]]}").unwrap();
    let out = run(&["siegel", "--input", input.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("(1, 1, -1)"), "{text}");
    assert!(text.contains("height 1"), "{text}");
}

#[test]
fn env_thread_count_honored() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_parabola(dir.path(), "pts.jsonl", 10, 100);
    let out = bin()
        .args(["profile", "--input", input.to_str().unwrap()])
        .env("RESIDUE_SIEVE_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("kappa_max"), "{}", stdout(&out));
}

#[test]
fn profile_explicit_window() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_parabola(dir.path(), "pts.jsonl", 30, 900);
    let out = run(&[
        "profile",
        "--input",
        input.to_str().unwrap(),
        "--lower",
        "10",
        "--upper",
        "30",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("prime 11"), "{text}");
    assert!(text.contains("prime 29"), "{text}");
}
