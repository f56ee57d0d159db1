use std::io::Write;
use std::process::{Command, Output};

fn x0cubic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_x0cubic"))
        .args(args)
        .env_remove("X0CUBIC_DATA")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn truncated_table(max_conductor: u64) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for line in x0cubic_core::ecdb::BUNDLED_DATA.lines() {
        let keep = line.starts_with('#')
            || line.split(',').nth(1).and_then(|c| c.parse::<u64>().ok()) <= Some(max_conductor);
        if keep {
            writeln!(f, "{line}").unwrap();
        }
    }
    f
}

#[test]
fn classify_86_shows_the_exact_count() {
    let o = x0cubic(&["classify", "86"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("X_0(86): NO"), "{out}");
    assert!(out.contains("40 > 36"), "{out}");
}

#[test]
fn classify_25_is_yes() {
    let o = x0cubic(&["classify", "25"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("YES"));
    assert!(stdout(&o).contains("R1_genus_le2"));
}

#[test]
fn bad_levels_are_usage_errors() {
    for args in [
        &["classify", "0"][..],
        &["classify", "301"],
        &["classify", "x"],
        &[],
    ] {
        let o = x0cubic(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn raw_values() {
    assert_eq!(
        stdout(&x0cubic(&["count", "86", "3", "2"])).trim(),
        "|X_0(86)(F_9)| = 40"
    );
    assert!(stdout(&x0cubic(&["trace", "11", "2"]))
        .trim()
        .ends_with("= -2"));
    let o = x0cubic(&["--json", "zeta", "86", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let coeffs: Vec<i64> = serde_json::from_value(v["numerator_coeffs"].clone()).unwrap();
    assert_eq!(coeffs.len(), 21);
    assert_eq!(&coeffs[..3], &[1, 4, 23]);
    assert_eq!(coeffs[20], 59049);
}

#[test]
fn domain_errors_name_the_precondition() {
    let o = x0cubic(&["trace", "86", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not coprime"), "{}", stderr(&o));
    let o = x0cubic(&["count", "86", "2", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("divides 86"), "{}", stderr(&o));
    let o = x0cubic(&["count", "86", "3", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = x0cubic(&["--primes", "2,4", "classify", "86"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("4 is not prime"));
}

#[test]
fn verify_theorem_default_run() {
    let o = x0cubic(&["verify-theorem"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("YES (41 levels)"));
    assert!(out.trim_end().ends_with("verified"));
}

#[test]
fn verify_theorem_with_truncated_data() {
    let table = truncated_table(150);
    let o = x0cubic(&["--data", table.path().to_str().unwrap(), "verify-theorem"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("conductor 151"), "{}", stderr(&o));

    let o = Command::new(env!("CARGO_BIN_EXE_x0cubic"))
        .arg("verify-theorem")
        .env("X0CUBIC_DATA", table.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn missing_data_file() {
    let o = x0cubic(&["--data", "/nonexistent/table.csv", "classify", "86"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cannot open"));
}

#[test]
fn degraded_pool_is_unresolved() {
    let o = x0cubic(&["--pmax", "2", "verify-theorem"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("UNRESOLVED: {74, 86,"), "{out}");
    assert!(out.contains("NOT verified"));

    let o = x0cubic(&["--pmax", "1", "classify", "86"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("UNRESOLVED"));
}

#[test]
fn structured_output_is_stable() {
    let a = x0cubic(&["--json", "verify-theorem"]);
    let b = x0cubic(&["--json", "verify-theorem"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["success"], true);
    assert_eq!(v["yes"].as_array().unwrap().len(), 41);
}

#[test]
fn scan_command() {
    let o = x0cubic(&["scan", "300", "3000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no survivors"));
    let o = x0cubic(&["--primes", "2", "scan", "300", "310"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("survivors {300, 302, 304, 306, 308, 310}"));
    assert_eq!(x0cubic(&["scan", "10", "20"]).status.code(), Some(1));
}
