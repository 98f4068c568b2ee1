//! Acceptance: command-line end to end. `verify --all --json` must exit 0
//! with six all-pass reports; perturbed catalogs must exit nonzero naming
//! the failing check.

use std::process::Command;
use std::time::Instant;

fn mukai() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mukai"))
}

fn builtin_text() -> String {
    // keep the perturbation tests in lock-step with the shipped catalog
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/src/catalog.toml");
    std::fs::read_to_string(path).expect("catalog source present")
}

#[test]
fn criterion_11_cli_end_to_end() {
    let start = Instant::now();

    // verify --all --json: exit code 0 and six all-pass reports
    let out = mukai().args(["verify", "--all", "--json"]).output().expect("binary runs");
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let reports: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("valid JSON on stdout");
    let reports = reports.as_array().expect("array of reports");
    assert_eq!(reports.len(), 6);
    for r in reports {
        assert!(r["entry"].is_string());
        assert!(r["elapsed_ms"].is_number());
        let checks = r["checks"].as_array().expect("checks array");
        assert!(!checks.is_empty());
        for c in checks {
            assert_eq!(c["pass"], true, "entry {} check {}", r["entry"], c["name"]);
        }
    }

    let dir = tempfile::tempdir().expect("tempdir");

    // a wrong expected index must fail the kernel-index check
    let wrong_index = builtin_text().replacen("expected_index = \"4\"", "expected_index = \"5\"", 1);
    let path = dir.path().join("wrong_index.toml");
    std::fs::write(&path, wrong_index).unwrap();
    let out = mukai()
        .args(["verify", "--all", "--json", "--catalog"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert!(!out.status.success(), "wrong index accepted");
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    let p3 = reports
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["entry"] == "P3")
        .expect("P3 report present");
    let failing: Vec<&str> = p3["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failing.contains(&"kernel-index"), "failing checks: {failing:?}");

    // a tampered vector must be rejected at load time, naming the entry
    let wrong_vector = builtin_text().replacen("\"1,3,19\"", "\"1,3,18\"", 1);
    let path = dir.path().join("wrong_vector.toml");
    std::fs::write(&path, wrong_vector).unwrap();
    let out = mukai()
        .args(["verify", "--all", "--json", "--catalog"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert!(!out.status.success(), "tampered vector accepted");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("P3"), "stderr names the entry: {stderr}");

    let elapsed = start.elapsed().as_millis();
    println!("criterion 11 (cli end to end): PASS [{elapsed} ms, budget 180000 ms]");
}

#[test]
fn cli_roots_and_point() {
    let out = mukai()
        .args(["roots", "--delta", "2", "--rmax", "1", "--lmax", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("(1, 0, 1)"));
    assert!(text.contains("(1, 3, 19)"));

    let out = mukai()
        .args(["point", "--delta", "11", "--vector", "3,-1,4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("x = -1/3"), "{text}");
    assert!(text.contains("y^2 = 1/99"), "{text}");

    // values with a leading minus parse fine
    let out = mukai()
        .args(["point", "--delta", "5", "--vector", "-2,1,-3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("x = -1/2"));
}

#[test]
fn cli_al_test() {
    let out = mukai()
        .args(["al-test", "--level", "6", "--matrix", "2,-1,6,-2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("e = 2"), "{text}");
    assert!(text.contains("local test agrees: true"), "{text}");
    assert!(text.contains("Fricke group F(6): false"), "{text}");
}

#[test]
fn cli_ford_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("p3.svg");
    let out = mukai()
        .args(["ford", "--entry", "P3", "--wordlen", "1", "--svg"])
        .arg(&svg_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("4 circles"), "{text}");
    assert!(text.contains("boundary"), "{text}");
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("class=\"arc\"").count(), 4);
    assert_eq!(svg.matches("class=\"pt\"").count(), 4);
    assert_eq!(svg.matches("class=\"strip\"").count(), 2);
}

#[test]
fn cli_mutate_and_path() {
    let out = mukai().args(["mutate", "--entry", "V5", "--braid", "1"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, vec!["(2, -1, 3)", "(1, 0, 1)", "(2, 1, 3)", "(1, 1, 6)"]);

    let dir = tempfile::tempdir().unwrap();
    let from = dir.path().join("from.toml");
    let to = dir.path().join("to.toml");
    std::fs::write(
        &from,
        "delta = 5\nvectors = [\"1,0,1\", \"3,1,2\", \"2,1,3\", \"1,1,6\"]\n",
    )
    .unwrap();
    std::fs::write(
        &to,
        "delta = 5\nvectors = [\"2,-1,3\", \"1,0,1\", \"2,1,3\", \"1,1,6\"]\n",
    )
    .unwrap();
    let out = mukai()
        .args(["path", "--max", "3", "--from"])
        .arg(&from)
        .arg("--to")
        .arg(&to)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("braid: 1"));
}

#[test]
fn cli_hurwitz_orbit() {
    let out = mukai()
        .args(["hurwitz-orbit", "--rank", "2", "--tuple", "1 2", "--cap", "3", "--orbit-cap", "100"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("truncated") || text.contains("complete"), "{text}");
    assert!(text.lines().count() >= 2);
}
