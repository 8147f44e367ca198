//! End-to-end tests driving the compiled binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hypermoment::moments::moment_table;
use hypermoment::multiindex::MultiIndex;
use hypermoment::{CatalogEntry, Hypergroup, MomentSeed, Scalar};

const EXAMPLE_SEED: &str = r#"{"rank": 2, "order": 2, "values": {"[0,0]": "1/2", "[1,0]": "1", "[0,1]": "2/3", "[1,1]": "1/5", "[2,0]": "0", "[0,2]": "-1"}}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypermoment"))
        .args(args)
        .env_remove("HYPERMOMENT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn run_with_cache(args: &[&str], cache_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypermoment"))
        .args(args)
        .env("HYPERMOMENT_CACHE_DIR", cache_dir)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn catalog_lists_all_entries() {
    let text = run(&["catalog"]);
    assert_eq!(code(&text), 0);
    for name in ["chebyshev1", "chebyshev2", "legendre"] {
        assert!(stdout(&text).contains(name), "missing {name}");
    }
    let json = run(&["catalog", "--format", "json"]);
    let listing: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(listing.as_array().unwrap().len(), 3);
    assert_eq!(listing[0]["name"], "chebyshev1");
}

#[test]
fn linearize_matches_documented_examples() {
    let out = run(&["linearize", "--hypergroup", "chebyshev1", "--n", "1", "--m", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{\"atoms\":{\"0\":\"1/2\",\"2\":\"1/2\"}}\n");

    let out = run(&["linearize", "--hypergroup", "chebyshev1", "--n", "4", "--m", "0"]);
    assert_eq!(stdout(&out), "{\"atoms\":{\"4\":\"1\"}}\n");

    let out = run(&["linearize", "--hypergroup", "legendre", "--n", "1", "--m", "1"]);
    assert_eq!(stdout(&out), "{\"atoms\":{\"0\":\"1/3\",\"2\":\"2/3\"}}\n");
}

#[test]
fn linearize_rejects_unknown_catalog_name() {
    let out = run(&["linearize", "--hypergroup", "hermite", "--n", "1", "--m", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown catalog entry"));
}

#[test]
fn linearize_reports_negative_linearization() {
    // Passes every sign and sum constraint but is not a hypergroup.
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"n_max": 4,
            "a": ["0", "9/10", "1/2", "9/10", "1/2"],
            "b": ["0", "0", "0", "0", "0"],
            "c": ["1", "1/10", "1/2", "1/10", "1/2"]}"#,
    )
    .unwrap();
    let out = run(&["linearize", "--spec", spec.to_str().unwrap(), "--n", "2", "--m", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("negative linearization"));
}

#[test]
fn linearize_rejects_invalid_spec() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"n_max": 1, "a": ["0", "1/5"], "b": ["0", "2/5"], "c": ["1", "1/5"]}"#,
    )
    .unwrap();
    let out = run(&["linearize", "--spec", spec.to_str().unwrap(), "--n", "1", "--m", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("sum != 1 at n=1"));
}

#[test]
fn convolve_point_masses() {
    let dir = tempfile::tempdir().unwrap();
    let mu = dir.path().join("mu.json");
    fs::write(&mu, r#"{"atoms":{"1":"1"}}"#).unwrap();
    let out = run(&[
        "convolve",
        "--hypergroup",
        "chebyshev1",
        "--mu",
        mu.to_str().unwrap(),
        "--nu",
        mu.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "{\"atoms\":{\"0\":\"1/2\",\"2\":\"1/2\"}}\n");
}

#[test]
fn moments_example_seed_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let seed = dir.path().join("seed.json");
    fs::write(&seed, EXAMPLE_SEED).unwrap();
    let args = [
        "moments",
        "--hypergroup",
        "chebyshev1",
        "--seed",
        seed.to_str().unwrap(),
        "--nmax",
        "5",
    ];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    let table: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    // phi_{0,0}(3) = T_3(1/2) = -1
    let hit = table["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|row| row["alpha"] == serde_json::json!([0, 0]) && row["n"] == 3)
        .expect("row present");
    assert_eq!(hit["value"], "-1");

    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "output must be byte-identical");
}

#[test]
fn moments_zero_nmax_is_the_identity_column() {
    let dir = tempfile::tempdir().unwrap();
    let seed = dir.path().join("seed.json");
    fs::write(&seed, EXAMPLE_SEED).unwrap();
    let out = run(&[
        "moments",
        "--hypergroup",
        "chebyshev1",
        "--seed",
        seed.to_str().unwrap(),
        "--nmax",
        "0",
    ]);
    let table: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for row in table["rows"].as_array().unwrap() {
        let expected = if row["alpha"] == serde_json::json!([0, 0]) {
            "1"
        } else {
            "0"
        };
        assert_eq!(row["value"], expected, "row {row}");
    }
}

#[test]
fn moments_rejects_incomplete_seed() {
    let dir = tempfile::tempdir().unwrap();
    let seed = dir.path().join("seed.json");
    fs::write(&seed, r#"{"rank": 2, "order": 1, "values": {"[0,0]": "1/2"}}"#).unwrap();
    let out = run(&[
        "moments",
        "--hypergroup",
        "chebyshev1",
        "--seed",
        seed.to_str().unwrap(),
        "--nmax",
        "3",
    ]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("incomplete seed"), "stderr: {err}");
    assert!(err.contains("[1,0]"), "stderr: {err}");
}

#[test]
fn moments_csv_and_approx() {
    let dir = tempfile::tempdir().unwrap();
    let seed = dir.path().join("seed.json");
    fs::write(&seed, EXAMPLE_SEED).unwrap();
    let out = run(&[
        "moments",
        "--hypergroup",
        "chebyshev1",
        "--seed",
        seed.to_str().unwrap(),
        "--nmax",
        "2",
        "--format",
        "csv",
        "--approx",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,n,value,approx"));
    assert!(text.contains("\"[0,0]\",1,1/2,0.5"), "got: {text}");
}

#[test]
fn moments_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let seed = dir.path().join("seed.json");
    let out_path = dir.path().join("table.json");
    fs::write(&seed, EXAMPLE_SEED).unwrap();
    let out = run(&[
        "moments",
        "--hypergroup",
        "chebyshev1",
        "--seed",
        seed.to_str().unwrap(),
        "--nmax",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let written = fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with(r#"{"rank":2,"#));
}

#[test]
fn verify_generated_table_passes() {
    let dir = tempfile::tempdir().unwrap();
    let seed = dir.path().join("seed.json");
    fs::write(&seed, EXAMPLE_SEED).unwrap();
    let out = run(&[
        "verify",
        "--hypergroup",
        "chebyshev1",
        "--seed",
        seed.to_str().unwrap(),
        "--nmax",
        "5",
        "--mmax",
        "5",
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["checked"], 6 * 36);
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_perturbed_table_fails_with_exit_one() {
    // Build the table through the library, bump one interior value, then
    // feed it back through the CLI.
    let dir = tempfile::tempdir().unwrap();
    let h = Hypergroup::from_catalog(CatalogEntry::Chebyshev1);
    let seed: MomentSeed = serde_json::from_str(EXAMPLE_SEED).unwrap();
    let mut table = moment_table(&h, &seed, 10).unwrap();
    let alpha = MultiIndex::new(vec![1, 0]);
    let bumped = table.value(&alpha, 4).unwrap() + &Scalar::one();
    table.set_value(&alpha, 4, bumped).unwrap();
    let table_path = dir.path().join("table.json");
    fs::write(&table_path, serde_json::to_string(&table).unwrap()).unwrap();

    let out = run(&[
        "verify",
        "--hypergroup",
        "chebyshev1",
        "--table",
        table_path.to_str().unwrap(),
        "--nmax",
        "5",
        "--mmax",
        "5",
    ]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn verify_range_error_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let h = Hypergroup::from_catalog(CatalogEntry::Chebyshev1);
    let seed: MomentSeed = serde_json::from_str(EXAMPLE_SEED).unwrap();
    let table = moment_table(&h, &seed, 4).unwrap();
    let table_path = dir.path().join("table.json");
    fs::write(&table_path, serde_json::to_string(&table).unwrap()).unwrap();

    let out = run(&[
        "verify",
        "--hypergroup",
        "chebyshev1",
        "--table",
        table_path.to_str().unwrap(),
        "--nmax",
        "3",
        "--mmax",
        "3",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("table range exceeded"));
}

#[test]
fn verify_requires_exactly_one_input() {
    let out = run(&["verify", "--hypergroup", "chebyshev1", "--nmax", "2", "--mmax", "2"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn cache_dir_persists_and_tolerates_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let args = ["linearize", "--hypergroup", "chebyshev2", "--n", "3", "--m", "2"];

    let first = run_with_cache(&args, &cache);
    assert_eq!(code(&first), 0);
    let cache_file = cache.join("chebyshev2.json");
    assert!(cache_file.exists(), "cache file should be written");

    let second = run_with_cache(&args, &cache);
    assert_eq!(first.stdout, second.stdout, "cached run must match");

    fs::write(&cache_file, "not json at all").unwrap();
    let third = run_with_cache(&args, &cache);
    assert_eq!(code(&third), 0, "corrupt cache must not break the run");
    assert_eq!(first.stdout, third.stdout);

    // poisoned-but-well-formed entries are rejected on load
    fs::write(
        &cache_file,
        r#"{"entries":[{"n":3,"m":2,"measure":{"atoms":{"1":"7"}}}]}"#,
    )
    .unwrap();
    let fourth = run_with_cache(&args, &cache);
    assert_eq!(code(&fourth), 0);
    assert_eq!(first.stdout, fourth.stdout, "invalid cache entry must be ignored");
}

#[test]
fn bell_check_passes() {
    let out = run(&["bell-check"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("PASS"));
    assert!(!text.contains("FAIL"));

    let json = run(&["bell-check", "--format", "json"]);
    assert_eq!(code(&json), 0);
    let listing: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert!(listing.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn bell_check_accepts_a_custom_shape() {
    let out = run(&["bell-check", "--rank", "2", "--order", "2"]);
    assert_eq!(code(&out), 0);
    assert!(!stdout(&out).contains("FAIL"));

    let out = run(&["bell-check", "--order", "20"]);
    assert_eq!(code(&out), 2);
}
