use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multiphoton"))
        .args(args)
        .env("MULTIPHOTON_SEED", "42")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn exact_spot_value() {
    let out = stdout(&["moments", "--mean", "-N", "7", "-k", "2", "--gamma", "1", "--filter", "1", "--exact"]);
    assert!(out.contains("554121805078044107/325472664207527424"), "{out}");
    assert!(out.contains("# moments.n: 7"));
}

#[test]
fn unfiltered_mean_table() {
    let out = stdout(&["table", "--unfiltered-means", "--max-N", "10"]);
    let rows = rows(&out);
    assert_eq!(rows.len(), 55);
    let last = rows.last().unwrap();
    assert_eq!(last[..3], ["10", "10", "7381/2520"]);
}

#[test]
fn json_output_parses() {
    let out = stdout(&["counting", "-N", "5", "--filter", "1", "--exact", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[2]["exact"], "5/16");
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["simulate", "-N", "3", "--filter", "1", "--trajectories", "5000"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let a = run(&["simulate", "--trajectories", "5000", "--seed", "1"]).stdout;
    let b = run(&["simulate", "--trajectories", "5000", "--seed", "2"]).stdout;
    assert_ne!(a, b);
}

#[test]
fn simulated_counts_match_expectation() {
    let out = stdout(&["simulate", "-N", "4", "--filter", "2", "--trajectories", "50000"]);
    let rows = rows(&out);
    assert_eq!(rows.len(), 5);
    for row in rows {
        let z: f64 = row[3].parse().unwrap();
        assert!(z < 4.0, "{row:?}");
    }
}

#[test]
fn invalid_input_exits_with_usage_code() {
    for args in [
        &["efficiency", "--from", "1", "--to", "0"][..],
        &["moments", "-N", "0"],
        &["moments", "--gamma", "-1", "--filter", "1"],
        &["counting", "-N", "2", "--window", "3", "--exact"],
        &["table"],
        &["thermal", "--theta=-1"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("multiphoton-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("wtd.csv");
    let args = ["wtd", "--filter", "1", "--points", "11"];
    let printed = stdout(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["-o", path.to_str().unwrap()]);
    assert!(stdout(&with_file).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn thermal_spectrum_is_symmetric_on_a_signed_grid() {
    let out = stdout(&["thermal", "--filter", "0.5", "--quantity", "spectrum", "--from", "-5", "--to", "5", "--points", "3"]);
    let rows = rows(&out);
    assert_eq!(rows[0][0], "-5");
    assert_eq!(rows[0][1], rows[2][1]);
}
