use std::path::Path;
use std::process::{Command, Output};

const GOLDEN_HEADER: &str = "scenario_id,seed,strategy,policy,query_enabled,cache_fraction,flood_events,flood_packets,interest_tx,retransmissions,unsatisfied,avg_response_time_ms";

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccn-qsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scenario_file() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios/table1.toml")
        .display()
        .to_string()
}

#[test]
fn header_is_stable() {
    assert_eq!(ccn_qsim::sim::CSV_HEADER.join(","), GOLDEN_HEADER);
    let out = cli(&["run", "--duration", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().next(), Some(GOLDEN_HEADER));
}

#[test]
fn run_is_repeatable_and_appends() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let csv_arg = csv.to_str().unwrap();
    let scenario = scenario_file();
    let args = ["run", "--scenario", &scenario, "--seed", "7", "--duration", "2", "--output", csv_arg];
    let first = cli(&args);
    let second = cli(&args);
    assert!(first.status.success(), "{}", stderr(&first));
    assert_eq!(stdout(&first), stdout(&second));

    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], GOLDEN_HEADER);
    assert_eq!(lines[1], lines[2]);
    assert_eq!(stdout(&first).lines().nth(1), Some(lines[1]));
    assert!(lines[1].contains(",7,smart-flooding,lru,true,0.400,"));
}

#[test]
fn invalid_scenario_exits_one_naming_the_field() {
    let out = cli(&["run", "--cache-fraction", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cache_fraction"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "cache_policy = \"lru\"\nwarp_factor = 9\n").unwrap();
    let out = cli(&["run", "--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("warp_factor"), "{}", stderr(&out));
}

#[test]
fn io_failures_exit_two() {
    let out = cli(&["run", "--scenario", "/nonexistent/table1.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cli(&["run", "--duration", "1", "--output", "/nonexistent/dir/out.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = cli(&["validate-topology", "/nonexistent.topo"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn baseline_smoke_run() {
    let out = cli(&["run", "--query", "off", "--strategy", "smart-flooding", "--duration", "5"]);
    assert!(out.status.success());
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    let fields: Vec<_> = row.split(',').collect();
    assert_eq!(fields.len(), 12);
    assert_eq!(&fields[2..5], ["smart-flooding", "lru", "false"]);
}

#[test]
fn sweep_grid_shape_and_order() {
    let out = cli(&["sweep", "--duration", "1", "--seeds", "3,1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 4 * 3 * 2 * 2);
    let keys: Vec<(String, String, String, String)> = rows
        .iter()
        .map(|r| (r[5].clone(), r[3].clone(), r[4].clone(), r[1].clone()))
        .collect();
    assert_eq!(keys[0], ("0.400".into(), "lru".into(), "false".into(), "3".into()));
    assert_eq!(keys[1], ("0.400".into(), "lru".into(), "false".into(), "1".into()));
    assert_eq!(keys[2], ("0.400".into(), "lru".into(), "true".into(), "3".into()));
    assert_eq!(keys[4], ("0.400".into(), "lfu".into(), "false".into(), "3".into()));
    assert_eq!(keys.last().unwrap().0, "0.700");
}

#[test]
fn sweep_flushes_rows_before_invalid_cell() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let out = cli(&[
        "sweep",
        "--duration",
        "1",
        "--seeds",
        "1",
        "--fractions",
        "0.4,1.5",
        "--policies",
        "lru",
        "--modes",
        "off",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cache_fraction"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn empty_seed_list_exits_one() {
    let out = cli(&["sweep", "--seeds", ""]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_bundled_topology() {
    let topo = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/abilene.topo");
    let out = cli(&["validate-topology", topo.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("12 nodes"));
}

#[test]
fn trace_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.txt");
    let out = cli(&["run", "--duration", "0.5", "--trace", trace.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.lines().any(|l| l.contains(" app_interest /")));
}
