use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use feeder_core::output::Table;
use tempfile::TempDir;

fn g1_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/g1.json")
}

fn feeder(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_feeder")).args(args).output().expect("binary runs")
}

fn table(out: &Output) -> Table {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    Table::read_from(&out.stdout[..]).unwrap()
}

fn floats(t: &Table, col: &str) -> Vec<f64> {
    t.column(col).unwrap().iter().map(|v| v.parse().unwrap()).collect()
}

fn meta_f64(t: &Table, key: &str) -> f64 {
    t.get_meta(key).unwrap().parse().unwrap()
}

fn with_cost_factor(dir: &TempDir, b: f64) -> PathBuf {
    let text = std::fs::read_to_string(g1_path()).unwrap().replace("\"cost_factor\": 2.5", &format!("\"cost_factor\": {b}"));
    let p = dir.path().join(format!("g1_{b}.json"));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn routes_counts() {
    let g1 = g1_path();
    let t = table(&feeder(&["routes", "--instance", g1.to_str().unwrap()]));
    assert_eq!(t.get_meta("routes"), Some("2"));
    assert_eq!(t.get_meta("variables"), Some("5"));
    assert_eq!(t.column("route").unwrap(), vec!["A>I", "I>A>I"]);
    let again = table(&feeder(&["routes", "--instance", g1.to_str().unwrap()]));
    assert_eq!(t, again);
}

#[test]
fn short_window_has_no_routes() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(g1_path()).unwrap().replace("\"time_window\": 10", "\"time_window\": 4");
    let p = dir.path().join("short.json");
    std::fs::write(&p, text).unwrap();
    let t = table(&feeder(&["routes", "--instance", p.to_str().unwrap()]));
    assert_eq!(t.get_meta("routes"), Some("0"));
}

#[test]
fn solve_feedin_writes_solution_and_checks() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("fi.csv");
    let g1 = g1_path();
    let o = feeder(&["solve", "--instance", g1.to_str().unwrap(), "--kind", "feed-in", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let t = Table::read_from(std::io::BufReader::new(std::fs::File::open(&out).unwrap())).unwrap();
    assert!((meta_f64(&t, "objective") - 20.0).abs() < 1e-9);
    assert_eq!(t.get_meta("status"), Some("optimal"));
    let mut checks = out.into_os_string();
    checks.push(".checks.csv");
    let c = Table::read_from(std::io::BufReader::new(std::fs::File::open(checks).unwrap())).unwrap();
    assert!(c.column("passed").unwrap().iter().all(|&p| p == "true"));
}

#[test]
fn feedout_direct_and_equivalent_agree() {
    let g1 = g1_path();
    let mut objs = Vec::new();
    for kind in ["feed-out", "feed-out-via-equivalence"] {
        let t = table(&feeder(&["solve", "--instance", g1.to_str().unwrap(), "--kind", kind, "--total-supply", "10"]));
        objs.push(meta_f64(&t, "objective"));
    }
    assert!((objs[0] - 20.0).abs() < 1e-9);
    assert!((objs[0] - objs[1]).abs() / objs[0].abs().max(1.0) <= 1e-6);
}

#[test]
fn supply_sweep_on_g1() {
    let g1 = g1_path();
    let t = table(&feeder(&["sweep-s", "--instance", g1.to_str().unwrap(), "--grid", "0,5,10,20", "--workers", "2"]));
    assert_eq!(floats(&t, "objective"), vec![0.0, 10.0, 20.0, 20.0]);
    assert_eq!(floats(&t, "s"), vec![0.0, 5.0, 10.0, 20.0]);
    assert!((meta_f64(&t, "j_max") - 20.0).abs() < 1e-9);
}

#[test]
fn vrp_baseline_below_threshold_earns_nothing() {
    let dir = TempDir::new().unwrap();
    let p = with_cost_factor(&dir, 2.4);
    let t = table(&feeder(&["sweep-s", "--instance", p.to_str().unwrap(), "--grid", "0,10,20", "--vrp-baseline"]));
    assert!(floats(&t, "vrp_objective").iter().all(|&v| v == 0.0));
}

#[test]
fn cost_factor_sweep_on_g1() {
    let g1 = g1_path();
    let t = table(&feeder(&["sweep-b", "--instance", g1.to_str().unwrap(), "--grid", "1.0:3.0:0.5"]));
    let reduced = floats(&t, "reduced");
    assert_eq!(floats(&t, "b"), vec![1.0, 1.5, 2.0, 2.5, 3.0]);
    assert_eq!(reduced[0], 0.0);
    assert!(reduced.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(reduced, vec![0.0, 1.0, 1.0, 2.0, 2.0]);
    assert!(floats(&t, "threshold_A").iter().all(|&b| (b - 2.5).abs() < 1e-12));
}

#[test]
fn infeasible_lp_file_exits_nonzero() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.lp");
    std::fs::write(&p, "Maximize\n obj: x\nSubject To\n c1: x <= 1\n c2: x >= 2\nEnd\n").unwrap();
    let o = feeder(&["solve", "--lp", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let t = Table::read_from(&o.stdout[..]).unwrap();
    assert_eq!(t.get_meta("status"), Some("infeasible"));
}

#[test]
fn dumped_lp_solves_to_the_same_value() {
    let dir = TempDir::new().unwrap();
    let lp = dir.path().join("so.lp");
    let g1 = g1_path();
    let t = table(&feeder(&[
        "solve",
        "--instance",
        g1.to_str().unwrap(),
        "--kind",
        "supply-opt",
        "--total-supply",
        "5",
        "--dump-lp",
        lp.to_str().unwrap(),
    ]));
    let back = table(&feeder(&["solve", "--lp", lp.to_str().unwrap()]));
    assert!((meta_f64(&t, "objective") - 10.0).abs() < 1e-9);
    assert!((meta_f64(&back, "objective") - 10.0).abs() < 1e-9);
}

#[test]
fn gen_is_deterministic_and_verifies() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = feeder(&["gen", "--seed", "11", "--nodes", "5", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    for kind in ["feed-in", "supply-opt", "feed-out", "feed-out-via-equivalence"] {
        let o = feeder(&["verify", "--instance", a.to_str().unwrap(), "--kind", kind]);
        assert_eq!(o.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&o.stdout));
    }
    let t = table(&feeder(&["verify", "--seed", "20", "--count", "4", "--workers", "2"]));
    assert_eq!(t.rows.len(), 4);
    assert_eq!(t.get_meta("max_deviation"), Some("0e0"));
}

#[test]
fn operational_errors_exit_one() {
    let o = feeder(&["routes", "--instance", "/nonexistent/instance.json"]);
    assert_eq!(o.status.code(), Some(1));
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"nodes\": []}").unwrap();
    assert_eq!(feeder(&["solve", "--instance", p.to_str().unwrap()]).status.code(), Some(1));
    let g1 = g1_path();
    assert_eq!(feeder(&["sweep-s", "--instance", g1.to_str().unwrap(), "--grid", "5,1"]).status.code(), Some(1));
    assert_eq!(feeder(&["solve", "--instance", g1.to_str().unwrap(), "--kind", "sideways"]).status.code(), Some(1));
}
