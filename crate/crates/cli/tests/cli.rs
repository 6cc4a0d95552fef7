use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qgcl::report::{read_runs, Mode, RunRow, CALL_HEADER, RUN_HEADER};
use qgcl::sweep::{mean, sample_std, summary_header};
use qgcl_core::dimacs::{parse_dimacs, write_dimacs};
use qgcl_core::families::random_ksat;
use rand::SeedableRng;

fn qgcl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgcl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Random 3-SAT near the threshold, hard enough to reach several call
/// points at a short interval.
fn write_random(dir: &Path, n: usize, seed: u64) -> PathBuf {
    let m = (n as f64 * 4.26).round() as usize;
    let cnf = random_ksat(n, m, 3, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    let path = dir.join(format!("rand_{n}_{seed}.cnf"));
    std::fs::write(&path, write_dimacs(&cnf)).unwrap();
    path
}

fn stats_row(o: &Output) -> String {
    stdout(o)
        .lines()
        .filter_map(|l| l.strip_prefix("c "))
        .nth(1)
        .expect("row after header")
        .to_owned()
}

fn without_wall_time(row: &str) -> Vec<String> {
    let mut cells: Vec<String> = row.split(',').map(str::to_owned).collect();
    cells.remove(11);
    cells
}

#[test]
fn gen_writes_consistent_files_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let (a, meta) = (dir.path().join("a.cnf"), dir.path().join("a.json"));
    let o = qgcl(&["gen", "--width", "4", "--cycles", "1", "--relation", "neq", "--out", p(&a), "--meta", p(&meta)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let cnf = parse_dimacs(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&meta).unwrap()).unwrap();
    assert_eq!(json["num_vars"], cnf.num_vars());
    assert_eq!(json["num_clauses"], cnf.num_clauses());
    assert_eq!(json["key_a"]["len"], 4);
    assert_eq!(stdout(&o).trim(), format!("n={} m={}", cnf.num_vars(), cnf.num_clauses()));

    let gen8 = |out: &Path| {
        let o = qgcl(&["gen", "--width", "8", "--cycles", "2", "--subst", "--out", p(out)]);
        assert!(o.status.success());
        std::fs::read(out).unwrap()
    };
    assert_eq!(gen8(&dir.path().join("b1.cnf")), gen8(&dir.path().join("b2.cnf")));
}

#[test]
fn gen_sizes_grow_with_cycles() {
    let mut last = (0, 0);
    for t in 1..=4 {
        let o = qgcl(&["gen", "--width", "6", "--cycles", &t.to_string()]);
        assert!(o.status.success());
        let cnf = parse_dimacs(&stdout(&o)).unwrap();
        let size = (cnf.num_vars(), cnf.num_clauses());
        assert!(size.0 > last.0 && size.1 > last.1, "{size:?} after {last:?}");
        last = size;
    }
}

#[test]
fn gen_rejects_bad_flags() {
    let o = qgcl(&["gen", "--width", "4", "--cycles", "2", "--check-cycle", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = qgcl(&["gen", "--width", "4", "--cycles", "1", "--plaintext", "10x1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = qgcl(&["gen", "--width", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn degenerate_hybrid_matches_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_random(dir.path(), 80, 5);
    let h = qgcl(&["solve", p(&f), "--mode", "qgcl", "--max-calls", "0", "--seed", "7"]);
    let b = qgcl(&["solve", p(&f), "--mode", "cdcl", "--seed", "7"]);
    assert_eq!(h.status.code(), b.status.code());
    assert!(matches!(b.status.code(), Some(10) | Some(20)));
    let (mut hr, br) = (without_wall_time(&stats_row(&h)), without_wall_time(&stats_row(&b)));
    assert_eq!(hr[1], "qgcl");
    hr[1] = "cdcl".into();
    assert_eq!(hr, br);
}

#[test]
fn unsat_pair_exits_20() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("pair.cnf");
    std::fs::write(&f, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    let o = qgcl(&["solve", p(&f), "--mode", "qgcl"]);
    assert_eq!(o.status.code(), Some(20));
    let out = stdout(&o);
    assert!(out.starts_with("s UNSATISFIABLE\n"));
    assert!(!out.lines().any(|l| l.starts_with("v ")));
    assert!(stats_row(&o).ends_with(",UNSAT"));
}

#[test]
fn sat_model_line_satisfies_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("small.cnf");
    std::fs::write(&f, "c tiny\np cnf 3 3\n1 2 0\n-1 3 0\n-2 -3 0\n").unwrap();
    let o = qgcl(&["solve", p(&f)]);
    assert_eq!(o.status.code(), Some(10));
    let v = stdout(&o).lines().find(|l| l.starts_with("v ")).unwrap().to_owned();
    let lits: Vec<i64> = v[2..].split_whitespace().map(|t| t.parse().unwrap()).collect();
    assert_eq!(lits.last(), Some(&0));
    let model: Vec<bool> = lits[..3].iter().map(|&l| l > 0).collect();
    let cnf = parse_dimacs(&std::fs::read_to_string(&f).unwrap()).unwrap();
    assert!(cnf.eval(&model).unwrap().satisfied());
}

#[test]
fn repeated_runs_and_csv_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_random(dir.path(), 90, 2);
    let stats = dir.path().join("stats.csv");
    let calls = [dir.path().join("c1.csv"), dir.path().join("c2.csv")];
    for c in &calls {
        let o = qgcl(&[
            "solve", p(&f), "--mode", "qgcl", "--seed", "3", "--interval", "20",
            "--stats-out", p(&stats), "--calls-out", p(c),
        ]);
        assert!(matches!(o.status.code(), Some(10) | Some(20)));
    }
    let text = std::fs::read_to_string(&stats).unwrap();
    assert_eq!(text.lines().next().unwrap(), RUN_HEADER);
    let rows = read_runs(&stats).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].same_counters(&rows[1]));
    assert_eq!(rows[0].mode, Mode::Qgcl);

    let c1 = std::fs::read_to_string(&calls[0]).unwrap();
    assert_eq!(c1, std::fs::read_to_string(&calls[1]).unwrap());
    assert_eq!(c1.lines().next().unwrap(), CALL_HEADER);
    assert_eq!(c1.lines().count() as u64 - 1, rows[0].grover_calls);
    assert!(rows[0].grover_calls > 0, "interval 20 should reach a call point");
}

#[test]
fn solve_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = qgcl(&["solve", p(&dir.path().join("missing.cnf"))]);
    assert_eq!(o.status.code(), Some(1));
    let bad = dir.path().join("bad.cnf");
    std::fs::write(&bad, "p cnf 2 1\n1 x 0\n").unwrap();
    assert_eq!(qgcl(&["solve", p(&bad)]).status.code(), Some(1));
    let good = dir.path().join("good.cnf");
    std::fs::write(&good, "p cnf 1 1\n1 0\n").unwrap();
    assert_eq!(qgcl(&["solve", p(&good), "--strategy", "dfs"]).status.code(), Some(1));
    assert_eq!(qgcl(&["solve", p(&good), "--mode", "cdcl", "--strategy", "dfs"]).status.code(), Some(1));
}

fn summary(dir: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(dir.join("summary.csv")).unwrap();
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>().join(","), summary_header());
    r.records().map(Result::unwrap).collect()
}

fn conflicts(rows: &[RunRow]) -> Vec<f64> {
    rows.iter().map(|r| r.conflicts as f64).collect()
}

#[test]
fn budget_sweep_layout_and_recomputed_summary() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_random(dir.path(), 70, 4);
    let out = dir.path().join("sweep");
    let o = qgcl(&[
        "sweep", p(&f), "--param", "budget", "--values", "5,10,15,20,25", "--runs", "3",
        "--interval", "25", "--out-dir", p(&out), "--gnuplot",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let base = read_runs(&out.join("runs_cdcl.csv")).unwrap();
    assert_eq!(base.len(), 3);
    assert_eq!(base.iter().map(|r| r.seed).collect::<Vec<_>>(), [1, 2, 3]);
    let recs = summary(&out);
    assert_eq!(recs.len(), 6);
    assert_eq!((&recs[0][1], &recs[0][2]), ("", "cdcl"));
    assert_eq!(recs[0][6].parse::<f64>().unwrap(), mean(&conflicts(&base)));
    assert_eq!(recs[0][7].parse::<f64>().unwrap(), sample_std(&conflicts(&base)).unwrap());
    for (rec, value) in recs[1..].iter().zip(["5", "10", "15", "20", "25"]) {
        let rows = read_runs(&out.join(format!("runs_qgcl_budget_{value}.csv"))).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.mode == Mode::Qgcl));
        assert_eq!((&rec[1], &rec[2], &rec[3]), (value, "qgcl", "3"));
        assert_eq!(rec[6].parse::<f64>().unwrap(), mean(&conflicts(&rows)));
        // verdicts agree with the baseline
        assert!(rows.iter().zip(&base).all(|(q, b)| q.result == b.result));
    }
    assert!(std::fs::read_to_string(out.join("summary.dat")).unwrap().contains("# mode qgcl"));
}

#[test]
fn single_run_sweep_has_empty_std() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cyc");
    let o = qgcl(&[
        "sweep", "--param", "cycles", "--values", "1,2", "--runs", "1", "--width", "4",
        "--out-dir", p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let recs = summary(&out);
    assert_eq!(recs.len(), 4);
    assert!(recs.iter().all(|r| r[7].is_empty()));
    assert!(out.join("sca_w4_t2.cnf").exists());
}

#[test]
fn sweep_rejects_missing_input_and_bad_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = qgcl(&["sweep", "--param", "budget", "--values", "5", "--out-dir", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let f = write_random(dir.path(), 20, 1);
    let o = qgcl(&["sweep", p(&f), "--param", "budget", "--values", "x", "--runs", "1", "--out-dir", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    let o = qgcl(&["sweep", p(&f), "--param", "budget", "--out-dir", p(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
}
