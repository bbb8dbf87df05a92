use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn smtwt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smtwt"))
        .args(args)
        .current_dir(dir)
        .env_remove("SMTWT_DATA_DIR")
        .output()
        .expect("binary runs")
}

fn generate_grid(dir: &Path, n: &str, seed: &str) {
    let out = smtwt(
        &["generate", "--n", n, "--grid", "--seed", seed, "--out", "set.txt", "--meta", "meta.csv"],
        dir,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn generate_is_deterministic_and_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let a = smtwt(&["generate", "--n", "8", "--rdd", "0.6", "--tf", "0.4", "--count", "4", "--seed", "11"], dir.path());
    let b = smtwt(&["generate", "--n", "8", "--rdd", "0.6", "--tf", "0.4", "--count", "4", "--seed", "11"], dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let set = smtwt::parse_orlib::<i64>(&String::from_utf8(a.stdout).unwrap(), 8).unwrap();
    assert_eq!(set.len(), 4);
}

#[test]
fn bench_output_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    generate_grid(dir.path(), "9", "5");
    fs::write(dir.path().join("best.txt"), "1\n2\n3\n4\n5\n").unwrap();
    let run = |threads: &str, out: &str| {
        let o = smtwt(
            &[
                "--threads", threads, "bench", "--set", "set.txt", "--n", "9", "--meta", "meta.csv", "--best",
                "best.txt", "--indices", "1-5", "--restarts", "12", "--seed", "3", "--out", out, "--runs",
                &format!("runs-{out}"), "--verify",
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        (
            fs::read(dir.path().join(out)).unwrap(),
            fs::read(dir.path().join(format!("runs-{out}"))).unwrap(),
        )
    };
    let a = run("1", "a.csv");
    let b = run("1", "b.csv");
    let c = run("3", "c.csv");
    assert_eq!(a, b);
    assert_eq!(a, c);
    let stats = smtwt::report::read_stats_csv::<i64>(&String::from_utf8(a.0).unwrap()).unwrap();
    assert_eq!(stats.len(), 5);
    assert!(stats.iter().all(|s| s.best_known.is_some() && s.rdd == Some(0.2)));
}

#[test]
fn zero_restarts_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    generate_grid(dir.path(), "6", "1");
    let out = smtwt(&["bench", "--set", "set.txt", "--n", "6", "--restarts", "0"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_algorithm_and_unknown_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    generate_grid(dir.path(), "6", "1");
    let out = smtwt(&["solve", "--set", "set.txt", "--n", "6", "--algo", "vnd:EX,EX"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = smtwt(&["solve", "--bogus"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_files_are_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = smtwt(&["solve", "--set", "absent.txt", "--n", "5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    fs::write(dir.path().join("broken.txt"), "1 2 x\n").unwrap();
    let out = smtwt(&["solve", "--set", "broken.txt", "--n", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn data_dir_lookup() {
    let dir = tempfile::tempdir().unwrap();
    generate_grid(dir.path(), "7", "2");
    fs::rename(dir.path().join("set.txt"), dir.path().join("wt7.txt")).unwrap();
    let elsewhere = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_smtwt"))
        .args(["solve", "--set", "wt7", "--index", "3", "--restarts", "4"])
        .current_dir(elsewhere.path())
        .env("SMTWT_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("instance wt7 #3"));
}

#[test]
fn empty_report_is_an_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = smtwt(&["report", "--style", "table4", "--format", "csv", "--inputs"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1, "{text}");
}

#[test]
fn optima_and_entropy_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    // Loose due dates: every order is optimal.
    fs::write(dir.path().join("flat4.txt"), "1 2 3 4\n1 1 1 1\n50 50 50 50\n").unwrap();
    let out = smtwt(
        &["optima", "--set", "flat4.txt", "--optimum", "0", "--list", "all.txt", "--out", "opt.csv"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let list = fs::read_to_string(dir.path().join("all.txt")).unwrap();
    assert_eq!(list.lines().count(), 24);
    let summary = smtwt::report::read_optima_csv::<i64>(&fs::read_to_string(dir.path().join("opt.csv")).unwrap()).unwrap();
    assert_eq!(summary[0].count, 24);
    assert!((summary[0].entropy.unwrap() - 1.0).abs() < 1e-12);

    let out = smtwt(&["entropy", "--pool", "all.txt"], dir.path());
    let h: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((h - 1.0).abs() < 1e-12);

    let out = smtwt(&["report", "--style", "table7", "--inputs", "opt.csv"], dir.path());
    assert!(String::from_utf8(out.stdout).unwrap().contains("flat4 #1"));
}
