//! Black-box tests of the command-line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use wealthsim::config::OUTPUT_DIR_ENV;

fn wealthsim(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wealthsim"))
        .args(args)
        .env(OUTPUT_DIR_ENV, out_dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn missing_config_exits_4_and_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("no-such-config.json");
    for cmd in ["run", "sweep", "analyze"] {
        let out = wealthsim(&[cmd, arg(&missing)], dir.path());
        assert_eq!(out.status.code(), Some(4), "{cmd}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains("no-such-config.json"), "{cmd}: {stderr}");
    }
}

#[test]
fn zero_round_angle_run_writes_uniform_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "a.json",
        r#"{"model": {"kind": "angle", "omega": 0.5}, "agents": 5, "rounds": 0, "seed": 1}"#,
    );
    let out_dir = dir.path().join("out");
    let out = wealthsim(&["run", arg(&cfg)], &out_dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("snapshots.csv")).unwrap();
    assert_eq!(csv, "round,agent_id,wealth\n0,0,1\n0,1,1\n0,2,1\n0,3,1\n0,4,1\n");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["gini_empirical"], 0.0);
    assert_eq!(report["tail"]["verdict"], "inconclusive");
}

#[test]
fn invalid_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"model": {"kind": "angle", "omega": 0.5}, "agents": 5, "rounds": 1, "seed": 1, "colour": 3}"#,
        r#"{"model": {"kind": "angle", "omega": 1.5}, "agents": 5, "rounds": 1, "seed": 1}"#,
        r#"{"model": {"kind": "angle", "omega": 0.5}, "agents": 1, "rounds": 1, "seed": 1}"#,
        r#"{"model": {"kind": "pairwise", "monopolist_fraction": -0.1}, "agents": 5, "rounds": 1, "seed": 1}"#,
        r#"not json"#,
    ];
    for (k, text) in cases.iter().enumerate() {
        let cfg = write(dir.path(), &format!("bad{k}.json"), text);
        let out = wealthsim(&["run", arg(&cfg)], dir.path());
        assert_eq!(out.status.code(), Some(2), "{text}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let sweep = write(
        dir.path(),
        "sweep.json",
        r#"{"base": {"model": {"kind": "angle", "omega": 0.5}, "agents": 5, "rounds": 1, "seed": 1},
            "variable": "p_m", "values": [0.1]}"#,
    );
    assert_eq!(wealthsim(&["sweep", arg(&sweep)], dir.path()).status.code(), Some(2));
    let good = write(
        dir.path(),
        "good.json",
        r#"{"model": {"kind": "angle", "omega": 0.5}, "agents": 5, "rounds": 1, "seed": 1}"#,
    );
    assert_eq!(wealthsim(&["run", arg(&good), "--threads", "0"], dir.path()).status.code(), Some(2));
}

#[test]
fn config_output_key_wins_over_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("explicit");
    let cfg = write(
        dir.path(),
        "a.json",
        &format!(
            r#"{{"model": {{"kind": "angle", "omega": 0.5}}, "agents": 5, "rounds": 10, "seed": 1, "output": {:?}}}"#,
            target
        ),
    );
    let env_dir = dir.path().join("env");
    let out = wealthsim(&["run", arg(&cfg)], &env_dir);
    assert!(out.status.success());
    assert!(target.join("snapshots.csv").exists());
    assert!(!env_dir.exists());
}

#[test]
fn seed_override_changes_and_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.json",
        r#"{"model": {"kind": "pairwise", "monopolist_fraction": 0.2}, "agents": 50, "rounds": 200, "seed": 1}"#,
    );
    let run = |name: &str, extra: &[&str]| {
        let out_dir = dir.path().join(name);
        let mut args = vec!["run", arg(&cfg)];
        args.extend_from_slice(extra);
        assert!(wealthsim(&args, &out_dir).status.success());
        std::fs::read(out_dir.join("snapshots.csv")).unwrap()
    };
    let base = run("base", &[]);
    let same = run("same", &["--seed", "1"]);
    let other = run("other", &["--seed", "2"]);
    assert_eq!(base, same);
    assert_ne!(base, other);
    // The effective config records the overriding seed.
    let written = std::fs::read_to_string(dir.path().join("other").join("config.json")).unwrap();
    assert!(written.contains("\"seed\": 2"));
}

#[test]
fn analyze_reproduces_the_run_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.json",
        r#"{"model": {"kind": "pairwise", "monopolist_fraction": 0.1}, "agents": 1200, "rounds": 300, "seed": 4, "snapshots": [0, 150, 300]}"#,
    );
    let run_dir = dir.path().join("run");
    assert!(wealthsim(&["run", arg(&cfg)], &run_dir).status.success());
    let snapshot = run_dir.join("snapshots.csv");
    let analyze_dir = dir.path().join("analysis");
    let out = wealthsim(&["analyze", arg(&snapshot), "--out", arg(&analyze_dir)], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let from_run = std::fs::read_to_string(run_dir.join("report.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), from_run);
    assert_eq!(std::fs::read_to_string(analyze_dir.join("report.json")).unwrap(), from_run);
    assert_eq!(
        std::fs::read(analyze_dir.join("kde.csv")).unwrap(),
        std::fs::read(run_dir.join("kde.csv")).unwrap()
    );
}

#[test]
fn analyze_rejects_malformed_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.csv", "round,agent_id,wealth\n0,0,abc\n");
    let out = wealthsim(&["analyze", arg(&bad)], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv"));
}

#[test]
fn single_value_sweep_matches_a_plain_run() {
    let dir = tempfile::tempdir().unwrap();
    let base = r#"{"model": {"kind": "pairwise", "monopolist_fraction": 0.2}, "agents": 300, "rounds": 100, "seed": 9}"#;
    let cfg = write(dir.path(), "run.json", base);
    let sweep = write(
        dir.path(),
        "sweep.json",
        &format!(r#"{{"base": {base}, "variable": "monopolist_fraction", "values": [0.2], "replicas": 1}}"#),
    );
    let run_dir = dir.path().join("run");
    let sweep_dir = dir.path().join("sweep");
    assert!(wealthsim(&["run", arg(&cfg)], &run_dir).status.success());
    assert!(wealthsim(&["sweep", arg(&sweep)], &sweep_dir).status.success());
    let replica = sweep_dir.join("p_m_0.2").join("replica_0");
    for file in ["report.json", "snapshots.csv", "kde.csv", "config.json"] {
        assert_eq!(
            std::fs::read(run_dir.join(file)).unwrap(),
            std::fs::read(replica.join(file)).unwrap(),
            "{file}"
        );
    }
    let table = std::fs::read_to_string(sweep_dir.join("sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
    assert!(table.lines().nth(2).unwrap().starts_with("0.2,mean,"));
}

#[test]
fn monopoly_sweep_writes_densities_and_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = write(
        dir.path(),
        "sweep.json",
        r#"{"base": {"model": {"kind": "pairwise"}, "agents": 400, "rounds": 400, "seed": 3},
            "variable": "p_m", "values": [0, 0.1, 0.2, 0.4], "replicas": 2}"#,
    );
    let out_dir = dir.path().join("out");
    let first = wealthsim(&["sweep", arg(&sweep)], &out_dir);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    for v in ["0", "0.1", "0.2", "0.4"] {
        let kde = std::fs::read_to_string(out_dir.join(format!("kde_p_m_{v}.csv"))).unwrap();
        assert!(kde.starts_with("grid,density\n"));
    }
    let svg = std::fs::read_to_string(out_dir.join("overlay.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 4);
    for label in [">p_m=0<", ">p_m=0.1<", ">p_m=0.2<", ">p_m=0.4<"] {
        assert!(svg.contains(label), "{label}");
    }
    let table = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 4 * 3);

    // Same spec, same bytes.
    let again = dir.path().join("again");
    assert!(wealthsim(&["sweep", arg(&sweep)], &again).status.success());
    assert_eq!(table, std::fs::read_to_string(again.join("sweep.csv")).unwrap());
    assert_eq!(svg, std::fs::read_to_string(again.join("overlay.svg")).unwrap());
}

#[test]
fn plot_is_deterministic_and_rejects_empty_series() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.csv", "grid,density\n0,0\n1,0.5\n2,0.1\n");
    let b = write(dir.path(), "b.csv", "grid,density\n0,0.2\n1,0.2\n2,0.2\n");
    let svg1 = dir.path().join("one.svg");
    let svg2 = dir.path().join("two.svg");
    for svg in [&svg1, &svg2] {
        let out = wealthsim(&["plot", arg(svg), arg(&a), arg(&b), "--label", "p_m=0", "--label", "p_m=0.4"], dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let text = std::fs::read_to_string(&svg1).unwrap();
    assert_eq!(text, std::fs::read_to_string(&svg2).unwrap());
    assert!(text.contains(">p_m=0.4<"));

    let empty = write(dir.path(), "empty.csv", "grid,density\n");
    let out = wealthsim(&["plot", arg(&dir.path().join("e.svg")), arg(&empty)], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = wealthsim(&["plot", arg(&dir.path().join("e.svg"))], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("e.svg").exists());
}
