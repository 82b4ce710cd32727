use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn sigcond(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigcond")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn detect_finds_disconnected_clique() {
    let g = data("disconnected_clique.txt");
    let out = sigcond(&["detect", path(&g), "--seeds", "7", "--method", "pgd", "--sigma", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "5 6 7 8 9\n");
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("size=5") && summary.contains("phi=0"), "{summary}");
}

#[test]
fn detect_auto_sigma_recovers_clique_past_tail_threshold() {
    let g = data("clique_with_tail.txt");
    let out = sigcond(&["detect", path(&g), "--seeds", "0", "--method", "em", "--auto-sigma"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 1 2 3 4\n");
    let summary = String::from_utf8(out.stderr).unwrap();
    let sigma: f64 = summary
        .split_whitespace()
        .find_map(|f| f.strip_prefix("sigma="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(sigma > 3.0 / 23.0, "{summary}");
}

#[test]
fn detect_reads_seeds_from_file() {
    let dir = TempDir::new().unwrap();
    let seeds = write(&dir, "seeds.txt", "6\n8\n");
    let out = sigcond(&["detect", path(&data("disconnected_clique.txt")), "--seeds", path(&seeds), "--method", "yl"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "5 6 7 8 9\n");
}

#[test]
fn exit_codes() {
    let g = data("disconnected_clique.txt");
    assert_eq!(sigcond(&["detect", path(&g), "--seeds", "42"]).status.code(), Some(2));
    assert_eq!(sigcond(&["detect", "/nonexistent/graph.txt", "--seeds", "1"]).status.code(), Some(1));
    assert_eq!(sigcond(&["detect", path(&g), "--seeds", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(sigcond(&["detect", path(&g), "--seeds", "1", "--sigma", "-1"]).status.code(), Some(2));
    assert_eq!(sigcond(&["detect", path(&g), "--seeds", "1", "--method", "ppr", "--auto-sigma"]).status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let isolated = write(&dir, "g.txt", "9 9\n0 1\n");
    assert_eq!(sigcond(&["detect", path(&isolated), "--seeds", "9"]).status.code(), Some(3));
}

#[test]
fn unknown_flag_rejected_before_reading_input() {
    let out = sigcond(&["detect", "/nonexistent/graph.txt", "--seeds", "1", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_lists_flags() {
    let out = sigcond(&["detect", "--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for flag in ["--seeds", "--method", "--sigma", "--auto-sigma", "--limit", "--format", "--config"] {
        assert!(text.contains(flag), "missing {flag}");
    }
    let out = sigcond(&["eval", "--help"]);
    let text = stdout(&out);
    for flag in ["--samples", "--rng-seed", "--out", "--summary", "--workers"] {
        assert!(text.contains(flag), "missing {flag}");
    }
}

#[test]
fn eval_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = data("karate.txt");
    let truth = data("karate_communities.txt");
    let run = |tag: &str| {
        let rows = dir.path().join(format!("{tag}-rows.csv"));
        let summary = dir.path().join(format!("{tag}-summary.csv"));
        let out = sigcond(&[
            "eval",
            path(&g),
            path(&truth),
            "--samples",
            "10",
            "--rng-seed",
            "1",
            "--out",
            path(&rows),
            "--summary",
            path(&summary),
        ]);
        assert!(out.status.success());
        (std::fs::read(rows).unwrap(), std::fs::read(summary).unwrap())
    };
    let (rows, summary) = run("a");
    assert_eq!((rows.clone(), summary.clone()), run("b"));
    assert_eq!(String::from_utf8(rows).unwrap().lines().count(), 11);
    assert!(String::from_utf8(summary).unwrap().starts_with("method,dataset,mean_f1"));
}

#[test]
fn eval_rejects_empty_truth() {
    let dir = TempDir::new().unwrap();
    let truth = write(&dir, "truth.txt", "");
    let out = sigcond(&["eval", path(&data("karate.txt")), path(&truth), "--samples", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_sigma_emits_one_row_per_grid_value() {
    let out = sigcond(&[
        "sweep-sigma",
        path(&data("disconnected_clique.txt")),
        path(&data("disconnected_clique_communities.txt")),
        "--grid",
        "0:0.1:1",
        "--samples",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 11);
    for row in rows {
        assert!(!row.contains("NaN"), "{row}");
    }
}

#[test]
fn sweep_sigma_shows_tail_threshold() {
    let dir = TempDir::new().unwrap();
    let truth = write(&dir, "truth.txt", "0 1 2 3 4\n");
    let out = sigcond(&[
        "sweep-sigma",
        path(&data("clique_with_tail.txt")),
        path(&truth),
        "--method",
        "em",
        "--grid",
        "0.1,0.2",
        "--samples",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let f1: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(f1[1] > f1[0], "{text}");
}

#[test]
fn oracle_examples() {
    let g = data("two_triangles.txt");
    let out = sigcond(&["oracle", path(&g), "--seeds", "0", "--sigma", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0 1 2 3 4 5\n0.00000000000000e0\n");

    let out = sigcond(&["oracle", path(&g), "--seeds", "0", "--scope", "0"]);
    assert_eq!(stdout(&out).lines().next(), Some("0"));

    let dir = TempDir::new().unwrap();
    let edges: String = (0..21).map(|i| format!("{i} {}\n", i + 1)).collect();
    let path22 = write(&dir, "path.txt", &edges);
    let out = sigcond(&["oracle", path(&path22), "--seeds", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_appends_golden_line() {
    let dir = TempDir::new().unwrap();
    let golden = dir.path().join("golden.txt");
    let g = data("two_triangles.txt");
    let out = sigcond(&["oracle", path(&g), "--seeds", "0", "--sigma", "0.5", "--golden", path(&golden)]);
    assert!(out.status.success());
    let expected = std::fs::read_to_string(data("golden/two_triangles.txt")).unwrap();
    assert_eq!(std::fs::read_to_string(golden).unwrap(), expected);
}

#[test]
fn check_reports() {
    let clique = data("clique.txt");
    let out = sigcond(&["check", path(&data("disconnected_clique.txt")), path(&data("disconnected_clique_communities.txt")), "--seeds", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("dense-isolated: yes; recovery: exact (2 iterations)\n"), "{}", stdout(&out));

    let out = sigcond(&["check", path(&data("clique_with_pendant.txt")), path(&clique), "--seeds", "0"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("dense-isolated: no (isolation violated at node 5)"));

    let dir = TempDir::new().unwrap();
    let split = write(&dir, "c.txt", "0 2\n");
    let out = sigcond(&["check", path(&data("disconnected_clique.txt")), path(&split), "--seeds", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = TempDir::new().unwrap();
    let g = data("clique_with_tail.txt");
    let config = write(&dir, "sigcond.conf", "# defaults\nmethod = em\nsigma = 0.2\n");
    let run = |extra: &[&str]| {
        let mut args = vec!["--config", path(&config), "detect", path(&g), "--seeds", "0"];
        args.extend_from_slice(extra);
        let out = sigcond(&args);
        assert!(out.status.success());
        String::from_utf8(out.stderr).unwrap()
    };
    let from_file = run(&[]);
    assert!(from_file.contains("method=em ") && from_file.contains("sigma=0.2 "), "{from_file}");
    let overridden = run(&["--sigma", "0"]);
    assert!(overridden.contains("method=em ") && overridden.contains("sigma=0 "), "{overridden}");

    let bad = write(&dir, "bad.conf", "no equals sign\n");
    let out = sigcond(&["--config", path(&bad), "detect", path(&g), "--seeds", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
