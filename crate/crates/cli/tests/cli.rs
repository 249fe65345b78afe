//! End-to-end checks of the command-line surface: every subcommand, the
//! data formats, seeded reproducibility, and the failure paths.

use std::path::Path;
use std::process::{Command, Output};

fn submod(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_submod"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("missing {key}= in output:\n{text}"))
        .to_string()
}

#[test]
fn gen_solve_greedi_baseline_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = submod(
        &[
            "gen",
            "--kind",
            "gaussian_mixture",
            "--params",
            "clusters=3,n=80,d=2,spread=0.3",
            "--out",
            "pts.csv",
            "--seed",
            "4",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");

    let solve = submod(
        &[
            "solve", "--objective", "exemplar", "--data", "pts.csv", "--k", "4",
        ],
        dir.path(),
    );
    assert!(solve.status.success());
    let solve_text = stdout(&solve);
    assert_eq!(field(&solve_text, "elements").split(',').count(), 4);
    let central: f64 = field(&solve_text, "value").parse().unwrap();

    let dist = submod(
        &[
            "greedi",
            "--objective",
            "exemplar",
            "--data",
            "pts.csv",
            "--k",
            "4",
            "--machines",
            "4",
            "--seed",
            "1",
        ],
        dir.path(),
    );
    assert!(dist.status.success());
    let dist_text = stdout(&dist);
    let dist_value: f64 = field(&dist_text, "global_value").parse().unwrap();
    assert!(dist_value > 0.9 * central, "distributed {dist_value} vs centralized {central}");
    let shipped: usize = field(&dist_text, "shipped_elements").parse().unwrap();
    assert!(shipped <= 4 * 4);

    for kind in ["random_random", "random_greedy", "greedy_merge", "greedy_max"] {
        let b = submod(
            &[
                "baseline", "--kind", kind, "--objective", "exemplar", "--data", "pts.csv",
                "--k", "4", "--machines", "2", "--seed", "3",
            ],
            dir.path(),
        );
        assert!(b.status.success(), "{kind} failed: {b:?}");
    }
}

#[test]
fn greedi_is_seed_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    submod(
        &[
            "gen", "--kind", "gaussian_mixture", "--params", "clusters=2,n=60,d=2,spread=0.4",
            "--out", "pts.csv", "--seed", "9",
        ],
        dir.path(),
    );
    let args = [
        "greedi", "--objective", "exemplar", "--data", "pts.csv", "--k", "3", "--machines",
        "3", "--seed", "17", "--trace",
    ];
    let a = submod(&args, dir.path());
    let b = submod(&args, dir.path());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn decomposable_mode_runs() {
    let dir = tempfile::tempdir().unwrap();
    submod(
        &[
            "gen", "--kind", "gaussian_mixture", "--params", "clusters=2,n=60,d=2,spread=0.4",
            "--out", "pts.csv", "--seed", "2",
        ],
        dir.path(),
    );
    let out = submod(
        &[
            "greedi", "--objective", "exemplar", "--data", "pts.csv", "--k", "3",
            "--machines", "3", "--decomposable", "--seed", "5",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let v: f64 = field(&stdout(&out), "global_value").parse().unwrap();
    assert!(v > 0.0);
}

#[test]
fn cut_pipeline_with_randomgreedy() {
    let dir = tempfile::tempdir().unwrap();
    submod(
        &[
            "gen", "--kind", "random_graph", "--params", "n=60,p=0.1", "--out", "g.txt",
            "--seed", "6",
        ],
        dir.path(),
    );
    let out = submod(
        &[
            "greedi", "--objective", "cut", "--data", "g.txt", "--k", "5", "--machines", "3",
            "--engine", "randomgreedy", "--seed", "11",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn knapsack_constraint_and_costbenefit() {
    let dir = tempfile::tempdir().unwrap();
    submod(
        &[
            "gen", "--kind", "gaussian_mixture", "--params", "clusters=2,n=30,d=2,spread=0.4",
            "--out", "pts.csv", "--seed", "8",
        ],
        dir.path(),
    );
    std::fs::write(
        dir.path().join("costs.txt"),
        (0..30).map(|i| format!("{}\n", 1.0 + (i % 3) as f64)).collect::<String>(),
    )
    .unwrap();
    let out = submod(
        &[
            "solve", "--objective", "exemplar", "--data", "pts.csv", "--k", "5",
            "--engine", "costbenefit", "--constraint", "knapsack:6:costs.txt",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn sweep_writes_stable_csv() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("exp.cfg"),
        "[objective]\nkind = exemplar\n\n[data]\ngenerator = gaussian_mixture\nclusters = 2\nn = 50\nd = 2\nspread = 0.3\n\n[run]\nengine = lazy\nbaselines = all\nseeds = 1,2\n\n[sweep]\npoint = 2 3\n",
    )
    .unwrap();
    let run = |workers: &str| {
        let out = submod(
            &[
                "sweep", "--config", "exp.cfg", "--out", "out.csv", "--workers", workers,
            ],
            dir.path(),
        );
        assert!(out.status.success(), "{out:?}");
        std::fs::read_to_string(dir.path().join("out.csv")).unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert_eq!(a, b, "CSV must not depend on the worker count");
    assert!(a.starts_with("method,m,k,kappa,seed,value,ratio,oracle_calls,ms\n"));
    assert!(a.contains("\ngreedi,2,3,3,1,"));
    assert!(a.contains(",mean,"));
    assert!(a.contains(",std,"));
}

#[test]
fn verify_subcommand_passes_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = submod(&["verify", "--suite", "worstcase"], dir.path());
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 9);

    let out = submod(&["verify", "--suite", "structure", "--seeds", "5"], dir.path());
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).contains("PASS structure-cut-counterexample"));

    let out = submod(&["verify", "--suite", "bounds", "--seeds", "5"], dir.path());
    assert!(out.status.success(), "{out:?}");
}

#[test]
fn errors_are_single_line_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let out = submod(
        &["solve", "--objective", "nosuch", "--data", "missing.csv", "--k", "2"],
        dir.path(),
    );
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error: "), "stderr was: {err}");

    let out = submod(
        &["solve", "--objective", "exemplar", "--data", "missing.csv", "--k", "2"],
        dir.path(),
    );
    assert!(!out.status.success());

    // ragged CSV reports the offending line
    std::fs::write(dir.path().join("bad.csv"), "1,2\n3\n").unwrap();
    let out = submod(
        &["solve", "--objective", "exemplar", "--data", "bad.csv", "--k", "1"],
        dir.path(),
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
