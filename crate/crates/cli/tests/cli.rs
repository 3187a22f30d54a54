use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const G8: &str = "h1 l1\nh1 l2\nh1 l3\nh2 l4\nh2 l5\nh2 l6\nl1 l4\n";

fn rewire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rewire"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g8.txt");
    let out = dir.path().join("out.csv");
    fs::write(&input, G8).unwrap();
    let args = [
        "run",
        "--input",
        path(&input),
        "--method",
        "ga",
        "--budget",
        "2",
        "--metrics",
        "assortativity,spearman,spectral_radius,natural_connectivity",
        "--output",
        path(&out),
        "--dump-ep",
    ];
    let first = rewire(&args);
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    assert!(String::from_utf8_lossy(&first.stderr).contains("resolves to 2 rewirings"));
    let text = fs::read_to_string(&out).unwrap();
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(row[0], "g8");
    assert_eq!(row[7], "5");
    assert!(row[9].starts_with("-0.8529"));
    assert_eq!(
        fs::read_to_string(dir.path().join("out.csv.ep.csv"))
            .unwrap()
            .lines()
            .count(),
        13
    );

    let bytes = fs::read(&out).unwrap();
    assert!(rewire(&args).status.success());
    assert_eq!(bytes, fs::read(&out).unwrap());
}

#[test]
fn exact_method_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g8.txt");
    fs::write(&input, G8).unwrap();
    let out = dir.path().join("exact.csv");
    let plans = dir.path().join("plans.csv");
    let o = rewire(&[
        "run",
        "--input",
        path(&input),
        "--method",
        "exact",
        "--budget",
        "3",
        "--output",
        path(&out),
        "--plans",
        path(&plans),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().nth(2).unwrap().contains(",5,true,"));
    assert_eq!(fs::read_to_string(&plans).unwrap().lines().count(), 3);

    let out = dir.path().join("sweep.csv");
    let o = rewire(&[
        "run",
        "--input",
        path(&input),
        "--method",
        "pea",
        "--budget-sweep",
        "0.15:0.45:0.15",
        "--seeds",
        "1,2",
        "--output",
        path(&out),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 2 + 6);

    let o = rewire(&[
        "run",
        "--input",
        path(&input),
        "--method",
        "ra",
        "--budget",
        "1",
        "--seed",
        "7",
        "--repeats",
        "4",
        "--output",
        path(&out),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let seeds: Vec<&str> = text
        .lines()
        .skip(2)
        .map(|l| l.split(',').nth(4).unwrap())
        .collect();
    assert_eq!(seeds, ["7", "8", "9", "10"]);
}

#[test]
fn input_problems_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.csv");
    let good = dir.path().join("g8.txt");
    let bad = dir.path().join("bad.txt");
    fs::write(&good, G8).unwrap();
    fs::write(&bad, "a b\nlonely\n").unwrap();
    let cases: [&[&str]; 5] = [
        &[
            "run",
            "--input",
            "missing.txt",
            "--method",
            "ga",
            "--output",
            path(&out),
        ],
        &[
            "run",
            "--input",
            path(&bad),
            "--method",
            "ga",
            "--output",
            path(&out),
        ],
        &[
            "run",
            "--input",
            path(&good),
            "--method",
            "best",
            "--output",
            path(&out),
        ],
        &[
            "run",
            "--input",
            path(&good),
            "--method",
            "ga",
            "--budget",
            "1.5",
            "--output",
            path(&out),
        ],
        &["run", "--input", path(&good), "--frobnicate"],
    ];
    for args in cases {
        let o = rewire(args);
        assert_eq!(
            o.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert!(!out.exists());
    assert_eq!(rewire(&["--help"]).status.code(), Some(0));
}

#[test]
fn ratio_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let trials = dir.path().join("trials.csv");
    let o = rewire(&[
        "ratio",
        "--model",
        "ba",
        "--n",
        "30",
        "--k",
        "3",
        "--trials",
        "10",
        "--seed",
        "4",
        "--output",
        path(&trials),
    ]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("valid=10"), "{stdout}");
    assert!(stdout.contains("mean_ratio="));
    assert_eq!(fs::read_to_string(&trials).unwrap().lines().count(), 11);

    let o = rewire(&[
        "ratio", "--model", "er", "--n", "20", "--edges", "30", "--k", "0", "--trials", "3",
    ]);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("mean_ratio=undefined"));
}
