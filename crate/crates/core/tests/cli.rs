use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_indel-entropy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn embed_example() {
    let o = bin(&["embed", "--y", "120", "--x", "11220", "--q", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "4\n");
}

#[test]
fn entropy_both_reports_difference() {
    let o = bin(&[
        "entropy",
        "--channel",
        "del",
        "--k",
        "1",
        "--q",
        "2",
        "--word",
        "01",
        "--direction",
        "input",
        "--method",
        "both",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("closed_form 1.918295834054"));
    assert!(text.contains("enumeration 1.918295834054"));
    assert!(text.contains("difference 0.000000000000000"));
}

#[test]
fn output_entropy_and_json() {
    let o = bin(&[
        "entropy",
        "--channel",
        "ins",
        "--k",
        "2",
        "--word",
        "0110",
        "--direction",
        "output",
        "--method",
        "both",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["word"], "0110");
}

#[test]
fn verify_suite_passes() {
    let o = bin(&[
        "verify",
        "--suite",
        "closed-vs-enum",
        "--q",
        "2",
        "--max-len",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS closed-vs-enum"));
}

#[test]
fn diagnostics_and_exit_codes() {
    let o = bin(&["entropy", "--channel", "del", "--word", "01x"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--word"));

    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bin(&["verify", "--suite", "nope"]).status.code(), Some(1));

    let o = bin(&[
        "extremes",
        "--channel",
        "del",
        "--m",
        "8",
        "--which",
        "max",
        "--exhaustive",
        "--budget",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(3));

    let o = Command::new(env!("CARGO_BIN_EXE_indel-entropy"))
        .args([
            "extremes",
            "--channel",
            "del",
            "--m",
            "8",
            "--which",
            "max",
            "--exhaustive",
        ])
        .env("INDEL_ENTROPY_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn figure_is_identical_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for jobs in ["1", "3", "8"] {
        let path = dir.path().join(format!("fig{jobs}.csv"));
        let o = bin(&[
            "--jobs",
            jobs,
            "figure",
            "--channel",
            "del",
            "--k",
            "1",
            "--q",
            "2",
            "--n",
            "4:40",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        files.push(std::fs::read(&path).unwrap());
    }
    assert!(files.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(files.remove(0)).unwrap();
    assert_eq!(
        text.lines().next(),
        Some("n,min_bits,max_bits,avg_bits,bound_bits")
    );
    assert_eq!(text.lines().count(), 38);
}

#[test]
fn exhaustive_extremes_identical_across_job_counts() {
    let run = |jobs: &str| {
        stdout(&bin(&[
            "--jobs",
            jobs,
            "extremes",
            "--channel",
            "ins",
            "--k",
            "1",
            "--q",
            "3",
            "--m",
            "7",
            "--which",
            "max",
            "--exhaustive",
        ]))
    };
    let one = run("1");
    assert_eq!(one, run("6"));
    assert!(one.contains("witness_count 192"));
}

#[test]
fn capacity_outputs() {
    let o = bin(&["capacity", "--channel", "del", "--k", "1", "--n", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let line = text.lines().nth(1).unwrap();
    let c: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((c - 1.0).abs() < 1e-6);

    let o = bin(&["capacity", "--n", "3", "--bound-steps", "2"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,bound_bits,bound_bits_per_symbol");
    assert!(lines[1].starts_with("0.000000000000000,3.000000000000000"));
    assert!(lines[3].starts_with("1.000000000000000,0.000000000000000"));
}

#[test]
fn ball_and_spectrum_csv() {
    let o = bin(&["ball", "--word", "00", "--k", "2", "--kind", "ins"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("word,count"));
    assert_eq!(text.lines().count(), 12);
    let o = bin(&["spectrum", "--channel", "ins", "--word", "0011"]);
    assert_eq!(stdout(&o), "case,count,multiplicity\n1,1,1\n1,1,1\n3,4,1\n");
}
