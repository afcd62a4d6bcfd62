use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sosgibbs"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tmp(name: &str, content: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn solution_lines(out: &str) -> Vec<&str> {
    out.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("label"))
        .collect()
}

#[test]
fn solve_counts() {
    let o = run(&["solve", "--period", "4", "--tau", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(solution_lines(&stdout(&o)).len(), 5);

    let o = run(&["solve", "--period", "3", "--tau", "4", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("nontrivial: 0"));

    let o = run(&["solve", "--period", "2", "--tau", "7", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let a: Vec<f64> = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["u"].as_array().unwrap().last().unwrap().as_f64().unwrap())
        .collect();
    assert_eq!(a.len(), 3);
    for (got, want) in a.iter().zip([1.0, 0.5, 2.0]) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn temperature_flags_are_exclusive() {
    assert_eq!(run(&["solve", "--period", "4"]).status.code(), Some(2));
    assert_eq!(
        run(&["solve", "--period", "4", "--tau", "7", "--theta", "0.2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["solve", "--period", "4", "--tau", "1.5"])
            .status
            .code(),
        Some(2)
    );
    let by_beta = run(&["solve", "--period", "2", "--beta", "1.9248473002384139"]);
    assert_eq!(by_beta.status.code(), Some(0));
    assert_eq!(solution_lines(&stdout(&by_beta)).len(), 3);
}

#[test]
fn scan_is_stable_and_counts_step() {
    let args = [
        "scan",
        "--tau-min",
        "2.1",
        "--tau-max",
        "10",
        "--step",
        "0.1",
        "--k",
        "2",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "tau,k,a1,a2,a3,b3,a5,b5,c3_low,c3_high,n_solutions,n_ggm"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 80);
    let mut seen = Vec::new();
    for r in &rows {
        assert_eq!(r.len(), 12);
        let n: usize = r[11].parse().unwrap();
        if seen.last() != Some(&n) {
            seen.push(n);
        }
    }
    assert_eq!(seen, vec![1, 2, 3, 4]);

    let at = |tau: f64| {
        rows.iter()
            .find(|r| (r[0].parse::<f64>().unwrap() - tau).abs() < 1e-9)
            .unwrap()
    };
    let five = at(5.0);
    assert!(five[2].is_empty() && five[3].is_empty());
    assert!(!five[4].is_empty() && !five[5].is_empty());
    let r = at(4.9);
    assert!(!r[8].is_empty() && !r[9].is_empty());
    assert_eq!(
        run(&["scan", "--tau-min", "1", "--tau-max", "3", "--step", "0.1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn scan_agrees_with_solve_and_classify() {
    let scan = run(&["scan", "--tau-min", "7", "--tau-max", "7", "--step", "1"]);
    let row: Vec<String> = stdout(&scan)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(String::from)
        .collect();
    let solve = run(&["solve", "--period", "4", "--tau", "7"]);
    assert_eq!(row[10], solution_lines(&stdout(&solve)).len().to_string());
    let classify = run(&["classify", "--tau", "7", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&classify.stdout).unwrap();
    assert_eq!(row[11], v["four_periodic"].to_string());
}

#[test]
fn verify_exit_codes() {
    let good = write_tmp("good_law.json", r#"{"q": 2, "k": 2, "z": [1.0, 0.25]}"#);
    let bad = write_tmp("bad_law.json", r#"{"k": 2, "z": [1.0, 0.3]}"#);
    let o = run(&["verify", "--law", good.to_str().unwrap(), "--tau", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("not normalisable"));
    assert!(text.contains("status: ok"));
    let o = run(&["verify", "--law", bad.to_str().unwrap(), "--tau", "7"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["verify", "--law", "/nonexistent/law.json", "--tau", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn marginal_outputs() {
    let law = write_tmp("free_law.json", r#"{"k": 2, "z": [1.0]}"#);
    let o = run(&[
        "marginal",
        "--law",
        law.to_str().unwrap(),
        "--theta",
        "0.5",
        "--window",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let p0: f64 = text
        .lines()
        .find(|l| l.starts_with("0,0,1,0,"))
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((p0 - 1.0 / 3.0).abs() < 1e-14);

    let tree = write_tmp("vertex_tree.json", r#"{"k": 2, "root": 0, "edges": []}"#);
    let cfg = write_tmp("vertex_cfg.json", r#"{"zeta": [0, 0, 0]}"#);
    let o = run(&[
        "marginal",
        "--law",
        law.to_str().unwrap(),
        "--tree",
        tree.to_str().unwrap(),
        "--theta",
        "0.5",
        "--config",
        cfg.to_str().unwrap(),
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let p = v["probability"].as_f64().unwrap();
    assert!((p - 1.0 / 27.0).abs() < 1e-15);

    let short = write_tmp("short_cfg.json", r#"{"zeta": [0]}"#);
    let o = run(&[
        "marginal",
        "--law",
        law.to_str().unwrap(),
        "--tree",
        tree.to_str().unwrap(),
        "--theta",
        "0.5",
        "--config",
        short.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_output() {
    let o = run(&["classify", "--tau", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("GGMs: 6 (four-periodic family: 4, three-periodic family: 2)"));
    assert!(text.contains("two-periodic-a1 ~ two-periodic-a2"));
}

#[test]
fn sample_is_deterministic() {
    let law = write_tmp("sample_law.json", r#"{"k": 2, "z": [1.0, 0.25]}"#);
    let tree = write_tmp("sample_tree.json", r#"{"k": 2, "edges": [[0, 1]]}"#);
    let args = [
        "sample",
        "--law",
        law.to_str().unwrap(),
        "--tree",
        tree.to_str().unwrap(),
        "--tau",
        "7",
        "--seed",
        "42",
        "--n",
        "200",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("# tail_bound"));
    assert!(text.contains("n_vector,count,frequency"));
    let rows = text
        .lines()
        .filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit()) && !l.contains(';'))
        .count();
    assert_eq!(rows, 200);

    let o = run(&[
        "sample",
        "--law",
        law.to_str().unwrap(),
        "--theta",
        "0.95",
        "--window",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
