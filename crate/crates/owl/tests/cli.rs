use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn owl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_owl"))
        .args(args)
        .env("OWL_THREADS", "2")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_values(path: &Path) -> Vec<f64> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.trim().parse().unwrap())
        .collect()
}

#[test]
fn project_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("z.txt");
    let weights = dir.path().join("w.txt");
    let output = dir.path().join("x.txt");
    fs::write(&input, "# worked example\n3\n2\n1\n-1\n2\n").unwrap();
    fs::write(&weights, "5\n4\n3\n1\n1\n").unwrap();
    let o = owl(&[
        "project",
        "--input",
        p(&input),
        "--weights",
        p(&weights),
        "--eps",
        "1",
        "--output",
        p(&output),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(
        out.contains("branches: merge-λ₁, merge-λ₁, simplex"),
        "{out}"
    );
    assert!(out.contains("outer loops: 3"), "{out}");
    let x = read_values(&output);
    let want = [1.0, 1.0, 1.0, -1.0, 1.0].map(|v: f64| v / 14.0);
    assert_eq!(x.len(), 5);
    for (a, b) in x.iter().zip(want) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn project_feasible_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("z.txt");
    let output = dir.path().join("x.txt");
    fs::write(&input, "0.1\n-0.2\n0\n").unwrap();
    let o = owl(&[
        "project",
        "--input",
        p(&input),
        "--weights",
        "oscar:1,0.5",
        "--eps",
        "10",
        "--output",
        p(&output),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("feasible: returned unchanged"));
    assert_eq!(read_values(&output), vec![0.1, -0.2, 0.0]);
}

#[test]
fn increasing_weight_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("z.txt");
    let weights = dir.path().join("w.txt");
    fs::write(&input, "1\n2\n3\n").unwrap();
    fs::write(&weights, "# weights\n1\n2\n3\n").unwrap();
    let o = owl(&[
        "project",
        "--input",
        p(&input),
        "--weights",
        p(&weights),
        "--eps",
        "1",
        "--output",
        p(&dir.path().join("x")),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("w.txt:3:"), "{err}");
    assert!(err.contains("entry 0 is smaller than entry 1"), "{err}");
}

#[test]
fn parse_errors_and_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("z.txt");
    fs::write(&input, "1\nabc\n").unwrap();
    let out = dir.path().join("x");
    let o = owl(&[
        "project",
        "--input",
        p(&input),
        "--weights",
        "oscar:1,0",
        "--eps",
        "1",
        "--output",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("z.txt:2:"), "{}", stderr(&o));

    let o = owl(&[
        "project",
        "--input",
        p(&dir.path().join("missing")),
        "--weights",
        "oscar:1,0",
        "--eps",
        "1",
        "--output",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));

    fs::write(&input, "1\n").unwrap();
    let o = owl(&[
        "project",
        "--input",
        p(&input),
        "--weights",
        "oscar:1,0",
        "--eps",
        "-1",
        "--output",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));

    assert_eq!(owl(&["bogus"]).status.code(), Some(1));
    assert_eq!(
        owl(&["regress", "--out", "x", "--solver", "newton"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(owl(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = owl(&[
        "bench",
        "--lengths",
        "1000",
        "2000",
        "--densities",
        "1.0",
        "0.1",
        "--runs",
        "2",
        "--seed",
        "1",
        "--out",
        p(&out),
        "--parallel",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,density,mean_s,std_s");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("1000,1,"), "{}", lines[1]);
    assert!(lines[2].starts_with("1000,0.1,"), "{}", lines[2]);
}

#[test]
fn regress_zero_iterations() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = owl(&[
        "regress",
        "--d",
        "1",
        "--solver",
        "fbs",
        "--iters",
        "0",
        "--seed",
        "5",
        "--out",
        p(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines,
        vec!["iter,objective,elapsed_s,feasibility", lines[1]]
    );
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "0");
    let data = owl::synthetic::gen_synthetic(&owl::synthetic::ExperimentConfig {
        seed: 5,
        ..Default::default()
    })
    .unwrap();
    let half_b2 = 0.5 * data.b.iter().map(|v| v * v).sum::<f64>();
    let obj: f64 = fields[1].parse().unwrap();
    assert!((obj - half_b2).abs() <= 1e-12 * half_b2);
}

#[test]
fn regress_rejects_large_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = owl(&[
        "regress",
        "--solver",
        "fista",
        "--iters",
        "1",
        "--step",
        "1e6",
        "--out",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("too large"), "{}", stderr(&o));
}

#[test]
fn gen_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = format!("{}/inst_", p(dir.path()));
    let o = owl(&["gen", "--d", "1", "--seed", "3", "--out-prefix", &prefix]);
    assert!(o.status.success(), "{}", stderr(&o));
    let x = read_values(&dir.path().join("inst_x_true.txt"));
    assert_eq!(x.len(), 1000);
    assert_eq!(read_values(&dir.path().join("inst_b.txt")).len(), 1000);
    assert_eq!(read_values(&dir.path().join("inst_w.txt")).len(), 1000);
    assert_eq!(read_values(&dir.path().join("inst_A.txt")).len(), 1_000_000);
    let eps = read_values(&dir.path().join("inst_eps.txt"));
    assert_eq!(eps.len(), 1);
    assert!(eps[0] > 0.0);
}

#[test]
fn bad_thread_count() {
    let o = Command::new(env!("CARGO_BIN_EXE_owl"))
        .args([
            "bench",
            "--lengths",
            "10",
            "--densities",
            "1",
            "--runs",
            "1",
            "--out",
            "/dev/null",
        ])
        .env("OWL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
