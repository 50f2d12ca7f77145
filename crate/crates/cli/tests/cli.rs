use std::path::Path;
use std::process::{Command, Output};

fn relspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relspin")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn sweep_from_config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out = dir.path().join("s.csv");
    write(
        &cfg,
        r#"{"sigma_over_m": [1], "x": [0, "delta"], "xi_grid": {"start": 0, "stop": 1, "step": 1},
            "integrator": {"nodes_per_axis": 8}, "output_path": "ignored.csv"}"#,
    );
    let o =
        relspin(&["sweep", "--config", cfg.to_str().unwrap(), "--sigma-over-m", "4", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("4.0,")).collect();
    assert_eq!(rows.len(), 4);
    assert!(!dir.path().join("ignored.csv").exists());
}

#[test]
fn repeated_sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = relspin(&[
            "sweep",
            "--sigma-over-m",
            "1",
            "--x",
            "0.5",
            "--xi",
            "0:2:1",
            "--backend",
            "monte_carlo",
            "--samples",
            "20000",
            "--seed",
            "11",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let out = out.to_str().unwrap();
    for args in [
        vec!["sweep", "--x", "0", "--out", out],
        vec!["sweep", "--sigma-over-m", "1", "--x", "1.2", "--out", out],
        vec!["sweep", "--sigma-over-m", "1", "--x", "0", "--xi", "0:1", "--out", out],
        vec!["sweep", "--sigma-over-m", "1", "--x", "0", "--nodes", "2", "--out", out],
        vec!["sweep", "--config", "/nonexistent.json", "--out", out],
        vec!["invariance", "--samples", "10", "--backend", "monte_carlo"],
    ] {
        let o = relspin(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert!(!Path::new(out).exists());
}

#[test]
fn non_convergence_exits_with_three_and_keeps_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let out = dir.path().join("s.csv");
    write(
        &cfg,
        &format!(
            r#"{{"sigma_over_m": [1], "x": [0], "xi_grid": {{"start": 2, "stop": 2, "step": 1}},
                "integrator": {{"nodes_per_axis": 8, "target_tolerance": 1e-14}}, "output_path": {:?}}}"#,
            out.to_str().unwrap()
        ),
    );
    let o = relspin(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().last().unwrap().contains("disagree"));
}

#[test]
fn invariance_and_protocol_demo_pass() {
    let o = relspin(&["invariance", "--nodes", "8", "--xi", "1,5", "--json"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["rows"].as_array().unwrap().len(), 10);

    let o = relspin(&["protocol-demo", "--nodes", "8", "--shots", "100"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.matches("pass").count(), 3, "{text}");
}

#[test]
fn plotdata_from_sweep_and_from_empty_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let plot = dir.path().join("p.dat");
    let o = relspin(&[
        "sweep",
        "--sigma-over-m",
        "1,4",
        "--x",
        "0,delta",
        "--xi",
        "0",
        "--nodes",
        "8",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let o = relspin(&["plotdata", "--input", csv.to_str().unwrap(), "--out", plot.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(text.matches("# xi concurrence error").count(), 3);

    let empty = dir.path().join("empty.csv");
    let header = "sigma_over_m,x_or_delta,xi,concurrence,error_bound,entropy_marginal,backend,seed,wall_time_ms,monotone_violation,error\n";
    write(&empty, header);
    let none = dir.path().join("none.dat");
    let o = relspin(&["plotdata", "--input", empty.to_str().unwrap(), "--out", none.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(!none.exists());
}
