use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = "\
# a small network that runs in well under a second
n_bs = 3
n_td = 12
n_drops = 4
seed = 9
";

fn sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sran-sim"))
        .args(args)
        .output()
        .expect("spawn sran-sim")
}

fn config(dir: &Path, text: &str) -> String {
    let path = dir.join("sim.cfg");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn sweep_writes_csv_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    let out = sim(&[
        "sweep", "--config", &cfg, "--vary", "n_td", "--values", "6,12", "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(sran::sim::CSV_HEADER));
    assert_eq!(lines.count(), 6);
    assert!(out_dir.join("sweep.csv.meta").exists());
}

#[test]
fn run_and_oracle_succeed_on_a_small_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    let o = out_dir.to_str().unwrap();

    let run = sim(&["run", "--config", &cfg, "--strategy", "kb_aware", "--out", o]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let csv = std::fs::read_to_string(out_dir.join("run.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);

    let oracle = sim(&["oracle", "--config", &cfg, "--max-endpoints", "3", "--grid", "4", "--out", o]);
    assert_eq!(code(&oracle), 0, "{}", String::from_utf8_lossy(&oracle.stderr));
    assert!(out_dir.join("oracle.csv").exists());
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("out");
    let o = o.to_str().unwrap();

    let unknown = config(dir.path(), "n_bs = 3\nbogus_key = 1\n");
    let out = sim(&["run", "--config", &unknown, "--out", o]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));

    let invalid = config(dir.path(), "compress_max = 1\n");
    assert_eq!(code(&sim(&["run", "--config", &invalid, "--out", o])), 2);

    let ok = config(dir.path(), SMALL);
    assert_eq!(code(&sim(&["run", "--config", &ok, "--strategy", "best", "--out", o])), 2);
    assert_eq!(
        code(&sim(&["sweep", "--config", &ok, "--vary", "area_side", "--values", "1", "--out", o])),
        2
    );
}

#[test]
fn oversized_oracle_requests_exit_with_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), SMALL);
    let o = dir.path().join("out");
    let o = o.to_str().unwrap();
    assert_eq!(code(&sim(&["oracle", "--config", &cfg, "--max-endpoints", "5", "--out", o])), 4);
    assert_eq!(code(&sim(&["oracle", "--config", &cfg, "--grid", "9", "--out", o])), 4);
}

#[test]
fn sweep_output_does_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), SMALL);
    let mut files = Vec::new();
    for workers in ["1", "3"] {
        let out_dir = dir.path().join(format!("w{workers}"));
        let out = sim(&[
            "sweep", "--config", &cfg, "--vary", "tau_mean", "--values", "0.3,0.7", "--workers", workers,
            "--out", out_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let csv = std::fs::read(out_dir.join("sweep.csv")).unwrap();
        let meta = std::fs::read(out_dir.join("sweep.csv.meta")).unwrap();
        files.push((csv, meta));
    }
    assert_eq!(files[0], files[1]);
}
