use std::path::Path;
use std::process::Command;

use condexp_cli::{reproduce_table, run, ExperimentConfig, ReportRow, ScaleOverrides};

const SMALL: &str = r#"
example = "poly4"
M = 5000
N = 40000
batch_size = 10000
seed = 3
report_timing = false

[[regressors]]
type = "linear"

[[regressors]]
type = "poly2"
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_condexp"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn shared_certification_gives_one_d_column() {
    let out = run(&ExperimentConfig::from_toml(SMALL).unwrap()).unwrap();
    let (a, b) = (&out.rows[0], &out.rows[1]);
    assert_eq!((a.ci_d_lo, a.ci_d_hi, a.c_n), (b.ci_d_lo, b.ci_d_hi, b.c_n));
    assert_ne!(a.u_n, b.u_n);
    assert!(a.fit_seconds.is_none());
    out.check_consistency().unwrap();
}

#[test]
fn reruns_write_identical_csv_and_json_agrees_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = ExperimentConfig::from_toml(SMALL).unwrap();
    let base = dir.path().join("out/poly");
    let (csv1, json) = run(&config).unwrap().write_files(&base).unwrap();
    let first = std::fs::read(&csv1).unwrap();
    run(&config).unwrap().write_files(&base).unwrap();
    assert_eq!(first, std::fs::read(&csv1).unwrap());

    let parsed: serde_json::Value = serde_json::from_slice(&std::fs::read(json).unwrap()).unwrap();
    let rows: Vec<ReportRow> = serde_json::from_value(parsed["rows"].clone()).unwrap();
    let mut reader = csv::Reader::from_reader(first.as_slice());
    for (record, row) in reader.records().zip(&rows) {
        let record = record.unwrap();
        assert_eq!(&record[0], row.regressor);
        let cell = |i: usize| record[i].parse::<f64>().unwrap();
        assert_eq!(cell(1), row.ci_u_lo.unwrap());
        assert_eq!(cell(8), row.u_n.unwrap());
        assert_eq!(cell(15), row.stderr_c.unwrap());
        assert_eq!(cell(5), row.rel_err.unwrap());
    }
}

#[test]
fn failing_regressor_is_recorded_without_stopping_the_others() {
    let text = format!(
        "{SMALL}\n[[regressors]]\ntype = \"nn\"\nactivation = \"relu\"\nuse_batchnorm = false\n\
         [regressors.schedule]\ntotal_steps = 50\nminibatch_size = 64\nlr_stages = [[0, 1e200]]\n"
    );
    let out = run(&ExperimentConfig::from_toml(&text).unwrap()).unwrap();
    assert!(!out.rows[0].failed() && !out.rows[1].failed());
    assert!(out.rows[2].error.starts_with("fit:"), "{:?}", out.rows[2]);
    assert!(out.rows[2].u_n.is_none());

    let dir = tempfile::tempdir().unwrap();
    let status = bin().args(["run", "--config"]).arg(write_config(dir.path(), &text)).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn bad_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "example = \"poly4\"\nM = 10\nN = 10\nbatch_size = 10\nregressors = []\n");
    let out = bin().args(["run", "--config"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("regressors"));
    let out = bin().args(["run", "--config", "/nonexistent/file.toml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn run_writes_both_files_and_prints_requested_format() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("res");
    let text = format!("output_path = {:?}\nformat = \"csv\"\n{SMALL}", base.display().to_string());
    let out = bin().args(["run", "--config"]).arg(write_config(dir.path(), &text)).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let printed = String::from_utf8(out.stdout).unwrap();
    assert_eq!(printed, std::fs::read_to_string(dir.path().join("res.csv")).unwrap());
    assert!(dir.path().join("res.json").exists());
}

#[test]
fn list_examples_shows_the_registry() {
    let out = bin().arg("list-examples").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("poly4"));
    let maxcall = lines.iter().find(|l| l.starts_with("maxcall")).unwrap();
    assert!(maxcall.contains("d = 10"));
}

fn tiny() -> ScaleOverrides {
    ScaleOverrides {
        m: Some(2000),
        n: Some(20_000),
        batch_size: Some(10_000),
        nn_steps: Some(20),
        nn_minibatch: Some(64),
        dim: Some(3),
        ..ScaleOverrides::default()
    }
}

#[test]
fn reproduce_emits_desk_and_paper_rows_side_by_side() {
    let rep = reproduce_table(3, &tiny()).unwrap();
    assert_eq!(rep.desk.rows.len(), 10);
    assert_eq!(rep.paper.len(), 10);
    for (d, p) in rep.desk.rows.iter().zip(&rep.paper) {
        assert_eq!(d.regressor, p.regressor);
        assert!(d.distortion.starts_with("gaussian_shift_scale(mean=1"), "{}", d.distortion);
    }
    assert!(rep.desk.metadata.notes.iter().any(|n| n.contains("variance")));
    let csv = rep.render(condexp_cli::Format::Csv).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("source,regressor,ci_u_lo"));
    assert_eq!(lines.filter(|l| l.starts_with("paper,")).count(), 10);
}

#[test]
fn reproduce_binary_reports_market_metadata() {
    let out = bin()
        .args(["reproduce", "--table", "6", "--scale-m", "2000", "--scale-n", "20000", "--batch-size", "10000"])
        .args(["--nn-steps", "10", "--nn-minibatch", "32", "--dim", "3", "--format", "pretty"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("tail_tilt(level=0.99)"));
    assert!(text.contains("in-the-money fraction"));
    assert!(text.contains("half of the paths in the money at d = 3"));
    assert!(text.contains("NN LSE, add. feature (paper)"));
    let out = bin().args(["reproduce", "--table", "7"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn shipped_example_config_is_valid() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/poly4.toml");
    let config = ExperimentConfig::load(&path).unwrap();
    assert_eq!(config.regressors.len(), 3);
}
