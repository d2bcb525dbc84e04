//! End-to-end checks of the `gridgrow` binary: exit codes, determinism,
//! and the environment cap override.

use std::path::PathBuf;
use std::process::{Command, Output};

fn grid_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("grids").join(name)
}

fn gridgrow(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gridgrow"));
    cmd.args(args);
    cmd.env_remove("GRIDGROW_CAP_N");
    for (key, value) in env {
        cmd.env(key, value);
    }
    cmd.output().expect("spawn gridgrow")
}

fn stdout_of(out: &Output) -> &str {
    std::str::from_utf8(&out.stdout).expect("utf-8 stdout")
}

#[test]
fn predict_skew_merged() {
    let path = grid_path("skew_merged.grid");
    let out = gridgrow(&["predict", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
    assert!((v["gr"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let path = grid_path("fig1_right.grid");
    let args = ["optimize", path.to_str().unwrap(), "--draws", "2000", "--seed", "5"];
    let first = gridgrow(&args, &[]);
    let second = gridgrow(&args, &[]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    // thread count must not change the bytes either
    let threaded = gridgrow(
        &[
            "optimize",
            path.to_str().unwrap(),
            "--draws",
            "2000",
            "--seed",
            "5",
            "--threads",
            "3",
        ],
        &[],
    );
    assert_eq!(first.stdout, threaded.stdout);
}

#[test]
fn count_matches_closed_form_and_csv_shape() {
    let path = grid_path("juxtaposition.grid");
    let out = gridgrow(
        &["count", path.to_str().unwrap(), "--n", "10", "--output", "csv"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<&str> = stdout_of(&out).lines().collect();
    assert_eq!(lines[0], "n,gridded,ungridded");
    assert_eq!(lines[11], "10,1024,");
    assert_eq!(lines[8], "7,128,121");
}

#[test]
fn verify_passes_on_the_skew_fixture() {
    let path = grid_path("skew_merged.grid");
    let out = gridgrow(&["verify", path.to_str().unwrap(), "--n", "7"], &[]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
    assert_eq!(v["pass"].as_bool(), Some(true));
}

#[test]
fn verify_exits_2_when_the_band_fails() {
    let path = grid_path("skew_merged.grid");
    let out = gridgrow(
        &[
            "verify",
            path.to_str().unwrap(),
            "--n",
            "7",
            "--band-lo",
            "0.99",
            "--band-hi",
            "1.01",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_64() {
    let out = gridgrow(&["count", "nowhere.grid"], &[]); // missing --n
    assert_eq!(out.status.code(), Some(64));
    let out = gridgrow(&["frobnicate"], &[]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn parse_and_io_errors_exit_65() {
    let out = gridgrow(&["predict", "/nonexistent/x.grid"], &[]);
    assert_eq!(out.status.code(), Some(65));

    let dir = std::env::temp_dir().join(format!("gridgrow-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.grid");
    std::fs::write(&bad, "inc wat\n").unwrap();
    let out = gridgrow(&["predict", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    // a grid the spectral model must reject: finite class cell
    let finite = dir.join("finite.grid");
    std::fs::write(&finite, "Av(12,21) inc\n").unwrap();
    let out = gridgrow(&["predict", finite.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(65));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn env_var_raises_the_ungridded_cap() {
    let path = grid_path("juxtaposition.grid");
    let out = gridgrow(&["count", path.to_str().unwrap(), "--n", "8"], &[]);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
    assert!(v[8]["ungridded"].is_null(), "default cap is 7");

    let out = gridgrow(
        &["count", path.to_str().unwrap(), "--n", "8"],
        &[("GRIDGROW_CAP_N", "8")],
    );
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
    assert_eq!(v[8]["ungridded"].as_str(), Some("248"));

    // the flag wins over the environment
    let out = gridgrow(
        &["count", path.to_str().unwrap(), "--n", "8", "--cap-n", "6"],
        &[("GRIDGROW_CAP_N", "8")],
    );
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
    assert!(v[7]["ungridded"].is_null());
}

#[test]
fn catalog_merges_over_builtins() {
    let dir = std::env::temp_dir().join(format!("gridgrow-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let grid = dir.join("separable.grid");
    std::fs::write(&grid, "Av(2413,3142)\n").unwrap();

    // unknown without a catalog entry
    let out = gridgrow(&["predict", grid.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(65));

    let catalog = grid_path("extra_rates.catalog");
    let out = gridgrow(
        &[
            "predict",
            grid.to_str().unwrap(),
            "--catalog",
            catalog.to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout_of(&out)).unwrap();
    assert!((v["gr"].as_f64().unwrap() - 5.82842712474619).abs() < 1e-12);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn sample_is_reproducible_and_reports_divisions() {
    let path = grid_path("skew_merged.grid");
    let args = ["sample", path.to_str().unwrap(), "--n", "12", "--seed", "31"];
    let first = gridgrow(&args, &[]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, gridgrow(&args, &[]).stdout);
    let v: serde_json::Value = serde_json::from_str(stdout_of(&first)).unwrap();
    assert_eq!(v["perm"].as_array().unwrap().len(), 12);
    assert_eq!(v["col_divisions"].as_array().unwrap().len(), 3);
    assert_eq!(v["row_divisions"].as_array().unwrap().len(), 3);
    assert_eq!(v["n"].as_u64(), Some(12));
}
