use std::path::Path;
use std::process::{Command, Output};

fn dlshrink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlshrink"))
        .args(args)
        .env_remove("SHRINKAGE_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_csv(path: &Path, rows: &[(&str, f64)]) {
    let mut s = String::from("id,z\n");
    for (id, z) in rows {
        s.push_str(&format!("{id},{z}\n"));
    }
    std::fs::write(path, s).unwrap();
}

const TINY: [&str; 6] = ["--iters", "300", "--burnin", "100", "--seed", "3"];

#[test]
fn simulate_writes_table_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let mut args = vec!["simulate", "--n", "30", "--q", "3", "--replicates", "2", "--methods", "dl,bl,hs"];
    args.extend(TINY);
    args.extend(["--out", out.to_str().unwrap()]);
    let o = dlshrink(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "method,mean_squared_error,mc_se,completed,failed");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("DL_1/n,"));
    assert_eq!(std::fs::read_to_string(out.join("summary.csv")).unwrap(), table);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["replicates"].as_array().unwrap().len(), 2);
    assert_eq!(report["scenario"]["n"], 30);
}

#[test]
fn simulate_is_reproducible_and_thread_independent() {
    let mut args = vec!["simulate", "--n", "20", "--q", "2", "--replicates", "3", "--methods", "dl_grid,hs"];
    args.extend(TINY);
    let one = Command::new(env!("CARGO_BIN_EXE_dlshrink"))
        .args(&args)
        .env("SHRINKAGE_THREADS", "1")
        .output()
        .unwrap();
    let two = Command::new(env!("CARGO_BIN_EXE_dlshrink"))
        .args(&args)
        .env("SHRINKAGE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn simulate_empty_method_list() {
    let mut args = vec!["simulate", "--n", "10", "--q", "1", "--replicates", "1", "--methods", ""];
    args.extend(TINY);
    let o = dlshrink(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "method,mean_squared_error,mc_se,completed,failed");
}

#[test]
fn bad_thread_variable_is_a_validation_error() {
    let mut args = vec!["simulate", "--n", "10", "--q", "1", "--replicates", "1"];
    args.extend(TINY);
    let o = Command::new(env!("CARGO_BIN_EXE_dlshrink"))
        .args(&args)
        .env("SHRINKAGE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("SHRINKAGE_THREADS"));
}

#[test]
fn usage_and_validation_errors_exit_one() {
    assert_eq!(code(&dlshrink(&["simulate", "--n", "ten"])), 1);
    assert_eq!(code(&dlshrink(&["no-such-command"])), 1);
    assert_eq!(code(&dlshrink(&["--help"])), 0);
    let mut args = vec!["simulate", "--n", "10", "--q", "20"];
    args.extend(TINY);
    assert_eq!(code(&dlshrink(&args)), 1);
    let mut args = vec!["simulate", "--methods", "dl_grid", "--a-grid", "0.4,0.2"];
    args.extend(TINY);
    assert_eq!(code(&dlshrink(&args)), 1);
    assert_eq!(code(&dlshrink(&["simulate", "--iters", "100", "--burnin", "100"])), 1);
}

#[test]
fn fit_writes_documented_schema() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("z.csv");
    let mut rows: Vec<(String, f64)> = (0..40).map(|i| (format!("g{i}"), 0.1 * ((i % 7) as f64 - 3.0))).collect();
    rows[5].1 = 9.0;
    rows[17].1 = -8.5;
    let borrowed: Vec<(&str, f64)> = rows.iter().map(|(i, z)| (i.as_str(), *z)).collect();
    write_csv(&input, &borrowed);
    let out = dir.path().join("fit.json");
    let grid = dir.path().join("density.csv");
    let mut args = vec![
        "fit",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--density-grid",
        grid.to_str().unwrap(),
    ];
    args.extend(["--iters", "2000", "--burnin", "1000", "--seed", "3"]);
    let o = dlshrink(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r["n"], 40);
    assert_eq!(r["method"], "DL_grid");
    assert_eq!(r["chain"]["retained"], 1000);
    let coords = r["coordinates"].as_array().unwrap();
    assert_eq!(coords.len(), 40);
    for key in ["id", "median", "ci_low", "ci_high", "ess"] {
        assert!(coords[0].get(key).is_some(), "missing {key}");
    }
    assert_eq!(coords[5]["id"], "g5");
    assert!(r["a"].as_f64().unwrap() > 0.0);
    let ids: Vec<&str> = r["selected_ids"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(ids, vec!["g5", "g17"]);
    let density = std::fs::read_to_string(&grid).unwrap();
    assert!(density.starts_with("theta,log_pdf,pdf\n"));

    // same seed, same bytes
    let out2 = dir.path().join("fit2.json");
    args[4] = out2.to_str().unwrap();
    assert_eq!(code(&dlshrink(&args)), 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&out2).unwrap());
}

#[test]
fn fit_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    let out_s = out.to_str().unwrap();

    let bad_header = dir.path().join("h.csv");
    std::fs::write(&bad_header, "gene,score\na,1\n").unwrap();
    let o = dlshrink(&["fit", "--input", bad_header.to_str().unwrap(), "--out", out_s]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let bad_value = dir.path().join("v.csv");
    std::fs::write(&bad_value, "id,z\na,1\nb,oops\n").unwrap();
    let o = dlshrink(&["fit", "--input", bad_value.to_str().unwrap(), "--out", out_s]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let missing = dir.path().join("absent.csv");
    assert_eq!(code(&dlshrink(&["fit", "--input", missing.to_str().unwrap(), "--out", out_s])), 2);
    assert_eq!(code(&dlshrink(&["fit", "--out", out_s])), 1);
    assert!(!out.exists());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "n = 25\nq = 2\nreplicates = 1\nmethods = [\"bl\"]\niters = 300\nburnin = 100\nseed = 9\n",
    )
    .unwrap();
    let o = dlshrink(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = stdout(&o);
    assert_eq!(table.lines().count(), 2);
    assert!(table.lines().nth(1).unwrap().starts_with("BL,"));

    let o = dlshrink(&["simulate", "--config", cfg.to_str().unwrap(), "--methods", "hs,dl"]);
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(|l| l.split(',').next().unwrap().to_string()).collect();
    assert_eq!(rows, vec!["HS", "DL_1/n"]);

    // the file's n = 25 with q = 2 is overridden into an invalid q
    let o = dlshrink(&["simulate", "--config", cfg.to_str().unwrap(), "--q", "30"]);
    assert_eq!(code(&o), 1);

    let broken = dir.path().join("broken.toml");
    std::fs::write(&broken, "n = 25\nnot_a_key = 1\n").unwrap();
    let o = dlshrink(&["simulate", "--config", broken.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn prior_check_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pc");
    let o = dlshrink(&[
        "prior-check",
        "--a",
        "0.5",
        "--n",
        "10",
        "--deltas",
        "0.01,0.1,1",
        "--draws",
        "20000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let density = std::fs::read_to_string(out.join("density.csv")).unwrap();
    let rows: Vec<Vec<f64>> = density
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 400);
    for (lo, hi) in rows.iter().zip(rows.iter().rev()) {
        assert_eq!(lo[0], -hi[0]);
        assert_eq!(lo[1], hi[1]);
    }
    assert!(rows.iter().all(|r| r[0].abs() >= 1e-6));
    let tail: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("tail.json")).unwrap()).unwrap();
    let est: Vec<f64> = tail["tails"].as_array().unwrap().iter().map(|t| t["estimate"].as_f64().unwrap()).collect();
    assert_eq!(est.len(), 3);
    assert!(est.windows(2).all(|w| w[0] >= w[1]));
    assert_eq!(code(&dlshrink(&["prior-check", "--a", "0", "--out", out.to_str().unwrap()])), 1);
}
