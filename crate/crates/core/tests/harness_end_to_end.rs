use std::fs;
use std::path::Path;
use std::process::Command;

use prodres::harness::{
    emit_results, read_aggregates, read_trials, run_capacity_experiment, run_experiment,
    ExperimentConfig, OutputFormat, Task,
};

fn small_memory() -> ExperimentConfig {
    ExperimentConfig {
        reservoir_size: 8,
        train_len: 400,
        test_len: 400,
        tau_max: 10,
        omega_grid: vec![0.1, 0.5],
        lambda_grid: vec![0.5, 0.9],
        trials: 3,
        ..Default::default()
    }
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn reruns_write_byte_identical_files_regardless_of_threads() {
    let cfg = small_memory();
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (dir, threads) in dirs.iter().zip([1, 4]) {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let table = pool.install(|| run_capacity_experiment(&cfg)).unwrap();
        emit_results(&table, &cfg, dir.path(), OutputFormat::Csv).unwrap();
        emit_results(&table, &cfg, dir.path(), OutputFormat::Json).unwrap();
    }
    let a = read_dir_sorted(dirs[0].path());
    assert_eq!(a.len(), 4);
    assert_eq!(a, read_dir_sorted(dirs[1].path()));

    // overwriting in place leaves the bytes unchanged
    let table = run_capacity_experiment(&cfg).unwrap();
    emit_results(&table, &cfg, dirs[0].path(), OutputFormat::Json).unwrap();
    emit_results(&table, &cfg, dirs[0].path(), OutputFormat::Csv).unwrap();
    assert_eq!(a, read_dir_sorted(dirs[0].path()));
}

#[test]
fn emitted_csv_parses_back_to_the_table() {
    let cfg = ExperimentConfig {
        task: Task::Lorenz,
        horizons: vec![1, 4],
        ..small_memory()
    };
    let table = run_experiment(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let files = emit_results(&table, &cfg, dir.path(), OutputFormat::Csv).unwrap();
    let stem = format!("predict-lorenz-{}", cfg.short_hash());
    assert!(files[0].ends_with(format!("{stem}.csv")));
    assert!(files[1].ends_with(format!("{stem}-trials.csv")));
    assert!(files[2].ends_with(format!("{stem}.json")));

    let aggregates = read_aggregates(fs::File::open(&files[0]).unwrap()).unwrap();
    assert_eq!(aggregates, table.aggregates);
    let trials = read_trials(fs::File::open(&files[1]).unwrap()).unwrap();
    assert_eq!(trials, table.trials);

    let summary: serde_json::Value = serde_json::from_slice(&fs::read(&files[2]).unwrap()).unwrap();
    assert_eq!(summary["meta"]["config_hash"], cfg.hash());
    assert_eq!(summary["config"]["task"], "lorenz");
    // one optimum per family and horizon
    assert_eq!(summary["optima"].as_array().unwrap().len(), 3 * 2);
}

#[test]
fn every_aggregate_is_the_mean_of_its_trials() {
    let table = run_capacity_experiment(&small_memory()).unwrap();
    for agg in &table.aggregates {
        let values: Vec<f64> = table
            .trials
            .iter()
            .filter(|t| t.cell.family == agg.family && t.cell.omega == agg.omega && t.cell.lambda == agg.lambda && t.key == agg.key)
            .filter_map(|t| t.value)
            .collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        assert_eq!(agg.trials, values.len());
        assert!((agg.mean.unwrap() - mean).abs() <= 1e-12 * mean.abs().max(1.0));
    }
    // each cell appears once per key
    let keys = table.keys().len();
    assert_eq!(table.aggregates.len(), 3 * 2 * 2 * keys);
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut seen = 0;
    for sub in [dir.clone(), dir.join("acceptance")] {
        for entry in fs::read_dir(sub).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "toml") {
                let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                cfg.validate().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                seen += 1;
            }
        }
    }
    assert!(seen >= 10);
    let reference = ExperimentConfig::load(&dir.join("reference.toml")).unwrap();
    assert_eq!(reference, ExperimentConfig::default());
}

fn prodres() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prodres"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let ok = write(
        dir.path(),
        "ok.toml",
        "reservoir_size = 5\ntrain_len = 200\ntest_len = 200\ntau_max = 4\nomega_grid = [0.2]\nlambda_grid = [0.5]\ntrials = 2\n",
    );
    let status = prodres()
        .args(["capacity", "--config"])
        .arg(&ok)
        .arg("--out")
        .arg(&out)
        .env("PRODRES_THREADS", "2")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(fs::read_dir(&out).unwrap().count(), 3);

    let bad = write(dir.path(), "bad.toml", "trials = 0\n");
    let status = prodres().args(["capacity", "--config"]).arg(&bad).status().unwrap();
    assert_eq!(status.code(), Some(1));

    let unknown = write(dir.path(), "unknown.toml", "no_such_key = 1\n");
    let status = prodres().args(["capacity", "--config"]).arg(&unknown).status().unwrap();
    assert_eq!(status.code(), Some(1));

    let status = prodres()
        .args(["predict", "--config"])
        .arg(dir.path().join("missing.toml"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    let status = prodres().args(["predict", "--config"]).arg(&ok).status().unwrap();
    assert_eq!(status.code(), Some(1), "capacity task given to predict");

    let diverge = write(
        dir.path(),
        "diverge.toml",
        "task = \"mackey_glass\"\nfamilies = [\"product\"]\nreservoir_size = 10\nomega_grid = [1.0]\nlambda_grid = [0.5]\nepsilon = 1e-300\ntrials = 2\n",
    );
    let status = prodres()
        .args(["predict", "--config"])
        .arg(&diverge)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let status = prodres().arg("no-such-command").status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn cli_seed_override_changes_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "reservoir_size = 4\ntrain_len = 100\ntest_len = 100\ntau_max = 3\nomega_grid = [0.2]\nlambda_grid = [0.5]\ntrials = 1\n",
    );
    let run = |seed: &str| {
        let out = prodres()
            .args(["capacity", "--format", "json", "--seed", seed, "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run("1");
    assert_ne!(a, run("2"));
    assert_eq!(a, run("1"));
}

#[test]
fn cli_generate_and_esp_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lz.csv");
    let status = prodres()
        .args(["generate", "--system", "lorenz", "--steps", "50", "--out"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let (names, m) = prodres::tasks::read_series_csv(&path).unwrap();
    assert_eq!(names, ["x", "y", "z"]);
    assert_eq!(m.nrows(), 50);

    let out = prodres()
        .args(["esp-check", "--lambda", "0.5", "--steps", "300"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let last: f64 = text.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(last < 1e-6);
    assert_eq!(text.lines().count(), 301);
}
