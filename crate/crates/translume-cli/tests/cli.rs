//! End-to-end tests of the `translume` binary: artifact layout, numeric
//! content, the determinism contract, and the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_translume")
}

fn run_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args).current_dir(dir);
    // Isolate from the ambient environment so tests control the worker pool.
    cmd.env_remove("TRANSLUME_WORKERS");
    for (key, value) in env {
        cmd.env(key, value);
    }
    cmd.output().expect("binary should spawn")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name))
        .unwrap_or_else(|e| panic!("missing artifact {name}: {e}"))
}

/// Byte-identity surface of a CSV file: everything except `#` comment lines.
fn csv_body(text: &str) -> String {
    text.lines()
        .filter(|line| !line.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let body = csv_body(text);
    let mut lines = body.lines();
    let header: Vec<String> = lines
        .next()
        .expect("csv has a header row")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn stdout_value(output: &Output, key: &str) -> Option<String> {
    let text = String::from_utf8_lossy(&output.stdout).to_string();
    text.lines()
        .find_map(|line| line.strip_prefix(&format!("{key}=")).map(str::to_string))
}

const BASE: &str = "\
[grating]
alpha = 0.05
g = 1.0
Omega = 1.0
d = 20.0
eps_b = 1.0
c0 = 1.0
";

#[test]
fn vacuum_is_deterministic_across_runs_and_worker_counts() {
    let temp = tempfile::tempdir().unwrap();
    let config = write_config(
        temp.path(),
        &format!("{BASE}\n[vacuum]\npoints = 24\nomega_span = 3.0\n")
            .replace("d = 20.0", "d = 6.283185307179586"),
    );

    let mut bodies = Vec::new();
    for (out_name, workers) in [("a", "1"), ("b", "1"), ("c", "2")] {
        let status = run_in(
            temp.path(),
            &[
                "vacuum",
                "--config",
                config.to_str().unwrap(),
                "--out",
                out_name,
                "--workers",
                workers,
            ],
            &[],
        );
        assert!(
            status.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&status.stderr)
        );
        let dir = temp.path().join(out_name);
        bodies.push((csv_body(&read(&dir, "vacuum.csv")), csv_body(&read(&dir, "thermal.csv"))));
    }
    assert_eq!(bodies[0], bodies[1], "repeat run must be byte-identical");
    assert_eq!(bodies[0], bodies[2], "worker count must not affect output");

    let (header, rows) = parse_csv(&bodies[0].0);
    assert_eq!(header, ["omega", "density"]);
    assert_eq!(rows.len(), 24);
    // Physics spot check: the spectrum peaks inside the first lobe.
    let densities: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let peak_at = (0..24).max_by(|&a, &b| densities[a].total_cmp(&densities[b])).unwrap();
    let omega_peak: f64 = rows[peak_at][0].parse().unwrap();
    assert!(omega_peak < 1.0, "peak at ω = {omega_peak}, expected < Ω");
}

#[test]
fn flat_grating_rays_are_straight_and_horizon_free() {
    let temp = tempfile::tempdir().unwrap();
    let config = write_config(
        temp.path(),
        &format!("{}\n[rays]\ncount = 3\nt_end = 10.0\n", BASE.replace("alpha = 0.05", "alpha = 0.0")),
    );
    let output = run_in(
        temp.path(),
        &["rays", "--config", config.to_str().unwrap(), "--out", "out"],
        &[],
    );
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));

    let dir = temp.path().join("out");
    for i in 0..3 {
        let (header, rows) = parse_csv(&read(&dir, &format!("ray_{i:02}.csv")));
        assert_eq!(header, ["t", "x", "X"]);
        let x0: f64 = rows[0][1].parse().unwrap();
        for row in &rows {
            let t: f64 = row[0].parse().unwrap();
            let x: f64 = row[1].parse().unwrap();
            // α = 0 ⇒ uniform speed c0/ε_b = 1.
            assert!((x - x0 - t).abs() < 1e-8, "ray {i} bent: t={t} x={x}");
        }
    }
    let (header, rows) = parse_csv(&read(&dir, "horizons.csv"));
    assert_eq!(header, ["X", "kind", "dcdX"]);
    assert!(rows.is_empty(), "flat grating must list no horizons");
}

#[test]
fn horizon_anchored_rays_demand_transluminal_grating() {
    let temp = tempfile::tempdir().unwrap();
    let config = write_config(
        temp.path(),
        &format!(
            "{}\n[rays]\nanchor = \"horizons\"\n",
            BASE.replace("alpha = 0.05", "alpha = 0.0")
        ),
    );
    let output = run_in(
        temp.path(),
        &["rays", "--config", config.to_str().unwrap(), "--out", "out"],
        &[],
    );
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("transluminal"), "stderr: {stderr}");
}

#[test]
fn spectrum_table_and_metadata_are_consistent() {
    let temp = tempfile::tempdir().unwrap();
    let config = write_config(
        temp.path(),
        &format!("{BASE}\n[spectrum]\nk_tilde = 0.75\nn = 1\nn_prime_min = -3\nn_prime_max = -1\n"),
    );
    let output = run_in(
        temp.path(),
        &["spectrum", "--config", config.to_str().unwrap(), "--out", "out"],
        &[],
    );
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));

    let dir = temp.path().join("out");
    let (header, rows) = parse_csv(&read(&dir, "spectrum.csv"));
    assert_eq!(header, ["n_prime", "reF", "imF", "absF2"]);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let re: f64 = row[1].parse().unwrap();
        let im: f64 = row[2].parse().unwrap();
        let abs2: f64 = row[3].parse().unwrap();
        assert!((re * re + im * im - abs2).abs() <= 1e-15 * abs2.max(1e-30));
    }

    let meta: serde_json::Value =
        serde_json::from_str(&read(&dir, "spectrum_meta.json")).unwrap();
    let gamma = meta["gamma"].as_f64().unwrap();
    assert!((gamma - (-2.0f64).exp()).abs() < 1e-12);
    let t_h = meta["T_H"].as_f64().unwrap();
    assert!((t_h - 0.25 * (2.0f64).exp()).abs() < 1e-12);
}

#[test]
fn stimulated_reports_total_and_alias_signature() {
    let temp = tempfile::tempdir().unwrap();
    let config = write_config(
        temp.path(),
        &format!("{BASE}\n[stimulated]\nk_tilde = 0.75\nn = 1\n"),
    );
    let output = run_in(
        temp.path(),
        &["stimulated", "--config", config.to_str().unwrap(), "--out", "out"],
        &[],
    );
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));

    let total: f64 = stdout_value(&output, "total_negative_fraction")
        .expect("summary line present")
        .parse()
        .unwrap();
    assert!(
        (total - 7.300346e-3).abs() < 1e-6,
        "total fraction {total} far from the d=20 reference"
    );
    let positive: f64 = stdout_value(&output, "alias_positive").unwrap().parse().unwrap();
    let negative: f64 = stdout_value(&output, "alias_negative").unwrap().parse().unwrap();
    assert!((positive - 0.75).abs() < 1e-12);
    assert!((negative - 0.25).abs() < 1e-12);
    assert_eq!(stdout_value(&output, "alias_degenerate").unwrap(), "false");

    let (header, rows) = parse_csv(&read(&temp.path().join("out"), "stimulated.csv"));
    assert_eq!(header, ["n_prime", "fraction"]);
    assert!(!rows.is_empty());
    assert_eq!(rows[0][0], "-1", "leading output order is n′ = −1");
}

#[test]
fn sweep_reproduces_both_window_lengths_worker_independently() {
    let temp = tempfile::tempdir().unwrap();
    let config = write_config(
        temp.path(),
        &format!(
            "{BASE}\n[stimulated]\nk_tilde = 0.75\nn = 1\n\n[sweep]\ncommand = \"stimulated\"\n\
             [sweep.lists]\nd = [20.0, 40.0]\n"
        ),
    );

    let mut bodies = Vec::new();
    for (out_name, workers) in [("a", "1"), ("b", "2")] {
        let output = run_in(
            temp.path(),
            &[
                "sweep",
                "--config",
                config.to_str().unwrap(),
                "--out",
                out_name,
                "--workers",
                workers,
            ],
            &[],
        );
        assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
        bodies.push(csv_body(&read(&temp.path().join(out_name), "sweep.csv")));
    }
    assert_eq!(bodies[0], bodies[1], "sweep must be worker-count independent");

    let (header, rows) = parse_csv(&bodies[0]);
    assert_eq!(header, ["d", "total_negative_fraction"]);
    assert_eq!(rows.len(), 2);
    let totals: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap()))
        .collect();
    assert_eq!(totals[0].0, 20.0);
    assert_eq!(totals[1].0, 40.0);
    assert!((totals[0].1 - 7.300346e-3).abs() < 1e-6);
    assert!((totals[1].1 - 4.43197e-2).abs() < 1e-5);
}

#[test]
fn sweep_without_lists_exits_with_usage_error() {
    let temp = tempfile::tempdir().unwrap();
    let config = write_config(
        temp.path(),
        &format!("{BASE}\n[stimulated]\nk_tilde = 0.75\nn = 1\n\n[sweep]\ncommand = \"stimulated\"\n"),
    );
    let output = run_in(
        temp.path(),
        &["sweep", "--config", config.to_str().unwrap(), "--out", "out"],
        &[],
    );
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("sweep.lists"), "stderr: {stderr}");
}

#[test]
fn exit_code_contract() {
    let temp = tempfile::tempdir().unwrap();

    // Unreadable config file.
    let output = run_in(temp.path(), &["vacuum", "--config", "absent.toml"], &[]);
    assert_eq!(output.status.code(), Some(2));

    // Malformed syntax.
    let broken = write_config(temp.path(), "[grating]\nalpha = \n");
    let output = run_in(temp.path(), &["vacuum", "--config", broken.to_str().unwrap()], &[]);
    assert_eq!(output.status.code(), Some(2));

    // Physically inadmissible parameter, named in the message.
    let invalid = temp.path().join("invalid.toml");
    std::fs::write(&invalid, BASE.replace("alpha = 0.05", "alpha = -0.1")).unwrap();
    let output = run_in(temp.path(), &["vacuum", "--config", invalid.to_str().unwrap()], &[]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("alpha"));

    // Bad worker-count environment variable.
    let good = write_config(temp.path(), BASE);
    let output = run_in(
        temp.path(),
        &["vacuum", "--config", good.to_str().unwrap()],
        &[("TRANSLUME_WORKERS", "many")],
    );
    assert_eq!(output.status.code(), Some(2));

    // Numerical failure: a window so long the exponential overflow guard
    // refuses the transmission problem.
    let huge = temp.path().join("huge.toml");
    std::fs::write(
        &huge,
        format!("{}\n[vacuum]\npoints = 2\n", BASE.replace("d = 20.0", "d = 1.0e9")),
    )
    .unwrap();
    let output = run_in(
        temp.path(),
        &["vacuum", "--config", huge.to_str().unwrap(), "--out", "out"],
        &[],
    );
    assert_eq!(
        output.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn vacuum_json_format_and_flat_grating_emit_zero() {
    let temp = tempfile::tempdir().unwrap();
    let config = write_config(
        temp.path(),
        &format!(
            "{}\n[vacuum]\npoints = 8\n",
            BASE.replace("alpha = 0.05", "alpha = 0.0")
        ),
    );
    let output = run_in(
        temp.path(),
        &[
            "vacuum",
            "--config",
            config.to_str().unwrap(),
            "--out",
            "out",
            "--format",
            "json",
        ],
        &[],
    );
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));

    let doc: serde_json::Value =
        serde_json::from_str(&read(&temp.path().join("out"), "vacuum.json")).unwrap();
    let data = doc["data"].as_array().unwrap();
    assert_eq!(data.len(), 8);
    for entry in data {
        assert_eq!(entry["density"].as_f64().unwrap(), 0.0);
        assert!(entry["omega"].as_f64().unwrap() > 0.0);
    }
    // No thermal decay to fit on an all-zero spectrum.
    let thermal: serde_json::Value =
        serde_json::from_str(&read(&temp.path().join("out"), "thermal.json")).unwrap();
    assert_eq!(thermal["data"].as_array().unwrap().len(), 0);
}

#[test]
fn vacuum_d_sweep_writes_one_file_per_length() {
    let temp = tempfile::tempdir().unwrap();
    let config = write_config(
        temp.path(),
        &format!(
            "{BASE}\n[vacuum]\npoints = 12\nd_sweep = [3.141592653589793, 6.283185307179586]\n"
        ),
    );
    let output = run_in(
        temp.path(),
        &["vacuum", "--config", config.to_str().unwrap(), "--out", "out"],
        &[],
    );
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));

    let dir = temp.path().join("out");
    let (_, short_rows) = parse_csv(&read(&dir, "vacuum_0.csv"));
    let (_, long_rows) = parse_csv(&read(&dir, "vacuum_1.csv"));
    assert_eq!(short_rows.len(), 12);
    assert_eq!(long_rows.len(), 12);
    // The longer window radiates more at the spectral peak.
    let peak = |rows: &[Vec<String>]| -> f64 {
        rows.iter()
            .map(|r| r[1].parse::<f64>().unwrap())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    assert!(peak(&long_rows) > peak(&short_rows));
}
