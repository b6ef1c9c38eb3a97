use std::path::Path;
use std::process::{Command, Output};

use nopo_xy_cli::CliError;
use serde_json::Value;

fn nopo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nopo-xy"))
        .args(args)
        .env_remove("NOPO_XY_THREADS")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn small_run(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "run",
        "--set",
        "graph.n_spins=8",
        "--set",
        "run.n_trajectories=3",
        "--set",
        "acquisition.t_a=[\"0.5 ms\", \"1 ms\"]",
        "--seed",
        "2",
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    nopo(&args)
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn preset_run_writes_samples_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = small_run(dir.path(), &["--preset", "fig5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("samples_p00.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("trajectory_id,t_a_seconds,k,theta_k,theta_rel_k"));
    assert_eq!(lines.count(), 3 * 2 * 8);
    let s = summary(dir.path());
    assert_eq!(s["points"].as_array().unwrap().len(), 4);
    assert_eq!(s["points"][1]["beta_set"], 5.7);
    assert!(s["points"][0]["results"][1]["beta_mle"]["beta_eff"].is_number());
}

#[test]
fn unknown_key_is_a_spec_error_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = small_run(dir.path(), &["--preset", "fig5", "--set", "noise.sigma=1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("noise.sigma"));
}

#[test]
fn conflicting_rates_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = small_run(dir.path(), &["--preset", "fig5", "--set", "coupling.transmittance=0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("coupling."));
}

#[test]
fn bad_units_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let o = small_run(dir.path(), &["--preset", "fig5", "--set", "coupling.gamma_inj=3 furlongs"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("coupling.gamma_inj"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let o = small_run(&file.join("sub"), &["--preset", "fig5"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn numerical_failures_exit_with_two() {
    let e = CliError::Core(nopo_xy::Error::Diverged { step: 3 });
    assert_eq!(e.exit_code(), 2);
    let spec = CliError::Spec {
        field: "x".into(),
        reason: "bad".into(),
    };
    assert_eq!(spec.exit_code(), 1);
}

#[test]
fn injection_rate_follows_root_transmittance() {
    let rate = |t: &str| {
        let dir = tempfile::tempdir().unwrap();
        let o = small_run(
            dir.path(),
            &["--set", &format!("coupling.transmittance={t}"), "--set", "noise.d_theta=\"1 kHz\""],
        );
        assert!(o.status.success(), "{}", stderr(&o));
        summary(dir.path())["points"][0]["gamma_inj_hz"].as_f64().unwrap()
    };
    let (a, b) = (rate("0.01"), rate("0.04"));
    assert!((a - 2.0 * 0.1 / 5e-6).abs() < 1e-6 * a);
    assert!((b / a - 2.0).abs() < 1e-12);
}

#[test]
fn config_file_and_overrides_merge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "model = \"kuramoto\"\n[coupling]\ngamma_inj = \"2 kHz\"\n[sweep]\nvary = \"d_theta\"\nbeta_set = [1.0, 3.0]\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = small_run(&out, &["--config", cfg.to_str().unwrap(), "--set", "sweep.beta_set=[4.0]"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = summary(&out);
    let points = s["points"].as_array().unwrap();
    assert_eq!(points.len(), 1);
    assert!((points[0]["d_theta_hz"].as_f64().unwrap() - 500.0).abs() < 1e-9);
}

#[test]
fn split_model_records_photon_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let o = nopo(&[
        "run",
        "--set",
        "model=\"split\"",
        "--set",
        "graph.n_spins=4",
        "--set",
        "run.n_trajectories=2",
        "--set",
        "opo.gamma_s=1000",
        "--set",
        "opo.gamma_i=1e5",
        "--set",
        "opo.gamma_p=1e5",
        "--set",
        "coupling.gamma_inj=1",
        "--set",
        "noise.d_theta=0.5",
        "--set",
        "run.dt=5e-5",
        "--set",
        "acquisition.t_a=[0.5]",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("samples_p00.csv")).unwrap();
    assert!(csv.starts_with("trajectory_id,t_a_seconds,k,theta_k,theta_rel_k,photon_number_k\n"));
    let diag = &summary(dir.path())["points"][0]["photon_diagnostics"];
    assert!(diag["mean_photon_number"].as_f64().unwrap() > 0.0);
}

#[test]
fn analytics_table_lists_every_pair() {
    let o = nopo(&["analytics", "--betas", "0.5,2", "--sizes", "3,5000"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "N,beta,log_Z,mean_energy_exact,mean_energy_approx,max_pdf_gap");
    assert_eq!(rows.len(), 5);
    let big: Vec<f64> = rows[3].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((big[3] - big[4]).abs() / 5000.0 < 1e-10);
}

#[test]
fn mcmc_writes_chains_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = nopo(&[
        "mcmc",
        "--beta",
        "2",
        "--n-spins",
        "16",
        "--samples",
        "20",
        "--chains",
        "2",
        "--burn-in",
        "50",
        "--adapt",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("chains.csv").exists());
    let s = summary(dir.path());
    assert!(s.is_object());
    let stdout: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(stdout, s);
}

#[test]
fn validate_opo_passes_and_unknown_suite_fails() {
    let o = nopo(&["validate-opo"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["report"]["passed"], true);
    let o = nopo(&["validate", "nonsense"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("suite"));
}

#[test]
fn zero_threads_is_rejected() {
    let o = nopo(&["--threads", "0", "analytics", "--betas", "1", "--sizes", "3"]);
    assert_eq!(o.status.code(), Some(1));
}
