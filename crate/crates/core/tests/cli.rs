use std::process::Command;

use nsk_limit::cli::run_in;
use nsk_limit::io::read_snapshot;

fn read(dir: &std::path::Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn simulate_writes_diagnostics_audit_and_snapshots() {
    let d = tempfile::tempdir().unwrap();
    let code = run_in(
        d.path(),
        &["simulate", "--set", "n=16", "--set", "length=8", "--set", "epsilon=0.2", "--set", "t_end=0.05", "--set", "stride=2"],
    );
    assert_eq!(code, 0);
    let csv = read(d.path(), "diagnostics.csv");
    assert!(csv.starts_with("t,mass,energy,bd_entropy,dissipation,min_rho\n"));
    let audit: serde_json::Value = serde_json::from_str(&read(d.path(), "energy_audit.json")).unwrap();
    assert!(audit["relative_residual"].as_f64().unwrap() < 1e-3);
    let snap = read_snapshot(&d.path().join("snap_0000.nsk"), None).unwrap();
    assert_eq!(snap.grid.n(), 16);
    assert_eq!(snap.t, 0.0);
}

#[test]
fn dispersion_check_reports_second_order() {
    let d = tempfile::tempdir().unwrap();
    let code = run_in(d.path(), &["dispersion-check", "--set", "n=32", "--set", "length=16", "--set", "epsilon=0.1"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&read(d.path(), "rates.json")).unwrap();
    let slope = v[0]["slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 0.1, "{slope}");
    assert_eq!(read(d.path(), "dispersion.csv").lines().count(), 6);
}

#[test]
fn acoustic_decay_writes_table() {
    let d = tempfile::tempdir().unwrap();
    let code = run_in(
        d.path(),
        &[
            "acoustic-decay", "--set", "dimension=3", "--set", "n=16", "--set", "length=8",
            "--set", "norm_q=6", "--set", "epsilon_list=0.2,0.1,0.05",
        ],
    );
    assert_eq!(code, 0);
    assert_eq!(read(d.path(), "decay.csv").lines().count(), 4);
    let v: serde_json::Value = serde_json::from_str(&read(d.path(), "rates.json")).unwrap();
    assert_eq!(v[0]["metric"], "strichartz");
}

#[test]
fn euler_then_norms() {
    let d = tempfile::tempdir().unwrap();
    let code = run_in(
        d.path(),
        &["euler", "--set", "n=16", "--set", "length=8", "--set", "t_end=0.2", "--set", "stride=2"],
    );
    assert_eq!(code, 0);
    assert_eq!(read(d.path(), "euler.csv").lines().count(), 4);
    let snap = d.path().join("euler_final.nsk");
    let n = tempfile::tempdir().unwrap();
    let code = run_in(n.path(), &["norms", "--set", &format!("snapshot={}", snap.display())]);
    assert_eq!(code, 0);
    let norms = read(n.path(), "norms.csv");
    assert!(norms.starts_with("field,norm\nu0,"));
    assert!(norms.contains("\npi,"));
}

#[test]
fn limit_sweep_is_byte_reproducible() {
    let args = [
        "limit-sweep", "--set", "n=16", "--set", "length=8", "--set", "epsilon_list=0.2,0.1,0.05",
        "--set", "t_end=0.05",
    ];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run_in(a.path(), &args), 0);
    assert_eq!(run_in(b.path(), &args), 0);
    for f in ["sweep.csv", "rates.json", "sweep_detail.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    assert!(read(a.path(), "sweep.csv").starts_with("epsilon,nu,sup_rel_energy,l2loc_vel_err,strichartz_q6,rho_h_s_err,rei_slack\n"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_nsk");
    let d = tempfile::tempdir().unwrap();
    let status = |args: &[&str]| {
        Command::new(bin).args(args).arg("--out").arg(d.path()).output().unwrap().status.code().unwrap()
    };
    assert_eq!(status(&["simulate", "--set", "gamma=0.5"]), 2);
    assert_eq!(status(&["simulate", "--set", "bogus=1"]), 2);
    assert_eq!(status(&["norms", "--set", "snapshot=/nonexistent/x.nsk"]), 3);
    assert_eq!(status(&["no-such-command"]), 2);
    let bad = d.path().join("bad.nsk");
    std::fs::write(&bad, b"NOTASNAPSHOT").unwrap();
    assert_eq!(status(&["norms", "--set", &format!("snapshot={}", bad.display())]), 3);
    // a timestep far beyond the stability bound aborts the run
    assert_eq!(
        status(&["simulate", "--set", "n=16", "--set", "length=8", "--set", "dt=1", "--set", "t_end=1"]),
        1
    );
}

#[test]
fn thread_count_from_environment() {
    let bin = env!("CARGO_BIN_EXE_nsk");
    let d = tempfile::tempdir().unwrap();
    let out = Command::new(bin)
        .env("NSK_THREADS", "zero")
        .args(["dispersion-check", "--set", "n=16", "--set", "length=8"])
        .arg("--out")
        .arg(d.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NSK_THREADS"));
}
