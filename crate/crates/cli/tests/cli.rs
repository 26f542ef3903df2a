use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mre-id"))
}

#[test]
fn preset_list_names_all_six() {
    let out = bin().arg("preset-list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for k in 1..=6 {
        assert!(text.contains(&format!("exp{k}\t")));
    }
}

#[test]
fn run_writes_artifacts_and_exit_code_reflects_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("short.conf");
    fs::write(&cfg, "name = short\nt_end = 1.5\nchecks = omega_bound\n").unwrap();
    let out = bin()
        .args(["run", "--preset", "exp1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .args(["--decimate", "50"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("short.csv")).unwrap();
    assert!(csv.starts_with("t,err_rls,err_grad,norm_Gamma,lam_min_Omega\n"));
    assert_eq!(csv.lines().count(), 1 + 300);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("omega_bound: PASS\n"));
    assert!(dir.path().join("short.plot.py").exists());

    // a check that cannot pass on a short horizon turns the exit code red
    fs::write(&cfg, "name = short\nt_end = 1.5\nchecks = rls_converged\n").unwrap();
    let out = bin()
        .args(["run", "--preset", "exp1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    fs::write(&cfg, "name = seeded\nt_end = 0.2\nseed = 1\nnoise.power = 1\n").unwrap();
    let run = |seed: &str, sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = bin()
            .args(["run", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out_dir)
            .args(["--seed", seed])
            .output()
            .unwrap();
        assert!(out.status.success());
        fs::read_to_string(out_dir.join("seeded.csv")).unwrap()
    };
    assert_eq!(run("7", "a"), run("7", "b"));
    assert_ne!(run("7", "a"), run("8", "c"));
}

#[test]
fn excite_check_and_check_bounds_print_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.conf");
    fs::write(&cfg, "t_end = 3\nchecks = omega_bound\n").unwrap();
    let out = bin().args(["excite-check", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ie_met = true"));
    assert!(text.contains("rank_W = 4"));

    let out = bin().args(["check-bounds", "--config"]).arg(&cfg).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("kappa = "));
    assert!(text.contains("omega_bound: PASS"));
}

#[test]
fn bad_inputs_exit_with_error() {
    let out = bin().args(["run", "--preset", "exp9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "beta = 2\nwat = 3\n").unwrap();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
