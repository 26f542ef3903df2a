use mre_id::harness::{
    csv_string, execute, preset, run, write_all, CheckKind, EstimatorKind, ExperimentConfig, InputSpec, Outcome,
};

fn short_noisy() -> ExperimentConfig {
    let mut cfg = preset("exp5").unwrap();
    cfg.t_end = 2.0;
    cfg
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = csv_string(&run(&short_noisy()).unwrap());
    let b = csv_string(&run(&short_noisy()).unwrap());
    assert_eq!(a, b);
}

#[test]
fn different_seeds_differ() {
    let mut other = short_noisy();
    other.seed += 1;
    assert_ne!(csv_string(&run(&short_noisy()).unwrap()), csv_string(&run(&other).unwrap()));
}

#[test]
fn decimation_does_not_change_verdicts() {
    let mut cfg = preset("exp1").unwrap();
    cfg.t_end = 6.0;
    cfg.checks = CheckKind::ALL.to_vec();
    cfg.estimators = EstimatorKind::ALL.to_vec();
    cfg.decimate = 1;
    let full = run(&cfg).unwrap();
    cfg.decimate = 100;
    let thin = run(&cfg).unwrap();
    assert_eq!(full.checks, thin.checks);
    assert_eq!(full.series.len(), 60_000);
    assert_eq!(thin.series.len(), 600);
    assert_eq!(full.series.err_rls[99], thin.series.err_rls[0]);
}

#[test]
fn detection_time_is_early_and_stable() {
    let mut cfg = preset("exp1").unwrap();
    cfg.t_end = 5.0;
    let a = run(&cfg).unwrap().excitation;
    let b = run(&cfg).unwrap().excitation;
    let t = a.t_detect.unwrap();
    assert!(t < 5.0);
    assert_eq!(a.t_detect, b.t_detect);
    assert_eq!(a.rank_w, 4);
}

#[test]
fn zero_input_stays_at_initial_error() {
    let mut cfg = preset("exp1").unwrap();
    cfg.t_end = 3.0;
    cfg.input = InputSpec::Constant(0.0);
    cfg.checks = vec![CheckKind::OmegaBound];
    let r = run(&cfg).unwrap();
    assert!(!r.excitation.ie_met);
    assert!(r.series.err_rls.iter().all(|&e| e == r.initial_error));
    assert!(r.series.err_grad.iter().all(|&e| e == r.initial_error));
}

#[test]
fn schedule_resets_keep_memory_unless_hard() {
    let mut cfg = preset("exp1").unwrap();
    cfg.t_end = 4.0;
    cfg.input = InputSpec::Schedule(vec![(0.0, 100.0), (2.0, 40.0)]);
    cfg.checks = vec![CheckKind::OmegaBound];
    let soft = run(&cfg).unwrap();
    cfg.hard_reset = true;
    let hard = run(&cfg).unwrap();
    assert_eq!(soft.resets.len(), 1);
    assert!(hard.resets[0].hard && !soft.resets[0].hard);
    let k = soft.series.t.iter().position(|&t| t > 2.0 + 1e-9).unwrap();
    assert!(hard.series.lam_min_omega[k] < soft.series.lam_min_omega[k]);
}

#[test]
fn sweep_writes_every_member() {
    let mut cfg = preset("exp4").unwrap();
    cfg.t_end = 1.0;
    cfg.checks = vec![CheckKind::OmegaBound];
    cfg.fixed_t = 0.5;
    let outcome = execute(&cfg).unwrap();
    let Outcome::Sweep(s) = &outcome else { panic!("expected a sweep") };
    assert_eq!(s.members.len(), 3);
    let dir = tempfile::tempdir().unwrap();
    let paths = write_all(&outcome, dir.path()).unwrap();
    assert_eq!(paths.len(), 10);
    assert!(dir.path().join("exp4_beta=0.5.csv").exists());
}

#[test]
fn config_text_drives_a_run() {
    let text = "
        name = first_order
        num = 2
        den = 1, 3
        lambdas = 5
        x0 = 0
        input = multisine 1@1, 0.5@3
        t_end = 3
        estimators = rls_mre
        checks = omega_bound, regression_identity
    ";
    let cfg = ExperimentConfig::parse(text).unwrap();
    let r = run(&cfg).unwrap();
    assert_eq!(r.theta.as_vector().as_slice(), &[2.0, -2.0]);
    assert!(r.excitation.ie_met);
    assert!(r.check("omega_bound").unwrap().passed);
    assert!(r.check("regression_identity").unwrap().detail.starts_with("not applicable"));
}
