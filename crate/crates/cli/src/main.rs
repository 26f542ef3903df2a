use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mre_id::excitation::ExcitationReport;
use mre_id::harness::{self, ExperimentConfig, Outcome, RunResult};

/// Identify LTI plant parameters with memory regressor extension and
/// forgetting-factor least squares.
#[derive(Parser)]
#[command(name = "mre-id", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write CSV, summary and plot script.
    Run(RunArgs),
    /// List the built-in presets.
    PresetList,
    /// Run an experiment and print the computed bounds and bound checks.
    CheckBounds(RunArgs),
    /// Run an experiment and print the excitation report.
    ExciteCheck(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` configuration file, applied over the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Starting preset (exp1..exp6).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Store every N-th step; 1 keeps the full rate.
    #[arg(long)]
    decimate: Option<usize>,
    /// Zero Omega and Upsilon at setpoint changes.
    #[arg(long)]
    hard_reset: bool,
    #[arg(long)]
    seed: Option<u64>,
}

impl RunArgs {
    /// Preset, then config file, then flags.
    fn resolve(&self) -> mre_id::Result<ExperimentConfig> {
        let mut cfg = match &self.preset {
            Some(p) => harness::preset(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)?;
            cfg.apply_text(&text)?;
        }
        if let Some(d) = self.decimate {
            cfg.decimate = d;
        }
        if self.hard_reset {
            cfg.hard_reset = true;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> mre_id::Result<bool> {
    match cmd {
        Command::PresetList => {
            for (name, about) in harness::PRESETS {
                println!("{name}\t{about}");
            }
            Ok(true)
        }
        Command::Run(args) => {
            let cfg = args.resolve()?;
            let outcome = harness::execute(&cfg)?;
            for path in harness::write_all(&outcome, &args.out)? {
                eprintln!("wrote {}", path.display());
            }
            print!("{}", summary(&outcome));
            Ok(outcome.all_passed())
        }
        Command::CheckBounds(args) => {
            let outcome = harness::execute(&args.resolve()?)?;
            for r in runs(&outcome) {
                println!("[{}]", r.config.name);
                match &r.bounds {
                    Some(b) => print!("{}", bounds_table(b)),
                    None => println!("bounds unavailable: excitation not detected or rls_mre not run"),
                }
                for c in &r.checks {
                    println!("{}: {}  ({})", c.name, pass(c.passed), c.detail);
                }
            }
            Ok(outcome.all_passed())
        }
        Command::ExciteCheck(args) => {
            let outcome = harness::execute(&args.resolve()?)?;
            let mut ok = true;
            for r in runs(&outcome) {
                println!("[{}]", r.config.name);
                print!("{}", excitation_table(&r.excitation));
                ok &= r.excitation.ie_met;
            }
            Ok(ok)
        }
    }
}

fn runs(outcome: &Outcome) -> Vec<&RunResult> {
    match outcome {
        Outcome::Single(r) => vec![r],
        Outcome::Sweep(s) => s.members.iter().collect(),
    }
}

fn summary(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Single(r) => harness::summary_string(r),
        Outcome::Sweep(s) => harness::sweep_summary_string(s),
    }
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn bounds_table(b: &mre_id::bounds::BoundsReport) -> String {
    [
        ("T_used", b.t_used),
        ("delta", b.delta),
        ("omega_cap", b.omega_cap),
        ("eps_max", b.eps_max),
        ("lam_min_Omega_T", b.lam_min_omega_t),
        ("lam_min_Ginv", b.lam_min_ginv),
        ("lam_max_Ginv", b.lam_max_ginv),
        ("kappa", b.kappa),
        ("r_small", b.r_small),
        ("R_ultimate", b.r_ultimate),
        ("gamma_pre_T(t=0)", b.gamma_pre_t),
        ("gamma_limit", b.gamma_limit),
    ]
    .iter()
    .map(|(k, v)| format!("{k} = {v:.6e}\n"))
    .collect()
}

fn excitation_table(e: &ExcitationReport) -> String {
    let t = e.t_detect.map_or("none".into(), |t| format!("{t:.6}"));
    let pe = e.pe_met_window.map_or("not evaluated".into(), |b| b.to_string());
    format!(
        "ie_met = {}\nT_detect = {t}\nalpha = {:.6e}\npe_met_window = {pe}\nrank_W = {}\n",
        e.ie_met, e.alpha, e.rank_w
    )
}
