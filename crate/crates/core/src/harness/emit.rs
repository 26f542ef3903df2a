//! Output writers: CSV series, pass/fail summary, matplotlib script.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::EstimatorKind;
use super::runner::{CheckOutcome, Outcome, RunResult, SweepResult};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Summary,
    PlotScript,
}

/// Writes one artifact for a single run.
pub fn emit(result: &RunResult, format: Format, path: &Path) -> Result<()> {
    let text = match format {
        Format::Csv => csv_string(result),
        Format::Summary => summary_string(result),
        Format::PlotScript => plot_script(result, &csv_name(result)),
    };
    fs::write(path, text)?;
    Ok(())
}

/// Header columns, in order, for the estimators the run carried.
pub fn csv_columns(result: &RunResult) -> Vec<&'static str> {
    let cfg = &result.config;
    let mut cols = vec!["t"];
    if cfg.has(EstimatorKind::RlsMre) {
        cols.push("err_rls");
    }
    if cfg.has(EstimatorKind::Gradient) {
        cols.push("err_grad");
    }
    if cfg.has(EstimatorKind::IntegratorPi) {
        cols.push("err_pi");
    }
    if cfg.has(EstimatorKind::RlsMre) {
        cols.push("norm_Gamma");
    }
    cols.push("lam_min_Omega");
    cols
}

/// Comma-separated, `.` decimal, LF line endings, header row first.
pub fn csv_string(result: &RunResult) -> String {
    let cols = csv_columns(result);
    let s = &result.series;
    let column = |name: &str| -> &Vec<f64> {
        match name {
            "t" => &s.t,
            "err_rls" => &s.err_rls,
            "err_grad" => &s.err_grad,
            "err_pi" => &s.err_pi,
            "norm_Gamma" => &s.norm_gamma,
            _ => &s.lam_min_omega,
        }
    };
    let data: Vec<&Vec<f64>> = cols.iter().map(|c| column(c)).collect();

    let mut out = cols.join(",");
    out.push('\n');
    for i in 0..s.len() {
        for (j, col) in data.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{:.10e}", col[i]);
        }
        out.push('\n');
    }
    out
}

fn check_lines(out: &mut String, checks: &[CheckOutcome]) {
    for c in checks {
        let _ = writeln!(out, "{}: {}", c.name, if c.passed { "PASS" } else { "FAIL" });
    }
}

/// `name: PASS|FAIL` per check, then details and the computed constants.
pub fn summary_string(result: &RunResult) -> String {
    let mut out = String::new();
    check_lines(&mut out, &result.checks);
    let _ = writeln!(out, "\n# run {}", result.config.name);
    for c in &result.checks {
        let _ = writeln!(out, "#   {}: {}", c.name, c.detail);
    }
    let ex = &result.excitation;
    let _ = writeln!(out, "# initial_error = {:.6e}", result.initial_error);
    let last = |v: &Vec<f64>| v.last().map_or("n/a".to_string(), |x| format!("{x:.6e}"));
    let _ = writeln!(out, "# final err_rls = {}", last(&result.series.err_rls));
    let _ = writeln!(out, "# final err_grad = {}", last(&result.series.err_grad));
    let _ = writeln!(out, "# final err_pi = {}", last(&result.series.err_pi));
    let opt = |v: Option<f64>| v.map_or("none".to_string(), |x| format!("{x:.6e}"));
    let _ = writeln!(out, "# time_to_threshold = {}", opt(result.time_to_threshold));
    let _ = writeln!(out, "# T_detect = {}", opt(ex.t_detect));
    let _ = writeln!(out, "# alpha = {:.6e}", ex.alpha);
    let _ = writeln!(out, "# rank_W = {}", ex.rank_w);
    if let Some(pe) = ex.pe_met_window {
        let _ = writeln!(out, "# pe_met_window = {pe}");
    }
    for e in &result.resets {
        let _ = writeln!(
            out,
            "# reset at t = {:.4} s (step {}), setpoint {}, hard = {}",
            e.t, e.step, e.setpoint, e.hard
        );
    }
    if let Some(b) = &result.bounds {
        let _ = writeln!(out, "# bounds (Gamma^-1 extremes at t_end)");
        for (k, v) in [
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
        ] {
            let _ = writeln!(out, "#   {k} = {v:.6e}");
        }
    }
    out
}

/// Summary of a sweep: cross-run checks first, then each member.
pub fn sweep_summary_string(result: &SweepResult) -> String {
    let mut out = String::new();
    check_lines(&mut out, &result.checks);
    for c in &result.checks {
        let _ = writeln!(out, "#   {}: {}", c.name, c.detail);
    }
    for m in &result.members {
        out.push('\n');
        out.push_str(&summary_string(m));
    }
    out
}

fn csv_name(result: &RunResult) -> String {
    format!("{}.csv", result.config.name)
}

/// Python script that plots the CSV written next to it.
pub fn plot_script(result: &RunResult, csv_file: &str) -> String {
    let cols = csv_columns(result);
    let errs: Vec<&str> = cols.iter().copied().filter(|c| c.starts_with("err_")).collect();
    let has_gamma = cols.contains(&"norm_Gamma");
    let mut s = String::new();
    let _ = writeln!(s, "import csv");
    let _ = writeln!(s, "import os");
    let _ = writeln!(s, "import matplotlib.pyplot as plt");
    let _ = writeln!(s);
    let _ = writeln!(s, "here = os.path.dirname(os.path.abspath(__file__))");
    let _ = writeln!(s, "with open(os.path.join(here, {csv_file:?})) as f:");
    let _ = writeln!(s, "    rows = list(csv.DictReader(f))");
    let _ = writeln!(s, "col = lambda k: [float(r[k]) for r in rows]");
    let _ = writeln!(s, "t = col('t')");
    let panels = 2 + usize::from(has_gamma);
    let _ = writeln!(s, "fig, axes = plt.subplots({panels}, 1, sharex=True, figsize=(7, {}))", 2.5 * panels as f64);
    for e in &errs {
        let _ = writeln!(s, "axes[0].semilogy(t, col('{e}'), label='{e}')");
    }
    let _ = writeln!(s, "axes[0].set_ylabel('parameter error norm')");
    let _ = writeln!(s, "axes[0].legend()");
    let mut p = 1;
    if has_gamma {
        let _ = writeln!(s, "axes[{p}].semilogy(t, col('norm_Gamma'))");
        let _ = writeln!(s, "axes[{p}].set_ylabel('||Gamma||')");
        p += 1;
    }
    let _ = writeln!(s, "axes[{p}].plot(t, col('lam_min_Omega'))");
    let _ = writeln!(s, "axes[{p}].set_ylabel('lambda_min(Omega)')");
    let _ = writeln!(s, "axes[{p}].set_xlabel('t, s')");
    let _ = writeln!(s, "fig.suptitle({:?})", result.config.name);
    let _ = writeln!(s, "fig.tight_layout()");
    let _ = writeln!(
        s,
        "fig.savefig(os.path.join(here, {:?}))",
        format!("{}.png", result.config.name)
    );
    s
}

/// Writes CSV, summary and plot script for every run of `outcome` into
/// `dir`, returning the paths written.
pub fn write_all(outcome: &Outcome, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut one = |r: &RunResult| -> Result<()> {
        for (fmt, ext) in [
            (Format::Csv, "csv"),
            (Format::Summary, "summary.txt"),
            (Format::PlotScript, "plot.py"),
        ] {
            let path = dir.join(format!("{}.{ext}", r.config.name));
            emit(r, fmt, &path)?;
            written.push(path);
        }
        Ok(())
    };
    match outcome {
        Outcome::Single(r) => one(r)?,
        Outcome::Sweep(s) => {
            for m in &s.members {
                one(m)?;
            }
            let path = dir.join(format!("{}.summary.txt", s.config.name));
            fs::write(&path, sweep_summary_string(s))?;
            written.push(path);
        }
    }
    Ok(written)
}
