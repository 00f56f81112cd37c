use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use ptjc::entanglement::{asymptotic_concurrence, concurrence_series, frequency_census, TimeSeries};
use ptjc::model::{big_omega, classify, exact_spectrum, ground_energy};
use ptjc::oracle::linspace;
use ptjc::{verify, Params, TwoSystem};
use rayon::prelude::*;

use crate::table::{Cell, Format, Table};
use crate::{Command, ModelArgs, OutputArgs, StateArgs, TimeArgs};

pub enum Status {
    Ok,
    ChecksFailed,
}

/// Rejected user input; maps to exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// The κ values and panel letters of the four-panel concurrence figure.
pub const PANELS: [(char, f64); 4] = [('a', 0.9), ('b', 1.4), ('c', 1.7), ('d', 2.0)];

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::Spectrum { model, levels, output } => spectrum(&model, levels, &output),
        Command::Concurrence { model, state, time, output } => concurrence(&model, &state, &time, &output),
        Command::Figure1 { gamma, time, out, format, timestamp } => figure1(gamma, &time, &out, format, timestamp),
        Command::ScanKappa { state, time, kappa_min, kappa_max, kappa_step, output } => {
            scan_kappa(&state, &time, (kappa_min, kappa_max, kappa_step), &output)
        }
        Command::Verify { static_only, dynamic, out, format, timestamp } => {
            verify_cmd(!dynamic, !static_only, out.as_deref(), format, timestamp)
        }
    }
}

fn resolve(model: &ModelArgs) -> Result<Params> {
    let omega = match (model.kappa, model.omega) {
        (Some(_), Some(_)) => return Err(bad("--kappa and --omega both set; give one")),
        (Some(k), None) => model.nu + k * model.g,
        (None, Some(w)) => w,
        (None, None) => model.nu + 2.0 * model.g,
    };
    Params::new(omega, model.nu, model.g).map_err(|e| bad(e.to_string()))
}

fn grid(time: &TimeArgs) -> Result<Vec<f64>> {
    if time.samples < 2 {
        return Err(bad(format!("--samples must be at least 2, got {}", time.samples)));
    }
    if !(time.t_max_pi.is_finite() && time.t_max_pi > 0.0) {
        return Err(bad(format!("--t-max-pi must be positive, got {}", time.t_max_pi)));
    }
    Ok(linspace(0.0, time.t_max_pi, time.samples - 1))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() {
        Ok(())
    } else {
        Err(bad(format!("--gamma must be finite, got {gamma}")))
    }
}

fn header(command: &str, timestamp: bool, columns: &[&str]) -> Table {
    let mut t = Table::new(columns);
    t.meta("command", command).meta("version", env!("CARGO_PKG_VERSION"));
    if timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        t.meta("generated_unix", secs);
    }
    t
}

fn param_meta(t: &mut Table, p: &Params) {
    t.meta("omega", p.omega).meta("nu", p.nu).meta("g", p.g).meta("kappa", p.kappa());
}

fn census_text(cfg: &TwoSystem) -> String {
    frequency_census(cfg).iter().map(|(m, r)| format!("{m}:{r}")).collect::<Vec<_>>().join(";")
}

/// `C` over the grid, evaluated in parallel chunks; order is preserved.
fn trace(cfg: &TwoSystem, grid: &[f64]) -> TimeSeries<f64> {
    let samples = grid.par_chunks(128).flat_map_iter(|chunk| concurrence_series(cfg, chunk).samples).collect();
    TimeSeries { samples, ..concurrence_series(cfg, &[]) }
}

fn spectrum(model: &ModelArgs, levels: usize, output: &OutputArgs) -> Result<Status> {
    let p = resolve(model)?;
    let mut t = header(
        "spectrum",
        output.timestamp,
        &["n", "E_plus_re", "E_plus_im", "E_minus_re", "E_minus_im", "omega_re", "omega_im", "regime"],
    );
    param_meta(&mut t, &p);
    t.meta("ground_energy", ground_energy(&p));
    for pair in exact_spectrum(&p, levels) {
        let om = big_omega(&p, pair.n + 1);
        t.push(vec![
            pair.n.into(),
            pair.e_plus.re.into(),
            pair.e_plus.im.into(),
            pair.e_minus.re.into(),
            pair.e_minus.im.into(),
            om.re.into(),
            om.im.into(),
            classify(&p, pair.n + 1).to_string().into(),
        ]);
    }
    t.emit(output.format, output.out.as_deref())?;
    Ok(Status::Ok)
}

fn concurrence(model: &ModelArgs, state: &StateArgs, time: &TimeArgs, output: &OutputArgs) -> Result<Status> {
    let p = resolve(model)?;
    check_gamma(state.gamma)?;
    let grid = grid(time)?;
    let cfg = TwoSystem::new(p, state.n, state.gamma);
    let series = trace(&cfg, &grid);

    let mut t = header("concurrence", output.timestamp, &["gt_over_pi", "C"]);
    param_meta(&mut t, &p);
    t.meta("n", state.n).meta("gamma", state.gamma).meta("t_max_over_pi", time.t_max_pi).meta("samples", time.samples);
    t.meta("census", census_text(&cfg));
    if let Some(c) = asymptotic_concurrence(&cfg) {
        t.meta("asymptote", c);
    }
    t.meta("flagged", series.flagged());
    for (x, c) in series.samples {
        t.push(vec![x.into(), c.unwrap_or(f64::NAN).into()]);
    }
    t.emit(output.format, output.out.as_deref())?;
    Ok(Status::Ok)
}

pub fn panel_file(dir: &Path, panel: char, format: Format) -> PathBuf {
    dir.join(format!("figure1_{panel}.{}", format.extension()))
}

fn figure1(gamma: f64, time: &TimeArgs, dir: &Path, format: Format, timestamp: bool) -> Result<Status> {
    check_gamma(gamma)?;
    let grid = grid(time)?;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (panel, kappa) in PANELS {
        let p = Params::from_kappa(kappa)?;
        let cfgs: Vec<TwoSystem> = (0..3).map(|n| TwoSystem::new(p, n, gamma)).collect();
        let series: Vec<TimeSeries<f64>> = cfgs.iter().map(|c| trace(c, &grid)).collect();

        let mut t = header("figure1", timestamp, &["gt_over_pi", "C_n0", "C_n1", "C_n2"]);
        t.meta("panel", panel);
        param_meta(&mut t, &p);
        t.meta("gamma", gamma).meta("t_max_over_pi", time.t_max_pi).meta("samples", time.samples);
        for cfg in &cfgs {
            t.meta(&format!("census_n{}", cfg.n), census_text(cfg));
        }
        for (i, &x) in grid.iter().enumerate() {
            let mut row: Vec<Cell> = vec![x.into()];
            row.extend(series.iter().map(|s| Cell::Num(s.samples[i].1.unwrap_or(f64::NAN))));
            t.push(row);
        }
        let path = panel_file(dir, panel, format);
        t.emit(format, Some(&path))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(Status::Ok)
}

fn scan_kappa(state: &StateArgs, time: &TimeArgs, range: (f64, f64, f64), output: &OutputArgs) -> Result<Status> {
    let (lo, hi, step) = range;
    check_gamma(state.gamma)?;
    if !(step.is_finite() && step > 0.0 && lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(bad(format!("κ range needs finite min ≤ max and step > 0, got {lo}..{hi} step {step}")));
    }
    let grid = grid(time)?;
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    // rounded so that grid values print cleanly and land on exact transition points
    let kappas: Vec<f64> = (0..=count).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect();
    let params = kappas.iter().map(|&k| Params::from_kappa(k).map_err(|e| bad(e.to_string()))).collect::<Result<Vec<_>>>()?;

    let late = 0.75 * time.t_max_pi;
    let rows: Vec<Vec<Cell>> = params
        .par_iter()
        .zip(&kappas)
        .map(|(p, &k)| {
            let cfg = TwoSystem::new(*p, state.n, state.gamma);
            let tail: Vec<f64> = concurrence_series(&cfg, &grid)
                .samples
                .into_iter()
                .filter(|(x, _)| *x >= late)
                .filter_map(|(_, c)| c)
                .collect();
            let mean = if tail.is_empty() { f64::NAN } else { tail.iter().sum::<f64>() / tail.len() as f64 };
            let max = tail.iter().copied().fold(f64::NAN, f64::max);
            let broken = frequency_census(&cfg).iter().filter(|(_, r)| *r == ptjc::Regime::Broken).count();
            vec![k.into(), census_text(&cfg).into(), broken.into(), mean.into(), max.into()]
        })
        .collect();

    let mut t = header("scan-kappa", output.timestamp, &["kappa", "census", "broken_modes", "C_mean_late", "C_max_late"]);
    t.meta("nu", 1.0).meta("g", 1.0).meta("n", state.n).meta("gamma", state.gamma);
    t.meta("t_max_over_pi", time.t_max_pi).meta("samples", time.samples).meta("late_window_from", late);
    t.rows = rows;
    t.emit(output.format, output.out.as_deref())?;
    Ok(Status::Ok)
}

fn verify_cmd(run_static: bool, run_dynamic: bool, out: Option<&Path>, format: Format, timestamp: bool) -> Result<Status> {
    let mut reports = Vec::new();
    if run_static {
        reports.extend(verify::static_suite()?);
    }
    if run_dynamic {
        reports.extend(verify::dynamic_suite()?);
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    let all = passed == reports.len();

    let mut t = header("verify", timestamp, &["check", "max_residual", "tolerance", "pass", "grid_points"]);
    t.meta("checks", reports.len()).meta("passed", passed).meta("all_pass", all);
    for r in &reports {
        t.push(vec![r.check_name.clone().into(), r.max_residual.into(), r.tolerance.into(), r.pass.into(), r.grid.len().into()]);
    }
    t.emit(format, out)?;
    for r in reports.iter().filter(|r| !r.pass) {
        eprintln!("FAIL {}: {:.3e} > {:.1e}", r.check_name, r.max_residual, r.tolerance);
    }
    eprintln!("verify: {passed}/{} checks pass", reports.len());
    Ok(if all { Status::Ok } else { Status::ChecksFailed })
}
