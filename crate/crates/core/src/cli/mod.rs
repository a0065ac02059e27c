//! Command-line front end. The binary only parses flags; everything else
//! lives here so it can be driven from tests and examples.
//!
//! Reports go to `out` as `key = value` lines, CSV goes to the `--output`
//! file (or to `out` when no file is given), warnings go to `diag`.

pub mod config;
pub mod csv;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use crate::dressed::{auto_truncate, evolve, steady_state, DressedState, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{derive_dressed, secular_check, SecularReport, Severity};
use crate::observables::{emitter_summary, observables, Observables, G2};
use crate::oracle::{oracle_steady, FullState};
use crate::sweep::{locate_minimum, run_sweep, SweepResult};

pub use config::{parse_config, parse_csv_echo, parse_real, RunConfig};
use csv::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Steady,
    Evolve,
    Sweep,
    Oracle,
    Compare,
}

/// Named overrides of cavity damping and ladder cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// `kappa = 0.1`, `n_max_cap = 1024`: quick maps with the same geometry.
    Fast,
    /// `kappa = 1e-3`, `n_max_cap = 4096`: the good-cavity regime.
    Paper,
}

impl Profile {
    pub fn apply(self, cfg: &mut RunConfig) {
        let (kappa, cap) = match self {
            Profile::Fast => (0.1, 1024),
            Profile::Paper => (1e-3, 4096),
        };
        cfg.params.kappa = kappa;
        cfg.solver.n_max_cap = cap;
        cfg.solver.n_max_initial = cfg.solver.n_max_initial.min(cap);
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Flags {
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    pub t_max: Option<f64>,
    pub stride: Option<f64>,
    pub n_max: Option<usize>,
    pub profile: Option<Profile>,
}

/// Parses `text`, then applies the profile and the remaining flags.
pub fn load(text: &str, flags: &Flags) -> Result<RunConfig> {
    let mut cfg = parse_config(text)?;
    if let Some(p) = flags.profile {
        p.apply(&mut cfg);
    }
    cfg.output = flags.output.clone();
    if let Some(w) = flags.workers {
        cfg.workers = w;
    }
    if let Some(t) = flags.t_max {
        cfg.t_max = t;
    }
    if let Some(s) = flags.stride {
        cfg.stride = s;
    }
    cfg.n_max = flags.n_max;
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Results were produced but some truncation did not converge.
    NotConverged,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

pub fn exit_code(outcome: &Result<Status>) -> i32 {
    match outcome {
        Ok(Status::Success) => EXIT_OK,
        Ok(Status::NotConverged) => EXIT_NOT_CONVERGED,
        Err(e) if is_usage_error(e) => EXIT_USAGE,
        Err(_) => EXIT_SOLVER,
    }
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config { .. }
            | Error::MissingKey(_)
            | Error::InvalidParameter { .. }
            | Error::InvalidSweep(_)
            | Error::UndefinedMixingAngle
    )
}

pub struct Streams<'a> {
    pub out: &'a mut dyn Write,
    pub diag: &'a mut dyn Write,
}

pub fn run(command: Command, cfg: &RunConfig, io: &mut Streams) -> Result<Status> {
    match command {
        Command::Steady => cmd_steady(cfg, io),
        Command::Evolve => cmd_evolve(cfg, io),
        Command::Sweep => cmd_sweep(cfg, io),
        Command::Oracle => cmd_oracle(cfg, io),
        Command::Compare => cmd_compare(cfg, io),
    }
}

/// Report value with negative zero printed as `0`.
fn tidy(v: f64) -> f64 {
    v + 0.0
}

fn report_g2(v: G2) -> String {
    match v {
        G2::Defined(x) => x.to_string(),
        G2::Undefined => "UNDEFINED".to_owned(),
    }
}

fn emit(cfg: &RunConfig, text: &str, io: &mut Streams) -> Result<()> {
    match &cfg.output {
        Some(path) => fs::write(path, text)?,
        None => io.out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn distribution_table(cfg: &RunConfig, dist: &[f64]) -> String {
    let mut table = Table::new(cfg, &["n", "p_n"]);
    for (n, p) in dist.iter().enumerate() {
        table.row(&[n.to_string(), csv::real(*p)]);
    }
    table.finish()
}

fn warn_secular(report: &SecularReport, io: &mut Streams) -> Result<()> {
    if report.severity != Severity::Ok {
        writeln!(io.diag, "warning: secular approximation {report}")?;
    }
    Ok(())
}

fn status(converged: bool) -> Status {
    if converged {
        Status::Success
    } else {
        Status::NotConverged
    }
}

struct DressedSolution {
    state: DressedState,
    n_max: usize,
    converged: bool,
}

fn solve_dressed(cfg: &RunConfig, fixed: Option<usize>) -> Result<DressedSolution> {
    let dressed = derive_dressed(&cfg.params)?;
    match fixed {
        Some(n_max) => {
            let state = steady_state(&dressed, cfg.params.kappa, n_max, &cfg.solver)?;
            let converged = state.tail() < cfg.solver.tail_tol;
            Ok(DressedSolution { state, n_max, converged })
        }
        None => {
            let t = auto_truncate(&dressed, cfg.params.kappa, &cfg.solver)?;
            Ok(DressedSolution { state: t.state, n_max: t.n_max, converged: t.converged })
        }
    }
}

/// Steady state of the reduced equations with adaptive truncation (or on
/// the `--nmax` ladder).
pub fn cmd_steady(cfg: &RunConfig, io: &mut Streams) -> Result<Status> {
    let dressed = derive_dressed(&cfg.params)?;
    let secular = secular_check(&cfg.params, &dressed);
    warn_secular(&secular, io)?;
    let sol = solve_dressed(cfg, cfg.n_max)?;
    let obs = observables(&sol.state);
    let emitter = emitter_summary(&sol.state);
    writeln!(io.out, "mean_n = {}", tidy(obs.mean_n))?;
    writeln!(io.out, "g2 = {}", report_g2(obs.g2_zero))?;
    writeln!(io.out, "n_max_used = {}", sol.n_max)?;
    writeln!(io.out, "converged = {}", sol.converged)?;
    writeln!(io.out, "tail = {:e}", tidy(sol.state.tail()))?;
    writeln!(io.out, "outer_population = {}", tidy(emitter.outer_population))?;
    writeln!(io.out, "inversion = {}", tidy(emitter.inversion))?;
    writeln!(io.out, "secular = {secular}")?;
    if !sol.converged {
        writeln!(io.diag, "warning: Fock truncation not converged at n_max = {}", sol.n_max)?;
    }
    if cfg.output.is_some() {
        emit(cfg, &distribution_table(cfg, &obs.photon_dist), io)?;
    }
    Ok(status(sol.converged))
}

/// Output times `0, stride, 2 stride, ...` up to and including `t_max`.
pub fn output_times(t_max: f64, stride: f64) -> Vec<f64> {
    let steps = (t_max / stride * (1.0 + 1e-12)).floor() as usize;
    (0..=steps).map(|k| k as f64 * stride).collect()
}

/// Time series from the Fock state `initial_fock` with the emitter in the
/// middle dressed state.
pub fn cmd_evolve(cfg: &RunConfig, io: &mut Streams) -> Result<Status> {
    let dressed = derive_dressed(&cfg.params)?;
    warn_secular(&secular_check(&cfg.params, &dressed), io)?;
    let n_max = cfg.n_max.unwrap_or(cfg.solver.n_max_initial).max(cfg.initial_fock + 1);
    let mut dist = vec![0.0; cfg.initial_fock + 1];
    dist[cfg.initial_fock] = 1.0;
    let initial = DressedState::from_photon_distribution(&dist, n_max)?;
    let solver = SolverConfig { n_max_cap: cfg.solver.n_max_cap.max(n_max), ..cfg.solver };
    let states = evolve(&initial, &dressed, cfg.params.kappa, &output_times(cfg.t_max, cfg.stride), &solver)?;
    let mut table = Table::new(cfg, &["t", "mean_n", "g2", "trace", "n_max", "outer_population", "inversion"]);
    for s in &states {
        let obs = observables(s);
        let emitter = emitter_summary(s);
        table.row(&[
            csv::real(s.time),
            csv::real(obs.mean_n),
            csv::g2(obs.g2_zero),
            csv::real(s.trace()),
            s.n_max.to_string(),
            csv::real(emitter.outer_population),
            csv::real(emitter.inversion),
        ]);
    }
    emit(cfg, &table.finish(), io)?;
    Ok(Status::Success)
}

/// CSV text of a sweep, x-major.
pub fn sweep_csv(cfg: &RunConfig, result: &SweepResult) -> String {
    let x = result.x.param.name();
    let y = result.y.param.name();
    let mut table = Table::new(cfg, &["ix", "iy", x, y, "mean_n", "g2", "n_max_used", "status"]);
    for (ix, &xv) in result.x_values.iter().enumerate() {
        for (iy, &yv) in result.y_values.iter().enumerate() {
            let cell = result.cell(ix, iy);
            table.row(&[
                ix.to_string(),
                iy.to_string(),
                csv::real(xv),
                csv::real(yv),
                csv::real(cell.mean_n),
                csv::g2(cell.g2),
                cell.n_max_used.to_string(),
                cell.status.label().to_owned(),
            ]);
        }
    }
    table.finish()
}

pub fn cmd_sweep(cfg: &RunConfig, io: &mut Streams) -> Result<Status> {
    let result = run_sweep(&cfg.sweep_spec(), cfg.workers)?;
    emit(cfg, &sweep_csv(cfg, &result), io)?;
    let unconverged = result.cells.iter().filter(|c| !c.converged()).count();
    if unconverged > 0 {
        writeln!(io.diag, "warning: {unconverged} of {} cells not converged", result.cells.len())?;
    }
    let summary: &mut dyn Write = if cfg.output.is_some() { &mut *io.out } else { &mut *io.diag };
    match locate_minimum(&result) {
        Ok(m) => writeln!(
            summary,
            "minimum: ix = {}, iy = {}, {} = {}, {} = {}, mean_n = {}",
            m.ix, m.iy, result.x.param, result.x_values[m.ix], result.y.param, result.y_values[m.iy], m.mean_n
        )?,
        Err(e) => writeln!(io.diag, "warning: {e}")?,
    }
    Ok(status(unconverged == 0))
}

fn oracle_ladder(cfg: &RunConfig) -> usize {
    cfg.n_max.unwrap_or(cfg.oracle_n_max)
}

fn solve_oracle(cfg: &RunConfig, io: &mut Streams) -> Result<(FullState, Observables, bool)> {
    let n_max = oracle_ladder(cfg);
    let state = oracle_steady(&cfg.oracle_params(), n_max)?;
    let obs = observables(&state);
    let tail = obs.photon_dist[n_max];
    let converged = tail < cfg.solver.tail_tol;
    if !converged {
        writeln!(io.diag, "warning: oracle ladder n_max = {n_max} carries tail probability {tail:e}")?;
    }
    Ok((state, obs, converged))
}

/// Steady state of the full master equation on a fixed ladder.
pub fn cmd_oracle(cfg: &RunConfig, io: &mut Streams) -> Result<Status> {
    let (state, obs, converged) = solve_oracle(cfg, io)?;
    let report = state.report()?;
    let levels = state.level_populations();
    writeln!(io.out, "mean_n = {}", tidy(obs.mean_n))?;
    writeln!(io.out, "g2 = {}", report_g2(obs.g2_zero))?;
    writeln!(io.out, "n_max = {}", state.n_max)?;
    writeln!(io.out, "delta_c = {}", cfg.oracle_params().delta_c)?;
    writeln!(io.out, "tail = {:e}", tidy(obs.photon_dist[state.n_max]))?;
    writeln!(io.out, "trace_error = {:e}", report.trace_error)?;
    writeln!(io.out, "hermiticity_error = {:e}", report.hermiticity_error)?;
    writeln!(io.out, "min_eigenvalue = {:e}", report.min_eigenvalue)?;
    writeln!(io.out, "level_populations = {} {} {}", levels[0], levels[1], levels[2])?;
    if cfg.output.is_some() {
        emit(cfg, &distribution_table(cfg, &obs.photon_dist), io)?;
    }
    Ok(status(converged))
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_difference(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Reduced model against the full master equation.
pub fn cmd_compare(cfg: &RunConfig, io: &mut Streams) -> Result<Status> {
    let dressed = derive_dressed(&cfg.params)?;
    let secular = secular_check(&cfg.params, &dressed);
    warn_secular(&secular, io)?;
    let sol = solve_dressed(cfg, None)?;
    if !sol.converged {
        writeln!(io.diag, "warning: Fock truncation not converged at n_max = {}", sol.n_max)?;
    }
    let reduced = observables(&sol.state);
    let (_, full, oracle_converged) = solve_oracle(cfg, io)?;
    writeln!(io.out, "dressed_mean_n = {}", tidy(reduced.mean_n))?;
    writeln!(io.out, "oracle_mean_n = {}", tidy(full.mean_n))?;
    writeln!(io.out, "rel_diff_mean_n = {}", relative_difference(reduced.mean_n, full.mean_n))?;
    writeln!(io.out, "dressed_g2 = {}", report_g2(reduced.g2_zero))?;
    writeln!(io.out, "oracle_g2 = {}", report_g2(full.g2_zero))?;
    let g2_diff = match (reduced.g2_zero, full.g2_zero) {
        (G2::Defined(a), G2::Defined(b)) => relative_difference(a, b).to_string(),
        _ => "UNDEFINED".to_owned(),
    };
    writeln!(io.out, "rel_diff_g2 = {g2_diff}")?;
    writeln!(io.out, "dressed_n_max = {}", sol.n_max)?;
    writeln!(io.out, "oracle_n_max = {}", oracle_ladder(cfg))?;
    writeln!(io.out, "coupling_ratio = {}", secular.coupling_ratio)?;
    writeln!(io.out, "decay_ratio = {}", secular.decay_ratio)?;
    writeln!(io.out, "secular = {}", secular.severity)?;
    Ok(status(sol.converged && oracle_converged))
}
