//! Run configuration files: line-oriented `key = value`, `#` comments.
//!
//! Angles are radians; `pi`, `pi/N`, `N*pi` and `N*pi/M` (optionally
//! negated) are accepted wherever a number is.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::PathBuf;

use crate::dressed::{SolverConfig, SteadyMethod};
use crate::error::{invalid, Error, Result};
use crate::model::SystemParams;
use crate::oracle::OracleParams;
use crate::sweep::{default_axes, Axis, SweepParam, SweepSpec};

pub const MANDATORY: [&str; 6] = ["g1", "g2", "gamma2", "kappa", "omega1", "omega2"];

const KEYS: [&str; 29] = [
    "g1",
    "g2",
    "gamma1",
    "gamma2",
    "kappa",
    "omega1",
    "omega2",
    "phi1",
    "phi2",
    "steady_method",
    "rel_tol",
    "abs_tol",
    "tail_tol",
    "n_max_initial",
    "n_max_cap",
    "max_steps",
    "delta_c",
    "oracle_n_max",
    "initial_fock",
    "t_max",
    "stride",
    "x_param",
    "x_start",
    "x_stop",
    "x_count",
    "y_param",
    "y_start",
    "y_stop",
    "y_count",
];

/// Everything a subcommand needs. `output`, `workers` and `n_max` come from
/// command-line flags only and are not part of the config echo.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub solver: SolverConfig,
    /// Cavity-laser detuning for the full model; `None` means `+2 Omega`.
    pub delta_c: Option<f64>,
    pub oracle_n_max: usize,
    /// Initial Fock state for `evolve` (emitter in the middle dressed state).
    pub initial_fock: usize,
    pub t_max: f64,
    pub stride: f64,
    pub x_axis: Axis,
    pub y_axis: Axis,
    pub output: Option<PathBuf>,
    pub workers: usize,
    /// Fixed Fock ladder: disables adaptive truncation for `steady`, sets
    /// the starting ladder for `evolve` and the oracle ladder.
    pub n_max: Option<usize>,
}

impl RunConfig {
    /// Defaults for everything except the mandatory physical keys.
    pub fn with_params(params: SystemParams) -> Self {
        let (x_axis, y_axis) = default_axes();
        Self {
            params,
            solver: SolverConfig::default(),
            delta_c: None,
            oracle_n_max: 16,
            initial_fock: 0,
            t_max: 10.0,
            stride: 0.1,
            x_axis,
            y_axis,
            output: None,
            workers: default_workers(),
            n_max: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.solver.validate()?;
        self.oracle_params().validate()?;
        self.sweep_spec().validate()?;
        if self.oracle_n_max < 1 {
            return Err(invalid("oracle_n_max", "must be >= 1"));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(invalid("t_max", "must be a positive number"));
        }
        if !(self.stride > 0.0 && self.stride.is_finite()) {
            return Err(invalid("stride", "must be a positive number"));
        }
        if self.n_max == Some(0) {
            return Err(invalid("n_max", "must be >= 1"));
        }
        if self.workers == 0 {
            return Err(invalid("workers", "must be >= 1"));
        }
        Ok(())
    }

    pub fn oracle_params(&self) -> OracleParams {
        let p = OracleParams::new(self.params);
        match self.delta_c {
            Some(d) => p.with_delta_c(d),
            None => p,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec { x: self.x_axis, y: self.y_axis, base: self.params, solver: self.solver }
    }

    /// `key = value` lines that parse back to this configuration (up to the
    /// flag-only fields). Numbers use the shortest round-trip form.
    pub fn echo(&self) -> Vec<String> {
        let p = &self.params;
        let s = &self.solver;
        let mut lines = vec![
            kv("g1", p.g1),
            kv("g2", p.g2),
            kv("gamma1", p.gamma1),
            kv("gamma2", p.gamma2),
            kv("kappa", p.kappa),
            kv("omega1", p.omega1),
            kv("omega2", p.omega2),
            kv("phi1", p.phi1),
            kv("phi2", p.phi2),
            format!("steady_method = {}", s.steady_method.name()),
            kv("rel_tol", s.rel_tol),
            kv("abs_tol", s.abs_tol),
            kv("tail_tol", s.tail_tol),
            format!("n_max_initial = {}", s.n_max_initial),
            format!("n_max_cap = {}", s.n_max_cap),
            format!("max_steps = {}", s.max_steps),
        ];
        if let Some(d) = self.delta_c {
            lines.push(kv("delta_c", d));
        }
        lines.extend([
            format!("oracle_n_max = {}", self.oracle_n_max),
            format!("initial_fock = {}", self.initial_fock),
            kv("t_max", self.t_max),
            kv("stride", self.stride),
        ]);
        for (prefix, axis) in [("x", &self.x_axis), ("y", &self.y_axis)] {
            lines.extend([
                format!("{prefix}_param = {}", axis.param),
                kv(&format!("{prefix}_start"), axis.start),
                kv(&format!("{prefix}_stop"), axis.stop),
                format!("{prefix}_count = {}", axis.count),
            ]);
        }
        lines
    }
}

fn kv(key: &str, v: f64) -> String {
    format!("{key} = {v:?}")
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// A real number, or a rational multiple of pi.
pub fn parse_real(text: &str) -> Option<f64> {
    let t = text.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim_start()),
        None => (1.0, t),
    };
    if !body.contains("pi") {
        return t.parse::<f64>().ok().filter(|v| v.is_finite());
    }
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (body, None),
    };
    let coefficient = match num {
        "pi" => 1.0,
        _ => {
            let c = num.strip_suffix("pi")?.trim_end().strip_suffix('*')?.trim_end();
            c.parse::<f64>().ok().filter(|v| v.is_finite())?
        }
    };
    let mut v = sign * coefficient * PI;
    if let Some(d) = den {
        let d = d.parse::<f64>().ok().filter(|v| v.is_finite() && *v != 0.0)?;
        v /= d;
    }
    Some(v)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::with_params(SystemParams::default());
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Config { line, message };
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        if !KEYS.contains(&key) {
            return Err(err(format!("unknown key `{key}`")));
        }
        if !seen.insert(key.to_owned()) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        let real = || parse_real(value).ok_or_else(|| err(format!("`{key}`: expected a number, got `{value}`")));
        let count = || {
            value.parse::<usize>().map_err(|_| err(format!("`{key}`: expected a non-negative integer, got `{value}`")))
        };
        let axis = |name: &str| {
            value.parse::<SweepParam>().map_err(|_| {
                err(format!("`{name}`: unknown sweep parameter `{value}` (phi1 | phi2 | ratio | kappa | g1 | g2)"))
            })
        };
        let p = &mut cfg.params;
        let s = &mut cfg.solver;
        match key {
            "g1" => p.g1 = real()?,
            "g2" => p.g2 = real()?,
            "gamma1" => p.gamma1 = real()?,
            "gamma2" => p.gamma2 = real()?,
            "kappa" => p.kappa = real()?,
            "omega1" => p.omega1 = real()?,
            "omega2" => p.omega2 = real()?,
            "phi1" => p.phi1 = real()?,
            "phi2" => p.phi2 = real()?,
            "steady_method" => s.steady_method = value.parse::<SteadyMethod>().map_err(err)?,
            "rel_tol" => s.rel_tol = real()?,
            "abs_tol" => s.abs_tol = real()?,
            "tail_tol" => s.tail_tol = real()?,
            "n_max_initial" => s.n_max_initial = count()?,
            "n_max_cap" => s.n_max_cap = count()?,
            "max_steps" => s.max_steps = count()?,
            "delta_c" => cfg.delta_c = Some(real()?),
            "oracle_n_max" => cfg.oracle_n_max = count()?,
            "initial_fock" => cfg.initial_fock = count()?,
            "t_max" => cfg.t_max = real()?,
            "stride" => cfg.stride = real()?,
            "x_param" => cfg.x_axis.param = axis(key)?,
            "x_start" => cfg.x_axis.start = real()?,
            "x_stop" => cfg.x_axis.stop = real()?,
            "x_count" => cfg.x_axis.count = count()?,
            "y_param" => cfg.y_axis.param = axis(key)?,
            "y_start" => cfg.y_axis.start = real()?,
            "y_stop" => cfg.y_axis.stop = real()?,
            "y_count" => cfg.y_axis.count = count()?,
            _ => unreachable!("key list and match arms disagree on `{key}`"),
        }
    }
    if let Some(missing) = MANDATORY.into_iter().find(|k| !seen.contains(*k)) {
        return Err(Error::MissingKey(missing));
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Re-reads the `# key = value` echo block at the top of a CSV file.
pub fn parse_csv_echo(csv: &str) -> Result<RunConfig> {
    let block: Vec<&str> = csv.lines().map_while(|l| l.strip_prefix("# ")).collect();
    parse_config(&block.join("\n"))
}
