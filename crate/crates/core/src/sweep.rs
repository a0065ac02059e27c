//! Two-parameter maps of the steady cavity field.
//!
//! Every cell is an independent adaptive-truncation steady solve. Cells run
//! on a rayon pool and are collected into a pre-shaped grid, so the result
//! does not depend on the worker count or on scheduling.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dressed::{auto_truncate, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{derive_dressed, SystemParams};
use crate::observables::{observables, G2};

/// A parameter that can label a sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Phi1,
    Phi2,
    /// `omega2 / omega1`, applied as `omega2 = value * omega1`.
    Ratio,
    Kappa,
    G1,
    G2,
}

impl SweepParam {
    pub const ALL: [SweepParam; 6] = [Self::Phi1, Self::Phi2, Self::Ratio, Self::Kappa, Self::G1, Self::G2];

    pub fn name(self) -> &'static str {
        match self {
            Self::Phi1 => "phi1",
            Self::Phi2 => "phi2",
            Self::Ratio => "ratio",
            Self::Kappa => "kappa",
            Self::G1 => "g1",
            Self::G2 => "g2",
        }
    }

    pub fn apply(self, mut params: SystemParams, value: f64) -> SystemParams {
        match self {
            Self::Phi1 => params.phi1 = value,
            Self::Phi2 => params.phi2 = value,
            Self::Ratio => params = params.with_rabi_ratio(value),
            Self::Kappa => params.kappa = value,
            Self::G1 => params.g1 = value,
            Self::G2 => params.g2 = value,
        }
        params
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidSweep(format!("unknown sweep parameter `{s}`")))
    }
}

/// Inclusive linear grid `start..=stop` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(param: SweepParam, start: f64, stop: f64, count: usize) -> Self {
        Self { param, start, stop, count }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidSweep(format!("{} axis needs at least 2 points", self.param)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidSweep(format!("{} axis bounds must be finite", self.param)));
        }
        if self.stop <= self.start {
            return Err(Error::InvalidSweep(format!("{} axis must be increasing", self.param)));
        }
        Ok(())
    }

    /// `start + i (stop - start) / (count - 1)`; both endpoints exact.
    pub fn values(&self) -> Vec<f64> {
        let last = self.count - 1;
        let step = (self.stop - self.start) / last as f64;
        (0..self.count).map(|i| if i == last { self.stop } else { self.start + i as f64 * step }).collect()
    }

    /// Index of the grid cell whose value is nearest to `v`.
    pub fn nearest(&self, v: f64) -> usize {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        let i = ((v - self.start) / step).round();
        i.clamp(0.0, (self.count - 1) as f64) as usize
    }
}

/// The default interference map: `phi2` over one period (3 degree steps)
/// against `omega2 / omega1` over `0.05..=3`.
pub fn default_axes() -> (Axis, Axis) {
    (Axis::new(SweepParam::Phi2, 0.0, 2.0 * PI, 121), Axis::new(SweepParam::Ratio, 0.05, 3.0, 60))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub x: Axis,
    pub y: Axis,
    pub base: SystemParams,
    pub solver: SolverConfig,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()?;
        if self.x.param == self.y.param {
            return Err(Error::InvalidSweep("both axes sweep the same parameter".into()));
        }
        self.base.validate()?;
        self.solver.validate()
    }

    pub fn cell_params(&self, x: f64, y: f64) -> SystemParams {
        self.y.param.apply(self.x.param.apply(self.base, x), y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Converged,
    /// Truncation hit `n_max_cap`; values are from the largest ladder.
    NotConverged,
    Failed(String),
}

impl CellStatus {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::NotConverged => "not_converged",
            Self::Failed(_) => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    /// NaN for failed cells.
    pub mean_n: f64,
    pub g2: G2,
    pub n_max_used: usize,
    pub status: CellStatus,
}

impl Cell {
    pub fn converged(&self) -> bool {
        self.status == CellStatus::Converged
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub x: Axis,
    pub y: Axis,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// x-major: cell `(ix, iy)` is at `ix * y_values.len() + iy`.
    pub cells: Vec<Cell>,
}

impl SweepResult {
    pub fn cell(&self, ix: usize, iy: usize) -> &Cell {
        &self.cells[ix * self.y_values.len() + iy]
    }

    pub fn all_converged(&self) -> bool {
        self.cells.iter().all(Cell::converged)
    }
}

fn solve_cell(params: &SystemParams, solver: &SolverConfig) -> Cell {
    let outcome =
        params.validate().and_then(|_| derive_dressed(params)).and_then(|d| auto_truncate(&d, params.kappa, solver));
    match outcome {
        Ok(t) => {
            let obs = observables(&t.state);
            Cell {
                mean_n: obs.mean_n,
                g2: obs.g2_zero,
                n_max_used: t.n_max,
                status: if t.converged { CellStatus::Converged } else { CellStatus::NotConverged },
            }
        }
        Err(e) => {
            Cell { mean_n: f64::NAN, g2: G2::Undefined, n_max_used: 0, status: CellStatus::Failed(e.to_string()) }
        }
    }
}

/// Solves every cell of the grid on `workers` threads (at least one).
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    let x_values = spec.x.values();
    let y_values = spec.y.values();
    let ny = y_values.len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidSweep(format!("thread pool: {e}")))?;
    let cells = pool.install(|| {
        (0..x_values.len() * ny)
            .into_par_iter()
            .map(|k| solve_cell(&spec.cell_params(x_values[k / ny], y_values[k % ny]), &spec.solver))
            .collect()
    });
    Ok(SweepResult { x: spec.x, y: spec.y, x_values, y_values, cells })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub ix: usize,
    pub iy: usize,
    pub mean_n: f64,
}

/// Smallest `<n>` over converged cells; the first in x-major order wins ties.
pub fn locate_minimum(result: &SweepResult) -> Result<Minimum> {
    let ny = result.y_values.len();
    let mut best: Option<Minimum> = None;
    for (k, cell) in result.cells.iter().enumerate() {
        if !cell.converged() {
            continue;
        }
        if best.is_none_or(|b| cell.mean_n < b.mean_n) {
            best = Some(Minimum { ix: k / ny, iy: k % ny, mean_n: cell.mean_n });
        }
    }
    best.ok_or(Error::NoConvergedCells)
}
