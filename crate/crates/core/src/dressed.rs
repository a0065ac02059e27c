//! Reduced dressed-state dynamics of the cavity on a truncated Fock ladder.
//!
//! The dressed master equation is projected on the emitter dressed states
//! and then on cavity Fock states, leaving five real sequences per photon
//! number:
//!
//! ```text
//! P0_n  <n| rho_-- + rho_00 + rho_++ |n>
//! P1_n  <n| rho_++ + rho_-- |n>
//! P2_n  <n| rho_++ - rho_-- |n>
//! P3_n  <n| (a^dag rho_+- e^{i psi} + e^{-i psi} rho_-+ a) / 2 |n>
//! P4_n  <n| (rho_+- a^dag e^{i psi} + e^{-i psi} a rho_-+) / 2 |n>
//! ```
//!
//! The state vector interleaves them by photon number: index `5 n + k`.
//!
//! Truncation: terms reaching `n_max + 1` are dropped, and `P4_{n_max}` is
//! identically zero because `a^dag` annihilates the top retained Fock state.
//! With that convention the trace `sum_n P0_n` is conserved exactly and
//! `P4_n = P3_{n+1}` holds for every `n < n_max`.

use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};

use crate::banded::BandMatrix;
use crate::error::{invalid, Error, Result};
use crate::model::DressedParams;
use crate::observables::{mean_photon, PhotonStatistics};
use crate::ode::{self, OdeSystem, StepAction, Tolerances};

pub const COMPONENTS: usize = 5;

#[inline]
pub fn index(n: usize, component: usize) -> usize {
    COMPONENTS * n + component
}

#[derive(Debug, Clone, PartialEq)]
pub struct DressedState {
    pub n_max: usize,
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub p3: Vec<f64>,
    pub p4: Vec<f64>,
    /// Elapsed time in units of `1 / gamma1`; infinite for steady states.
    pub time: f64,
}

/// Worst-case deviations from the structural invariants of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    /// `|sum_n P0_n - 1|`.
    pub trace_error: f64,
    /// Largest violation of `P0 >= 0`, `0 <= P1 <= P0`, `|P2| <= P1`.
    pub population_violation: f64,
    /// `max_n |P4_n - P3_{n+1}|` together with `|P3_0|` and `|P4_{n_max}|`.
    pub redundancy_error: f64,
}

impl InvariantReport {
    pub fn within(&self, eps: f64) -> bool {
        self.trace_error <= eps && self.population_violation <= eps && self.redundancy_error <= eps
    }
}

impl DressedState {
    /// Cavity vacuum with the emitter in the middle dressed state `|0>`.
    pub fn vacuum(n_max: usize) -> Self {
        let mut s = Self::zeros(n_max, 0.0);
        s.p0[0] = 1.0;
        s
    }

    /// Emitter in `|0>`, photon numbers distributed as `dist`.
    pub fn from_photon_distribution(dist: &[f64], n_max: usize) -> Result<Self> {
        if dist.len() > n_max + 1 {
            return Err(invalid("n_max", "distribution longer than the Fock ladder"));
        }
        let mut s = Self::zeros(n_max, 0.0);
        s.p0[..dist.len()].copy_from_slice(dist);
        Ok(s)
    }

    fn zeros(n_max: usize, time: f64) -> Self {
        let z = vec![0.0; n_max + 1];
        Self { n_max, p0: z.clone(), p1: z.clone(), p2: z.clone(), p3: z.clone(), p4: z, time }
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(COMPONENTS * (self.n_max + 1));
        for n in 0..=self.n_max {
            v.extend_from_slice(&[self.p0[n], self.p1[n], self.p2[n], self.p3[n], self.p4[n]]);
        }
        v
    }

    pub fn from_vector(n_max: usize, time: f64, v: &[f64]) -> Self {
        assert_eq!(v.len(), COMPONENTS * (n_max + 1));
        let mut s = Self::zeros(n_max, time);
        for n in 0..=n_max {
            s.p0[n] = v[index(n, 0)];
            s.p1[n] = v[index(n, 1)];
            s.p2[n] = v[index(n, 2)];
            s.p3[n] = v[index(n, 3)];
            s.p4[n] = v[index(n, 4)];
        }
        s
    }

    pub fn trace(&self) -> f64 {
        self.p0.iter().sum()
    }

    /// Vacuum-plus-emitter probability mass at the top of the ladder.
    pub fn tail(&self) -> f64 {
        self.p0[self.n_max]
    }

    /// Zero-padded copy on a larger ladder.
    pub fn extended(&self, n_max: usize) -> Self {
        assert!(n_max >= self.n_max);
        let pad = |v: &Vec<f64>| {
            let mut w = v.clone();
            w.resize(n_max + 1, 0.0);
            w
        };
        Self {
            n_max,
            p0: pad(&self.p0),
            p1: pad(&self.p1),
            p2: pad(&self.p2),
            p3: pad(&self.p3),
            p4: pad(&self.p4),
            time: self.time,
        }
    }

    pub fn check_invariants(&self) -> InvariantReport {
        let mut population_violation: f64 = 0.0;
        for n in 0..=self.n_max {
            let (p0, p1, p2) = (self.p0[n], self.p1[n], self.p2[n]);
            population_violation = population_violation.max(-p0).max(-p1).max(p1 - p0).max(p2.abs() - p1);
        }
        let mut redundancy_error = self.p3[0].abs().max(self.p4[self.n_max].abs());
        for n in 0..self.n_max {
            redundancy_error = redundancy_error.max((self.p4[n] - self.p3[n + 1]).abs());
        }
        InvariantReport {
            trace_error: (self.trace() - 1.0).abs(),
            population_violation: population_violation.max(0.0),
            redundancy_error,
        }
    }
}

impl PhotonStatistics for DressedState {
    fn photon_distribution(&self) -> Vec<f64> {
        self.p0.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyMethod {
    /// Direct sparse solve with one trace row replacing a redundant equation.
    LinearSolve,
    /// Implicit pseudo-time integration from the vacuum until stationary.
    LongTime,
}

impl SteadyMethod {
    pub fn name(self) -> &'static str {
        match self {
            SteadyMethod::LinearSolve => "linear_solve",
            SteadyMethod::LongTime => "long_time",
        }
    }
}

impl std::str::FromStr for SteadyMethod {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "linear_solve" => Ok(SteadyMethod::LinearSolve),
            "long_time" => Ok(SteadyMethod::LongTime),
            other => Err(format!("unknown steady_method `{other}` (linear_solve | long_time)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Relative tolerance of the time integrator and of truncation refinement.
    pub rel_tol: f64,
    /// Absolute integrator tolerance; also the stationarity threshold on
    /// `max |dx/dt|` for [`SteadyMethod::LongTime`].
    pub abs_tol: f64,
    /// Largest admissible `P0_{n_max}`.
    pub tail_tol: f64,
    pub n_max_initial: usize,
    pub n_max_cap: usize,
    pub steady_method: SteadyMethod,
    /// Step budget for time integration (explicit or pseudo-time).
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            tail_tol: 1e-10,
            n_max_initial: 16,
            n_max_cap: 4096,
            steady_method: SteadyMethod::LinearSolve,
            max_steps: 2_000_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol), ("tail_tol", self.tail_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be a positive number, got {v}")));
            }
        }
        if self.n_max_initial < 1 {
            return Err(invalid("n_max_initial", "must be >= 1"));
        }
        if self.n_max_initial > self.n_max_cap {
            return Err(invalid("n_max_cap", "must be >= n_max_initial"));
        }
        if self.max_steps == 0 {
            return Err(invalid("max_steps", "must be >= 1"));
        }
        Ok(())
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances { rel: self.rel_tol, abs: self.abs_tol, h_init: None, max_steps: self.max_steps }
    }
}

/// Right-hand side of the reduced equations as a sparse real matrix.
#[derive(Debug, Clone)]
pub struct Generator {
    n_max: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    kl: usize,
    ku: usize,
}

impl Generator {
    /// Depends on the dressed parameters only through `|g|` and the rate
    /// constants; `psi` is absorbed into the definitions of `P3` and `P4`.
    pub fn new(dressed: &DressedParams, kappa: f64, n_max: usize) -> Self {
        assert!(n_max >= 1, "n_max must be >= 1");
        let g = dressed.g_abs;
        let (alpha, beta, zeta) = (dressed.alpha, dressed.beta, dressed.zeta);
        let pump = dressed.pump_rate();

        let mut gen = Self { n_max, row_ptr: vec![0], cols: Vec::new(), vals: Vec::new(), kl: 0, ku: 0 };
        let top = n_max;
        for n in 0..=n_max {
            let nf = n as f64;
            let up = n < top;
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(8);

            // P0: cavity-reduced trace
            if up {
                row.push((index(n, 4), -2.0 * g));
            }
            row.push((index(n, 3), 2.0 * g));
            if up {
                row.push((index(n + 1, 0), kappa * (nf + 1.0)));
            }
            row.push((index(n, 0), -kappa * nf));
            gen.push_row(index(n, 0), &row);

            // P1: rho_++ + rho_--
            row.clear();
            if up {
                row.push((index(n, 4), -2.0 * g));
            }
            row.push((index(n, 3), 2.0 * g));
            if up {
                row.push((index(n + 1, 1), kappa * (nf + 1.0)));
            }
            row.push((index(n, 1), -(kappa * nf + alpha / 2.0)));
            row.push((index(n, 0), pump));
            gen.push_row(index(n, 1), &row);

            // P2: rho_++ - rho_--
            row.clear();
            if up {
                row.push((index(n, 4), -2.0 * g));
            }
            row.push((index(n, 3), -2.0 * g));
            if up {
                row.push((index(n + 1, 2), kappa * (nf + 1.0)));
            }
            row.push((index(n, 2), -(kappa * nf + beta / 2.0)));
            gen.push_row(index(n, 2), &row);

            // P3: a^dag rho_+- coherence
            row.clear();
            if n >= 1 {
                let c = g * nf / 2.0;
                row.push((index(n - 1, 1), c));
                row.push((index(n, 1), -c));
                row.push((index(n - 1, 2), c));
                row.push((index(n, 2), c));
            }
            if up {
                row.push((index(n, 4), -kappa));
                row.push((index(n + 1, 3), kappa * (nf + 1.0)));
            }
            row.push((index(n, 3), -(kappa * (nf - 0.5) + zeta)));
            gen.push_row(index(n, 3), &row);

            // P4: rho_+- a^dag coherence, pinned to zero at the top
            row.clear();
            if up {
                let c = g * (nf + 1.0) / 2.0;
                row.push((index(n + 1, 2), c));
                row.push((index(n, 2), c));
                row.push((index(n + 1, 1), -c));
                row.push((index(n, 1), c));
                if n + 1 < top {
                    row.push((index(n + 1, 4), kappa * (nf + 1.0)));
                }
                row.push((index(n, 4), -(kappa * (nf + 0.5) + zeta)));
            }
            gen.push_row(index(n, 4), &row);
        }
        gen
    }

    fn push_row(&mut self, r: usize, entries: &[(usize, f64)]) {
        debug_assert_eq!(r + 1, self.row_ptr.len());
        for &(c, v) in entries {
            if v == 0.0 {
                continue;
            }
            self.cols.push(c);
            self.vals.push(v);
            if c < r {
                self.kl = self.kl.max(r - c);
            } else {
                self.ku = self.ku.max(c - r);
            }
        }
        self.row_ptr.push(self.cols.len());
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        COMPONENTS * (self.n_max + 1)
    }

    /// Lower and upper bandwidth in the interleaved ordering.
    pub fn bandwidth(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    /// Nonzero entries as `(row, column, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim())
            .flat_map(move |r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k])))
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
            *out = self.cols[lo..hi].iter().zip(&self.vals[lo..hi]).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    /// Time derivative of a state as a state-shaped value.
    pub fn derivative(&self, state: &DressedState) -> DressedState {
        assert_eq!(state.n_max, self.n_max);
        let x = state.to_vector();
        let mut y = vec![0.0; x.len()];
        self.apply(&x, &mut y);
        DressedState::from_vector(self.n_max, state.time, &y)
    }

    /// `shift * I + scale * G` in band storage.
    fn shifted_band(&self, shift: f64, scale: f64) -> BandMatrix {
        let mut band = BandMatrix::zeros(self.dim(), self.kl, self.ku);
        for i in 0..self.dim() {
            band.add(i, i, shift);
        }
        for (r, c, v) in self.entries() {
            band.add(r, c, scale * v);
        }
        band
    }
}

impl OdeSystem for Generator {
    fn dim(&self) -> usize {
        Generator::dim(self)
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        self.apply(y, dy);
    }
}

/// Integrates the reduced equations from `initial`, returning the state at
/// each of `output_times` (ascending, not before `initial.time`).
///
/// The Fock ladder is doubled whenever `P0_{n_max}` exceeds `tail_tol`;
/// returned states may therefore carry different `n_max`.
pub fn evolve(
    initial: &DressedState,
    dressed: &DressedParams,
    kappa: f64,
    output_times: &[f64],
    config: &SolverConfig,
) -> Result<Vec<DressedState>> {
    config.validate()?;
    if output_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("output_times", "must be ascending"));
    }
    if output_times.first().is_some_and(|&t| t < initial.time) {
        return Err(invalid("output_times", "must not precede the initial time"));
    }

    let mut state = initial.clone();
    while state.tail() > config.tail_tol {
        state = grow(&state, config)?;
    }
    let mut remaining = output_times;
    let mut out = Vec::with_capacity(output_times.len());
    loop {
        let gen = Generator::new(dressed, kappa, state.n_max);
        let tail_index = index(state.n_max, 0);
        let tail_tol = config.tail_tol;
        let run = ode::integrate(&gen, state.time, &state.to_vector(), remaining, config.tolerances(), |_, y| {
            if y[tail_index] > tail_tol {
                StepAction::Stop
            } else {
                StepAction::Continue
            }
        })?;
        let produced = run.outputs.len();
        out.extend(run.outputs.into_iter().map(|(t, y)| DressedState::from_vector(state.n_max, t, &y)));
        remaining = &remaining[produced..];
        if !run.stopped {
            return Ok(out);
        }
        state = grow(&DressedState::from_vector(state.n_max, run.t, &run.y), config)?;
    }
}

fn grow(state: &DressedState, config: &SolverConfig) -> Result<DressedState> {
    if state.n_max >= config.n_max_cap {
        return Err(Error::TruncationOverflow { n_max: state.n_max, tail: state.tail() });
    }
    Ok(state.extended((2 * state.n_max).min(config.n_max_cap)))
}

/// Steady state on a fixed ladder `0..=n_max`.
pub fn steady_state(dressed: &DressedParams, kappa: f64, n_max: usize, config: &SolverConfig) -> Result<DressedState> {
    config.validate()?;
    if !(kappa > 0.0) {
        return Err(invalid("kappa", "must be > 0"));
    }
    if n_max < 1 {
        return Err(invalid("n_max", "must be >= 1"));
    }
    let gen = Generator::new(dressed, kappa, n_max);
    match config.steady_method {
        SteadyMethod::LinearSolve => steady_linear(&gen),
        SteadyMethod::LongTime => steady_long_time(&gen, config),
    }
}

fn steady_linear(gen: &Generator) -> Result<DressedState> {
    let n_max = gen.n_max();
    let dim = gen.dim();
    // the P0_0 equation is redundant with the others (trace conservation)
    let norm_row = index(0, 0);
    let pinned = index(n_max, 4);
    let mut triplets: Vec<Triplet<usize, usize, f64>> = gen
        .entries()
        .filter(|&(r, _, _)| r != norm_row && r != pinned)
        .map(|(r, c, v)| Triplet::new(r, c, v))
        .collect();
    triplets.extend((0..=n_max).map(|n| Triplet::new(norm_row, index(n, 0), 1.0)));
    triplets.push(Triplet::new(pinned, pinned, 1.0));

    let matrix = SparseColMat::<usize, f64>::try_new_from_triplets(dim, dim, &triplets)
        .map_err(|e| Error::SingularSystem(format!("assembly failed: {e:?}")))?;
    let lu = matrix.sp_lu().map_err(|e| Error::SingularSystem(format!("sparse LU failed: {e:?}")))?;
    let mut rhs = faer::Col::<f64>::zeros(dim);
    rhs[norm_row] = 1.0;
    let x = lu.solve(&rhs);
    let v: Vec<f64> = (0..dim).map(|i| x[i]).collect();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularSystem("non-finite steady state".into()));
    }
    Ok(DressedState::from_vector(n_max, f64::INFINITY, &v))
}

const PSEUDO_STEP_INITIAL: f64 = 1.0;
const PSEUDO_STEP_MAX: f64 = 1e10;

/// Backward-Euler steps with doubling step size, starting from the vacuum.
/// The trace is renormalized after each step; backward Euler conserves it
/// in exact arithmetic and the renormalization only strips round-off.
fn steady_long_time(gen: &Generator, config: &SolverConfig) -> Result<DressedState> {
    let n_max = gen.n_max();
    let dim = gen.dim();
    let mut x = DressedState::vacuum(n_max).to_vector();
    let mut dx = vec![0.0; dim];
    let mut h = PSEUDO_STEP_INITIAL;
    let mut residual = f64::INFINITY;
    for _ in 0..config.max_steps {
        let lu = gen.shifted_band(1.0, -h).factor()?;
        lu.solve_in_place(&mut x);
        let trace: f64 = (0..=n_max).map(|n| x[index(n, 0)]).sum();
        if !(trace.is_finite() && trace > 0.0) {
            return Err(Error::SingularSystem("pseudo-time step lost the trace".into()));
        }
        x.iter_mut().for_each(|v| *v /= trace);
        gen.apply(&x, &mut dx);
        residual = dx.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if residual < config.abs_tol {
            return Ok(DressedState::from_vector(n_max, f64::INFINITY, &x));
        }
        h = (2.0 * h).min(PSEUDO_STEP_MAX);
    }
    Err(Error::NotConverged { steps: config.max_steps, residual })
}

/// Outcome of adaptive Fock truncation.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub state: DressedState,
    pub n_max: usize,
    pub converged: bool,
    /// `(n_max, <n>)` for every ladder that was solved.
    pub refinements: Vec<(usize, f64)>,
}

/// Solves the steady state on ladders `n_max_initial * 2^k` until two
/// consecutive refinements agree on `<n>` to `rel_tol` (relative to
/// `max(<n>, 1)`) and the coarser one has `P0_{n_max} < tail_tol`. The
/// coarser, verified state is returned.
pub fn auto_truncate(dressed: &DressedParams, kappa: f64, config: &SolverConfig) -> Result<Truncation> {
    config.validate()?;
    let mut n_max = config.n_max_initial;
    let mut previous: Option<(DressedState, f64)> = None;
    let mut refinements = Vec::new();
    loop {
        let state = steady_state(dressed, kappa, n_max, config)?;
        let mean = mean_photon(&state);
        refinements.push((n_max, mean));
        if let Some((coarse, coarse_mean)) = previous.take() {
            let change = (mean - coarse_mean).abs() / coarse_mean.max(1.0);
            if change < config.rel_tol && coarse.tail() < config.tail_tol {
                let n_max = coarse.n_max;
                return Ok(Truncation { state: coarse, n_max, converged: true, refinements });
            }
        }
        if n_max >= config.n_max_cap {
            return Ok(Truncation { state, n_max, converged: false, refinements });
        }
        previous = Some((state, mean));
        n_max = (2 * n_max).min(config.n_max_cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_dressed, SystemParams};
    use crate::observables::emitter_summary;

    fn params(g1: f64, g2: f64, phi2: f64) -> SystemParams {
        SystemParams {
            g1,
            g2,
            gamma2: 2.0,
            kappa: 0.5,
            omega1: 10.0,
            omega2: 15.0,
            phi1: 0.0,
            phi2,
            ..Default::default()
        }
    }

    #[test]
    fn uncoupled_generator_is_pure_cavity_decay() {
        let p = params(0.0, 0.0, 0.0);
        let d = derive_dressed(&p).unwrap();
        let gen = Generator::new(&d, p.kappa, 6);
        let mut s = DressedState::from_photon_distribution(&[0.1, 0.2, 0.3, 0.15, 0.1, 0.1, 0.05], 6).unwrap();
        s.p1 = vec![0.0; 7];
        let ds = gen.derivative(&s);
        for n in 0..=6 {
            let inflow = if n < 6 { p.kappa * (n as f64 + 1.0) * s.p0[n + 1] } else { 0.0 };
            let expected = inflow - p.kappa * n as f64 * s.p0[n];
            assert!((ds.p0[n] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn vacuum_pumps_outer_manifold() {
        let p = params(6.0, 4.0, 1.0);
        let d = derive_dressed(&p).unwrap();
        let ds = Generator::new(&d, p.kappa, 4).derivative(&DressedState::vacuum(4));
        let c2 = d.cos_theta * d.cos_theta;
        assert!((ds.p1[0] - p.gamma2 * c2).abs() < 1e-15);
        assert_eq!(ds.p0[0], 0.0);
    }

    #[test]
    fn bandwidth_is_small() {
        let d = derive_dressed(&params(1.0, 1.0, 2.0)).unwrap();
        let (kl, ku) = Generator::new(&d, 0.3, 10).bandwidth();
        assert!(kl <= 7 && ku <= 6, "{kl} {ku}");
    }

    #[test]
    fn uncoupled_steady_state_is_vacuum_with_emitter_balance() {
        let p = params(0.0, 0.0, 0.0);
        let d = derive_dressed(&p).unwrap();
        let s = steady_state(&d, p.kappa, 8, &SolverConfig::default()).unwrap();
        assert!((s.p0[0] - 1.0).abs() < 1e-14);
        assert!(s.p0[1..].iter().all(|v| v.abs() < 1e-14));
        let outer = emitter_summary(&s).outer_population;
        assert!((outer - 2.0 * d.pump_rate() / d.alpha).abs() < 1e-13);
    }

    #[test]
    fn steady_state_methods_agree() {
        let p = params(3.0, 2.0, 2.5);
        let d = derive_dressed(&p).unwrap();
        let lin = steady_state(&d, p.kappa, 40, &SolverConfig::default()).unwrap();
        let cfg = SolverConfig { steady_method: SteadyMethod::LongTime, ..Default::default() };
        let long = steady_state(&d, p.kappa, 40, &cfg).unwrap();
        let (a, b) = (mean_photon(&lin), mean_photon(&long));
        assert!(a > 0.1);
        assert!((a - b).abs() / a < 1e-8, "{a} vs {b}");
        assert!(lin.check_invariants().within(1e-10), "{:?}", lin.check_invariants());
    }

    #[test]
    fn truncation_grows_with_photon_number() {
        let p = params(3.0, 2.0, 2.5);
        let d = derive_dressed(&p).unwrap();
        let cfg = SolverConfig { n_max_initial: 4, ..Default::default() };
        let t = auto_truncate(&d, 0.05, &cfg).unwrap();
        assert!(t.converged);
        assert!(t.n_max > 4);
        assert!(t.state.tail() < cfg.tail_tol);
    }

    #[test]
    fn truncation_cap_raises_flag() {
        let p = params(3.0, 2.0, 2.5);
        let d = derive_dressed(&p).unwrap();
        let cfg = SolverConfig { n_max_initial: 2, n_max_cap: 4, ..Default::default() };
        let t = auto_truncate(&d, 0.01, &cfg).unwrap();
        assert!(!t.converged);
        assert_eq!(t.n_max, 4);
    }

    #[test]
    fn evolve_grows_ladder_on_tail_overflow() {
        let p = params(3.0, 2.0, 2.5);
        let d = derive_dressed(&p).unwrap();
        let cfg = SolverConfig { n_max_initial: 2, ..Default::default() };
        let out = evolve(&DressedState::vacuum(2), &d, 0.1, &[5.0], &cfg).unwrap();
        assert!(out[0].n_max > 2);
        let capped = SolverConfig { n_max_cap: 2, n_max_initial: 2, ..Default::default() };
        let err = evolve(&DressedState::vacuum(2), &d, 0.1, &[5.0], &capped).unwrap_err();
        assert!(matches!(err, Error::TruncationOverflow { n_max: 2, .. }));
    }

    #[test]
    fn invalid_configs_rejected() {
        let bad = SolverConfig { n_max_initial: 64, n_max_cap: 32, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = SolverConfig { rel_tol: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
