//! Brute-force reference: the full master equation of the driven ladder
//! emitter and the cavity on the bare-level x Fock basis, in the frame
//! rotating at the laser frequency, without any secular approximation.
//!
//! Basis ordering is level-major, `|i> (x) |n>` at index `i (n_max + 1) + n`
//! with levels `0, 1, 2` standing for `|1>, |2>, |3>`. Density matrices are
//! vectorized column by column: `rho_{ij}` sits at `i + j d`.

use faer::prelude::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use crate::dressed::SolverConfig;
use crate::error::{invalid, Error, Result};
use crate::model::SystemParams;
use crate::observables::PhotonStatistics;
use crate::ode::{self, OdeSystem, StepAction, Tolerances};

pub const LEVELS: usize = 3;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Smallest eigenvalue accepted for a valid density matrix.
pub const POSITIVITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleParams {
    pub base: SystemParams,
    /// Cavity-laser detuning `omega_c - omega_L`.
    pub delta_c: f64,
}

impl OracleParams {
    /// Cavity tuned to the most energetic dressed sideband, `+2 Omega`.
    pub fn new(base: SystemParams) -> Self {
        Self { base, delta_c: 2.0 * base.omega_total() }
    }

    pub fn with_delta_c(mut self, delta_c: f64) -> Self {
        self.delta_c = delta_c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !self.delta_c.is_finite() {
            return Err(invalid("delta_c", "must be finite"));
        }
        Ok(())
    }
}

/// Hamiltonian and collapse operators on the truncated Hilbert space.
#[derive(Debug, Clone)]
pub struct OpenSystem {
    pub n_max: usize,
    pub hamiltonian: Mat<C64>,
    /// `(rate, O)`; each contributes `rate (O rho O^dag - {O^dag O, rho} / 2)`.
    pub collapse: Vec<(f64, Mat<C64>)>,
}

impl OpenSystem {
    pub fn new(params: &OracleParams, n_max: usize) -> Self {
        let p = &params.base;
        let a = fock_annihilation(n_max);
        let id_f = Mat::<C64>::identity(n_max + 1, n_max + 1);
        let id_l = Mat::<C64>::identity(LEVELS, LEVELS);
        let s = |i: usize, j: usize| kron_dense(&level_op(i, j), &id_f);
        let a_full = kron_dense(&id_l, &a);
        let ad_full = a_full.adjoint().to_owned();

        let (s12, s21, s23, s32) = (s(0, 1), s(1, 0), s(1, 2), s(2, 1));
        let e1 = C64::from_polar(1.0, -p.phi1);
        let e2 = C64::from_polar(1.0, -p.phi2);

        let mut h = scaled(&(&ad_full * &a_full), C64::from(params.delta_c));
        h += scaled(&(&s21 + &s12), C64::from(p.omega1));
        h += scaled(&(&s32 + &s23), C64::from(p.omega2));
        let emit1 = scaled(&(&ad_full * &s12), e1) - scaled(&(&s21 * &a_full), e1.conj());
        let emit2 = scaled(&(&ad_full * &s23), e2) - scaled(&(&s32 * &a_full), e2.conj());
        h += scaled(&emit1, I * p.g1);
        h += scaled(&emit2, I * p.g2);

        let collapse = vec![(p.kappa, a_full), (p.gamma1, s12), (p.gamma2, s23)];
        Self { n_max, hamiltonian: h, collapse }
    }

    pub fn dim(&self) -> usize {
        LEVELS * (self.n_max + 1)
    }
}

fn scaled(m: &Mat<C64>, c: C64) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * c)
}

fn fock_annihilation(n_max: usize) -> Mat<C64> {
    Mat::from_fn(n_max + 1, n_max + 1, |r, c| if c == r + 1 { C64::from((c as f64).sqrt()) } else { ZERO })
}

fn level_op(i: usize, j: usize) -> Mat<C64> {
    Mat::from_fn(LEVELS, LEVELS, |r, c| if r == i && c == j { ONE } else { ZERO })
}

fn kron_dense(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(a.nrows() * br, a.ncols() * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

/// Sparse complex superoperator in compressed-row form.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    hilbert_dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl Liouvillian {
    fn from_triplets(hilbert_dim: usize, mut t: Vec<(usize, usize, C64)>) -> Self {
        let dim = hilbert_dim * hilbert_dim;
        t.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(t.len());
        let mut vals: Vec<C64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in t {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
                continue;
            }
            cols.push(c);
            vals.push(v);
            row_ptr[r + 1] += 1;
            last = Some((r, c));
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { hilbert_dim, row_ptr, cols, vals }
    }

    /// Hilbert-space dimension `d`; the superoperator is `d^2 x d^2`.
    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn dim(&self) -> usize {
        self.hilbert_dim * self.hilbert_dim
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim())
            .flat_map(move |r| (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k], self.vals[k])))
    }

    pub fn apply(&self, x: &[C64], y: &mut [C64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_ptr[r], self.row_ptr[r + 1]);
            *out = self.cols[lo..hi].iter().zip(&self.vals[lo..hi]).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    /// `max |A_{rc} - B_{rc}|` over the union of both sparsity patterns.
    pub fn max_abs_diff(&self, other: &Liouvillian) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let mut diff = std::collections::HashMap::new();
        for (r, c, v) in self.entries() {
            *diff.entry((r, c)).or_insert(ZERO) += v;
        }
        for (r, c, v) in other.entries() {
            *diff.entry((r, c)).or_insert(ZERO) -= v;
        }
        diff.values().fold(0.0, |m, v| m.max(v.norm()))
    }
}

fn nonzeros(m: &Mat<C64>) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            let v = m[(r, c)];
            if v != ZERO {
                out.push((r, c, v));
            }
        }
    }
    out
}

/// Sparse `A (x) B` scaled by `scale`, appended to `out`.
fn kron_into(
    a: &[(usize, usize, C64)],
    b: &[(usize, usize, C64)],
    bdim: usize,
    scale: C64,
    out: &mut Vec<(usize, usize, C64)>,
) {
    for &(ar, ac, av) in a {
        for &(br, bc, bv) in b {
            out.push((ar * bdim + br, ac * bdim + bc, scale * av * bv));
        }
    }
}

/// Generator of the full master equation, assembled operator by operator
/// from Kronecker products (`vec(A X B) = (B^T (x) A) vec(X)`).
pub fn build_liouvillian(params: &OracleParams, n_max: usize) -> Liouvillian {
    assert!(n_max >= 1, "n_max must be >= 1");
    let sys = OpenSystem::new(params, n_max);
    let d = sys.dim();
    let id = nonzeros(&Mat::<C64>::identity(d, d));
    let mut t = Vec::new();

    let h = &sys.hamiltonian;
    kron_into(&id, &nonzeros(h), d, -I, &mut t);
    kron_into(&nonzeros(&h.transpose().to_owned()), &id, d, I, &mut t);

    for (rate, op) in &sys.collapse {
        if *rate == 0.0 {
            continue;
        }
        let rate = C64::from(*rate);
        let odo = op.adjoint() * op;
        kron_into(&nonzeros(&op.conjugate().to_owned()), &nonzeros(op), d, rate, &mut t);
        kron_into(&id, &nonzeros(&odo), d, -rate * 0.5, &mut t);
        kron_into(&nonzeros(&odo.transpose().to_owned()), &id, d, -rate * 0.5, &mut t);
    }
    Liouvillian::from_triplets(d, t)
}

/// Same generator as [`build_liouvillian`], written element by element:
/// `L[(i,j),(k,l)]` is the coefficient of `rho_{kl}` in `d rho_{ij} / dt`.
/// Quartic in the Hilbert dimension; meant for cross-checking only.
pub fn build_liouvillian_elementwise(params: &OracleParams, n_max: usize) -> Liouvillian {
    let sys = OpenSystem::new(params, n_max);
    let d = sys.dim();
    let h = &sys.hamiltonian;
    let ops: Vec<(f64, Mat<C64>, Mat<C64>)> =
        sys.collapse.iter().map(|(rate, o)| (*rate, o.clone(), o.adjoint() * o)).collect();
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut t = Vec::new();
    for j in 0..d {
        for i in 0..d {
            for l in 0..d {
                for k in 0..d {
                    let mut v = -I * (h[(i, k)] * delta(l, j) - h[(l, j)] * delta(i, k));
                    for (rate, o, odo) in &ops {
                        v += (o[(i, k)] * o[(j, l)].conj()
                            - odo[(i, k)] * (0.5 * delta(l, j))
                            - odo[(l, j)] * (0.5 * delta(i, k)))
                            * *rate;
                    }
                    if v != ZERO {
                        t.push((i + j * d, k + l * d, v));
                    }
                }
            }
        }
    }
    Liouvillian::from_triplets(d, t)
}

/// Density matrix on the bare-level x Fock basis.
#[derive(Debug, Clone)]
pub struct FullState {
    pub n_max: usize,
    pub rho: Mat<C64>,
    /// Units of `1 / gamma1`; infinite for steady states.
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullReport {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl FullState {
    /// Emitter in level `level` (0 = |1>), cavity in Fock state `n`.
    pub fn product(n_max: usize, level: usize, n: usize) -> Self {
        let d = LEVELS * (n_max + 1);
        let k = level * (n_max + 1) + n;
        let rho = Mat::from_fn(d, d, |r, c| if r == k && c == k { ONE } else { ZERO });
        Self { n_max, rho, time: 0.0 }
    }

    pub fn dim(&self) -> usize {
        LEVELS * (self.n_max + 1)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.rho[(i, i)]).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut m: f64 = 0.0;
        for j in 0..d {
            for i in 0..=j {
                m = m.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let herm = Mat::from_fn(self.dim(), self.dim(), |i, j| (self.rho[(i, j)] + self.rho[(j, i)].conj()) * 0.5);
        let ev = herm
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::SingularSystem(format!("eigenvalue solver failed: {e:?}")))?;
        Ok(ev.first().copied().unwrap_or(0.0))
    }

    pub fn report(&self) -> Result<FullReport> {
        Ok(FullReport {
            trace_error: (self.trace() - ONE).norm(),
            hermiticity_error: self.hermiticity_error(),
            min_eigenvalue: self.min_eigenvalue()?,
        })
    }

    /// Populations of the bare levels `|1>, |2>, |3>`.
    pub fn level_populations(&self) -> [f64; LEVELS] {
        let nf = self.n_max + 1;
        let mut pops = [0.0; LEVELS];
        for (i, p) in pops.iter_mut().enumerate() {
            *p = (0..nf).map(|n| self.rho[(i * nf + n, i * nf + n)].re).sum();
        }
        pops
    }

    fn hermitize(&mut self) {
        let d = self.dim();
        for j in 0..d {
            for i in 0..j {
                let avg = (self.rho[(i, j)] + self.rho[(j, i)].conj()) * 0.5;
                self.rho[(i, j)] = avg;
                self.rho[(j, i)] = avg.conj();
            }
            self.rho[(j, j)] = C64::from(self.rho[(j, j)].re);
        }
    }

    fn to_vec(&self) -> Vec<C64> {
        let d = self.dim();
        (0..d * d).map(|k| self.rho[(k % d, k / d)]).collect()
    }

    fn from_vec(n_max: usize, time: f64, v: &[C64]) -> Self {
        let d = LEVELS * (n_max + 1);
        Self { n_max, rho: Mat::from_fn(d, d, |i, j| v[i + j * d]), time }
    }
}

impl PhotonStatistics for FullState {
    fn photon_distribution(&self) -> Vec<f64> {
        let nf = self.n_max + 1;
        (0..nf).map(|n| (0..LEVELS).map(|i| self.rho[(i * nf + n, i * nf + n)].re).sum()).collect()
    }
}

/// Steady state of the full master equation on the ladder `0..=n_max`.
/// The `rho_{00}` equation is replaced by the trace condition.
pub fn oracle_steady(params: &OracleParams, n_max: usize) -> Result<FullState> {
    params.validate()?;
    if n_max < 1 {
        return Err(invalid("n_max", "must be >= 1"));
    }
    let liouv = build_liouvillian(params, n_max);
    let d = liouv.hilbert_dim();
    let dim = liouv.dim();
    let mut triplets: Vec<Triplet<usize, usize, C64>> =
        liouv.entries().filter(|&(r, _, _)| r != 0).map(|(r, c, v)| Triplet::new(r, c, v)).collect();
    triplets.extend((0..d).map(|i| Triplet::new(0, i + i * d, ONE)));

    let matrix = SparseColMat::<usize, C64>::try_new_from_triplets(dim, dim, &triplets)
        .map_err(|e| Error::SingularSystem(format!("assembly failed: {e:?}")))?;
    let lu = matrix.sp_lu().map_err(|e| Error::SingularSystem(format!("sparse LU failed: {e:?}")))?;
    let mut rhs = faer::Col::<C64>::zeros(dim);
    rhs[0] = ONE;
    let x = lu.solve(&rhs);
    let v: Vec<C64> = (0..dim).map(|k| x[k]).collect();
    if v.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::SingularSystem("non-finite steady state".into()));
    }
    let mut state = FullState::from_vec(n_max, f64::INFINITY, &v);
    state.hermitize();
    let min_eigenvalue = state.min_eigenvalue()?;
    if min_eigenvalue < -POSITIVITY_TOL {
        return Err(Error::NonPositiveState { min_eigenvalue });
    }
    Ok(state)
}

struct RealForm<'a>(&'a Liouvillian);

impl OdeSystem for RealForm<'_> {
    fn dim(&self) -> usize {
        2 * self.0.dim()
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let n = self.0.dim();
        let x: Vec<C64> = (0..n).map(|k| C64::new(y[k], y[n + k])).collect();
        let mut out = vec![ZERO; n];
        self.0.apply(&x, &mut out);
        for (k, z) in out.iter().enumerate() {
            dy[k] = z.re;
            dy[n + k] = z.im;
        }
    }
}

/// Integrates the full master equation from `initial` to `t_final`.
/// The state is re-symmetrized after every accepted step.
pub fn oracle_evolve(
    initial: &FullState,
    params: &OracleParams,
    t_final: f64,
    config: &SolverConfig,
) -> Result<FullState> {
    params.validate()?;
    config.validate()?;
    if t_final < initial.time {
        return Err(invalid("t_final", "precedes the initial time"));
    }
    let liouv = build_liouvillian(params, initial.n_max);
    let d = liouv.hilbert_dim();
    let n = liouv.dim();
    let v = initial.to_vec();
    let y0: Vec<f64> = v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect();
    let tol = Tolerances { rel: config.rel_tol, abs: config.abs_tol, h_init: None, max_steps: config.max_steps };
    let run = ode::integrate(&RealForm(&liouv), initial.time, &y0, &[t_final], tol, |_, y| {
        for j in 0..d {
            for i in 0..j {
                let (a, b) = (i + j * d, j + i * d);
                let re = 0.5 * (y[a] + y[b]);
                let im = 0.5 * (y[n + a] - y[n + b]);
                y[a] = re;
                y[b] = re;
                y[n + a] = im;
                y[n + b] = -im;
            }
            y[n + j + j * d] = 0.0;
        }
        StepAction::Modified
    })?;
    let y = &run.outputs.last().expect("final output reached").1;
    let v: Vec<C64> = (0..n).map(|k| C64::new(y[k], y[n + k])).collect();
    let mut state = FullState::from_vec(initial.n_max, t_final, &v);
    state.hermitize();
    Ok(state)
}
