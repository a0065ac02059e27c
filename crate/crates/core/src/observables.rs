//! Cavity observables: mean photon number, equal-time second-order
//! correlation, and photon-number distributions.

use std::fmt;

use crate::dressed::DressedState;

/// Below this mean photon number `g2(0)` is reported as undefined.
pub const G2_MIN_MEAN: f64 = 1e-6;

/// Negative populations no larger than this in magnitude are reported as
/// zero. The underlying state is never modified.
pub const NEGATIVE_CLAMP: f64 = 1e-10;

/// Anything that carries a photon-number distribution.
pub trait PhotonStatistics {
    /// Raw (unclamped) probabilities `p_n`, `n = 0..=n_max`.
    fn photon_distribution(&self) -> Vec<f64>;
}

impl PhotonStatistics for [f64] {
    fn photon_distribution(&self) -> Vec<f64> {
        self.to_vec()
    }
}

impl PhotonStatistics for Vec<f64> {
    fn photon_distribution(&self) -> Vec<f64> {
        self.clone()
    }
}

/// Equal-time second-order correlation, or the undefined marker when the
/// field is (numerically) empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum G2 {
    Defined(f64),
    Undefined,
}

impl G2 {
    pub fn value(self) -> Option<f64> {
        match self {
            G2::Defined(v) => Some(v),
            G2::Undefined => None,
        }
    }
}

impl fmt::Display for G2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            G2::Defined(v) => write!(f, "{v:?}"),
            G2::Undefined => f.write_str("undefined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    pub mean_n: f64,
    pub g2_zero: G2,
    pub trace: f64,
    /// Clamped distribution.
    pub photon_dist: Vec<f64>,
}

fn clamp(p: f64) -> f64 {
    if (-NEGATIVE_CLAMP..=0.0).contains(&p) {
        0.0
    } else {
        p
    }
}

pub fn clamped_distribution<S: PhotonStatistics + ?Sized>(state: &S) -> Vec<f64> {
    state.photon_distribution().into_iter().map(clamp).collect()
}

fn factorial_moments(dist: &[f64]) -> (f64, f64) {
    dist.iter().enumerate().fold((0.0, 0.0), |(m1, m2), (n, &p)| {
        let n = n as f64;
        (m1 + n * p, m2 + n * (n - 1.0) * p)
    })
}

/// `<a^dag a> = sum_n n p_n`.
pub fn mean_photon<S: PhotonStatistics + ?Sized>(state: &S) -> f64 {
    factorial_moments(&clamped_distribution(state)).0
}

/// `<a^dag a^dag a a> / <a^dag a>^2`.
pub fn g2<S: PhotonStatistics + ?Sized>(state: &S) -> G2 {
    let (m1, m2) = factorial_moments(&clamped_distribution(state));
    g2_from_moments(m1, m2)
}

fn g2_from_moments(m1: f64, m2: f64) -> G2 {
    if m1 < G2_MIN_MEAN {
        G2::Undefined
    } else {
        G2::Defined(m2 / (m1 * m1))
    }
}

pub fn observables<S: PhotonStatistics + ?Sized>(state: &S) -> Observables {
    let photon_dist = clamped_distribution(state);
    let (m1, m2) = factorial_moments(&photon_dist);
    Observables { mean_n: m1, g2_zero: g2_from_moments(m1, m2), trace: photon_dist.iter().sum(), photon_dist }
}

/// Total populations of the dressed `+`/`-` manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterSummary {
    /// `sum_n <n|rho_{++} + rho_{--}|n>`.
    pub outer_population: f64,
    /// `sum_n <n|rho_{++} - rho_{--}|n>`.
    pub inversion: f64,
}

pub fn emitter_summary(state: &DressedState) -> EmitterSummary {
    EmitterSummary { outer_population: state.p1.iter().sum(), inversion: state.p2.iter().sum() }
}
