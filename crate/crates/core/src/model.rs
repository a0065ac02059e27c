//! Physical parameters of the driven ladder emitter in a cavity and the
//! constants of its dressed-state description.
//!
//! All rates and frequencies are dimensionless multiples of the lower
//! transition decay rate `gamma1`, which defaults to one.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Input parameters of the emitter-cavity system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Cavity coupling to the lower transition |1> <-> |2>.
    pub g1: f64,
    /// Cavity coupling to the upper transition |2> <-> |3>.
    pub g2: f64,
    /// Decay rate |2> -> |1>; the unit of all rates.
    pub gamma1: f64,
    /// Decay rate |3> -> |2>.
    pub gamma2: f64,
    /// Cavity damping rate.
    pub kappa: f64,
    /// Rabi frequency of the lower-transition laser.
    pub omega1: f64,
    /// Rabi frequency of the upper-transition laser.
    pub omega2: f64,
    /// Lower-transition laser phase, radians.
    pub phi1: f64,
    /// Upper-transition laser phase, radians.
    pub phi2: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self { g1: 0.0, g2: 0.0, gamma1: 1.0, gamma2: 0.0, kappa: 1.0, omega1: 1.0, omega2: 0.0, phi1: 0.0, phi2: 0.0 }
    }
}

impl SystemParams {
    /// Checks signs and finiteness. A vanishing pair of Rabi frequencies is
    /// allowed here (the full master equation handles undriven emitters);
    /// [`derive_dressed`] rejects it.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("g1", self.g1),
            ("g2", self.g2),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("kappa", self.kappa),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("phi1", self.phi1),
            ("phi2", self.phi2),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        let nonneg = [
            ("g1", self.g1),
            ("g2", self.g2),
            ("gamma2", self.gamma2),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
        ];
        for (name, v) in nonneg {
            if v < 0.0 {
                return Err(invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        if self.gamma1 <= 0.0 {
            return Err(invalid("gamma1", format!("must be > 0, got {}", self.gamma1)));
        }
        if self.kappa <= 0.0 {
            return Err(invalid("kappa", format!("must be > 0, got {}", self.kappa)));
        }
        Ok(())
    }

    /// Generalized Rabi frequency `sqrt(omega1^2 + omega2^2)`.
    pub fn omega_total(&self) -> f64 {
        self.omega1.hypot(self.omega2)
    }

    /// Returns a copy with `omega2 = ratio * omega1`.
    pub fn with_rabi_ratio(mut self, ratio: f64) -> Self {
        self.omega2 = ratio * self.omega1;
        self
    }

    /// Returns a copy with both laser phases shifted by `shift`.
    pub fn with_phase_shift(mut self, shift: f64) -> Self {
        self.phi1 += shift;
        self.phi2 += shift;
        self
    }
}

/// Constants of the dressed-state master equation and of the reduced
/// five-variable system derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedParams {
    /// Mixing angle `atan2(omega2, omega1)`, in `[0, pi/2]`.
    pub theta: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    /// Generalized Rabi frequency.
    pub omega_total: f64,
    /// Effective coupling of the cavity to the `|+> -> |->` transition.
    pub g_eff: Complex64,
    pub g_abs: f64,
    /// `arg(g_eff)`; zero when `g_eff = 0`.
    pub psi: f64,
    /// Rate of `L(R_{-0}) + L(R_{+0})`.
    pub gamma_a: f64,
    /// Rate of `L(R_{0-}) + L(R_{0+})`.
    pub gamma_b: f64,
    /// Rate of `L(R_z) + L(R_{+-}) + L(R_{-+})`.
    pub gamma_c: f64,
    /// Relaxation of `rho_{++} + rho_{--}` (enters as `alpha / 2`).
    pub alpha: f64,
    /// Relaxation of `rho_{++} - rho_{--}` (enters as `beta / 2`).
    pub beta: f64,
    /// Decay of the `+-` coherence.
    pub zeta: f64,
}

impl DressedParams {
    /// Feeding rate of the `+`/`-` manifold from `|0>`, `gamma2 cos^2(theta)`.
    pub fn pump_rate(&self) -> f64 {
        4.0 * self.gamma_a
    }
}

/// Derives the dressed-basis constants from the system parameters.
///
/// The coupling amplitudes are formed as `g_i omega_i / Omega` instead of
/// through `cos(theta)` and `sin(theta)`, so a parameter set with
/// `g1 omega1 = g2 omega2` and equal phases gives an effective coupling of
/// exactly zero.
pub fn derive_dressed(params: &SystemParams) -> Result<DressedParams> {
    params.validate()?;
    if params.omega1 == 0.0 && params.omega2 == 0.0 {
        return Err(Error::UndefinedMixingAngle);
    }
    let omega_total = params.omega_total();
    let theta = params.omega2.atan2(params.omega1);
    let (cos_theta, sin_theta) = (params.omega1 / omega_total, params.omega2 / omega_total);
    let (c2, s2) = (cos_theta * cos_theta, sin_theta * sin_theta);

    let upper = Complex64::from_polar(params.g2 * params.omega2 / omega_total, -params.phi2);
    let lower = Complex64::from_polar(params.g1 * params.omega1 / omega_total, -params.phi1);
    let g_eff = (upper - lower) * 0.5;
    let g_abs = g_eff.norm();
    let psi = if g_abs == 0.0 { 0.0 } else { g_eff.arg() };

    let (gamma1, gamma2) = (params.gamma1, params.gamma2);
    Ok(DressedParams {
        theta,
        cos_theta,
        sin_theta,
        omega_total,
        g_eff,
        g_abs,
        psi,
        gamma_a: gamma2 * c2 / 4.0,
        gamma_b: gamma1 * s2 / 4.0,
        gamma_c: (gamma2 * s2 + gamma1 * c2) / 8.0,
        alpha: gamma1 * s2 + 2.0 * gamma2 * c2,
        beta: gamma1 + gamma2 * s2,
        zeta: (gamma1 * (2.0 + c2) + 3.0 * gamma2 * s2) / 4.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Ok,
    Warn,
    Violation,
}

impl std::fmt::Display for Severity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Severity::Ok => "OK",
            Severity::Warn => "WARN",
            Severity::Violation => "VIOLATION",
        })
    }
}

/// Ratio thresholds for the secular-approximation diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularThresholds {
    pub warn: f64,
    pub violation: f64,
}

impl Default for SecularThresholds {
    fn default() -> Self {
        Self { warn: 0.1, violation: 0.3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularReport {
    /// `max(g1, g2) / Omega`.
    pub coupling_ratio: f64,
    /// `max(gamma1, gamma2) / Omega`.
    pub decay_ratio: f64,
    pub severity: Severity,
}

impl std::fmt::Display for SecularReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (max(g)/Omega = {:.4}, max(gamma)/Omega = {:.4})",
            self.severity, self.coupling_ratio, self.decay_ratio
        )
    }
}

pub fn secular_check(params: &SystemParams, dressed: &DressedParams) -> SecularReport {
    secular_check_with(params, dressed, SecularThresholds::default())
}

pub fn secular_check_with(
    params: &SystemParams,
    dressed: &DressedParams,
    thresholds: SecularThresholds,
) -> SecularReport {
    let coupling_ratio = params.g1.max(params.g2) / dressed.omega_total;
    let decay_ratio = params.gamma1.max(params.gamma2) / dressed.omega_total;
    let worst = coupling_ratio.max(decay_ratio);
    let severity = if worst >= thresholds.violation {
        Severity::Violation
    } else if worst >= thresholds.warn {
        Severity::Warn
    } else {
        Severity::Ok
    };
    SecularReport { coupling_ratio, decay_ratio, severity }
}
