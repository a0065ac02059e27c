//! Adaptive Dormand-Prince 5(4) integrator with continuous (dense) output.
//!
//! Step-size control follows Hairer, Norsett & Wanner; the dense output is
//! the fourth-order continuous extension of the same tableau, so outputs at
//! arbitrary times cost no extra right-hand-side evaluations.

use crate::error::{Error, Result};

pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
    /// Initial step; chosen automatically when `None`.
    pub h_init: Option<f64>,
    pub max_steps: usize,
}

/// What the per-step hook wants the integrator to do next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepAction {
    Continue,
    /// The hook changed `y`; derivatives are re-evaluated.
    Modified,
    Stop,
}

#[derive(Debug)]
pub struct Integration {
    /// `(t, y(t))` for every requested output time that was reached.
    pub outputs: Vec<(f64, Vec<f64>)>,
    pub t: f64,
    pub y: Vec<f64>,
    pub steps: usize,
    /// True when the step hook requested a stop before the last output time.
    pub stopped: bool,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Integrates from `t0` through every time in `outputs` (ascending, all
/// `>= t0`). `hook` runs after each accepted step with the new time and state.
pub fn integrate<S, F>(
    sys: &S,
    t0: f64,
    y0: &[f64],
    outputs: &[f64],
    tol: Tolerances,
    mut hook: F,
) -> Result<Integration>
where
    S: OdeSystem,
    F: FnMut(f64, &mut [f64]) -> StepAction,
{
    let n = sys.dim();
    assert_eq!(y0.len(), n, "state length does not match system dimension");
    debug_assert!(outputs.windows(2).all(|w| w[0] <= w[1]));

    let mut result =
        Integration { outputs: Vec::with_capacity(outputs.len()), t: t0, y: y0.to_vec(), steps: 0, stopped: false };
    let mut pending = outputs.iter().copied().peekable();
    while let Some(&t_out) = pending.peek() {
        if t_out > t0 {
            break;
        }
        result.outputs.push((t_out, y0.to_vec()));
        pending.next();
    }
    let Some(&t_end) = outputs.last() else {
        return Ok(result);
    };
    if t_end <= t0 {
        return Ok(result);
    }

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    let mut cont = vec![vec![0.0; n]; 5];

    let mut t = t0;
    let mut y = y0.to_vec();
    sys.rhs(t, &y, &mut k1);
    let mut h = tol.h_init.unwrap_or_else(|| initial_step(sys, t, &y, &k1, tol, &mut ytmp, &mut k2));
    h = h.min(t_end - t);
    let mut reject_streak = false;

    while t < t_end {
        if result.steps >= tol.max_steps {
            return Err(Error::StepBudgetExhausted { steps: result.steps, time: t });
        }
        if h.abs() <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { time: t });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        sys.rhs(t + C2 * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        sys.rhs(t + C3 * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        sys.rhs(t + C4 * h, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        sys.rhs(t + C5 * h, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        sys.rhs(t + h, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        sys.rhs(t + h, &ynew, &mut k7);

        let mut err = 0.0;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = tol.abs + tol.rel * y[i].abs().max(ynew[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / n as f64).sqrt();
        result.steps += 1;

        if !err.is_finite() {
            h *= 0.1;
            reject_streak = true;
            continue;
        }
        if err > 1.0 {
            let fac = (0.9 * err.powf(-0.2)).max(0.2);
            h *= if reject_streak { fac.min(0.5) } else { fac };
            reject_streak = true;
            continue;
        }
        reject_streak = false;

        // dense output coefficients for the accepted step
        for i in 0..n {
            let dy = ynew[i] - y[i];
            let bspl = h * k1[i] - dy;
            cont[0][i] = y[i];
            cont[1][i] = dy;
            cont[2][i] = bspl;
            cont[3][i] = dy - h * k7[i] - bspl;
            cont[4][i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        let t_new = if last { t_end } else { t + h };
        while let Some(&t_out) = pending.peek() {
            if t_out > t_new {
                break;
            }
            let y_out = if t_out == t_new {
                ynew.clone()
            } else {
                let s = (t_out - t) / h;
                let s1 = 1.0 - s;
                (0..n)
                    .map(|i| cont[0][i] + s * (cont[1][i] + s1 * (cont[2][i] + s * (cont[3][i] + s1 * cont[4][i]))))
                    .collect()
            };
            result.outputs.push((t_out, y_out));
            pending.next();
        }

        t = t_new;
        std::mem::swap(&mut y, &mut ynew);
        std::mem::swap(&mut k1, &mut k7);

        match hook(t, &mut y) {
            StepAction::Continue => {}
            StepAction::Modified => sys.rhs(t, &y, &mut k1),
            StepAction::Stop => {
                result.stopped = pending.peek().is_some();
                break;
            }
        }

        let fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 10.0);
        h *= fac;
    }

    result.t = t;
    result.y = y;
    Ok(result)
}

fn initial_step<S: OdeSystem>(
    sys: &S,
    t: f64,
    y: &[f64],
    f0: &[f64],
    tol: Tolerances,
    ytmp: &mut [f64],
    f1: &mut [f64],
) -> f64 {
    let n = y.len() as f64;
    let sc = |yi: f64| tol.abs + tol.rel * yi.abs();
    let d0 = (y.iter().map(|&yi| (yi / sc(yi)).powi(2)).sum::<f64>() / n).sqrt();
    let d1 = (y.iter().zip(f0).map(|(&yi, &fi)| (fi / sc(yi)).powi(2)).sum::<f64>() / n).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    for i in 0..y.len() {
        ytmp[i] = y[i] + h0 * f0[i];
    }
    sys.rhs(t + h0, ytmp, f1);
    let d2 = (y.iter().zip(f0.iter().zip(f1.iter())).map(|(&yi, (&a, &b))| ((b - a) / sc(yi)).powi(2)).sum::<f64>()
        / n)
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1)
}
