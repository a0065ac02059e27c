//! Steady cavity field of the reduced model, both solution routes.
//!
//!     cargo run --release --example steady_state

use std::f64::consts::PI;
use std::time::Instant;

use ladder_cavity::dressed::{auto_truncate, SolverConfig, SteadyMethod};
use ladder_cavity::model::{derive_dressed, SystemParams};
use ladder_cavity::observables::{emitter_summary, observables};

fn main() -> ladder_cavity::Result<()> {
    let p = SystemParams {
        g1: 6.0,
        g2: 4.0,
        gamma2: 2.0,
        kappa: 1e-3,
        omega1: 100.0,
        omega2: 150.0,
        phi1: PI / 4.0,
        phi2: PI / 2.0,
        ..Default::default()
    };
    let d = derive_dressed(&p)?;
    for method in [SteadyMethod::LinearSolve, SteadyMethod::LongTime] {
        let config = SolverConfig { steady_method: method, ..Default::default() };
        let start = Instant::now();
        let t = auto_truncate(&d, p.kappa, &config)?;
        let obs = observables(&t.state);
        let emitter = emitter_summary(&t.state);
        println!(
            "{:<12} <n> = {:.10}  g2 = {}  n_max = {} (converged: {})  inversion = {:.6}  [{:.1?}]",
            method.name(),
            obs.mean_n,
            obs.g2_zero,
            t.n_max,
            t.converged,
            emitter.inversion,
            start.elapsed()
        );
    }
    Ok(())
}
