//! Adaptive Fock truncation: ladders tried and the photon number on each.
//!
//!     cargo run --release --example truncation

use std::f64::consts::PI;

use ladder_cavity::dressed::{auto_truncate, SolverConfig};
use ladder_cavity::model::{derive_dressed, SystemParams};

fn main() -> ladder_cavity::Result<()> {
    let base = SystemParams {
        g1: 6.0,
        g2: 4.0,
        gamma2: 2.0,
        omega1: 100.0,
        omega2: 150.0,
        phi1: PI / 4.0,
        phi2: 5.0 * PI / 4.0,
        ..Default::default()
    };
    for kappa in [1.0, 0.1, 1e-2, 1e-3] {
        let p = SystemParams { kappa, ..base };
        let t = auto_truncate(&derive_dressed(&p)?, kappa, &SolverConfig::default())?;
        let steps: Vec<String> = t.refinements.iter().map(|(n, m)| format!("{n}:{m:.8}")).collect();
        println!(
            "kappa = {kappa:<6} kept n_max = {:<4} tail = {:.1e}  refinements {}",
            t.n_max,
            t.state.tail(),
            steps.join("  ")
        );
    }

    let tight = SolverConfig { n_max_initial: 8, n_max_cap: 32, ..Default::default() };
    let t = auto_truncate(&derive_dressed(&SystemParams { kappa: 1e-3, ..base })?, 1e-3, &tight)?;
    println!("cap 32 at kappa = 1e-3: converged = {} (n_max {}, tail {:.1e})", t.converged, t.n_max, t.state.tail());
    Ok(())
}
