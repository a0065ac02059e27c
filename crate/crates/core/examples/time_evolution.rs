//! Cavity build-up from the vacuum, and free decay of a Fock state.
//!
//!     cargo run --release --example time_evolution

use std::f64::consts::PI;

use ladder_cavity::dressed::{evolve, DressedState, SolverConfig};
use ladder_cavity::model::{derive_dressed, SystemParams};
use ladder_cavity::observables::observables;

fn main() -> ladder_cavity::Result<()> {
    let p = SystemParams {
        g1: 6.0,
        g2: 4.0,
        gamma2: 2.0,
        kappa: 0.1,
        omega1: 100.0,
        omega2: 150.0,
        phi1: PI / 4.0,
        phi2: 5.0 * PI / 4.0,
        ..Default::default()
    };
    let d = derive_dressed(&p)?;
    let times: Vec<f64> = (0..=10).map(|k| 5.0 * k as f64).collect();
    println!("build-up, anti-phase lasers");
    for s in evolve(&DressedState::vacuum(16), &d, p.kappa, &times, &SolverConfig::default())? {
        let obs = observables(&s);
        let r = s.check_invariants();
        println!(
            "  t = {:>4}  <n> = {:.6}  g2 = {}  n_max = {}  trace error = {:.1e}",
            s.time, obs.mean_n, obs.g2_zero, s.n_max, r.trace_error
        );
    }

    let free = derive_dressed(&SystemParams { g1: 0.0, g2: 0.0, kappa: 1.0, ..p })?;
    let fock = DressedState::from_photon_distribution(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0], 16)?;
    println!("free decay of |5>, kappa = 1");
    for s in evolve(&fock, &free, 1.0, &[0.5, 1.0, 2.0, 5.0], &SolverConfig::default())? {
        let n = observables(&s).mean_n;
        println!("  t = {:>4}  <n> = {n:.9}  5 exp(-t) = {:.9}", s.time, 5.0 * (-s.time).exp());
    }
    Ok(())
}
