//! Photon-number distributions and g2(0) approaching the interference point.
//!
//!     cargo run --release --example photon_statistics

use std::f64::consts::PI;

use ladder_cavity::dressed::{auto_truncate, SolverConfig};
use ladder_cavity::model::{derive_dressed, SystemParams};
use ladder_cavity::observables::observables;

fn main() -> ladder_cavity::Result<()> {
    let base = SystemParams {
        g1: 6.0,
        g2: 4.0,
        gamma2: 2.0,
        kappa: 1e-3,
        omega1: 100.0,
        omega2: 150.0,
        phi1: PI / 4.0,
        ..Default::default()
    };
    for offset_deg in [180.0, 90.0, 30.0, 9.0, 3.0, 1.0, 0.0] {
        let p = SystemParams { phi2: base.phi1 + offset_deg * PI / 180.0, ..base };
        let d = derive_dressed(&p)?;
        let t = auto_truncate(&d, p.kappa, &SolverConfig::default())?;
        let obs = observables(&t.state);
        let head: Vec<String> = obs.photon_dist.iter().take(5).map(|q| format!("{q:.3}")).collect();
        println!(
            "phi2 - phi1 = {offset_deg:>5} deg  |g| = {:.4}  <n> = {:>9.4}  g2 = {:<20}  p_0..4 = [{}]",
            d.g_abs,
            obs.mean_n,
            obs.g2_zero.to_string(),
            head.join(", ")
        );
    }
    Ok(())
}
