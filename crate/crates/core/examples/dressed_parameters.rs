//! Dressed-basis constants and the secular diagnostic for a few drives.
//!
//!     cargo run --example dressed_parameters

use std::f64::consts::PI;

use ladder_cavity::model::{derive_dressed, secular_check, SystemParams};

fn main() -> ladder_cavity::Result<()> {
    let base =
        SystemParams { g1: 6.0, g2: 4.0, gamma2: 2.0, kappa: 0.1, omega1: 100.0, phi1: PI / 4.0, ..Default::default() };
    let cases = [
        ("interference point", PI / 4.0, 1.5),
        ("anti-phase", 5.0 * PI / 4.0, 1.5),
        ("equal Rabi frequencies", PI / 4.0, 1.0),
        ("weak upper laser", PI / 4.0, 0.1),
    ];
    println!(
        "{:<24} {:>8} {:>10} {:>9} {:>8} {:>8} {:>8}",
        "case", "theta", "|g|", "psi", "gamma_a", "gamma_b", "gamma_c"
    );
    for (name, phi2, ratio) in cases {
        let p = SystemParams { phi2, ..base }.with_rabi_ratio(ratio);
        let d = derive_dressed(&p)?;
        println!(
            "{name:<24} {:>8.4} {:>10.3e} {:>9.4} {:>8.4} {:>8.4} {:>8.4}",
            d.theta, d.g_abs, d.psi, d.gamma_a, d.gamma_b, d.gamma_c
        );
    }

    println!();
    for omega in [2.0, 20.0, 200.0] {
        let p = SystemParams { omega1: omega / 2f64.sqrt(), omega2: omega / 2f64.sqrt(), ..base };
        let d = derive_dressed(&p)?;
        println!("Omega = {omega:>5}: secular {}", secular_check(&p, &d));
    }
    Ok(())
}
