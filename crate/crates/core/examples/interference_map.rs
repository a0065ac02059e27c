//! The phi2 x (omega2 / omega1) map of the steady cavity field, written as
//! CSV, with the located minimum.
//!
//!     cargo run --release --example interference_map -- [output.csv] [workers]

use ladder_cavity::cli::{self, parse_config, RunConfig};
use ladder_cavity::sweep::{locate_minimum, run_sweep};

const CONFIG: &str = "
g1 = 6
g2 = 4
gamma2 = 2
kappa = 0.1
omega1 = 100
omega2 = 150
phi1 = pi/4
n_max_cap = 1024
";

fn main() -> ladder_cavity::Result<()> {
    let mut args = std::env::args().skip(1);
    let output = args.next().unwrap_or_else(|| "interference_map.csv".into());
    let workers = args.next().and_then(|w| w.parse().ok()).unwrap_or_else(cli::config::default_workers);
    let cfg = RunConfig { workers, ..parse_config(CONFIG)? };

    let result = run_sweep(&cfg.sweep_spec(), cfg.workers)?;
    std::fs::write(&output, cli::sweep_csv(&cfg, &result))?;
    let min = locate_minimum(&result)?;
    let max = result.cells.iter().map(|c| c.mean_n).fold(0.0, f64::max);
    println!(
        "{} x {} cells -> {output}\nminimum <n> = {:e} at phi2 = {:.4}, ratio = {:.4} (max <n> = {max:.4})",
        result.x_values.len(),
        result.y_values.len(),
        min.mean_n,
        result.x_values[min.ix],
        result.y_values[min.iy]
    );
    for dx in [-2i64, -1, 1, 2] {
        let ix = (min.ix as i64 + dx) as usize;
        println!("  phi2 = {:.4}: g2 = {}", result.x_values[ix], result.cell(ix, min.iy).g2);
    }
    Ok(())
}
