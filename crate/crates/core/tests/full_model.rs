//! Full master-equation checks that do not go through the reduced model.

use std::f64::consts::PI;

use faer::Mat;
use ladder_cavity::dressed::SolverConfig;
use ladder_cavity::model::SystemParams;
use ladder_cavity::observables::observables;
use ladder_cavity::oracle::{oracle_evolve, oracle_steady, FullState, OracleParams, LEVELS};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params() -> SystemParams {
    SystemParams {
        g1: 1.0,
        g2: 0.8,
        gamma2: 2.0,
        kappa: 0.5,
        omega1: 12.0,
        omega2: 9.0,
        phi1: 0.3,
        phi2: 2.1,
        ..Default::default()
    }
}

/// Random emitter-only unitary `U (x) 1`, columns by Gram-Schmidt.
fn emitter_unitary(rng: &mut ChaCha8Rng, n_max: usize) -> Mat<C64> {
    let mut cols: Vec<[C64; LEVELS]> = Vec::new();
    while cols.len() < LEVELS {
        let mut v = [C64::new(0.0, 0.0); LEVELS];
        for z in v.iter_mut() {
            *z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        }
        for c in &cols {
            let dot: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for k in 0..LEVELS {
                v[k] -= c[k] * dot;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.map(|z| z / norm));
        }
    }
    let nf = n_max + 1;
    Mat::from_fn(
        LEVELS * nf,
        LEVELS * nf,
        |r, c| {
            if r % nf == c % nf {
                cols[c / nf][r / nf]
            } else {
                C64::new(0.0, 0.0)
            }
        },
    )
}

#[test]
fn photon_statistics_invariant_under_emitter_unitaries() {
    let n_max = 8;
    let state = oracle_steady(&OracleParams::new(params()), n_max).unwrap();
    let before = observables(&state);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let u = emitter_unitary(&mut rng, n_max);
        let rotated = FullState { rho: &u * &state.rho * u.adjoint(), ..state.clone() };
        let after = observables(&rotated);
        assert!((after.mean_n - before.mean_n).abs() < 1e-13);
        assert!((after.g2_zero.value().unwrap() - before.g2_zero.value().unwrap()).abs() < 1e-11);
        assert!(rotated.report().unwrap().min_eigenvalue > -1e-12);
    }
}

#[test]
fn evolution_approaches_steady_state() {
    let n_max = 6;
    let p = OracleParams::new(params());
    let steady = oracle_steady(&p, n_max).unwrap();
    let config = SolverConfig { rel_tol: 1e-9, abs_tol: 1e-11, ..Default::default() };
    let late = oracle_evolve(&FullState::product(n_max, 0, 0), &p, 40.0, &config).unwrap();
    let report = late.report().unwrap();
    assert!(report.trace_error < 1e-9);
    assert!(report.hermiticity_error < 1e-14);
    assert!(report.min_eigenvalue > -1e-9);
    let diff = (0..late.dim())
        .flat_map(|i| (0..late.dim()).map(move |j| (i, j)))
        .map(|(i, j)| (late.rho[(i, j)] - steady.rho[(i, j)]).norm())
        .fold(0.0f64, f64::max);
    assert!(diff < 1e-6, "distance to steady state {diff}");
}

#[test]
fn common_phase_shift_leaves_full_steady_state_observables() {
    let n_max = 10;
    let base = observables(&oracle_steady(&OracleParams::new(params()), n_max).unwrap());
    for c in [PI / 3.0, 1.0, 2.0 * PI] {
        let shifted = observables(&oracle_steady(&OracleParams::new(params().with_phase_shift(c)), n_max).unwrap());
        assert!((shifted.mean_n - base.mean_n).abs() < 1e-10 * base.mean_n.max(1e-3));
    }
}

#[test]
fn undriven_cavity_decay_from_fock_state() {
    // no coupling: <n> relaxes as n0 exp(-kappa t) regardless of the emitter
    let p = OracleParams::new(SystemParams { g1: 0.0, g2: 0.0, kappa: 0.7, ..params() });
    let config = SolverConfig { rel_tol: 1e-10, abs_tol: 1e-12, ..Default::default() };
    let state = oracle_evolve(&FullState::product(5, 1, 4), &p, 1.5, &config).unwrap();
    let mean = observables(&state).mean_n;
    assert!((mean - 4.0 * (-0.7f64 * 1.5).exp()).abs() < 1e-8, "{mean}");
}
