//! The reduced five-sequence generator against a direct transcription of
//! the projected equations, with constants rebuilt from the raw rates.

use ladder_cavity::dressed::{DressedState, Generator};
use ladder_cavity::model::{derive_dressed, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Constants {
    g: f64,
    kappa: f64,
    alpha: f64,
    beta: f64,
    zeta: f64,
    pump: f64,
}

fn constants(p: &SystemParams) -> Constants {
    let theta = (p.omega2 / p.omega1).atan();
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    let re = (p.g2 * p.phi2.cos() * theta.sin() - p.g1 * p.phi1.cos() * theta.cos()) / 2.0;
    let im = (-p.g2 * p.phi2.sin() * theta.sin() + p.g1 * p.phi1.sin() * theta.cos()) / 2.0;
    Constants {
        g: re.hypot(im),
        kappa: p.kappa,
        alpha: p.gamma1 * s2 + 2.0 * p.gamma2 * c2,
        beta: p.gamma1 + p.gamma2 * s2,
        zeta: (p.gamma1 * (2.0 + c2) + 3.0 * p.gamma2 * s2) / 4.0,
        pump: p.gamma2 * c2,
    }
}

/// Right-hand side written out line by line; sequences read as zero
/// outside `0..=n_max`.
fn reference_derivative(c: &Constants, s: &DressedState) -> [Vec<f64>; 5] {
    let n_max = s.n_max;
    let at = |v: &Vec<f64>, n: isize| if n < 0 || n as usize > n_max { 0.0 } else { v[n as usize] };
    let (p0, p1, p2, p3, p4) = (&s.p0, &s.p1, &s.p2, &s.p3, &s.p4);
    let (g, k) = (c.g, c.kappa);
    let mut d: [Vec<f64>; 5] = Default::default();
    for n in 0..=n_max as isize {
        let nf = n as f64;
        d[0].push(-2.0 * g * (at(p4, n) - at(p3, n)) + k * (nf + 1.0) * at(p0, n + 1) - k * nf * at(p0, n));
        d[1].push(
            -2.0 * g * (at(p4, n) - at(p3, n)) + k * (nf + 1.0) * at(p1, n + 1) - (k * nf + c.alpha / 2.0) * at(p1, n)
                + c.pump * at(p0, n),
        );
        d[2].push(
            -2.0 * g * (at(p4, n) + at(p3, n)) + k * (nf + 1.0) * at(p2, n + 1) - (k * nf + c.beta / 2.0) * at(p2, n),
        );
        d[3].push(
            g * nf * (at(p1, n - 1) - at(p1, n) + at(p2, n - 1) + at(p2, n)) / 2.0 - k * at(p4, n)
                + k * (nf + 1.0) * at(p3, n + 1)
                - (k * (nf - 0.5) + c.zeta) * at(p3, n),
        );
        // a^dag kills the top retained state, so P4 stays zero there
        let top = n as usize == n_max;
        d[4].push(if top {
            0.0
        } else {
            g * (nf + 1.0) * (at(p2, n + 1) + at(p2, n) - at(p1, n + 1) + at(p1, n)) / 2.0
                + k * (nf + 1.0) * at(p4, n + 1)
                - (k * (nf + 0.5) + c.zeta) * at(p4, n)
        });
    }
    d
}

fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    SystemParams {
        g1: rng.random_range(0.0..8.0),
        g2: rng.random_range(0.0..8.0),
        gamma1: rng.random_range(0.2..3.0),
        gamma2: rng.random_range(0.0..3.0),
        kappa: rng.random_range(0.01..2.0),
        omega1: rng.random_range(1.0..200.0),
        omega2: rng.random_range(0.0..200.0),
        phi1: rng.random_range(-7.0..7.0),
        phi2: rng.random_range(-7.0..7.0),
    }
}

/// Arbitrary sequences obeying `P3_0 = 0`, `P4_n = P3_{n+1}`, `P4_{n_max} = 0`.
fn consistent_state(rng: &mut ChaCha8Rng, n_max: usize) -> DressedState {
    let mut s = DressedState::vacuum(n_max);
    for n in 0..=n_max {
        s.p0[n] = rng.random_range(0.0..1.0);
        s.p1[n] = rng.random_range(0.0..1.0) * s.p0[n];
        s.p2[n] = rng.random_range(-1.0..1.0) * s.p1[n];
        s.p3[n] = if n == 0 { 0.0 } else { rng.random_range(-0.3..0.3) };
    }
    for n in 0..n_max {
        s.p4[n] = s.p3[n + 1];
    }
    s.p4[n_max] = 0.0;
    let trace = s.trace();
    for v in [&mut s.p0, &mut s.p1, &mut s.p2, &mut s.p3, &mut s.p4] {
        v.iter_mut().for_each(|x| *x /= trace);
    }
    s
}

#[test]
fn generator_matches_transcribed_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..40 {
        let params = random_params(&mut rng);
        let n_max = rng.random_range(1..30);
        let state = consistent_state(&mut rng, n_max);
        let dressed = derive_dressed(&params).unwrap();
        let got = Generator::new(&dressed, params.kappa, n_max).derivative(&state);
        let want = reference_derivative(&constants(&params), &state);
        for (k, (g, w)) in [&got.p0, &got.p1, &got.p2, &got.p3, &got.p4].into_iter().zip(&want).enumerate() {
            for n in 0..=n_max {
                let scale = 1.0 + w[n].abs();
                assert!(
                    (g[n] - w[n]).abs() <= 1e-12 * scale * (1.0 + n as f64),
                    "trial {trial}, P{k}_{n}: {} vs {}",
                    g[n],
                    w[n]
                );
            }
        }
    }
}

#[test]
fn derivative_conserves_trace_and_redundancy() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..40 {
        let params = random_params(&mut rng);
        let n_max = rng.random_range(1..40);
        let state = consistent_state(&mut rng, n_max);
        let d = Generator::new(&derive_dressed(&params).unwrap(), params.kappa, n_max).derivative(&state);
        let scale =
            state.p0.iter().map(|x| x.abs()).sum::<f64>() * (params.g1 + params.g2 + params.kappa * n_max as f64 + 1.0);
        assert!(d.p0.iter().sum::<f64>().abs() < 1e-13 * scale);
        assert!(d.p3[0].abs() < 1e-13 * scale);
        assert_eq!(d.p4[n_max], 0.0);
        for n in 0..n_max {
            assert!((d.p4[n] - d.p3[n + 1]).abs() < 1e-13 * scale, "n = {n}");
        }
    }
}

#[test]
fn generator_ignores_laser_phases_beyond_g() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = random_params(&mut rng);
    let state = consistent_state(&mut rng, 12);
    let base = Generator::new(&derive_dressed(&params).unwrap(), params.kappa, 12).derivative(&state);
    let shifted = params.with_phase_shift(1.234);
    let d = Generator::new(&derive_dressed(&shifted).unwrap(), params.kappa, 12).derivative(&state);
    for (a, b) in base.to_vector().iter().zip(d.to_vector()) {
        assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
    }
}
