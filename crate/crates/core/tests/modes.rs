use std::f64::consts::PI;

use alf_core::geometry::{model_laplacian, radius, FramePoint, ModelMetric};
use alf_core::modes::*;
use alf_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn indicial_profiles_are_harmonic_on_the_models() {
    for m in 3..6 {
        let mut models = vec![ModelMetric::trivial(m, 1.5).unwrap()];
        if m == 3 {
            models.push(ModelMetric::hopf(1).unwrap());
            models.push(ModelMetric::monopole(2, 0.5).unwrap());
        }
        for model in &models {
            for j in 0..4 {
                let d = IndicialData::new(j, m).unwrap();
                for nu in [d.nu_plus, d.nu_minus] {
                    let mut base = vec![0.7; m];
                    base[m - 1] = -1.9;
                    base[0] = 2.6;
                    let p = FramePoint::new(base, 0.3).unwrap();
                    let r = p.radius();
                    let u = |x: &[f64], _t: f64| solid_zonal(j, nu, x);
                    let lap = model_laplacian(model, u, &p, 1e-3 * r).unwrap();
                    let scale = (d.lambda_j + nu * nu + 1.0) * r.powf(nu - 2.0);
                    assert!(lap.abs() < 1e-7 * scale, "m={m} j={j} ν={nu}: {lap}");
                }
            }
        }
    }
}

#[test]
fn membership_matches_the_power_criterion() {
    // r^a lies in L²_δ iff δ > m/2 + a
    let grid = RadialGrid::default();
    let mut cases = 0;
    for m in [3, 4] {
        for a in [-3.0, -2.0, -1.0, 0.0, 1.0] {
            let u = RadialProfile::from_fn(grid, Mode::default(), |r| r.powf(a)).unwrap();
            let edge = m as f64 / 2.0 + a;
            for offset in [-0.5, -0.25, 0.25, 0.5] {
                let report = classify_membership(&u, edge + offset, m, 1.0).unwrap();
                let expected = if offset > 0.0 {
                    Membership::Finite
                } else {
                    Membership::PowerDivergent
                };
                assert_eq!(report.class, expected, "m={m} a={a} δ={}", edge + offset);
                cases += 1;
            }
        }
    }
    assert_eq!(cases, 40);
}

fn random_profile(rng: &mut ChaCha8Rng, grid: RadialGrid) -> RadialProfile {
    let terms: Vec<(f64, f64, f64)> = (0..4)
        .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.0..6.0)))
        .collect();
    RadialProfile::from_fn(grid, Mode::default(), |r| {
        let s = r.ln();
        terms.iter().map(|(c, f, ph)| c * (f * s + ph).sin()).sum::<f64>() * r.powf(-0.3)
    })
    .unwrap()
}

#[test]
fn hardy_ratio_never_exceeds_one() {
    let grid = RadialGrid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let m = rng.gen_range(3..6);
        let v = random_profile(&mut rng, grid);
        // δ above m/2, where exterior profiles need no outer cutoff
        let delta = m as f64 / 2.0 + rng.gen_range(0.1..3.0);
        let s0 = grid.s_min + rng.gen_range(0.0..2.0);
        let cutoff = Cutoff::new(s0, s0 + rng.gen_range(0.2..2.0)).unwrap();
        let ratio = hardy_ratio(&v, delta, m, cutoff).unwrap();
        worst = worst.max(ratio);
    }
    assert!(worst <= 1.0 + 1e-6, "{worst}");
}

#[test]
fn hardy_ratio_below_critical_weight_needs_an_outer_cutoff() {
    let grid = RadialGrid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let v = random_profile(&mut rng, grid);
        // compactly supported copy
        let values = v
            .values
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let s = grid.s(i);
                let taper = if s < 6.0 { 1.0 } else if s > 7.0 { 0.0 } else { (PI * (s - 6.0) / 2.0).cos().powi(2) };
                x * taper
            })
            .collect();
        let v = RadialProfile::new(grid, values, Mode::default()).unwrap();
        let cutoff = Cutoff::new(1.0, 1.5).unwrap();
        let ratio = hardy_ratio(&v, 0.2, 3, cutoff).unwrap();
        assert!(ratio <= 1.0 + 1e-6, "{ratio}");
    }
}

#[test]
fn green_operators_are_right_inverses_on_smooth_data() {
    let grid = RadialGrid::default();
    for m in 3..6 {
        for j in 0..4 {
            let f = RadialProfile::from_fn(grid, Mode { j, k: 0 }, |r| {
                (1.0 + 0.5 * (r.ln() * 1.3).sin()) * r.powf(-2.5 - j as f64)
            })
            .unwrap();
            for u in [green_mid(m, j, grid.r(0), &f).unwrap(), green_outer(m, j, &f).unwrap()] {
                let lu = radial_apply(&u, m, j, 0, 1.0).unwrap();
                let err = lu.values.iter().zip(&f.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / f.max_abs();
                assert!(err < 1e-6, "m={m} j={j}: {err}");
            }
        }
    }
}

#[test]
fn k_mode_residual_and_ordering() {
    let grid = RadialGrid::from_radii(2.0, 100.0, 2048).unwrap();
    let l = 2.0 * PI;
    let f = RadialProfile::from_fn(grid, Mode { j: 1, k: 1 }, |r| (-(r - 3.0) * (r - 3.0)).exp()).unwrap();
    let mut prev = f64::INFINITY;
    for k in 1..5 {
        let u = solve_k_mode(3, 1, k, l, &f).unwrap();
        // decay between r = 10 and r = 12
        let i1 = (0..grid.n_points).find(|&i| grid.r(i) >= 10.0).unwrap();
        let i2 = (0..grid.n_points).find(|&i| grid.r(i) >= 12.0).unwrap();
        let rate = (u.values[i2].abs().ln() - u.values[i1].abs().ln()) / (grid.r(i2) - grid.r(i1));
        assert!(rate < prev, "k={k}: {rate}");
        prev = rate;
    }
    assert!(solve_k_mode(3, 1, 0, l, &f).is_err());
}

#[test]
fn ill_conditioned_fit_is_reported() {
    let model = ModelMetric::trivial(3, 1.0).unwrap();
    let opts = DecayOptions {
        max_condition: 1.0,
        ..DecayOptions::default()
    };
    let u = |x: &[f64], _t: f64| 1.0 / radius(x);
    assert!(matches!(
        decay_jump_expand(u, &model, 1.6, 0.4, 1, &opts),
        Err(Error::IllPosedWindow { .. })
    ));
}

#[test]
fn profile_csv_layout() {
    let g = RadialGrid::new(0.0, 1.0, 64).unwrap();
    let p = RadialProfile::from_fn(g, Mode::default(), |r| 2.0 * r).unwrap();
    let csv = p.to_csv();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 65);
    assert_eq!(rows[0], "s,r,value");
    let last: Vec<f64> = rows[64].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 1.0);
    assert!((last[1] - 1f64.exp()).abs() < 1e-15);
    assert!((last[2] - 2.0 * 1f64.exp()).abs() < 1e-14);
}

proptest! {
    #[test]
    fn fiber_projection_is_idempotent(values in prop::collection::vec(-10.0f64..10.0, 12..40), k in 0usize..3) {
        let once = fiber_component(&values, k).unwrap();
        let twice = fiber_component(&once, k).unwrap();
        for (a, b) in once.iter().zip(&twice) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let mean = fiber_component(&values, 0).unwrap();
        let perp = fiber_perp(&values).unwrap();
        for i in 0..values.len() {
            prop_assert!((mean[i] + perp[i] - values[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn criticality_matches_the_set(m in 3usize..7, j in 0usize..5, side in prop::bool::ANY, off in 1e-6f64..0.49) {
        let d = m as f64 / 2.0 + j as f64;
        let c = if side { d } else { 2.0 - d };
        prop_assert!(is_critical(c, m, CRITICAL_TOLERANCE).unwrap());
        // critical values are spaced by at least 1/2
        prop_assert!(!is_critical(c + off, m, CRITICAL_TOLERANCE).unwrap());
        prop_assert!(critical_set(m, 4).unwrap().iter().any(|x| (x - c).abs() < 1e-12));
    }
}
