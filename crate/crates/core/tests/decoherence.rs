use idealgas_ctp::bare_action::mode_moments;
use idealgas_ctp::decoherence::{d_grid, d_measures, measures_at, ridge_profile, GridWindow, MeasureOptions};
use idealgas_ctp::response::response_blocks;
use idealgas_ctp::{GasSpec, InternalGas, Mode, Statistics};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fermi_sea() -> InternalGas {
    GasSpec::fermi_sea(2, 1.0)
        .unwrap()
        .to_internal(&Default::default())
        .unwrap()
}

fn random_strip_mode(rng: &mut ChaCha8Rng) -> Mode {
    // interior of |z - Q/2| <= 1, z > 0, away from the edges
    loop {
        let q = rng.random_range(0.1..6.0);
        let z = q / 2.0 + rng.random_range(-0.95..0.95);
        if z > 0.05 {
            return Mode::new(q, z).unwrap();
        }
    }
}

#[test]
fn off_strip_modes_vanish_exactly() {
    let gas = fermi_sea();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = MeasureOptions::default();
    for _ in 0..100 {
        let q = rng.random_range(0.05..6.0);
        let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let z = q / 2.0 + side * (1.0 + rng.random_range(1e-3..3.0));
        if z <= 0.0 {
            continue;
        }
        let m = measures_at(&gas, Mode::new(q, z).unwrap(), &opts).unwrap();
        assert_eq!((m.dtt, m.dt), (0.0, 0.0), "Q={q} z={z}");
    }
}

#[test]
fn interior_strip_modes_are_positive() {
    let gas = fermi_sea();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let mode = random_strip_mode(&mut rng);
        let m = measures_at(&gas, mode, &MeasureOptions::default()).unwrap();
        assert!(m.dtt > 0.0 && m.dt > 0.0, "{mode:?}: {m:?}");
    }
}

#[test]
fn moments_reproduce_measures() {
    let gas = fermi_sea();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let mode = random_strip_mode(&mut rng);
        let blocks = response_blocks(&gas, mode, &Default::default()).unwrap();
        let direct = d_measures(&blocks, mode).unwrap();
        let moments = mode_moments(&blocks, mode);
        let dtt = moments.density_ratio().sqrt();
        let dt = moments.transverse_ratio().sqrt();
        assert!((direct.dtt - dtt).abs() <= 1e-12 * dtt, "{mode:?}");
        assert!((direct.dt - dt).abs() <= 1e-12 * dt, "{mode:?}");
    }
}

#[test]
fn ridge_peaks_near_q_two() {
    let profile = ridge_profile(&fermi_sea(), (0.025, 6.0), 240, &MeasureOptions::default()).unwrap();
    assert!(profile.defects.is_empty());
    assert!((1.5..=2.5).contains(&profile.argmax_q_tt), "{}", profile.argmax_q_tt);
    let upper: Vec<f64> = profile
        .q_axis
        .iter()
        .zip(&profile.dt)
        .filter(|(q, _)| **q >= 2.0 - 1e-12)
        .map(|(_, d)| *d)
        .collect();
    assert!(upper.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn ridge_matches_grid_and_refinement() {
    let gas = fermi_sea();
    let opts = MeasureOptions::default();
    let window = GridWindow {
        q_range: (0.5, 3.0),
        z_range: (0.0, 2.0),
        q_nodes: 6,
        z_nodes: 9,
    };
    let coarse = d_grid(&gas, &window, &opts).unwrap();
    let fine = d_grid(
        &gas,
        &GridWindow {
            q_nodes: 11,
            z_nodes: 17,
            ..window
        },
        &opts,
    )
    .unwrap();
    for i in 0..6 {
        for j in 0..9 {
            let a = coarse.at(i, j);
            let b = fine.at(2 * i, 2 * j);
            assert!((a.dtt - b.dtt).abs() <= 1e-10 * a.dtt.abs().max(1.0));
            assert!((a.dt - b.dt).abs() <= 1e-10 * a.dt.abs().max(1.0));
            let z = coarse.z_axis[j];
            let q = coarse.q_axis[i];
            if (z - q / 2.0).abs() > 1.0 {
                assert_eq!((a.dtt, a.dt), (0.0, 0.0));
            }
        }
    }
    // (Q, z) = (1, 0.5) and (2, 1) are shared by the ridge and the grid
    let ridge = ridge_profile(&gas, (0.5, 3.0), 6, &opts).unwrap();
    for (i, j) in [(1, 2), (3, 4)] {
        let g = coarse.at(i, j);
        assert!((ridge.dtt[i] - g.dtt).abs() < 1e-12 * g.dtt);
        assert!((ridge.dt[i] - g.dt).abs() < 1e-12 * g.dt);
    }
}

#[test]
fn finite_temperature_gas_has_tails() {
    let gas = GasSpec::new(Statistics::Fermion, 2, 0.2, 0.45)
        .unwrap()
        .to_internal(&Default::default())
        .unwrap();
    let opts = MeasureOptions::default();
    let inside = measures_at(&gas, Mode::new(2.0, 1.0).unwrap(), &opts).unwrap();
    assert!(inside.dtt > 0.0);
    let far = measures_at(&gas, Mode::new(0.5, 8.0).unwrap(), &opts).unwrap();
    assert_eq!((far.dtt, far.dt), (0.0, 0.0));
}
