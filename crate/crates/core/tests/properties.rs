use idealgas_ctp::bare_action::bare_kernels;
use idealgas_ctp::decoherence::d_measures;
use idealgas_ctp::response::{assemble_ctp, lindhard_blocks, spectral_blocks};
use idealgas_ctp::{Complex64, Components, GasSpec, InternalGas, Mode, ResponseBlocks, Statistics};
use proptest::prelude::*;

fn internal(spec: GasSpec) -> InternalGas {
    spec.to_internal(&Default::default()).unwrap()
}

fn fermi_sea() -> InternalGas {
    internal(GasSpec::fermi_sea(2, 1.0).unwrap())
}

prop_compose! {
    fn any_gas()(kind in 0..3u8, t in 0.05..2.0f64, mu in -3.0..1.0f64, ns in 1..4u32) -> InternalGas {
        match kind {
            0 => internal(GasSpec::fermi_sea(ns, (2.0 * mu.abs()).sqrt().max(0.2)).unwrap()),
            1 => internal(GasSpec::new(Statistics::Fermion, ns, t, mu).unwrap()),
            _ => internal(GasSpec::new(Statistics::Boson, ns, t, -mu.abs() - 0.05).unwrap()),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn occupation_is_bounded_and_nonincreasing(gas in any_gas(), k in 0.0..5.0f64, dk in 0.0..1.0f64) {
        let (a, b) = (gas.occupation(k), gas.occupation(k + dk));
        prop_assert!(b <= a);
        prop_assert!(b >= 0.0);
        if gas.statistics() == Statistics::Fermion {
            prop_assert!(a <= 1.0);
        }
    }

    #[test]
    fn transition_factor_is_nonnegative(gas in any_gas(), k in 0.0..5.0f64, kf in 0.0..5.0f64) {
        prop_assert!(gas.transition_factor(k, kf) >= 0.0);
    }

    #[test]
    fn density_is_linear_in_degeneracy(ns in 1..6u32, t in 0.1..2.0f64, mu in -2.0..1.0f64) {
        let one = GasSpec::new(Statistics::Fermion, 1, t, mu).unwrap().density(&Default::default()).unwrap();
        let many = GasSpec::new(Statistics::Fermion, ns, t, mu).unwrap().density(&Default::default()).unwrap();
        prop_assert!((many - ns as f64 * one).abs() <= 1e-14 * many);
    }

    #[test]
    fn spectral_blocks_are_nonnegative(gas in any_gas(), q in 0.05..5.0f64, z in -4.0..4.0f64) {
        let r = spectral_blocks(&gas, Mode::new(q, z).unwrap(), &Default::default()).unwrap();
        for c in [r.r_plus, r.r_minus] {
            prop_assert!(c.tt >= 0.0 && c.l >= 0.0 && c.t >= 0.0);
        }
        let sp = r.r_plus + r.r_minus;
        let sm = r.r_plus - r.r_minus;
        prop_assert!(sp.tt >= sm.tt.abs() && sp.t >= sm.t.abs() && sp.l >= sm.l.abs());
    }

    #[test]
    fn fermi_sea_support_strip(q in 0.05..6.0f64, z in -5.0..5.0f64) {
        let gas = fermi_sea();
        let r = spectral_blocks(&gas, Mode::new(q, z).unwrap(), &Default::default()).unwrap();
        let d = (z - q / 2.0).abs();
        if d > 1.0 + 1e-12 {
            prop_assert_eq!(r.r_plus, Components::default());
        } else if d < 1.0 - 1e-3 && z > 1e-3 {
            prop_assert!(r.r_plus.tt > 0.0);
        }
        // nothing to emit from the ground state
        if z >= 0.0 {
            prop_assert_eq!(r.r_minus, Components::default());
        }
    }

    #[test]
    fn reflection_swaps_branches(gas in any_gas(), q in 0.05..4.0f64, z in 0.01..3.0f64) {
        let mode = Mode::new(q, z).unwrap();
        let opts = Default::default();
        let a = spectral_blocks(&gas, mode, &opts).unwrap();
        let b = spectral_blocks(&gas, mode.reflected(), &opts).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(y.abs()) + 1e-14;
        prop_assert!(close(a.r_plus.tt, b.r_minus.tt) && close(a.r_minus.tt, b.r_plus.tt));
        prop_assert!(close(a.r_plus.t, b.r_minus.t) && close(a.r_plus.l, b.r_minus.l));
        prop_assert!(close(a.r_plus.ts, -b.r_minus.ts));
        let la = lindhard_blocks(&gas, mode, &opts).unwrap().lindhard;
        let lb = lindhard_blocks(&gas, mode.reflected(), &opts).unwrap().lindhard;
        prop_assert!((la.tt - lb.tt).abs() <= 1e-7 * la.tt.abs().max(1e-3));
        prop_assert!((la.t - lb.t).abs() <= 1e-7 * la.t.abs().max(1e-3));
    }

    #[test]
    fn ctp_and_kernel_identities(
        l in prop::array::uniform4(-3.0..3.0f64),
        rp in prop::array::uniform4(0.0..3.0f64),
        rm in prop::array::uniform4(0.0..3.0f64),
        q in 0.1..4.0f64,
        z in 0.0..3.0f64,
    ) {
        let c = |v: [f64; 4]| Components { tt: v[0], ts: v[1], l: v[2], t: v[3] };
        let mode = Mode::new(q, z).unwrap();
        let blocks = ResponseBlocks { mode, lindhard: c(l), r_plus: c(rp), r_minus: c(rm), error_estimate: 0.0, near_edge: false };
        let m = assemble_ctp(&blocks);
        let i = Complex64::i();
        for (block, p, n) in [(m.tt, rp[0], rm[0]), (m.ts, rp[1], rm[1]), (m.l, rp[2], rm[2]), (m.t, rp[3], rm[3])] {
            prop_assert!((block[1][0] + 2.0 * i * p).norm() < 1e-12);
            prop_assert!((block[0][1] + 2.0 * i * n).norm() < 1e-12);
            prop_assert!((block[0][0] + block[1][1] + 2.0 * i * (p + n)).norm() < 1e-12);
        }
        if let Ok(k) = bare_kernels(&blocks, mode) {
            prop_assert!(k.im_tt >= 0.0 && k.im_t >= 0.0);
            // re_tt (1+z²)(L + iS-) = 1
            let unit = k.re_tt * (1.0 + z * z) * Complex64::new(l[0], rp[0] - rm[0]);
            prop_assert!((unit - 1.0).norm() < 1e-9);
        }
        if let Ok(base) = d_measures(&blocks, mode) {
            for lambda in [0.5, 2.0] {
                let s = d_measures(&blocks.scaled(lambda), mode).unwrap();
                prop_assert!((s.dtt * s.dtt - base.dtt * base.dtt / lambda).abs() <= 1e-12 * base.dtt * base.dtt / lambda + 1e-300);
                prop_assert!((s.dt * s.dt - base.dt * base.dt / lambda).abs() <= 1e-12 * base.dt * base.dt / lambda + 1e-300);
            }
        }
    }

    #[test]
    fn spectral_blocks_are_linear_in_degeneracy(ns in 1..5u32, q in 0.1..4.0f64, z in 0.0..3.0f64) {
        // g0 units absorb n_s: the blocks do not depend on it
        let a = spectral_blocks(&internal(GasSpec::fermi_sea(1, 1.0).unwrap()), Mode::new(q, z).unwrap(), &Default::default()).unwrap();
        let b = spectral_blocks(&internal(GasSpec::fermi_sea(ns, 1.0).unwrap()), Mode::new(q, z).unwrap(), &Default::default()).unwrap();
        prop_assert_eq!(a, b);
    }
}
