//! Reduced integrals against independent closed forms and brute-force sums.

use std::f64::consts::PI;

use idealgas_ctp::quadrature::{integrate_pv, Tolerance};
use idealgas_ctp::response::{lindhard_blocks, response_blocks, retarded, spectral_blocks, static_closed_forms};
use idealgas_ctp::{GasSpec, InternalGas, Mode, ResponseOptions, Statistics};

fn fermi_sea() -> InternalGas {
    GasSpec::fermi_sea(2, 1.0)
        .unwrap()
        .to_internal(&Default::default())
        .unwrap()
}

#[test]
fn static_lindhard_matches_closed_form() {
    let gas = fermi_sea();
    for q in [0.1, 0.5, 1.0, 1.5, 3.0] {
        let l = lindhard_blocks(&gas, Mode::new(q, 0.0).unwrap(), &Default::default()).unwrap();
        let (bracket, _) = static_closed_forms(q).unwrap();
        assert!((l.lindhard.tt - bracket).abs() < 1e-6 * bracket.abs(), "Q={q}");
    }
}

/// Textbook zero-temperature Lindhard function in units of `g0`, with
/// `ν± = z ± Q/2`.
fn lindhard_tt(q: f64, z: f64) -> (f64, f64) {
    let log = |nu: f64| (1.0 - nu * nu) * ((nu + 1.0) / (nu - 1.0)).abs().ln();
    let (nm, np) = (z - 0.5 * q, z + 0.5 * q);
    let re = -1.0 + (log(nm) - log(np)) / (2.0 * q);
    let im = if z < 1.0 - 0.5 * q {
        PI * z
    } else if nm.abs() < 1.0 {
        PI / (2.0 * q) * (1.0 - nm * nm)
    } else {
        0.0
    };
    (re, im)
}

#[test]
fn dynamic_lindhard_matches_textbook_form() {
    let gas = fermi_sea();
    for (q, z) in [
        (0.5, 0.3),
        (0.5, 1.0),
        (1.0, 0.2),
        (1.0, 1.2),
        (2.0, 1.0),
        (3.0, 0.4),
        (0.8, 2.5),
    ] {
        let b = response_blocks(&gas, Mode::new(q, z).unwrap(), &Default::default()).unwrap();
        let (re, im) = lindhard_tt(q, z);
        assert!(
            (b.lindhard.tt - re).abs() < 1e-8 * re.abs().max(1e-3),
            "({q},{z}): {} vs {re}",
            b.lindhard.tt
        );
        let sm = b.s_minus().tt;
        assert!((sm - im).abs() < 1e-10 * im.abs().max(1.0), "({q},{z}): {sm} vs {im}");
    }
}

#[test]
fn kramers_kronig() {
    let gas = fermi_sea();
    let opts = ResponseOptions::default();
    let tol = Tolerance {
        rel: 1e-7,
        abs: 1e-10,
        ..Default::default()
    };
    for q in [0.5, 1.0, 2.0] {
        let im = |z: f64| spectral_blocks(&gas, Mode::new(q, z).unwrap(), &opts).unwrap();
        let top = 1.0 + 0.5 * q;
        let mut kinks = vec![(1.0 - 0.5 * q).abs()];
        kinks.retain(|k| *k > 0.0 && *k < top);
        for z in [0.3, 0.9, 1.7] {
            let g = |x: f64| {
                let s = im(x);
                (s.r_plus.tt - s.r_minus.tt) * 2.0 * x / (x + z)
            };
            let hilbert = integrate_pv(g, 0.0, top, z, &kinks, &tol).unwrap().value / PI;
            let direct = retarded(&response_blocks(&gas, Mode::new(q, z).unwrap(), &opts).unwrap())
                .tt
                .re;
            assert!(
                (hilbert - direct).abs() < 1e-2 * direct.abs(),
                "Q={q} z={z}: {hilbert} vs {direct}"
            );
        }
    }
}

#[test]
fn boson_density_against_riemann_sum() {
    let spec = GasSpec::new(Statistics::Boson, 1, 1.0, -5.0).unwrap();
    let n = spec.density(&Default::default()).unwrap();
    let h = 1e-4;
    let sum: f64 = (0..400_000)
        .map(|i| {
            let k = (i as f64 + 0.5) * h;
            k * k / ((0.5 * k * k + 5.0).exp() - 1.0) * h
        })
        .sum();
    let brute = sum / (2.0 * PI * PI);
    assert!((n - brute).abs() < 1e-8 * brute, "{n} vs {brute}");
}

#[test]
fn fermi_sea_density() {
    let two = GasSpec::fermi_sea(2, 1.0)
        .unwrap()
        .density(&Default::default())
        .unwrap();
    let one = GasSpec::fermi_sea(1, 1.0)
        .unwrap()
        .density(&Default::default())
        .unwrap();
    assert!((two - 1.0 / (3.0 * PI * PI)).abs() < 1e-14);
    assert!((two - 2.0 * one).abs() < 1e-16);
}

#[test]
fn on_shell_identities_of_spectral_blocks() {
    // the delta puts (k + q/2)·q̂ at ±ω/Q for R±
    for gas in [
        fermi_sea(),
        GasSpec::new(Statistics::Boson, 1, 1.0, -0.5)
            .unwrap()
            .to_internal(&Default::default())
            .unwrap(),
    ] {
        for (q, z) in [(1.0, 0.7), (2.0, 1.0), (0.4, 0.1)] {
            let r = spectral_blocks(&gas, Mode::new(q, z).unwrap(), &Default::default()).unwrap();
            for rr in [r.r_plus, r.r_minus] {
                assert!((rr.ts + z / q * rr.tt).abs() < 1e-9 * rr.tt.abs().max(1e-300));
                assert!((rr.l - z * z * rr.tt).abs() < 1e-9 * rr.tt.abs().max(1e-300));
            }
        }
    }
}
