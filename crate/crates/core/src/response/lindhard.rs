use alloc::vec::Vec;

use super::{log_ratio, Branch, Components, Mode, ResponseOptions};
use crate::quadrature::integrate_adaptive;
use crate::{InternalGas, Result};

/// Principal-value blocks `L` at one mode (units of `g0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindhardBlocks {
    pub lindhard: Components,
    pub error_estimate: f64,
    pub near_edge: bool,
}

/// `PV ∫_{-1}^{1} (c0 + c1 u + c2 u²) / (u - a) du`.
///
/// Writing `P(u) = P(a) + (u - a)(c1 + c2 (u + a))` leaves the pole term
/// `P(a) ln|(1-a)/(1+a)|` plus an elementary polynomial integral.
fn angular_pv(c0: f64, c1: f64, c2: f64, a: f64) -> f64 {
    let p = c0 + a * (c1 + a * c2);
    p * log_ratio(a) + 2.0 * (c1 + c2 * a)
}

/// Polynomial coefficients in `u` of the `F±` projections at radius `κ`.
fn projection_coefficients(kappa: f64, q: f64, branch: Branch) -> Components<[f64; 3]> {
    let s = branch.sign();
    let k2 = kappa * kappa;
    Components {
        tt: [1.0, 0.0, 0.0],
        ts: [-0.5 * s, -s * kappa / q, 0.0],
        l: [0.25 * q * q, kappa * q, k2],
        t: [0.5 * k2, 0.0, -0.5 * k2],
    }
}

/// Angular integral of both pole terms at radius `κ`, per component.
fn angular_kernel(kappa: f64, q: f64, z: f64) -> Components {
    // ω - Q²/2 - κQu = -κQ (u - a+),  ω + Q²/2 + κQu = κQ (u - a-)
    let a_plus = (z - 0.5 * q) / kappa;
    let a_minus = -(z + 0.5 * q) / kappa;
    let plus = projection_coefficients(kappa, q, Branch::Plus);
    let minus = projection_coefficients(kappa, q, Branch::Minus);
    plus.zip(minus, |p, m| {
        angular_pv(p[0], p[1], p[2], a_plus) + angular_pv(m[0], m[1], m[2], a_minus)
    })
}

/// `L^{μν}` with the angular principal value done analytically.
///
/// ```text
/// L/g0 = -(1/Q) ∫ dκ κ n_κ [A+(κ) + A-(κ)]
/// ```
///
/// where `A±` are the log kernels from [`angular_pv`]. The radial integrand
/// has integrable log singularities at `κ = |z - Q/2|` and `κ = |z + Q/2|`;
/// both are declared as split points, as is the Fermi edge.
pub fn lindhard_blocks(gas: &InternalGas, mode: Mode, opts: &ResponseOptions) -> Result<LindhardBlocks> {
    let q = mode.q();
    let z = mode.z();
    let mut splits: Vec<f64> = Vec::with_capacity(3);
    splits.push((z - 0.5 * q).abs());
    splits.push((z + 0.5 * q).abs());
    if let Some(kf) = gas.spec().fermi_wave_vector() {
        splits.push(kf);
    }
    let upper = gas.radial_cutoff();

    let integrand = |kappa: f64, pick: fn(&Components) -> f64| -> f64 {
        let n = gas.occupation(kappa);
        if n == 0.0 || kappa == 0.0 {
            return 0.0;
        }
        -kappa * n * pick(&angular_kernel(kappa, q, z)) / q
    };

    let mut error: f64 = 0.0;
    let mut component = |pick: fn(&Components) -> f64| -> Result<f64> {
        let r = integrate_adaptive(|k| integrand(k, pick), 0.0, upper, &splits, &opts.tol)?;
        error = error.max(r.error_estimate);
        Ok(r.value)
    };
    let lindhard = Components {
        tt: component(|c| c.tt)?,
        ts: component(|c| c.ts)?,
        l: component(|c| c.l)?,
        t: component(|c| c.t)?,
    };
    let near_edge = gas.is_fermi_sea() && mode.continuum_edge_distance() < opts.edge_band;
    Ok(LindhardBlocks {
        lindhard,
        error_estimate: error,
        near_edge,
    })
}
