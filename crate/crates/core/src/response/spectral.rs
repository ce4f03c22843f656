use super::{projections, Branch, Components, Mode, ResponseOptions};
use crate::quadrature::integrate_adaptive;
use crate::{InternalGas, Result};

/// Spectral blocks `R+` and `R-` at one mode (units of `g0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBlocks {
    pub r_plus: Components,
    pub r_minus: Components,
    pub error_estimate: f64,
}

/// `R±` by eliminating the polar angle with the energy delta.
///
/// The delta fixes `u* = (±2ω - Q²) / (2κQ)` with Jacobian `1/(κQ)`; the
/// azimuth is trivial, leaving
///
/// ```text
/// R±/g0 = (π/Q) ∫ dκ κ n_κ (1 + ξ n_κ') F±(κ, u*),   κ'² = κ² ± 2ω,
/// ```
///
/// over `κ >= |±z - Q/2|` (the range where `|u*| <= 1`). Empty support
/// yields exact zeros.
pub fn spectral_blocks(gas: &InternalGas, mode: Mode, opts: &ResponseOptions) -> Result<SpectralBlocks> {
    let (r_plus, e_plus) = branch(gas, mode, Branch::Plus, opts)?;
    let (r_minus, e_minus) = branch(gas, mode, Branch::Minus, opts)?;
    Ok(SpectralBlocks {
        r_plus,
        r_minus,
        error_estimate: e_plus.max(e_minus),
    })
}

fn branch(gas: &InternalGas, mode: Mode, branch: Branch, opts: &ResponseOptions) -> Result<(Components, f64)> {
    let q = mode.q();
    let shift = 2.0 * branch.sign() * mode.omega();
    let kappa_min = (branch.sign() * mode.z() - 0.5 * q).abs();

    let (lower, upper) = if gas.is_fermi_sea() {
        // Occupied initial state, empty final state: κ < 1 < κ'.
        let pauli = libm::sqrt((1.0 - shift).max(0.0));
        (kappa_min.max(pauli), 1.0)
    } else {
        (kappa_min, f64::INFINITY)
    };
    if !(lower < upper) {
        return Ok((Components::default(), 0.0));
    }

    let prefactor = core::f64::consts::PI / q;
    let integrand = |kappa: f64, pick: fn(&Components) -> f64| -> f64 {
        let u = (shift - q * q) / (2.0 * kappa * q);
        if u.abs() > 1.0 {
            return 0.0;
        }
        let weight = if gas.is_fermi_sea() {
            1.0
        } else {
            let final_sq = (kappa * kappa + shift).max(0.0);
            gas.transition_factor(kappa, libm::sqrt(final_sq))
        };
        prefactor * kappa * weight * pick(&projections(kappa, u, q, branch))
    };

    let mut error: f64 = 0.0;
    let mut component = |pick: fn(&Components) -> f64| -> Result<f64> {
        let r = integrate_adaptive(|k| integrand(k, pick), lower, upper, &[], &opts.tol)?;
        error = error.max(r.error_estimate);
        Ok(r.value)
    };
    let value = Components {
        tt: component(|c| c.tt)?,
        ts: component(|c| c.ts)?,
        l: component(|c| c.l)?,
        t: component(|c| c.t)?,
    };
    Ok((value, error))
}
