use super::{Branch, Components, Mode};
use crate::quadrature::{mc_delta_extrapolated_multi, QuadResult, Region};
use crate::{Error, InternalGas, Result};

/// Settings of the Monte-Carlo cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloSettings {
    /// Coarsest smear width of the energy delta, in units of `ω`.
    pub smear: f64,
    /// Number of halvings of `smear` used by the extrapolation.
    pub levels: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for MonteCarloSettings {
    fn default() -> Self {
        Self {
            smear: 0.1,
            levels: 3,
            samples: 24_000_000,
            seed: 0x5EED_0A11,
        }
    }
}

fn norm(p: [f64; 3]) -> f64 {
    libm::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])
}

/// Radius beyond which `κ² n_κ` is negligible.
fn occupied_extent(gas: &InternalGas) -> f64 {
    if gas.is_fermi_sea() {
        return 1.0;
    }
    let weight = |k: f64| k * k * gas.occupation(k);
    let peak = (1..400).map(|i| weight(0.05 * i as f64)).fold(0.0, f64::max);
    let mut k = 1.0;
    while weight(k) > 1e-13 * peak && k < 1e3 {
        k += 0.1;
    }
    k
}

/// Brute-force `R±` at `mode` from the three-dimensional integral
///
/// ```text
/// R±/g0 = ½ ∫ d³k δ(±ω - k·q - Q²/2) n_k (1 + ξ n_{k+q}) F±(k)
/// ```
///
/// with a Gaussian-smeared delta, extrapolated to zero smear. Only
/// meaningful where `R±` is smooth in `ω` over a few smear widths.
pub fn spectral_monte_carlo(
    gas: &InternalGas,
    mode: Mode,
    branch: Branch,
    settings: &MonteCarloSettings,
) -> Result<Components<QuadResult>> {
    let q = mode.q();
    let sign = branch.sign();
    let target = sign * mode.omega();
    let xi = gas.statistics().xi();
    let extent = occupied_extent(gas);

    // q along the z axis; F in terms of the midpoint k + q/2.
    let f = |k: [f64; 3]| {
        let w = 0.5 * gas.occupation(norm(k)) * (1.0 + xi * gas.occupation(norm([k[0], k[1], k[2] + q])));
        let along = k[2] + 0.5 * q;
        [
            w,
            -sign * w * along / q,
            w * along * along,
            0.5 * w * (k[0] * k[0] + k[1] * k[1]),
        ]
    };
    let constraint = |k: [f64; 3]| target - q * k[2] - 0.5 * q * q;

    let shell = (target - 0.5 * q * q) / q;
    if shell.abs() > extent + 7.0 * settings.smear / q {
        return Ok(Components::default().map(|_: f64| QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        }));
    }
    let half = (7.0 * settings.smear / q).min(extent);
    let region = Region::Box {
        center: [0.0, 0.0, shell],
        half_widths: [extent, extent, half],
    };
    if settings.levels < 2 {
        return Err(Error::InvalidArgument {
            name: "levels",
            reason: "extrapolation needs at least two smears",
        });
    }
    let [tt, ts, l, t] = mc_delta_extrapolated_multi(
        f,
        constraint,
        region,
        settings.smear,
        settings.levels,
        settings.samples,
        settings.seed,
    )?;
    Ok(Components { tt, ts, l, t })
}
