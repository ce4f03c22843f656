//! Hydrodynamic limit, linearised equations of motion and static flow.
//!
//! The response of the current to the auxiliary source is `χ = L + iS-`
//! per channel (units of `g0`), so that
//!
//! ```text
//! n   - n_gr = g0 χ^tt ā⁰
//! j^T        = gT χ^T  ā^T
//! ```
//!
//! and `j^L` follows from continuity, `ω n = k j^L`. For small `(Q, z)` the
//! inverse response `-1/χ` approaches
//!
//! ```text
//! a0 + i a_z z + a_kk Q²     (density)
//! b0 + i b_z z + b_kk Q²     (transverse)
//! ```

mod flow;

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::decoherence::linspace;
use crate::response::{response_blocks, source_response, Mode, ResponseOptions};
use crate::{Error, InternalGas, Result};

pub use flow::{flow_width, static_flow, FlowMode, FlowProfile, FlowSettings, FlowWidth};

/// Settings of the small-`(Q, z)` fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydroFitSettings {
    pub q_max: f64,
    pub z_max: f64,
    pub q_nodes: usize,
    pub z_nodes: usize,
    /// Largest accepted relative RMS residual.
    pub residual_threshold: f64,
    pub response: ResponseOptions,
}

impl Default for HydroFitSettings {
    fn default() -> Self {
        Self {
            q_max: 0.2,
            z_max: 0.1,
            q_nodes: 10,
            z_nodes: 10,
            residual_threshold: 1e-5,
            response: ResponseOptions::default(),
        }
    }
}

/// Coefficients of one channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChannelFit {
    pub constant: f64,
    /// Coefficient of `i z`.
    pub damping: f64,
    /// Coefficient of `Q²`.
    pub gradient: f64,
    /// Relative RMS residual of the full fit.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydroCoefficients {
    pub a0: f64,
    pub az: f64,
    pub akk: f64,
    pub b0: f64,
    pub bz: f64,
    pub bkk: f64,
    /// `b_z` for a transverse damping term written with a prefactor
    /// `m/(ħ k_gas²)` instead of `m/(ħ k_gas)`: `b_z k_gas`.
    pub bz_alt_normalization: f64,
    /// `n_s m k_gas / 4π²` in the caller's units (`ħ = 1`).
    pub g0: f64,
    /// `g0 ħ² k_gas² / m²`.
    pub gt: f64,
    pub fit_window: (f64, f64),
    pub fit_residual: f64,
    /// Largest relative change of the six coefficients when the window is
    /// halved.
    pub window_drift: f64,
}

/// Real part: `1, Q², z², Q⁴, Q²z², z⁴`; imaginary part: `z, z³, zQ²`.
/// Only the leading terms are reported; the rest absorb curvature.
fn fit_channel(points: &[(f64, f64, Complex64)]) -> Result<ChannelFit> {
    let rows = points.len();
    let re_basis = |q: f64, z: f64| {
        let (q2, z2) = (q * q, z * z);
        [1.0, q2, z2, q2 * q2, q2 * z2, z2 * z2]
    };
    let im_basis = |q: f64, z: f64| [z, z * z * z, z * q * q];

    let a_re = DMatrix::from_fn(rows, 6, |i, j| re_basis(points[i].0, points[i].1)[j]);
    let b_re = DVector::from_fn(rows, |i, _| points[i].2.re);
    let a_im = DMatrix::from_fn(rows, 3, |i, j| im_basis(points[i].0, points[i].1)[j]);
    let b_im = DVector::from_fn(rows, |i, _| points[i].2.im);

    let solve = |a: &DMatrix<f64>, b: &DVector<f64>| {
        a.clone()
            .svd(true, true)
            .solve(b, 1e-14)
            .map_err(|_| Error::SingularInput("hydro fit matrix"))
    };
    let x_re = solve(&a_re, &b_re)?;
    let x_im = solve(&a_im, &b_im)?;

    let r_re = &a_re * &x_re - &b_re;
    let r_im = &a_im * &x_im - &b_im;
    let scale = libm::sqrt((b_re.norm_squared() + b_im.norm_squared()) / rows as f64);
    let rms = libm::sqrt((r_re.norm_squared() + r_im.norm_squared()) / rows as f64);
    Ok(ChannelFit {
        constant: x_re[0],
        damping: x_im[0],
        gradient: x_re[1],
        residual: if scale > 0.0 { rms / scale } else { rms },
    })
}

/// Fits both channels of `-1/χ` on `[q_max/q_nodes, q_max] × [0, z_max]`.
pub fn fit_window(gas: &InternalGas, settings: &HydroFitSettings) -> Result<(ChannelFit, ChannelFit)> {
    if !(settings.q_max > 0.0 && settings.z_max > 0.0) || settings.q_nodes < 3 || settings.z_nodes < 3 {
        return Err(Error::InvalidArgument {
            name: "window",
            reason: "need positive extents and at least 3 nodes per axis",
        });
    }
    let qs = linspace(
        settings.q_max / settings.q_nodes as f64,
        settings.q_max,
        settings.q_nodes,
    );
    let zs = linspace(0.0, settings.z_max, settings.z_nodes);
    let mut density = Vec::with_capacity(qs.len() * zs.len());
    let mut transverse = Vec::with_capacity(qs.len() * zs.len());
    for &q in &qs {
        for &z in &zs {
            let blocks = response_blocks(gas, Mode::new(q, z)?, &settings.response)?;
            let chi = source_response(&blocks);
            density.push((q, z, -chi.tt.inv()));
            transverse.push((q, z, -chi.t.inv()));
        }
    }
    Ok((fit_channel(&density)?, fit_channel(&transverse)?))
}

/// Hydrodynamic coefficients with their window-halving drift.
///
/// Returns [`Error::UnstableFit`] when either channel's residual exceeds
/// `settings.residual_threshold`.
pub fn fit_hydro_coefficients(gas: &InternalGas, settings: &HydroFitSettings) -> Result<HydroCoefficients> {
    let (tt, t) = fit_window(gas, settings)?;
    let residual = tt.residual.max(t.residual);
    if residual > settings.residual_threshold {
        return Err(Error::UnstableFit {
            residual,
            threshold: settings.residual_threshold,
        });
    }
    let half = HydroFitSettings {
        q_max: 0.5 * settings.q_max,
        z_max: 0.5 * settings.z_max,
        ..*settings
    };
    let (tt_half, t_half) = fit_window(gas, &half)?;
    let full = [tt.constant, tt.damping, tt.gradient, t.constant, t.damping, t.gradient];
    let halved = [
        tt_half.constant,
        tt_half.damping,
        tt_half.gradient,
        t_half.constant,
        t_half.damping,
        t_half.gradient,
    ];
    let window_drift = full
        .iter()
        .zip(&halved)
        .map(|(a, b)| (a - b).abs() / a.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);

    let k_gas = gas.k_gas();
    let g0 = gas.spec().spin_degeneracy() as f64 * k_gas / (4.0 * PI * PI);
    Ok(HydroCoefficients {
        a0: tt.constant,
        az: tt.damping,
        akk: tt.gradient,
        b0: t.constant,
        bz: t.damping,
        bkk: t.gradient,
        bz_alt_normalization: t.damping * k_gas,
        g0,
        gt: g0 * k_gas * k_gas,
        fit_window: (settings.q_max, settings.z_max),
        fit_residual: residual,
        window_drift,
    })
}

/// Zero-temperature fermion values of the six constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceConstants {
    pub a0: f64,
    pub az: f64,
    pub akk: f64,
    pub b0: f64,
    pub bz: f64,
    pub bkk: f64,
}

pub const FERMI_SEA_REFERENCE: ReferenceConstants = ReferenceConstants {
    a0: 0.5,
    az: PI / 4.0,
    akk: 1.0 / 24.0,
    b0: 1.5,
    bz: 9.0 * PI / 4.0,
    bkk: 39.0 / 128.0,
};

/// Relative deviation of each fitted constant from the reference values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceComparison {
    pub a0: f64,
    pub az: f64,
    pub akk: f64,
    pub b0: f64,
    pub bz: f64,
    pub bkk: f64,
}

/// Compares with [`FERMI_SEA_REFERENCE`], which only exists for a
/// zero-temperature Fermi gas.
pub fn compare_with_reference(gas: &InternalGas, c: &HydroCoefficients) -> Result<ReferenceComparison> {
    if !gas.is_fermi_sea() {
        return Err(Error::UnsupportedReference);
    }
    let r = FERMI_SEA_REFERENCE;
    let rel = |x: f64, y: f64| (x - y) / y;
    Ok(ReferenceComparison {
        a0: rel(c.a0, r.a0),
        az: rel(c.az, r.az),
        akk: rel(c.akk, r.akk),
        b0: rel(c.b0, r.b0),
        bz: rel(c.bz, r.bz),
        bkk: rel(c.bkk, r.bkk),
    })
}

/// Source amplitudes `ā⁰`, `ā^T` at one Fourier mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceMode {
    pub mode: Mode,
    pub density: Complex64,
    pub transverse: Complex64,
}

/// How the equation of motion is closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EomModel {
    /// Full response `χ = L + iS-`.
    Exact(ResponseOptions),
    /// Polynomial inverse response from fitted coefficients.
    Hydro(HydroCoefficients),
}

/// Current response at one mode (internal units; deviations from the
/// ground state `J_gr = (n0, 0)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomSolution {
    pub mode: Mode,
    pub density: Complex64,
    pub longitudinal: Complex64,
    pub transverse: Complex64,
    pub ground_density: f64,
    /// Hydro model evaluated outside its fit window.
    pub extrapolated: bool,
}

pub fn eom_solve(gas: &InternalGas, model: &EomModel, sources: &[SourceMode]) -> Result<Vec<EomSolution>> {
    let g0 = gas.g0();
    let ground_density = gas.spec().spin_degeneracy() as f64 / (6.0 * PI * PI);
    let mut out = Vec::with_capacity(sources.len());
    for s in sources {
        let (q, z) = (s.mode.q(), s.mode.z());
        let (chi_tt, chi_t, extrapolated) = match model {
            EomModel::Exact(opts) => {
                if s.density == Complex64::new(0.0, 0.0) && s.transverse == Complex64::new(0.0, 0.0) {
                    (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), false)
                } else {
                    let chi = source_response(&response_blocks(gas, s.mode, opts)?);
                    (chi.tt, chi.t, false)
                }
            }
            EomModel::Hydro(c) => {
                let f_tt = Complex64::new(c.a0 + c.akk * q * q, c.az * z);
                let f_t = Complex64::new(c.b0 + c.bkk * q * q, c.bz * z);
                let outside = q > c.fit_window.0 || z.abs() > c.fit_window.1;
                (-f_tt.inv(), -f_t.inv(), outside)
            }
        };
        let density = chi_tt * s.density * g0;
        out.push(EomSolution {
            mode: s.mode,
            density,
            // ω n = k j^L
            longitudinal: density * z,
            transverse: chi_t * s.transverse * g0,
            ground_density,
            extrapolated,
        });
    }
    Ok(out)
}
