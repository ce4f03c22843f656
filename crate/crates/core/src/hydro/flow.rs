//! Static response to a Gaussian source `ā(x) = u (2πℓ²)^{-3/2} e^{-x²/2ℓ²}`
//! depending on one coordinate `x`, for the density (`ā⁰`) and a
//! transverse current source (`ā^T` perpendicular to `x`).

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::response::{density_static_bracket, transverse_static_bracket};
use crate::{Error, InternalGas, Result};

/// Static kernel used in momentum space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMode {
    /// Full static brackets.
    Exact,
    /// `-2 e^{-Q²/6}` (density) and `-(2/3) e^{-Q²/3}` (transverse).
    GaussianApprox,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSettings {
    /// Source width in units of `1/k_F`.
    pub ell_ext: f64,
    pub u_density: f64,
    pub u_transverse: f64,
    pub mode: FlowMode,
    /// Grid nodes per `ell_ext`; at least 8.
    pub nodes_per_length: f64,
    /// Ratio of the transform period to the reported window; at least 4.
    pub padding: usize,
}

impl Default for FlowSettings {
    fn default() -> Self {
        Self {
            ell_ext: 1.0,
            u_density: 1.0,
            u_transverse: 1.0,
            mode: FlowMode::GaussianApprox,
            nodes_per_length: 16.0,
            padding: 4,
        }
    }
}

/// Width of a profile by two methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowWidth {
    /// From the second central moment of `|f|`.
    pub moment: f64,
    /// From a least-squares line through `ln|f|` against `x²`.
    pub gaussian_fit: f64,
    /// RMS residual of that line, in `ln|f|`.
    pub fit_residual: f64,
}

/// Real-space density and transverse-current deviations (internal units).
#[derive(Debug, Clone, PartialEq)]
pub struct FlowProfile {
    pub x_axis: Vec<f64>,
    pub n_x: Vec<f64>,
    pub jt_x: Vec<f64>,
    pub ell_ext: f64,
    pub mode: FlowMode,
    pub density_width: FlowWidth,
    pub transverse_width: FlowWidth,
}

/// Fourier transform of the source along `x`: `u/(2πℓ²) e^{-k²ℓ²/2}`.
fn source_transform(k: f64, ell: f64, u: f64) -> f64 {
    u / (2.0 * PI * ell * ell) * libm::exp(-0.5 * k * k * ell * ell)
}

pub fn static_flow(gas: &InternalGas, settings: &FlowSettings) -> Result<FlowProfile> {
    if !gas.is_fermi_sea() {
        return Err(Error::UnsupportedReference);
    }
    let ell = settings.ell_ext;
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "ell_ext",
            reason: "must be positive",
        });
    }
    if !(settings.nodes_per_length >= 8.0) {
        return Err(Error::Resolution {
            nodes_per_length: settings.nodes_per_length,
            required: 8,
        });
    }
    if settings.padding < 4 {
        return Err(Error::InvalidArgument {
            name: "padding",
            reason: "must be at least 4",
        });
    }

    type Kernel = fn(f64) -> f64;
    let (density_kernel, transverse_kernel): (Kernel, Kernel) = match settings.mode {
        FlowMode::Exact => (density_static_bracket, transverse_static_bracket),
        FlowMode::GaussianApprox => (
            |k| -2.0 * libm::exp(-k * k / 6.0),
            |k| -2.0 / 3.0 * libm::exp(-k * k / 3.0),
        ),
    };

    let dx = ell / settings.nodes_per_length;
    let window = 10.0 * libm::sqrt(ell * ell + 2.0 / 3.0);
    let half_nodes = libm::ceil(window / dx) as usize;
    let total = 2 * settings.padding * half_nodes;
    let period = total as f64 * dx;
    let dk = 2.0 * PI / period;
    let modes = total / 2;

    let g0 = gas.g0();
    let gt = g0;
    let spectrum = |kernel: fn(f64) -> f64, u: f64| -> Vec<f64> {
        (0..=modes)
            .map(|m| {
                let k = m as f64 * dk;
                kernel(k) * source_transform(k, ell, u)
            })
            .collect()
    };
    let n_k = spectrum(density_kernel, settings.u_density * g0);
    let j_k = spectrum(transverse_kernel, settings.u_transverse * gt);

    // even real spectrum: f(x) = (1/L)[F0 + 2 Σ F_m cos(k_m x) + F_{N/2} cos(k_{N/2} x)]
    let transform = |spec: &[f64], x: f64| -> f64 {
        let mut sum = spec[0];
        for (m, f) in spec.iter().enumerate().skip(1) {
            let weight = if m == modes { 1.0 } else { 2.0 };
            sum += weight * f * libm::cos(m as f64 * dk * x);
        }
        sum / period
    };

    let x_axis: Vec<f64> = (0..=2 * half_nodes)
        .map(|i| (i as f64 - half_nodes as f64) * dx)
        .collect();
    let mut n_x = Vec::with_capacity(x_axis.len());
    let mut jt_x = Vec::with_capacity(x_axis.len());
    for i in 0..=half_nodes {
        let x = i as f64 * dx;
        n_x.push(transform(&n_k, x));
        jt_x.push(transform(&j_k, x));
    }
    let mirror = |half: Vec<f64>| -> Vec<f64> { half.iter().skip(1).rev().chain(half.iter()).copied().collect() };
    let n_x = mirror(n_x);
    let jt_x = mirror(jt_x);

    let density_width = flow_width(&x_axis, &n_x)?;
    let transverse_width = flow_width(&x_axis, &jt_x)?;
    Ok(FlowProfile {
        x_axis,
        n_x,
        jt_x,
        ell_ext: ell,
        mode: settings.mode,
        density_width,
        transverse_width,
    })
}

/// Width of a single-signed, localised profile sampled at `x`.
pub fn flow_width(x: &[f64], f: &[f64]) -> Result<FlowWidth> {
    if x.len() != f.len() || x.len() < 3 {
        return Err(Error::InvalidArgument {
            name: "profile",
            reason: "x and f must have equal length of at least 3",
        });
    }
    let positive: f64 = f.iter().filter(|v| **v > 0.0).sum();
    let negative: f64 = -f.iter().filter(|v| **v < 0.0).sum::<f64>();
    let (major, minor) = if positive >= negative {
        (positive, negative)
    } else {
        (negative, positive)
    };
    if major == 0.0 {
        return Err(Error::WidthUndefined("profile vanishes"));
    }
    if minor > 1e-2 * major {
        return Err(Error::WidthUndefined("profile changes sign"));
    }

    let mass: f64 = f.iter().map(|v| v.abs()).sum();
    let mean = x.iter().zip(f).map(|(x, v)| x * v.abs()).sum::<f64>() / mass;
    let variance = x
        .iter()
        .zip(f)
        .map(|(x, v)| (x - mean) * (x - mean) * v.abs())
        .sum::<f64>()
        / mass;
    let moment = libm::sqrt(variance);
    let inside = x.iter().filter(|x| (**x - mean).abs() <= 3.0 * moment).count();
    if inside < 16 {
        return Err(Error::WidthUndefined("fewer than 16 nodes within three widths"));
    }

    let peak = f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let (mut s1, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut used = Vec::new();
    for (xi, vi) in x.iter().zip(f) {
        if vi.abs() > 1e-4 * peak {
            let t = (xi - mean) * (xi - mean);
            let y = libm::log(vi.abs());
            s1 += 1.0;
            sx += t;
            sy += y;
            sxx += t * t;
            sxy += t * y;
            used.push((t, y));
        }
    }
    let slope = (s1 * sxy - sx * sy) / (s1 * sxx - sx * sx);
    let intercept = (sy - slope * sx) / s1;
    let gaussian_fit = if slope < 0.0 {
        libm::sqrt(-0.5 / slope)
    } else {
        f64::INFINITY
    };
    let fit_residual = libm::sqrt(
        used.iter()
            .map(|(t, y)| {
                let r = y - (intercept + slope * t);
                r * r
            })
            .sum::<f64>()
            / s1,
    );
    Ok(FlowWidth {
        moment,
        gaussian_fit,
        fit_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::GasSpec;

    fn fermi_sea() -> InternalGas {
        GasSpec::fermi_sea(2, 1.0)
            .unwrap()
            .to_internal(&Default::default())
            .unwrap()
    }

    #[test]
    fn width_of_sampled_gaussian() {
        let x: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.05).collect();
        let f: Vec<f64> = x.iter().map(|x| -3.0 * libm::exp(-x * x / (2.0 * 2.25))).collect();
        let w = flow_width(&x, &f).unwrap();
        assert!((w.moment - 1.5).abs() < 1e-6);
        assert!((w.gaussian_fit - 1.5).abs() < 1e-6);
        assert!(w.fit_residual < 1e-9);
    }

    #[test]
    fn flat_top_methods_disagree() {
        let x: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.01).collect();
        let f: Vec<f64> = x
            .iter()
            .map(|x| 1.0 / (1.0 + libm::exp((x.abs() - 1.5) / 0.05)))
            .collect();
        let w = flow_width(&x, &f).unwrap();
        assert!((w.moment - w.gaussian_fit).abs() > 0.05, "{w:?}");
        assert!(w.fit_residual > 0.1);
    }

    #[test]
    fn sign_changing_profile_is_rejected() {
        let x: Vec<f64> = (-100..=100).map(|i| i as f64 * 0.1).collect();
        let f: Vec<f64> = x.iter().map(|x| libm::cos(*x) * libm::exp(-x * x / 50.0)).collect();
        assert_eq!(flow_width(&x, &f), Err(Error::WidthUndefined("profile changes sign")));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let s = FlowSettings {
            nodes_per_length: 6.0,
            ..Default::default()
        };
        assert!(matches!(
            static_flow(&fermi_sea(), &s),
            Err(Error::Resolution { required: 8, .. })
        ));
    }

    #[test]
    fn gaussian_kernels_convolve_exactly() {
        let gas = fermi_sea();
        let s = FlowSettings::default();
        let p = static_flow(&gas, &s).unwrap();
        let g0 = gas.g0();
        let analytic = |x: f64, pre: f64, var: f64| {
            pre * g0 / (2.0 * PI) / libm::sqrt(2.0 * PI * var) * libm::exp(-x * x / (2.0 * var))
        };
        for (i, x) in p.x_axis.iter().enumerate() {
            assert!((p.n_x[i] - analytic(*x, -2.0, 1.0 + 1.0 / 3.0)).abs() < 1e-12);
            assert!((p.jt_x[i] - analytic(*x, -2.0 / 3.0, 1.0 + 2.0 / 3.0)).abs() < 1e-12);
        }
    }
}
