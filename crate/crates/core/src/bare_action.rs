//! Bare-action kernels of the physical/auxiliary current pair and the
//! single-mode moments they imply.
//!
//! With `D_tt = (1+z²)[(L^tt)² + (S^tt-)²]` and `D_T = (L^T)² + (S^T-)²`,
//!
//! ```text
//! Re S^B = ½ ∫ [ (L^tt - iS^tt-)/D_tt n* n^a + (L^T - iS^T-)/D_T j^T* j^Ta ]
//! Im S^B = ¼ ∫ [ S^tt+/D_tt |n^a|² + S^T+/D_T |j^Ta|² ]
//! ```
//!
//! The kernels here are the bracketed coefficients, without the ½ and ¼.

use num_complex::Complex64;

use crate::response::{Mode, ResponseBlocks};
use crate::{Error, Result};

/// Denominators below this are treated as vanishing.
pub const UNDERFLOW: f64 = 1e-280;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BareKernels {
    /// Coefficient of `n* n^a` in `Re S^B`.
    pub re_tt: Complex64,
    /// Coefficient of `|n^a|²` in `Im S^B`.
    pub im_tt: f64,
    /// Coefficient of `j^T* j^Ta` in `Re S^B`.
    pub re_t: Complex64,
    /// Coefficient of `|j^Ta|²` in `Im S^B`.
    pub im_t: f64,
    pub denominator_tt: f64,
    pub denominator_t: f64,
}

/// `1 + z²`, the density-channel factor of the bare action.
pub fn density_factor(mode: Mode) -> f64 {
    1.0 + mode.z() * mode.z()
}

pub fn bare_kernels(blocks: &ResponseBlocks, mode: Mode) -> Result<BareKernels> {
    let l = blocks.lindhard;
    let sp = blocks.s_plus();
    let sm = blocks.s_minus();

    let denominator_tt = density_factor(mode) * (l.tt * l.tt + sm.tt * sm.tt);
    if denominator_tt < UNDERFLOW {
        return Err(Error::KernelUndefined { channel: "density" });
    }
    let denominator_t = l.t * l.t + sm.t * sm.t;
    if denominator_t < UNDERFLOW {
        return Err(Error::KernelUndefined { channel: "transverse" });
    }

    Ok(BareKernels {
        re_tt: Complex64::new(l.tt, -sm.tt) / denominator_tt,
        im_tt: sp.tt / denominator_tt,
        re_t: Complex64::new(l.t, -sm.t) / denominator_t,
        im_t: sp.t / denominator_t,
        denominator_tt,
        denominator_t,
    })
}

/// Single-mode expectation values (`ħ = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMoments {
    /// `<n* n> = -2 S^tt+ (1+z²)`
    pub nn: f64,
    /// `<n* n^a> = 2i (L^tt + i S^tt-)(1+z²)`
    pub nna: Complex64,
    /// `<j^T* j^T> = -2 S^T+`
    pub jj: f64,
    /// `<j^T* j^Ta> = 2i (L^T + i S^T-)`
    pub jja: Complex64,
}

pub fn mode_moments(blocks: &ResponseBlocks, mode: Mode) -> ModeMoments {
    let l = blocks.lindhard;
    let sp = blocks.s_plus();
    let sm = blocks.s_minus();
    let factor = density_factor(mode);
    let two_i = Complex64::new(0.0, 2.0);
    ModeMoments {
        nn: -2.0 * sp.tt * factor,
        nna: two_i * Complex64::new(l.tt, sm.tt) * factor,
        jj: -2.0 * sp.t,
        jja: two_i * Complex64::new(l.t, sm.t),
    }
}

impl ModeMoments {
    /// `ħ|<n*n>| / |<n*n^a>|²`, the squared density measure.
    pub fn density_ratio(&self) -> f64 {
        self.nn.abs() / self.nna.norm_sqr()
    }

    /// `ħ|<j*j>| / |<j*j^a>|²`, the squared transverse-current measure.
    pub fn transverse_ratio(&self) -> f64 {
        self.jj.abs() / self.jja.norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::Components;

    fn blocks(mode: Mode, l: f64, rp: f64, rm: f64) -> ResponseBlocks {
        let c = |a: f64| Components {
            tt: a,
            ts: 0.0,
            l: a,
            t: 0.5 * a,
        };
        ResponseBlocks {
            mode,
            lindhard: c(l),
            r_plus: c(rp),
            r_minus: c(rm),
            error_estimate: 0.0,
            near_edge: false,
        }
    }

    #[test]
    fn off_strip_kernels() {
        let mode = Mode::new(1.0, 3.0).unwrap();
        let k = bare_kernels(&blocks(mode, -0.2, 0.0, 0.0), mode).unwrap();
        assert_eq!(k.im_tt, 0.0);
        assert!((k.re_tt - Complex64::from(1.0 / (10.0 * -0.2))).norm() < 1e-15);
    }

    #[test]
    fn static_mode_has_unit_factor() {
        let mode = Mode::new(1.0, 0.0).unwrap();
        let k = bare_kernels(&blocks(mode, -1.8, 0.0, 0.0), mode).unwrap();
        assert!((k.re_tt.re - 1.0 / -1.8).abs() < 1e-15);
    }

    #[test]
    fn inverting_the_assembly() {
        let mode = Mode::new(2.0, 1.0).unwrap();
        let b = blocks(mode, -0.17, 0.78, 0.01);
        let k = bare_kernels(&b, mode).unwrap();
        assert!((k.im_tt * k.denominator_tt - b.s_plus().tt).abs() < 1e-15);
        assert!(k.im_tt >= 0.0 && k.im_t >= 0.0);
    }

    #[test]
    fn vanishing_denominator_names_channel() {
        let mode = Mode::new(1.0, 3.0).unwrap();
        let e = bare_kernels(&blocks(mode, 0.0, 0.0, 0.0), mode).unwrap_err();
        assert_eq!(e, Error::KernelUndefined { channel: "density" });
    }

    #[test]
    fn moment_modulus_identity() {
        let mode = Mode::new(1.3, 0.4).unwrap();
        let b = blocks(mode, -0.9, 0.6, 0.1);
        let m = mode_moments(&b, mode);
        let f = density_factor(mode);
        let sm = b.s_minus().tt;
        let expected = 4.0 * f * f * (0.81 + sm * sm);
        assert!((m.nna.norm_sqr() - expected).abs() < 1e-14);
    }
}
