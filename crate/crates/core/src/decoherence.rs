//! Decoherence (consistency) measures
//!
//! ```text
//! D^tt = sqrt(|S^tt+| / (2(1+z²)[(L^tt)² + (S^tt-)²]))
//! D^T  = sqrt(|S^T+|  / (2[(L^T)² + (S^T-)²]))
//! ```
//!
//! on `(Q, z)` grids and along the environment mass shell `z = Q/2`.

use alloc::vec::Vec;

use crate::bare_action::{density_factor, UNDERFLOW};
use crate::response::{lindhard_blocks, response_blocks, spectral_blocks, Mode, ResponseBlocks, ResponseOptions};
use crate::{Error, InternalGas, Result};

/// `D^tt` and `D^T` at one mode.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Measures {
    pub dtt: f64,
    pub dt: f64,
}

fn ratio(numerator: f64, denominator: f64, channel: &'static str) -> Result<f64> {
    let numerator = numerator.abs();
    if numerator == 0.0 {
        return Ok(0.0);
    }
    if denominator < UNDERFLOW {
        return Err(Error::IndeterminateMeasure { channel });
    }
    Ok(libm::sqrt(numerator / (2.0 * denominator)))
}

pub fn d_measures(blocks: &ResponseBlocks, mode: Mode) -> Result<Measures> {
    let l = blocks.lindhard;
    let sp = blocks.s_plus();
    let sm = blocks.s_minus();
    Ok(Measures {
        dtt: ratio(sp.tt, density_factor(mode) * (l.tt * l.tt + sm.tt * sm.tt), "density")?,
        dt: ratio(sp.t, l.t * l.t + sm.t * sm.t, "transverse")?,
    })
}

/// Settings of grid and ridge evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureOptions {
    pub response: ResponseOptions,
    /// At finite temperature, modes with `S^tt+` and `S^T+` both below this
    /// (units of `g0`) count as outside the support.
    pub support_threshold: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            response: ResponseOptions::default(),
            support_threshold: 1e-14,
        }
    }
}

/// Measures at a single mode, skipping the principal-value integrals where
/// there is no spectral weight.
pub fn measures_at(gas: &InternalGas, mode: Mode, opts: &MeasureOptions) -> Result<Measures> {
    if gas.is_fermi_sea() {
        if !mode.in_particle_hole_strip() {
            return Ok(Measures::default());
        }
        let blocks = response_blocks(gas, mode, &opts.response)?;
        return d_measures(&blocks, mode);
    }
    let spectral = spectral_blocks(gas, mode, &opts.response)?;
    let sp = spectral.r_plus + spectral.r_minus;
    if sp.tt.abs() < opts.support_threshold && sp.t.abs() < opts.support_threshold {
        return Ok(Measures::default());
    }
    let principal = lindhard_blocks(gas, mode, &opts.response)?;
    let blocks = ResponseBlocks {
        mode,
        lindhard: principal.lindhard,
        r_plus: spectral.r_plus,
        r_minus: spectral.r_minus,
        error_estimate: spectral.error_estimate.max(principal.error_estimate),
        near_edge: principal.near_edge,
    };
    d_measures(&blocks, mode)
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return alloc::vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

/// Rectangular window in the `(Q, z)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridWindow {
    pub q_range: (f64, f64),
    pub z_range: (f64, f64),
    pub q_nodes: usize,
    pub z_nodes: usize,
}

impl Default for GridWindow {
    /// `Q ∈ [0.025, 6]` (step 0.025) by `z ∈ [0, 4]`, 240 × 160 nodes.
    fn default() -> Self {
        Self {
            q_range: (0.025, 6.0),
            z_range: (0.0, 4.0),
            q_nodes: 240,
            z_nodes: 160,
        }
    }
}

impl GridWindow {
    pub fn validate(&self) -> Result<()> {
        let (q0, q1) = self.q_range;
        let (z0, z1) = self.z_range;
        if !(q0 > 0.0 && q1 > q0 && q1.is_finite()) {
            return Err(Error::InvalidArgument {
                name: "q_range",
                reason: "need 0 < Q_min < Q_max",
            });
        }
        if !(z0 >= 0.0 && z1 > z0 && z1.is_finite()) {
            return Err(Error::InvalidArgument {
                name: "z_range",
                reason: "need 0 <= z_min < z_max",
            });
        }
        if self.q_nodes < 2 || self.z_nodes < 2 {
            return Err(Error::InvalidArgument {
                name: "resolution",
                reason: "need at least 2 nodes per axis",
            });
        }
        Ok(())
    }

    pub fn q_axis(&self) -> Vec<f64> {
        linspace(self.q_range.0, self.q_range.1, self.q_nodes)
    }

    pub fn z_axis(&self) -> Vec<f64> {
        linspace(self.z_range.0, self.z_range.1, self.z_nodes)
    }
}

/// A mode whose evaluation failed; its grid entries are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct Defect {
    pub q: f64,
    pub z: f64,
    pub error: Error,
}

/// `D^tt`, `D^T` on a `(Q, z)` grid, stored row-major with `z` fastest:
/// entry `(i, j)` is at `i * z_axis.len() + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoherenceGrid {
    pub q_axis: Vec<f64>,
    pub z_axis: Vec<f64>,
    pub dtt: Vec<f64>,
    pub dt: Vec<f64>,
    pub defects: Vec<Defect>,
}

impl DecoherenceGrid {
    pub fn at(&self, i: usize, j: usize) -> Measures {
        let k = i * self.z_axis.len() + j;
        Measures {
            dtt: self.dtt[k],
            dt: self.dt[k],
        }
    }
}

pub fn d_grid(gas: &InternalGas, window: &GridWindow, opts: &MeasureOptions) -> Result<DecoherenceGrid> {
    window.validate()?;
    let q_axis = window.q_axis();
    let z_axis = window.z_axis();
    let size = q_axis.len() * z_axis.len();
    let mut grid = DecoherenceGrid {
        dtt: Vec::with_capacity(size),
        dt: Vec::with_capacity(size),
        defects: Vec::new(),
        q_axis,
        z_axis,
    };
    for &q in &grid.q_axis {
        for &z in &grid.z_axis {
            let m = Mode::new(q, z).and_then(|mode| measures_at(gas, mode, opts));
            match m {
                Ok(m) => {
                    grid.dtt.push(m.dtt);
                    grid.dt.push(m.dt);
                }
                Err(error) => {
                    grid.dtt.push(f64::NAN);
                    grid.dt.push(f64::NAN);
                    grid.defects.push(Defect { q, z, error });
                }
            }
        }
    }
    Ok(grid)
}

/// Measures along the mass shell `z = Q/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeProfile {
    pub q_axis: Vec<f64>,
    pub dtt: Vec<f64>,
    pub dt: Vec<f64>,
    /// Location of the `D^tt` maximum, refined by a parabola through the
    /// three nodes around the discrete maximum.
    pub argmax_q_tt: f64,
    pub defects: Vec<Defect>,
}

pub fn ridge_profile(
    gas: &InternalGas,
    q_range: (f64, f64),
    nodes: usize,
    opts: &MeasureOptions,
) -> Result<RidgeProfile> {
    let (q0, q1) = q_range;
    if !(q0 > 0.0 && q1 > q0 && q1.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "q_range",
            reason: "need 0 < Q_min < Q_max",
        });
    }
    if nodes < 3 {
        return Err(Error::InvalidArgument {
            name: "resolution",
            reason: "need at least 3 nodes",
        });
    }
    let q_axis = linspace(q0, q1, nodes);
    let mut dtt = Vec::with_capacity(nodes);
    let mut dt = Vec::with_capacity(nodes);
    let mut defects = Vec::new();
    for &q in &q_axis {
        match Mode::new(q, 0.5 * q).and_then(|mode| measures_at(gas, mode, opts)) {
            Ok(m) => {
                dtt.push(m.dtt);
                dt.push(m.dt);
            }
            Err(error) => {
                dtt.push(f64::NAN);
                dt.push(f64::NAN);
                defects.push(Defect { q, z: 0.5 * q, error });
            }
        }
    }
    let argmax_q_tt = parabolic_argmax(&q_axis, &dtt).ok_or(Error::InvalidArgument {
        name: "ridge",
        reason: "no finite values along the ridge",
    })?;
    Ok(RidgeProfile {
        q_axis,
        dtt,
        dt,
        argmax_q_tt,
        defects,
    })
}

/// Vertex of the parabola through the discrete maximum and its neighbours;
/// the node itself when the maximum sits on the boundary.
fn parabolic_argmax(x: &[f64], y: &[f64]) -> Option<f64> {
    let (k, _) = y.iter().enumerate().filter(|(_, v)| v.is_finite()).fold(
        None,
        |best: Option<(usize, f64)>, (i, &v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((i, v)),
        },
    )?;
    if k == 0 || k + 1 == y.len() || !y[k - 1].is_finite() || !y[k + 1].is_finite() {
        return Some(x[k]);
    }
    let (x0, x1, x2) = (x[k - 1], x[k], x[k + 1]);
    let (y0, y1, y2) = (y[k - 1], y[k], y[k + 1]);
    let num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den == 0.0 {
        return Some(x1);
    }
    Some(x1 - 0.5 * num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::response::Components;
    use crate::GasSpec;

    fn fermi_sea() -> InternalGas {
        GasSpec::fermi_sea(2, 1.0)
            .unwrap()
            .to_internal(&Default::default())
            .unwrap()
    }

    fn blocks(mode: Mode, l: f64, rp: f64, rm: f64) -> ResponseBlocks {
        let c = |a: f64| Components {
            tt: a,
            ts: 0.0,
            l: a,
            t: a,
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
    fn zero_numerator_wins_over_zero_denominator() {
        let mode = Mode::new(1.0, 3.0).unwrap();
        let m = d_measures(&blocks(mode, 0.0, 0.0, 0.0), mode).unwrap();
        assert_eq!(m, Measures::default());
    }

    #[test]
    fn vanishing_denominator_is_indeterminate() {
        let mode = Mode::new(1.0, 0.5).unwrap();
        let e = d_measures(&blocks(mode, 0.0, 1e-300, 1e-300), mode).unwrap_err();
        assert_eq!(e, Error::IndeterminateMeasure { channel: "density" });
    }

    #[test]
    fn scaling_blocks() {
        let mode = Mode::new(1.5, 0.6).unwrap();
        let b = blocks(mode, -0.7, 0.9, 0.2);
        let base = d_measures(&b, mode).unwrap();
        for lambda in [0.5, 2.0] {
            let m = d_measures(&b.scaled(lambda), mode).unwrap();
            assert!((m.dtt * m.dtt - base.dtt * base.dtt / lambda).abs() < 1e-14);
            assert!((m.dt * m.dt - base.dt * base.dt / lambda).abs() < 1e-14);
        }
    }

    #[test]
    fn off_strip_mode_is_zero() {
        let m = measures_at(&fermi_sea(), Mode::new(1.0, 3.0).unwrap(), &Default::default()).unwrap();
        assert_eq!(m, Measures::default());
    }

    #[test]
    fn small_grid_outside_strip() {
        let window = GridWindow {
            q_range: (0.5, 1.0),
            z_range: (2.5, 3.5),
            q_nodes: 2,
            z_nodes: 2,
        };
        let g = d_grid(&fermi_sea(), &window, &Default::default()).unwrap();
        assert!(g.dtt.iter().chain(&g.dt).all(|v| *v == 0.0));
        assert!(g.defects.is_empty());
    }

    #[test]
    fn parabola_vertex() {
        let x = linspace(0.0, 4.0, 5);
        let y: Vec<f64> = x.iter().map(|v| -(v - 1.7) * (v - 1.7)).collect();
        assert!((parabolic_argmax(&x, &y).unwrap() - 1.7).abs() < 1e-12);
        assert_eq!(parabolic_argmax(&x, &[5.0, 4.0, 3.0, 2.0, 1.0]), Some(0.0));
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(0.025, 6.0, 240);
        assert_eq!(v[0], 0.025);
        assert_eq!(v[239], 6.0);
        assert!((v[79] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bad_windows() {
        let w = GridWindow {
            q_nodes: 1,
            ..Default::default()
        };
        assert!(d_grid(&fermi_sea(), &w, &Default::default()).is_err());
        let w = GridWindow {
            q_range: (0.0, 1.0),
            ..Default::default()
        };
        assert!(d_grid(&fermi_sea(), &w, &Default::default()).is_err());
    }
}
