//! Smeared-delta Monte Carlo in three dimensions.
//!
//! The estimator replaces `δ(c(k))` by a normalised Gaussian of width
//! `smear` and integrates `f(k) δ_smear(c(k))` over a ball or box with
//! jittered stratified sampling. Independent replicates, each seeded from
//! the caller's seed, provide the error estimate.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::QuadResult;
use crate::{Error, Result};

const REPLICATES: usize = 8;

/// Sampling domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Ball { center: [f64; 3], radius: f64 },
    Cube { center: [f64; 3], half_width: f64 },
    Box { center: [f64; 3], half_widths: [f64; 3] },
}

impl Region {
    fn half_widths(&self) -> [f64; 3] {
        match *self {
            Region::Ball { radius, .. } => [radius; 3],
            Region::Cube { half_width, .. } => [half_width; 3],
            Region::Box { half_widths, .. } => half_widths,
        }
    }

    fn center(&self) -> [f64; 3] {
        match *self {
            Region::Ball { center, .. } | Region::Cube { center, .. } | Region::Box { center, .. } => center,
        }
    }

    fn contains(&self, p: [f64; 3]) -> bool {
        match *self {
            Region::Ball { center, radius } => {
                let d = [p[0] - center[0], p[1] - center[1], p[2] - center[2]];
                d[0] * d[0] + d[1] * d[1] + d[2] * d[2] <= radius * radius
            }
            Region::Cube { .. } | Region::Box { .. } => true,
        }
    }
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Monte-Carlo estimate of `∫ d³k f(k) δ_smear(constraint(k))` over `region`.
///
/// `samples` is the total budget, split into 8 replicates of jittered
/// strata (equal counts per axis, so anisotropic boxes get anisotropic
/// cells). The result depends only on the inputs and `seed`.
pub fn mc_delta_integral<F, C>(
    f: F,
    constraint: C,
    region: Region,
    smear: f64,
    samples: usize,
    seed: u64,
) -> Result<QuadResult>
where
    F: Fn([f64; 3]) -> f64,
    C: Fn([f64; 3]) -> f64,
{
    let [r] = mc_delta_integral_multi(|p| [f(p)], constraint, region, &[smear], samples, seed)?[0];
    Ok(r)
}

/// Vector-valued, multi-smear form of [`mc_delta_integral`]: every
/// component of `f` is integrated against every smear in `smears`, all on
/// the same sample points. Returns `result[smear][component]`.
pub fn mc_delta_integral_multi<const N: usize, F, C>(
    f: F,
    constraint: C,
    region: Region,
    smears: &[f64],
    samples: usize,
    seed: u64,
) -> Result<alloc::vec::Vec<[QuadResult; N]>>
where
    F: Fn([f64; 3]) -> [f64; N],
    C: Fn([f64; 3]) -> f64,
{
    use alloc::vec;
    use alloc::vec::Vec;

    if smears.is_empty() || smears.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidArgument {
            name: "smear",
            reason: "must be positive",
        });
    }
    let half = region.half_widths();
    if half.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        return Err(Error::InvalidArgument {
            name: "region",
            reason: "must have positive finite extent",
        });
    }
    let per_axis = libm::floor(libm::cbrt((samples / REPLICATES) as f64)).max(1.0) as usize;
    let cell = half.map(|h| 2.0 * h / per_axis as f64);
    let cell_volume = cell[0] * cell[1] * cell[2];
    let center = region.center();
    let origin = [center[0] - half[0], center[1] - half[1], center[2] - half[2]];
    let widest = smears.iter().copied().fold(0.0, f64::max);
    let norms: Vec<f64> = smears
        .iter()
        .map(|s| 1.0 / (s * libm::sqrt(2.0 * core::f64::consts::PI)))
        .collect();

    // estimates[rep][smear][component]
    let mut estimates = vec![vec![[0.0; N]; smears.len()]; REPLICATES];
    let mut effective = 0usize;
    for (rep, per_smear) in estimates.iter_mut().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (rep as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for i in 0..per_axis {
            for j in 0..per_axis {
                for l in 0..per_axis {
                    let p = [
                        origin[0] + (i as f64 + unit(&mut rng)) * cell[0],
                        origin[1] + (j as f64 + unit(&mut rng)) * cell[1],
                        origin[2] + (l as f64 + unit(&mut rng)) * cell[2],
                    ];
                    if !region.contains(p) {
                        continue;
                    }
                    let c = constraint(p);
                    if c.abs() > 40.0 * widest {
                        continue;
                    }
                    if c.abs() <= 6.0 * widest {
                        effective += 1;
                    }
                    let values = f(p);
                    for (k, s) in smears.iter().enumerate() {
                        let t = c / s;
                        let weight = norms[k] * libm::exp(-0.5 * t * t);
                        for (acc, v) in per_smear[k].iter_mut().zip(values.iter()) {
                            *acc += v * weight;
                        }
                    }
                }
            }
        }
    }
    if effective == 0 {
        return Err(Error::DegenerateSupport);
    }

    let n = REPLICATES as f64;
    let evaluations = REPLICATES * per_axis * per_axis * per_axis;
    let mut out = Vec::with_capacity(smears.len());
    for k in 0..smears.len() {
        let mut row = [QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations,
        }; N];
        for (comp, slot) in row.iter_mut().enumerate() {
            let mean = estimates.iter().map(|e| e[k][comp]).sum::<f64>() * cell_volume / n;
            let var = estimates
                .iter()
                .map(|e| {
                    let d = e[k][comp] * cell_volume - mean;
                    d * d
                })
                .sum::<f64>()
                / (n - 1.0);
            slot.value = mean;
            slot.error_estimate = libm::sqrt(var / n);
        }
        out.push(row);
    }
    Ok(out)
}

/// Smear-extrapolated estimate: evaluates the smears `s, s/2, ..., s/2^(levels-1)`
/// on common sample points and eliminates the `s², s⁴, ...` bias terms by
/// Richardson extrapolation. `levels` must be at least 2.
pub fn mc_delta_extrapolated_multi<const N: usize, F, C>(
    f: F,
    constraint: C,
    region: Region,
    smear: f64,
    levels: usize,
    samples: usize,
    seed: u64,
) -> Result<[QuadResult; N]>
where
    F: Fn([f64; 3]) -> [f64; N],
    C: Fn([f64; 3]) -> f64,
{
    use alloc::vec::Vec;

    if levels < 2 {
        return Err(Error::InvalidArgument {
            name: "levels",
            reason: "extrapolation needs at least two smears",
        });
    }
    let smears: Vec<f64> = (0..levels).map(|i| smear / (1u64 << i) as f64).collect();
    let table = mc_delta_integral_multi(f, constraint, region, &smears, samples, seed)?;
    let evaluations = table[0][0].evaluations;

    let mut out = [QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations,
    }; N];
    for (comp, slot) in out.iter_mut().enumerate() {
        let mut values: Vec<f64> = table.iter().map(|row| row[comp].value).collect();
        // Noise of the finest smear dominates; Richardson weights amplify it
        // by at most the sum of |weights| < 2.
        let noise = table.iter().map(|row| row[comp].error_estimate).fold(0.0, f64::max);
        let mut factor = 4.0;
        let mut last_step = 0.0;
        for _ in 1..levels {
            let next: Vec<f64> = values
                .windows(2)
                .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
                .collect();
            last_step = (next[next.len() - 1] - values[values.len() - 1]).abs();
            values = next;
            factor *= 4.0;
        }
        slot.value = values[0];
        slot.error_estimate = 2.0 * noise + last_step / factor;
    }
    Ok(out)
}

/// Scalar two-level form of [`mc_delta_extrapolated_multi`].
pub fn mc_delta_extrapolated<F, C>(
    f: F,
    constraint: C,
    region: Region,
    smear: f64,
    samples: usize,
    seed: u64,
) -> Result<QuadResult>
where
    F: Fn([f64; 3]) -> f64,
    C: Fn([f64; 3]) -> f64,
{
    let [r] = mc_delta_extrapolated_multi(|p| [f(p)], constraint, region, smear, 2, samples, seed)?;
    Ok(r)
}
