//! Integration engines.
//!
//! * [`integrate_adaptive`]: globally adaptive 21-point Gauss-Kronrod with
//!   caller-declared split points; an infinite upper limit is mapped onto
//!   `[0, 1)` by `x = a + t / (1 - t)`.
//! * [`integrate_pv`]: Cauchy principal value by subtraction of the pole
//!   residue.
//! * [`mc_delta_integral`]: stratified Monte-Carlo estimate of a 3D integral
//!   constrained by a Gaussian-smeared delta function. It shares no code
//!   with the 1D reductions it is used to check.

mod kronrod;
mod monte_carlo;

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::{Error, Result};
use kronrod::{qk21, EVALS_PER_RULE};

pub use monte_carlo::{
    mc_delta_extrapolated, mc_delta_extrapolated_multi, mc_delta_integral, mc_delta_integral_multi, Region,
};

/// Outcome of a successful integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Requested accuracy: the integrators stop once the error estimate is
/// below `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_evaluations: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-13,
            max_evaluations: 200_000,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_evaluations: usize) -> Result<Self> {
        if !(rel > 0.0 && rel.is_finite()) {
            return Err(Error::InvalidArgument {
                name: "rel",
                reason: "relative tolerance must be positive",
            });
        }
        if !(abs > 0.0 && abs.is_finite()) {
            return Err(Error::InvalidArgument {
                name: "abs",
                reason: "absolute tolerance must be positive",
            });
        }
        if max_evaluations < EVALS_PER_RULE {
            return Err(Error::InvalidArgument {
                name: "max_evaluations",
                reason: "must allow at least one 21-point rule",
            });
        }
        Ok(Self {
            rel,
            abs,
            max_evaluations,
        })
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]`.
///
/// `splits` are interior points where `f` has kinks, jumps or integrable
/// singularities; they become initial interval boundaries so that no rule
/// node lands on them. Points outside `(a, b)` are ignored. `b` may be
/// `f64::INFINITY`.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, splits: &[f64], tol: &Tolerance) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    if !a.is_finite() || b.is_nan() || a >= b {
        return Err(Error::InvalidArgument {
            name: "interval",
            reason: "need finite a < b",
        });
    }
    if b.is_infinite() {
        let mapped = |t: f64| {
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        };
        let mapped_splits: Vec<f64> = splits
            .iter()
            .filter(|&&x| x > a && x.is_finite())
            .map(|&x| (x - a) / (1.0 + x - a))
            .collect();
        return adaptive_finite(&mapped, 0.0, 1.0, &mapped_splits, tol);
    }
    adaptive_finite(&f, a, b, splits, tol)
}

fn adaptive_finite<F>(f: &F, a: f64, b: f64, splits: &[f64], tol: &Tolerance) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let mut edges: Vec<f64> = Vec::with_capacity(splits.len() + 2);
    edges.push(a);
    edges.extend(splits.iter().copied().filter(|&x| x > a && x < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut heap = BinaryHeap::new();
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    let mut total_value = 0.0;
    let mut total_error = 0.0;
    let mut evaluations = 0;

    for w in edges.windows(2) {
        let r = qk21(f, w[0], w[1]);
        evaluations += EVALS_PER_RULE;
        total_value += r.value;
        total_error += r.error;
        heap.push(Interval {
            a: w[0],
            b: w[1],
            value: r.value,
            error: r.error,
        });
    }

    loop {
        if total_error <= tol.target(total_value) {
            return Ok(QuadResult {
                value: total_value,
                error_estimate: total_error,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(iv) => iv,
            None => break,
        };
        if evaluations + 2 * EVALS_PER_RULE > tol.max_evaluations {
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 8.0 * f64::EPSILON * mid.abs().max(1.0) {
            // Interval exhausted at machine resolution; its error stays.
            frozen_value += worst.value;
            frozen_error += worst.error;
            continue;
        }
        let left = qk21(f, worst.a, mid);
        let right = qk21(f, mid, worst.b);
        evaluations += 2 * EVALS_PER_RULE;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(Interval {
            a: worst.a,
            b: mid,
            value: left.value,
            error: left.error,
        });
        heap.push(Interval {
            a: mid,
            b: worst.b,
            value: right.value,
            error: right.error,
        });
    }

    // Re-sum to shed the drift of the running totals.
    let value = frozen_value + heap.iter().map(|iv| iv.value).sum::<f64>();
    let error = frozen_error + heap.iter().map(|iv| iv.error).sum::<f64>();
    if error <= tol.target(value) {
        return Ok(QuadResult {
            value,
            error_estimate: error,
            evaluations,
        });
    }
    Err(Error::NonConvergence {
        value,
        error,
        evaluations,
    })
}

/// Cauchy principal value of `∫_a^b g(x) / (x - pole) dx`.
///
/// Takes the numerator `g` rather than the full integrand: the pole residue
/// `g(pole)` is integrated analytically, `g(pole) ln|(b - pole)/(pole - a)|`,
/// and the remainder `(g(x) - g(pole)) / (x - pole)` is regular. When the
/// pole lies outside `(a, b)` this is an ordinary integral of `g/(x - pole)`.
pub fn integrate_pv<G>(g: G, a: f64, b: f64, pole: f64, splits: &[f64], tol: &Tolerance) -> Result<QuadResult>
where
    G: Fn(f64) -> f64,
{
    if !(pole > a && pole < b) {
        return integrate_adaptive(|x| g(x) / (x - pole), a, b, splits, tol);
    }
    if !b.is_finite() {
        return Err(Error::InvalidArgument {
            name: "b",
            reason: "principal value needs a finite interval",
        });
    }
    let residue = g(pole);
    let mut all_splits: Vec<f64> = splits.to_vec();
    all_splits.push(pole);
    let regular = integrate_adaptive(
        |x| {
            let d = x - pole;
            if d == 0.0 {
                0.0
            } else {
                (g(x) - residue) / d
            }
        },
        a,
        b,
        &all_splits,
        tol,
    )?;
    Ok(QuadResult {
        value: regular.value + residue * libm::log(((b - pole) / (pole - a)).abs()),
        error_estimate: regular.error_estimate,
        evaluations: regular.evaluations + 1,
    })
}
