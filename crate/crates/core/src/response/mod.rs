//! Particle-hole response of the ideal gas in CTP form.
//!
//! For a mode `(Q, z)` (internal units, `ω = zQ`) the tensor blocks are
//!
//! ```text
//! L^{μν}  = n_s P∫_k n_k [F+/(ω - Q²/2 - k·q) - F-/(ω + Q²/2 + k·q)]
//! R^{±μν} = n_s π ∫_k δ(±ω - ω_{k+q} + ω_k) n_k (1 + ξ n_{k+q}) F±
//! ```
//!
//! split into the scalar components `tt`, `ts` (with the factor `q` of the
//! `q X^{ts}` layout taken out), `L` (along `q`) and `T` (per transverse
//! direction). All components are stored in units of `g0`.

mod ctp;
mod lindhard;
mod oracle;
mod spectral;

use core::ops::{Add, Mul, Sub};

use crate::quadrature::Tolerance;
use crate::{Error, InternalGas, Result};

pub use ctp::{assemble_ctp, retarded, source_response, CtpBlock, CtpMatrix, RetardedPropagator};
pub use lindhard::lindhard_blocks;
pub use oracle::{spectral_monte_carlo, MonteCarloSettings};
pub use spectral::spectral_blocks;

/// A Fourier mode: wave number `Q = k / k_gas` and `z = mω / (ħ k_gas k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    q: f64,
    z: f64,
}

impl Mode {
    pub fn new(q: f64, z: f64) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidArgument {
                name: "Q",
                reason: "wave number must be positive and finite",
            });
        }
        if !z.is_finite() {
            return Err(Error::InvalidArgument {
                name: "z",
                reason: "must be finite",
            });
        }
        Ok(Self { q, z })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Frequency in internal units, `ω = zQ`.
    pub fn omega(&self) -> f64 {
        self.z * self.q
    }

    /// The same wave number at `-z`.
    pub fn reflected(&self) -> Self {
        Self { q: self.q, z: -self.z }
    }

    /// Whether a zero-temperature Fermi sea has spectral weight at this mode:
    /// `|z - Q/2| <= 1` (or the reflected strip for `z < 0`).
    pub fn in_particle_hole_strip(&self) -> bool {
        (self.z.abs() - 0.5 * self.q).abs() <= 1.0 && self.z != 0.0
    }

    /// Distance in `z` to the nearest edge where a log singularity of the
    /// radial integrand meets the Fermi surface.
    pub fn continuum_edge_distance(&self) -> f64 {
        let half = 0.5 * self.q;
        let a = ((self.z - half).abs() - 1.0).abs();
        let b = ((self.z + half).abs() - 1.0).abs();
        a.min(b)
    }
}

/// The four scalar tensor components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Components<T = f64> {
    pub tt: T,
    pub ts: T,
    pub l: T,
    pub t: T,
}

impl<T> Components<T> {
    pub fn map<U>(self, mut f: impl FnMut(T) -> U) -> Components<U> {
        Components {
            tt: f(self.tt),
            ts: f(self.ts),
            l: f(self.l),
            t: f(self.t),
        }
    }

    pub fn zip<U, V>(self, other: Components<U>, mut f: impl FnMut(T, U) -> V) -> Components<V> {
        Components {
            tt: f(self.tt, other.tt),
            ts: f(self.ts, other.ts),
            l: f(self.l, other.l),
            t: f(self.t, other.t),
        }
    }

    pub fn as_array(&self) -> [&T; 4] {
        [&self.tt, &self.ts, &self.l, &self.t]
    }
}

impl<T: Add<Output = T>> Add for Components<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip(rhs, |a, b| a + b)
    }
}

impl<T: Sub<Output = T>> Sub for Components<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for Components<f64> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.map(|a| a * rhs)
    }
}

/// Which spectral term: `+` absorbs `ω`, `-` emits it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Projections of `F^{±μν}` for a particle at `(κ, u = cos θ)`.
pub(crate) fn projections(kappa: f64, u: f64, q: f64, branch: Branch) -> Components {
    let along = kappa * u + 0.5 * q;
    Components {
        tt: 1.0,
        ts: -branch.sign() * along / q,
        l: along * along,
        t: 0.5 * kappa * kappa * (1.0 - u * u),
    }
}

/// Numerical settings shared by the response evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseOptions {
    pub tol: Tolerance,
    /// Modes closer than this (in `z`) to a continuum edge are flagged.
    pub edge_band: f64,
}

impl Default for ResponseOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            edge_band: 1e-4,
        }
    }
}

/// All tensor blocks at one mode, in units of `g0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseBlocks {
    pub mode: Mode,
    pub lindhard: Components,
    pub r_plus: Components,
    pub r_minus: Components,
    /// Largest quadrature error estimate among the components.
    pub error_estimate: f64,
    /// Set when the mode lies inside the edge-exclusion band of a Fermi sea,
    /// where the radial quadrature converges slowly.
    pub near_edge: bool,
}

impl ResponseBlocks {
    /// `S+ = R+ + R-`.
    pub fn s_plus(&self) -> Components {
        self.r_plus + self.r_minus
    }

    /// `S- = R+ - R-`.
    pub fn s_minus(&self) -> Components {
        self.r_plus - self.r_minus
    }

    /// Multiplies every block by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            lindhard: self.lindhard * factor,
            r_plus: self.r_plus * factor,
            r_minus: self.r_minus * factor,
            ..*self
        }
    }
}

/// Spectral and principal-value blocks at `mode`.
pub fn response_blocks(gas: &InternalGas, mode: Mode, opts: &ResponseOptions) -> Result<ResponseBlocks> {
    let spectral = spectral_blocks(gas, mode, opts)?;
    let principal = lindhard_blocks(gas, mode, opts)?;
    Ok(ResponseBlocks {
        mode,
        lindhard: principal.lindhard,
        r_plus: spectral.r_plus,
        r_minus: spectral.r_minus,
        error_estimate: spectral.error_estimate.max(principal.error_estimate),
        near_edge: principal.near_edge,
    })
}

/// `ln|(1 - a)/(1 + a)|`, accurate for large `|a|`.
pub(crate) fn log_ratio(a: f64) -> f64 {
    if a.abs() < 1.0 {
        -2.0 * libm::atanh(a)
    } else {
        -2.0 * libm::atanh(1.0 / a)
    }
}

fn check_static_q(q: f64) -> Result<()> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "Q",
            reason: "wave number must be positive and finite",
        });
    }
    if q == 2.0 {
        return Err(Error::SingularInput("static brackets have a log singularity at Q = 2"));
    }
    Ok(())
}

/// Static zero-temperature brackets for the density (units `g0`) and the
/// transverse current (units `gT`), exactly as they appear in the static
/// equations of motion:
///
/// ```text
/// (1/Q - Q/4) ln|(2-Q)/(2+Q)| - 1
/// Q²/16 + (1/Q)(1 - Q²/4)² ln|(2-Q)/(2+Q)| - 5/12
/// ```
///
/// The density bracket is the static Lindhard function. The transverse one
/// does not match the static transverse response; see
/// [`transverse_static_bracket`].
pub fn static_closed_forms(q: f64) -> Result<(f64, f64)> {
    check_static_q(q)?;
    let ln = log_ratio(0.5 * q);
    let density = (1.0 / q - 0.25 * q) * ln - 1.0;
    let w = 1.0 - 0.25 * q * q;
    let transverse = q * q / 16.0 + w * w * ln / q - 5.0 / 12.0;
    Ok((density, transverse))
}

/// Static density bracket continued to `Q = 2` (value `-1`) and `Q -> 0`
/// (value `-2`).
pub fn density_static_bracket(q: f64) -> f64 {
    if q == 0.0 {
        return -2.0;
    }
    if q == 2.0 {
        return -1.0;
    }
    (1.0 / q - 0.25 * q) * log_ratio(0.5 * q) - 1.0
}

/// Static transverse paramagnetic response `L^T(Q, 0)` in units of `gT`,
///
/// ```text
/// Q²/16 + (1/4Q)(1 - Q²/4)² ln|(2-Q)/(2+Q)| - 5/12
/// ```
///
/// which tends to `-2/3` (minus the density) as `Q -> 0`. Continuous at
/// `Q = 2` (value `-1/6`).
pub fn transverse_static_bracket(q: f64) -> f64 {
    if q == 0.0 {
        return -2.0 / 3.0;
    }
    let w = 1.0 - 0.25 * q * q;
    let log_term = if q == 2.0 {
        0.0
    } else {
        w * w * log_ratio(0.5 * q) / (4.0 * q)
    };
    q * q / 16.0 + log_term - 5.0 / 12.0
}
