//! Closed-time-path (CTP) response of an ideal quantum gas.
//!
//! The crate evaluates the particle-hole response tensor of a noninteracting
//! Fermi or Bose gas in the doubled-contour formalism: the principal-value
//! Lindhard tensor `L`, the spectral tensors `R±` and their combinations
//! `S± = R+ ± R-`, the 2x2 CTP block matrix and the retarded propagator
//! `G^r = -L + iS-`. On top of those it provides
//!
//! * the bare-action kernels of the current and the single-mode moments
//!   ([`bare_action`]),
//! * the decoherence / consistency measures `D^tt`, `D^T` on `(Q, z)` grids
//!   and along the environment mass shell ([`decoherence`]),
//! * the hydrodynamic-limit coefficients, the linearised equation of motion
//!   and the static spreading of a Gaussian source ([`hydro`]).
//!
//! Everything runs in dimensionless internal units `ħ = m = k_gas = 1`, where
//! `k_gas` is the Fermi wave vector for fermions and the thermal wave vector
//! `sqrt(m k_B T)/ħ` for bosons. Tensor components are reported in units of
//! `g0 = n_s m k_gas / 4π²` (density) and `gT = g0 ħ² k_gas² / m²` (currents),
//! which coincide in internal units.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bare_action;
pub mod decoherence;
mod error;
pub mod gas;
pub mod hydro;
pub mod quadrature;
pub mod response;

pub use error::{Error, Result};
pub use gas::{GasSpec, InternalGas, Statistics};
pub use num_complex::Complex64;
pub use response::{Components, Mode, ResponseBlocks, ResponseOptions};
