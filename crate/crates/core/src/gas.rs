//! Gas specification, occupation numbers and the internal unit system.
//!
//! A [`GasSpec`] is given in units with `ħ = m = 1` and an arbitrary energy
//! scale. [`GasSpec::to_internal`] rescales it so that the characteristic
//! wave vector `k_gas` equals one, which is the convention every other
//! module works in.

use core::f64::consts::PI;

use crate::quadrature::{integrate_adaptive, Tolerance};
use crate::{Error, Result};

/// Exchange statistics, carrying the sign `ξ` of the occupation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Fermion,
    Boson,
}

impl Statistics {
    /// `ξ = -1` for fermions, `+1` for bosons.
    pub fn xi(self) -> f64 {
        match self {
            Statistics::Fermion => -1.0,
            Statistics::Boson => 1.0,
        }
    }
}

/// Homogeneous ideal gas in equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasSpec {
    statistics: Statistics,
    spin_degeneracy: u32,
    temperature: f64,
    chemical_potential: f64,
}

impl GasSpec {
    pub fn new(
        statistics: Statistics,
        spin_degeneracy: u32,
        temperature: f64,
        chemical_potential: f64,
    ) -> Result<Self> {
        if spin_degeneracy == 0 {
            return Err(Error::InvalidSpec {
                field: "n_s",
                reason: "spin degeneracy must be at least 1",
            });
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::InvalidSpec {
                field: "temperature",
                reason: "must be finite and nonnegative",
            });
        }
        if !chemical_potential.is_finite() {
            return Err(Error::InvalidSpec {
                field: "mu",
                reason: "must be finite",
            });
        }
        match statistics {
            Statistics::Boson if temperature == 0.0 => {
                return Err(Error::InvalidSpec {
                    field: "temperature",
                    reason: "bosons without condensate need T > 0",
                })
            }
            Statistics::Boson if chemical_potential >= 0.0 => {
                return Err(Error::InvalidSpec {
                    field: "mu",
                    reason: "must be negative for bosons (occupation diverges)",
                })
            }
            Statistics::Fermion if temperature == 0.0 && chemical_potential <= 0.0 => {
                return Err(Error::InvalidSpec {
                    field: "mu",
                    reason: "must be positive for a zero-temperature Fermi sea",
                })
            }
            _ => {}
        }
        Ok(Self {
            statistics,
            spin_degeneracy,
            temperature,
            chemical_potential,
        })
    }

    /// Zero-temperature Fermi sea with Fermi wave vector `k_fermi`.
    pub fn fermi_sea(spin_degeneracy: u32, k_fermi: f64) -> Result<Self> {
        Self::new(Statistics::Fermion, spin_degeneracy, 0.0, 0.5 * k_fermi * k_fermi)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn spin_degeneracy(&self) -> u32 {
        self.spin_degeneracy
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn chemical_potential(&self) -> f64 {
        self.chemical_potential
    }

    /// True for the zero-temperature Fermi sea, where occupations are a step.
    pub fn is_fermi_sea(&self) -> bool {
        self.statistics == Statistics::Fermion && self.temperature == 0.0
    }

    /// Mean occupation of a single-particle state with wave number `kappa`,
    /// `1 / (exp(β(κ²/2 - μ)) - ξ)`.
    pub fn occupation(&self, kappa: f64) -> f64 {
        let excess = 0.5 * kappa * kappa - self.chemical_potential;
        if self.temperature == 0.0 {
            // Only fermions reach here: the indicator of κ < k_F.
            return if excess < 0.0 { 1.0 } else { 0.0 };
        }
        let x = excess / self.temperature;
        match self.statistics {
            Statistics::Fermion => {
                if x > 0.0 {
                    let e = libm::exp(-x);
                    e / (1.0 + e)
                } else {
                    1.0 / (1.0 + libm::exp(x))
                }
            }
            Statistics::Boson => 1.0 / libm::expm1(x),
        }
    }

    /// `n_κ (1 + ξ n_κ')`: Pauli blocking or Bose enhancement of a transition
    /// from `kappa` to `kappa_final`.
    pub fn transition_factor(&self, kappa: f64, kappa_final: f64) -> f64 {
        self.occupation(kappa) * (1.0 + self.statistics.xi() * self.occupation(kappa_final))
    }

    pub(crate) fn fermi_wave_vector(&self) -> Option<f64> {
        (self.chemical_potential > 0.0).then(|| libm::sqrt(2.0 * self.chemical_potential))
    }

    /// Particle density `n_s ∫ d³k/(2π)³ n_k`.
    pub fn density(&self, tol: &Tolerance) -> Result<f64> {
        let radial = |k: f64| k * k * self.occupation(k);
        let result = if self.is_fermi_sea() {
            let kf = self.fermi_wave_vector().unwrap_or(0.0);
            integrate_adaptive(radial, 0.0, kf, &[], tol)?
        } else {
            let splits: &[f64] = match self.fermi_wave_vector() {
                Some(kf) => &[kf],
                None => &[],
            };
            integrate_adaptive(radial, 0.0, f64::INFINITY, splits, tol)?
        };
        Ok(self.spin_degeneracy as f64 * result.value / (2.0 * PI * PI))
    }

    /// Characteristic wave vector of the occupation function: `k_F` for
    /// fermions (at finite temperature, the `k_F` of a zero-temperature gas
    /// of equal density) and `sqrt(T)` for bosons.
    pub fn k_gas(&self, tol: &Tolerance) -> Result<f64> {
        match self.statistics {
            Statistics::Boson => Ok(libm::sqrt(self.temperature)),
            Statistics::Fermion if self.temperature == 0.0 => Ok(libm::sqrt(2.0 * self.chemical_potential)),
            Statistics::Fermion => {
                let n = self.density(tol)?;
                Ok(libm::cbrt(6.0 * PI * PI * n / self.spin_degeneracy as f64))
            }
        }
    }

    /// Rescales to internal units where `k_gas = 1`.
    pub fn to_internal(&self, tol: &Tolerance) -> Result<InternalGas> {
        let k_gas = self.k_gas(tol)?;
        let energy = k_gas * k_gas;
        Ok(InternalGas {
            spec: GasSpec {
                temperature: self.temperature / energy,
                chemical_potential: self.chemical_potential / energy,
                ..*self
            },
            k_gas,
        })
    }
}

/// A gas expressed in internal units (`ħ = m = k_gas = 1`), together with
/// the physical `k_gas` needed to convert back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalGas {
    spec: GasSpec,
    k_gas: f64,
}

impl InternalGas {
    /// The rescaled specification.
    pub fn spec(&self) -> &GasSpec {
        &self.spec
    }

    /// `k_gas` in the units of the original specification.
    pub fn k_gas(&self) -> f64 {
        self.k_gas
    }

    pub fn statistics(&self) -> Statistics {
        self.spec.statistics
    }

    pub fn occupation(&self, kappa: f64) -> f64 {
        self.spec.occupation(kappa)
    }

    pub fn transition_factor(&self, kappa: f64, kappa_final: f64) -> f64 {
        self.spec.transition_factor(kappa, kappa_final)
    }

    pub fn is_fermi_sea(&self) -> bool {
        self.spec.is_fermi_sea()
    }

    /// Upper end of radial integrals: the Fermi surface for a Fermi sea,
    /// infinity otherwise.
    pub fn radial_cutoff(&self) -> f64 {
        if self.spec.is_fermi_sea() {
            1.0
        } else {
            f64::INFINITY
        }
    }

    /// Response-function unit `g0 = n_s / 4π²` (internal units).
    pub fn g0(&self) -> f64 {
        self.spec.spin_degeneracy as f64 / (4.0 * PI * PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::new(1e-12, 1e-15, 400_000).unwrap()
    }

    #[test]
    fn fermi_sea_step() {
        let gas = GasSpec::fermi_sea(2, 1.0).unwrap();
        assert_eq!(gas.occupation(0.5), 1.0);
        assert_eq!(gas.occupation(1.5), 0.0);
    }

    #[test]
    fn boson_occupation_arithmetic() {
        // β(κ²/2 - μ) = ln 2 gives n = 1/(2 - 1) = 1.
        let mu = -0.25;
        let gas = GasSpec::new(Statistics::Boson, 1, 1.0, mu).unwrap();
        let kappa = libm::sqrt(2.0 * (libm::log(2.0) + mu));
        assert!((gas.occupation(kappa) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ground_state_density() {
        let two = GasSpec::fermi_sea(2, 1.0).unwrap().density(&tol()).unwrap();
        assert!((two - 1.0 / (3.0 * PI * PI)).abs() < 1e-15);
        let one = GasSpec::fermi_sea(1, 1.0).unwrap().density(&tol()).unwrap();
        assert!((one - 0.5 * two).abs() < 1e-16);
    }

    #[test]
    fn invalid_specs_name_the_field() {
        let e = GasSpec::new(Statistics::Boson, 1, 1.0, 0.1).unwrap_err();
        assert!(matches!(e, Error::InvalidSpec { field: "mu", .. }));
        let e = GasSpec::new(Statistics::Fermion, 0, 0.0, 0.5).unwrap_err();
        assert!(matches!(e, Error::InvalidSpec { field: "n_s", .. }));
        let e = GasSpec::new(Statistics::Boson, 1, 0.0, -1.0).unwrap_err();
        assert!(matches!(
            e,
            Error::InvalidSpec {
                field: "temperature",
                ..
            }
        ));
    }

    #[test]
    fn k_gas_conventions() {
        assert_eq!(GasSpec::fermi_sea(2, 1.0).unwrap().k_gas(&tol()).unwrap(), 1.0);
        let boson = GasSpec::new(Statistics::Boson, 1, 2.5, -1.0).unwrap();
        assert!((boson.k_gas(&tol()).unwrap() - libm::sqrt(2.5)).abs() < 1e-15);
    }

    #[test]
    fn finite_temperature_fermion_k_gas_matches_equal_density_sea() {
        let warm = GasSpec::new(Statistics::Fermion, 2, 0.1, 0.45).unwrap();
        let n = warm.density(&tol()).unwrap();
        let kf = warm.k_gas(&tol()).unwrap();
        let cold = GasSpec::fermi_sea(2, kf).unwrap().density(&tol()).unwrap();
        assert!((n - cold).abs() < 1e-12 * n);
    }

    #[test]
    fn internal_units_have_unit_k_gas() {
        let boson = GasSpec::new(Statistics::Boson, 1, 4.0, -2.0).unwrap();
        let internal = boson.to_internal(&tol()).unwrap();
        assert_eq!(internal.k_gas(), 2.0);
        assert!((internal.spec().k_gas(&tol()).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(internal.spec().chemical_potential(), -0.5);
    }
}
