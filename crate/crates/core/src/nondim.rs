//! Dimensionless groups: Pr = nu/kappa, heat Rayleigh number
//! R = g alpha d^5 gamma / (kappa^2 nu) with gamma = H/(rho c), and the
//! temperature difference T~ = (kappa/(gamma d^2)) (T1 - T2). Units of
//! time, length and temperature are d^2/kappa, d and gamma d^2/kappa.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// kinematic viscosity [m^2/s]
    pub nu: f64,
    /// thermal diffusivity [m^2/s]
    pub kappa: f64,
    /// gravity [m/s^2]
    pub g: f64,
    /// thermal expansion coefficient [1/K]
    pub alpha: f64,
    /// layer depth [m]
    pub d: f64,
    /// volumetric heat flux [W/m^3]
    pub heat_flux: f64,
    /// density [kg/m^3]
    pub rho: f64,
    /// specific heat [J/(kg K)]
    pub specific_heat: f64,
    /// upper plate temperature [K]
    pub t1: f64,
    /// lower plate temperature [K]
    pub t2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub prandtl: f64,
    pub rayleigh: f64,
    pub t_tilde: f64,
    /// d^2/kappa [s]
    pub time_scale: f64,
    /// d [m]
    pub length_scale: f64,
    /// gamma d^2/kappa [K]
    pub temperature_scale: f64,
}

pub fn derive(p: &PhysicalParams) -> Result<DimensionlessParams> {
    for (name, v) in [
        ("nu", p.nu),
        ("kappa", p.kappa),
        ("d", p.d),
        ("rho", p.rho),
        ("specific_heat", p.specific_heat),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
        }
    }
    let gamma = p.heat_flux / (p.rho * p.specific_heat);
    if gamma == 0.0 {
        return Err(Error::DegenerateSource);
    }
    let d2 = p.d * p.d;
    Ok(DimensionlessParams {
        prandtl: p.nu / p.kappa,
        rayleigh: p.g * p.alpha * p.d.powi(5) * gamma / (p.kappa * p.kappa * p.nu),
        t_tilde: p.kappa / (gamma * d2) * (p.t1 - p.t2),
        time_scale: d2 / p.kappa,
        length_scale: p.d,
        temperature_scale: gamma * d2 / p.kappa,
    })
}
