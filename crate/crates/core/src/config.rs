//! Run configuration: a versioned TOML file plus optional CSV initial
//! profiles (columns `xi,value`).

use crate::hankel::RadialProfile;
use crate::heat::{self, PolynomialFit};
use crate::nondim::{self, PhysicalParams};
use crate::poly::RadialPolynomial;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_r: usize,
    pub n_z: usize,
    pub r_max: f64,
    pub z_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    #[serde(default = "default_ode_tol")]
    pub ode_tol: f64,
}

fn default_quad_tol() -> f64 {
    1e-10
}

fn default_ode_tol() -> f64 {
    1e-9
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { quad_tol: default_quad_tol(), ode_tol: default_ode_tol() }
    }
}

/// Initial profile: polynomial coefficients in xi (ascending powers) or a
/// path to a CSV file with `xi,value` rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialData {
    Polynomial { polynomial: Vec<f64> },
    Csv { csv: PathBuf },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub config_version: u32,
    /// Either physical parameters (nondimensionalized internally) ...
    #[serde(skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalParams>,
    /// ... or the dimensionless groups directly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prandtl: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rayleigh: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_tilde: Option<f64>,
    pub xi0: f64,
    pub modes: usize,
    pub grid: GridSpec,
    pub times: Vec<f64>,
    /// T0(xi); multiplied by xi internally to form the series carrier.
    pub initial_temperature: InitialData,
    /// Omega0(xi) = (omega/r) at t = 0.
    pub initial_vorticity: InitialData,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Fit degree for CSV temperature profiles.
    #[serde(default = "default_fit_degree")]
    pub fit_degree: usize,
}

fn default_fit_degree() -> usize {
    8
}

impl SimulationConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: SimulationConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.config_version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "config_version {} unsupported (expected {CONFIG_VERSION})",
                self.config_version
            )));
        }
        if !(self.xi0 > 0.0) || !self.xi0.is_finite() {
            return Err(Error::Config(format!("xi0 = {} must be positive", self.xi0)));
        }
        if self.modes < 1 {
            return Err(Error::Config("modes must be >= 1".into()));
        }
        if self.grid.n_r < 1 || self.grid.n_z < 1 {
            return Err(Error::Config("grid must have at least one point per axis".into()));
        }
        if self.grid.r_max < 0.0 || self.grid.z_max < 0.0 {
            return Err(Error::Config("grid extents must be nonnegative".into()));
        }
        let reach = (self.grid.r_max.powi(2) + self.grid.z_max.powi(2)).sqrt();
        if reach > self.xi0 * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "grid corner xi = {reach} exceeds xi0 = {}",
                self.xi0
            )));
        }
        if self.times.is_empty() {
            return Err(Error::Config("at least one output time required".into()));
        }
        if self.times.iter().any(|&t| !(t >= 0.0) || !t.is_finite()) {
            return Err(Error::Config("times must be finite and nonnegative".into()));
        }
        if self.times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Config("times must be sorted ascending".into()));
        }
        match (&self.physical, self.prandtl) {
            (None, None) => {
                return Err(Error::Config("give either [physical] or prandtl/rayleigh".into()))
            }
            (Some(_), Some(_)) => {
                return Err(Error::Config("give [physical] or prandtl/rayleigh, not both".into()))
            }
            _ => {}
        }
        if self.physical.is_none() {
            if !(self.prandtl.unwrap() > 0.0) {
                return Err(Error::Config("prandtl must be positive".into()));
            }
            if self.rayleigh.is_none() {
                return Err(Error::Config("rayleigh required alongside prandtl".into()));
            }
        }
        Ok(())
    }

    /// (Pr, R, T~) either direct or derived from the physical block.
    pub fn dimensionless(&self) -> Result<(f64, f64, f64)> {
        if let Some(p) = &self.physical {
            let d = nondim::derive(p)?;
            Ok((d.prandtl, d.rayleigh, d.t_tilde))
        } else {
            Ok((self.prandtl.unwrap(), self.rayleigh.unwrap(), self.t_tilde.unwrap_or(0.0)))
        }
    }

    /// xi * T0(xi) as the polynomial carrier of the heat series. CSV data
    /// is projected; the fit residual is returned for the run metadata.
    pub fn heat_polynomial(&self, base_dir: &Path) -> Result<(RadialPolynomial, Option<f64>)> {
        match &self.initial_temperature {
            InitialData::Polynomial { polynomial } => {
                let mut coeffs = vec![0.0];
                coeffs.extend_from_slice(polynomial);
                Ok((RadialPolynomial::new(coeffs, self.xi0)?, None))
            }
            InitialData::Csv { csv } => {
                let profile = read_csv_profile(&base_dir.join(csv))?;
                if profile.xi0() != self.xi0 {
                    return Err(Error::DomainMismatch { left: profile.xi0(), right: self.xi0 });
                }
                let xi0 = self.xi0;
                let lifted =
                    RadialProfile::from_fn(xi0, move |xi| xi * profile.eval(xi))?;
                let PolynomialFit { poly, max_residual } =
                    heat::project_to_polynomial(&lifted, self.fit_degree, 256)?;
                Ok((poly, Some(max_residual)))
            }
        }
    }

    pub fn vorticity_profile(&self, base_dir: &Path) -> Result<RadialProfile> {
        match &self.initial_vorticity {
            InitialData::Polynomial { polynomial } => {
                let poly = RadialPolynomial::new(polynomial.clone(), self.xi0)?;
                RadialProfile::from_fn(self.xi0, move |xi| poly.eval(xi))
            }
            InitialData::Csv { csv } => {
                let profile = read_csv_profile(&base_dir.join(csv))?;
                if profile.xi0() != self.xi0 {
                    return Err(Error::DomainMismatch { left: profile.xi0(), right: self.xi0 });
                }
                Ok(profile)
            }
        }
    }
}

/// Read a two-column `xi,value` CSV (header row optional).
pub fn read_csv_profile(path: &Path) -> Result<RadialProfile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut xi = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let (a, b) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""));
        match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
            (Ok(x), Ok(v)) => {
                xi.push(x);
                values.push(v);
            }
            _ if lineno == 0 => {} // header
            _ => {
                return Err(Error::Config(format!(
                    "{}:{}: expected `xi,value`, got `{line}`",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    RadialProfile::from_samples(xi, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn base_config() -> SimulationConfig {
        SimulationConfig {
            config_version: CONFIG_VERSION,
            physical: None,
            prandtl: Some(1.0),
            rayleigh: Some(1.0),
            t_tilde: Some(0.0),
            xi0: 1.0,
            modes: 10,
            grid: GridSpec { n_r: 5, n_z: 5, r_max: 0.5, z_max: 0.5 },
            times: vec![0.0, 0.1],
            initial_temperature: InitialData::Polynomial { polynomial: vec![0.0, 0.0, 1.0] },
            initial_vorticity: InitialData::Polynomial { polynomial: vec![0.0] },
            tolerances: Tolerances::default(),
            fit_degree: 8,
        }
    }

    #[test]
    fn valid_config_passes() {
        base_config().validate().unwrap();
    }

    #[test]
    fn rejects_grid_outside_domain() {
        let cfg = SimulationConfig {
            grid: GridSpec { n_r: 2, n_z: 2, r_max: 0.9, z_max: 0.9 },
            ..base_config()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_unsorted_times() {
        let cfg = SimulationConfig { times: vec![0.5, 0.1], ..base_config() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_missing_parameters() {
        let cfg = SimulationConfig { prandtl: None, rayleigh: None, ..base_config() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn heat_polynomial_shifts_by_xi() {
        // T0 = xi^2 -> carrier xi T0 = xi^3
        let (p, residual) = base_config().heat_polynomial(Path::new(".")).unwrap();
        assert_eq!(p.coeffs(), &[0.0, 0.0, 0.0, 1.0]);
        assert!(residual.is_none());
    }

    #[test]
    fn toml_roundtrip() {
        let text = r#"
config_version = 1
prandtl = 0.7
rayleigh = 100.0
xi0 = 1.0
modes = 50
times = [0.0, 0.5]
initial_temperature = { polynomial = [0.0, 1.0, -1.0] }
initial_vorticity = { polynomial = [1.0, 0.0, -1.0] }

[grid]
n_r = 20
n_z = 20
r_max = 0.6
z_max = 0.6
"#;
        let cfg: SimulationConfig = toml::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.modes, 50);
        assert_abs_diff_eq!(cfg.tolerances.quad_tol, 1e-10);
        let (pr, ra, tt) = cfg.dimensionless().unwrap();
        assert_eq!((pr, ra, tt), (0.7, 100.0, 0.0));
    }

    #[test]
    fn csv_profile_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("profile.csv");
        std::fs::write(&path, "xi,value\n0.0,0.0\n0.5,0.25\n1.0,1.0\n").unwrap();
        let p = read_csv_profile(&path).unwrap();
        assert_eq!(p.xi0(), 1.0);
        assert_abs_diff_eq!(p.eval(0.5), 0.25, epsilon = 1e-14);

        std::fs::write(&path, "0.0,0.0\nbad line\n").unwrap();
        assert!(read_csv_profile(&path).is_err());
    }
}
