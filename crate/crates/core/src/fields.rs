//! Reconstruction of the stream-function derivative and the velocity
//! components from the mode series, plus gridded field snapshots.
//!
//! Every formula shares the mode integral
//! I(xi) = int_0^xi eta^{-3/2} sum_n PhiBar_n J_{3/2}(mu_n eta)/[J'_n]^2 deta,
//! whose integrand extends continuously to eta = 0 through the scaled
//! Bessel form. u = 2rz/(xi xi0^2) I, v = -2r^2/(xi xi0^2) I and
//! dpsi/dxi = -2r^2/xi0^2 I.

use crate::bessel::{find_roots, j_three_half_scaled, RootTable};
use crate::config::{GridSpec, SimulationConfig};
use crate::heat::{self, HeatSolution};
use crate::interp::CubicSpline;
use crate::poly::{RadialPolynomial, TimePolynomial};
use crate::quad;
use crate::vorticity::{self, VorticityField};
use crate::{Error, Result};
use std::path::Path;

/// sum_n PhiBar_n mu_n^{3/2} j32s(mu_n xi) / [J'_n]^2, i.e. the series of
/// the inverse transform times xi^{-3/2}, finite down to xi = 0.
fn scaled_series(v: &VorticityField, xi: f64) -> Result<f64> {
    let roots = v.coeffs().roots();
    let mut sum = 0.0;
    for n in 0..roots.len() {
        let mu = roots.roots()[n];
        let dj = roots.deriv_at_root()[n];
        sum += v.coeffs().values()[n] * mu.powf(1.5) * j_three_half_scaled(mu * xi)? / (dj * dj);
    }
    Ok(sum)
}

/// I(xi) by adaptive quadrature, panels seeded at the highest-mode zeros.
pub fn mode_integral(v: &VorticityField, xi: f64, quad_tol: f64) -> Result<f64> {
    let roots = v.coeffs().roots();
    let xi0 = roots.xi0();
    if !(0.0..=xi0 * (1.0 + 1e-12)).contains(&xi) || !xi.is_finite() {
        return Err(Error::Domain(format!("xi = {xi} outside [0, {xi0}]")));
    }
    if xi == 0.0 {
        return Ok(0.0);
    }
    let last = roots.len() - 1;
    let mu_last = roots.roots()[last];
    let breaks: Vec<f64> = (0..last).map(|k| roots.roots()[k] * xi0 / mu_last).collect();
    quad::integrate_with_breakpoints(
        |eta| scaled_series(v, eta).unwrap_or(f64::NAN),
        0.0,
        xi.min(xi0),
        &breaks,
        quad_tol,
    )
}

/// Tabulated I(xi) on a Chebyshev-spaced grid with cubic interpolation,
/// for gridded snapshots. Immutable once built.
#[derive(Debug, Clone)]
pub struct ModeIntegralTable {
    spline: CubicSpline,
    xi0: f64,
}

impl ModeIntegralTable {
    pub fn build(v: &VorticityField, points: usize, quad_tol: f64) -> Result<Self> {
        let xi0 = v.coeffs().roots().xi0();
        let m = points.max(8);
        // Chebyshev extreme points mapped to [0, xi0], ascending
        let xs: Vec<f64> = (0..m)
            .map(|j| xi0 * 0.5 * (1.0 - (std::f64::consts::PI * j as f64 / (m - 1) as f64).cos()))
            .collect();
        let seg_tol = quad_tol / m as f64;
        let mut ys = Vec::with_capacity(m);
        let mut acc = 0.0;
        ys.push(0.0);
        for w in xs.windows(2) {
            acc += quad::integrate(|eta| scaled_series(v, eta).unwrap_or(f64::NAN), w[0], w[1], seg_tol)?;
            ys.push(acc);
        }
        Ok(Self { spline: CubicSpline::new(xs, ys)?, xi0 })
    }

    pub fn eval(&self, xi: f64) -> f64 {
        self.spline.eval(xi)
    }
}

/// Source of I(xi) values: pointwise quadrature or the prebuilt table.
pub enum ModeIntegralEval<'a> {
    Direct { field: &'a VorticityField, quad_tol: f64 },
    Table(&'a ModeIntegralTable),
}

impl ModeIntegralEval<'_> {
    fn xi0(&self) -> f64 {
        match self {
            ModeIntegralEval::Direct { field, .. } => field.coeffs().roots().xi0(),
            ModeIntegralEval::Table(t) => t.xi0,
        }
    }

    fn eval(&self, xi: f64) -> Result<f64> {
        match self {
            ModeIntegralEval::Direct { field, quad_tol } => mode_integral(field, xi, *quad_tol),
            ModeIntegralEval::Table(t) => Ok(t.eval(xi)),
        }
    }
}

/// (u, v) at (r, z). Both components vanish on the axis and at the origin.
pub fn velocity(src: &ModeIntegralEval, r: f64, z: f64) -> Result<(f64, f64)> {
    let xi0 = src.xi0();
    let xi = (r * r + z * z).sqrt();
    if xi > xi0 * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("xi = {xi} outside [0, {xi0}]")));
    }
    if xi == 0.0 || r == 0.0 {
        return Ok((0.0, 0.0));
    }
    let i = src.eval(xi)?;
    let common = 2.0 * r / (xi * xi0 * xi0) * i;
    Ok((z * common, -r * common))
}

/// dpsi/dxi = -2 r^2 / xi0^2 * I(xi), with r held as a parameter.
pub fn stream_derivative(src: &ModeIntegralEval, r: f64, xi: f64) -> Result<f64> {
    let xi0 = src.xi0();
    if !(0.0..=xi0 * (1.0 + 1e-12)).contains(&xi) || !xi.is_finite() {
        return Err(Error::Domain(format!("xi = {xi} outside [0, {xi0}]")));
    }
    if r == 0.0 || xi == 0.0 {
        return Ok(0.0);
    }
    Ok(-2.0 * r * r / (xi0 * xi0) * src.eval(xi)?)
}

/// Gridded (r, z) fields at one time. Points with xi > xi0 are masked out.
#[derive(Debug, Clone)]
pub struct FlowFieldSnapshot {
    pub t: f64,
    pub r: Vec<f64>,
    pub z: Vec<f64>,
    /// row-major over (r, z): index = i_r * z.len() + i_z
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub omega: Vec<f64>,
    pub temperature: Vec<f64>,
    pub mask: Vec<bool>,
}

impl FlowFieldSnapshot {
    pub fn idx(&self, i_r: usize, i_z: usize) -> usize {
        i_r * self.z.len() + i_z
    }
}

fn axis(n: usize, max: f64) -> Vec<f64> {
    if n == 1 {
        vec![max]
    } else {
        (0..n).map(|i| max * i as f64 / (n - 1) as f64).collect()
    }
}

/// Fully assembled analytical solution for one configuration: root table,
/// heat carrier polynomial, initial mode coefficients and per-mode forcing
/// polynomials. Snapshots at any time derive from this.
pub struct SolvedState {
    pub roots: RootTable,
    pub heat_p0: RadialPolynomial,
    pub phi0: Vec<f64>,
    pub forcing: Vec<TimePolynomial>,
    pub prandtl: f64,
    pub rayleigh: f64,
    pub t_tilde: f64,
    pub quad_tol: f64,
    /// max residual of the CSV-temperature polynomial fit, when applicable
    pub fit_residual: Option<f64>,
}

impl SolvedState {
    pub fn from_config(cfg: &SimulationConfig, base_dir: &Path) -> Result<Self> {
        cfg.validate()?;
        let (prandtl, rayleigh, t_tilde) = cfg.dimensionless()?;
        let roots = find_roots(cfg.xi0, cfg.modes)?;
        let (heat_p0, fit_residual) = cfg.heat_polynomial(base_dir)?;
        let omega0 = cfg.vorticity_profile(base_dir)?;
        let quad_tol = cfg.tolerances.quad_tol;
        let phi0 = vorticity::initial_mode_coeffs(&omega0, &roots, quad_tol)?;
        let forcing = vorticity::upsilon_time_polys(&heat_p0, &roots, rayleigh, quad_tol)?;
        Ok(Self {
            roots,
            heat_p0,
            phi0,
            forcing,
            prandtl,
            rayleigh,
            t_tilde,
            quad_tol,
            fit_residual,
        })
    }

    pub fn heat_at(&self, t: f64) -> Result<HeatSolution> {
        heat::evolve(&self.heat_p0, t)
    }

    pub fn vorticity_at(&self, t: f64) -> Result<VorticityField> {
        vorticity::evolve_modes(&self.roots, &self.phi0, &self.forcing, self.prandtl, t)
    }

    pub fn snapshot(&self, grid: &GridSpec, t: f64) -> Result<FlowFieldSnapshot> {
        let heat_sol = self.heat_at(t)?;
        let vfield = self.vorticity_at(t)?;
        let table = ModeIntegralTable::build(&vfield, 512, self.quad_tol)?;
        let src = ModeIntegralEval::Table(&table);

        let rs = axis(grid.n_r, grid.r_max);
        let zs = axis(grid.n_z, grid.z_max);
        let len = rs.len() * zs.len();
        let mut snap = FlowFieldSnapshot {
            t,
            r: rs.clone(),
            z: zs.clone(),
            u: vec![0.0; len],
            v: vec![0.0; len],
            omega: vec![0.0; len],
            temperature: vec![0.0; len],
            mask: vec![false; len],
        };
        let xi0 = self.roots.xi0();
        for (i_r, &r) in rs.iter().enumerate() {
            for (i_z, &z) in zs.iter().enumerate() {
                let k = i_r * zs.len() + i_z;
                let xi = (r * r + z * z).sqrt();
                if xi > xi0 * (1.0 + 1e-12) {
                    continue; // masked
                }
                let ctx = |e: Error| {
                    Error::Domain(format!("at lattice point (r={r}, z={z}): {e}"))
                };
                let (u, v) = velocity(&src, r, z).map_err(ctx)?;
                snap.u[k] = u;
                snap.v[k] = v;
                snap.omega[k] = vorticity::omega_field(&vfield, r, z).map_err(ctx)?;
                // temperature has a genuine 1/xi pole at the origin when the
                // evolved carrier picks up a constant term; record NaN there
                snap.temperature[k] = if xi == 0.0 {
                    heat::temperature(&heat_sol, 0.0).unwrap_or(f64::NAN)
                } else {
                    heat::temperature(&heat_sol, xi).map_err(ctx)?
                };
                snap.mask[k] = true;
            }
        }
        Ok(snap)
    }
}

/// One-call snapshot assembly from a configuration.
pub fn snapshot(cfg: &SimulationConfig, t: f64, base_dir: &Path) -> Result<FlowFieldSnapshot> {
    SolvedState::from_config(cfg, base_dir)?.snapshot(&cfg.grid, t)
}
