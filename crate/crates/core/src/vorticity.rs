//! Per-mode solution of the transformed vorticity equation
//! Pr^{-1} dPhiBar/dt = -mu_n^2 PhiBar - UpsilonBar(t, mu_n):
//! forcing coefficients by quadrature, the mode solution in closed form,
//! and reconstruction of the vorticity field.

use crate::bessel::{j_three_half, j_three_half_scaled, RootTable};
use crate::hankel::{RadialProfile, SpectralCoeffs};
use crate::heat::{self, HeatSolution};
use crate::poly::{RadialPolynomial, TimePolynomial};
use crate::quad;
use crate::{Error, Result};

pub const DEFAULT_ODE_TOL: f64 = 1e-9;

/// One Hankel mode of the vorticity equation.
#[derive(Debug, Clone)]
pub struct ModeState {
    pub root_index: usize,
    pub mu: f64,
    pub phi0: f64,
    pub prandtl: f64,
    pub rayleigh: f64,
}

impl ModeState {
    pub fn new(roots: &RootTable, root_index: usize, phi0: f64, prandtl: f64, rayleigh: f64) -> Result<Self> {
        if root_index == 0 || root_index > roots.len() {
            return Err(Error::InvalidArgument(format!("root index {root_index} out of range")));
        }
        if !(prandtl > 0.0) {
            return Err(Error::InvalidArgument(format!("Pr = {prandtl} must be positive")));
        }
        Ok(Self { root_index, mu: roots.roots()[root_index - 1], phi0, prandtl, rayleigh })
    }
}

/// Spectral vorticity coefficients PhiBar(t, mu_n) at one time.
#[derive(Debug, Clone)]
pub struct VorticityField {
    coeffs: SpectralCoeffs,
    t: f64,
}

impl VorticityField {
    pub fn new(coeffs: SpectralCoeffs, t: f64) -> Result<Self> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidArgument(format!("t = {t} must be finite and nonnegative")));
        }
        if coeffs.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite mode coefficient".into()));
        }
        Ok(Self { coeffs, t })
    }

    pub fn coeffs(&self) -> &SpectralCoeffs {
        &self.coeffs
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

fn breakpoints(roots: &RootTable, n: usize) -> Vec<f64> {
    let mu_n = roots.roots()[n];
    (0..n).map(|k| roots.roots()[k] * roots.xi0() / mu_n).collect()
}

/// PhiBar(0, mu_n) = int_0^{xi0} xi^{5/2} Omega0(xi) J_{3/2}(mu_n xi) dxi,
/// the forward transform of xi^{3/2} Omega0.
pub fn initial_mode_coeffs(omega0: &RadialProfile, roots: &RootTable, quad_tol: f64) -> Result<Vec<f64>> {
    if omega0.xi0() != roots.xi0() {
        return Err(Error::DomainMismatch { left: omega0.xi0(), right: roots.xi0() });
    }
    let mut values = Vec::with_capacity(roots.len());
    for n in 0..roots.len() {
        let mu = roots.roots()[n];
        let v = quad::integrate_with_breakpoints(
            |xi| xi.powf(2.5) * omega0.eval(xi) * j_three_half(mu * xi).unwrap_or(f64::NAN),
            0.0,
            roots.xi0(),
            &breakpoints(roots, n),
            quad_tol,
        )?;
        values.push(v);
    }
    Ok(values)
}

/// UpsilonBar(t, mu_n) = R int_0^{xi0} xi^{3/2} dThat/dxi J_{3/2}(mu_n xi) dxi
/// at the heat solution's own time.
pub fn upsilon(heat: &HeatSolution, roots: &RootTable, rayleigh: f64, quad_tol: f64) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(roots.len());
    for n in 0..roots.len() {
        let mu = roots.roots()[n];
        let v = quad::integrate_with_breakpoints(
            |xi| {
                xi.powf(1.5)
                    * heat::t_hat_derivative(heat, xi).unwrap_or(f64::NAN)
                    * j_three_half(mu * xi).unwrap_or(f64::NAN)
            },
            0.0,
            roots.xi0(),
            &breakpoints(roots, n),
            quad_tol,
        )?;
        values.push(rayleigh * v);
    }
    Ok(values)
}

/// For polynomial heat data the forcing is a polynomial in t per mode:
/// UpsilonBar(t, mu_n) = sum_m t^m (R/m!) int xi^{3/2} d/dxi[D^{2m}p0 / xi]
/// J_{3/2}(mu_n xi) dxi. The quadratures are done once per (mode, m).
pub fn upsilon_time_polys(
    p0: &RadialPolynomial,
    roots: &RootTable,
    rayleigh: f64,
    quad_tol: f64,
) -> Result<Vec<TimePolynomial>> {
    let mut per_order: Vec<Vec<f64>> = Vec::new();
    let mut g = p0.clone();
    let mut inv_fact = 1.0;
    let mut m = 0.0;
    loop {
        if m > 0.0 {
            inv_fact /= m;
        }
        let a0 = g.coeff(0);
        let qprime = heat::polynomial_quotient(&g).derivative();
        let mut row = Vec::with_capacity(roots.len());
        for n in 0..roots.len() {
            let mu = roots.roots()[n];
            let v = quad::integrate_with_breakpoints(
                |xi| {
                    let deriv = -a0 / (xi * xi) + qprime.eval(xi);
                    xi.powf(1.5) * deriv * j_three_half(mu * xi).unwrap_or(f64::NAN)
                },
                0.0,
                roots.xi0(),
                &breakpoints(roots, n),
                quad_tol,
            )?;
            row.push(rayleigh * inv_fact * v);
        }
        per_order.push(row);
        g = g.second_derivative();
        if g.is_zero() {
            break;
        }
        m += 1.0;
    }
    Ok((0..roots.len())
        .map(|n| TimePolynomial::new(per_order.iter().map(|row| row[n]).collect()))
        .collect())
}

/// Forcing term UpsilonBar(tau, mu_n) for one mode.
pub enum Forcing<'a> {
    Zero,
    /// Polynomial in time; the convolution integral is done in closed form.
    Polynomial(&'a TimePolynomial),
    /// Arbitrary rule; the convolution is done by adaptive quadrature with
    /// the given tolerance.
    Callable(&'a (dyn Fn(f64) -> f64 + Sync), f64),
}

// I_m(t) = int_0^t e^{-a(t-tau)} tau^m dtau by the stable upward recursion
// I_0 = (1 - e^{-a t})/a, I_m = (t^m - m I_{m-1})/a.
fn exp_convolution_powers(a: f64, t: f64, orders: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(orders);
    let mut prev = (1.0 - (-a * t).exp()) / a;
    out.push(prev);
    for m in 1..orders {
        prev = (t.powi(m as i32) - m as f64 * prev) / a;
        out.push(prev);
    }
    out
}

/// Exact mode solution
/// PhiBar(t) = PhiBar(0) e^{-Pr mu^2 t} - Pr int_0^t e^{-Pr mu^2 (t-tau)} UpsilonBar(tau) dtau.
pub fn phi_bar(mode: &ModeState, forcing: &Forcing, t: f64) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(format!("t = {t} must be finite and nonnegative")));
    }
    let a = mode.prandtl * mode.mu * mode.mu;
    let decayed = mode.phi0 * (-a * t).exp();
    let convolution = match forcing {
        Forcing::Zero => 0.0,
        Forcing::Polynomial(p) => {
            if t == 0.0 {
                0.0
            } else {
                let powers = exp_convolution_powers(a, t, p.coeffs().len());
                p.coeffs().iter().zip(&powers).map(|(&c, &i)| c * i).sum()
            }
        }
        Forcing::Callable(f, tol) => {
            if t == 0.0 {
                0.0
            } else {
                quad::integrate(|tau| (-a * (t - tau)).exp() * f(tau), 0.0, t, *tol)?
            }
        }
    };
    Ok(decayed - mode.prandtl * convolution)
}

/// Assemble the spectral vorticity state at time t from per-mode initial
/// coefficients and forcing polynomials.
pub fn evolve_modes(
    roots: &RootTable,
    phi0: &[f64],
    forcing: &[TimePolynomial],
    prandtl: f64,
    t: f64,
) -> Result<VorticityField> {
    if phi0.len() != roots.len() || forcing.len() != roots.len() {
        return Err(Error::InvalidArgument("mode count mismatch".into()));
    }
    let mut values = Vec::with_capacity(roots.len());
    for n in 0..roots.len() {
        let mode = ModeState::new(roots, n + 1, phi0[n], prandtl, 0.0)?;
        values.push(phi_bar(&mode, &Forcing::Polynomial(&forcing[n]), t)?);
    }
    VorticityField::new(SpectralCoeffs::new(roots.clone(), values)?, t)
}

/// Vorticity omega(r, z, t) = (2r/xi0^2) xi^{-3/2} sum_n PhiBar_n
/// J_{3/2}(mu_n xi) / [J'_{3/2}(mu_n xi0)]^2, xi = sqrt(r^2 + z^2).
/// Each term is evaluated through the scaled Bessel form, so the removable
/// xi -> 0 factor never overflows.
pub fn omega_field(v: &VorticityField, r: f64, z: f64) -> Result<f64> {
    let roots = v.coeffs.roots();
    let xi0 = roots.xi0();
    let xi = (r * r + z * z).sqrt();
    if xi > xi0 * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("xi = {xi} outside [0, {xi0}]")));
    }
    if r == 0.0 || xi == 0.0 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for n in 0..roots.len() {
        let mu = roots.roots()[n];
        let dj = roots.deriv_at_root()[n];
        sum += v.coeffs.values()[n] * mu.powf(1.5) * j_three_half_scaled(mu * xi)? / (dj * dj);
    }
    Ok(2.0 * r / (xi0 * xi0) * sum)
}
