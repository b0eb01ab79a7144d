//! Independent oracles and residual diagnostics: Crank-Nicolson for the
//! reduced heat equation, RK4 for the mode ODE, residuals of the reduced
//! vorticity equation, and divergence / thermal-boundary diagnostics.

use crate::bessel::j_three_half;
use crate::fields::{FlowFieldSnapshot, SolvedState};
use crate::hankel::{self, RadialProfile};
use crate::heat::{self, HeatSolution};
use crate::poly::{RadialPolynomial, TimePolynomial};
use crate::quad;
use crate::vorticity::{self, Forcing, ModeState};
use crate::{Error, Result};
use serde::Serialize;
use std::f64::consts::PI;
use std::path::Path;

/// One residual or diagnostic result. `pass` is None for report-only
/// diagnostics that carry no threshold.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub name: String,
    pub max_abs: f64,
    pub l2: f64,
    pub grid_meta: String,
    pub threshold: Option<f64>,
    pub pass: Option<bool>,
}

impl ResidualReport {
    fn asserted(name: &str, max_abs: f64, l2: f64, grid_meta: String, threshold: f64, metric: f64) -> Self {
        Self {
            name: name.into(),
            max_abs,
            l2,
            grid_meta,
            threshold: Some(threshold),
            pass: Some(metric <= threshold),
        }
    }

    fn diagnostic(name: &str, max_abs: f64, l2: f64, grid_meta: String) -> Self {
        Self { name: name.into(), max_abs, l2, grid_meta, threshold: None, pass: None }
    }
}

/// Crank-Nicolson solution of d g/dt = d^2 g/dxi^2 for g = xi That, with
/// Dirichlet boundary values sampled from the analytical series.
pub struct FdHeatSolution {
    pub xi: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn fd_heat_oracle(p0: &RadialPolynomial, t_end: f64, h: f64, dt: f64) -> Result<FdHeatSolution> {
    if !(h > 0.0 && dt > 0.0) {
        return Err(Error::InvalidArgument("h and dt must be positive".into()));
    }
    let xi0 = p0.xi0();
    let n = (xi0 / h).round() as usize;
    if n < 3 {
        return Err(Error::InvalidArgument("grid too coarse".into()));
    }
    let h = xi0 / n as f64;
    let xi: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let mut g: Vec<f64> = xi.iter().map(|&x| p0.eval(x)).collect();

    let steps = (t_end / dt).round() as usize;
    let dt = if steps > 0 { t_end / steps as f64 } else { 0.0 };
    let lambda = dt / (h * h);

    // constant tridiagonal system: 1 + lambda on the diagonal, -lambda/2
    // off-diagonal, for the n-1 interior unknowns; Thomas factors are
    // precomputed once
    let m = n - 1;
    let off = -0.5 * lambda;
    let mut denom = vec![0.0; m];
    let mut cprime = vec![0.0; m];
    denom[0] = 1.0 + lambda;
    cprime[0] = off / denom[0];
    for i in 1..m {
        denom[i] = 1.0 + lambda - off * cprime[i - 1];
        cprime[i] = off / denom[i];
    }

    let mut rhs = vec![0.0; m];
    for step in 0..steps {
        let t_new = (step + 1) as f64 * dt;
        let sol_new = heat::evolve(p0, t_new)?;
        let b0_new = sol_new.evolved().eval(0.0);
        let b1_new = sol_new.evolved().eval(xi0);
        for i in 0..m {
            let j = i + 1;
            rhs[i] = (1.0 - lambda) * g[j] + 0.5 * lambda * (g[j - 1] + g[j + 1]);
        }
        rhs[0] += 0.5 * lambda * b0_new;
        rhs[m - 1] += 0.5 * lambda * b1_new;

        rhs[0] /= denom[0];
        for i in 1..m {
            rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom[i];
        }
        for i in (0..m - 1).rev() {
            rhs[i] -= cprime[i] * rhs[i + 1];
        }
        g[1..=m].copy_from_slice(&rhs);
        g[0] = b0_new;
        g[n] = b1_new;
    }
    Ok(FdHeatSolution { xi, values: g })
}

/// Classical RK4 integration of Pr^{-1} dPhiBar/dt = -mu^2 PhiBar - Upsilon(t).
pub fn ode_oracle<F: Fn(f64) -> f64>(mode: &ModeState, upsilon_fn: F, t_end: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) || !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::InvalidArgument("dt must be positive, t_end nonnegative".into()));
    }
    let rate = |t: f64, y: f64| mode.prandtl * (-mode.mu * mode.mu * y - upsilon_fn(t));
    let steps = (t_end / dt).ceil() as usize;
    let mut y = mode.phi0;
    let mut t = 0.0;
    for step in 0..steps {
        let h = if step == steps - 1 { t_end - t } else { dt };
        let k1 = rate(t, y);
        let k2 = rate(t + 0.5 * h, y + 0.5 * h * k1);
        let k3 = rate(t + 0.5 * h, y + 0.5 * h * k2);
        let k4 = rate(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    Ok(y)
}

// 4th-order central difference stencils
fn d1_central(vals: &[f64; 5], h: f64) -> f64 {
    (-vals[4] + 8.0 * vals[3] - 8.0 * vals[1] + vals[0]) / (12.0 * h)
}

fn d2_central(vals: &[f64; 5], h: f64) -> f64 {
    (-vals[4] + 16.0 * vals[3] - 30.0 * vals[2] + 16.0 * vals[1] - vals[0]) / (12.0 * h * h)
}

/// Residual of the reduced vorticity equation
/// Pr^{-1} dOmega/dt - d^2 Omega/dxi^2 - (4/xi) dOmega/dxi + (R/xi) dThat/dxi
/// on a uniform interior lattice, with Omega from the reconstructed series
/// and the temperature derivative exact.
pub fn residual_eq12(state: &SolvedState, n_xi: usize, t: f64, dt: f64) -> Result<ResidualReport> {
    if n_xi < 3 {
        return Err(Error::InvalidArgument("lattice needs at least 3 interior points".into()));
    }
    let xi0 = state.roots.xi0();
    let lo = 0.05 * xi0;
    let hi = 0.95 * xi0;
    // lattice includes the stencil halo, so residuals live on its interior
    let n_ext = n_xi + 4;
    let h = (hi - lo) / (n_ext - 1) as f64;
    let t_center = t.max(2.0 * dt);

    // Omega(t_k, xi_i) on the extended lattice at five time levels
    let times: Vec<f64> = (-2i32..=2).map(|k| t_center + k as f64 * dt).collect();
    let omega_cap = |v: &crate::vorticity::VorticityField, xi: f64| -> Result<f64> {
        let roots = v.coeffs().roots();
        let mut sum = 0.0;
        for n in 0..roots.len() {
            let mu = roots.roots()[n];
            let dj = roots.deriv_at_root()[n];
            sum += v.coeffs().values()[n] * mu.powf(1.5)
                * crate::bessel::j_three_half_scaled(mu * xi)? / (dj * dj);
        }
        Ok(2.0 / (xi0 * xi0) * sum)
    };

    let mut omega = vec![vec![0.0; n_ext]; 5];
    for (k, &tk) in times.iter().enumerate() {
        let v = state.vorticity_at(tk)?;
        for i in 0..n_ext {
            let xi = lo + i as f64 * h;
            omega[k][i] = omega_cap(&v, xi)?;
        }
    }
    let heat_sol = state.heat_at(t_center)?;

    let mut max_abs = 0.0f64;
    let mut sumsq = 0.0;
    for i in 2..n_ext - 2 {
        let xi = lo + i as f64 * h;
        let in_t: [f64; 5] = [omega[0][i], omega[1][i], omega[2][i], omega[3][i], omega[4][i]];
        let in_xi: [f64; 5] =
            [omega[2][i - 2], omega[2][i - 1], omega[2][i], omega[2][i + 1], omega[2][i + 2]];
        let res = d1_central(&in_t, dt) / state.prandtl
            - d2_central(&in_xi, h)
            - 4.0 / xi * d1_central(&in_xi, h)
            + state.rayleigh / xi * heat::t_hat_derivative(&heat_sol, xi)?;
        max_abs = max_abs.max(res.abs());
        sumsq += res * res;
    }
    let l2 = (h * sumsq).sqrt();
    Ok(ResidualReport::diagnostic(
        "eq12_residual",
        max_abs,
        l2,
        format!("{n_xi} xi points on [{lo:.3}, {hi:.3}], dt = {dt:.1e}, t = {t_center}"),
    ))
}

/// (1/r) d(r u)/dr + dv/dz by central differences. Report-only: the
/// paper's velocity formulas do not provably enforce incompressibility.
pub fn divergence_diagnostic(s: &FlowFieldSnapshot) -> Result<ResidualReport> {
    let (n_r, n_z) = (s.r.len(), s.z.len());
    if n_r < 3 || n_z < 3 {
        return Err(Error::InvalidArgument("divergence needs at least a 3x3 grid".into()));
    }
    let dr = s.r[1] - s.r[0];
    let dz = s.z[1] - s.z[0];
    let mut max_abs = 0.0f64;
    let mut sumsq = 0.0;
    let mut count = 0usize;
    for i_r in 1..n_r - 1 {
        let r = s.r[i_r];
        if r == 0.0 {
            continue;
        }
        for i_z in 1..n_z - 1 {
            let k = s.idx(i_r, i_z);
            if !s.mask[k]
                || !s.mask[s.idx(i_r - 1, i_z)]
                || !s.mask[s.idx(i_r + 1, i_z)]
                || !s.mask[s.idx(i_r, i_z - 1)]
                || !s.mask[s.idx(i_r, i_z + 1)]
            {
                continue;
            }
            let ru_p = s.r[i_r + 1] * s.u[s.idx(i_r + 1, i_z)];
            let ru_m = s.r[i_r - 1] * s.u[s.idx(i_r - 1, i_z)];
            let div = (ru_p - ru_m) / (2.0 * dr * r)
                + (s.v[s.idx(i_r, i_z + 1)] - s.v[s.idx(i_r, i_z - 1)]) / (2.0 * dz);
            max_abs = max_abs.max(div.abs());
            sumsq += div * div;
            count += 1;
        }
    }
    let l2 = if count > 0 { (sumsq / count as f64).sqrt() } else { 0.0 };
    Ok(ResidualReport::diagnostic(
        "divergence",
        max_abs,
        l2,
        format!("{n_r}x{n_z} grid, dr = {dr:.4}, dz = {dz:.4}, {count} interior points"),
    ))
}

/// Mismatch against the plate conditions T = T~ at z = 0 and T = 0 at
/// z = 1, evaluated along r = 0. Report-only: the series solution does not
/// enforce them.
pub fn boundary_diagnostic(heat_sol: &HeatSolution, t_tilde: f64, xi0: f64) -> Result<ResidualReport> {
    let lower = match heat::temperature(heat_sol, 0.0) {
        Ok(v) => v,
        // singular limit; probe just off the plate
        Err(_) => heat::temperature(heat_sol, 1e-6 * xi0)?,
    };
    let mismatch0 = (lower - t_tilde).abs();
    let upper_xi = xi0.min(1.0);
    let mismatch1 = heat::temperature(heat_sol, upper_xi)?.abs();
    let max_abs = mismatch0.max(mismatch1);
    let l2 = ((mismatch0 * mismatch0 + mismatch1 * mismatch1) / 2.0).sqrt();
    Ok(ResidualReport::diagnostic(
        "thermal_boundary",
        max_abs,
        l2,
        format!("plates probed at xi = 0 and xi = {upper_xi} along r = 0, t = {}", heat_sol.t()),
    ))
}

// roundtrip error thresholds calibrated once against the measured error
// curve for f = xi^{3/2}(1 - xi/xi0) (approximately 2x margin)
fn roundtrip_threshold(n_modes: usize) -> f64 {
    match n_modes {
        0..=1 => 0.25,
        2 => 0.13,
        3..=4 => 0.045,
        5..=9 => 0.015,
        10..=19 => 3.2e-3,
        20..=49 => 5.0e-4,
        _ => 1.0e-3,
    }
}

/// Run the full verification suite for a configuration. Asserted checks
/// carry a threshold and a pass flag; diagnostics are report-only.
pub fn run_suite(cfg: &crate::config::SimulationConfig, base_dir: &Path) -> Result<Vec<ResidualReport>> {
    let state = SolvedState::from_config(cfg, base_dir)?;
    let xi0 = state.roots.xi0();
    let quad_tol = state.quad_tol;
    let mut reports = Vec::new();

    // 1. root residuals and bracket containment
    {
        let mut max_abs = 0.0f64;
        let mut sumsq = 0.0;
        let mut brackets_ok = true;
        for (i, &mu) in state.roots.roots().iter().enumerate() {
            let x = mu * xi0;
            let r = j_three_half(x)?.abs();
            max_abs = max_abs.max(r);
            sumsq += r * r;
            let n = (i + 1) as f64;
            brackets_ok &= x > n * PI && x < n * PI + PI / 2.0;
        }
        let mut report = ResidualReport::asserted(
            "root_residual",
            max_abs,
            (sumsq / state.roots.len() as f64).sqrt(),
            format!("{} roots, xi0 = {xi0}", state.roots.len()),
            1e-10,
            max_abs,
        );
        report.pass = Some(report.pass.unwrap() && brackets_ok);
        reports.push(report);
    }

    // 2. orthogonality of the first min(N, 10) basis functions
    {
        let k = state.roots.len().min(10);
        let mut worst = 0.0f64;
        let mut sumsq = 0.0;
        for n in 0..k {
            for m in n..k {
                let mu_n = state.roots.roots()[n];
                let mu_m = state.roots.roots()[m];
                let breaks: Vec<f64> =
                    (0..m).map(|j| state.roots.roots()[j] * xi0 / mu_m).collect();
                let v = quad::integrate_with_breakpoints(
                    |xi| {
                        xi * j_three_half(mu_n * xi).unwrap_or(f64::NAN)
                            * j_three_half(mu_m * xi).unwrap_or(f64::NAN)
                    },
                    0.0,
                    xi0,
                    &breaks,
                    quad_tol.min(1e-11),
                )?;
                let dev = if n == m {
                    let dj = state.roots.deriv_at_root()[n];
                    let diag = 0.5 * xi0 * xi0 * dj * dj;
                    ((v - diag) / diag).abs()
                } else {
                    v.abs()
                };
                worst = worst.max(dev);
                sumsq += dev * dev;
            }
        }
        reports.push(ResidualReport::asserted(
            "orthogonality",
            worst,
            (sumsq / (k * (k + 1) / 2) as f64).sqrt(),
            format!("{k}x{k} Gram matrix"),
            1e-8,
            worst,
        ));
    }

    // 3. Hankel roundtrip for f = xi^{3/2}(1 - xi/xi0)
    {
        let f = RadialProfile::from_fn(xi0, move |xi| xi.powf(1.5) * (1.0 - xi / xi0))?;
        let c = hankel::forward(&f, &state.roots, quad_tol)?;
        let samples = 181;
        let mut num = 0.0;
        let mut den = 0.0;
        let mut worst = 0.0f64;
        for i in 0..samples {
            let xi = xi0 * (0.05 + 0.9 * i as f64 / (samples - 1) as f64);
            let exact = f.eval(xi);
            let approx = hankel::inverse(&c, xi)?;
            worst = worst.max((approx - exact).abs());
            num += (approx - exact) * (approx - exact);
            den += exact * exact;
        }
        let rel_l2 = (num / den).sqrt();
        reports.push(ResidualReport::asserted(
            "hankel_roundtrip",
            worst,
            rel_l2,
            format!("{} modes, {samples} points on [0.05, 0.95] xi0", state.roots.len()),
            roundtrip_threshold(state.roots.len()),
            rel_l2,
        ));
    }

    // 4. heat series vs Crank-Nicolson, xi T0 = xi^3 - xi^5
    {
        let p0 = RadialPolynomial::new(vec![0.0, 0.0, 0.0, 1.0, 0.0, -1.0], xi0)?;
        let (t_end, h, dt) = (0.1, xi0 / 200.0, 1e-4);
        let fd = fd_heat_oracle(&p0, t_end, h, dt)?;
        let exact = heat::evolve(&p0, t_end)?;
        let mut worst = 0.0f64;
        let mut sumsq = 0.0;
        for (x, v) in fd.xi.iter().zip(&fd.values) {
            let d = (v - exact.evolved().eval(*x)).abs();
            worst = worst.max(d);
            sumsq += d * d;
        }
        reports.push(ResidualReport::asserted(
            "heat_oracle",
            worst,
            (sumsq / fd.xi.len() as f64).sqrt(),
            format!("h = {h:.1e}, dt = {dt:.1e}, t = {t_end}"),
            5e-3,
            worst,
        ));
    }

    // 5. mode ODE vs RK4, both forcing regimes, error relative to the
    // solution scale over the window
    {
        let k = state.roots.len().min(10);
        let poly_forcing = TimePolynomial::new(vec![0.4, 0.9, -0.3]);
        let mut worst = 0.0f64;
        let mut sumsq = 0.0;
        let mut count = 0;
        for n in 0..k {
            for forcing_poly in [None, Some(&poly_forcing)] {
                let mode = ModeState::new(&state.roots, n + 1, 1.0, state.prandtl, state.rayleigh)?;
                let forcing = match forcing_poly {
                    None => Forcing::Zero,
                    Some(p) => Forcing::Polynomial(p),
                };
                let rule = |tau: f64| forcing_poly.map_or(0.0, |p| p.eval(tau));
                let mut scale = 0.0f64;
                let mut diffs = Vec::new();
                for step in 1..=10 {
                    let t = step as f64 * 0.1;
                    let analytic = vorticity::phi_bar(&mode, &forcing, t)?;
                    let rk4 = ode_oracle(&mode, rule, t, 1e-4)?;
                    scale = scale.max(analytic.abs());
                    diffs.push((analytic - rk4).abs());
                }
                scale = scale.max(mode.phi0.abs());
                for d in diffs {
                    let rel = d / scale;
                    worst = worst.max(rel);
                    sumsq += rel * rel;
                    count += 1;
                }
            }
        }
        reports.push(ResidualReport::asserted(
            "mode_ode",
            worst,
            (sumsq / count as f64).sqrt(),
            format!("{k} modes, t in [0, 1], RK4 dt = 1e-4, zero and polynomial forcing"),
            1e-6,
            worst,
        ));
    }

    // 6. eq12 residual under simultaneous refinement (R = 0, single mode)
    {
        let mut single = SolvedState {
            roots: state.roots.clone(),
            heat_p0: RadialPolynomial::zero(xi0),
            phi0: vec![0.0; state.roots.len()],
            forcing: vec![TimePolynomial::new(vec![0.0]); state.roots.len()],
            prandtl: state.prandtl,
            rayleigh: 0.0,
            t_tilde: state.t_tilde,
            quad_tol,
            fit_residual: None,
        };
        single.phi0[0] = 1.0;
        let coarse = residual_eq12(&single, 40, 0.05, 2e-3)?;
        let fine = residual_eq12(&single, 80, 0.05, 1e-3)?;
        let pass = fine.l2 <= coarse.l2 * 1.05;
        reports.push(ResidualReport {
            name: "eq12_refinement".into(),
            max_abs: fine.max_abs,
            l2: fine.l2,
            grid_meta: format!(
                "coarse l2 = {:.3e} (40 pts, dt 2e-3) vs fine l2 = {:.3e} (80 pts, dt 1e-3)",
                coarse.l2, fine.l2
            ),
            threshold: Some(coarse.l2 * 1.05),
            pass: Some(pass),
        });
        // the full-config residual as a reported diagnostic
        let t_mid = cfg.times.last().copied().unwrap_or(0.1).max(0.05);
        reports.push(residual_eq12(&state, 60, t_mid, 1e-3)?);
    }

    // 7. divergence diagnostic on the configured grid (or a fallback grid
    // when the configured one is too small for central differences)
    {
        let grid = if cfg.grid.n_r >= 3 && cfg.grid.n_z >= 3 {
            cfg.grid.clone()
        } else {
            crate::config::GridSpec {
                n_r: 21,
                n_z: 21,
                r_max: xi0 / (2.0f64).sqrt(),
                z_max: xi0 / (2.0f64).sqrt(),
            }
        };
        let t = cfg.times.last().copied().unwrap_or(0.0);
        let snap = state.snapshot(&grid, t)?;
        reports.push(divergence_diagnostic(&snap)?);
    }

    // 8. thermal boundary diagnostic
    {
        let t = cfg.times.last().copied().unwrap_or(0.0);
        let heat_sol = state.heat_at(t)?;
        reports.push(boundary_diagnostic(&heat_sol, state.t_tilde, xi0)?);
    }

    Ok(reports)
}
