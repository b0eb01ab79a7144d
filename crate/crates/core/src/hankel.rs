//! Finite Hankel transform pair of order 3/2 on [0, xi0]: forward transform
//! by adaptive quadrature split at the Bessel zeros, inverse by the weighted
//! Bessel series.

use crate::bessel::{j_three_half, RootTable};
use crate::interp::CubicSpline;
use crate::quad;
use crate::{Error, Result};

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Radial function on [0, xi0], either an analytic rule or sampled data
/// interpolated with a cubic spline.
pub struct RadialProfile {
    xi0: f64,
    kind: ProfileKind,
}

enum ProfileKind {
    Analytic(Box<dyn Fn(f64) -> f64 + Send + Sync>),
    Sampled(CubicSpline),
}

impl RadialProfile {
    pub fn from_fn<F>(xi0: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(xi0 > 0.0) || !xi0.is_finite() {
            return Err(Error::InvalidArgument(format!("xi0 = {xi0} must be positive")));
        }
        Ok(Self { xi0, kind: ProfileKind::Analytic(Box::new(f)) })
    }

    /// Sampled profile; nodes must start at 0 and end at xi0.
    pub fn from_samples(xi: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let spline = CubicSpline::new(xi, values)?;
        let (lo, hi) = spline.domain();
        if lo != 0.0 {
            return Err(Error::InvalidArgument(format!("samples must start at xi = 0, got {lo}")));
        }
        Ok(Self { xi0: hi, kind: ProfileKind::Sampled(spline) })
    }

    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    pub fn eval(&self, xi: f64) -> f64 {
        match &self.kind {
            ProfileKind::Analytic(f) => f(xi),
            ProfileKind::Sampled(s) => s.eval(xi),
        }
    }
}

/// Hankel coefficients paired with the root table that defines the basis.
#[derive(Debug, Clone)]
pub struct SpectralCoeffs {
    roots: RootTable,
    values: Vec<f64>,
}

impl SpectralCoeffs {
    pub fn new(roots: RootTable, values: Vec<f64>) -> Result<Self> {
        if values.len() != roots.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for {} roots",
                values.len(),
                roots.len()
            )));
        }
        Ok(Self { roots, values })
    }

    pub fn roots(&self) -> &RootTable {
        &self.roots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn map_values<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self { roots: self.roots.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }
}

/// Interior zeros of xi -> J_{3/2}(mu_n * xi) on (0, xi0): the scaled lower
/// roots of the same table.
fn oscillation_breakpoints(roots: &RootTable, n: usize) -> Vec<f64> {
    let mu_n = roots.roots()[n];
    (0..n).map(|k| roots.roots()[k] * roots.xi0() / mu_n).collect()
}

/// Forward transform: values[n] = int_0^{xi0} xi f(xi) J_{3/2}(mu_n xi) dxi.
pub fn forward(f: &RadialProfile, roots: &RootTable, quad_tol: f64) -> Result<SpectralCoeffs> {
    if f.xi0() != roots.xi0() {
        return Err(Error::DomainMismatch { left: f.xi0(), right: roots.xi0() });
    }
    let mut values = Vec::with_capacity(roots.len());
    for n in 0..roots.len() {
        let mu = roots.roots()[n];
        let breaks = oscillation_breakpoints(roots, n);
        let v = quad::integrate_with_breakpoints(
            |xi| xi * f.eval(xi) * j_three_half(mu * xi).unwrap_or(f64::NAN),
            0.0,
            roots.xi0(),
            &breaks,
            quad_tol,
        )?;
        values.push(v);
    }
    SpectralCoeffs::new(roots.clone(), values)
}

/// Truncated inverse series at xi, with the magnitude of the last retained
/// term as a truncation diagnostic.
pub fn inverse_with_tail(c: &SpectralCoeffs, xi: f64) -> Result<(f64, f64)> {
    let xi0 = c.roots().xi0();
    if !(0.0..=xi0).contains(&xi) || !xi.is_finite() {
        return Err(Error::Domain(format!("xi = {xi} outside (0, {xi0}]")));
    }
    if c.values().is_empty() {
        return Err(Error::InvalidArgument("empty coefficient set".into()));
    }
    // each basis term ~ xi^{3/2} near 0, so the series limit at xi = 0 is 0
    if xi == 0.0 {
        return Ok((0.0, 0.0));
    }
    let mut sum = 0.0;
    let mut last = 0.0;
    for n in 0..c.values().len() {
        let mu = c.roots().roots()[n];
        let dj = c.roots().deriv_at_root()[n];
        last = j_three_half(mu * xi)? / (dj * dj) * c.values()[n];
        sum += last;
    }
    Ok((2.0 / (xi0 * xi0) * sum, (2.0 / (xi0 * xi0) * last).abs()))
}

/// Truncated inverse series over all stored modes.
pub fn inverse(c: &SpectralCoeffs, xi: f64) -> Result<f64> {
    inverse_with_tail(c, xi).map(|(v, _)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::find_roots;
    use approx::assert_abs_diff_eq;

    // Independent high-resolution composite Gauss-Legendre oracle (4-point
    // rule on many uniform panels); deliberately not the adaptive GK path.
    fn gl_oracle<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
        let nodes = [
            -0.861_136_311_594_052_6,
            -0.339_981_043_584_856_26,
            0.339_981_043_584_856_26,
            0.861_136_311_594_052_6,
        ];
        let weights = [
            0.347_854_845_137_453_85,
            0.652_145_154_862_546_2,
            0.652_145_154_862_546_2,
            0.347_854_845_137_453_85,
        ];
        let h = (b - a) / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let c = a + (p as f64 + 0.5) * h;
            for (x, w) in nodes.iter().zip(weights) {
                sum += w * f(c + 0.5 * h * x);
            }
        }
        sum * 0.5 * h
    }

    fn basis(roots: &RootTable, n: usize, xi: f64) -> f64 {
        j_three_half(roots.roots()[n] * xi).unwrap()
    }

    #[test]
    fn zero_profile_transforms_to_zero() {
        let roots = find_roots(1.0, 5).unwrap();
        let f = RadialProfile::from_fn(1.0, |_| 0.0).unwrap();
        let c = forward(&f, &roots, DEFAULT_QUAD_TOL).unwrap();
        assert!(c.values().iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn orthogonality_picks_out_single_mode() {
        let roots = find_roots(1.0, 4).unwrap();
        let mu1 = roots.roots()[0];
        let f = RadialProfile::from_fn(1.0, move |xi| j_three_half(mu1 * xi).unwrap()).unwrap();
        let c = forward(&f, &roots, DEFAULT_QUAD_TOL).unwrap();
        let dj = roots.deriv_at_root()[0];
        assert_abs_diff_eq!(c.values()[0], 0.5 * dj * dj, epsilon = 1e-9);
        for &v in &c.values()[1..] {
            assert!(v.abs() < 1e-8);
        }
        // oracle for the diagonal entry
        let oracle = gl_oracle(|xi| xi * basis(&roots, 0, xi) * basis(&roots, 0, xi), 0.0, 1.0, 2000);
        assert_abs_diff_eq!(c.values()[0], oracle, epsilon = 1e-10);
    }

    #[test]
    fn frozen_regression_value() {
        // f(xi) = xi^{3/2}(1 - xi), mode mu_1, xi0 = 1; value frozen after
        // two independent quadratures (adaptive GK and composite GL) agreed
        // to 1e-9.
        let roots = find_roots(1.0, 1).unwrap();
        let f = RadialProfile::from_fn(1.0, |xi| xi.powf(1.5) * (1.0 - xi)).unwrap();
        let c = forward(&f, &roots, DEFAULT_QUAD_TOL).unwrap();
        assert_abs_diff_eq!(c.values()[0], 0.025190042666412727, epsilon = 1e-9);
        let mu1 = roots.roots()[0];
        let oracle = gl_oracle(
            |xi| xi.powf(2.5) * (1.0 - xi) * j_three_half(mu1 * xi).unwrap(),
            0.0,
            1.0,
            2000,
        );
        assert_abs_diff_eq!(oracle, 0.025190042666412727, epsilon = 1e-9);
    }

    #[test]
    fn orthogonality_gram_matrix() {
        let roots = find_roots(1.0, 10).unwrap();
        for n in 0..10 {
            for m in n..10 {
                let v = quad::integrate_with_breakpoints(
                    |xi| xi * basis(&roots, n, xi) * basis(&roots, m, xi),
                    0.0,
                    1.0,
                    &oscillation_breakpoints(&roots, m),
                    1e-11,
                )
                .unwrap();
                if n == m {
                    let dj = roots.deriv_at_root()[n];
                    let diag = 0.5 * dj * dj;
                    assert!((v - diag).abs() / diag.abs() < 1e-8, "diag n={n}: {v} vs {diag}");
                } else {
                    assert!(v.abs() < 1e-8, "offdiag ({n},{m}) = {v}");
                }
            }
        }
    }

    #[test]
    fn inverse_of_single_coefficient_is_basis_function() {
        let roots = find_roots(1.0, 3).unwrap();
        let dj = roots.deriv_at_root()[0];
        let mut values = vec![0.0; 3];
        values[0] = 0.5 * dj * dj;
        let c = SpectralCoeffs::new(roots.clone(), values).unwrap();
        for &xi in &[0.1, 0.4, 0.77, 1.0] {
            assert_abs_diff_eq!(inverse(&c, xi).unwrap(), basis(&roots, 0, xi), epsilon = 1e-13);
        }
    }

    #[test]
    fn inverse_zero_coeffs_and_domain() {
        let roots = find_roots(1.0, 3).unwrap();
        let c = SpectralCoeffs::new(roots, vec![0.0; 3]).unwrap();
        assert_eq!(inverse(&c, 0.5).unwrap(), 0.0);
        assert_eq!(inverse(&c, 0.0).unwrap(), 0.0);
        assert!(inverse(&c, 1.5).is_err());
        assert!(inverse(&c, -0.1).is_err());
    }

    #[test]
    fn xi0_mismatch_rejected() {
        let roots = find_roots(1.0, 2).unwrap();
        let f = RadialProfile::from_fn(2.0, |_| 1.0).unwrap();
        assert!(matches!(forward(&f, &roots, 1e-8), Err(Error::DomainMismatch { .. })));
    }

    fn roundtrip_l2_error(n_modes: usize) -> f64 {
        let roots = find_roots(1.0, n_modes).unwrap();
        let f = RadialProfile::from_fn(1.0, |xi| xi.powf(1.5) * (1.0 - xi)).unwrap();
        let c = forward(&f, &roots, DEFAULT_QUAD_TOL).unwrap();
        let mut num = 0.0;
        let mut den = 0.0;
        let samples = 181;
        for i in 0..samples {
            let xi = 0.05 + 0.9 * i as f64 / (samples - 1) as f64;
            let exact = f.eval(xi);
            let approx = inverse(&c, xi).unwrap();
            num += (approx - exact) * (approx - exact);
            den += exact * exact;
        }
        (num / den).sqrt()
    }

    #[test]
    fn roundtrip_error_small_and_non_increasing() {
        let errs: Vec<f64> = [5, 10, 20, 50].iter().map(|&n| roundtrip_l2_error(n)).collect();
        assert!(errs[3] <= 1e-3, "roundtrip error at N=50: {}", errs[3]);
        for w in errs.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12), "not non-increasing: {errs:?}");
        }
    }

    #[test]
    fn linearity_of_forward() {
        let roots = find_roots(1.0, 4).unwrap();
        let f = RadialProfile::from_fn(1.0, |xi| xi.powf(1.5) * (1.0 - xi)).unwrap();
        let g = RadialProfile::from_fn(1.0, |xi| (xi * 2.7).sin() * (1.0 - xi)).unwrap();
        let combo =
            RadialProfile::from_fn(1.0, |xi| {
                2.0 * xi.powf(1.5) * (1.0 - xi) - 3.0 * (xi * 2.7).sin() * (1.0 - xi)
            })
            .unwrap();
        let cf = forward(&f, &roots, DEFAULT_QUAD_TOL).unwrap();
        let cg = forward(&g, &roots, DEFAULT_QUAD_TOL).unwrap();
        let cc = forward(&combo, &roots, DEFAULT_QUAD_TOL).unwrap();
        for n in 0..4 {
            let expect = 2.0 * cf.values()[n] - 3.0 * cg.values()[n];
            assert_abs_diff_eq!(cc.values()[n], expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn sampled_profile_matches_analytic_transform() {
        let roots = find_roots(1.0, 3).unwrap();
        let n = 401;
        let xi: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let vals: Vec<f64> = xi.iter().map(|&x| x * (1.0 - x)).collect();
        let sampled = RadialProfile::from_samples(xi, vals).unwrap();
        let analytic = RadialProfile::from_fn(1.0, |x| x * (1.0 - x)).unwrap();
        let cs = forward(&sampled, &roots, 1e-9).unwrap();
        let ca = forward(&analytic, &roots, 1e-9).unwrap();
        for n in 0..3 {
            assert_abs_diff_eq!(cs.values()[n], ca.values()[n], epsilon = 1e-6);
        }
    }
}
