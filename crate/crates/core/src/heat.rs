//! Operator-exponential solution of the reduced heat equation
//! d(xi That)/dt = d^2(xi That)/dxi^2: on polynomial initial data the series
//! sum_n t^n/n! D^{2n} [xi T0] terminates and is evaluated exactly by
//! polynomial differentiation. Temperature is T(xi, t) = t + That(xi, t).

use crate::hankel::RadialProfile;
use crate::poly::RadialPolynomial;
use crate::{Error, Result};

/// The evolved polynomial xi * That(xi, t) at a fixed time.
#[derive(Debug, Clone)]
pub struct HeatSolution {
    evolved: RadialPolynomial,
    t: f64,
}

impl HeatSolution {
    pub fn evolved(&self) -> &RadialPolynomial {
        &self.evolved
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Split evolved = a0 + xi * q(xi), so That = a0/xi + q(xi).
    pub fn t_hat_parts(&self) -> (f64, RadialPolynomial) {
        (self.evolved.coeff(0), polynomial_quotient(&self.evolved))
    }
}

/// Apply the terminating series sum_{n} t^n/n! D^{2n} to p0.
pub fn evolve(p0: &RadialPolynomial, t: f64) -> Result<HeatSolution> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(format!("t = {t} must be finite and nonnegative")));
    }
    let mut acc = p0.clone();
    let mut term = p0.clone();
    let mut factor = 1.0;
    let mut n = 1.0;
    loop {
        term = term.second_derivative();
        if term.is_zero() {
            break;
        }
        factor *= t / n;
        acc = acc.add(&term.scale(factor));
        n += 1.0;
    }
    Ok(HeatSolution { evolved: acc, t })
}

/// T(xi, t) = t + evolved(xi)/xi, with the continuity limit at xi = 0.
pub fn temperature(sol: &HeatSolution, xi: f64) -> Result<f64> {
    if !xi.is_finite() || xi < 0.0 {
        return Err(Error::Domain(format!("xi = {xi} must be nonnegative")));
    }
    if xi == 0.0 {
        if sol.evolved.coeff(0) != 0.0 {
            return Err(Error::Domain("temperature singular at xi = 0 (nonzero constant term)".into()));
        }
        return Ok(sol.t + sol.evolved.coeff(1));
    }
    Ok(sol.t + sol.evolved.eval(xi) / xi)
}

/// d(That)/dxi = evolved'(xi)/xi - evolved(xi)/xi^2, by exact polynomial
/// calculus on the split evolved = a0 + xi q(xi).
pub fn t_hat_derivative(sol: &HeatSolution, xi: f64) -> Result<f64> {
    if !xi.is_finite() || xi < 0.0 {
        return Err(Error::Domain(format!("xi = {xi} must be nonnegative")));
    }
    let a0 = sol.evolved.coeff(0);
    let q = polynomial_quotient(&sol.evolved);
    if xi == 0.0 {
        if a0 != 0.0 {
            return Err(Error::Domain("derivative singular at xi = 0 (nonzero constant term)".into()));
        }
        return Ok(q.derivative().eval(0.0));
    }
    Ok(-a0 / (xi * xi) + q.derivative().eval(xi))
}

/// q with evolved = evolved(0) + xi q(xi).
pub(crate) fn polynomial_quotient(evolved: &RadialPolynomial) -> RadialPolynomial {
    let coeffs: Vec<f64> = evolved.coeffs().iter().skip(1).copied().collect();
    RadialPolynomial::new(if coeffs.is_empty() { vec![0.0] } else { coeffs }, evolved.xi0())
        .expect("quotient of finite poly is finite")
}

/// Least-squares polynomial fit plus its maximum residual over the sample
/// grid.
#[derive(Debug, Clone)]
pub struct PolynomialFit {
    pub poly: RadialPolynomial,
    pub max_residual: f64,
}

/// Fit the profile with a polynomial of the given degree on a uniform grid
/// (or the profile's own samples). Exact polynomial inputs of degree <=
/// `degree` are reproduced to roundoff.
pub fn project_to_polynomial(
    samples: &RadialProfile,
    degree: usize,
    n_samples: usize,
) -> Result<PolynomialFit> {
    if degree + 1 > n_samples {
        return Err(Error::InvalidArgument(format!(
            "degree {degree} needs at least {} samples, got {n_samples}",
            degree + 1
        )));
    }
    let xi0 = samples.xi0();
    let xs: Vec<f64> = (0..n_samples)
        .map(|i| xi0 * i as f64 / (n_samples - 1) as f64)
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| samples.eval(x)).collect();

    let coeffs = vandermonde_lstsq(&xs, &ys, degree, xi0)?;
    let poly = RadialPolynomial::new(coeffs, xi0)?;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (poly.eval(x) - y).abs())
        .fold(0.0, f64::max);
    Ok(PolynomialFit { poly, max_residual })
}

// Least squares through modified Gram-Schmidt QR on the Vandermonde matrix
// in the scaled variable x/xi0 (keeps the columns well conditioned).
fn vandermonde_lstsq(xs: &[f64], ys: &[f64], degree: usize, xi0: f64) -> Result<Vec<f64>> {
    let m = xs.len();
    let n = degree + 1;
    let mut cols: Vec<Vec<f64>> = (0..n)
        .map(|j| xs.iter().map(|&x| (x / xi0).powi(j as i32)).collect())
        .collect();
    let mut r = vec![vec![0.0; n]; n];
    let mut qtb = vec![0.0; n];
    let mut b: Vec<f64> = ys.to_vec();

    for j in 0..n {
        let norm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-12 * (m as f64).sqrt() {
            return Err(Error::RankDeficient(format!(
                "sample grid cannot support degree {degree}"
            )));
        }
        r[j][j] = norm;
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
        let qj = cols[j].clone();
        for k in j + 1..n {
            let dot: f64 = qj.iter().zip(&cols[k]).map(|(a, b)| a * b).sum();
            r[j][k] = dot;
            for (v, &q) in cols[k].iter_mut().zip(&qj) {
                *v -= dot * q;
            }
        }
        let dot: f64 = qj.iter().zip(&b).map(|(a, b)| a * b).sum();
        qtb[j] = dot;
        for (v, &q) in b.iter_mut().zip(&qj) {
            *v -= dot * q;
        }
    }

    // back-substitution on R c = Q^T y
    let mut c = vec![0.0; n];
    for j in (0..n).rev() {
        let mut s = qtb[j];
        for k in j + 1..n {
            s -= r[j][k] * c[k];
        }
        c[j] = s / r[j][j];
    }
    // undo the x/xi0 scaling
    Ok(c.iter().enumerate().map(|(j, &v)| v / xi0.powi(j as i32)).collect())
}
