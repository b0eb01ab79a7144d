//! Closed-form Bessel functions of orders 1/2 and 3/2 and the positive
//! roots of J_{3/2}(mu * xi0) = 0.
//!
//! J_{3/2}(x) = sqrt(2/(pi x)) (sin x / x - cos x); its zeros coincide with
//! the solutions of tan x = x, which interlace as x_n in (n pi, n pi + pi/2).

use crate::{Error, Result};
use std::f64::consts::PI;

/// Below this argument the closed form suffers sin x / x - cos x
/// cancellation (relative error O(eps/x^2)); switch to the power series.
const SMALL_ARG: f64 = 1e-2;

// 1 / Gamma(k + 5/2) for k = 0..3.
const INV_GAMMA_5_2: f64 = 0.752_252_778_063_675;
const INV_GAMMA_7_2: f64 = 0.300_901_111_225_470;
const INV_GAMMA_9_2: f64 = 0.085_971_746_064_420;
const INV_GAMMA_11_2: f64 = 0.019_104_832_458_760;

fn check_finite(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {x}")));
    }
    Ok(())
}

/// J_{3/2}(x) / x^{3/2}, smooth on [0, inf) with value 2^{-3/2}/Gamma(5/2)
/// at x = 0. Series for small x, closed form above the threshold.
pub fn j_three_half_scaled(x: f64) -> Result<f64> {
    check_finite(x)?;
    if x < 0.0 {
        return Err(Error::Domain(format!("x = {x} < 0")));
    }
    if x < SMALL_ARG {
        let q = x * x / 4.0;
        let series = INV_GAMMA_5_2 - q * (INV_GAMMA_7_2 - q * (INV_GAMMA_9_2 / 2.0 - q * INV_GAMMA_11_2 / 6.0));
        Ok(series / (2.0 * std::f64::consts::SQRT_2))
    } else {
        Ok((2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos()) / x.powf(1.5))
    }
}

/// Bessel function of the first kind, order 3/2.
pub fn j_three_half(x: f64) -> Result<f64> {
    check_finite(x)?;
    if x < 0.0 {
        return Err(Error::Domain(format!("x = {x} < 0")));
    }
    if x < SMALL_ARG {
        Ok(j_three_half_scaled(x)? * x.powf(1.5))
    } else {
        Ok((2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos()))
    }
}

/// Bessel function of the first kind, order 1/2: sqrt(2/(pi x)) sin x.
pub fn j_half(x: f64) -> Result<f64> {
    check_finite(x)?;
    if x <= 0.0 {
        return Err(Error::Domain(format!("x = {x} <= 0")));
    }
    Ok((2.0 / (PI * x)).sqrt() * x.sin())
}

/// dJ_{3/2}/dx via the recurrence J'_{3/2}(x) = J_{1/2}(x) - (3/(2x)) J_{3/2}(x).
pub fn j_three_half_prime(x: f64) -> Result<f64> {
    check_finite(x)?;
    if x <= 0.0 {
        return Err(Error::Domain(format!("x = {x} <= 0")));
    }
    Ok(j_half(x)? - 1.5 / x * j_three_half(x)?)
}

/// Ordered positive roots mu_n of J_{3/2}(mu * xi0) = 0 with the derivative
/// J'_{3/2}(mu_n * xi0) at each root. Immutable after construction.
#[derive(Debug, Clone)]
pub struct RootTable {
    xi0: f64,
    roots: Vec<f64>,
    deriv_at_root: Vec<f64>,
}

impl RootTable {
    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn deriv_at_root(&self) -> &[f64] {
        &self.deriv_at_root
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

// Sign carrier for bracketing: sin x - x cos x has the sign of J_{3/2}(x)
// for x > 0 (they differ by the positive factor sqrt(2/pi) x^{-3/2}).
fn root_fn(x: f64) -> f64 {
    x.sin() - x * x.cos()
}

/// First `count` positive roots of J_{3/2}(mu * xi0) = 0.
///
/// Each root is bracketed in (n pi, n pi + pi/2), bisected to width 1e-8 and
/// polished with Newton steps on J_{3/2} until |J_{3/2}| < 1e-12.
pub fn find_roots(xi0: f64, count: usize) -> Result<RootTable> {
    if !(xi0 > 0.0) || !xi0.is_finite() {
        return Err(Error::InvalidArgument(format!("xi0 = {xi0} must be positive")));
    }
    if count < 1 {
        return Err(Error::InvalidArgument("count must be >= 1".into()));
    }

    let mut roots = Vec::with_capacity(count);
    let mut deriv = Vec::with_capacity(count);
    for n in 1..=count {
        let mut a = n as f64 * PI;
        let mut b = a + PI / 2.0;
        let mut fa = root_fn(a);
        debug_assert!(fa * root_fn(b) < 0.0);
        while b - a > 1e-8 {
            let m = 0.5 * (a + b);
            let fm = root_fn(m);
            if fa * fm <= 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        let mut x = 0.5 * (a + b);
        for _ in 0..5 {
            let f = j_three_half(x)?;
            if f.abs() < 1e-12 {
                break;
            }
            x -= f / j_three_half_prime(x)?;
        }
        roots.push(x / xi0);
        deriv.push(j_three_half_prime(x)?);
    }
    Ok(RootTable { xi0, roots, deriv_at_root: deriv })
}
