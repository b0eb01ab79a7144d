//! Polynomials in the radial coordinate xi, the exact carrier for the
//! operator-exponential heat series.

use crate::{Error, Result};

/// Polynomial in xi on [0, xi0]; coeffs[k] multiplies xi^k.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPolynomial {
    coeffs: Vec<f64>,
    xi0: f64,
}

impl RadialPolynomial {
    pub fn new(coeffs: Vec<f64>, xi0: f64) -> Result<Self> {
        if !(xi0 > 0.0) || !xi0.is_finite() {
            return Err(Error::InvalidArgument(format!("xi0 = {xi0} must be positive")));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Ok(Self { coeffs, xi0 })
    }

    pub fn zero(xi0: f64) -> Self {
        Self { coeffs: vec![0.0], xi0 }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, xi: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * xi + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(self.xi0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Self::new(coeffs, self.xi0).expect("derivative of finite poly is finite")
    }

    pub fn second_derivative(&self) -> Self {
        self.derivative().derivative()
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| a * c).collect(), self.xi0)
            .expect("scaled finite poly is finite")
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new(coeffs, self.xi0).expect("sum of finite polys is finite")
    }
}

/// Time polynomial: coeffs[m] multiplies t^m. Used for the forcing
/// coefficients, which are polynomial in t for polynomial heat data.
#[derive(Debug, Clone, PartialEq)]
pub struct TimePolynomial {
    coeffs: Vec<f64>,
}

impl TimePolynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}
