use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial `c0 + c1 x + c2 x^2 + ...` on a closed interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
    domain: (f64, f64),
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("polynomial needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("polynomial coefficients must be finite".into()));
        }
        check_interval(domain)?;
        Ok(Self { coeffs, domain })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    /// k-th derivative at x.
    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        horner(&differentiate(&self.coeffs, k), x)
    }
}

/// Continuous-or-not piecewise polynomial. Piece `i` covers
/// `[breaks[i], breaks[i + 1]]`; coefficients are in the global variable `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePolynomial {
    breaks: Vec<f64>,
    pieces: Vec<Vec<f64>>,
}

impl PiecewisePolynomial {
    pub fn new(breaks: Vec<f64>, pieces: Vec<Vec<f64>>) -> Result<Self> {
        if breaks.len() < 2 || pieces.len() + 1 != breaks.len() {
            return Err(Error::InvalidParameter(format!(
                "piecewise polynomial needs k+1 breakpoints for k pieces (got {} breaks, {} pieces)",
                breaks.len(),
                pieces.len()
            )));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidParameter("breakpoints must be finite and strictly increasing".into()));
        }
        if pieces.iter().any(|p| p.is_empty() || p.iter().any(|c| !c.is_finite())) {
            return Err(Error::InvalidParameter("every piece needs finite coefficients".into()));
        }
        Ok(Self { breaks, pieces })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breaks[0], self.breaks[self.breaks.len() - 1])
    }

    fn piece_index(&self, x: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(Error::Domain(format!("x = {x} outside [{lo}, {hi}]")));
        }
        // right-continuous except at the last breakpoint
        let idx = self.breaks.partition_point(|&b| b <= x);
        Ok(idx.saturating_sub(1).min(self.pieces.len() - 1))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let i = self.piece_index(x)?;
        Ok(horner(&self.pieces[i], x))
    }

    pub fn derivative(&self, x: f64, k: usize) -> Result<f64> {
        let i = self.piece_index(x)?;
        Ok(horner(&differentiate(&self.pieces[i], k), x))
    }

    /// Representative cash-in-advance style map: a tent of slope 1.8 on
    /// [0, 1]. Slopes above the golden ratio force a 3-cycle.
    pub fn representative_cia() -> Self {
        Self::new(vec![0.0, 0.5, 1.0], vec![vec![0.0, 1.8], vec![1.8, -1.8]])
            .expect("static piecewise data is valid")
    }
}

fn check_interval((a, b): (f64, f64)) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter(format!("invalid interval [{a}, {b}]")));
    }
    Ok(())
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn differentiate(coeffs: &[f64], k: usize) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    for _ in 0..k {
        if c.len() <= 1 {
            return vec![0.0];
        }
        c = c.iter().enumerate().skip(1).map(|(i, &ci)| ci * i as f64).collect();
    }
    c
}
