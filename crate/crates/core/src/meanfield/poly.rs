use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid resolution of the sign-change scan used for non-linear `q`.
const ROOT_SCAN_POINTS: usize = 1024;
const ROOT_BISECT_TOL: f64 = 1e-12;

/// Coupling polynomial `q(x) = c0 + c1 x + ... + cd x^d` driving the
/// perception update `alpha' = kappa alpha (1 - alpha) q(x)`.
///
/// The zero polynomial is allowed: it freezes `alpha` and recovers a static
/// mixture of the two games.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QPoly {
    coeffs: Vec<f64>,
}

impl QPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::param("q", format!("coefficient {c} is not finite")));
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Ok(QPoly { coeffs })
    }

    /// `q(x) = x - mu`
    pub fn linear(mu: f64) -> Self {
        QPoly {
            coeffs: vec![-mu, 1.0],
        }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: vec![0.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// `mu` when the polynomial is exactly `x - mu`.
    pub fn as_linear_mu(&self) -> Option<f64> {
        match self.coeffs.as_slice() {
            [c0, c1] if *c1 == 1.0 => Some(-c0),
            _ => None,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `(q(x), q'(x))` by a single Horner pass.
    pub fn eval_and_derivative(&self, x: f64) -> (f64, f64) {
        let mut val = 0.0;
        let mut der = 0.0;
        for &c in self.coeffs.iter().rev() {
            der = der * x + val;
            val = val * x + c;
        }
        (val, der)
    }

    /// Roots strictly inside `(0, 1)`, ascending.
    ///
    /// Linear polynomials are solved in closed form. Higher degrees use a
    /// sign-change scan followed by bisection, so even-multiplicity roots
    /// that touch zero without crossing it are not found.
    pub fn roots_in_unit_interval(&self) -> Vec<f64> {
        match self.coeffs.as_slice() {
            [_] => Vec::new(),
            [c0, c1] => {
                let r = -c0 / c1;
                if r > 0.0 && r < 1.0 {
                    vec![r]
                } else {
                    Vec::new()
                }
            }
            _ => self.scan_roots(),
        }
    }

    fn scan_roots(&self) -> Vec<f64> {
        let mut roots = Vec::new();
        let n = ROOT_SCAN_POINTS;
        let node = |i: usize| i as f64 / n as f64;
        let mut prev_x = node(0);
        let mut prev_q = self.eval(prev_x);
        for i in 1..=n {
            let x = node(i);
            let q = self.eval(x);
            if q == 0.0 && i < n {
                roots.push(x);
            } else if prev_q != 0.0 && q != 0.0 && (prev_q < 0.0) != (q < 0.0) {
                roots.push(self.bisect(prev_x, x, prev_q));
            }
            prev_x = x;
            prev_q = q;
        }
        roots
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, q_lo: f64) -> f64 {
        let lo_negative = q_lo < 0.0;
        while hi - lo > ROOT_BISECT_TOL {
            let mid = 0.5 * (lo + hi);
            let q = self.eval(mid);
            if q == 0.0 {
                return mid;
            }
            if (q < 0.0) == lo_negative {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}
