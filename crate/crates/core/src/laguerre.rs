//! Generalized Laguerre polynomials `L_n^(alpha)` from the explicit sum
//! `sum_m C(n+alpha, n-m) (-x)^m / m!`, and their roots.
//!
//! The roots of `L_d^(1)` predict where the `d` spurious roots of the order-`d`
//! eliminant sit for large `M`.

use crate::dd::{cdd, to_c64};
use crate::error::{Error, Result};
use crate::polyroot::{roots, ComplexPolynomial};

pub const MAX_N: usize = 20;

/// Generalized binomial `C(a, j)` for real `a`.
fn gbinom(a: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (a - i as f64) / (i + 1) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreBasis {
    pub alpha: f64,
    pub n: usize,
    /// Ascending power coefficients.
    pub coeffs: Vec<f64>,
}

impl LaguerreBasis {
    /// `alpha > -1`, or exactly `-1`.
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::UnsupportedDegree { n, max: MAX_N });
        }
        if !(alpha >= -1.0) {
            return Err(Error::Config(format!("Laguerre parameter {alpha} not supported")));
        }
        let mut fact = 1.0;
        let coeffs = (0..=n)
            .map(|m| {
                if m > 0 {
                    fact *= m as f64;
                }
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * gbinom(n as f64 + alpha, n - m) / fact
            })
            .collect();
        Ok(LaguerreBasis { alpha, n, coeffs })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

pub fn laguerre_eval(alpha: f64, n: usize, x: f64) -> Result<f64> {
    Ok(LaguerreBasis::new(alpha, n)?.eval(x))
}

/// Real roots of `L_n^(alpha)`, ascending.
pub fn laguerre_roots(alpha: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > 15 {
        return Err(Error::UnsupportedDegree { n, max: 15 });
    }
    let b = LaguerreBasis::new(alpha, n)?;
    let p = ComplexPolynomial::new(b.coeffs.iter().map(|&c| cdd(c, 0.0)).collect());
    let rs = roots(&p, 1e-12)?;
    let mut out = Vec::with_capacity(n);
    for z in rs.roots {
        let z = to_c64(z);
        if z.im.abs() > 1e-10 * (1.0 + z.re.abs()) {
            return Err(Error::Conditioning(format!(
                "Laguerre root {z} has imaginary part above 1e-10"
            )));
        }
        out.push(z.re);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}
