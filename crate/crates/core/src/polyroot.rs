//! Roots of dense complex polynomials of modest degree.
//!
//! Aberth–Ehrlich simultaneous iteration in `f64`, followed by a few
//! double-double Aberth sweeps so that roots of the eliminant polynomials keep
//! the extra digits carried by their coefficients.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::dd::{cabs, cdd, cdd_from, to_c64, Cdd};
use crate::error::{Error, Result};

/// Default per-degree residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-13;
pub const MAX_ITER: usize = 200;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// Polynomial `sum_i a_i z^i` with coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Cdd>,
}

impl ComplexPolynomial {
    /// Trailing zero coefficients are dropped so the leading one is nonzero.
    pub fn new(mut coeffs: Vec<Cdd>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.re.hi == 0.0 && c.im.hi == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(cdd(0.0, 0.0));
        }
        ComplexPolynomial { coeffs }
    }

    pub fn from_c64(coeffs: &[Complex64]) -> Self {
        Self::new(coeffs.iter().map(|&c| cdd_from(c)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Cdd]) -> Self {
        let mut c = vec![cdd(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![cdd(0.0, 0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] = next[i + 1] + a;
                next[i] = next[i] - a * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Cdd] {
        &self.coeffs
    }

    pub fn leading(&self) -> Cdd {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, z: Cdd) -> Cdd {
        self.coeffs
            .iter()
            .rev()
            .fold(cdd(0.0, 0.0), |acc, &a| acc * z + a)
    }

    /// `p(z)` and `p'(z)` together.
    pub fn eval_with_derivative(&self, z: Cdd) -> (Cdd, Cdd) {
        let mut p = cdd(0.0, 0.0);
        let mut dp = cdd(0.0, 0.0);
        for &a in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        (p, dp)
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        to_c64(self.eval(cdd_from(z)))
    }

    pub fn derivative(&self) -> ComplexPolynomial {
        if self.degree() == 0 {
            return Self::new(vec![cdd(0.0, 0.0)]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &a)| Cdd::new(a.re * i as f64, a.im * i as f64))
                .collect(),
        )
    }

    pub fn scale(&self, s: Cdd) -> ComplexPolynomial {
        Self::new(self.coeffs.iter().map(|&a| a * s).collect())
    }

    /// `sum_i |a_i| r^i`, the natural scale for a residual at `|z| = r`.
    pub fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * r + to_c64(*a).norm())
    }

    fn to_f64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|&a| to_c64(a)).collect()
    }
}

/// Roots together with their relative residuals `|p(z)| / sum |a_i||z|^i`
/// and the derivative moduli `|p'(z)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Cdd>,
    pub residuals: Vec<f64>,
    pub derivative_moduli: Vec<f64>,
    pub iterations: usize,
}

impl RootSet {
    pub fn roots_c64(&self) -> Vec<Complex64> {
        self.roots.iter().map(|&z| to_c64(z)).collect()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Index of the root minimising `||z| - 1|`. Ties (within a few ulps) go
    /// to the larger `|p'(z)|`, then to the smaller index.
    pub fn closest_index(&self) -> Option<usize> {
        let dist: Vec<f64> = self
            .roots
            .iter()
            .map(|&z| (cabs(z) - 1.0).abs().to_f64())
            .collect();
        let mut best: Option<usize> = None;
        for i in 0..self.roots.len() {
            best = match best {
                None => Some(i),
                Some(b) => {
                    let tie = (dist[i] - dist[b]).abs() <= 4.0 * f64::EPSILON * dist[b].max(f64::MIN_POSITIVE);
                    if tie {
                        if self.derivative_moduli[i] > self.derivative_moduli[b] {
                            Some(i)
                        } else {
                            Some(b)
                        }
                    } else if dist[i] < dist[b] {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }
}

pub fn closest_to_unit_circle(rs: &RootSet) -> Option<Cdd> {
    rs.closest_index().map(|i| rs.roots[i])
}

fn backward_residual(p: &ComplexPolynomial, z: Cdd) -> (f64, f64) {
    let (v, dv) = p.eval_with_derivative(z);
    let r = cabs(z).to_f64();
    let scale = p.abs_eval(r).max(f64::MIN_POSITIVE);
    (cabs(v).to_f64() / scale, cabs(dv).to_f64())
}

fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let mut r = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64);
    if !(r.is_finite() && r > 1e-8) {
        r = 1.0;
    }
    (0..n)
        .map(|i| Complex64::from_polar(r, 0.4 + i as f64 * GOLDEN_ANGLE % TAU))
        .collect()
}

fn horner_c64(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth_f64(c: &[Complex64], z: &mut [Complex64], max_iter: usize) -> usize {
    let n = z.len();
    for it in 0..max_iter {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner_c64(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (z[i] - z[j]))
                .sum();
            let w = ratio / (1.0 - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            return it + 1;
        }
    }
    max_iter
}

fn aberth_dd(p: &ComplexPolynomial, z: &mut [Cdd], sweeps: usize) {
    let n = z.len();
    let one = cdd(1.0, 0.0);
    for _ in 0..sweeps {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v.re.hi == 0.0 && v.im.hi == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let mut s = cdd(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s = s + one / (z[i] - z[j]);
                }
            }
            let w = ratio / (one - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] = z[i] - w;
                max_step = max_step.max(cabs(w).to_f64() / cabs(z[i]).to_f64().max(1e-300));
            }
        }
        if max_step < 1e-31 {
            break;
        }
    }
}

/// All roots of `p`, each with relative residual at most `tol * degree`.
pub fn roots(p: &ComplexPolynomial, tol: f64) -> Result<RootSet> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::Config("polynomial of degree 0 has no roots".into()));
    }
    let c = p.to_f64();
    if c.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
        return Err(Error::Config("non-finite polynomial coefficient".into()));
    }
    let mut z = if n == 1 {
        vec![-(p.coeffs[0] / p.coeffs[1])]
    } else {
        let mut z = initial_guesses(&c);
        let it = aberth_f64(&c, &mut z, MAX_ITER);
        let mut zd: Vec<Cdd> = z.iter().map(|&w| cdd_from(w)).collect();
        aberth_dd(p, &mut zd, 40);
        return finish(p, zd, it, tol);
    };
    aberth_dd(p, &mut z, 2);
    finish(p, z, 1, tol)
}

fn finish(p: &ComplexPolynomial, z: Vec<Cdd>, iterations: usize, tol: f64) -> Result<RootSet> {
    let n = p.degree();
    let (residuals, derivative_moduli): (Vec<f64>, Vec<f64>) =
        z.iter().map(|&w| backward_residual(p, w)).unzip();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    let finite = z.iter().all(|w| w.re.is_finite() && w.im.is_finite());
    if !finite || !(max_residual <= tol * n as f64) {
        return Err(Error::RootNonConvergence {
            iterations,
            best: z.iter().map(|&w| to_c64(w)).collect(),
            residuals,
            max_residual,
        });
    }
    Ok(RootSet {
        roots: z,
        residuals,
        derivative_moduli,
        iterations,
    })
}

pub fn roots_default(p: &ComplexPolynomial) -> Result<RootSet> {
    roots(p, DEFAULT_TOL)
}
