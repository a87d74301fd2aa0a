//! Order-zero estimates of all jump locations by Prony's method.
//!
//! With `r_k = 2pi ik c_k`, the leading behaviour is `sum_j A_{0,j} omega_j^k`,
//! an exponential sum whose nodes are the roots of the monic polynomial
//! annihilating the sequence. The recurrence coefficients solve a `K x K`
//! Hankel system. The estimates are only first order accurate but good
//! enough to place the localizing bumps.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dd::{cdd_from, to_c64};
use crate::eckhoff::rk;
use crate::error::{Error, Result};
use crate::linalg::{cond1, solve, CMatrix};
use crate::model::{circular_distance, wrap_angle, Bounds, FourierWindow};
use crate::polyroot::{roots, ComplexPolynomial};

/// Largest acceptable 1-norm condition number of the Hankel matrix.
pub const KAPPA_MAX: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub struct PronyProblem {
    pub k: usize,
    pub m: i64,
    /// `r_M ..= r_{M+2K-1}`.
    pub rk0: Vec<Complex64>,
    pub bounds: Bounds,
}

impl PronyProblem {
    pub fn from_window(window: &FourierWindow, k: usize, m: i64, bounds: Bounds) -> Result<Self> {
        if k == 0 {
            return Err(Error::Config("number of jumps must be positive".into()));
        }
        let rk0 = (0..2 * k as i64)
            .map(|j| rk(window, 0, m + j).map(to_c64))
            .collect::<Result<Vec<_>>>()?;
        Ok(PronyProblem { k, m, rk0, bounds })
    }

    pub fn hankel(&self) -> CMatrix {
        (0..self.k)
            .map(|a| (0..self.k).map(|b| self.rk0[a + b]).collect())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PronyEstimate {
    /// Ascending in `[-pi, pi)`.
    pub xis: Vec<f64>,
    pub omegas: Vec<Complex64>,
    pub condition: f64,
}

pub fn hankel_condition(p: &PronyProblem) -> f64 {
    cond1(&p.hankel())
}

pub fn prony_estimate(p: &PronyProblem) -> Result<PronyEstimate> {
    if p.rk0.len() != 2 * p.k {
        return Err(Error::Config(format!(
            "Prony needs {} values, got {}",
            2 * p.k,
            p.rk0.len()
        )));
    }
    let h = p.hankel();
    let condition = cond1(&h);
    if !(condition <= KAPPA_MAX) {
        return Err(Error::IllPosed { kappa: condition });
    }
    let rhs: Vec<Complex64> = (0..p.k).map(|a| -p.rk0[p.k + a]).collect();
    let q = solve(&h, &rhs)?;
    let mut coeffs: Vec<Complex64> = q;
    coeffs.push(Complex64::new(1.0, 0.0));
    let poly = ComplexPolynomial::new(coeffs.into_iter().map(cdd_from).collect());
    let set = roots(&poly, 1e-10)?;
    if set.len() != p.k {
        return Err(Error::Accuracy(format!(
            "expected {} roots, found {}",
            p.k,
            set.len()
        )));
    }
    let mut pairs: Vec<(f64, Complex64)> = set
        .roots_c64()
        .into_iter()
        .map(|w| (wrap_angle(-w.arg()), w))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (_, w) in &pairs {
        if !(0.5..=2.0).contains(&w.norm()) {
            return Err(Error::Accuracy(format!(
                "node modulus {} outside [0.5, 2]; raise M",
                w.norm()
            )));
        }
    }
    let xis: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let min_sep = min_circular_separation(&xis);
    if min_sep < p.bounds.j3 / 3.0 {
        return Err(Error::Accuracy(format!(
            "estimates only {min_sep:.3e} apart (< J3/3 = {:.3e}); raise M",
            p.bounds.j3 / 3.0
        )));
    }
    Ok(PronyEstimate {
        xis,
        omegas: pairs.into_iter().map(|p| p.1).collect(),
        condition,
    })
}

pub(crate) fn min_circular_separation(xis: &[f64]) -> f64 {
    let n = xis.len();
    if n < 2 {
        return 2.0 * PI;
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            best = best.min(circular_distance(xis[i], xis[j]));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{synth_random, Jump, SingularPart, SmoothPart, TestFunction};

    fn order_zero(xis: &[f64], amps: &[f64]) -> TestFunction {
        let jumps = xis
            .iter()
            .zip(amps)
            .map(|(&xi, &a)| Jump { xi, magnitudes: vec![a] })
            .collect();
        TestFunction::new(SingularPart::new(jumps, 0).unwrap(), SmoothPart::zero(0))
    }

    #[test]
    fn one_jump_is_exact() {
        let f = order_zero(&[0.9], &[1.3]);
        let w = f.window(0, 1, 40);
        let p = PronyProblem::from_window(&w, 1, 20, Bounds::default()).unwrap();
        assert!((hankel_condition(&p) - 1.0).abs() < 1e-15);
        let e = prony_estimate(&p).unwrap();
        assert!((e.xis[0] - 0.9).abs() < 1e-13);
        // q_0 = -omega
        let q0 = -p.rk0[1] / p.rk0[0];
        assert!((q0 + Complex64::from_polar(1.0, -0.9)).norm() < 1e-13);
    }

    #[test]
    fn recurrence_holds_on_exact_data() {
        let xis = [-2.0, -0.3, 1.1, 2.6];
        let f = order_zero(&xis, &[1.0, -0.7, 1.5, 0.6]);
        let w = f.window(0, 1, 200);
        let p = PronyProblem::from_window(&w, 4, 50, Bounds::default()).unwrap();
        let h = p.hankel();
        let rhs: Vec<Complex64> = (0..4).map(|a| -p.rk0[4 + a]).collect();
        let q = solve(&h, &rhs).unwrap();
        for k in 60..70i64 {
            let mut acc = to_c64(rk(&w, 0, k + 4).unwrap());
            for (i, qi) in q.iter().enumerate() {
                acc += qi * to_c64(rk(&w, 0, k + i as i64).unwrap());
            }
            assert!(acc.norm() < 1e-10);
        }
    }

    #[test]
    fn exact_recovery_order_zero() {
        for k in 1..=4usize {
            let xis: Vec<f64> = (0..k).map(|j| -2.5 + 1.4 * j as f64).collect();
            let amps: Vec<f64> = (0..k).map(|j| 0.8 + 0.3 * j as f64).collect();
            let f = order_zero(&xis, &amps);
            for m in [10i64, 100, 1000] {
                let w = f.window(0, m, m + 2 * k as i64);
                let p = PronyProblem::from_window(&w, k, m, Bounds { j1: 0.5, j2: 2.0, j3: 1.0 }).unwrap();
                let e = prony_estimate(&p).unwrap();
                for (a, b) in e.xis.iter().zip(&xis) {
                    assert!((a - b).abs() < 1e-8, "K={k} M={m}");
                }
            }
        }
    }

    #[test]
    fn condition_grows_as_nodes_merge() {
        let mut last = 0.0;
        for sep in [1.0, 0.1, 0.01, 1e-3] {
            let f = order_zero(&[0.2, 0.2 + sep], &[1.0, 1.0]);
            let w = f.window(0, 1, 100);
            let p = PronyProblem::from_window(&w, 2, 40, Bounds::default()).unwrap();
            let c = hankel_condition(&p);
            assert!(c > last, "sep={sep}");
            last = c;
        }
        let f = order_zero(&[0.2, 0.2 + 1e-9], &[1.0, 1.0]);
        let w = f.window(0, 1, 100);
        let p = PronyProblem::from_window(&w, 2, 40, Bounds::default()).unwrap();
        assert!(matches!(prony_estimate(&p), Err(Error::IllPosed { .. })));
    }

    #[test]
    fn factorisation_and_condition_bound() {
        // H = V diag(A_j omega_j^M) V^T with V_{a,j} = omega_j^a
        let xis = [-1.0, 1.5];
        let amps = [1.0, 2.0];
        let f = order_zero(&xis, &amps);
        let m = 30i64;
        let w = f.window(0, 1, 100);
        let p = PronyProblem::from_window(&w, 2, m, Bounds { j1: 1.0, j2: 2.0, j3: 1.0 }).unwrap();
        let h = p.hankel();
        let om: Vec<Complex64> = xis.iter().map(|x| Complex64::from_polar(1.0, -x)).collect();
        for a in 0..2 {
            for b in 0..2 {
                let v: Complex64 = (0..2)
                    .map(|j| om[j].powi(a as i32) * amps[j] * om[j].powi(m as i32) * om[j].powi(b as i32))
                    .sum();
                assert!((h[a][b] - v).norm() < 1e-10);
            }
        }
        let v: CMatrix = (0..2).map(|a| (0..2).map(|j| om[j].powi(a)).collect()).collect();
        let kv = cond1(&v);
        // well separated: the stated bound holds with slack for norms
        assert!(cond1(&h) <= 2.0 * (2.0 / 1.0) * kv);
        // general bound from the factorisation
        assert!(cond1(&h) <= (2.0 / 1.0) * kv * kv * (1.0 + 1e-12));
    }

    #[test]
    fn rejects_merged_estimates() {
        let f = synth_random(2, 0, 0, 1, Bounds { j1: 0.5, j2: 2.0, j3: 2.0 }).unwrap();
        let w = f.window(0, 1, 100);
        // claim a separation far larger than the real one
        let p = PronyProblem::from_window(&w, 2, 40, Bounds { j1: 0.5, j2: 2.0, j3: 50.0 }).unwrap();
        assert!(matches!(prony_estimate(&p), Err(Error::Accuracy(_))));
    }
}
