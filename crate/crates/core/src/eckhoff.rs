//! Single-jump resolution from `d + 2` consecutive Fourier coefficients.
//!
//! With `r_k = 2pi (ik)^{d+1} c_k`, a lone jump of order `d` gives
//! `r_k = omega^k P(k)` for a polynomial `P` of degree `d`, where
//! `omega = e^{-i xi}`. The `(d+1)`-th difference of `omega^{-k} r_k` vanishes,
//! so `omega` is a root of the eliminant
//!
//! ```text
//! q_M(z) = sum_{j=0}^{d+1} (-1)^j C(d+1, j) r_{M+j} z^{d+1-j}.
//! ```
//!
//! For smooth contamination the root nearest the unit circle is accurate to
//! `O(M^{-d-2})`; the remaining `d` roots sit near `omega / (1 - phi_i / M)`
//! with `phi_i` the roots of `L_d^(1)`.
//!
//! The magnitudes follow from the Vandermonde system
//! `sum_n (M+j)^n B_n = r_{M+j} omega^{-M-j}`, `j = 0..=d`, solved through
//! `V_M^{-1} = S_{M,d} V_0^{-1}`.

use std::sync::OnceLock;

use log::warn;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dd::{cabs, cdd, cpowi, cscale, i_pow, to_c64, Cdd, Dd};
use crate::error::{Error, Result};
use crate::laguerre::laguerre_roots;
use crate::model::{wrap_angle, FourierWindow, MAX_ORDER};
use crate::polyroot::{closest_to_unit_circle, roots, ComplexPolynomial, RootSet, DEFAULT_TOL};

/// `r_k = 2pi (ik)^{d+1} c_k` for `k = start .. start + values.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct RkSequence {
    pub d: usize,
    pub start: i64,
    pub values: Vec<Cdd>,
}

impl RkSequence {
    pub fn new(window: &FourierWindow, d: usize, start: i64, len: usize) -> Result<Self> {
        let values = (0..len as i64)
            .map(|j| rk(window, d, start + j))
            .collect::<Result<Vec<_>>>()?;
        Ok(RkSequence { d, start, values })
    }

    pub fn get(&self, k: i64) -> Cdd {
        self.values[(k - self.start) as usize]
    }
}

/// `2pi (ik)^{d+1} c_k`.
pub fn rk(window: &FourierWindow, d: usize, k: i64) -> Result<Cdd> {
    if k < 1 {
        return Err(Error::Range {
            index: k,
            lo: 1,
            hi: window.last_index(),
        });
    }
    let c = window.get(k)?;
    let kp = Dd::from_f64(k as f64).powi(d as i32 + 1) * Dd::TWO_PI;
    Ok(i_pow(d as i64 + 1) * cscale(c, kp))
}

fn binomials(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for j in 1..n {
        row[j] = row[j - 1] * (n + 1 - j) as f64 / j as f64;
    }
    row
}

/// Degree-`d+1` eliminant built from `r_M ..= r_{M+d+1}`.
pub fn eliminant(window: &FourierWindow, d: usize, m: i64) -> Result<ComplexPolynomial> {
    let rs = RkSequence::new(window, d, m, d + 2)?;
    Ok(eliminant_from_rk(&rs))
}

fn eliminant_from_rk(rs: &RkSequence) -> ComplexPolynomial {
    let d = rs.d;
    let binom = binomials(d + 1);
    let mut coeffs = vec![cdd(0.0, 0.0); d + 2];
    for j in 0..=d + 1 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let r = rs.values[j];
        coeffs[d + 1 - j] = Cdd::new(r.re * (sign * binom[j]), r.im * (sign * binom[j]));
    }
    ComplexPolynomial::new(coeffs)
}

/// Root of the eliminant closest to the unit circle, with the full root set.
pub fn locate_jump(window: &FourierWindow, d: usize, m: i64) -> Result<(Cdd, RootSet)> {
    if m < 1 {
        return Err(Error::Config(format!("base index M = {m} must be positive")));
    }
    if d > MAX_ORDER {
        return Err(Error::UnsupportedDegree { n: d, max: MAX_ORDER });
    }
    let rs = RkSequence::new(window, d, m, d + 2)?;
    let scale = rs
        .values
        .iter()
        .map(|r| cabs(*r).to_f64())
        .fold(0.0, f64::max);
    let lead = cabs(rs.values[0]).to_f64();
    if !(scale > 0.0) || lead <= 1e-12 * scale {
        return Err(Error::Conditioning(format!(
            "leading eliminant coefficient r_M = {lead:e} is negligible (scale {scale:e})"
        )));
    }
    let q = eliminant_from_rk(&rs);
    let set = roots(&q, DEFAULT_TOL)?;
    let omega = closest_to_unit_circle(&set).expect("degree >= 1");
    Ok((omega, set))
}

/// The `d` predicted off-circle roots `omega / (1 - phi_i / M)`.
pub fn predicted_spurious(omega: Complex64, d: usize, m: i64) -> Result<Vec<Complex64>> {
    Ok(laguerre_roots(1.0, d)?
        .into_iter()
        .map(|phi| omega / (1.0 - phi / m as f64))
        .collect())
}

/// `S_{k,d}` with 1-indexed entries `(-k)^{n-m} C(n-1, n-m)` for `n >= m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftMatrix {
    pub d: usize,
    pub k: i64,
}

impl ShiftMatrix {
    pub fn new(d: usize, k: i64) -> Self {
        ShiftMatrix { d, k }
    }

    pub fn dim(&self) -> usize {
        self.d + 1
    }

    /// Entry `(m, n)`, 1-indexed, as an exact integer.
    pub fn entry_exact(&self, m: usize, n: usize) -> BigInt {
        if n < m {
            return BigInt::zero();
        }
        let p = (n - m) as u32;
        let mut binom = BigInt::one();
        for i in 0..(n - m) {
            binom = binom * BigInt::from(n - 1 - i) / BigInt::from(i + 1);
        }
        BigInt::from(-self.k).pow(p) * binom
    }

    pub fn entry(&self, m: usize, n: usize) -> Dd {
        if n < m {
            return Dd::ZERO;
        }
        let mut binom = 1.0;
        for i in 0..(n - m) {
            binom = binom * (n - 1 - i) as f64 / (i + 1) as f64;
        }
        Dd::from_f64(-self.k as f64).powi((n - m) as i32) * binom
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        let n = self.dim();
        (1..=n)
            .map(|m| {
                (1..=n)
                    .map(|c| BigRational::from_integer(self.entry_exact(m, c)))
                    .collect()
            })
            .collect()
    }
}

/// `S v`.
pub fn shift_apply(s: &ShiftMatrix, v: &[Cdd]) -> Result<Vec<Cdd>> {
    let n = s.dim();
    if v.len() != n {
        return Err(Error::Config(format!(
            "dimension mismatch: vector of length {} for order {}",
            v.len(),
            s.d
        )));
    }
    Ok((1..=n)
        .map(|m| {
            (m..=n).fold(cdd(0.0, 0.0), |acc, c| acc + cscale(v[c - 1], s.entry(m, c)))
        })
        .collect())
}

/// Row-vector action `v S`.
pub fn row_apply(v: &[Cdd], s: &ShiftMatrix) -> Result<Vec<Cdd>> {
    let n = s.dim();
    if v.len() != n {
        return Err(Error::Config(format!(
            "dimension mismatch: vector of length {} for order {}",
            v.len(),
            s.d
        )));
    }
    Ok((1..=n)
        .map(|c| (1..=c).fold(cdd(0.0, 0.0), |acc, m| acc + cscale(v[m - 1], s.entry(m, c))))
        .collect())
}

/// Rows `(1, k+j, (k+j)^2, ..., (k+j)^d)` for `j = 0..=d`, exact.
pub fn vandermonde_exact(d: usize, k: i64) -> Vec<Vec<BigRational>> {
    (0..=d)
        .map(|j| {
            let x = BigInt::from(k + j as i64);
            (0..=d)
                .map(|n| BigRational::from_integer(x.pow(n as u32)))
                .collect()
        })
        .collect()
}

/// Exact inverse by Gauss–Jordan elimination over the rationals.
pub fn invert_exact(a: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&r| !m[r][c].is_zero())
            .ok_or_else(|| Error::Conditioning("singular matrix".into()))?;
        m.swap(p, c);
        let piv = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x / &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot_row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Ok(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn matmul_exact(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(BigRational::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

/// `max |V_k (S_{k,d} V_0^{-1}) - I|`, evaluated in exact arithmetic.
pub fn shift_factorization_residual(d: usize, k: i64) -> Result<f64> {
    let vk = vandermonde_exact(d, k);
    let v0inv = invert_exact(&vandermonde_exact(d, 0))?;
    let s = ShiftMatrix::new(d, k).to_rational();
    let prod = matmul_exact(&vk, &matmul_exact(&s, &v0inv));
    let mut worst: f64 = 0.0;
    for (i, row) in prod.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let e = if i == j { x - BigRational::one() } else { x.clone() };
            worst = worst.max(e.abs().to_f64().unwrap_or(f64::INFINITY));
        }
    }
    Ok(worst)
}

fn big_to_dd(x: &BigInt) -> Dd {
    let hi = x.to_f64().unwrap_or(f64::NAN);
    let rest = x - BigInt::from(hi as i128);
    if hi.abs() < 1.7e38 {
        Dd::from_sum(hi, rest.to_f64().unwrap_or(0.0))
    } else {
        Dd::from_f64(hi)
    }
}

fn rational_to_dd(x: &BigRational) -> Dd {
    big_to_dd(x.numer()) / big_to_dd(x.denom())
}

/// Cached `V_0^{-1}` in double-double for orders up to `MAX_ORDER`.
fn v0_inverse(d: usize) -> &'static [Vec<Dd>] {
    static CACHE: OnceLock<Vec<Vec<Vec<Dd>>>> = OnceLock::new();
    &CACHE.get_or_init(|| {
        (0..=MAX_ORDER)
            .map(|d| {
                invert_exact(&vandermonde_exact(d, 0))
                    .expect("distinct nodes")
                    .iter()
                    .map(|row| row.iter().map(rational_to_dd).collect())
                    .collect()
            })
            .collect()
    })[d]
}

/// Outcome of the magnitude solve.
#[derive(Clone, Debug, PartialEq)]
pub struct MagnitudeSolve {
    /// `A_0 ..= A_d`, complex as solved.
    pub complex: Vec<Complex64>,
    /// Largest `|Im A_l|`.
    pub imaginary_residue: f64,
    pub modulus_clamped: bool,
}

/// Solve for `A_0..=A_d` given `omega`, using `r_M ..= r_{M+d}`.
pub fn solve_magnitudes(window: &FourierWindow, omega: Cdd, d: usize, m: i64) -> Result<MagnitudeSolve> {
    if d > MAX_ORDER {
        return Err(Error::UnsupportedDegree { n: d, max: MAX_ORDER });
    }
    let rho = cabs(omega);
    let rho_f = rho.to_f64();
    if !(0.5..=2.0).contains(&rho_f) {
        return Err(Error::Conditioning(format!(
            "|omega| = {rho_f} outside [0.5, 2]"
        )));
    }
    let unit = Cdd::new(omega.re / rho, omega.im / rho);
    let limit = 10.0 / m as f64;
    let mut rho_used = rho;
    let mut clamped = false;
    if (rho_f - 1.0).abs() > limit {
        warn!("|omega| = {rho_f} deviates from 1 by more than 10/M; clamping");
        rho_used = Dd::from_f64(if rho_f > 1.0 { 1.0 + limit } else { 1.0 - limit });
        clamped = true;
    }
    let inv_unit = unit.conj();
    let inv_rho = Dd::ONE / rho_used;

    let rs = RkSequence::new(window, d, m, d + 1)?;
    let mut phase = cpowi(inv_unit, m);
    let mut modulus = inv_rho.powi(i32::try_from(m).map_err(|_| Error::Config("M too large".into()))?);
    let mut rhs = Vec::with_capacity(d + 1);
    for j in 0..=d {
        rhs.push(cscale(rs.values[j] * phase, modulus));
        phase = phase * inv_unit;
        modulus *= inv_rho;
    }
    if rhs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Conditioning("overflow in omega^{-M-j}".into()));
    }

    let v0inv = v0_inverse(d);
    let y: Vec<Cdd> = v0inv
        .iter()
        .map(|row| {
            row.iter()
                .zip(&rhs)
                .fold(cdd(0.0, 0.0), |acc, (a, b)| acc + cscale(*b, *a))
        })
        .collect();
    let b = shift_apply(&ShiftMatrix::new(d, m), &y)?;

    // B_n = i^n A_{d-n}
    let complex: Vec<Complex64> = (0..=d)
        .map(|l| to_c64(b[d - l] * i_pow(-((d - l) as i64))))
        .collect();
    let imaginary_residue = complex.iter().map(|a| a.im.abs()).fold(0.0, f64::max);
    Ok(MagnitudeSolve {
        complex,
        imaginary_residue,
        modulus_clamped: clamped,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpDiagnostics {
    pub root_set: Vec<Complex64>,
    pub root_residuals: Vec<f64>,
    pub predicted_spurious: Vec<Complex64>,
    /// Largest imaginary part among the solved magnitudes.
    pub magnitude_residual: f64,
    pub modulus_clamped: bool,
}

/// A resolved jump.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpEstimate {
    pub omega: Complex64,
    /// `-arg(omega)` in `[-pi, pi)`.
    pub xi: f64,
    /// Real parts of the solved magnitudes.
    pub magnitudes: Vec<f64>,
    pub magnitudes_complex: Vec<Complex64>,
    pub diagnostics: JumpDiagnostics,
    omega_dd: Cdd,
}

impl JumpEstimate {
    /// Build an estimate directly from known parameters.
    pub fn from_parameters(xi: f64, magnitudes: Vec<f64>) -> Self {
        let omega_dd = crate::dd::expi(-Dd::from_f64(xi));
        JumpEstimate {
            omega: to_c64(omega_dd),
            xi,
            magnitudes_complex: magnitudes.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
            magnitudes,
            diagnostics: JumpDiagnostics {
                root_set: Vec::new(),
                root_residuals: Vec::new(),
                predicted_spurious: Vec::new(),
                magnitude_residual: 0.0,
                modulus_clamped: false,
            },
            omega_dd,
        }
    }

    pub fn order(&self) -> usize {
        self.magnitudes.len() - 1
    }

    /// `|xi_est - xi_true|` on the circle, resolved below `f64` spacing by
    /// forming `omega_est * e^{i xi_true}` in double-double.
    pub fn location_error(&self, xi_true: f64) -> f64 {
        let z = self.omega_dd * crate::dd::expi(Dd::from_f64(xi_true));
        z.im.to_f64().atan2(z.re.to_f64()).abs()
    }

    pub fn omega_dd(&self) -> Cdd {
        self.omega_dd
    }
}

/// Location and magnitudes of a single jump at order `d` from base index `m`.
pub fn estimate_jump(window: &FourierWindow, d: usize, m: i64) -> Result<JumpEstimate> {
    let (omega, set) = locate_jump(window, d, m)?;
    let mags = solve_magnitudes(window, omega, d, m)?;
    let omega_c = to_c64(omega);
    let xi = wrap_angle(-omega_c.arg());
    Ok(JumpEstimate {
        omega: omega_c,
        xi,
        magnitudes: mags.complex.iter().map(|a| a.re).collect(),
        magnitudes_complex: mags.complex,
        diagnostics: JumpDiagnostics {
            root_set: set.roots_c64(),
            root_residuals: set.residuals.clone(),
            predicted_spurious: predicted_spurious(omega_c, d, m)?,
            magnitude_residual: mags.imaginary_residue,
            modulus_clamped: mags.modulus_clamped,
        },
        omega_dd: omega,
    })
}
