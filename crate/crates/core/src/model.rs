//! Ground-truth piecewise-smooth functions.
//!
//! A [`TestFunction`] is a singular part (jumps with magnitudes for each
//! derivative order, expanded in the periodic Bernoulli basis `V_l`) plus a
//! finite real trigonometric polynomial. Both pieces have closed-form Fourier
//! coefficients, so the function can serve as an exact oracle for every
//! reconstruction stage.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dd::{cdd, cdd_from, cpowi, expi, to_c64, Cdd, Dd};
use crate::error::{Error, Result};

/// Highest Bernoulli degree available.
pub const MAX_BERNOULLI: usize = 30;
/// Highest basis order `l` accepted by [`basis_v`].
pub const MAX_ORDER: usize = 15;

/// Exact Bernoulli numbers `B_0..=B_30` (with `B_1 = -1/2`).
pub fn bernoulli_numbers() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut b: Vec<BigRational> = Vec::with_capacity(MAX_BERNOULLI + 1);
        b.push(BigRational::one());
        for m in 1..=MAX_BERNOULLI {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one(); // C(m+1, k)
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

fn bernoulli_coeffs() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let b = bernoulli_numbers();
        (0..=MAX_BERNOULLI)
            .map(|n| {
                let mut binom = BigInt::one();
                (0..=n)
                    .map(|k| {
                        let c = BigRational::from_integer(binom.clone()) * &b[n - k];
                        binom = binom.clone() * BigInt::from(n - k) / BigInt::from(k + 1);
                        c.to_f64().unwrap_or(f64::NAN)
                    })
                    .collect()
            })
            .collect()
    })
}

/// Bernoulli polynomial `B_n(x)`.
pub fn bernoulli(n: usize, x: f64) -> Result<f64> {
    if n > MAX_BERNOULLI {
        return Err(Error::UnsupportedDegree {
            n,
            max: MAX_BERNOULLI,
        });
    }
    Ok(bernoulli_coeffs()[n]
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x + c))
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, i| a * i as f64)
}

/// `V_l(x; xi) = -(2pi)^l / (l+1)! * B_{l+1}(t)` where `t` is `(x - xi)/2pi`
/// wrapped into `[0, 1)`. At `x = xi` this is the right limit.
///
/// The `l`-th derivative of `V_l` jumps by exactly 1 at `xi`; lower
/// derivatives are continuous.
pub fn basis_v(l: usize, x: f64, xi: f64) -> Result<f64> {
    if l > MAX_ORDER {
        return Err(Error::UnsupportedDegree { n: l, max: MAX_ORDER });
    }
    Ok(basis_v_unchecked(l, x, xi))
}

fn basis_v_unchecked(l: usize, x: f64, xi: f64) -> f64 {
    let mut t = (x - xi).rem_euclid(TAU) / TAU;
    if t >= 1.0 {
        t = 0.0;
    }
    let b = bernoulli_coeffs()[l + 1].iter().rev().fold(0.0, |a, &c| a * t + c);
    -TAU.powi(l as i32) / factorial(l + 1) * b
}

/// Bounds used by the synthesis and the reconstruction assumptions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    /// Lower bound on the largest |A_0|.
    pub j1: f64,
    /// Upper bound on every |A_l|.
    pub j2: f64,
    /// Minimal circular distance between jumps.
    pub j3: f64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            j1: 0.5,
            j2: 2.0,
            j3: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub xi: f64,
    pub magnitudes: Vec<f64>,
}

/// Circular distance on the unit circle parametrised by angle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Wrap an angle into `[-pi, pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y >= PI {
        y - TAU
    } else {
        y
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPart {
    jumps: Vec<Jump>,
    d1: usize,
}

impl SingularPart {
    /// Every jump must lie in `[-pi, pi)`, locations strictly increasing, and
    /// carry exactly `d1 + 1` magnitudes.
    pub fn new(jumps: Vec<Jump>, d1: usize) -> Result<Self> {
        if d1 > MAX_ORDER {
            return Err(Error::UnsupportedDegree { n: d1, max: MAX_ORDER });
        }
        for (j, jump) in jumps.iter().enumerate() {
            if !(-PI..PI).contains(&jump.xi) {
                return Err(Error::Config(format!(
                    "jump {j} at {} outside [-pi, pi)",
                    jump.xi
                )));
            }
            if jump.magnitudes.len() != d1 + 1 {
                return Err(Error::Config(format!(
                    "jump {j} has {} magnitudes, expected {}",
                    jump.magnitudes.len(),
                    d1 + 1
                )));
            }
            if jump.magnitudes.iter().any(|a| !a.is_finite()) {
                return Err(Error::Config(format!("jump {j} has non-finite magnitude")));
            }
        }
        if jumps.windows(2).any(|w| w[0].xi >= w[1].xi) {
            return Err(Error::Config("jump locations must be strictly increasing".into()));
        }
        Ok(SingularPart { jumps, d1 })
    }

    pub fn empty(d1: usize) -> Self {
        SingularPart { jumps: Vec::new(), d1 }
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn len(&self) -> usize {
        self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jumps.is_empty()
    }

    pub fn xis(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.xi).collect()
    }

    /// Smallest circular distance between two jumps (`2pi` for a single jump).
    pub fn min_separation(&self) -> f64 {
        let n = self.jumps.len();
        if n < 2 {
            return TAU;
        }
        (0..n)
            .map(|i| circular_distance(self.jumps[i].xi, self.jumps[(i + 1) % n].xi))
            .fold(f64::INFINITY, f64::min)
    }

    /// Value of `sum_j sum_{l<=d} A_{l,j} V_l(x; xi_j)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.jumps
            .iter()
            .map(|j| {
                j.magnitudes
                    .iter()
                    .enumerate()
                    .map(|(l, a)| a * basis_v_unchecked(l, x, j.xi))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Coefficients of the order-`d` truncation over `lo..=hi`, in double-double.
    pub fn fourier_window(&self, d: usize, lo: i64, hi: i64) -> FourierWindow {
        let n = (hi - lo + 1).max(0) as usize;
        let mut values = vec![cdd(0.0, 0.0); n];
        let d = d.min(self.d1);
        for jump in &self.jumps {
            let omega = expi(-Dd::from_f64(jump.xi));
            let mut wk = cpowi(omega, lo);
            for (i, v) in values.iter_mut().enumerate() {
                let k = lo + i as i64;
                if k != 0 {
                    *v = *v + wk * inner_sum(&jump.magnitudes[..=d], k);
                }
                wk = wk * omega;
            }
        }
        let scale = Dd::ONE / Dd::TWO_PI;
        for v in values.iter_mut() {
            *v = Cdd::new(v.re * scale, v.im * scale);
        }
        FourierWindow::new(lo, values)
    }
}

/// `sum_l (ik)^{-l-1} A_l` by Horner in `1/(ik)`.
fn inner_sum(mags: &[f64], k: i64) -> Cdd {
    // 1/(ik) = -i/k
    let inv = Cdd::new(Dd::ZERO, -(Dd::ONE / Dd::from_f64(k as f64)));
    let mut acc = cdd(0.0, 0.0);
    for a in mags.iter().rev() {
        acc = (acc + cdd(*a, 0.0)) * inv;
    }
    acc
}

/// `c_k(Phi)` for the order-`d` truncation of `s`, in double-double.
///
/// `c_0` is zero by normalization; any mean belongs to the smooth part.
pub fn singular_fourier_dd(s: &SingularPart, d: usize, k: i64) -> Cdd {
    if k == 0 {
        return cdd(0.0, 0.0);
    }
    let d = d.min(s.d1);
    let mut acc = cdd(0.0, 0.0);
    for jump in &s.jumps {
        let phase = expi(-(Dd::from_f64(jump.xi) * k as f64));
        acc = acc + phase * inner_sum(&jump.magnitudes[..=d], k);
    }
    let scale = Dd::ONE / Dd::TWO_PI;
    Cdd::new(acc.re * scale, acc.im * scale)
}

/// `c_k(Phi) = (1/2pi) sum_j e^{-ik xi_j} sum_{l<=d} (ik)^{-l-1} A_{l,j}`.
pub fn singular_fourier(s: &SingularPart, d: usize, k: i64) -> Complex64 {
    to_c64(singular_fourier_dd(s, d, k))
}

/// Finite real trigonometric polynomial stored by its coefficients for
/// `k = 0..=N`; negative indices follow from conjugate symmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothPart {
    coeffs: Vec<Complex64>,
    decay_order: usize,
    bound: f64,
}

impl SmoothPart {
    /// Checks `f_0` real and `|f_k| <= R k^{-d1-2}` for `k >= 1`.
    pub fn new(coeffs: Vec<Complex64>, decay_order: usize, bound: f64) -> Result<Self> {
        if let Some(f0) = coeffs.first() {
            if f0.im != 0.0 {
                return Err(Error::Config("smooth part: f_0 must be real".into()));
            }
        }
        for (k, c) in coeffs.iter().enumerate().skip(1) {
            let lim = bound * (k as f64).powi(-(decay_order as i32) - 2);
            if !(c.norm() <= lim * (1.0 + 1e-12)) {
                return Err(Error::Config(format!(
                    "smooth part: |f_{k}| = {:e} exceeds R k^(-d1-2) = {lim:e}",
                    c.norm()
                )));
            }
        }
        Ok(SmoothPart {
            coeffs,
            decay_order,
            bound,
        })
    }

    pub fn zero(decay_order: usize) -> Self {
        SmoothPart {
            coeffs: vec![Complex64::new(0.0, 0.0)],
            decay_order,
            bound: 1.0,
        }
    }

    /// `f_k` for any integer `k`; zero beyond the stored bandwidth.
    pub fn coeff(&self, k: i64) -> Complex64 {
        match self.coeffs.get(k.unsigned_abs() as usize) {
            Some(c) if k < 0 => c.conj(),
            Some(c) => *c,
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// Stored coefficients for `k = 0..=N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn bandwidth(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn decay_order(&self) -> usize {
        self.decay_order
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn eval(&self, x: f64) -> f64 {
        let Some(f0) = self.coeffs.first() else {
            return 0.0;
        };
        let step = Complex64::from_polar(1.0, x);
        let mut e = step;
        let mut acc = 0.0;
        for c in &self.coeffs[1..] {
            acc += (c * e).re;
            e *= step;
        }
        f0.re + 2.0 * acc
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub singular: SingularPart,
    pub smooth: SmoothPart,
    pub seed: Option<u64>,
    pub bounds: Option<Bounds>,
}

impl TestFunction {
    pub fn new(singular: SingularPart, smooth: SmoothPart) -> Self {
        TestFunction {
            singular,
            smooth,
            seed: None,
            bounds: None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.singular.eval(x) + self.smooth.eval(x)
    }

    /// Exact coefficients over `lo..=hi` with the singular part truncated at
    /// order `d_use` (clamped to the stored order).
    pub fn window(&self, d_use: usize, lo: i64, hi: i64) -> FourierWindow {
        let mut w = self.singular.fourier_window(d_use, lo, hi);
        for (i, v) in w.values.iter_mut().enumerate() {
            *v = *v + cdd_from(self.smooth.coeff(lo + i as i64));
        }
        w.symmetric = lo == -hi;
        w
    }

    /// Full-order window `-n..=n`.
    pub fn symmetric_window(&self, n: i64) -> FourierWindow {
        self.window(self.singular.d1, -n, n)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = TestFunctionDoc {
            schema: SCHEMA,
            seed: self.seed,
            bounds: self.bounds,
            jumps: self.singular.jumps.clone(),
            smooth: SmoothDoc {
                d1: self.smooth.decay_order,
                r: self.smooth.bound,
                coeffs: self
                    .smooth
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| CoeffDoc {
                        k: k as i64,
                        re: c.re,
                        im: c.im,
                    })
                    .collect(),
            },
        };
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TestFunctionDoc = serde_json::from_str(text)?;
        if doc.schema != SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {}", doc.schema)));
        }
        let d1 = doc
            .jumps
            .first()
            .map(|j| j.magnitudes.len().saturating_sub(1))
            .unwrap_or(doc.smooth.d1);
        let singular = SingularPart::new(doc.jumps, d1)?;
        let n = doc.smooth.coeffs.iter().map(|c| c.k).max().unwrap_or(0);
        if doc.smooth.coeffs.iter().any(|c| c.k < 0) {
            return Err(Error::Parse("smooth coefficients must have k >= 0".into()));
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n as usize + 1];
        for c in doc.smooth.coeffs {
            coeffs[c.k as usize] = Complex64::new(c.re, c.im);
        }
        let smooth = SmoothPart::new(coeffs, doc.smooth.d1, doc.smooth.r)?;
        Ok(TestFunction {
            singular,
            smooth,
            seed: doc.seed,
            bounds: doc.bounds,
        })
    }
}

/// `c_k(Phi_{d_use}) + f_k`.
pub fn exact_fourier(f: &TestFunction, d_use: usize, k: i64) -> Complex64 {
    singular_fourier(&f.singular, d_use, k) + f.smooth.coeff(k)
}

/// Random function in the style of the convergence experiments.
///
/// * locations: `K` gaps of at least `J3`, the remaining slack split at
///   sorted uniform cut points, then rotated by a uniform offset;
/// * `A_0 = +-U[J1, J2]`, `A_l ~ U[-J2, J2]` for `l >= 1`;
/// * `f_k = c k^{-d1-2} e^{i theta}` with `c ~ U[0.1, 1]`, `theta` uniform,
///   for `1 <= k <= n_smooth`; `f_0 ~ U[-1, 1]`; `R = 1`.
pub fn synth_random(
    k_jumps: usize,
    d1: usize,
    n_smooth: usize,
    seed: u64,
    bounds: Bounds,
) -> Result<TestFunction> {
    if d1 > MAX_ORDER {
        return Err(Error::UnsupportedDegree { n: d1, max: MAX_ORDER });
    }
    if !(bounds.j3 > 0.0) || k_jumps as f64 * bounds.j3 >= TAU {
        return Err(Error::Config(format!(
            "infeasible geometry: K*J3 = {} must be below 2pi",
            k_jumps as f64 * bounds.j3
        )));
    }
    if !(bounds.j1 > 0.0 && bounds.j1 <= bounds.j2) {
        return Err(Error::Config("need 0 < J1 <= J2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let slack = TAU - k_jumps as f64 * bounds.j3;
    let mut cuts: Vec<f64> = (0..k_jumps).map(|_| rng.gen::<f64>() * slack).collect();
    cuts.sort_by(f64::total_cmp);
    let offset = rng.gen::<f64>() * TAU;
    let mut xis: Vec<f64> = cuts
        .iter()
        .enumerate()
        .map(|(j, u)| wrap_angle(u + j as f64 * bounds.j3 + offset))
        .collect();
    xis.sort_by(f64::total_cmp);

    let jumps = xis
        .into_iter()
        .map(|xi| {
            let mut mags = Vec::with_capacity(d1 + 1);
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            mags.push(sign * rng.gen_range(bounds.j1..=bounds.j2));
            for _ in 0..d1 {
                mags.push(rng.gen_range(-bounds.j2..=bounds.j2));
            }
            Jump { xi, magnitudes: mags }
        })
        .collect();
    let singular = SingularPart::new(jumps, d1)?;

    let mut coeffs = Vec::with_capacity(n_smooth + 1);
    coeffs.push(Complex64::new(rng.gen_range(-1.0..=1.0), 0.0));
    for k in 1..=n_smooth {
        let c = rng.gen_range(0.1..=1.0);
        let theta = rng.gen::<f64>() * TAU;
        coeffs.push(Complex64::from_polar(
            c * (k as f64).powi(-(d1 as i32) - 2),
            theta,
        ));
    }
    let smooth = SmoothPart::new(coeffs, d1, 1.0)?;
    Ok(TestFunction {
        singular,
        smooth,
        seed: Some(seed),
        bounds: Some(bounds),
    })
}

/// A contiguous block of Fourier coefficients `c_k`, `k = first_index..`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierWindow {
    first_index: i64,
    values: Vec<Cdd>,
    symmetric: bool,
}

impl FourierWindow {
    pub fn new(first_index: i64, values: Vec<Cdd>) -> Self {
        FourierWindow {
            first_index,
            values,
            symmetric: false,
        }
    }

    pub fn from_c64(first_index: i64, values: &[Complex64]) -> Self {
        FourierWindow::new(first_index, values.iter().map(|&z| cdd_from(z)).collect())
    }

    /// Window over `-n..=n`, checked for `c_{-k} = conj(c_k)` to `1e-12` relative.
    pub fn symmetric(values: Vec<Cdd>) -> Result<Self> {
        if values.len() % 2 != 1 {
            return Err(Error::Config("symmetric window needs odd length".into()));
        }
        let n = (values.len() / 2) as i64;
        let w = FourierWindow {
            first_index: -n,
            values,
            symmetric: true,
        };
        if !w.conjugate_symmetric_within(1e-12) {
            return Err(Error::Config("window is not conjugate symmetric".into()));
        }
        Ok(w)
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn values(&self) -> &[Cdd] {
        &self.values
    }

    pub fn contains(&self, k: i64) -> bool {
        k >= self.first_index && k <= self.last_index()
    }

    /// Require `lo..=hi` to lie inside the window.
    pub fn require(&self, lo: i64, hi: i64) -> Result<()> {
        for k in [lo, hi] {
            if !self.contains(k) {
                return Err(Error::Range {
                    index: k,
                    lo: self.first_index,
                    hi: self.last_index(),
                });
            }
        }
        Ok(())
    }

    pub fn get(&self, k: i64) -> Result<Cdd> {
        if !self.contains(k) {
            return Err(Error::Range {
                index: k,
                lo: self.first_index,
                hi: self.last_index(),
            });
        }
        Ok(self.values[(k - self.first_index) as usize])
    }

    pub fn get_c64(&self, k: i64) -> Result<Complex64> {
        self.get(k).map(to_c64)
    }

    /// Sub-window `lo..=hi`.
    pub fn slice(&self, lo: i64, hi: i64) -> Result<FourierWindow> {
        self.require(lo, hi)?;
        let a = (lo - self.first_index) as usize;
        let b = (hi - self.first_index) as usize;
        Ok(FourierWindow {
            first_index: lo,
            values: self.values[a..=b].to_vec(),
            symmetric: lo == -hi && self.symmetric,
        })
    }

    /// Check `c_{-k} = conj(c_k)` for every mirrored pair inside the window.
    pub fn conjugate_symmetric_within(&self, rel: f64) -> bool {
        let scale = self
            .values
            .iter()
            .map(|z| to_c64(*z).norm())
            .fold(0.0, f64::max);
        let n = self.first_index.abs().min(self.last_index().abs());
        (0..=n).all(|k| match (self.get_c64(k), self.get_c64(-k)) {
            (Ok(a), Ok(b)) => (a - b.conj()).norm() <= rel * scale.max(f64::MIN_POSITIVE),
            _ => true,
        })
    }
}

const SCHEMA: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TestFunctionDoc {
    schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bounds: Option<Bounds>,
    jumps: Vec<Jump>,
    smooth: SmoothDoc,
}

#[derive(Serialize, Deserialize)]
struct SmoothDoc {
    d1: usize,
    #[serde(rename = "R")]
    r: f64,
    coeffs: Vec<CoeffDoc>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct CoeffDoc {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Bernoulli numbers from the defining generating-function recurrence,
    /// computed independently in plain rationals of i128.
    fn bernoulli_oracle(n: usize, x: f64) -> f64 {
        // B_n(x) = sum_k C(n,k) B_k x^{n-k}, B_k via sum_{j<=m} C(m+1,j) B_j = 0
        let mut b: Vec<(i128, i128)> = vec![(1, 1)];
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let binom = |n: i128, k: i128| -> i128 {
            let mut c = 1i128;
            for i in 0..k {
                c = c * (n - i) / (i + 1);
            }
            c
        };
        for m in 1..=n as i128 {
            let (mut num, mut den) = (0i128, 1i128);
            for (j, &(bn, bd)) in b.iter().enumerate() {
                let c = binom(m + 1, j as i128);
                num = num * bd + c * bn * den;
                den *= bd;
                let g = gcd(num, den);
                num /= g;
                den /= g;
            }
            let (num, den) = (-num, den * (m + 1));
            let g = gcd(num, den);
            b.push((num / g, den / g));
        }
        (0..=n)
            .map(|k| binom(n as i128, k as i128) as f64 * b[k].0 as f64 / b[k].1 as f64
                * x.powi((n - k) as i32))
            .sum()
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(1, 0.5).unwrap(), 0.0);
        assert_eq!(bernoulli(0, 7.3).unwrap(), 1.0);
        assert!((bernoulli(2, 0.0).unwrap() - 1.0 / 6.0).abs() < 1e-16);
        assert!(matches!(
            bernoulli(31, 0.2),
            Err(Error::UnsupportedDegree { .. })
        ));
    }

    #[test]
    fn bernoulli_matches_recurrence_oracle() {
        for n in 0..=14 {
            for &x in &[0.0, 0.13, 0.5, 0.77, 1.0] {
                let a = bernoulli(n, x).unwrap();
                let b = bernoulli_oracle(n, x);
                assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn bernoulli_30_number() {
        // B_30 = 8615841276005 / 14322
        let b = &bernoulli_numbers()[30];
        assert_eq!(b.numer().to_string(), "8615841276005");
        assert_eq!(b.denom().to_string(), "14322");
    }

    #[test]
    fn v0_has_unit_jump() {
        let xi = 0.4;
        let eps = 1e-12;
        let right = basis_v(0, xi + eps, xi).unwrap();
        let left = basis_v(0, xi - eps, xi).unwrap();
        assert!((right - 0.5).abs() < 1e-10);
        assert!((left + 0.5).abs() < 1e-10);
        assert_eq!(basis_v(0, xi, xi).unwrap(), 0.5);
    }

    #[test]
    fn v1_at_antipode() {
        let v = basis_v(1, 0.3 + PI, 0.3).unwrap();
        assert!((v - PI / 12.0).abs() < 1e-14);
    }

    fn binom(n: usize, k: usize) -> f64 {
        (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64)
    }

    /// One-sided m-th derivative by forward (`dir = 1`) or backward differences.
    fn one_sided(g: &dyn Fn(f64) -> f64, x0: f64, m: usize, h: f64, dir: f64) -> f64 {
        let sum: f64 = (0..=m)
            .map(|j| (-1f64).powi(j as i32) * binom(m, j) * g(x0 + dir * (m - j) as f64 * h))
            .sum();
        sum * dir.powi(m as i32) / h.powi(m as i32)
    }

    #[test]
    fn basis_derivative_jumps() {
        let xi = -0.9;
        let h = 1e-3;
        for l in 0..=4usize {
            let g = |x: f64| basis_v(l, x, xi).unwrap();
            for m in 0..=l {
                let jump = one_sided(&g, xi, m, h, 1.0) - one_sided(&g, xi - 1e-12, m, h, -1.0);
                let want = if m == l { 1.0 } else { 0.0 };
                assert!((jump - want).abs() < 0.02, "l={l} m={m} jump={jump}");
            }
        }
    }

    #[test]
    fn singular_fourier_simple_cases() {
        let s = SingularPart::new(vec![Jump { xi: 0.0, magnitudes: vec![TAU] }], 0).unwrap();
        let c = singular_fourier(&s, 0, 5);
        assert!((c - Complex64::new(0.0, -0.2)).norm() < 1e-16);
        assert_eq!(singular_fourier(&s, 0, 0), Complex64::new(0.0, 0.0));

        let s = SingularPart::new(
            vec![Jump { xi: PI / 2.0, magnitudes: vec![1.0, 1.0] }],
            1,
        )
        .unwrap();
        let i = Complex64::i();
        let want = Complex64::from_polar(1.0, -PI) / TAU * (1.0 / (2.0 * i) + 1.0 / ((2.0 * i) * (2.0 * i)));
        assert!((singular_fourier(&s, 1, 2) - want).norm() < 1e-15);
    }

    #[test]
    fn window_matches_pointwise() {
        let f = synth_random(3, 4, 40, 7, Bounds { j1: 0.5, j2: 2.0, j3: 1.0 }).unwrap();
        let w = f.symmetric_window(60);
        for k in -60..=60 {
            let a = w.get_c64(k).unwrap();
            let b = exact_fourier(&f, 4, k);
            assert!((a - b).norm() < 1e-15 * (1.0 + b.norm()), "k={k}");
        }
        assert!(w.conjugate_symmetric_within(1e-14));
        assert!(w.is_symmetric());
    }

    #[test]
    fn synth_is_deterministic_and_bounded() {
        let b = Bounds { j1: 0.5, j2: 2.0, j3: 1.2 };
        let f = synth_random(4, 6, 100, 11, b).unwrap();
        let g = synth_random(4, 6, 100, 11, b).unwrap();
        assert_eq!(f, g);
        assert!(f.singular.min_separation() >= 1.2 - 1e-12);
        for j in f.singular.jumps() {
            assert!(j.magnitudes[0].abs() >= 0.5 && j.magnitudes[0].abs() <= 2.0);
        }
        for k in 1..=100usize {
            let r = f.smooth.coeff(k as i64).norm() * (k as f64).powi(8);
            assert!((0.1 - 1e-12..=1.0 + 1e-12).contains(&r));
        }
        assert!(matches!(synth_random(6, 2, 10, 1, b), Err(Error::Config(_))));
    }

    #[test]
    fn eval_of_constant() {
        let smooth = SmoothPart::new(vec![Complex64::new(1.0, 0.0)], 0, 1.0).unwrap();
        let f = TestFunction::new(SingularPart::empty(0), smooth);
        for x in [-3.0, 0.0, 2.5] {
            assert_eq!(f.eval(x), 1.0);
        }
    }

    #[test]
    fn json_roundtrip() {
        let f = synth_random(2, 3, 20, 3, Bounds::default()).unwrap();
        let s = f.to_json().unwrap();
        let g = TestFunction::from_json(&s).unwrap();
        assert_eq!(f, g);
        assert_eq!(s, g.to_json().unwrap());
    }

    proptest! {
        #[test]
        fn conjugate_symmetry(seed in 0u64..1000, k in 1i64..200) {
            let f = synth_random(2, 5, 64, seed, Bounds::default()).unwrap();
            let a = exact_fourier(&f, 5, k);
            let b = exact_fourier(&f, 5, -k);
            prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
        }

        #[test]
        fn eval_is_periodic(seed in 0u64..100, x in -3.0f64..3.0) {
            let f = synth_random(2, 3, 16, seed, Bounds::default()).unwrap();
            let a = f.eval(x);
            let b = f.eval(x + TAU);
            prop_assert!((a - b).abs() < 1e-9);
        }
    }
}
