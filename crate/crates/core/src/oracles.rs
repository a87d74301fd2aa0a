//! Combinatorial identities behind the eliminant and the magnitude solve,
//! implemented independently so they can serve as test oracles.
//!
//! `Delta g(k) = g(k+1) - g(k)`, so `Delta^d g(k) = sum_j (-1)^{d-j} C(d,j) g(k+j)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `C(n, j)` as a big integer.
pub fn binomial(n: u64, j: u64) -> BigInt {
    if j > n {
        return BigInt::zero();
    }
    let j = j.min(n - j);
    (0..j).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn binomial_f64(n: u64, j: u64) -> f64 {
    binomial(n, j).to_f64().unwrap_or(f64::INFINITY)
}

/// `Delta^d g(k)` for a complex valued sequence.
pub fn difference_power(g: impl Fn(i64) -> Complex64, d: u32, k: i64) -> Complex64 {
    (0..=d)
        .map(|j| {
            let sign = if (d - j) % 2 == 0 { 1.0 } else { -1.0 };
            g(k + j as i64) * (sign * binomial_f64(d as u64, j as u64))
        })
        .sum()
}

/// `Delta^d g(k)` in exact integers.
pub fn difference_power_exact(g: impl Fn(i64) -> BigInt, d: u32, k: i64) -> BigInt {
    (0..=d)
        .map(|j| {
            let term = binomial(d as u64, j as u64) * g(k + j as i64);
            if (d - j) % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `F(d,t,s) = sum_{j=s}^{d+1} (-1)^j C(j,s) C(d+1,j) j^{d-t}`.
pub fn script_f(d: u32, t: u32, s: u32) -> BigInt {
    assert!(t <= d && s <= d + 1, "script_f needs t <= d, s <= d+1");
    (s..=d + 1)
        .map(|j| {
            let term = binomial(j as u64, s as u64)
                * binomial(d as u64 + 1, j as u64)
                * BigInt::from(j).pow(d - t);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `sum_{j=0}^{d} (-1)^j C(d,j) / (k+j)^l`, summed exactly and rounded once.
pub fn binom_fraction_sum(l: u32, d: u32, k: u64) -> f64 {
    let mut acc = BigRational::zero();
    for j in 0..=d {
        let den = BigInt::from(k + j as u64).pow(l);
        let term = BigRational::new(binomial(d as u64, j as u64), den);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    ratio_to_f64(&acc)
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() && (v != 0.0 || r.is_zero()) {
            return v;
        }
    }
    // scale into range by powers of two
    let num = r.numer().abs();
    let den = r.denom().abs();
    let shift = num.bits() as i64 - den.bits() as i64;
    let scaled = if shift > 0 {
        BigRational::new(num, den << shift as usize)
    } else {
        BigRational::new(num << (-shift) as usize, den)
    };
    let v = scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32);
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// `b_k = omega^k sum_i a_i k^i`.
pub fn basic_sequence(omega: Complex64, a: &[Complex64], k: i64) -> Complex64 {
    let p = a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * k as f64 + c);
    omega.powi(k as i32) * p
}

/// `sum_j (-1)^j C(n+1,j) b_{k+j} omega^{n+1-j}`, which vanishes when
/// `deg p <= n`. Returns the residual and the sum of the term moduli.
pub fn basic_recurrence_residual(omega: Complex64, a: &[Complex64], n: u32, k: i64) -> (Complex64, f64) {
    let mut res = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for j in 0..=n + 1 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = basic_sequence(omega, a, k + j as i64)
            * omega.powi((n + 1 - j) as i32)
            * (sign * binomial_f64(n as u64 + 1, j as u64));
        scale += term.norm();
        res += term;
    }
    (res, scale)
}

/// Outcome of one family of identity checks.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> IdentityCheck {
    IdentityCheck { name, passed, detail }
}

fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>()
}

/// Every identity family, with deterministic random draws from `seed`.
pub fn identity_suite(seed: u64) -> Vec<IdentityCheck> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut bad = 0;
    let mut cases = 0;
    for d in 0..=8u32 {
        for s in 0..=d + 1 {
            for t in s..=d {
                cases += 1;
                bad += usize::from(!script_f(d, t, s).is_zero());
            }
            if s >= 1 {
                cases += 1;
                let sign = if (d + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                let fact = (1..=d + 1 - s).fold(BigInt::one(), |a, i| a * BigInt::from(i));
                let want = sign * fact * binomial(d as u64 + 1, s as u64);
                bad += usize::from(script_f(d, s - 1, s) != want);
            }
        }
    }
    out.push(check("script_F zero and closed form, d <= 8", bad == 0, format!("{bad} of {cases} mismatched")));

    let mut bad = 0;
    for _ in 0..500 {
        let n = rng.gen_range(0..=6usize);
        let coeffs: Vec<i64> = (0..=n).map(|_| rng.gen_range(-100..=100)).collect();
        let lead = if coeffs[n] == 0 { 1 } else { coeffs[n] };
        let mut c = coeffs.clone();
        c[n] = lead;
        let k = rng.gen_range(-1000..=1000i64);
        let p = |x: i64| c.iter().rev().fold(BigInt::zero(), |acc, &a| acc * BigInt::from(x) + BigInt::from(a));
        let fact = (1..=n as u32).fold(BigInt::one(), |a, i| a * BigInt::from(i));
        if difference_power_exact(p, n as u32, k) != BigInt::from(lead) * fact
            || !difference_power_exact(p, n as u32 + 1, k).is_zero()
        {
            bad += 1;
        }
    }
    out.push(check("difference_power on polynomials", bad == 0, format!("{bad} of 500 failed")));

    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.gen_range(0..=5u32);
        let w = Complex64::from_polar(rng.gen_range(0.9..1.1), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        let a: Vec<Complex64> = (0..=n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let k = rng.gen_range(0..=100i64);
        let (r, scale) = basic_recurrence_residual(w, &a, n, k);
        if scale > 0.0 {
            worst = worst.max(r.norm() / scale);
        }
    }
    out.push(check(
        "basic recurrence residual <= 1e-9 relative",
        worst <= 1e-9,
        format!("worst relative residual {worst:.3e} over 500 cases"),
    ));

    let ks: Vec<u64> = (0..=30).map(|i| (100.0 * 1000f64.powf(i as f64 / 30.0)).round() as u64).collect();
    let xs: Vec<f64> = ks.iter().map(|&k| (k as f64).log10()).collect();
    let mut worst: f64 = 0.0;
    for l in 1..=3u32 {
        for d in 1..=3u32 {
            let ys: Vec<f64> = ks.iter().map(|&k| binom_fraction_sum(l, d, k).abs().log10()).collect();
            worst = worst.max((fitted_slope(&xs, &ys) + (d + l) as f64).abs());
        }
    }
    out.push(check(
        "binom_fraction_sum decays like k^-(d+l)",
        worst <= 0.05,
        format!("largest slope deviation {worst:.4}"),
    ));
    out
}
