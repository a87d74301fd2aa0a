//! Double-double arithmetic.
//!
//! A [`Dd`] carries an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 32 significant decimal digits on top of ordinary `f64`
//! hardware. The eliminant polynomials and the magnitude solves amplify
//! relative rounding in the input coefficients by `M^d`, so the single-jump
//! data path runs in this type. Everything here is built from the classical
//! error-free transformations (`two_sum`, `two_prod`).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Num, One, Zero};

/// Complex number with double-double components.
pub type Cdd = Complex<Dd>;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };
    pub const TWO_PI: Dd = Dd {
        hi: std::f64::consts::TAU,
        lo: 2.449_293_598_294_706_4e-16,
    };
    pub const FRAC_PI_2: Dd = Dd {
        hi: std::f64::consts::FRAC_PI_2,
        lo: 6.123_233_995_736_766e-17,
    };

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (s, e) = two_sum(a, b);
        Dd { hi: s, lo: e }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Self {
        let (p, e) = two_prod(a, b);
        Dd { hi: p, lo: e }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = 1.0 / self.hi.sqrt();
        let y = self.hi * x;
        let (p, e) = two_prod(y, y);
        let diff = self - Dd::new(p, e);
        let corr = diff.hi * (x * 0.5);
        Dd::from_sum(y, corr)
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base.sqr();
            e >>= 1;
        }
        if n < 0 {
            Dd::ONE / acc
        } else {
            acc
        }
    }

    /// Nearest integer, as a double.
    pub fn round(self) -> f64 {
        let r = self.hi.round();
        if r == self.hi {
            // hi is integral; the low word decides ties and carries.
            let lr = self.lo.round();
            let (s, _) = quick_two_sum(r, lr);
            s
        } else if (r - self.hi).abs() == 0.5 {
            // exact tie in hi, resolved by the sign of lo
            if self.lo > 0.0 {
                self.hi.ceil()
            } else if self.lo < 0.0 {
                self.hi.floor()
            } else {
                r
            }
        } else {
            r
        }
    }

    /// Sine and cosine evaluated to double-double accuracy.
    pub fn sin_cos(self) -> (Dd, Dd) {
        if !self.is_finite() {
            return (Dd::from_f64(f64::NAN), Dd::from_f64(f64::NAN));
        }
        let n = (self / Dd::TWO_PI).round();
        let x = self - Dd::TWO_PI * n;
        let q = (x / Dd::FRAC_PI_2).round();
        let t = x - Dd::FRAC_PI_2 * q;
        let (s, c) = taylor_sin_cos(t);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }

    pub fn cos(self) -> Dd {
        self.sin_cos().1
    }
}

/// Taylor series for `|t| <= pi/4`.
fn taylor_sin_cos(t: Dd) -> (Dd, Dd) {
    let t2 = t * t;
    let mut term = t;
    let mut sin = t;
    let mut k = 1.0;
    loop {
        term = -(term * t2) / ((k + 1.0) * (k + 2.0));
        k += 2.0;
        sin += term;
        if term.hi.abs() < 1e-36 || k > 60.0 {
            break;
        }
    }
    let mut term = Dd::ONE;
    let mut cos = Dd::ONE;
    let mut k = 0.0;
    loop {
        term = -(term * t2) / ((k + 1.0) * (k + 2.0));
        k += 2.0;
        cos += term;
        if term.hi.abs() < 1e-36 || k > 60.0 {
            break;
        }
    }
    (sin, cos)
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}{:+e}", self.hi, self.lo)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: f64) -> Dd {
        let (s, e) = two_sum(self.hi, b);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: f64) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + q3
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        self / Dd::from_f64(b)
    }
}

impl Rem for Dd {
    type Output = Dd;
    fn rem(self, b: Dd) -> Dd {
        let n = (self / b).hi.trunc();
        self - b * n
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt $rhs:ty;)*) => {$(
        impl $tr<$rhs> for Dd {
            #[inline]
            fn $m(&mut self, b: $rhs) {
                *self = *self $op b;
            }
        }
    )*};
}

assign_ops! {
    AddAssign add_assign + Dd;
    AddAssign add_assign + f64;
    SubAssign sub_assign - Dd;
    SubAssign sub_assign - f64;
    MulAssign mul_assign * Dd;
    MulAssign mul_assign * f64;
    DivAssign div_assign / Dd;
    DivAssign div_assign / f64;
}

impl Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::ZERO, |a, b| a + b)
    }
}

impl Zero for Dd {
    fn zero() -> Self {
        Dd::ZERO
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd::ONE
    }
}

impl Num for Dd {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        s.parse::<f64>().map(Dd::from_f64)
    }
}

// ---------------------------------------------------------------------------
// complex helpers

pub fn cdd(re: f64, im: f64) -> Cdd {
    Complex::new(Dd::from_f64(re), Dd::from_f64(im))
}

pub fn cdd_from(z: Complex<f64>) -> Cdd {
    cdd(z.re, z.im)
}

pub fn to_c64(z: Cdd) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

pub fn cabs(z: Cdd) -> Dd {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// `e^{i theta}`.
pub fn expi(theta: Dd) -> Cdd {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// `i^n` for any integer `n`.
pub fn i_pow(n: i64) -> Cdd {
    match n.rem_euclid(4) {
        0 => cdd(1.0, 0.0),
        1 => cdd(0.0, 1.0),
        2 => cdd(-1.0, 0.0),
        _ => cdd(0.0, -1.0),
    }
}

/// Integer power by repeated squaring.
pub fn cpowi(z: Cdd, n: i64) -> Cdd {
    if n == 0 {
        return cdd(1.0, 0.0);
    }
    let mut base = z;
    let mut e = n.unsigned_abs();
    let mut acc = cdd(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    if n < 0 {
        cdd(1.0, 0.0) / acc
    } else {
        acc
    }
}

pub fn cscale(z: Cdd, s: Dd) -> Cdd {
    Complex::new(z.re * s, z.im * s)
}
