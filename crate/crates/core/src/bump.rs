//! Smooth bumps: a box of width `r` convolved with the mollifier
//! `Psi(y) = exp(-1/(1-y^2))` scaled to `[-s, s]`.
//!
//! The result is identically 1 on `|x - xi| <= r/2 - s`, vanishes beyond
//! `r/2 + s`, and has Fourier coefficients
//!
//! ```text
//! c_k(g) = e^{-ik xi} * 2 sin(kr/2)/k * F(ks),   F(w) = (1/(2 pi Delta)) int e^{iwy} Psi(y) dy,
//! ```
//!
//! with `Delta = int Psi ~ 0.443994`.
//!
//! `F` decays faster than any power but has no closed form. For small `w` it
//! is integrated along the real axis; for larger `w` along the contour
//! `y = tau + (i/2)(1 - tau^2)`, which turns the oscillation into decay and
//! keeps relative accuracy when `F` is tiny.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::dd::{expi, to_c64, Dd};
use crate::error::{Error, Result};
use crate::model::FourierWindow;
use crate::quad::integrate;

/// Interior shrink applied to the optimal `s` so the compatibility
/// inequalities hold strictly.
pub const SHRINK: f64 = 0.999;

const CONTOUR_SWITCH: f64 = 8.0;

fn psi(y: f64) -> f64 {
    let q = 1.0 - y * y;
    if q <= 0.0 {
        0.0
    } else {
        (-1.0 / q).exp()
    }
}

fn psi_c(y: Complex64) -> Complex64 {
    (-(1.0 / (1.0 - y * y))).exp()
}

/// `Delta = int_{-1}^{1} Psi`, computed once.
pub fn mollifier_mass() -> f64 {
    static DELTA: OnceLock<f64> = OnceLock::new();
    *DELTA.get_or_init(|| 2.0 * integrate(psi, 0.0, 1.0, 1e-17, 1e-15).value)
}

/// `F(w) = (1/(2 pi Delta)) int_{-1}^{1} e^{iwy} Psi(y) dy`, real and even.
pub fn mollifier_fc(w: f64) -> f64 {
    let w = w.abs();
    let delta = mollifier_mass();
    let half = if w <= CONTOUR_SWITCH {
        integrate(|y| (w * y).cos() * psi(y), 0.0, 1.0, 1e-17, 1e-14).value
    } else {
        integrate(
            |tau| {
                if tau >= 1.0 {
                    return 0.0;
                }
                let y = Complex64::new(tau, 0.5 * (1.0 - tau * tau));
                let dy = Complex64::new(1.0, -tau);
                ((Complex64::i() * w * y).exp() * psi_c(y) * dy).re
            },
            0.0,
            1.0,
            0.0,
            1e-13,
        )
        .value
    };
    2.0 * half / (2.0 * PI * delta)
}

/// Optimal `(s, r)` for half-support `E` and flat width `t`.
pub fn bump_params(e: f64, t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0 && 2.0 * e > t) {
        return Err(Error::Config(format!(
            "bump geometry needs 2E > t > 0 (E = {e}, t = {t})"
        )));
    }
    Ok(((e - t / 2.0) / 3.0, 2.0 * (e + t) / 3.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BumpSpec {
    pub xi: f64,
    pub e: f64,
    pub t: f64,
    pub s: f64,
    pub r: f64,
    pub delta: f64,
}

impl BumpSpec {
    /// Bump centred at `xi` with the optimal parameters, `s` shrunk by [`SHRINK`].
    pub fn new(xi: f64, e: f64, t: f64) -> Result<Self> {
        let (s, r) = bump_params(e, t)?;
        let spec = BumpSpec {
            xi,
            e,
            t,
            s: s * SHRINK,
            r,
            delta: mollifier_mass(),
        };
        spec.check()?;
        Ok(spec)
    }

    /// Localization parameters for jump separation `j3`: `E = j3`, `t = 2 j3 / 3`.
    pub fn for_separation(xi: f64, j3: f64) -> Result<Self> {
        Self::new(xi, j3, 2.0 * j3 / 3.0)
    }

    /// Strict compatibility: `s + t/2 < r/2` and `2s + r/2 < E`.
    pub fn check(&self) -> Result<()> {
        let ok = 2.0 * self.e > self.t
            && self.s > 0.0
            && self.s + self.t / 2.0 < self.r / 2.0
            && 2.0 * self.s + self.r / 2.0 < self.e;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("incompatible bump parameters {self:?}")))
        }
    }

    /// Half-width of the region where `g = 1`.
    pub fn flat_radius(&self) -> f64 {
        self.r / 2.0 - self.s
    }

    /// Half-width of the support.
    pub fn support_radius(&self) -> f64 {
        self.r / 2.0 + self.s
    }

    /// Point value of `g` by quadrature of the defining convolution.
    pub fn eval(&self, x: f64) -> f64 {
        let u = crate::model::wrap_angle(x - self.xi);
        if u.abs() >= self.support_radius() {
            return 0.0;
        }
        if u.abs() <= self.flat_radius() {
            return 1.0;
        }
        // int_{|u - z| < r/2} m_s(z) dz with m_s(z) = Psi(z/s)/(s Delta)
        let lo = ((u - self.r / 2.0) / self.s).max(-1.0);
        let hi = ((u + self.r / 2.0) / self.s).min(1.0);
        if hi <= lo {
            return 0.0;
        }
        integrate(psi, lo, hi, 1e-17, 1e-14).value / self.delta
    }
}

fn sinc_factor(k: i64, r: f64) -> f64 {
    if k == 0 {
        r
    } else {
        let kf = k as f64;
        2.0 * (Dd::from_prod(kf, r) * 0.5).sin().to_f64() / kf
    }
}

fn phase(xi: f64, k: i64) -> Complex64 {
    to_c64(expi(-Dd::from_prod(xi, k as f64)))
}

/// `c_k(g)`.
pub fn bump_fc(spec: &BumpSpec, k: i64) -> Complex64 {
    if k == 0 {
        return Complex64::new(spec.r / (2.0 * PI), 0.0);
    }
    phase(spec.xi, k) * (sinc_factor(k, spec.r) * mollifier_fc(k as f64 * spec.s))
}

/// `F(|k| s)` for `|k| <= kmax`, shared by every bump with the same `s`.
#[derive(Clone, Debug)]
pub struct MollifierTable {
    pub s: f64,
    values: Vec<f64>,
}

impl MollifierTable {
    pub fn new(s: f64, kmax: usize) -> Self {
        MollifierTable {
            s,
            values: (0..=kmax).map(|k| mollifier_fc(k as f64 * s)).collect(),
        }
    }

    pub fn get(&self, k: i64) -> f64 {
        self.values[k.unsigned_abs() as usize]
    }

    pub fn kmax(&self) -> usize {
        self.values.len() - 1
    }
}

/// Bump coefficients over `lo..=hi`.
pub fn bump_window(spec: &BumpSpec, table: &MollifierTable, lo: i64, hi: i64) -> Result<FourierWindow> {
    if table.s != spec.s {
        return Err(Error::Config("mollifier table built for a different s".into()));
    }
    let need = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
    if need > table.kmax() {
        return Err(Error::Range {
            index: need as i64,
            lo: 0,
            hi: table.kmax() as i64,
        });
    }
    let values: Vec<Complex64> = (lo..=hi)
        .map(|k| {
            if k == 0 {
                Complex64::new(spec.r / (2.0 * PI), 0.0)
            } else {
                phase(spec.xi, k) * (sinc_factor(k, spec.r) * table.get(k))
            }
        })
        .collect();
    Ok(FourierWindow::from_c64(lo, &values))
}
