//! Isolating one jump at a time: `h_j = f g_j` where `g_j` is a bump around
//! the coarse location, computed on the coefficient side as the truncated
//! convolution
//!
//! ```text
//! c~_k(h_j) = sum_{i=-2M}^{2M} c_i(f) c_{k-i}(g_j),   k = 0 ..= M+d+1.
//! ```
//!
//! The bump coefficients therefore have to cover `[-2M, 3M+d+1]`. Each
//! accumulation runs in double-double in fixed index order.

use num_complex::Complex64;

use crate::bump::{bump_window, BumpSpec, MollifierTable};
use crate::dd::{cdd, Cdd};
use crate::error::{Error, Result};
use crate::model::FourierWindow;
use crate::prony::min_circular_separation;

#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedWindow {
    pub jump_index: usize,
    /// `c~_k(h_j)` for `k = 0 ..= M+d+1`.
    pub coeffs: FourierWindow,
    pub bump: BumpSpec,
    pub m: i64,
}

#[inline]
fn mul_acc(acc: Cdd, a: Cdd, b: Complex64) -> Cdd {
    Cdd::new(
        acc.re + a.re * b.re - a.im * b.im,
        acc.im + a.re * b.im + a.im * b.re,
    )
}

fn convolve(f: &FourierWindow, g: &FourierWindow, m: i64, d: usize) -> Result<Vec<Cdd>> {
    let kmax = m + d as i64 + 1;
    f.require(-2 * m, 2 * m)
        .map_err(|e| Error::Config(format!("f window must cover [-2M, 2M]: {e}")))?;
    g.require(-2 * m, 3 * m + d as i64 + 1)
        .map_err(|e| Error::Config(format!("bump window must cover [-2M, 3M+d+1]: {e}")))?;
    let fv = f.slice(-2 * m, 2 * m)?;
    let gv: Vec<Complex64> = g
        .slice(-2 * m, 3 * m + d as i64 + 1)?
        .values()
        .iter()
        .map(|z| crate::dd::to_c64(*z))
        .collect();
    let g_at = |n: i64| gv[(n + 2 * m) as usize];
    Ok((0..=kmax)
        .map(|k| {
            let mut acc = cdd(0.0, 0.0);
            for (idx, c) in fv.values().iter().enumerate() {
                let i = idx as i64 - 2 * m;
                acc = mul_acc(acc, *c, g_at(k - i));
            }
            acc
        })
        .collect())
}

/// Truncated convolution of `f` (over `[-2M, 2M]`) with a bump (over
/// `[-2M, 3M+d+1]`).
pub fn localized_coeffs(
    f_window: &FourierWindow,
    bump_coeffs: &FourierWindow,
    m: i64,
    d: usize,
) -> Result<Vec<Cdd>> {
    if m < d as i64 + 2 {
        return Err(Error::Config(format!("need M >= d + 2, got M = {m}, d = {d}")));
    }
    convolve(f_window, bump_coeffs, m, d)
}

/// One localized window per coarse estimate, with `E = J3`, `t = 2 J3 / 3`.
pub fn localize_all(
    f_window: &FourierWindow,
    xhats: &[f64],
    j3: f64,
    m: i64,
    d: usize,
) -> Result<Vec<LocalizedWindow>> {
    if min_circular_separation(xhats) < j3 / 3.0 {
        return Err(Error::Localization(format!(
            "coarse estimates closer than J3/3 = {:.3e}",
            j3 / 3.0
        )));
    }
    let proto = BumpSpec::for_separation(0.0, j3)?;
    let hi = 3 * m + d as i64 + 1;
    let table = MollifierTable::new(proto.s, hi as usize);
    xhats
        .iter()
        .enumerate()
        .map(|(j, &xi)| {
            let bump = BumpSpec { xi, ..proto };
            let g = bump_window(&bump, &table, -2 * m, hi)?;
            let values = localized_coeffs(f_window, &g, m, d)?;
            Ok(LocalizedWindow {
                jump_index: j,
                coeffs: FourierWindow::new(0, values),
                bump,
                m,
            })
        })
        .collect()
}
