//! End to end reconstruction `f~ = Psi~ + Phi~` from a coefficient window.
//!
//! Stages: coarse locations by Prony, one localized window per jump, Eckhoff
//! resolution of each window, then the smooth remainder as the difference
//! between the data and the coefficients of the recovered singular part.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::{cdd, to_c64};
use crate::eckhoff::{estimate_jump, JumpEstimate};
use crate::error::{Error, Result};
use crate::localize::localize_all;
use crate::model::{
    circular_distance, singular_fourier_dd, Bounds, FourierWindow, Jump, SingularPart, TestFunction,
};
use crate::prony::{prony_estimate, PronyProblem};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionConfig {
    /// Number of jumps.
    pub k: usize,
    /// Reconstruction order.
    pub d: usize,
    /// Assumed smoothness.
    pub d1: usize,
    pub m: i64,
    pub bounds: Bounds,
}

impl ReconstructionConfig {
    /// `d` defaults to `floor(d1/2) - 1`.
    pub fn new(k: usize, d: Option<usize>, d1: usize, m: i64, bounds: Bounds) -> Result<Self> {
        let d = match d {
            Some(d) => d,
            None => (d1 / 2).checked_sub(1).ok_or_else(|| {
                Error::Config(format!("d1 = {d1} too small to pick a default order"))
            })?,
        };
        let cfg = ReconstructionConfig { k, d, d1, m, bounds };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("K must be positive".into()));
        }
        if 2 * self.d + 1 > self.d1 {
            return Err(Error::Config(format!(
                "need 2d+1 <= d1, got d = {}, d1 = {}",
                self.d, self.d1
            )));
        }
        if self.m < 4 * (self.d as i64 + 2) {
            return Err(Error::Config(format!(
                "need M >= 4(d+2) = {}, got {}",
                4 * (self.d + 2),
                self.m
            )));
        }
        if !(self.bounds.j3 > 0.0 && self.bounds.j1 > 0.0 && self.bounds.j2 >= self.bounds.j1) {
            return Err(Error::Config("bounds need J3 > 0 and 0 < J1 <= J2".into()));
        }
        if self.k as f64 * self.bounds.j3 > 2.0 * PI {
            return Err(Error::Config("K jumps cannot be J3 apart on the circle".into()));
        }
        Ok(())
    }

    /// Largest index the input window has to reach.
    pub fn window_half_width(&self) -> i64 {
        2 * self.m + self.d as i64 + 1
    }
}

/// Wall-clock seconds per stage.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimings {
    pub prony: f64,
    pub localize: f64,
    pub eckhoff: f64,
    pub synthesis: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult {
    /// Sorted by location.
    pub jumps: Vec<JumpEstimate>,
    /// `c_k(Psi~)` over `-M..=M`.
    pub smooth_coeffs: FourierWindow,
    pub config: ReconstructionConfig,
    pub coarse_xis: Vec<f64>,
    /// Base index Prony finally succeeded at.
    pub prony_base: i64,
    pub timings: StageTimings,
    singular: SingularPart,
}

fn estimated_singular(jumps: &[JumpEstimate], d: usize) -> Result<SingularPart> {
    SingularPart::new(
        jumps
            .iter()
            .map(|j| Jump {
                xi: j.xi,
                magnitudes: j.magnitudes.clone(),
            })
            .collect(),
        d,
    )
}

fn smooth_remainder(f_window: &FourierWindow, singular: &SingularPart, m: i64) -> Result<FourierWindow> {
    let d = singular.d1();
    let values = (-m..=m)
        .map(|k| Ok(f_window.get(k)? - singular_fourier_dd(singular, d, k)))
        .collect::<Result<Vec<_>>>()?;
    FourierWindow::symmetric(values)
}

impl ReconstructionResult {
    /// Result assembled from known parameters, for checking the evaluation
    /// and reporting paths.
    pub fn from_truth(truth: &TestFunction, cfg: ReconstructionConfig) -> Result<Self> {
        let d = cfg.d.min(truth.singular.d1());
        let jumps: Vec<JumpEstimate> = truth
            .singular
            .jumps()
            .iter()
            .map(|j| JumpEstimate::from_parameters(j.xi, j.magnitudes[..=d].to_vec()))
            .collect();
        let singular = estimated_singular(&jumps, d)?;
        let window = truth.symmetric_window(cfg.m);
        let smooth_coeffs = smooth_remainder(&window, &singular, cfg.m)?;
        Ok(ReconstructionResult {
            coarse_xis: truth.singular.xis(),
            jumps,
            smooth_coeffs,
            config: cfg,
            prony_base: cfg.m,
            timings: StageTimings::default(),
            singular,
        })
    }

    pub fn singular(&self) -> &SingularPart {
        &self.singular
    }

    pub fn xis(&self) -> Vec<f64> {
        self.jumps.iter().map(|j| j.xi).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = ResultDoc {
            schema: 1,
            config: self.config,
            prony_base: self.prony_base,
            coarse_xis: self.coarse_xis.clone(),
            jumps: self
                .jumps
                .iter()
                .map(|j| JumpDoc {
                    xi: j.xi,
                    magnitudes: j.magnitudes.clone(),
                    magnitudes_im: j.magnitudes_complex.iter().map(|a| a.im).collect(),
                    max_root_residual: j.diagnostics.root_residuals.iter().cloned().fold(0.0, f64::max),
                    modulus_clamped: j.diagnostics.modulus_clamped,
                })
                .collect(),
            smooth: (0..=self.config.m)
                .map(|k| {
                    let c = self.smooth_coeffs.get_c64(k).unwrap_or_default();
                    crate::model::CoeffDoc { k, re: c.re, im: c.im }
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        Ok(s)
    }
}

#[derive(Serialize)]
struct JumpDoc {
    xi: f64,
    magnitudes: Vec<f64>,
    magnitudes_im: Vec<f64>,
    max_root_residual: f64,
    modulus_clamped: bool,
}

#[derive(Serialize)]
struct ResultDoc {
    schema: u32,
    config: ReconstructionConfig,
    prony_base: i64,
    coarse_xis: Vec<f64>,
    jumps: Vec<JumpDoc>,
    smooth: Vec<crate::model::CoeffDoc>,
}

fn coarse_locations(f_window: &FourierWindow, cfg: &ReconstructionConfig) -> Result<(Vec<f64>, i64)> {
    let first = PronyProblem::from_window(f_window, cfg.k, cfg.m, cfg.bounds)
        .and_then(|p| prony_estimate(&p));
    match first {
        Ok(e) => Ok((e.xis, cfg.m)),
        Err(Error::Config(s)) => Err(Error::Config(s)),
        Err(err) => {
            let retry = (2 * cfg.m).min(f_window.last_index() - 2 * cfg.k as i64 + 1);
            if retry <= cfg.m {
                return Err(err);
            }
            log::info!("Prony failed at M = {} ({err}); retrying at {retry}", cfg.m);
            let p = PronyProblem::from_window(f_window, cfg.k, retry, cfg.bounds)?;
            Ok((prony_estimate(&p)?.xis, retry))
        }
    }
}

/// Full reconstruction from `c_k(f)` over `-(2M+d+1)..=2M+d+1`.
///
/// A single jump is resolved on the raw coefficients; the bump would only
/// add its own pre-asymptotic error.
pub fn reconstruct(f_window: &FourierWindow, cfg: &ReconstructionConfig) -> Result<ReconstructionResult> {
    cfg.validate()?;
    let n = cfg.window_half_width();
    f_window
        .require(-n, n)
        .map_err(|e| Error::Config(format!("input window must cover [-(2M+d+1), 2M+d+1]: {e}")))?;
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let (coarse_xis, prony_base) = coarse_locations(f_window, cfg).map_err(|e| e.at("prony", Vec::new()))?;
    timings.prony = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let windows: Vec<FourierWindow> = if cfg.k == 1 {
        vec![f_window.clone()]
    } else {
        localize_all(f_window, &coarse_xis, cfg.bounds.j3, cfg.m, cfg.d)
            .map_err(|e| e.at("localize", coarse_xis.clone()))?
            .into_iter()
            .map(|w| w.coeffs)
            .collect()
    };
    timings.localize = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let mut jumps = windows
        .iter()
        .map(|w| estimate_jump(w, cfg.d, cfg.m))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.at("eckhoff", coarse_xis.clone()))?;
    jumps.sort_by(|a, b| a.xi.total_cmp(&b.xi));
    timings.eckhoff = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let singular = estimated_singular(&jumps, cfg.d).map_err(|e| e.at("synthesis", coarse_xis.clone()))?;
    let smooth_coeffs = smooth_remainder(f_window, &singular, cfg.m)?;
    timings.synthesis = t.elapsed().as_secs_f64();
    log::debug!("timings {timings:?}");

    Ok(ReconstructionResult {
        jumps,
        smooth_coeffs,
        config: *cfg,
        coarse_xis,
        prony_base,
        timings,
        singular,
    })
}

/// `sum_{|k|<=M} c_k(Psi~) e^{ikx} + sum A~_{l,j} V_l(x; xi~_j)`.
pub fn eval_reconstruction(res: &ReconstructionResult, x: f64) -> f64 {
    let m = res.config.m;
    let c = |k: i64| to_c64(res.smooth_coeffs.get(k).unwrap_or(cdd(0.0, 0.0)));
    let mut s = c(0).re;
    let step = Complex64::from_polar(1.0, x);
    let mut e = step;
    for k in 1..=m {
        if k % 64 == 0 {
            e = Complex64::from_polar(1.0, k as f64 * x);
        }
        s += 2.0 * (c(k) * e).re;
        e *= step;
    }
    s + res.singular.eval(x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    /// Matched to the true jumps in their order.
    pub location_errors: Vec<f64>,
    /// `[j][l]`, using the complex magnitude estimates.
    pub magnitude_errors: Vec<Vec<f64>>,
    pub sup_error: f64,
    pub r: f64,
    pub grid_size: usize,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `perm[i]` is the estimate matched to true jump `i`.
fn match_jumps(est: &[f64], truth: &[f64], threshold: f64) -> Result<Vec<usize>> {
    if est.len() != truth.len() {
        return Err(Error::Matching(format!(
            "{} estimates for {} jumps",
            est.len(),
            truth.len()
        )));
    }
    if truth.len() > 8 {
        return Err(Error::Matching("more than 8 jumps".into()));
    }
    let cost = |p: &Vec<usize>| -> f64 {
        p.iter()
            .enumerate()
            .map(|(i, &j)| circular_distance(truth[i], est[j]))
            .sum()
    };
    let best = permutations(truth.len())
        .into_iter()
        .min_by(|a, b| cost(a).total_cmp(&cost(b)))
        .unwrap_or_default();
    for (i, &j) in best.iter().enumerate() {
        let dist = circular_distance(truth[i], est[j]);
        if dist >= threshold {
            return Err(Error::Matching(format!(
                "jump at {} has no estimate within {threshold:.3e} (nearest {dist:.3e})",
                truth[i]
            )));
        }
    }
    Ok(best)
}

/// Errors against the truth, with the sup norm taken on the jump-free
/// region `D_r` sampled at `grid` equispaced points.
pub fn error_report(res: &ReconstructionResult, truth: &TestFunction, r: f64, grid: usize) -> Result<ErrorReport> {
    if grid < 256 {
        return Err(Error::Config(format!("grid must have at least 256 points, got {grid}")));
    }
    if !(r >= 0.0) {
        return Err(Error::Config(format!("exclusion radius must be non-negative, got {r}")));
    }
    let txis = truth.singular.xis();
    let perm = match_jumps(&res.xis(), &txis, res.config.bounds.j3 / 4.0)?;
    let mut location_errors = Vec::new();
    let mut magnitude_errors = Vec::new();
    for (i, tj) in truth.singular.jumps().iter().enumerate() {
        let e = &res.jumps[perm[i]];
        location_errors.push(e.location_error(tj.xi));
        magnitude_errors.push(
            e.magnitudes_complex
                .iter()
                .zip(&tj.magnitudes)
                .map(|(a, b)| (a - b).norm())
                .collect(),
        );
    }
    let mut sup: f64 = 0.0;
    for i in 0..grid {
        let x = -PI + 2.0 * PI * i as f64 / grid as f64;
        if txis.iter().any(|&xi| circular_distance(x, xi) < r) {
            continue;
        }
        sup = sup.max((eval_reconstruction(res, x) - truth.eval(x)).abs());
    }
    Ok(ErrorReport {
        location_errors,
        magnitude_errors,
        sup_error: sup,
        r,
        grid_size: grid,
    })
}
