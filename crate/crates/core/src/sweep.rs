//! Convergence sweeps over the cutoff `M`: per trial errors, medians,
//! log-log slope fits, CSV tables and plot files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::csvfmt::g17;
use crate::eckhoff::estimate_jump;
use crate::error::{Error, Result};
use crate::localize::localize_all;
use crate::model::{circular_distance, synth_random, Bounds, Jump, SingularPart, SmoothPart, TestFunction};
use crate::pipeline::{error_report, reconstruct, ReconstructionConfig};
use crate::prony::{prony_estimate, PronyProblem};

pub const DEFAULT_MS: [i64; 13] = [16, 23, 32, 45, 64, 91, 128, 181, 256, 362, 512, 724, 1024];

/// Values below this are treated as the precision floor and left out of fits.
pub const FLOOR: f64 = 100.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    /// Eckhoff on the raw coefficients (`K = 1`).
    SingleJump,
    /// Order-zero Prony estimates only.
    Prony,
    /// Full pipeline with the sup error over `D_r`.
    Pipeline,
    /// Jumps at 0 and 3, window around 1/40.
    Localization,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub schema: u32,
    pub mode: SweepMode,
    #[serde(default = "default_ms")]
    pub ms: Vec<i64>,
    pub k: usize,
    pub d: usize,
    pub d1: usize,
    #[serde(default)]
    pub bounds: Bounds,
    pub trials: usize,
    pub seed: u64,
    /// Exclusion radius for the sup error.
    #[serde(default = "default_r")]
    pub r: f64,
}

fn default_ms() -> Vec<i64> {
    DEFAULT_MS.to_vec()
}

fn default_r() -> f64 {
    0.2
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.schema != 1 {
            return Err(Error::Config(format!("unsupported schema {}", self.schema)));
        }
        if self.ms.len() < 2 || self.ms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("Ms must be ascending with at least two values".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be positive".into()));
        }
        if self.mode == SweepMode::SingleJump && self.k != 1 {
            return Err(Error::Config("single-jump mode needs K = 1".into()));
        }
        if self.d > self.d1 {
            return Err(Error::Config("d must not exceed d1".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: SweepSpec = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    /// Quantity names in column order.
    pub fn quantities(&self) -> Vec<String> {
        let mut q = vec!["xi".to_string()];
        if self.mode != SweepMode::Prony {
            q.extend((0..=self.d).map(|l| format!("A{l}")));
        }
        if self.mode == SweepMode::Pipeline {
            q.push("sup".into());
        }
        q
    }

    /// Expected log-log slope for a quantity.
    pub fn reference_order(&self, quantity: &str) -> f64 {
        let d = self.d as f64;
        match quantity {
            "xi" if self.mode == SweepMode::Prony => -1.0,
            "xi" => -(d + 2.0),
            "sup" => -(d + 1.0),
            a => a[1..].parse::<f64>().map(|l| l - d - 1.0).unwrap_or(f64::NAN),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRow {
    pub m: i64,
    pub trial: usize,
    pub status: String,
    /// One entry per quantity, NaN on failure.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub quantity: String,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// `(M, value)` pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
}

impl SlopeFit {
    /// Least squares on `log10` values, skipping non-finite values and
    /// values under [`FLOOR`].
    pub fn fit(quantity: &str, points: &[(f64, f64)]) -> SlopeFit {
        let used: Vec<(f64, f64)> = points
            .iter()
            .copied()
            .filter(|&(m, v)| m > 0.0 && v.is_finite() && v >= FLOOR)
            .collect();
        let n = used.len() as f64;
        let nan = SlopeFit {
            quantity: quantity.into(),
            slope: f64::NAN,
            intercept: f64::NAN,
            r2: f64::NAN,
            points: used.clone(),
        };
        if used.len() < 2 {
            return nan;
        }
        let xs: Vec<f64> = used.iter().map(|p| p.0.log10()).collect();
        let ys: Vec<f64> = used.iter().map(|p| p.1.log10()).collect();
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        if sxx == 0.0 {
            return nan;
        }
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
        SlopeFit {
            quantity: quantity.into(),
            slope,
            intercept,
            r2,
            points: used,
        }
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub quantities: Vec<String>,
    pub rows: Vec<TrialRow>,
    /// `medians[q][i]` for `ms[i]`.
    pub medians: Vec<Vec<f64>>,
    pub fits: Vec<SlopeFit>,
}

/// The two-jump function used for the localization experiment, magnitudes
/// drawn from `seed`.
pub fn two_jump_function(d1: usize, seed: u64) -> Result<TestFunction> {
    let draw = synth_random(2, d1, 0, seed, Bounds { j1: 0.5, j2: 2.0, j3: 4.0 / 3.0 })?;
    let mags: Vec<Vec<f64>> = draw.singular.jumps().iter().map(|j| j.magnitudes.clone()).collect();
    let singular = SingularPart::new(
        vec![
            Jump { xi: 0.0, magnitudes: mags[0].clone() },
            Jump { xi: 3.0, magnitudes: mags[1].clone() },
        ],
        d1,
    )?;
    Ok(TestFunction::new(singular, SmoothPart::zero(d1)))
}

/// Location and magnitude errors of the jump at 0 after localizing around
/// 1/40 with a bump of half width 4/3.
pub fn localization_errors(f: &TestFunction, d: usize, m: i64) -> Result<Vec<f64>> {
    let lw = localize_all(&f.symmetric_window(2 * m), &[1.0 / 40.0], 4.0 / 3.0, m, d)?;
    let e = estimate_jump(&lw[0].coeffs, d, m)?;
    let truth = &f.singular.jumps()[0];
    let mut out = vec![e.location_error(truth.xi)];
    out.extend(e.magnitudes_complex.iter().zip(&truth.magnitudes).map(|(a, b)| (a - b).norm()));
    Ok(out)
}

fn trial_values(spec: &SweepSpec, f: &TestFunction, m: i64) -> Result<Vec<f64>> {
    match spec.mode {
        SweepMode::SingleJump => {
            let w = f.window(spec.d1, m, m + spec.d as i64 + 1);
            let e = estimate_jump(&w, spec.d, m)?;
            let truth = &f.singular.jumps()[0];
            let mut out = vec![e.location_error(truth.xi)];
            out.extend(e.magnitudes_complex.iter().zip(&truth.magnitudes).map(|(a, b)| (a - b).norm()));
            Ok(out)
        }
        SweepMode::Prony => {
            let w = f.window(spec.d1, m, m + 2 * spec.k as i64);
            let p = PronyProblem::from_window(&w, spec.k, m, spec.bounds)?;
            let e = prony_estimate(&p)?;
            // worst nearest-estimate distance
            let err = f
                .singular
                .xis()
                .iter()
                .map(|&x| e.xis.iter().map(|&y| circular_distance(x, y)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max);
            Ok(vec![err])
        }
        SweepMode::Pipeline => {
            let cfg = ReconstructionConfig::new(spec.k, Some(spec.d), spec.d1, m, spec.bounds)?;
            let res = reconstruct(&f.symmetric_window(cfg.window_half_width()), &cfg)?;
            let rep = error_report(&res, f, spec.r, 1024)?;
            let mut out = vec![rep.location_errors.iter().cloned().fold(0.0, f64::max)];
            for l in 0..=spec.d {
                out.push(rep.magnitude_errors.iter().map(|v| v[l]).fold(0.0, f64::max));
            }
            out.push(rep.sup_error);
            Ok(out)
        }
        SweepMode::Localization => localization_errors(f, spec.d, m),
    }
}

fn trial_function(spec: &SweepSpec, trial: usize) -> Result<TestFunction> {
    let seed = spec.seed + trial as u64;
    let m_max = *spec.ms.last().unwrap_or(&0);
    match spec.mode {
        SweepMode::Localization => two_jump_function(spec.d1, seed),
        _ => synth_random(spec.k, spec.d1, (2 * m_max + spec.d as i64 + 2) as usize, seed, spec.bounds),
    }
}

/// Runs every `(M, trial)` pair. Failed trials are kept as rows with their
/// status; the sweep fails only if nothing succeeded.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let quantities = spec.quantities();
    let funcs = (0..spec.trials)
        .map(|t| trial_function(spec, t))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for &m in &spec.ms {
        for (trial, f) in funcs.iter().enumerate() {
            let (status, values) = match trial_values(spec, f, m) {
                Ok(v) => ("ok".to_string(), v),
                Err(e @ Error::Config(_)) => return Err(e),
                Err(e) => {
                    log::warn!("M = {m}, trial {trial}: {e}");
                    (e.to_string(), vec![f64::NAN; quantities.len()])
                }
            };
            rows.push(TrialRow { m, trial, status, values });
        }
    }
    if rows.iter().all(|r| r.status != "ok") {
        return Err(Error::Accuracy("every trial failed".into()));
    }
    let mut medians = vec![Vec::with_capacity(spec.ms.len()); quantities.len()];
    for &m in &spec.ms {
        for (q, col) in medians.iter_mut().enumerate() {
            let vals: Vec<f64> = rows.iter().filter(|r| r.m == m).map(|r| r.values[q]).collect();
            col.push(median(&vals));
        }
    }
    let fits = quantities
        .iter()
        .zip(&medians)
        .map(|(q, col)| {
            let pts: Vec<(f64, f64)> = spec.ms.iter().map(|&m| m as f64).zip(col.iter().copied()).collect();
            SlopeFit::fit(q, &pts)
        })
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        quantities,
        rows,
        medians,
        fits,
    })
}

/// A CSV table kept as already formatted fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
            .collect::<std::result::Result<Vec<Vec<String>>, _>>()
            .map_err(csv_err)?;
        Ok(Table { header, rows })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

impl SweepResult {
    /// Long table: one row per `(M, trial)`.
    pub fn trials_table(&self) -> Table {
        let mut header = vec!["M".to_string(), "trial".to_string(), "status".to_string()];
        header.extend(self.quantities.iter().map(|q| format!("{q}_err")));
        let mut t = Table { header, rows: Vec::new() };
        let mut rows = self.rows.clone();
        rows.sort_by_key(|r| (r.m, r.trial));
        for r in rows {
            let mut row = vec![r.m.to_string(), r.trial.to_string(), r.status.clone()];
            row.extend(r.values.iter().map(|v| g17(*v)));
            t.push(row);
        }
        t
    }

    /// Median per `M` plus the reference curve `M^order` scaled to the
    /// first point.
    pub fn medians_table(&self) -> Table {
        let mut t = Table::new(&["M", "quantity", "median", "reference", "order"]);
        for (q, name) in self.quantities.iter().enumerate() {
            let order = self.spec.reference_order(name);
            let (m0, v0) = (self.spec.ms[0] as f64, self.medians[q][0]);
            for (i, &m) in self.spec.ms.iter().enumerate() {
                let reference = v0 * (m as f64 / m0).powf(order);
                t.push(vec![
                    m.to_string(),
                    name.clone(),
                    g17(self.medians[q][i]),
                    g17(reference),
                    g17(order),
                ]);
            }
        }
        t
    }

    pub fn fits_table(&self) -> Table {
        let mut t = Table::new(&["quantity", "slope", "intercept", "r2", "points", "reference_order"]);
        for f in &self.fits {
            t.push(vec![
                f.quantity.clone(),
                g17(f.slope),
                g17(f.intercept),
                g17(f.r2),
                f.points.len().to_string(),
                g17(self.spec.reference_order(&f.quantity)),
            ]);
        }
        t
    }

    pub fn fit(&self, quantity: &str) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.quantity == quantity)
    }

    pub fn svg(&self) -> String {
        let series: BTreeMap<String, Vec<(f64, f64)>> = self
            .quantities
            .iter()
            .zip(&self.medians)
            .map(|(q, col)| (q.clone(), self.spec.ms.iter().map(|&m| m as f64).zip(col.iter().copied()).collect()))
            .collect();
        let refs: Vec<(String, f64)> = self
            .quantities
            .iter()
            .map(|q| (q.clone(), self.spec.reference_order(q)))
            .collect();
        loglog_svg("error vs M", &series, &refs)
    }

    pub fn gnuplot(&self, svg_name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "set terminal svg size 800,600");
        let _ = writeln!(s, "set output '{svg_name}'");
        let _ = writeln!(s, "set logscale xy");
        let _ = writeln!(s, "set xlabel 'M'");
        let _ = writeln!(s, "set ylabel 'error'");
        let plots: Vec<String> = self
            .quantities
            .iter()
            .map(|q| format!("'-' using 1:2 with linespoints title '{q}'"))
            .collect();
        let _ = writeln!(s, "plot {}", plots.join(", "));
        for col in &self.medians {
            for (m, v) in self.spec.ms.iter().zip(col) {
                if v.is_finite() && *v > 0.0 {
                    let _ = writeln!(s, "{m} {}", g17(*v));
                }
            }
            let _ = writeln!(s, "e");
        }
        s
    }
}

const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

/// Self-contained log-log plot. Reference lines `M^order` are anchored at
/// the first finite point of the matching series and drawn dashed.
pub fn loglog_svg(title: &str, series: &BTreeMap<String, Vec<(f64, f64)>>, refs: &[(String, f64)]) -> String {
    let (w, h, pad) = (800.0, 600.0, 70.0);
    let pts = || {
        series
            .values()
            .flatten()
            .filter(|p| p.0 > 0.0 && p.1 > 0.0 && p.1.is_finite())
            .map(|p| (p.0.log10(), p.1.log10()))
    };
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let (x0, x1) = (x0.floor(), x1.ceil().max(x0.floor() + 1.0));
    let (y0, y1) = (y0.floor(), y1.ceil().max(y0.floor() + 1.0));
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{title}</text>"#, w / 2.0);
    let _ = writeln!(
        s,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    for e in x0 as i32..=x1 as i32 {
        let x = sx(e as f64);
        let _ = writeln!(s, r#"<line x1="{x:.1}" y1="{pad}" x2="{x:.1}" y2="{:.1}" stroke="lightgray"/>"#, h - pad);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">1e{e}</text>"#, h - pad + 18.0);
    }
    for e in y0 as i32..=y1 as i32 {
        let y = sy(e as f64);
        let _ = writeln!(s, r#"<line x1="{pad}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="lightgray"/>"#, w - pad);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{e}</text>"#, pad - 6.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">M</text>"#, w / 2.0, h - 20.0);
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let good: Vec<(f64, f64)> = pts
            .iter()
            .filter(|p| p.0 > 0.0 && p.1 > 0.0 && p.1.is_finite())
            .map(|p| (p.0.log10(), p.1.log10()))
            .collect();
        if good.is_empty() {
            continue;
        }
        let path: Vec<String> = good.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, path.join(" "));
        for &(x, y) in &good {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, sx(x), sy(y));
        }
        if let Some((_, order)) = refs.iter().find(|r| &r.0 == name) {
            let (ax, ay) = good[0];
            let bx = good.last().map(|p| p.0).unwrap_or(ax);
            let by = ay + order * (bx - ax);
            let _ = writeln!(
                s,
                r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-dasharray="6,4"/>"#,
                sx(ax),
                sy(ay),
                sx(bx),
                sy(by.max(y0))
            );
        }
        let ly = pad + 18.0 * (i as f64 + 1.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{name}</text>"#, w - pad - 60.0);
    }
    s.push_str("</svg>\n");
    s
}
