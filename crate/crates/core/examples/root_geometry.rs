//! Roots of the eliminant: one on the unit circle at the jump, the other `d`
//! near `omega / (1 - phi_i / M)` with `phi_i` the Laguerre zeros.
//!
//! Usage: cargo run --release --example root_geometry

use piecewise_fourier::eckhoff::{estimate_jump, predicted_spurious};
use piecewise_fourier::model::{Jump, SingularPart, SmoothPart, TestFunction};

fn main() -> piecewise_fourier::Result<()> {
    let d = 3;
    let jump = Jump { xi: 1.0, magnitudes: vec![1.0, 0.5, -0.25, 0.125] };
    let f = TestFunction::new(SingularPart::new(vec![jump], d)?, SmoothPart::zero(d));
    let m = 400;
    let e = estimate_jump(&f.window(d, m, m + d as i64 + 1), d, m)?;
    let mut roots = e.diagnostics.root_set.clone();
    roots.sort_by(|a, b| (a.norm() - 1.0).abs().total_cmp(&(b.norm() - 1.0).abs()));
    let predicted = predicted_spurious(e.omega, d, m)?;
    println!("omega = {:.12}, |omega| - 1 = {:.2e}", e.omega, e.omega.norm() - 1.0);
    println!("spurious roots and nearest predictions:");
    for z in &roots[1..] {
        let p = predicted.iter().min_by(|a, b| (*a - z).norm().total_cmp(&(*b - z).norm())).unwrap();
        println!("  {z:.10}  predicted {p:.10}  |diff| {:.2e}", (z - p).norm());
    }
    Ok(())
}
