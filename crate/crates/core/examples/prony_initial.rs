//! Coarse locations of several jumps from a Hankel eigenproblem.
//!
//! Usage: cargo run --release --example prony_initial

use piecewise_fourier::model::{circular_distance, synth_random};
use piecewise_fourier::prony::{prony_estimate, PronyProblem};
use piecewise_fourier::Bounds;

fn main() -> piecewise_fourier::Result<()> {
    let k = 3;
    let bounds = Bounds::default();
    let f = synth_random(k, 4, 600, 7, bounds)?;
    let truth = f.singular.xis();
    println!("true locations {truth:.6?}");
    for m in [16, 64, 256] {
        let w = f.window(4, m, m + 2 * k as i64);
        let p = prony_estimate(&PronyProblem::from_window(&w, k, m, bounds)?)?;
        let err = truth.iter().zip(&p.xis).map(|(a, b)| circular_distance(*a, *b)).fold(0.0, f64::max);
        println!("M = {m:>3}: estimates {:.6?}, max error {err:.2e}, cond {:.1e}", p.xis, p.condition);
    }
    Ok(())
}
