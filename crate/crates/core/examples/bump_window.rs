//! The localizing bump: flat near the centre, compact support, fast
//! coefficient decay.
//!
//! Usage: cargo run --release --example bump_window

use piecewise_fourier::bump::{bump_fc, mollifier_mass, BumpSpec};

fn main() -> piecewise_fourier::Result<()> {
    let b = BumpSpec::new(0.0, 1.0, 0.5)?;
    println!("Delta = {:.10}", mollifier_mass());
    println!("s = {:.4}, r = {:.4}, flat radius {:.4}, support radius {:.4}", b.s, b.r, b.flat_radius(), b.support_radius());
    for x in [0.0, 0.2, 0.3, 0.5, 0.7, 0.9, 1.1] {
        println!("g({x:.1}) = {:.6}", b.eval(x));
    }
    for k in [1, 10, 100, 1000, 3000] {
        println!("|c_{k}(g)| = {:.3e}", bump_fc(&b, k).norm());
    }
    Ok(())
}
