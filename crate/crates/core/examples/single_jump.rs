//! Locate one jump and its magnitudes from the high-frequency coefficients.
//!
//! Usage: cargo run --release --example single_jump

use piecewise_fourier::eckhoff::estimate_jump;
use piecewise_fourier::model::synth_random;
use piecewise_fourier::Bounds;

fn main() -> piecewise_fourier::Result<()> {
    let (d1, d) = (8, 3);
    let f = synth_random(1, d1, 2100, 1, Bounds::default())?;
    let truth = &f.singular.jumps()[0];
    println!("true xi = {:.17}", truth.xi);
    println!("{:>6} {:>12} {:>12} {:>12}", "M", "xi err", "A0 err", "A3 err");
    for m in [32, 64, 128, 256, 512, 1024] {
        let w = f.window(d1, m, m + d as i64 + 1);
        let e = estimate_jump(&w, d, m)?;
        println!(
            "{m:>6} {:>12.3e} {:>12.3e} {:>12.3e}",
            e.location_error(truth.xi),
            (e.magnitudes[0] - truth.magnitudes[0]).abs(),
            (e.magnitudes[3] - truth.magnitudes[3]).abs()
        );
    }
    Ok(())
}
