//! End to end: coefficients in, jumps and a pointwise reconstruction out.
//!
//! With several jumps the localized windows only reach their asymptotic
//! behaviour for M in the high hundreds, hence M = 1024 here.
//!
//! Usage: cargo run --release --example full_reconstruction

use std::f64::consts::PI;

use piecewise_fourier::model::synth_random;
use piecewise_fourier::pipeline::{error_report, eval_reconstruction, reconstruct, ReconstructionConfig};
use piecewise_fourier::Bounds;

fn main() -> piecewise_fourier::Result<()> {
    let bounds = Bounds { j1: 0.5, j2: 2.0, j3: 2.0 };
    let f = synth_random(2, 6, 2200, 3, bounds)?;
    let cfg = ReconstructionConfig::new(2, None, 6, 1024, bounds)?;
    let res = reconstruct(&f.symmetric_window(cfg.window_half_width()), &cfg)?;
    for (t, e) in f.singular.jumps().iter().zip(&res.jumps) {
        println!("xi {:+.12} -> {:+.12}, A0 {:+.8} -> {:+.8}", t.xi, e.xi, t.magnitudes[0], e.magnitudes[0]);
    }
    let rep = error_report(&res, &f, 0.2, 2048)?;
    println!("sup error away from the jumps: {:.3e}", rep.sup_error);
    for i in 0..8 {
        let x = -PI + 2.0 * PI * (i as f64 + 0.5) / 8.0;
        println!("f({x:+.3}) = {:+.10}, reconstruction {:+.10}", f.eval(x), eval_reconstruction(&res, x));
    }
    println!("timings: {:?}", res.timings);
    Ok(())
}
