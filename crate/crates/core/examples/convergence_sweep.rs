//! Convergence orders over a range of M, written as CSV to stdout.
//!
//! Usage: cargo run --release --example convergence_sweep

use piecewise_fourier::sweep::{run_sweep, SweepSpec};

fn main() -> piecewise_fourier::Result<()> {
    let spec = SweepSpec::from_json(
        r#"{"schema": 1, "mode": "pipeline", "ms": [32, 64, 128, 256, 512],
            "k": 1, "d1": 6, "d": 2, "trials": 3, "seed": 0,
            "bounds": {"j1": 0.5, "j2": 2.0, "j3": 2.0}}"#,
    )?;
    let res = run_sweep(&spec)?;
    print!("{}", res.medians_table().to_csv()?);
    for f in &res.fits {
        println!("# {}: slope {:.2}, reference {}", f.quantity, f.slope, spec.reference_order(&f.quantity));
    }
    Ok(())
}
