//! Two jumps at 0 and 3: cut the one near 0 out with a bump and locate it.
//!
//! Usage: cargo run --release --example localization

use piecewise_fourier::sweep::{localization_errors, two_jump_function};

fn main() -> piecewise_fourier::Result<()> {
    let f = two_jump_function(6, 0)?;
    println!("{:>5} {:>11} {:>11} {:>11}", "M", "xi err", "A0 err", "A1 err");
    for m in [32, 64, 128, 256, 362, 512] {
        let e = localization_errors(&f, 1, m)?;
        println!("{m:>5} {:>11.3e} {:>11.3e} {:>11.3e}", e[0], e[1], e[2]);
    }
    Ok(())
}
