//! Combinatorial identities behind the method, checked in exact arithmetic.
//!
//! Usage: cargo run --release --example identities

use piecewise_fourier::eckhoff::{shift_factorization_residual, ShiftMatrix};
use piecewise_fourier::oracles::{identity_suite, script_f};

fn main() -> piecewise_fourier::Result<()> {
    for c in identity_suite(0) {
        println!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
    }
    println!("F(3, t, s), rows t = 0..=3, columns s = 0..=4:");
    for t in 0..=3 {
        println!("  {:?}", (0..=4).map(|s| script_f(3, t, s).to_string()).collect::<Vec<_>>());
    }
    let s = ShiftMatrix::new(3, 2);
    println!("shift matrix, d = 3, k = 2:");
    for m in 1..=4 {
        println!("{:?}", (1..=4).map(|n| s.entry_exact(m, n).to_string()).collect::<Vec<_>>());
    }
    for d in 0..=4 {
        println!("d = {d}: residual {:.1e}", shift_factorization_residual(d, 1000)?);
    }
    Ok(())
}
