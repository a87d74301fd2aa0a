//! Polynomial roots against eigenvalues of the companion matrix.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use piecewise_fourier::polyroot::{roots_default, ComplexPolynomial};

fn companion_eigenvalues(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    Schur::new(m).eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

fn one_sided(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .map(|x| b.iter().map(|y| (x - y).norm() / x.norm().max(1.0)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

#[test]
fn matches_companion_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10);
        let c: Vec<Complex64> = (0..=n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.1..1.0), rng.gen_range(-3.2..3.2)))
            .collect();
        let ours = roots_default(&ComplexPolynomial::from_c64(&c)).unwrap().roots_c64();
        let theirs = companion_eigenvalues(&c);
        assert_eq!(ours.len(), theirs.len());
        worst = worst.max(one_sided(&ours, &theirs)).max(one_sided(&theirs, &ours));
    }
    assert!(worst <= 1e-8, "Hausdorff distance {worst:e}");
}

#[test]
fn roots_of_unity() {
    for n in 1..=12usize {
        let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
        c[0] = Complex64::new(-1.0, 0.0);
        c[n] = Complex64::new(1.0, 0.0);
        let r = roots_default(&ComplexPolynomial::from_c64(&c)).unwrap();
        for z in r.roots_c64() {
            assert!((z.norm() - 1.0).abs() < 1e-14);
            assert!((z.powu(n as u32) - 1.0).norm() < 1e-13);
        }
    }
}
