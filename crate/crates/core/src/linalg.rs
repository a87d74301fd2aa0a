//! Small dense complex linear algebra: partial-pivot LU solve and 1-norm
//! condition numbers. Sizes here never exceed a few dozen.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = Vec<Vec<Complex64>>;

pub fn norm1(a: &CMatrix) -> f64 {
    let n = a.first().map_or(0, |r| r.len());
    (0..n)
        .map(|j| a.iter().map(|row| row[j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// LU factors with row permutation, packed in place.
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(a: &CMatrix) -> Result<Lu> {
        let n = a.len();
        if a.iter().any(|r| r.len() != n) {
            return Err(Error::Config("matrix must be square".into()));
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for c in 0..n {
            let p = (c..n)
                .max_by(|&i, &j| lu[i][c].norm().total_cmp(&lu[j][c].norm()))
                .unwrap_or(c);
            if lu[p][c].norm() == 0.0 {
                return Err(Error::Conditioning(format!("singular matrix at column {c}")));
            }
            lu.swap(p, c);
            perm.swap(p, c);
            let piv = lu[c][c];
            for r in c + 1..n {
                let f = lu[r][c] / piv;
                lu[r][c] = f;
                for k in c + 1..n {
                    let t = lu[c][k];
                    lu[r][k] -= f * t;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.len();
        let mut x: Vec<Complex64> = self.perm.iter().map(|&i| b[i]).collect();
        for r in 0..n {
            for k in 0..r {
                let t = self.lu[r][k] * x[k];
                x[r] -= t;
            }
        }
        for r in (0..n).rev() {
            for k in r + 1..n {
                let t = self.lu[r][k] * x[k];
                x[r] -= t;
            }
            x[r] /= self.lu[r][r];
        }
        x
    }

    /// Explicit inverse, column by column.
    pub fn inverse(&self) -> CMatrix {
        let n = self.lu.len();
        let mut inv = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for j in 0..n {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            for (i, v) in self.solve(&e).into_iter().enumerate() {
                inv[i][j] = v;
            }
        }
        inv
    }
}

pub fn solve(a: &CMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    Ok(Lu::factor(a)?.solve(b))
}

/// `||A||_1 ||A^{-1}||_1`; infinite for singular input.
pub fn cond1(a: &CMatrix) -> f64 {
    match Lu::factor(a) {
        Ok(lu) => norm1(a) * norm1(&lu.inverse()),
        Err(_) => f64::INFINITY,
    }
}

pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let inner = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..inner).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}
