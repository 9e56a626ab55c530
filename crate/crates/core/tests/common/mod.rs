#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

/// Dense `N×N` matrix, row-major.
pub struct Dense {
    pub n: usize,
    pub m: Vec<C64>,
}

impl Dense {
    pub fn mul(&self, other: &Dense) -> Dense {
        let n = self.n;
        let mut m = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.m[i * n + k];
                for j in 0..n {
                    m[i * n + j] += a * other.m[k * n + j];
                }
            }
        }
        Dense { n, m }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.m[i * self.n + j] * v[j]).sum()).collect()
    }

    fn diag(d: Vec<C64>) -> Dense {
        let n = d.len();
        let mut m = vec![C64::new(0.0, 0.0); n * n];
        for (i, x) in d.into_iter().enumerate() {
            m[i * n + i] = x;
        }
        Dense { n, m }
    }

    pub fn adjoint(&self) -> Dense {
        let n = self.n;
        let mut m = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                m[j * n + i] = self.m[i * n + j].conj();
            }
        }
        Dense { n, m }
    }
}

/// Unitary DFT matrix, `F[m][n] = exp(-2πi mn/N)/√N`.
pub fn dft_matrix(n: usize) -> Dense {
    let s = 1.0 / (n as f64).sqrt();
    let mut m = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            m.push(C64::from_polar(s, -TAU * ((r * c) % n) as f64 / n as f64));
        }
    }
    Dense { n, m }
}

/// One kick `F† D_p F D_q` with `D = diag(exp(i N k cos(2π j/N)))`.
pub fn dense_kick(n: usize, k: f64) -> Dense {
    let d = || {
        Dense::diag(
            (0..n)
                .map(|j| C64::from_polar(1.0, n as f64 * k * (TAU * j as f64 / n as f64).cos()))
                .collect(),
        )
    };
    let f = dft_matrix(n);
    f.adjoint().mul(&d()).mul(&f).mul(&d())
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
