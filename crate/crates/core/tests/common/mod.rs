#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reset_ness::cmatrix::{Complex, ComplexMatrix};

/// Entries in [-1, 1] consumed pairwise as (re, im).
pub fn complex_from(xs: &[f64]) -> Vec<Complex> {
    xs.chunks_exact(2).map(|c| Complex::new(c[0], c[1])).collect()
}

/// (M + M^H)/2 from 2 dim^2 reals.
pub fn hermitian_from(dim: usize, xs: &[f64]) -> ComplexMatrix {
    let m = ComplexMatrix::from_vec(dim, complex_from(&xs[..2 * dim * dim])).unwrap();
    (&m + &m.adjoint()).scale_real(0.5)
}

/// M M^H / tr, with M of shape dim x rank (2 dim rank reals).
pub fn density_from(dim: usize, rank: usize, xs: &[f64]) -> ComplexMatrix {
    let cols = complex_from(&xs[..2 * dim * rank]);
    let mut rho = ComplexMatrix::zeros(dim);
    for k in 0..rank {
        let v: Vec<Complex> = (0..dim).map(|i| cols[i * rank + k]).collect();
        rho = &rho + &ComplexMatrix::projector(&v);
    }
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

/// Normalized vector from 2 dim reals.
pub fn pure_state_from(dim: usize, xs: &[f64]) -> Vec<Complex> {
    let v = complex_from(&xs[..2 * dim]);
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// General SU(2) element times a phase, from four angles.
pub fn unitary2(a: &[f64]) -> ComplexMatrix {
    let (th, al, be, ph) = (a[0], a[1], a[2], a[3]);
    let g = Complex::from_polar(1.0, ph);
    let (s, c) = th.sin_cos();
    ComplexMatrix::from_vec(
        2,
        vec![
            g * Complex::from_polar(c, al),
            g * Complex::from_polar(s, be),
            -g * Complex::from_polar(s, -be),
            g * Complex::from_polar(c, -al),
        ],
    )
    .unwrap()
}

/// Seeded stream of uniform reals in [-1, 1].
pub struct Draws(ChaCha8Rng);

impl Draws {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn take(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.0.random_range(-1.0..=1.0)).collect()
    }

    pub fn angles(&mut self) -> Vec<f64> {
        (0..4).map(|_| self.0.random_range(0.0..std::f64::consts::TAU)).collect()
    }

    pub fn weights(&mut self, n: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..n).map(|_| self.0.random_range(0.01..1.0)).collect();
        let s: f64 = w.iter().sum();
        w.into_iter().map(|x| x / s).collect()
    }
}

pub const R_GRID: [f64; 6] = [0.01, 0.1, 0.5, 1.0, 2.0, 10.0];
pub const ALPHA_GRID: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 10.0];
pub const T_GRID: [f64; 5] = [0.0, 0.3, 1.0, 3.0, 10.0];
