//! Periodic spectral primitives on uniform one-dimensional grids.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e^{iθ}`.
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Cached forward and inverse plans of one length.
#[derive(Clone)]
pub struct FftPair {
    pub n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl FftPair {
    pub fn new(n: usize) -> Self {
        let mut p = FftPlanner::new();
        FftPair { n, fwd: p.plan_fft_forward(n), inv: p.plan_fft_inverse(n) }
    }

    /// Unnormalized `Σ_j x_j e^{-2πi jk/n}`.
    pub fn forward(&self, x: &mut [C64]) {
        self.fwd.process(x);
    }

    /// Unnormalized `Σ_k x_k e^{+2πi jk/n}`.
    pub fn inverse(&self, x: &mut [C64]) {
        self.inv.process(x);
    }
}

impl std::fmt::Debug for FftPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FftPair({})", self.n)
    }
}

/// Signed frequency index of FFT bin `k` for length `n`: `0, 1, …, n/2-1, -n/2, …, -1`.
pub fn signed_index(k: usize, n: usize) -> i64 {
    if k < n.div_ceil(2) {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Angular frequencies of the FFT bins for a grid of `n` points with spacing `h`.
pub fn angular_frequencies(n: usize, h: f64) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * signed_index(k, n) as f64 / (n as f64 * h)).collect()
}

/// Multiplier of bin `k` for a translation by `shift` (grid units). The Nyquist bin of an even
/// grid is split symmetrically so that real data stays real.
fn shift_multiplier(k: usize, n: usize, shift: f64) -> C64 {
    let s = signed_index(k, n);
    if n % 2 == 0 && s == -(n as i64) / 2 {
        c((PI * shift).cos(), 0.0)
    } else {
        cis(2.0 * PI * s as f64 * shift / n as f64)
    }
}

/// Band-limited periodic translation: `out_j = f(x_j + shift·h)`.
pub fn shift_periodic(plan: &FftPair, data: &[C64], shift: f64) -> Vec<C64> {
    let n = data.len();
    let r = shift.round();
    if (shift - r).abs() < 1e-12 {
        let s = (r as i64).rem_euclid(n as i64) as usize;
        return (0..n).map(|j| data[(j + s) % n]).collect();
    }
    let mut buf = data.to_vec();
    plan.forward(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        *v *= shift_multiplier(k, n, shift) / n as f64;
    }
    plan.inverse(&mut buf);
    buf
}

/// Periodic Dirichlet interpolation kernel `D(y)` on `n` nodes with spacing `h`, so that the
/// band-limited interpolant is `f(y) = Σ_j f_j D(y - x_j)`.
pub fn dirichlet(n: usize, h: f64, y: f64) -> f64 {
    let t = y / h;
    let r = t.round();
    if (t - r).abs() < 1e-13 {
        return if (r as i64).rem_euclid(n as i64) == 0 { 1.0 } else { 0.0 };
    }
    let x = PI * t / n as f64;
    if n % 2 == 1 {
        (n as f64 * x).sin() / (n as f64 * x.sin())
    } else {
        // Even n with the Nyquist term split into a cosine.
        (n as f64 * x).sin() * x.cos() / (n as f64 * x.sin())
    }
}

/// Periodic spectral second-derivative stencil `c_r`, with `(D2 f)_j = Σ_k c_{j-k} f_k`.
/// Symmetric in `r` by construction.
pub fn second_derivative_stencil(n: usize, h: f64) -> Vec<f64> {
    let freqs = angular_frequencies(n, h);
    (0..n)
        .map(|r| {
            let mut acc = 0.0;
            for (k, w) in freqs.iter().enumerate() {
                let s = signed_index(k, n);
                let ph = 2.0 * PI * s as f64 * r as f64 / n as f64;
                acc -= w * w * ph.cos();
            }
            acc / n as f64
        })
        .collect()
}

/// Periodic spectral first-derivative stencil (Nyquist bin dropped), antisymmetric in `r`.
pub fn first_derivative_stencil(n: usize, h: f64) -> Vec<f64> {
    let freqs = angular_frequencies(n, h);
    (0..n)
        .map(|r| {
            let mut acc = 0.0;
            for (k, w) in freqs.iter().enumerate() {
                let s = signed_index(k, n);
                if n % 2 == 0 && s == -(n as i64) / 2 {
                    continue;
                }
                let ph = 2.0 * PI * s as f64 * r as f64 / n as f64;
                acc -= w * ph.sin();
            }
            acc / n as f64
        })
        .collect()
}
