//! λ-Weyl quantization on a sampled line, the Pedersen calculus of flat orbits, and its inverse.
//!
//! On the grid `q_k = -L + kh` with frequencies `η_m = 2πm/(Mh)`, `m = -M/2..M/2-1`,
//! `Weyl_λ(γ)` is the matrix
//! `A_jk = (1/M) Σ_m e^{2πi(j-k)m/M} γ(η_m, λ(q_j+q_k)/2)`,
//! the quadrature of the kernel `(2π)^{-1} ∫ e^{i(q₀-q)η} γ(η, λ(q₀+q)/2) dη` times `h`,
//! for `|j - k| ≤ M/2` and zero beyond. At `m = -M/2` the symbol is averaged over `η = ±π/h`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::repcalc::{GridOperator, RepChart, RepGrid, LAMBDA_FLOOR};
use crate::spectral::{c, shift_periodic, FftPair, C64};

/// Samples of a symbol on a flat orbit: `values[(a, b)] = Ψ(rho[a], theta[b])`.
#[derive(Clone, Debug)]
pub struct OrbitSamples {
    pub rho: Vec<f64>,
    /// `λ q_k`; decreasing when `λ < 0`.
    pub theta: Vec<f64>,
    pub values: DMatrix<C64>,
}

impl OrbitSamples {
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from `f` over the samples with `|ρ| ≤ rho_max` and `|ϑ| ≤ theta_max`.
    pub fn max_deviation(&self, f: impl Fn(f64, f64) -> C64, rho_max: f64, theta_max: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for (a, &r) in self.rho.iter().enumerate() {
            if r.abs() > rho_max {
                continue;
            }
            for (b, &t) in self.theta.iter().enumerate() {
                if t.abs() > theta_max {
                    continue;
                }
                worst = worst.max((self.values[(a, b)] - f(r, t)).norm());
            }
        }
        worst
    }
}

/// `Weyl_λ(γ)` on `grid`; `gamma(η, v)`.
pub fn weyl_lambda<F>(grid: RepGrid, lambda: f64, gamma: F) -> Result<GridOperator>
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    if !lambda.is_finite() || lambda.abs() < LAMBDA_FLOOR {
        return Err(Error::Degenerate(format!("λ = {lambda}")));
    }
    let m = grid.m;
    let h = grid.h();
    let etas = grid.etas();
    let plan = FftPair::new(m);
    let half = m / 2;
    // One inverse FFT per anti-diagonal σ = j + k.
    let diags: Vec<Vec<C64>> = (0..2 * m - 1)
        .into_par_iter()
        .map(|sigma| {
            let v = lambda * (-2.0 * grid.l + sigma as f64 * h) / 2.0;
            let mut buf = vec![c(0.0, 0.0); m];
            for (idx, &eta) in etas.iter().enumerate() {
                buf[(idx + m - half) % m] = gamma(eta, v);
            }
            // ±π/h carry the same phase; the Nyquist sample is their mean.
            buf[half] = (buf[half] + gamma(-etas[0], v)) / 2.0;
            plan.inverse(&mut buf);
            for b in &mut buf {
                *b /= m as f64;
            }
            buf
        })
        .collect();
    let mut a = GridOperator::zeros(m, m);
    // The η-lattice resolves q₀ - q only modulo 2L; the principal offsets are kept.
    for j in 0..m {
        for k in 0..m {
            if j.abs_diff(k) > half {
                continue;
            }
            let r = (j + m - k) % m;
            a[(j, k)] = diags[j + k][r];
        }
    }
    Ok(a)
}

/// `Ped_𝒵(Ψ)` for a symbol `Ψ(ρ, ϑ)` in the orbit coordinates of the chart.
pub fn pedersen_quantize<F>(chart: &RepChart, psi: F) -> Result<GridOperator>
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    weyl_lambda(chart.grid, chart.lambda, psi)
}

/// `∫_Ω Ψ dγ` from the Lebesgue integral `∫∫ Ψ dρ dϑ`.
pub fn orbit_integral(lambda: f64, lebesgue: C64) -> C64 {
    lebesgue / (2.0 * PI * lambda.abs())
}

/// Inverse of [`pedersen_quantize`]: samples of the symbol at `(η_m, λq_k)`.
///
/// Entries on odd anti-diagonal offsets sit at half-integer centers and are moved onto the
/// nodes by a band-limited half-step translation.
pub fn pedersen_dequantize(chart: &RepChart, s: &GridOperator) -> Result<OrbitSamples> {
    let m = chart.grid.m;
    if s.nrows() != m || s.ncols() != m {
        return Err(Error::Dimension { expected: m, got: s.nrows() });
    }
    let plan = FftPair::new(m);
    let mi = m as i64;
    let half = mi / 2;
    // atil[i][r mod M] = Ã_r(q_i) for r in [-M/2, M/2).
    let mut atil = vec![vec![c(0.0, 0.0); m]; m];
    let get = |j: i64, k: i64| -> C64 {
        if (0..mi).contains(&j) && (0..mi).contains(&k) {
            s[(j as usize, k as usize)]
        } else {
            c(0.0, 0.0)
        }
    };
    for r in -half..half {
        let slot = r.rem_euclid(mi) as usize;
        if r % 2 == 0 {
            let t = r / 2;
            for i in 0..mi {
                atil[i as usize][slot] = get(i + t, i - t);
            }
        } else {
            let seq: Vec<C64> = (0..mi).map(|i| get(i + (r + 1) / 2, i - (r - 1) / 2)).collect();
            let shifted = shift_periodic(&plan, &seq, -0.5);
            for i in 0..m {
                atil[i][slot] = shifted[i];
            }
        }
    }
    let mut values = DMatrix::zeros(m, m);
    for (i, row) in atil.iter_mut().enumerate() {
        plan.forward(row);
        for a in 0..m {
            values[(a, i)] = row[(a + m - m / 2) % m];
        }
    }
    Ok(OrbitSamples { rho: chart.grid.etas(), theta: chart.grid.nodes().iter().map(|q| chart.lambda * q).collect(), values })
}

/// `Ψ₁ ♯ Ψ₂ = Ped⁻¹(Ped(Ψ₁) Ped(Ψ₂))`.
pub fn sharp_product<F, G>(chart: &RepChart, psi1: F, psi2: G) -> Result<OrbitSamples>
where
    F: Fn(f64, f64) -> C64 + Sync,
    G: Fn(f64, f64) -> C64 + Sync,
{
    let a = pedersen_quantize(chart, psi1)?;
    let b = pedersen_quantize(chart, psi2)?;
    pedersen_dequantize(chart, &(a * b))
}

/// Operator trace.
pub fn trace(a: &GridOperator) -> C64 {
    a.diagonal().iter().sum()
}
