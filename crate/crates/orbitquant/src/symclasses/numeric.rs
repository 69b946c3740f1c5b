//! Difference operators on sampled and Gaussian symbols, powers of `𝓣 = (1 + 𝓡)^{1/ν}` in
//! a representation, and sampled seminorms.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::scalar::rat_to_f64;
use crate::lie::{Group, Poly, Rat};
use crate::quantize::grid::{fourier_g_gstar, fourier_g_gstar_inverse, GridFunction, GridND};
use crate::quantize::symbols::GaussPoly;
use crate::quantize::weyl::weyl_lambda;
use crate::repcalc::{op_norm, GridOperator, RepChart, RepGrid, RepModel};
use crate::spectral::c;

use super::{hom_length, q_tilde, taylor_polynomials};

/// `Γ_q B = 𝓕(q · 𝓕⁻¹B)` through the FFT pair; `b` lives on the dual of `primal`.
pub fn gamma_diff(q: &Poly<Rat>, b: &GridFunction, primal: &GridND) -> Result<GridFunction> {
    let w = fourier_g_gstar_inverse(b, primal)?;
    let mut prod = w.clone();
    for (i, v) in prod.values.iter_mut().enumerate() {
        *v *= q.eval_f64(&primal.point(i));
    }
    let mut out = fourier_g_gstar(&prod)?;
    // Keep the caller's dual grid exactly.
    out.grid = b.grid.clone();
    Ok(out)
}

/// `Γ_q B = q(i∂)B`, exact on Gaussian symbols.
pub fn gamma_diff_exact(q: &Poly<Rat>, b: &GaussPoly) -> GaussPoly {
    let mut out: Option<GaussPoly> = None;
    for (e, coef) in q.terms() {
        let mut t = b.clone();
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                t = t.derivative(i);
            }
        }
        let deg: u32 = e.iter().sum();
        let ik = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][(deg % 4) as usize];
        let t = t.scale(ik * rat_to_f64(coef));
        out = Some(match out {
            None => t,
            Some(o) => o.add(&t).expect("same envelope"),
        });
    }
    out.unwrap_or_else(|| b.scale(c(0.0, 0.0)))
}

/// `𝓣(ξ)^s = (1 + 𝓡(ξ))^{s/ν}` with `𝓡 = -dπ(Q² + P²)` and `ν = 2`.
pub fn represented_t(chart: &RepChart, s: f64) -> GridOperator {
    let a = -chart.sub_laplacian();
    let eig = SymmetricEigen::new(a);
    let powers: Vec<f64> = eig.eigenvalues.iter().map(|&l| (1.0 + l.max(0.0)).powf(s / 2.0)).collect();
    let v = &eig.eigenvectors;
    let m = v.nrows();
    let scaled = DMatrix::from_fn(m, m, |i, k| v[(i, k)] * powers[k]);
    let r = scaled * v.transpose();
    r.map(|x| c(x, 0.0))
}

/// Eigenvalues of `𝓣(ξ)` in increasing order.
pub fn represented_t_spectrum(chart: &RepChart) -> Vec<f64> {
    let a = -chart.sub_laplacian();
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().map(|&l| (1.0 + l).sqrt()).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

/// Parameters of one seminorm `‖·‖_{S^m_{ρ,δ}; (α, β, γ)}` and its sampling lattice.
#[derive(Clone, Debug, Serialize)]
pub struct SeminormSpec {
    pub m: f64,
    pub rho: f64,
    pub delta: f64,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub gamma: f64,
    /// Sample points in `G`.
    pub xs: Vec<Vec<f64>>,
    /// Sample points in `𝔷*`.
    pub zs: Vec<Vec<f64>>,
    pub rep_m: usize,
    pub rep_l: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeminormSample {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeminormReport {
    /// Maximum over the sampled lattice, a lower bound for the essential supremum.
    pub value: f64,
    pub samples: Vec<SeminormSample>,
    pub note: String,
}

/// `(X^β f)(x, 𝒳)` for a joint Gaussian symbol in `(x, 𝒳)`, with `X_j` acting on `x`.
pub fn x_derivative(group: &Group, f: &GaussPoly, beta: &[u32]) -> Result<GaussPoly> {
    let n = group.dim();
    if f.dim() != 2 * n || beta.len() != n {
        return Err(Error::Dimension { expected: 2 * n, got: f.dim() });
    }
    let fields = group.left_invariant_fields();
    let mut g = f.clone();
    // X^β = X_1^{β_1} ⋯ X_n^{β_n}: the rightmost factor acts first.
    for j in (0..n).rev() {
        for _ in 0..beta[j] {
            let mut acc: Option<GaussPoly> = None;
            for (k, coef) in fields[j].iter().enumerate() {
                if coef.is_zero() {
                    continue;
                }
                let t = g.derivative(k).mul_poly(coef);
                acc = Some(match acc {
                    None => t,
                    Some(a) => a.add(&t)?,
                });
            }
            g = acc.unwrap_or_else(|| g.scale(c(0.0, 0.0)));
        }
    }
    Ok(g)
}

/// Sampled seminorm `max ‖𝓣^{-m+ρ[α]-δ[β]+γ} Ped_𝒵[(X^β ⊗ Γ^α) f (x, ·)] 𝓣^{-γ}‖` over the lattice.
pub fn seminorm_estimate(group: &Group, f: &GaussPoly, spec: &SeminormSpec) -> Result<SeminormReport> {
    let n = group.dim();
    let model = RepModel::new(&group.spec)?;
    if spec.alpha.len() != n || spec.beta.len() != n {
        return Err(Error::Dimension { expected: n, got: spec.alpha.len() });
    }
    let weights = &group.spec.weights;
    let la = hom_length(&spec.alpha, weights);
    let lb = hom_length(&spec.beta, weights);
    let qs = taylor_polynomials(group, la)?;
    let q_alpha = qs.iter().find(|(a, _)| a == &spec.alpha).map(|(_, q)| q.clone()).expect("multi-index present");
    let qt = q_tilde(&q_alpha);
    let fx = x_derivative(group, f, &spec.beta)?;
    let grid = RepGrid::new(spec.rep_m, spec.rep_l)?;
    let left = -spec.m + spec.rho * la as f64 - spec.delta * lb as f64 + spec.gamma;
    let pairs: Vec<(Vec<f64>, Vec<f64>)> =
        spec.xs.iter().flat_map(|x| spec.zs.iter().map(move |z| (x.clone(), z.clone()))).collect();
    let samples = pairs
        .par_iter()
        .map(|(x, z)| -> Result<SeminormSample> {
            let fixed: Vec<(usize, f64)> = x.iter().copied().enumerate().collect();
            let sym = gamma_diff_exact(&qt, &fx.restrict(&fixed));
            let chart = RepChart::new(&model, grid, z)?;
            let ped = weyl_lambda(grid, chart.lambda, |rho, theta| sym.value(&model.compose(rho, theta, z)))?;
            let t_left = represented_t(&chart, left);
            let t_right = represented_t(&chart, -spec.gamma);
            let op = t_left * ped * t_right;
            Ok(SeminormSample { x: x.clone(), z: z.clone(), norm: op_norm(&op) })
        })
        .collect::<Result<Vec<_>>>()?;
    let value = samples.iter().map(|s| s.norm).fold(0.0, f64::max);
    Ok(SeminormReport {
        value,
        samples,
        note: "maximum over the listed (x, Z) lattice; a lower bound for the essential supremum".into(),
    })
}
