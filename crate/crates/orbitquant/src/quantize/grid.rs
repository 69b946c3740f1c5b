//! Uniform tensor grids and the Fourier pair between `𝔤` and `𝔤*`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{c, cis, FftPair, C64};

/// Upper bound on the number of points of any [`GridND`].
pub const MAX_GRID_POINTS: usize = 1 << 26;

/// Nodes `start + k·step`, `k = 0..len`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if len == 0 || !(step > 0.0 && step.is_finite()) || !start.is_finite() {
            return Err(Error::Grid(format!("bad axis start={start} step={step} len={len}")));
        }
        Ok(Axis { start, step, len })
    }

    /// `len` nodes spread symmetrically over `[-half, half)`.
    pub fn centered(half: f64, len: usize) -> Result<Self> {
        Axis::new(-half, 2.0 * half / len as f64, len)
    }

    /// Nodes `k·step` for `k = -kmax..=kmax`.
    pub fn symmetric(step: f64, kmax: usize) -> Result<Self> {
        Axis::new(-(kmax as f64) * step, step, 2 * kmax + 1)
    }

    pub fn node(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len).map(|k| self.node(k)).collect()
    }

    pub fn end(&self) -> f64 {
        self.node(self.len - 1)
    }

    /// Dual axis of the discrete Fourier transform, in increasing order.
    pub fn dual(&self) -> Axis {
        let dk = 2.0 * PI / (self.len as f64 * self.step);
        Axis { start: -((self.len / 2) as f64) * dk, step: dk, len: self.len }
    }
}

/// A tensor grid stored row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct GridND {
    pub axes: Vec<Axis>,
}

impl GridND {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        let total = axes.iter().try_fold(1usize, |a, ax| a.checked_mul(ax.len));
        match total {
            Some(t) if t <= MAX_GRID_POINTS => Ok(GridND { axes }),
            _ => Err(Error::Grid(format!("grid exceeds {MAX_GRID_POINTS} points"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rectangle-rule weight `h₁⋯h_k`.
    pub fn cell(&self) -> f64 {
        self.axes.iter().map(|a| a.step).product()
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim()];
        for i in (0..self.dim().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.axes[i + 1].len;
        }
        s
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for i in (0..self.dim()).rev() {
            idx[i] = flat % self.axes[i].len;
            flat /= self.axes[i].len;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.axes).fold(0, |acc, (i, a)| acc * a.len + i)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat).iter().zip(&self.axes).map(|(&k, a)| a.node(k)).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    pub fn dual(&self) -> GridND {
        GridND { axes: self.axes.iter().map(Axis::dual).collect() }
    }
}

/// Complex samples on a [`GridND`].
#[derive(Clone, Debug)]
pub struct GridFunction {
    pub grid: GridND,
    pub values: Vec<C64>,
}

impl GridFunction {
    pub fn sample(grid: &GridND, f: impl Fn(&[f64]) -> C64) -> Self {
        let values = grid.points().map(|p| f(&p)).collect();
        GridFunction { grid: grid.clone(), values }
    }

    pub fn zeros(grid: &GridND) -> Self {
        GridFunction { grid: grid.clone(), values: vec![c(0.0, 0.0); grid.len()] }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() * self.grid.cell()
    }

    pub fn l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell()).sqrt()
    }

    pub fn integral(&self) -> C64 {
        self.values.iter().sum::<C64>() * self.grid.cell()
    }

    /// Largest magnitude on the outer faces of the grid, relative to the global maximum.
    pub fn boundary_ratio(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let mut edge: f64 = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let idx = self.grid.multi_index(i);
            if idx.iter().zip(&self.grid.axes).any(|(&k, a)| k == 0 || k + 1 == a.len) {
                edge = edge.max(v.norm());
            }
        }
        edge / max
    }
}

/// Applies `f` to every one-dimensional line of `data` along `axis`.
fn for_each_line(grid: &GridND, data: &mut [C64], axis: usize, mut f: impl FnMut(&mut [C64])) {
    let strides = grid.strides();
    let n = grid.axes[axis].len;
    let stride = strides[axis];
    let outer = grid.len() / (n * stride);
    let mut line = vec![c(0.0, 0.0); n];
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * n * stride + inner;
            for k in 0..n {
                line[k] = data[base + k * stride];
            }
            f(&mut line);
            for k in 0..n {
                data[base + k * stride] = line[k];
            }
        }
    }
}

/// Boundary magnitude above which a sampled function is reported as unresolved.
pub const ALIASING_THRESHOLD: f64 = 1e-12;

/// `(𝓕_{𝔤,𝔤*}h)(𝒳) = ∫ e^{-i⟨X|𝒳⟩} h(X) dX` on the dual grid.
pub fn fourier_g_gstar(h: &GridFunction) -> Result<GridFunction> {
    let ratio = h.boundary_ratio();
    if ratio > ALIASING_THRESHOLD {
        return Err(Error::Resolution(format!("boundary magnitude ratio {ratio:.2e} exceeds {ALIASING_THRESHOLD:e}")));
    }
    let dual = h.grid.dual();
    let mut data = h.values.clone();
    for (ax, (a, d)) in h.grid.axes.iter().zip(&dual.axes).enumerate() {
        let n = a.len;
        let plan = FftPair::new(n);
        let half = n / 2;
        let phase: Vec<C64> = (0..n).map(|m| cis(-d.node(m) * a.start) * a.step).collect();
        let mut tmp = vec![c(0.0, 0.0); n];
        for_each_line(&h.grid, &mut data, ax, |line| {
            plan.forward(line);
            // Dual node m has signed frequency m - n/2, held in bin (m - n/2) mod n.
            for m in 0..n {
                tmp[m] = line[(m + n - half) % n] * phase[m];
            }
            line.copy_from_slice(&tmp);
        });
    }
    Ok(GridFunction { grid: dual, values: data })
}

/// `h(X) = (2π)^{-n} ∫ e^{i⟨X|𝒳⟩} H(𝒳) d𝒳`, sampled on `primal`, whose dual must be `big_h.grid`.
pub fn fourier_g_gstar_inverse(big_h: &GridFunction, primal: &GridND) -> Result<GridFunction> {
    let dual = primal.dual();
    if dual.axes.len() != big_h.grid.axes.len()
        || dual.axes.iter().zip(&big_h.grid.axes).any(|(a, b)| a.len != b.len || (a.step - b.step).abs() > 1e-12 * a.step)
    {
        return Err(Error::Grid("inverse transform: grid is not the dual of the requested primal grid".into()));
    }
    let mut data = big_h.values.clone();
    for (ax, (a, d)) in primal.axes.iter().zip(&big_h.grid.axes).enumerate() {
        let n = a.len;
        let plan = FftPair::new(n);
        let half = n / 2;
        let phase: Vec<C64> = (0..n).map(|m| cis(d.node(m) * a.start) * (d.step / (2.0 * PI))).collect();
        let mut tmp = vec![c(0.0, 0.0); n];
        for_each_line(primal, &mut data, ax, |line| {
            for m in 0..n {
                tmp[(m + n - half) % n] = line[m] * phase[m];
            }
            plan.inverse(&mut tmp);
            line.copy_from_slice(&tmp);
        });
    }
    Ok(GridFunction { grid: primal.clone(), values: data })
}

/// Mode-`axis` product of a row-major tensor with `mat` (`out × shape[axis]`).
pub fn mode_product(data: &[C64], shape: &[usize], axis: usize, mat: &nalgebra::DMatrix<C64>) -> Vec<C64> {
    use rayon::prelude::*;
    let n_in = shape[axis];
    assert_eq!(mat.ncols(), n_in);
    let n_out = mat.nrows();
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut out = vec![c(0.0, 0.0); outer * n_out * inner];
    out.par_chunks_mut(n_out * inner).enumerate().for_each(|(o, block)| {
        let src = &data[o * n_in * inner..(o + 1) * n_in * inner];
        for r in 0..n_out {
            let dst = &mut block[r * inner..(r + 1) * inner];
            for k in 0..n_in {
                let w = mat[(r, k)];
                if w == c(0.0, 0.0) {
                    continue;
                }
                let row = &src[k * inner..(k + 1) * inner];
                for (d, s) in dst.iter_mut().zip(row) {
                    *d += w * s;
                }
            }
        }
    });
    out
}
