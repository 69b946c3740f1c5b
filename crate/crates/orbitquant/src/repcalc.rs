//! Irreducible representations of Heisenberg-type groups on a sampled line.
//!
//! For a group whose non-central part is spanned by `Q, P` with `[Q,P] = Σ_k c_k Z_k`
//! central, the flat orbit through `𝒵` carries
//! `π_𝒵(q,p,z)φ(q₀) = e^{i(⟨z|𝒵⟩ + (q₀p + qp/2)λ)} φ(q₀ + q)` with `λ = Σ_k c_k 𝒵_k`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lie::scalar::rat_to_f64;
use crate::lie::LieAlgebraSpec;
use crate::orbits::FlatStructure;
use crate::spectral::{c, cis, dirichlet, first_derivative_stencil, second_derivative_stencil, shift_periodic, FftPair, C64};

pub type GridOperator = DMatrix<C64>;

/// Uniform grid `q_k = -L + k h`, `h = 2L/M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepGrid {
    pub m: usize,
    pub l: f64,
}

impl RepGrid {
    pub fn new(m: usize, l: f64) -> Result<Self> {
        if m < 4 || m % 2 != 0 {
            return Err(Error::Grid(format!("grid size must be even and at least 4, got {m}")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Grid(format!("half-width must be positive, got {l}")));
        }
        Ok(RepGrid { m, l })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.l / self.m as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        -self.l + k as f64 * self.h()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.m).map(|k| self.node(k)).collect()
    }

    /// Frequencies `η_j = 2πj/(Mh)`, `j = -M/2 .. M/2-1`, in increasing order.
    pub fn etas(&self) -> Vec<f64> {
        let m = self.m as i64;
        (-m / 2..m / 2).map(|j| 2.0 * PI * j as f64 / (self.m as f64 * self.h())).collect()
    }
}

/// The Heisenberg-type structure of a group: which coordinates play `Q`, `P`, and the
/// linear form `λ(𝒵)`.
#[derive(Clone, Debug)]
pub struct RepModel {
    pub dim: usize,
    pub q: usize,
    pub p: usize,
    pub central: Vec<usize>,
    /// `[Q,P] = Σ_k lambda_coeffs[k] Z_{central[k]}`.
    pub lambda_coeffs: Vec<f64>,
    pub flat: FlatStructure,
}

impl RepModel {
    pub fn new(spec: &LieAlgebraSpec) -> Result<Self> {
        let flat = FlatStructure::new(spec).map_err(|_| Error::NoRepresentation("a group without flat orbits".into()))?;
        if flat.predual.len() != 2 || flat.central.len() + 2 != spec.dim {
            return Err(Error::NoRepresentation(format!(
                "groups other than Heisenberg type (dimension {}, center {})",
                spec.dim,
                flat.central.len()
            )));
        }
        let (q, p) = (flat.predual[0], flat.predual[1]);
        let lambda_coeffs = flat.central.iter().map(|&k| rat_to_f64(&spec.c[q][p][k])).collect();
        Ok(RepModel { dim: spec.dim, q, p, central: flat.central.clone(), lambda_coeffs, flat })
    }

    pub fn lambda(&self, z: &[f64]) -> f64 {
        self.lambda_coeffs.iter().zip(z).map(|(a, b)| a * b).sum()
    }

    pub fn m(&self) -> usize {
        self.central.len()
    }

    /// `(q, p, central part)` of a group element.
    pub fn split(&self, x: &[f64]) -> (f64, f64, Vec<f64>) {
        (x[self.q], x[self.p], self.central.iter().map(|&k| x[k]).collect())
    }

    pub fn compose(&self, qv: f64, pv: f64, zc: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        x[self.q] = qv;
        x[self.p] = pv;
        for (&k, v) in self.central.iter().zip(zc) {
            x[k] = *v;
        }
        x
    }
}

/// A flat orbit `𝒵 + 𝔷^⊥` with its representation realized on a [`RepGrid`].
#[derive(Clone, Debug)]
pub struct RepChart {
    pub model: RepModel,
    pub grid: RepGrid,
    pub z: Vec<f64>,
    pub lambda: f64,
    plan: FftPair,
}

pub const LAMBDA_FLOOR: f64 = 1e-12;

impl RepChart {
    pub fn new(model: &RepModel, grid: RepGrid, z: &[f64]) -> Result<Self> {
        if z.len() != model.m() {
            return Err(Error::Dimension { expected: model.m(), got: z.len() });
        }
        let lambda = model.lambda(z);
        if lambda.abs() < LAMBDA_FLOOR {
            return Err(Error::Degenerate(format!("Pf(𝒵) = {lambda} at 𝒵 = {z:?}")));
        }
        Ok(RepChart { model: model.clone(), grid, z: z.to_vec(), lambda, plan: FftPair::new(grid.m) })
    }

    pub fn h(&self) -> f64 {
        self.grid.h()
    }

    fn central_phase(&self, zc: &[f64]) -> f64 {
        zc.iter().zip(&self.z).map(|(a, b)| a * b).sum()
    }

    /// `π_𝒵(x)φ` on the grid.
    pub fn apply(&self, x: &[f64], phi: &[C64]) -> Result<Vec<C64>> {
        if x.len() != self.model.dim {
            return Err(Error::Dimension { expected: self.model.dim, got: x.len() });
        }
        if phi.len() != self.grid.m {
            return Err(Error::Dimension { expected: self.grid.m, got: phi.len() });
        }
        let (qv, pv, zc) = self.model.split(x);
        if qv.abs() > self.grid.l {
            return Err(Error::Grid(format!("translation {qv} exceeds grid half-width {}", self.grid.l)));
        }
        let shifted = shift_periodic(&self.plan, phi, qv / self.h());
        let base = self.central_phase(&zc);
        Ok(shifted
            .iter()
            .enumerate()
            .map(|(k, v)| v * cis(base + (self.grid.node(k) * pv + qv * pv / 2.0) * self.lambda))
            .collect())
    }

    /// Diagonal of the modulation part of `π_𝒵(x)`.
    fn modulation(&self, x: &[f64]) -> Vec<C64> {
        let (qv, pv, zc) = self.model.split(x);
        let base = self.central_phase(&zc);
        (0..self.grid.m).map(|k| cis(base + (self.grid.node(k) * pv + qv * pv / 2.0) * self.lambda)).collect()
    }

    /// Translation stencil `s_r` with `(Sφ)_k = Σ_j s_{(j-k) mod M} φ_j`, or the integer shift.
    fn translation(&self, qv: f64) -> Translation {
        let t = qv / self.h();
        let r = t.round();
        if (t - r).abs() < 1e-12 {
            Translation::Aligned((r as i64).rem_euclid(self.grid.m as i64) as usize)
        } else {
            let m = self.grid.m;
            let h = self.h();
            Translation::Stencil((0..m).map(|d| dirichlet(m, h, qv - d as f64 * h)).collect())
        }
    }

    /// Dense matrix of `π_𝒵(x)`.
    pub fn matrix(&self, x: &[f64]) -> GridOperator {
        let m = self.grid.m;
        let md = self.modulation(x);
        let (qv, _, _) = self.model.split(x);
        let mut out = GridOperator::zeros(m, m);
        match self.translation(qv) {
            Translation::Aligned(s) => {
                for k in 0..m {
                    out[(k, (k + s) % m)] = md[k];
                }
            }
            Translation::Stencil(st) => {
                for k in 0..m {
                    for j in 0..m {
                        out[(k, j)] = md[k] * st[(j + m - k) % m];
                    }
                }
            }
        }
        out
    }

    /// `Tr[A π_𝒵(x)]`, in `O(M)` for grid-aligned translations and `O(M²)` otherwise.
    pub fn trace_with(&self, a: &GridOperator, x: &[f64]) -> C64 {
        let m = self.grid.m;
        let md = self.modulation(x);
        let (qv, _, _) = self.model.split(x);
        // Tr[A D S] = Σ_k D_k Σ_j S_{kj} A_{jk}
        match self.translation(qv) {
            Translation::Aligned(s) => (0..m).map(|k| md[k] * a[((k + s) % m, k)]).sum(),
            Translation::Stencil(st) => {
                let mut acc = c(0.0, 0.0);
                for k in 0..m {
                    let mut inner = c(0.0, 0.0);
                    for j in 0..m {
                        inner += a[(j, k)] * st[(j + m - k) % m];
                    }
                    acc += md[k] * inner;
                }
                acc
            }
        }
    }

    /// `e^{i⟨z|𝒵⟩}` for a central element.
    pub fn central_character(&self, x: &[f64]) -> Result<C64> {
        let (qv, pv, zc) = self.model.split(x);
        if qv != 0.0 || pv != 0.0 {
            return Err(Error::Unsupported("central character of a non-central element".into()));
        }
        Ok(cis(self.central_phase(&zc)))
    }

    /// Spectral first-derivative matrix `∂`.
    pub fn derivative(&self) -> GridOperator {
        let m = self.grid.m;
        let st = first_derivative_stencil(m, self.h());
        GridOperator::from_fn(m, m, |j, k| c(st[(j + m - k) % m], 0.0))
    }

    /// Position operator `𝔮`.
    pub fn position(&self) -> GridOperator {
        let m = self.grid.m;
        GridOperator::from_fn(m, m, |j, k| if j == k { c(self.grid.node(j), 0.0) } else { c(0.0, 0.0) })
    }

    /// `dπ(E_j)` for a basis vector.
    pub fn generator(&self, j: usize) -> GridOperator {
        let m = self.grid.m;
        if j == self.model.q {
            self.derivative()
        } else if j == self.model.p {
            self.position() * c(0.0, self.lambda)
        } else {
            let k = self.model.central.iter().position(|&x| x == j).expect("basis index");
            GridOperator::identity(m, m) * c(0.0, self.z[k])
        }
    }

    /// `dπ(Q)² + dπ(P)²` with the spectral second derivative: real symmetric, negative.
    pub fn sub_laplacian(&self) -> DMatrix<f64> {
        let m = self.grid.m;
        let st = second_derivative_stencil(m, self.h());
        let lam2 = self.lambda * self.lambda;
        DMatrix::from_fn(m, m, |j, k| {
            let d = if j >= k { st[j - k] } else { st[k - j] };
            if j == k {
                d - lam2 * self.grid.node(j).powi(2)
            } else {
                d
            }
        })
    }

    /// Unitary dilation `(Uφ)(q₀) = r^{1/4} φ(√r q₀)` intertwining `π_𝒵 ∘ 𝔡𝔦𝔩_{√r}` with `π_{r𝒵}`.
    pub fn dilation_intertwiner(&self, r: f64) -> Result<GridOperator> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Grid(format!("dilation factor must be positive, got {r}")));
        }
        let m = self.grid.m;
        let h = self.h();
        let s = r.sqrt();
        let amp = r.powf(0.25);
        Ok(GridOperator::from_fn(m, m, |j, k| {
            let y = s * self.grid.node(j);
            if y < -self.grid.l || y >= self.grid.l {
                c(0.0, 0.0)
            } else {
                c(amp * dirichlet(m, h, y - self.grid.node(k)), 0.0)
            }
        }))
    }

    /// Checks that `Uφ` fits on the grid: for `r < 1` the support of `φ` is stretched by `1/√r`.
    pub fn check_dilation_support(&self, r: f64, phi: &[C64], tol: f64) -> Result<()> {
        let s = r.sqrt();
        let max = phi.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (k, v) in phi.iter().enumerate() {
            if self.grid.node(k).abs() > s * self.grid.l && v.norm() > tol * max {
                return Err(Error::Grid(format!("rescaled support exceeds the grid at q = {}", self.grid.node(k))));
            }
        }
        Ok(())
    }

    /// The chart of another orbit on the same grid, reusing the FFT plans.
    pub fn with_center(&self, z: &[f64]) -> Result<RepChart> {
        if z.len() != self.model.m() {
            return Err(Error::Dimension { expected: self.model.m(), got: z.len() });
        }
        let lambda = self.model.lambda(z);
        if lambda.abs() < LAMBDA_FLOOR {
            return Err(Error::Degenerate(format!("Pf(𝒵) = {lambda} at 𝒵 = {z:?}")));
        }
        Ok(RepChart { model: self.model.clone(), grid: self.grid, z: z.to_vec(), lambda, plan: self.plan.clone() })
    }
}

enum Translation {
    Aligned(usize),
    Stencil(Vec<f64>),
}

/// Operator norm (largest singular value).
pub fn op_norm(a: &GridOperator) -> f64 {
    a.clone().svd(false, false).singular_values.max()
}

/// Hilbert-Schmidt norm.
pub fn hs_norm(a: &GridOperator) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &GridOperator) -> f64 {
    a.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn chart(z: &[f64]) -> RepChart {
        let spec = catalog::load("g4delta:δ=1").unwrap().spec;
        let model = RepModel::new(&spec).unwrap();
        RepChart::new(&model, RepGrid::new(128, 10.0).unwrap(), z).unwrap()
    }

    fn gauss(ch: &RepChart, c0: f64) -> Vec<C64> {
        ch.grid.nodes().iter().map(|q| c((-(q - c0).powi(2)).exp(), 0.3 * q)).collect()
    }

    #[test]
    fn degenerate_orbit_rejected() {
        let spec = catalog::load("g4delta:δ=1").unwrap().spec;
        let model = RepModel::new(&spec).unwrap();
        assert!(matches!(RepChart::new(&model, RepGrid::new(64, 8.0).unwrap(), &[1.0, -1.0]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn abelian_has_no_rep() {
        assert!(RepModel::new(&catalog::abelian(2).spec).is_err());
        assert!(RepModel::new(&catalog::n5_1().spec).is_err());
    }

    #[test]
    fn matrix_agrees_with_apply_and_trace() {
        let ch = chart(&[0.7, 0.4]);
        let phi = gauss(&ch, 0.5);
        for x in [[0.3, -0.2, 0.1, 0.5], [1.25, 0.4, -0.3, 0.2], [-0.625, 1.1, 0.0, 0.0]] {
            let direct = ch.apply(&x, &phi).unwrap();
            let mat = ch.matrix(&x);
            let via = &mat * nalgebra::DVector::from_vec(phi.clone());
            for k in 0..phi.len() {
                assert!((direct[k] - via[k]).norm() < 1e-11);
            }
            let a = GridOperator::from_fn(128, 128, |j, k| c(((j as f64 - k as f64) * 0.1).cos() / (1.0 + j as f64), 0.0));
            let t1 = ch.trace_with(&a, &x);
            let t2 = (&a * &mat).trace();
            assert!((t1 - t2).norm() < 1e-9 * (1.0 + t2.norm()));
        }
    }

    #[test]
    fn sub_laplacian_is_exactly_symmetric() {
        let ch = chart(&[1.0, 0.0]);
        let a = ch.sub_laplacian();
        assert_eq!(a, a.transpose());
    }
}
