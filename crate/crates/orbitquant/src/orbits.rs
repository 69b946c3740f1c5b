//! Coadjoint orbits: canonical bilinear form, isotropy, predual, Pfaffian and flatness.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::linalg::{nullspace, rank};
use crate::lie::scalar::{format_rat, rat_to_f64};
use crate::lie::{rint, Group, LieAlgebraSpec, Poly, Rat, Ring};

/// `Bil_𝒰(E_i, E_j) = ⟨[E_i, E_j] | 𝒰⟩`.
pub fn bil_matrix<T: Ring>(spec: &LieAlgebraSpec, u: &[T]) -> Vec<Vec<T>> {
    let n = spec.dim;
    let mut b = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = T::zero();
            for (k, uk) in u.iter().enumerate() {
                let c = &spec.c[i][j][k];
                if !num_traits::Zero::is_zero(c) {
                    acc = acc + uk.scale(c);
                }
            }
            b[i][j] = acc;
        }
    }
    b
}

/// Pfaffian by expansion along the first row. Odd size gives zero, size zero gives one.
pub fn pfaffian<T: Ring>(a: &[Vec<T>]) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    if n % 2 == 1 {
        return T::zero();
    }
    let mut acc = T::zero();
    for j in 1..n {
        if a[0][j].is_zero() {
            continue;
        }
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor: Vec<Vec<T>> = keep.iter().map(|&r| keep.iter().map(|&c| a[r][c].clone()).collect()).collect();
        let term = a[0][j].clone() * pfaffian(&minor);
        acc = if j % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

/// Restriction of a square matrix to the given index set.
pub fn restrict<T: Clone>(a: &[Vec<T>], idx: &[usize]) -> Vec<Vec<T>> {
    idx.iter().map(|&r| idx.iter().map(|&c| a[r][c].clone()).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub point: Vec<String>,
    pub orbit_dim: usize,
    pub isotropy_basis: Vec<Vec<String>>,
    pub predual_indices: Vec<usize>,
    pub is_flat: bool,
    /// Pfaffian of `Bil_𝒰` on the predual; present for flat orbits.
    pub pfaffian: Option<String>,
    #[serde(skip)]
    pub pfaffian_exact: Option<Rat>,
}

/// Isotropy algebra `𝔤_𝒰 = {X : 𝒰 ∘ ad_X = 0}` as an exact basis.
pub fn isotropy_basis(spec: &LieAlgebraSpec, u: &[Rat]) -> Vec<Vec<Rat>> {
    let b = bil_matrix(spec, u);
    nullspace(&b, spec.dim)
}

/// Jump indices of the Jordan-Hölder order relative to the isotropy algebra.
pub fn jump_indices(spec: &LieAlgebraSpec, iso: &[Vec<Rat>]) -> Vec<usize> {
    let n = spec.dim;
    let mut span: Vec<Vec<Rat>> = iso.to_vec();
    let mut r = rank(&span, n);
    let mut jumps = Vec::new();
    for &j in &spec.jh_order {
        span.push(spec.basis_vector(j));
        let nr = rank(&span, n);
        if nr > r {
            jumps.push(j);
            r = nr;
        }
    }
    jumps
}

pub fn orbit_report(group: &Group, u: &[Rat]) -> Result<OrbitReport> {
    let spec = &group.spec;
    if u.len() != spec.dim {
        return Err(Error::Dimension { expected: spec.dim, got: u.len() });
    }
    let iso = isotropy_basis(spec, u);
    let center = spec.center_basis();
    let jumps = jump_indices(spec, &iso);
    // Center ⊂ isotropy always; flat iff equal dimension.
    let is_flat = iso.len() == center.len();
    let pf = if is_flat {
        let b = bil_matrix(spec, u);
        Some(pfaffian(&restrict(&b, &jumps)))
    } else {
        None
    };
    Ok(OrbitReport {
        point: u.iter().map(format_rat).collect(),
        orbit_dim: spec.dim - iso.len(),
        isotropy_basis: iso.iter().map(|v| v.iter().map(format_rat).collect()).collect(),
        predual_indices: jumps,
        is_flat,
        pfaffian: pf.as_ref().map(format_rat),
        pfaffian_exact: pf,
    })
}

/// Structure shared by all flat orbits of a group with flat generic orbits.
#[derive(Clone, Debug)]
pub struct FlatStructure {
    /// Indices of central basis vectors; coordinates of `𝔷*`.
    pub central: Vec<usize>,
    /// Predual indices (non-central, in Jordan-Hölder order).
    pub predual: Vec<usize>,
    /// Pfaffian as a polynomial in the central dual coordinates.
    pub pf: Poly<Rat>,
}

impl FlatStructure {
    pub fn new(spec: &LieAlgebraSpec) -> Result<Self> {
        let central = spec.central_indices()?;
        let predual: Vec<usize> = spec.jh_order.iter().copied().filter(|i| !central.contains(i)).collect();
        let m = central.len();
        let mut u: Vec<Poly<Rat>> = vec![Poly::zero(m); spec.dim];
        for (a, &c) in central.iter().enumerate() {
            u[c] = Poly::var(m, a);
        }
        let b = bil_matrix(spec, &u);
        let pf = if predual.is_empty() { Poly::constant(m, rint(1)) } else { pfaffian(&restrict(&b, &predual)) };
        if pf.is_zero() {
            return Err(Error::NotFlat("Pfaffian vanishes identically; no flat orbits".into()));
        }
        Ok(FlatStructure { central, predual, pf })
    }

    /// Half the orbit dimension.
    pub fn d(&self) -> usize {
        self.predual.len() / 2
    }

    pub fn m(&self) -> usize {
        self.central.len()
    }

    pub fn pf_f64(&self, z: &[f64]) -> f64 {
        self.pf.eval_f64(z)
    }

    pub fn pf_exact(&self, z: &[Rat]) -> Rat {
        self.pf.eval(z, |c| c.clone())
    }

    /// `2^d d!`, the constant relating the documented densities to Lebesgue measure.
    pub fn density_constant(&self) -> f64 {
        let d = self.d();
        (1..=d).fold(2f64.powi(d as i32), |a, k| a * k as f64)
    }

    /// Plancherel density `2^d d! |Pf(𝒵)|` against the reference measure on `𝔷*`.
    pub fn plancherel_density(&self, z: &[f64]) -> f64 {
        self.density_constant() * self.pf_f64(z).abs()
    }

    /// Plancherel measure as a multiple of Lebesgue measure `d𝒵`: `|Pf(𝒵)| / (2π)^{m+d}`.
    pub fn plancherel_lebesgue(&self, z: &[f64]) -> f64 {
        self.pf_f64(z).abs() / (2.0 * std::f64::consts::PI).powi((self.m() + self.d()) as i32)
    }

    /// Orbit measure density `(2^d d! |Pf(𝒵)|)^{-1}` against the reference measure on the orbit.
    pub fn orbit_density(&self, z: &[f64]) -> f64 {
        1.0 / self.plancherel_density(z)
    }

    /// Orbit measure as a multiple of Lebesgue measure on `𝔷^⊥`: `((2π)^d |Pf(𝒵)|)^{-1}`.
    pub fn orbit_lebesgue(&self, z: &[f64]) -> f64 {
        1.0 / ((2.0 * std::f64::consts::PI).powi(self.d() as i32) * self.pf_f64(z).abs())
    }

    /// Splits a point of `𝔤*` into its predual and central coordinates.
    pub fn split(&self, xi: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (self.predual.iter().map(|&i| xi[i]).collect(), self.central.iter().map(|&i| xi[i]).collect())
    }

    /// Reassembles `𝒵 + Y` with `Y ∈ 𝔷^⊥` given in predual coordinates.
    pub fn join(&self, y: &[f64], z: &[f64], n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (&i, v) in self.predual.iter().zip(y) {
            out[i] = *v;
        }
        for (&i, v) in self.central.iter().zip(z) {
            out[i] = *v;
        }
        out
    }
}

/// Floating Pfaffian of an already restricted matrix, checked against `det` in tests.
pub fn pfaffian_f64(a: &[Vec<f64>]) -> f64 {
    pfaffian(a)
}

pub fn rat_vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}
