//! Operators on `G` from symbols: the `G × 𝔤*` calculus, the `G × 𝔷*` calculus with
//! operator-valued symbols, and right convolutions. Operators are exposed through sampled
//! kernels and through their action at requested points.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::Group;
use crate::quantize::grid::{GridFunction, GridND};
use crate::quantize::group_fourier::{inverse_group_fourier, w_transform_dual, OperatorSection, SectionOptions};
use crate::quantize::symbols::{DualSymbol, GaussPoly, SymbolField};
use crate::repcalc::{RepGrid, RepModel};
use crate::spectral::{c, C64};

/// `log(y⁻¹x) = (-y)•x` in exponential coordinates.
pub fn relative(group: &Group, x: &[f64], y: &[f64]) -> Vec<f64> {
    let yinv: Vec<f64> = y.iter().map(|v| -v).collect();
    group.mul(&yinv, x)
}

/// Kernel of `Op_{G×𝔤*}(f)`: `K(x, y) = (2π)^{-n} ∫ e^{i⟨log(y⁻¹x)|𝒳⟩} f(x, 𝒳) d𝒳`.
pub fn op_g_gstar_kernel(group: &Group, f: &dyn SymbolField, x: &[f64], y: &[f64]) -> C64 {
    f.dual_inverse_fourier(x, &relative(group, x, y))
}

fn check_dims(group: &Group, u: &GridFunction, xs: &[Vec<f64>]) -> Result<()> {
    let n = group.dim();
    if u.grid.dim() != n {
        return Err(Error::Dimension { expected: n, got: u.grid.dim() });
    }
    if let Some(x) = xs.iter().find(|x| x.len() != n) {
        return Err(Error::Dimension { expected: n, got: x.len() });
    }
    Ok(())
}

/// `Σ_y K(x, y) u(y) Δy` at each requested `x`, skipping negligible samples of `u`.
fn integrate_kernel(u: &GridFunction, xs: &[Vec<f64>], k: impl Fn(&[f64], &[f64]) -> Result<C64> + Sync) -> Result<Vec<C64>> {
    let cutoff = u.max_abs() * 1e-16;
    let support: Vec<(Vec<f64>, C64)> =
        u.values.iter().enumerate().filter(|(_, v)| v.norm() > cutoff).map(|(i, v)| (u.grid.point(i), *v)).collect();
    let cell = u.grid.cell();
    xs.par_iter()
        .map(|x| {
            let mut acc = c(0.0, 0.0);
            for (y, v) in &support {
                acc += k(x, y)? * v;
            }
            Ok(acc * cell)
        })
        .collect()
}

/// `[Op_{G×𝔤*}(f)u](x)` by quadrature of the kernel against the samples of `u`.
pub fn op_g_gstar_apply(group: &Group, f: &dyn SymbolField, u: &GridFunction, xs: &[Vec<f64>]) -> Result<Vec<C64>> {
    check_dims(group, u, xs)?;
    integrate_kernel(u, xs, |x, y| Ok(op_g_gstar_kernel(group, f, x, y)))
}

/// `[Conv_R(w)u](x) = ∫ u(y) w(y⁻¹x) dy`.
pub fn conv_right(group: &Group, w: &(dyn Fn(&[f64]) -> C64 + Sync), u: &GridFunction, xs: &[Vec<f64>]) -> Result<Vec<C64>> {
    check_dims(group, u, xs)?;
    integrate_kernel(u, xs, |x, y| Ok(w(&relative(group, x, y))))
}

/// An operator-valued symbol `Σ(x, 𝒵)` on `G × 𝔷*`.
pub enum OperatorSymbol<'a> {
    /// `Σ(x, 𝒵) = a(x) b(𝒵)`.
    Separable { a: &'a GaussPoly, b: &'a OperatorSection },
    /// `Σ(x, 𝒵) = Ped_𝒵(f(x, ·)|orbit)`, quantized afresh for each `x`.
    Pedersen { f: &'a dyn SymbolField, model: &'a RepModel, rep: RepGrid, zgrid: &'a GridND, opts: SectionOptions },
}

/// `f(x, ·)` as a symbol on `𝔤*`.
struct Frozen<'a> {
    f: &'a dyn SymbolField,
    x: Vec<f64>,
}

impl DualSymbol for Frozen<'_> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn eval(&self, xi: &[f64]) -> C64 {
        self.f.eval(&self.x, xi)
    }

    fn inverse_fourier(&self, z: &[f64]) -> C64 {
        self.f.dual_inverse_fourier(&self.x, z)
    }
}

impl OperatorSymbol<'_> {
    /// `(scalar, section)` with `Σ(x, ·) = scalar · section`.
    fn at(&self, x: &[f64]) -> Result<(C64, std::borrow::Cow<'_, OperatorSection>)> {
        match self {
            OperatorSymbol::Separable { a, b } => Ok((a.value(x), std::borrow::Cow::Borrowed(*b))),
            OperatorSymbol::Pedersen { f, model, rep, zgrid, opts } => {
                let frozen = Frozen { f: *f, x: x.to_vec() };
                let s = w_transform_dual(model, *rep, &frozen, zgrid, opts)?;
                Ok((c(1.0, 0.0), std::borrow::Cow::Owned(s)))
            }
        }
    }
}

/// Kernel of `Op_{G×𝔷*}(Σ)`: `K(x, y) = ∫ Tr[π_𝒵(y⁻¹x) Σ(x, 𝒵)] dμ(𝒵)`.
pub fn op_group_kernel(group: &Group, sym: &OperatorSymbol, x: &[f64], y: &[f64]) -> Result<C64> {
    let (s, section) = sym.at(x)?;
    if s == c(0.0, 0.0) {
        return Ok(s);
    }
    Ok(s * inverse_group_fourier(&section, &relative(group, x, y))?)
}

/// Kernels at many pairs, reusing the section of each distinct `x`.
pub fn op_group_kernels(group: &Group, sym: &OperatorSymbol, pairs: &[(Vec<f64>, Vec<f64>)]) -> Result<Vec<C64>> {
    pairs.iter().map(|(x, y)| op_group_kernel(group, sym, x, y)).collect()
}

/// `[Op_{G×𝔷*}(Σ)u](x)`.
pub fn op_group_apply(group: &Group, sym: &OperatorSymbol, u: &GridFunction, xs: &[Vec<f64>]) -> Result<Vec<C64>> {
    check_dims(group, u, xs)?;
    let cutoff = u.max_abs() * 1e-16;
    let support: Vec<(Vec<f64>, C64)> =
        u.values.iter().enumerate().filter(|(_, v)| v.norm() > cutoff).map(|(i, v)| (u.grid.point(i), *v)).collect();
    let cell = u.grid.cell();
    xs.iter()
        .map(|x| {
            let (s, section) = sym.at(x)?;
            if s == c(0.0, 0.0) {
                return Ok(s);
            }
            let parts = support
                .par_iter()
                .map(|(y, v)| Ok(inverse_group_fourier(&section, &relative(group, x, y))? * v))
                .collect::<Result<Vec<C64>>>()?;
            Ok(parts.into_iter().sum::<C64>() * s * cell)
        })
        .collect()
}
