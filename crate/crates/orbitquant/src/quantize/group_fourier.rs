//! The group Fourier transform on Heisenberg-type groups, its inverse, and the transform
//! `𝒲` sending symbols on `𝔤*` to operator-valued sections over `𝔷*`.
//!
//! Lebesgue conventions: the Plancherel measure on `𝔷*` is `|Pf(𝒵)| (2π)^{-(m+1)} d𝒵`.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quantize::grid::{mode_product, GridFunction, GridND};
use crate::quantize::symbols::{DualSymbol, GaussPoly};
use crate::quantize::weyl::{pedersen_dequantize, weyl_lambda, OrbitSamples};
use crate::repcalc::{hs_norm, max_abs, GridOperator, RepChart, RepGrid, RepModel, LAMBDA_FLOOR};
use crate::spectral::{c, cis, C64};

/// Thresholds shared by the section builders.
#[derive(Clone, Copy, Debug)]
pub struct SectionOptions {
    /// Required margin `|Pf(𝒵)| ≥ eps0` wherever the section is not negligible.
    pub eps0: f64,
    /// Nodes below this fraction of the global bound are stored as zero.
    pub negligible: f64,
    /// Content allowed inside the margin, relative to the global bound.
    pub margin_tol: f64,
    /// Spectral content allowed at the edge of the resolved frequency window.
    pub edge_tol: f64,
}

impl Default for SectionOptions {
    fn default() -> Self {
        SectionOptions { eps0: 0.25, negligible: 1e-14, margin_tol: 1e-8, edge_tol: 1e-8 }
    }
}

/// An operator field `𝒵 ↦ b(𝒵)` sampled on a grid of `𝔷*`; `None` stands for zero.
#[derive(Clone, Debug)]
pub struct OperatorSection {
    pub model: RepModel,
    pub rep: RepGrid,
    pub zgrid: GridND,
    pub ops: Vec<Option<GridOperator>>,
}

impl OperatorSection {
    pub fn zero(model: &RepModel, rep: RepGrid, zgrid: &GridND) -> Self {
        OperatorSection { model: model.clone(), rep, zgrid: zgrid.clone(), ops: vec![None; zgrid.len()] }
    }

    pub fn z(&self, node: usize) -> Vec<f64> {
        self.zgrid.point(node)
    }

    pub fn lambda(&self, node: usize) -> f64 {
        self.model.lambda(&self.z(node))
    }

    pub fn chart(&self, node: usize) -> Result<RepChart> {
        RepChart::new(&self.model, self.rep, &self.z(node))
    }

    pub fn nonzero(&self) -> usize {
        self.ops.iter().filter(|o| o.is_some()).count()
    }

    /// `(2π)^{-(m+1)} Δ𝒵`, the Plancherel weight per unit `|λ|` of one node.
    pub fn node_weight(&self) -> f64 {
        self.zgrid.cell() / (2.0 * PI).powi(self.model.m() as i32 + 1)
    }

    /// `∫ ‖b(𝒵)‖²_HS dμ(𝒵)`.
    pub fn plancherel_norm_sq(&self) -> f64 {
        let w = self.node_weight();
        self.ops
            .iter()
            .enumerate()
            .filter_map(|(i, o)| o.as_ref().map(|b| self.lambda(i).abs() * hs_norm(b).powi(2) * w))
            .sum()
    }

    /// `∫ ‖b(𝒵)‖_HS dμ(𝒵)` weighted by `|Pf|`, a finite-norm check.
    pub fn hs_sum(&self) -> f64 {
        self.ops.iter().flatten().map(hs_norm).sum()
    }

    pub fn map(&self, f: impl Fn(usize, &GridOperator) -> Result<GridOperator> + Sync) -> Result<OperatorSection> {
        let ops = self
            .ops
            .par_iter()
            .enumerate()
            .map(|(i, o)| o.as_ref().map(|b| f(i, b)).transpose())
            .collect::<Result<Vec<_>>>()?;
        Ok(OperatorSection { ops, ..self.clone() })
    }
}

fn check_aligned(u: &GridFunction, model: &RepModel, rep: RepGrid) -> Result<i64> {
    if u.grid.dim() != model.dim {
        return Err(Error::Dimension { expected: model.dim, got: u.grid.dim() });
    }
    let qa = u.grid.axes[model.q];
    let h = rep.h();
    if (qa.step - h).abs() > 1e-9 * h {
        return Err(Error::Grid(format!("q-axis step {} must equal the representation step {h}", qa.step)));
    }
    let s0 = qa.start / h;
    if (s0 - s0.round()).abs() > 1e-9 {
        return Err(Error::Grid(format!("q-axis start {} must be a multiple of {h}", qa.start)));
    }
    Ok(s0.round() as i64)
}

/// Rearranges samples into axis order `(q, p, central...)`.
fn permute_in(u: &GridFunction, model: &RepModel) -> (Vec<C64>, Vec<usize>) {
    let order: Vec<usize> = [model.q, model.p].into_iter().chain(model.central.iter().copied()).collect();
    let shape: Vec<usize> = order.iter().map(|&i| u.grid.axes[i].len).collect();
    let strides = u.grid.strides();
    let mut out = vec![c(0.0, 0.0); u.values.len()];
    for (t, slot) in out.iter_mut().enumerate() {
        let mut rem = t;
        let mut src = 0;
        for k in (0..order.len()).rev() {
            src += (rem % shape[k]) * strides[order[k]];
            rem /= shape[k];
        }
        *slot = u.values[src];
    }
    (out, shape)
}

/// `[𝓕u](𝒵) = ∫_G u(x) π_𝒵(x)* dx` at every node of `zgrid`.
///
/// The kernel is `h·ũ(q₀ - q, λ(q₀ + q)/2, 𝒵)` with `ũ` the Fourier transform of `u` in `p` and
/// the central variables, evaluated band-limited from the samples. The q-axis of `u` must use
/// the representation step with nodes on its lattice.
pub fn group_fourier(model: &RepModel, rep: RepGrid, u: &GridFunction, zgrid: &GridND, opts: &SectionOptions) -> Result<OperatorSection> {
    let s0 = check_aligned(u, model, rep)?;
    if zgrid.dim() != model.m() {
        return Err(Error::Dimension { expected: model.m(), got: zgrid.dim() });
    }
    let (mut data, mut shape) = permute_in(u, model);
    let (na, np) = (shape[0], shape[1]);
    let pa = u.grid.axes[model.p];
    // Bound for every |ũ|: Σ over central samples of |u| times the cell.
    let central_cell: f64 = model.central.iter().map(|&k| u.grid.axes[k].step).product();
    let per_ap: usize = shape[2..].iter().product();
    let col_sums: Vec<f64> =
        (0..na * np).map(|ap| data[ap * per_ap..(ap + 1) * per_ap].iter().map(|v| v.norm()).sum::<f64>() * central_cell).collect();
    let bound = col_sums.iter().copied().fold(0.0, f64::max);
    // Bound for the transform in p as well, the scale of the edge test.
    let edge_scale = (0..na).map(|ia| col_sums[ia * np..(ia + 1) * np].iter().sum::<f64>() * pa.step).fold(0.0, f64::max);
    for (t, &k) in model.central.iter().enumerate() {
        let ax = u.grid.axes[k];
        let zx = zgrid.axes[t];
        let mat = DMatrix::from_fn(zx.len, ax.len, |r, j| cis(-ax.node(j) * zx.node(r)) * ax.step);
        data = mode_product(&data, &shape, 2 + t, &mat);
        shape[2 + t] = zx.len;
    }
    let nodes = zgrid.len();
    let h = rep.h();
    let m = rep.m;
    let ops = (0..nodes)
        .into_par_iter()
        .map(|node| -> Result<Option<GridOperator>> {
            let ut: Vec<C64> = (0..na * np).map(|ap| data[ap * nodes + node]).collect();
            let umax = ut.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if umax <= opts.negligible * bound {
                return Ok(None);
            }
            let z = zgrid.point(node);
            let lambda = model.lambda(&z);
            if lambda.abs() < opts.eps0 {
                if umax > opts.margin_tol * bound {
                    return Err(Error::SupportMargin(format!(
                        "content {:.2e} at 𝒵 = {z:?} with |Pf| = {:.3e} < {}",
                        umax / bound,
                        lambda.abs(),
                        opts.eps0
                    )));
                }
                return Ok(None);
            }
            let window = PI / pa.step;
            let transform = |eta: f64, ia: usize| -> C64 {
                (0..np).map(|ip| ut[ia * np + ip] * cis(-eta * pa.node(ip))).sum::<C64>() * pa.step
            };
            let edge = (0..na).map(|ia| transform(window, ia).norm().max(transform(-window, ia).norm())).fold(0.0, f64::max);
            if edge > opts.edge_tol * edge_scale {
                return Err(Error::Resolution(format!(
                    "p-spectrum at the window edge ±{window:.3} is {:.2e} of its scale at 𝒵 = {z:?}",
                    edge / edge_scale
                )));
            }
            let mut a = GridOperator::zeros(m, m);
            for sigma in 0..2 * m - 1 {
                let eta = lambda * (-2.0 * rep.l + sigma as f64 * h) / 2.0;
                if eta.abs() > window {
                    continue;
                }
                let phases: Vec<C64> = (0..np).map(|ip| cis(-eta * pa.node(ip)) * pa.step).collect();
                let jlo = sigma.saturating_sub(m - 1);
                let jhi = sigma.min(m - 1);
                for j in jlo..=jhi {
                    let k = sigma - j;
                    let ia = j as i64 - k as i64 - s0;
                    if ia < 0 || ia >= na as i64 {
                        continue;
                    }
                    let ia = ia as usize;
                    let v: C64 = (0..np).map(|ip| ut[ia * np + ip] * phases[ip]).sum();
                    a[(j, k)] = v * h;
                }
            }
            Ok(Some(a))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorSection { model: model.clone(), rep, zgrid: zgrid.clone(), ops })
}

/// [`group_fourier`] at a single orbit.
pub fn group_fourier_at(model: &RepModel, rep: RepGrid, u: &GridFunction, z: &[f64], opts: &SectionOptions) -> Result<GridOperator> {
    let axes = z.iter().map(|&v| crate::quantize::grid::Axis::new(v, 1.0, 1)).collect::<Result<Vec<_>>>()?;
    let zg = GridND::new(axes)?;
    let opts = SectionOptions { eps0: LAMBDA_FLOOR, ..*opts };
    let s = group_fourier(model, rep, u, &zg, &opts)?;
    Ok(s.ops.into_iter().next().flatten().unwrap_or_else(|| GridOperator::zeros(rep.m, rep.m)))
}

/// `u(x) = ∫ Tr[b(𝒵) π_𝒵(x)] dμ(𝒵)`.
pub fn inverse_group_fourier(section: &OperatorSection, x: &[f64]) -> Result<C64> {
    if x.len() != section.model.dim {
        return Err(Error::Dimension { expected: section.model.dim, got: x.len() });
    }
    let template = match section.ops.iter().position(|o| o.is_some()) {
        Some(i) => section.chart(i)?,
        None => return Ok(c(0.0, 0.0)),
    };
    let w = section.node_weight();
    let parts: Vec<C64> = section
        .ops
        .par_iter()
        .enumerate()
        .map(|(i, o)| -> Result<C64> {
            match o {
                None => Ok(c(0.0, 0.0)),
                Some(b) => {
                    let ch = template.with_center(&section.z(i))?;
                    Ok(ch.trace_with(b, x) * ch.lambda.abs())
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.into_iter().sum::<C64>() * w)
}

/// [`inverse_group_fourier`] on a whole grid whose q-axis sits on the representation lattice.
pub fn inverse_group_fourier_grid(section: &OperatorSection, target: &GridND) -> Result<GridFunction> {
    let model = &section.model;
    let rep = section.rep;
    let probe = GridFunction::zeros(target);
    let s0 = check_aligned(&probe, model, rep)?;
    let qa = target.axes[model.q];
    let pa = target.axes[model.p];
    let (na, np) = (qa.len, pa.len);
    let nodes = section.zgrid.len();
    let m = rep.m;
    let h = rep.h();
    // T[(a, p), node] = |λ| Σ_k e^{iλp(q_k + a/2)} b[(k + s) mod M, k]
    let per_node: Vec<Option<Vec<C64>>> = section
        .ops
        .par_iter()
        .enumerate()
        .map(|(node, o)| {
            o.as_ref().map(|b| {
                let lambda = section.lambda(node);
                let mut t = vec![c(0.0, 0.0); na * np];
                for ia in 0..na {
                    let s = s0 + ia as i64;
                    let a = s as f64 * h;
                    let diag: Vec<(f64, C64)> = (0..m)
                        .map(|k| {
                            let r = (k as i64 + s).rem_euclid(m as i64) as usize;
                            (rep.node(k) + a / 2.0, b[(r, k)])
                        })
                        .collect();
                    for ip in 0..np {
                        let pv = pa.node(ip);
                        t[ia * np + ip] = diag.iter().map(|(ck, v)| v * cis(lambda * pv * ck)).sum::<C64>() * lambda.abs();
                    }
                }
                t
            })
        })
        .collect();
    let mut data = vec![c(0.0, 0.0); na * np * nodes];
    for (node, t) in per_node.iter().enumerate() {
        if let Some(t) = t {
            for (ap, v) in t.iter().enumerate() {
                data[ap * nodes + node] = *v;
            }
        }
    }
    let mut shape: Vec<usize> = vec![na, np];
    shape.extend(section.zgrid.axes.iter().map(|a| a.len));
    for (t, &k) in model.central.iter().enumerate() {
        let tx = target.axes[k];
        let zx = section.zgrid.axes[t];
        let mat = DMatrix::from_fn(tx.len, zx.len, |r, j| cis(tx.node(r) * zx.node(j)));
        data = mode_product(&data, &shape, 2 + t, &mat);
        shape[2 + t] = tx.len;
    }
    let w = section.node_weight();
    // Back from (q, p, central...) to the target layout.
    let order: Vec<usize> = [model.q, model.p].into_iter().chain(model.central.iter().copied()).collect();
    let strides = target.strides();
    let mut out = GridFunction::zeros(target);
    for (t, v) in data.iter().enumerate() {
        let mut rem = t;
        let mut dst = 0;
        for k in (0..order.len()).rev() {
            dst += (rem % shape[k]) * strides[order[k]];
            rem /= shape[k];
        }
        out.values[dst] = v * w;
    }
    Ok(out)
}

/// Key for caching Pedersen operators by `λ`.
fn lambda_key(lambda: f64) -> i64 {
    (lambda * 1e9).round() as i64
}

/// `𝒲B`: at each node the Pedersen quantization of `B` restricted to the orbit `𝒵 + 𝔷^⊥`.
///
/// Symbols that split as `B₁(ρ, ϑ)·B₂(𝒵)` are quantized once per distinct `λ`.
pub fn w_transform(model: &RepModel, rep: RepGrid, b: &GaussPoly, zgrid: &GridND, opts: &SectionOptions) -> Result<OperatorSection> {
    if b.dim() != model.dim {
        return Err(Error::Dimension { expected: model.dim, got: b.dim() });
    }
    if zgrid.dim() != model.m() {
        return Err(Error::Dimension { expected: model.m(), got: zgrid.dim() });
    }
    let pred = [model.q, model.p];
    let global = b.sup_bound();
    let nodes = zgrid.len();
    if let Some((b1, b2)) = b.split_product(&pred, &model.central) {
        let b2max = b2.sup_bound();
        let mut weights = vec![None; nodes];
        for (node, w) in weights.iter_mut().enumerate() {
            let z = zgrid.point(node);
            let v = b2.value(&z);
            if v.norm() <= opts.negligible * b2max {
                continue;
            }
            let lambda = model.lambda(&z);
            if lambda.abs() < opts.eps0 {
                if v.norm() > opts.margin_tol * b2max {
                    return Err(Error::SupportMargin(format!("|B| = {:.2e} at 𝒵 = {z:?} with |Pf| = {:.3e}", v.norm(), lambda.abs())));
                }
                continue;
            }
            *w = Some((v, lambda));
        }
        let mut lambdas: Vec<f64> = weights.iter().flatten().map(|(_, l)| *l).collect();
        lambdas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        lambdas.dedup_by(|a, b| lambda_key(*a) == lambda_key(*b));
        let cache: HashMap<i64, GridOperator> = lambdas
            .par_iter()
            .map(|&l| weyl_lambda(rep, l, |r, t| b1.value(&[r, t])).map(|op| (lambda_key(l), op)))
            .collect::<Result<_>>()?;
        let ops = weights.into_iter().map(|w| w.map(|(v, l)| &cache[&lambda_key(l)] * v)).collect();
        return Ok(OperatorSection { model: model.clone(), rep, zgrid: zgrid.clone(), ops });
    }
    let ops = (0..nodes)
        .into_par_iter()
        .map(|node| -> Result<Option<GridOperator>> {
            let z = zgrid.point(node);
            let fixed: Vec<(usize, f64)> = model.central.iter().copied().zip(z.iter().copied()).collect();
            let r = b.restrict(&fixed);
            if r.sup_bound() <= opts.negligible * global {
                return Ok(None);
            }
            let lambda = model.lambda(&z);
            if lambda.abs() < opts.eps0 {
                if r.sup_bound() > opts.margin_tol * global {
                    return Err(Error::SupportMargin(format!("symbol content at 𝒵 = {z:?} with |Pf| = {:.3e}", lambda.abs())));
                }
                return Ok(None);
            }
            // restrict() keeps the predual variables in increasing index order.
            let swap = model.q > model.p;
            let op = weyl_lambda(rep, lambda, |rho, theta| if swap { r.value(&[theta, rho]) } else { r.value(&[rho, theta]) })?;
            Ok(Some(op))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorSection { model: model.clone(), rep, zgrid: zgrid.clone(), ops })
}

/// `𝒲B` for an arbitrary symbol, evaluated pointwise on each orbit.
pub fn w_transform_dual(model: &RepModel, rep: RepGrid, b: &dyn DualSymbol, zgrid: &GridND, opts: &SectionOptions) -> Result<OperatorSection> {
    if b.dim() != model.dim {
        return Err(Error::Dimension { expected: model.dim, got: b.dim() });
    }
    let ops = (0..zgrid.len())
        .into_par_iter()
        .map(|node| -> Result<(Option<GridOperator>, f64)> {
            let z = zgrid.point(node);
            let lambda = model.lambda(&z);
            let lam = if lambda.abs() < LAMBDA_FLOOR { LAMBDA_FLOOR } else { lambda };
            let op = weyl_lambda(rep, lam, |rho, theta| b.eval(&model.compose(rho, theta, &z)))?;
            Ok((Some(op), lambda))
        })
        .collect::<Result<Vec<_>>>()?;
    let global = ops.iter().filter_map(|(o, _)| o.as_ref().map(max_abs)).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(ops.len());
    for (node, (o, lambda)) in ops.into_iter().enumerate() {
        let size = o.as_ref().map(max_abs).unwrap_or(0.0);
        if size <= opts.negligible * global {
            out.push(None);
        } else if lambda.abs() < opts.eps0 {
            if size > opts.margin_tol * global {
                return Err(Error::SupportMargin(format!("symbol content at 𝒵 = {:?} with |Pf| = {:.3e}", zgrid.point(node), lambda.abs())));
            }
            out.push(None);
        } else {
            out.push(o);
        }
    }
    Ok(OperatorSection { model: model.clone(), rep, zgrid: zgrid.clone(), ops: out })
}

/// `𝒲⁻¹` at one node: the orbit symbol of `b(𝒵)`.
pub fn w_inverse(section: &OperatorSection, node: usize) -> Result<OrbitSamples> {
    let chart = section.chart(node)?;
    match &section.ops[node] {
        Some(b) => pedersen_dequantize(&chart, b),
        None => pedersen_dequantize(&chart, &GridOperator::zeros(section.rep.m, section.rep.m)),
    }
}

/// The coordinate whose multiplication [`delta_q`] transports to the operator side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coordinate {
    Q,
    P,
}

/// `Δ_q b = 𝓕(q·𝓕⁻¹b)` for a non-central coordinate: `[𝔮, b]` for `q`, `(i/λ)[∂, b]` for `p`.
pub fn delta_q(section: &OperatorSection, coord: Coordinate) -> Result<OperatorSection> {
    let template = match section.ops.iter().position(|o| o.is_some()) {
        Some(i) => section.chart(i)?,
        None => return Ok(section.clone()),
    };
    let pos = template.position();
    let der = template.derivative();
    section.map(|node, b| {
        Ok(match coord {
            Coordinate::Q => &pos * b - b * &pos,
            Coordinate::P => (&der * b - b * &der) * c(0.0, 1.0 / section.lambda(node)),
        })
    })
}

/// Index of a model coordinate as a [`Coordinate`], or an error for central ones.
pub fn coordinate_of(model: &RepModel, index: usize) -> Result<Coordinate> {
    if index == model.q {
        Ok(Coordinate::Q)
    } else if index == model.p {
        Ok(Coordinate::P)
    } else {
        Err(Error::Unsupported(format!("multiplication by central coordinate {index} has no operator-side form here")))
    }
}
