//! Test symbols: polynomials times axis-aligned Gaussians, with closed-form Fourier transforms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::scalar::rat_to_f64;
use crate::lie::{Poly, Rat};
use crate::spectral::{c, cis, C64};

/// A scalar function on `𝔤*` that knows its inverse Fourier transform.
pub trait DualSymbol: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, xi: &[f64]) -> C64;
    /// `(2π)^{-n} ∫ e^{i⟨x|𝒳⟩} B(𝒳) d𝒳`.
    fn inverse_fourier(&self, x: &[f64]) -> C64;
}

/// A scalar symbol `f(x, 𝒳)` on `G × 𝔤*`.
pub trait SymbolField: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64], xi: &[f64]) -> C64;
    /// `(2π)^{-n} ∫ e^{i⟨z|𝒳⟩} f(x, 𝒳) d𝒳`.
    fn dual_inverse_fourier(&self, x: &[f64], z: &[f64]) -> C64;
}

/// How one variable of a [`GaussPoly`] is treated by [`GaussPoly::transform`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AxisMode {
    /// Evaluate at the point.
    Eval,
    /// `∫ e^{-ixy} (·) dy` at the point.
    Forward,
    /// `(2π)^{-1} ∫ e^{ixy} (·) dy` at the point.
    Inverse,
}

/// `Σ_e c_e y^e · Π_i exp(-(y_i - m_i)² / (2σ_i²))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussPoly {
    pub center: Vec<f64>,
    pub width: Vec<f64>,
    pub terms: Vec<(Vec<u32>, [f64; 2])>,
}

/// `∫ t^k e^{-t²/2 + ibt} dt = √(2π) iᵏ Heₖ(b) e^{-b²/2}` for `k = 0..=kmax`.
fn gauss_moments(kmax: u32, b: f64) -> Vec<C64> {
    let mut he = vec![1.0, b];
    for k in 1..kmax as usize {
        let next = b * he[k] - k as f64 * he[k - 1];
        he.push(next);
    }
    let base = (2.0 * PI).sqrt() * (-b * b / 2.0).exp();
    let mut ik = c(1.0, 0.0);
    (0..=kmax as usize)
        .map(|k| {
            let v = ik * he[k] * base;
            ik *= c(0.0, 1.0);
            v
        })
        .collect()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl GaussPoly {
    pub fn gaussian(center: Vec<f64>, width: Vec<f64>) -> Result<Self> {
        if center.len() != width.len() {
            return Err(Error::Dimension { expected: center.len(), got: width.len() });
        }
        // An infinite width drops the envelope in that variable; such variables may be
        // evaluated and differentiated but not Fourier transformed.
        if width.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Grid("Gaussian widths must be positive".into()));
        }
        let n = center.len();
        Ok(GaussPoly { center, width, terms: vec![(vec![0; n], [1.0, 0.0])] })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    fn coef(v: [f64; 2]) -> C64 {
        c(v[0], v[1])
    }

    fn pack(v: C64) -> [f64; 2] {
        [v.re, v.im]
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.1 = Self::pack(Self::coef(t.1) * s);
        }
        out
    }

    /// Adds a polynomial term `coef · y^e`.
    pub fn with_term(mut self, e: Vec<u32>, coef: C64) -> Self {
        assert_eq!(e.len(), self.dim());
        if let Some(t) = self.terms.iter_mut().find(|t| t.0 == e) {
            t.1 = Self::pack(Self::coef(t.1) + coef);
        } else {
            self.terms.push((e, Self::pack(coef)));
        }
        self
    }

    /// Replaces the polynomial part by `Σ coef · y^e`.
    pub fn with_poly(mut self, terms: Vec<(Vec<u32>, C64)>) -> Self {
        self.terms.clear();
        for (e, v) in terms {
            self = self.with_term(e, v);
        }
        self
    }

    fn compact(mut self) -> Self {
        self.terms.retain(|t| t.1 != [0.0, 0.0]);
        self.terms.sort_by(|a, b| a.0.cmp(&b.0));
        self
    }

    pub fn add(&self, other: &GaussPoly) -> Result<Self> {
        if self.center != other.center || self.width != other.width {
            return Err(Error::Unsupported("sum of Gaussian symbols with different envelopes".into()));
        }
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out = out.with_term(e.clone(), Self::coef(*v));
        }
        Ok(out.compact())
    }

    /// Product with a polynomial in the same variables.
    pub fn mul_poly(&self, p: &Poly<Rat>) -> Self {
        let n = self.dim();
        let mut out = GaussPoly { center: self.center.clone(), width: self.width.clone(), terms: Vec::new() };
        for (pe, pc) in p.terms() {
            let pc = rat_to_f64(pc);
            for (e, v) in &self.terms {
                let mut ee = e.clone();
                for (i, k) in pe.iter().enumerate() {
                    if i < n {
                        ee[i] += k;
                    }
                }
                out = out.with_term(ee, Self::coef(*v) * pc);
            }
        }
        out.compact()
    }

    /// `∂/∂y_i`, exact.
    pub fn derivative(&self, i: usize) -> Self {
        let (m, s2) = (self.center[i], self.width[i] * self.width[i]);
        let mut out = GaussPoly { center: self.center.clone(), width: self.width.clone(), terms: Vec::new() };
        for (e, v) in &self.terms {
            let v = Self::coef(*v);
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out = out.with_term(d, v * e[i] as f64);
            }
            // -(y - m)/σ² · y^e
            let mut up = e.clone();
            up[i] += 1;
            out = out.with_term(up, -v / s2);
            out = out.with_term(e.clone(), v * m / s2);
        }
        out.compact()
    }

    /// One-variable factor of a term for the given mode.
    fn factor(&self, i: usize, k: u32, y: f64, mode: AxisMode) -> C64 {
        let (m, s) = (self.center[i], self.width[i]);
        match mode {
            AxisMode::Eval => c(y.powi(k as i32) * (-(y - m) * (y - m) / (2.0 * s * s)).exp(), 0.0),
            AxisMode::Forward | AxisMode::Inverse => {
                let sign = if mode == AxisMode::Forward { -1.0 } else { 1.0 };
                // y = m + σt:  ∫ (m+σt)^k e^{-t²/2} e^{i·sign·y·(m+σt)} σ dt
                let b = sign * y * s;
                let mom = gauss_moments(k, b);
                let mut acc = c(0.0, 0.0);
                for j in 0..=k {
                    acc += mom[j as usize] * binomial(k, j) * m.powi((k - j) as i32) * s.powi(j as i32);
                }
                let v = acc * s * cis(sign * y * m);
                if mode == AxisMode::Inverse {
                    v / (2.0 * PI)
                } else {
                    v
                }
            }
        }
    }

    /// Evaluates with each variable either sampled or Fourier transformed.
    pub fn transform(&self, point: &[f64], modes: &[AxisMode]) -> C64 {
        assert_eq!(point.len(), self.dim());
        assert_eq!(modes.len(), self.dim());
        let mut acc = c(0.0, 0.0);
        for (e, v) in &self.terms {
            let mut t = Self::coef(*v);
            for i in 0..self.dim() {
                t *= self.factor(i, e[i], point[i], modes[i]);
                if t == c(0.0, 0.0) {
                    break;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn value(&self, y: &[f64]) -> C64 {
        self.transform(y, &vec![AxisMode::Eval; self.dim()])
    }

    pub fn fourier(&self, xi: &[f64]) -> C64 {
        self.transform(xi, &vec![AxisMode::Forward; self.dim()])
    }

    pub fn inverse_fourier_at(&self, x: &[f64]) -> C64 {
        self.transform(x, &vec![AxisMode::Inverse; self.dim()])
    }

    pub fn integral(&self) -> C64 {
        self.fourier(&vec![0.0; self.dim()])
    }

    /// Restriction to `y_i = v_i` for the listed variables; the result lives on the others.
    pub fn restrict(&self, fixed: &[(usize, f64)]) -> GaussPoly {
        let keep: Vec<usize> = (0..self.dim()).filter(|i| !fixed.iter().any(|(j, _)| j == i)).collect();
        let mut out = GaussPoly {
            center: keep.iter().map(|&i| self.center[i]).collect(),
            width: keep.iter().map(|&i| self.width[i]).collect(),
            terms: Vec::new(),
        };
        for (e, v) in &self.terms {
            let mut t = Self::coef(*v);
            for &(i, y) in fixed {
                t *= self.factor(i, e[i], y, AxisMode::Eval);
            }
            out = out.with_term(keep.iter().map(|&i| e[i]).collect(), t);
        }
        out.compact()
    }

    /// Upper bound for `sup |f|`, from `sup |y^k e^{-(y-m)²/2σ²}| ≤ 2^k max(|m|^k, σ^k k^{k/2} e^{-k/2})`.
    pub fn sup_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|(e, v)| {
                let mut b = Self::coef(*v).norm();
                for (i, &k) in e.iter().enumerate() {
                    if k > 0 {
                        let kf = k as f64;
                        let spread = self.width[i].powi(k as i32) * kf.powf(kf / 2.0) * (-kf / 2.0).exp();
                        b *= 2f64.powi(k as i32) * self.center[i].abs().powi(k as i32).max(spread);
                    }
                }
                b
            })
            .sum()
    }

    /// Factorization `f(y) = f₁(y_first) f₂(y_second)` when the polynomial part has rank one
    /// as a matrix indexed by the exponents in the two variable groups.
    pub fn split_product(&self, first: &[usize], second: &[usize]) -> Option<(GaussPoly, GaussPoly)> {
        let pick = |e: &[u32], idx: &[usize]| -> Vec<u32> { idx.iter().map(|&i| e[i]).collect() };
        let sub = |idx: &[usize]| GaussPoly {
            center: idx.iter().map(|&i| self.center[i]).collect(),
            width: idx.iter().map(|&i| self.width[i]).collect(),
            terms: Vec::new(),
        };
        if first.len() + second.len() != self.dim() {
            return None;
        }
        let live: Vec<&(Vec<u32>, [f64; 2])> = self.terms.iter().filter(|t| t.1 != [0.0, 0.0]).collect();
        let (e0, v0) = live.first().map(|t| (&t.0, Self::coef(t.1)))?;
        let (a0, b0) = (pick(e0, first), pick(e0, second));
        let lookup = |a: &[u32], b: &[u32]| -> C64 {
            live.iter()
                .find(|t| pick(&t.0, first) == a && pick(&t.0, second) == b)
                .map(|t| Self::coef(t.1))
                .unwrap_or(c(0.0, 0.0))
        };
        let mut f1 = sub(first);
        let mut f2 = sub(second);
        let mut rows: Vec<Vec<u32>> = live.iter().map(|t| pick(&t.0, first)).collect();
        let mut cols: Vec<Vec<u32>> = live.iter().map(|t| pick(&t.0, second)).collect();
        rows.sort();
        rows.dedup();
        cols.sort();
        cols.dedup();
        let scale = v0.norm();
        for a in &rows {
            for b in &cols {
                let lhs = lookup(a, b) * v0;
                let rhs = lookup(a, &b0) * lookup(&a0, b);
                if (lhs - rhs).norm() > 1e-14 * scale * scale.max(lhs.norm()) {
                    return None;
                }
            }
        }
        for a in &rows {
            let v = lookup(a, &b0);
            if v != c(0.0, 0.0) {
                f1 = f1.with_term(a.clone(), v);
            }
        }
        for b in &cols {
            let v = lookup(&a0, b) / v0;
            if v != c(0.0, 0.0) {
                f2 = f2.with_term(b.clone(), v);
            }
        }
        Some((f1.compact(), f2.compact()))
    }

    /// Largest `|y_i - m_i|/σ_i` needed before the envelope drops below `tol` relative to its
    /// peak, allowing for polynomial growth.
    pub fn radius(&self, tol: f64) -> f64 {
        let deg = self.terms.iter().flat_map(|t| t.0.iter()).copied().max().unwrap_or(0) as f64;
        (2.0 * (1.0 / tol).ln()).sqrt() + deg.sqrt() + 2.0
    }
}

impl DualSymbol for GaussPoly {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn eval(&self, xi: &[f64]) -> C64 {
        self.value(xi)
    }

    fn inverse_fourier(&self, x: &[f64]) -> C64 {
        self.inverse_fourier_at(x)
    }
}

/// `f(x, 𝒳) = a(x) B(𝒳)`.
#[derive(Clone, Debug)]
pub struct SeparableField {
    pub a: GaussPoly,
    pub b: GaussPoly,
}

impl SymbolField for SeparableField {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn eval(&self, x: &[f64], xi: &[f64]) -> C64 {
        self.a.value(x) * self.b.value(xi)
    }

    fn dual_inverse_fourier(&self, x: &[f64], z: &[f64]) -> C64 {
        self.a.value(x) * self.b.inverse_fourier_at(z)
    }
}

/// A [`GaussPoly`] in the `2n` variables `(x, 𝒳)`.
#[derive(Clone, Debug)]
pub struct JointField {
    pub n: usize,
    pub f: GaussPoly,
}

impl JointField {
    pub fn new(f: GaussPoly) -> Result<Self> {
        if f.dim() % 2 != 0 {
            return Err(Error::Dimension { expected: f.dim() + 1, got: f.dim() });
        }
        Ok(JointField { n: f.dim() / 2, f })
    }
}

impl SymbolField for JointField {
    fn dim(&self) -> usize {
        self.n
    }

    fn eval(&self, x: &[f64], xi: &[f64]) -> C64 {
        let p: Vec<f64> = x.iter().chain(xi).copied().collect();
        self.f.value(&p)
    }

    fn dual_inverse_fourier(&self, x: &[f64], z: &[f64]) -> C64 {
        let p: Vec<f64> = x.iter().chain(z).copied().collect();
        let modes: Vec<AxisMode> = (0..2 * self.n).map(|i| if i < self.n { AxisMode::Eval } else { AxisMode::Inverse }).collect();
        self.f.transform(&p, &modes)
    }
}
