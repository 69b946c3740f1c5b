//! The simply connected group in exponential coordinates.

use std::sync::Arc;

use super::algebra::LieAlgebraSpec;
use super::bch::{DynkinTable, DEFAULT_BCH_DEPTH};
use super::poly::Poly;
use super::scalar::{rat, rint, Rat, Ring};
use crate::error::{Error, Result};

/// Bernoulli numbers `B_n^+` divided by `n!`, for the left-invariant field series.
fn bernoulli_over_factorial(n: usize) -> Rat {
    match n {
        0 => rint(1),
        1 => rat(1, 2),
        2 => rat(1, 12),
        4 => rat(-1, 720),
        6 => rat(1, 30240),
        8 => rat(-1, 1209600),
        3 | 5 | 7 => rint(0),
        _ => panic!("left-invariant field series supports step <= 8"),
    }
}

/// A nilpotent group `G ≅ 𝔤` with the BCH product.
#[derive(Clone, Debug)]
pub struct Group {
    pub spec: LieAlgebraSpec,
    table: Arc<DynkinTable>,
}

impl Group {
    pub fn new(spec: LieAlgebraSpec) -> Result<Self> {
        Self::with_depth(spec, DEFAULT_BCH_DEPTH)
    }

    pub fn with_depth(spec: LieAlgebraSpec, depth: usize) -> Result<Self> {
        spec.ensure_valid()?;
        if spec.step > depth {
            return Err(Error::DepthExceeded { step: spec.step, depth });
        }
        let table = Arc::new(DynkinTable::new(spec.step.max(1)));
        Ok(Group { spec, table })
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    fn check<T>(&self, x: &[T]) -> Result<()> {
        if x.len() != self.spec.dim {
            return Err(Error::Dimension { expected: self.spec.dim, got: x.len() });
        }
        Ok(())
    }

    /// `x • y = log(exp x exp y)`.
    pub fn bch<T: Ring>(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    pub fn mul<T: Ring>(&self, x: &[T], y: &[T]) -> Vec<T> {
        self.table.apply(&self.spec, x, y, self.spec.step)
    }

    pub fn inverse<T: Ring>(&self, x: &[T]) -> Vec<T> {
        x.iter().map(|v| -v.clone()).collect()
    }

    /// `exp(ad_x) y`, truncated at the nilpotency step.
    pub fn exp_ad<T: Ring>(&self, x: &[T], y: &[T]) -> Vec<T> {
        let mut out = y.to_vec();
        let mut term = y.to_vec();
        let mut fact = rint(1);
        for k in 1..=self.spec.step {
            term = self.spec.bracket(x, &term);
            fact *= rint(k as i64);
            let inv = fact.recip();
            for (o, t) in out.iter_mut().zip(&term) {
                *o = o.clone() + t.scale(&inv);
            }
        }
        out
    }

    /// `Ad_x y`.
    pub fn ad<T: Ring>(&self, x: &[T], y: &[T]) -> Vec<T> {
        self.exp_ad(x, y)
    }

    /// `Ad*_x 𝒰 = 𝒰 ∘ Ad_{x⁻¹}` in dual coordinates.
    pub fn ad_star<T: Ring>(&self, x: &[T], u: &[T]) -> Result<Vec<T>> {
        self.check(x)?;
        self.check(u)?;
        let mx = self.inverse(x);
        let n = self.spec.dim;
        Ok((0..n)
            .map(|k| {
                let col = self.exp_ad(&mx, &self.spec.basis_vector::<T>(k));
                col.into_iter().zip(u).fold(T::zero(), |a, (c, ui)| a + c * ui.clone())
            })
            .collect())
    }

    /// Polynomial coefficients `V_j(x)` of the left-invariant field `X_j = Σ_k V_j(x)_k ∂_k`.
    pub fn left_invariant_field(&self, j: usize) -> Vec<Poly<Rat>> {
        let n = self.spec.dim;
        let x: Vec<Poly<Rat>> = (0..n).map(|i| Poly::var(n, i)).collect();
        let mut term: Vec<Poly<Rat>> = (0..n).map(|i| Poly::constant(n, if i == j { rint(1) } else { rint(0) })).collect();
        let mut out = term.clone();
        for k in 1..=self.spec.step {
            term = self.spec.bracket(&x, &term);
            let b = bernoulli_over_factorial(k);
            if num_traits::Zero::is_zero(&b) {
                continue;
            }
            for (o, t) in out.iter_mut().zip(&term) {
                *o = &*o + &t.scale(&b);
            }
        }
        out
    }

    pub fn left_invariant_fields(&self) -> Vec<Vec<Poly<Rat>>> {
        (0..self.spec.dim).map(|j| self.left_invariant_field(j)).collect()
    }

    /// Right-invariant fields `d/dt f(exp(tE_j) x)`; used for convolution identities.
    pub fn right_invariant_field(&self, j: usize) -> Vec<Poly<Rat>> {
        let mut v = self.left_invariant_field(j);
        // ad_{-x} series: odd Bernoulli term flips sign.
        let n = self.spec.dim;
        let x: Vec<Poly<Rat>> = (0..n).map(|i| Poly::var(n, i)).collect();
        let e: Vec<Poly<Rat>> = (0..n).map(|i| Poly::constant(n, if i == j { rint(1) } else { rint(0) })).collect();
        let b1 = self.spec.bracket(&x, &e);
        for (o, t) in v.iter_mut().zip(&b1) {
            *o = &*o - t;
        }
        v
    }
}

/// Applies a vector field with polynomial coefficients to a polynomial.
pub fn apply_field(field: &[Poly<Rat>], p: &Poly<Rat>) -> Poly<Rat> {
    let mut out = Poly::zero(p.nvars());
    for (k, vk) in field.iter().enumerate() {
        if vk.is_zero() {
            continue;
        }
        let d = p.derivative(k);
        if !d.is_zero() {
            out = &out + &(vk * &d);
        }
    }
    out
}

/// Applies `X^β = X_0^{β_0} ⋯ X_{n-1}^{β_{n-1}}` (rightmost factor acts first).
pub fn apply_multi(fields: &[Vec<Poly<Rat>>], beta: &[u32], p: &Poly<Rat>) -> Poly<Rat> {
    let mut out = p.clone();
    for (j, &b) in beta.iter().enumerate().rev() {
        for _ in 0..b {
            out = apply_field(&fields[j], &out);
            if out.is_zero() {
                return out;
            }
        }
    }
    out
}
