//! Sparse multivariate polynomials over a [`Ring`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Rat, Ring};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq)]
pub struct Poly<T: Ring> {
    nvars: usize,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Ring> Poly<T> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, T::one())
    }

    pub fn monomial(nvars: usize, exps: Monomial, c: T) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, e: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Total degree where variable `i` carries weight `w[i]`; `None` for the zero polynomial.
    pub fn weighted_degree(&self, w: &[u32]) -> Option<u32> {
        self.terms.keys().map(|e| weighted(e, w)).max()
    }

    /// True when every monomial has weighted degree exactly `d`.
    pub fn is_homogeneous(&self, w: &[u32], d: u32) -> bool {
        self.terms.keys().all(|e| weighted(e, w) == d)
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let k = e[i];
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c.scale(&Rat::from_integer(k.into())));
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), c.clone() * v.clone());
        }
        out
    }

    pub fn eval<S: Ring>(&self, x: &[S], embed: impl Fn(&T) -> S) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut m = embed(c);
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    m = m * xi.clone();
                }
            }
            acc = acc + m;
        }
        acc
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&T) -> S) -> Poly<S> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, T::one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

pub fn weighted(e: &[u32], w: &[u32]) -> u32 {
    e.iter().zip(w).map(|(a, b)| a * b).sum()
}

impl Poly<Rat> {
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.eval(x, super::scalar::rat_to_f64)
    }
}

impl<T: Ring> Ring for Poly<T> {
    fn zero() -> Self {
        Poly::zero(0)
    }
    fn one() -> Self {
        Poly::constant(0, T::one())
    }
    fn from_rat(r: &Rat) -> Self {
        Poly::constant(0, T::from_rat(r))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

// Constants created through `Ring::zero`/`one` have no variables; they are
// widened to the other operand's variable count on first use.
fn widen<T: Ring>(p: &Poly<T>, n: usize) -> Poly<T> {
    if p.nvars == n {
        return p.clone();
    }
    assert!(p.terms.keys().all(|e| e.iter().all(|&k| k == 0)) || p.nvars == 0, "variable count mismatch");
    let mut out = Poly::zero(n);
    for c in p.terms.values() {
        out.add_term(vec![0; n], c.clone());
    }
    out
}

fn common<T: Ring>(a: &Poly<T>, b: &Poly<T>) -> usize {
    a.nvars.max(b.nvars)
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = common(self, rhs);
        let mut out = widen(self, n);
        for (e, c) in widen(rhs, n).terms {
            out.add_term(e, c);
        }
        out
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = common(self, rhs);
        let mut out = widen(self, n);
        for (e, c) in widen(rhs, n).terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        let n = common(self, rhs);
        let (a, b) = (widen(self, n), widen(rhs, n));
        let mut out = Poly::zero(n);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<T: Ring> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Ring> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Ring> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

impl<T: Ring> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Ring> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c:?}*x^{e:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Poly<Rat> {
    /// Human-readable form using the supplied variable names.
    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut mono = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => mono.push(names[i].clone()),
                    _ => mono.push(format!("{}^{}", names[i], k)),
                }
            }
            let cs = super::scalar::format_rat(c);
            parts.push(if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono.join("*")
            } else if cs == "-1" {
                format!("-{}", mono.join("*"))
            } else {
                format!("{}*{}", cs, mono.join("*"))
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::scalar::{rat, rint};

    fn x(i: usize) -> Poly<Rat> {
        Poly::var(3, i)
    }

    #[test]
    fn arithmetic_and_derivative() {
        let p = &(&x(0) * &x(1)) + &Poly::constant(3, rat(1, 2));
        let q = &p * &p;
        assert_eq!(q.coeff(&[2, 2, 0]), rint(1));
        assert_eq!(q.coeff(&[1, 1, 0]), rint(1));
        assert_eq!(q.coeff(&[0, 0, 0]), rat(1, 4));
        let d = q.derivative(0);
        assert_eq!(d.coeff(&[1, 2, 0]), rint(2));
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn weighted_degree_and_homogeneity() {
        let w = [1, 1, 2];
        let p = &x(2) - &(&x(0) * &x(1)).scale(&rat(1, 2));
        assert!(p.is_homogeneous(&w, 2));
        assert_eq!(p.weighted_degree(&w), Some(2));
        assert!(!(&p + &x(0)).is_homogeneous(&w, 2));
    }

    #[test]
    fn ring_constants_widen() {
        let z = <Poly<Rat> as Ring>::one();
        let p = &z + &x(1);
        assert_eq!(p.nvars(), 3);
        assert_eq!(p.coeff(&[0, 0, 0]), rint(1));
    }
}
