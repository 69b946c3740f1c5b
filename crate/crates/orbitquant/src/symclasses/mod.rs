//! Symbol machinery on graded groups: homogeneous lengths, Taylor-adapted
//! polynomials, difference operators, Rockland operators and seminorms.

mod numeric;

pub use numeric::{
    gamma_diff, gamma_diff_exact, represented_t, represented_t_spectrum, seminorm_estimate, x_derivative, SeminormReport, SeminormSample,
    SeminormSpec,
};

use crate::error::{Error, Result};
use crate::lie::linalg::{rank, solve};
use crate::lie::poly::weighted;
use crate::lie::{apply_field, apply_multi, rint, Group, LieAlgebraSpec, Poly, Rat};

/// `|α| = Σ α_j`.
pub fn length(alpha: &[u32]) -> u32 {
    alpha.iter().sum()
}

/// Homogeneous length `[α] = Σ ν_j α_j`.
pub fn hom_length(alpha: &[u32], weights: &[u32]) -> u32 {
    weighted(alpha, weights)
}

/// All multi-indices `α` with `[α] = degree`, in lexicographic order.
pub fn multi_indices(weights: &[u32], degree: u32) -> Vec<Vec<u32>> {
    fn rec(w: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == w.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut k = 0;
        while k * w[i] <= left {
            cur.push(k);
            rec(w, i + 1, left - k * w[i], cur, out);
            cur.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    rec(weights, 0, degree, &mut Vec::new(), &mut out);
    out
}

/// `q_α` for every `α` with `1 ≤ [α] ≤ max_degree` (and `q_0 = 1`):
/// the homogeneous polynomial of degree `[α]` with `(X^β q_α)(0) = δ_{αβ}` for `[β] = [α]`.
pub fn taylor_polynomials(group: &Group, max_degree: u32) -> Result<Vec<(Vec<u32>, Poly<Rat>)>> {
    let spec = &group.spec;
    let n = spec.dim;
    if spec.weights.iter().any(|&w| w == 0) {
        return Err(Error::InvalidAlgebra("weights must be positive".into()));
    }
    let fields = group.left_invariant_fields();
    let mut out = vec![(vec![0; n], Poly::constant(n, rint(1)))];
    for deg in 1..=max_degree {
        let monos = multi_indices(&spec.weights, deg);
        let betas = monos.clone();
        // matrix[b][m] = (X^β x^m)(0)
        let mut mat = vec![vec![rint(0); monos.len()]; betas.len()];
        for (mi, m) in monos.iter().enumerate() {
            let p = Poly::monomial(n, m.clone(), rint(1));
            for (bi, b) in betas.iter().enumerate() {
                let v = apply_multi(&fields, b, &p);
                mat[bi][mi] = v.coeff(&vec![0; n]);
            }
        }
        if rank(&mat, monos.len()) != monos.len() {
            return Err(Error::InvalidAlgebra(format!("Taylor system of degree {deg} is singular")));
        }
        for (ai, alpha) in betas.iter().enumerate() {
            let rhs: Vec<Rat> = (0..betas.len()).map(|b| if b == ai { rint(1) } else { rint(0) }).collect();
            let coeffs = solve(&mat, &rhs).expect("nonsingular");
            let mut q = Poly::zero(n);
            for (m, c) in monos.iter().zip(coeffs) {
                q = &q + &Poly::monomial(n, m.clone(), c);
            }
            out.push((alpha.clone(), q));
        }
    }
    Ok(out)
}

/// `q̃(x) = q(x⁻¹) = q(−x)` in exponential coordinates.
pub fn q_tilde(q: &Poly<Rat>) -> Poly<Rat> {
    let n = q.nvars();
    let mut out = Poly::zero(n);
    for (e, c) in q.terms() {
        let deg: u32 = e.iter().sum();
        let s = if deg % 2 == 0 { c.clone() } else { -c.clone() };
        out = &out + &Poly::monomial(n, e.clone(), s);
    }
    out
}

/// `𝓡 = Σ c_k Z_{j_k}^{p_k}` as a combination of powers of left-invariant basis fields.
#[derive(Clone, Debug, PartialEq)]
pub struct RocklandSpec {
    /// `(coefficient, basis index, power)`.
    pub terms: Vec<(Rat, usize, u32)>,
}

impl RocklandSpec {
    pub fn new(terms: Vec<(Rat, usize, u32)>) -> Self {
        RocklandSpec { terms }
    }

    /// Homogeneity order `ν`, when all terms share it.
    pub fn order(&self, weights: &[u32]) -> Option<u32> {
        let mut it = self.terms.iter().map(|(_, j, p)| weights[*j] * p);
        let first = it.next()?;
        it.all(|o| o == first).then_some(first)
    }

    pub fn apply(&self, group: &Group, f: &Poly<Rat>) -> Poly<Rat> {
        let fields = group.left_invariant_fields();
        self.apply_with(&fields, f)
    }

    pub fn apply_with(&self, fields: &[Vec<Poly<Rat>>], f: &Poly<Rat>) -> Poly<Rat> {
        let mut out = Poly::zero(f.nvars());
        for (c, j, p) in &self.terms {
            let mut g = f.clone();
            for _ in 0..*p {
                if g.is_zero() {
                    break;
                }
                g = apply_field(&fields[*j], &g);
            }
            out = &out + &g.scale(c);
        }
        out
    }

    pub fn display(&self, labels: &[String]) -> String {
        let mut s = String::new();
        for (k, (c, j, p)) in self.terms.iter().enumerate() {
            let neg = c < &rint(0);
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let a = if neg { -c.clone() } else { c.clone() };
            if a != rint(1) {
                s.push_str(&format!("{}*", crate::lie::scalar::format_rat(&a)));
            }
            s.push_str(&format!("{}^{}", labels[*j], p));
        }
        s
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// True when the listed basis vectors generate `𝔤` as a Lie algebra.
pub fn generates(spec: &LieAlgebraSpec, gens: &[usize]) -> bool {
    let n = spec.dim;
    let mut span: Vec<Vec<Rat>> = gens.iter().map(|&g| spec.basis_vector(g)).collect();
    let mut frontier = span.clone();
    for _ in 0..=spec.step {
        let mut next = Vec::new();
        for v in &frontier {
            for &g in gens {
                let b = spec.bracket(&spec.basis_vector::<Rat>(g), v);
                let r = rank(&span, n);
                span.push(b.clone());
                if rank(&span, n) > r {
                    next.push(b);
                } else {
                    span.pop();
                }
            }
        }
        frontier = next;
    }
    rank(&span, n) == n
}

/// Rockland operator from generating basis indices: the negative sub-Laplacian when every
/// generator has weight one, otherwise `Σ (−1)^{p/ν_j} Z_j^{2p/ν_j}` with `p` the least common
/// multiple of the dilation weights.
pub fn rockland_build(spec: &LieAlgebraSpec, generators: &[usize]) -> Result<RocklandSpec> {
    if generators.iter().any(|&g| g >= spec.dim) {
        return Err(Error::InvalidAlgebra("generator index out of range".into()));
    }
    if !generates(spec, generators) {
        return Err(Error::InvalidAlgebra(format!("indices {generators:?} do not generate the Lie algebra")));
    }
    if generators.iter().all(|&g| spec.weights[g] == 1) {
        return Ok(RocklandSpec::new(generators.iter().map(|&g| (rint(-1), g, 2)).collect()));
    }
    let p = spec.weights.iter().fold(1, |a, &w| a / gcd(a, w) * w);
    let terms = generators
        .iter()
        .map(|&g| {
            let k = p / spec.weights[g];
            (if k % 2 == 0 { rint(1) } else { rint(-1) }, g, 2 * k)
        })
        .collect();
    Ok(RocklandSpec::new(terms))
}

/// `f ∘ 𝔡𝔦𝔩_r` for a polynomial.
pub fn dilate_poly(f: &Poly<Rat>, weights: &[u32], r: &Rat) -> Poly<Rat> {
    let n = f.nvars();
    let mut out = Poly::zero(n);
    for (e, c) in f.terms() {
        let k = weighted(e, weights);
        out = &out + &Poly::monomial(n, e.clone(), c * crate::lie::scalar::rat_pow(r, k as i32));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum HomogeneityVerdict {
    Pass { checked: usize },
    Fail { witness: Vec<u32> },
}

/// Verifies `(𝓡(f∘𝔡𝔦𝔩_r))∘𝔡𝔦𝔩_{1/r} = r^ν 𝓡f` on the given monomials.
pub fn homogeneity_check_on(
    group: &Group,
    op: &RocklandSpec,
    nu: u32,
    r: &Rat,
    monomials: &[Vec<u32>],
) -> HomogeneityVerdict {
    let fields = group.left_invariant_fields();
    let w = &group.spec.weights;
    let n = group.spec.dim;
    let rinv = r.recip();
    let rnu = crate::lie::scalar::rat_pow(r, nu as i32);
    for m in monomials {
        let f = Poly::monomial(n, m.clone(), rint(1));
        // f ∘ 𝔡𝔦𝔩_r = r^{[m]} f for a monomial, so 𝓡 is applied once.
        let rf = op.apply_with(&fields, &f);
        let scale = crate::lie::scalar::rat_pow(r, weighted(m, w) as i32);
        let lhs = dilate_poly(&rf.scale(&scale), w, &rinv);
        let rhs = rf.scale(&rnu);
        if lhs != rhs {
            return HomogeneityVerdict::Fail { witness: m.clone() };
        }
    }
    HomogeneityVerdict::Pass { checked: monomials.len() }
}

/// Homogeneity on every monomial of homogeneous degree `≤ ν + 2·step`.
pub fn homogeneity_check(group: &Group, op: &RocklandSpec, nu: u32, r: &Rat) -> HomogeneityVerdict {
    let top = nu + 2 * group.spec.step as u32;
    let monos: Vec<Vec<u32>> = (0..=top).flat_map(|d| multi_indices(&group.spec.weights, d)).collect();
    homogeneity_check_on(group, op, nu, r, &monos)
}

/// Monomials of homogeneous degree in `[ν, ν + 2]` built from at most two distinct
/// variables, the first of which carries most of the degree. Used where exhaustive
/// enumeration is out of reach.
pub fn sparse_monomials(weights: &[u32], nu: u32) -> Vec<Vec<u32>> {
    let n = weights.len();
    let mut out = Vec::new();
    for deg in nu..=nu + 2 {
        for a in 0..n {
            for b in 0..n {
                for kb in 0..=2u32 {
                    if a == b && kb > 0 {
                        continue;
                    }
                    let used = kb * weights[b];
                    if used > deg || (deg - used) % weights[a] != 0 {
                        continue;
                    }
                    let mut e = vec![0; n];
                    e[a] = (deg - used) / weights[a];
                    e[b] += kb;
                    if !out.contains(&e) {
                        out.push(e);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::lie::rat;

    #[test]
    fn multi_indices_count() {
        assert_eq!(multi_indices(&[1, 1, 2], 2).len(), 4);
        for a in multi_indices(&[3, 2, 2, 1, 1], 5) {
            assert!(hom_length(&a, &[3, 2, 2, 1, 1]) >= length(&a));
        }
    }

    #[test]
    fn abelian_taylor_is_monomial_over_factorial() {
        let g = catalog::abelian(2).group().unwrap();
        let qs = taylor_polynomials(&g, 3).unwrap();
        let (_, q) = qs.iter().find(|(a, _)| a == &vec![2, 1]).unwrap();
        assert_eq!(*q, Poly::monomial(2, vec![2, 1], rat(1, 2)));
    }

    #[test]
    fn rockland_from_generators_matches_catalog() {
        for (id, gens) in [("heis1", vec![0, 1]), ("n5_1", vec![2, 3, 4]), ("n5_2", vec![4, 3])] {
            let e = catalog::load(id).unwrap();
            let r = rockland_build(&e.spec, &gens).unwrap();
            assert_eq!(Some(r), e.golden.rockland, "{id}");
        }
        let e = catalog::load("n5_1").unwrap();
        assert!(rockland_build(&e.spec, &[3]).is_err());
        // Q and P only reach S + δT, so the declared pair does not generate.
        let g4 = catalog::load("g4delta:δ=1").unwrap();
        assert!(rockland_build(&g4.spec, &[0, 1]).is_err());
    }

    #[test]
    fn wrong_order_fails_with_witness() {
        let g = catalog::load("g4delta:δ=1").unwrap().group().unwrap();
        let op = RocklandSpec::new(vec![(rint(-1), 0, 2), (rint(-1), 1, 2)]);
        assert!(matches!(homogeneity_check(&g, &op, 2, &rint(2)), HomogeneityVerdict::Pass { .. }));
        assert!(matches!(homogeneity_check(&g, &op, 3, &rint(2)), HomogeneityVerdict::Fail { .. }));
    }
}
