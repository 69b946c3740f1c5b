//! Structure constants, brackets and validation.

use serde::{Deserialize, Serialize};

use super::linalg::{nullspace, rank};
use super::scalar::{format_rat, parse_rat, rat_pow, Rat, Ring};
use crate::error::{Error, Result};

/// A finite-dimensional nilpotent Lie algebra in a fixed basis `E_0 .. E_{n-1}`.
///
/// `[E_i, E_j] = Σ_k c[i][j][k] E_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraSpec {
    pub dim: usize,
    pub step: usize,
    pub c: Vec<Vec<Vec<Rat>>>,
    /// Dilation weights, `δ_r E_j = r^{w_j} E_j`.
    pub weights: Vec<u32>,
    /// Basis indices listed in Jordan-Hölder order (center first).
    pub jh_order: Vec<usize>,
    pub labels: Vec<String>,
}

/// Structural defect found by [`LieAlgebraSpec::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Defect {
    Antisymmetry { i: usize, j: usize, k: usize },
    Jacobi { i: usize, j: usize, k: usize, component: usize },
    NotNilpotent,
    StepMismatch { declared: usize, actual: usize },
    Weights { i: usize, j: usize, k: usize },
    JordanHolder { position: usize },
    Shape(String),
}

impl std::fmt::Display for Defect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Defect::Antisymmetry { i, j, k } => write!(f, "antisymmetry violated at ({i},{j},{k})"),
            Defect::Jacobi { i, j, k, component } => {
                write!(f, "Jacobi identity violated for ({i},{j},{k}) in component {component}")
            }
            Defect::NotNilpotent => write!(f, "algebra is not nilpotent"),
            Defect::StepMismatch { declared, actual } => {
                write!(f, "declared step {declared} but lower central series has length {actual}")
            }
            Defect::Weights { i, j, k } => {
                write!(f, "bracket [E{i},E{j}] has component on E{k} incompatible with the weights")
            }
            Defect::JordanHolder { position } => {
                write!(f, "jh_order is not a Jordan-Hölder sequence at position {position}")
            }
            Defect::Shape(s) => write!(f, "{s}"),
        }
    }
}

impl LieAlgebraSpec {
    /// Builds a spec from the upper-triangular list `(i, j, k, c)` meaning `c_{ij}^k = c`,
    /// filling `c_{ji}^k = -c` where the transposed entry is not listed.
    pub fn from_brackets(
        dim: usize,
        brackets: &[(usize, usize, usize, Rat)],
        weights: Vec<u32>,
        jh_order: Vec<usize>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let mut c = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        let mut listed = vec![vec![false; dim]; dim];
        for (i, j, k, _) in brackets {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::InvalidAlgebra(format!("bracket index ({i},{j},{k}) out of range for dim {dim}")));
            }
            listed[*i][*j] = true;
        }
        for (i, j, k, v) in brackets {
            c[*i][*j][*k] = c[*i][*j][*k].clone() + v.clone();
            if !listed[*j][*i] {
                c[*j][*i][*k] = c[*j][*i][*k].clone() - v.clone();
            }
        }
        let mut spec = LieAlgebraSpec { dim, step: 0, c, weights, jh_order, labels };
        spec.step = spec.lower_central_length().unwrap_or(0);
        Ok(spec)
    }

    pub fn abelian(n: usize) -> Self {
        LieAlgebraSpec {
            dim: n,
            step: 1,
            c: vec![vec![vec![Rat::zero(); n]; n]; n],
            weights: vec![1; n],
            jh_order: (0..n).collect(),
            labels: (0..n).map(|i| format!("X{i}")).collect(),
        }
    }

    /// `[x, y]` for coordinate vectors over any coefficient ring.
    pub fn bracket<T: Ring>(&self, x: &[T], y: &[T]) -> Vec<T> {
        let n = self.dim;
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let xy = x[i].clone() * y[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let ck = &self.c[i][j][k];
                    if !num_traits::Zero::is_zero(ck) {
                        *o = o.clone() + xy.scale(ck);
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector<T: Ring>(&self, i: usize) -> Vec<T> {
        let mut v = vec![T::zero(); self.dim];
        v[i] = T::one();
        v
    }

    /// Matrix of `ad_X` acting on coordinate column vectors: `(ad_X)[k][j] = ([X, E_j])_k`.
    pub fn ad_matrix<T: Ring>(&self, x: &[T]) -> Vec<Vec<T>> {
        let n = self.dim;
        let mut m = vec![vec![T::zero(); n]; n];
        for j in 0..n {
            let col = self.bracket(x, &self.basis_vector::<T>(j));
            for k in 0..n {
                m[k][j] = col[k].clone();
            }
        }
        m
    }

    /// Exact basis of the center.
    pub fn center_basis(&self) -> Vec<Vec<Rat>> {
        // X central iff Σ_i x_i c[i][j][k] = 0 for all j, k.
        let n = self.dim;
        let mut rows = Vec::new();
        for j in 0..n {
            for k in 0..n {
                rows.push((0..n).map(|i| self.c[i][j][k].clone()).collect::<Vec<_>>());
            }
        }
        nullspace(&rows, n)
    }

    /// Indices `i` with `E_i` central, when the center is spanned by basis vectors.
    pub fn central_indices(&self) -> Result<Vec<usize>> {
        let basis = self.center_basis();
        let idx: Vec<usize> = (0..self.dim)
            .filter(|&i| (0..self.dim).all(|j| (0..self.dim).all(|k| num_traits::Zero::is_zero(&self.c[i][j][k]))))
            .collect();
        if idx.len() != basis.len() {
            return Err(Error::InvalidAlgebra(
                "center is not spanned by basis vectors; use an adapted basis".into(),
            ));
        }
        Ok(idx)
    }

    /// Length of the lower central series, or `None` when it does not terminate.
    fn lower_central_length(&self) -> Option<usize> {
        let n = self.dim;
        let mut current: Vec<Vec<Rat>> = (0..n).map(|i| self.basis_vector(i)).collect();
        for s in 1..=n + 1 {
            if rank(&current, n) == 0 {
                return Some(s - 1);
            }
            let mut next = Vec::new();
            for v in &current {
                for j in 0..n {
                    let b = self.bracket(v, &self.basis_vector::<Rat>(j));
                    if b.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                        next.push(b);
                    }
                }
            }
            current = independent_rows(next, n);
        }
        None
    }

    /// Structural checks; every defect found is reported.
    pub fn validate(&self) -> Vec<Defect> {
        let n = self.dim;
        let mut out = Vec::new();
        if self.c.len() != n || self.c.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            out.push(Defect::Shape(format!("structure constants are not {n}x{n}x{n}")));
            return out;
        }
        if self.weights.len() != n || self.labels.len() != n {
            out.push(Defect::Shape("weights and labels must have one entry per basis vector".into()));
        }
        let mut seen = vec![false; n];
        let perm_ok = self.jh_order.len() == n && self.jh_order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true));
        if !perm_ok {
            out.push(Defect::Shape("jh_order must be a permutation of 0..dim".into()));
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c[i][j][k] != -self.c[j][i][k].clone() && i <= j {
                        out.push(Defect::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (ei, ej, ek) =
                        (self.basis_vector::<Rat>(i), self.basis_vector::<Rat>(j), self.basis_vector::<Rat>(k));
                    let a = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let b = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let c = self.bracket(&ek, &self.bracket(&ei, &ej));
                    for m in 0..n {
                        let s = a[m].clone() + b[m].clone() + c[m].clone();
                        if !num_traits::Zero::is_zero(&s) {
                            out.push(Defect::Jacobi { i, j, k, component: m });
                            break;
                        }
                    }
                }
            }
        }
        match self.lower_central_length() {
            None => out.push(Defect::NotNilpotent),
            Some(actual) => {
                if actual != self.step && !(n == 0 && self.step == 0) {
                    out.push(Defect::StepMismatch { declared: self.step, actual });
                }
            }
        }
        if self.weights.len() == n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        if !num_traits::Zero::is_zero(&self.c[i][j][k])
                            && self.weights[i] + self.weights[j] != self.weights[k]
                            && i < j
                        {
                            out.push(Defect::Weights { i, j, k });
                        }
                    }
                }
            }
        }
        if perm_ok {
            // Each prefix of the JH order must span an ideal.
            for p in 1..=n {
                let span: Vec<usize> = self.jh_order[..p].to_vec();
                let ideal = span.iter().all(|&a| {
                    (0..n).all(|b| (0..n).all(|k| span.contains(&k) || num_traits::Zero::is_zero(&self.c[a][b][k])))
                });
                if !ideal {
                    out.push(Defect::JordanHolder { position: p - 1 });
                    break;
                }
            }
        }
        out
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let d = self.validate();
        if d.is_empty() {
            Ok(())
        } else {
            let msg: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            Err(Error::InvalidAlgebra(msg.join("; ")))
        }
    }

    /// Anisotropic dilation `δ_r` on coordinates.
    pub fn dilate<T: Ring>(&self, r: &Rat, x: &[T]) -> Vec<T> {
        x.iter()
            .zip(&self.weights)
            .map(|(xi, &w)| xi.scale(&rat_pow(r, w as i32)))
            .collect()
    }

    pub fn dilate_f64(&self, r: f64, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.weights).map(|(xi, &w)| xi * r.powi(w as i32)).collect()
    }

    /// Homogeneous dimension `Σ w_j`.
    pub fn homogeneous_dimension(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn to_file(&self) -> GroupFile {
        let mut brackets = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in 0..self.dim {
                    if !num_traits::Zero::is_zero(&self.c[i][j][k]) {
                        brackets.push((i, j, k, format_rat(&self.c[i][j][k])));
                    }
                }
            }
        }
        GroupFile {
            dim: self.dim,
            step: self.step,
            brackets,
            weights: self.weights.clone(),
            jh_order: self.jh_order.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_file(f: &GroupFile) -> Result<Self> {
        let mut br = Vec::new();
        for (i, j, k, s) in &f.brackets {
            br.push((*i, *j, *k, parse_rat(s)?));
        }
        let mut spec = Self::from_brackets(f.dim, &br, f.weights.clone(), f.jh_order.clone(), f.labels.clone())?;
        spec.step = f.step;
        Ok(spec)
    }

    pub fn parse_toml(text: &str) -> Result<Self> {
        let f: GroupFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&f)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_file()).expect("group file serializes")
    }
}

/// On-disk group definition. Bracket constants are rational literals such as `"-3/2"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupFile {
    pub dim: usize,
    pub step: usize,
    pub brackets: Vec<(usize, usize, usize, String)>,
    pub weights: Vec<u32>,
    pub jh_order: Vec<usize>,
    pub labels: Vec<String>,
}

fn independent_rows(rows: Vec<Vec<Rat>>, n: usize) -> Vec<Vec<Rat>> {
    let mut kept: Vec<Vec<Rat>> = Vec::new();
    let mut r = 0;
    for v in rows {
        kept.push(v);
        let nr = rank(&kept, n);
        if nr == r {
            kept.pop();
        } else {
            r = nr;
        }
    }
    kept
}
