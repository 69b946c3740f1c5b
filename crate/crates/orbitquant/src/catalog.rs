//! Built-in groups with closed-form reference data.
//!
//! Identifiers: `heis1`, `g4delta:δ=<rational>` (also `g4delta:delta=…`),
//! `n5_1`, `n5_2`, `abelian:<n>`.

use crate::error::{Error, Result};
use crate::lie::{parse_rat, rat, rint, Group, LieAlgebraSpec, Poly, Rat};
use crate::lie::scalar::format_rat;
use crate::symclasses::RocklandSpec;

/// Closed forms used to cross-check the generic engines.
#[derive(Clone, Debug)]
pub struct Golden {
    /// `x • y` as polynomials in `(x_0..x_{n-1}, y_0..y_{n-1})`.
    pub bch: Option<Vec<Poly<Rat>>>,
    /// `Ad*_x 𝒰` as polynomials in `(x_0..x_{n-1}, 𝒰_0..𝒰_{n-1})`.
    pub ad_star: Option<Vec<Poly<Rat>>>,
    /// Pfaffian in the central dual coordinates, up to sign.
    pub pfaffian: Poly<Rat>,
    /// Plancherel density is `plancherel_constant · |Pf|`.
    pub plancherel_constant: Rat,
    pub rockland: Option<RocklandSpec>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub description: String,
    pub spec: LieAlgebraSpec,
    pub golden: Golden,
    /// Whether explicit irreducible representations are available.
    pub has_rep: bool,
}

impl CatalogEntry {
    pub fn group(&self) -> Result<Group> {
        Group::new(self.spec.clone())
    }
}

pub const LISTED_IDS: &[&str] = &["heis1", "g4delta:δ=0", "g4delta:δ=1", "n5_1", "n5_2", "abelian:3"];

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Variables `0..2n` of a polynomial ring with `2n` unknowns.
fn vars(n2: usize) -> Vec<Poly<Rat>> {
    (0..n2).map(|i| Poly::var(n2, i)).collect()
}

pub fn load(id: &str) -> Result<CatalogEntry> {
    let id = id.trim();
    let (head, arg) = match id.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (id, None),
    };
    match (head, arg) {
        ("heis1" | "heisenberg", None) => Ok(heisenberg()),
        ("g4delta", a) => {
            let delta = match a {
                None => rint(1),
                Some(a) => {
                    let v = a
                        .strip_prefix("δ=")
                        .or_else(|| a.strip_prefix("delta="))
                        .or_else(|| a.strip_prefix("d="))
                        .unwrap_or(a);
                    parse_rat(v).map_err(|_| Error::UnknownGroup(id.to_string()))?
                }
            };
            Ok(g4delta(delta))
        }
        ("n5_1", None) => Ok(n5_1()),
        ("n5_2", None) => Ok(n5_2()),
        ("abelian", Some(a)) => {
            let v = a.strip_prefix("n=").unwrap_or(a);
            let n: usize = v.parse().map_err(|_| Error::UnknownGroup(id.to_string()))?;
            if n == 0 {
                return Err(Error::UnknownGroup(id.to_string()));
            }
            Ok(abelian(n))
        }
        _ => Err(Error::UnknownGroup(id.to_string())),
    }
}

/// Loads a catalog id, or a group-definition file when `reference` names an existing path.
pub fn resolve(reference: &str) -> Result<LieAlgebraSpec> {
    let path = std::path::Path::new(reference);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let spec = LieAlgebraSpec::parse_toml(&text)?;
        spec.ensure_valid()?;
        return Ok(spec);
    }
    Ok(load(reference)?.spec)
}

pub fn heisenberg() -> CatalogEntry {
    let spec = LieAlgebraSpec::from_brackets(3, &[(0, 1, 2, rint(1))], vec![1, 1, 2], vec![2, 0, 1], labels(&["Q", "P", "S"]))
        .expect("heisenberg spec");
    let v = vars(6);
    let (q, p, s, q2, p2, s2) = (&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]);
    let sympl = &(q * p2) - &(q2 * p);
    let bch = vec![q + q2, p + p2, &(s + s2) + &sympl.scale(&rat(1, 2))];
    // Ad*_{(q,p,s)}(ρ,ϑ,ς) = (ρ + pς, ϑ − qς, ς).
    let (rho, th, sg) = (&v[3], &v[4], &v[5]);
    let ad = vec![rho + &(p * sg), th - &(q * sg), sg.clone()];
    CatalogEntry {
        id: "heis1".into(),
        description: "three-dimensional Heisenberg group, [Q,P] = S".into(),
        spec,
        golden: Golden {
            bch: Some(bch),
            ad_star: Some(ad),
            pfaffian: Poly::var(1, 0),
            plancherel_constant: rint(2),
            rockland: Some(RocklandSpec::new(vec![(rint(-1), 0, 2), (rint(-1), 1, 2)])),
        },
        has_rep: true,
    }
}

/// The four-dimensional group with `[Q,P] = S + δT`, coordinates `(q,p,s,t)`.
pub fn g4delta(delta: Rat) -> CatalogEntry {
    let spec = LieAlgebraSpec::from_brackets(
        4,
        &[(0, 1, 2, rint(1)), (0, 1, 3, delta.clone())],
        vec![1, 1, 2, 2],
        vec![2, 3, 0, 1],
        labels(&["Q", "P", "S", "T"]),
    )
    .expect("g4delta spec");
    let v = vars(8);
    let (q, p, s, t) = (&v[0], &v[1], &v[2], &v[3]);
    let (q2, p2, s2, t2) = (&v[4], &v[5], &v[6], &v[7]);
    let sympl = &(q * p2) - &(q2 * p);
    let bch = vec![
        q + q2,
        p + p2,
        &(s + s2) + &sympl.scale(&rat(1, 2)),
        &(t + t2) + &sympl.scale(&(delta.clone() * rat(1, 2))),
    ];
    let (rho, th, sg, ta) = (&v[4], &v[5], &v[6], &v[7]);
    let lam = sg + &ta.scale(&delta);
    let ad = vec![rho + &(p * &lam), th - &(q * &lam), sg.clone(), ta.clone()];
    let z = vars(2);
    let pf = &z[0] + &z[1].scale(&delta);
    CatalogEntry {
        id: format!("g4delta:δ={}", format_rat(&delta)),
        description: format!("four-dimensional two-step group, [Q,P] = S + {}·T", format_rat(&delta)),
        spec,
        golden: Golden {
            bch: Some(bch),
            ad_star: Some(ad),
            pfaffian: pf,
            plancherel_constant: rint(2),
            rockland: Some(RocklandSpec::new(vec![(rint(-1), 0, 2), (rint(-1), 1, 2)])),
        },
        has_rep: true,
    }
}

/// `[E4,E1] = [E3,E2] = E0`, `[E4,E3] = E1`.
pub fn n5_1() -> CatalogEntry {
    let spec = LieAlgebraSpec::from_brackets(
        5,
        &[(4, 1, 0, rint(1)), (3, 2, 0, rint(1)), (4, 3, 1, rint(1))],
        vec![3, 2, 2, 1, 1],
        vec![0, 1, 2, 3, 4],
        labels(&["E0", "E1", "E2", "E3", "E4"]),
    )
    .expect("n5_1 spec");
    let v = vars(10);
    let q: Vec<&Poly<Rat>> = v[..5].iter().collect();
    let p: Vec<&Poly<Rat>> = v[5..].iter().collect();
    let w43 = &(q[4] * p[3]) - &(q[3] * p[4]);
    let first = &(&(q[4] * p[1]) - &(q[1] * p[4])) + &(&(q[3] * p[2]) - &(q[2] * p[3]));
    let cubic = &(q[4] - p[4]) * &w43;
    let bch = vec![
        &(&(q[0] + p[0]) + &first.scale(&rat(1, 2))) + &cubic.scale(&rat(1, 12)),
        &(q[1] + p[1]) + &w43.scale(&rat(1, 2)),
        q[2] + p[2],
        q[3] + p[3],
        q[4] + p[4],
    ];
    // Ad*_q(ρ) = (ρ0, ρ1 − q4ρ0, ρ2 − q3ρ0, ρ3 + (q2 + q4²/2)ρ0 − q4ρ1, ρ4 + (q1 − q4q3/2)ρ0 + q3ρ1).
    let r: Vec<&Poly<Rat>> = v[5..].iter().collect();
    let ad = vec![
        r[0].clone(),
        r[1] - &(q[4] * r[0]),
        r[2] - &(q[3] * r[0]),
        &(r[3] + &(&(q[2] + &(q[4] * q[4]).scale(&rat(1, 2))) * r[0])) - &(q[4] * r[1]),
        &(r[4] + &(&(q[1] - &(q[4] * q[3]).scale(&rat(1, 2))) * r[0])) + &(q[3] * r[1]),
    ];
    let z = vars(1);
    CatalogEntry {
        id: "n5_1".into(),
        description: "five-dimensional three-step graded group, [E4,E1] = [E3,E2] = E0, [E4,E3] = E1".into(),
        spec,
        golden: Golden {
            bch: Some(bch),
            ad_star: Some(ad),
            pfaffian: &z[0] * &z[0],
            plancherel_constant: rint(8),
            rockland: Some(RocklandSpec::new(vec![(rint(-1), 2, 6), (rint(1), 3, 12), (rint(1), 4, 12)])),
        },
        has_rep: false,
    }
}

/// `[E4,E3] = E2`, `[E4,E2] = E1`, `[E4,E1] = [E3,E2] = E0`.
pub fn n5_2() -> CatalogEntry {
    let spec = LieAlgebraSpec::from_brackets(
        5,
        &[(4, 3, 2, rint(1)), (4, 2, 1, rint(1)), (4, 1, 0, rint(1)), (3, 2, 0, rint(1))],
        vec![5, 4, 3, 2, 1],
        vec![0, 1, 2, 3, 4],
        labels(&["E0", "E1", "E2", "E3", "E4"]),
    )
    .expect("n5_2 spec");
    let z = vars(1);
    CatalogEntry {
        id: "n5_2".into(),
        description: "five-dimensional four-step graded group, [E4,E3] = E2, [E4,E2] = E1, [E4,E1] = [E3,E2] = E0".into(),
        spec,
        golden: Golden {
            bch: None,
            ad_star: None,
            pfaffian: &z[0] * &z[0],
            plancherel_constant: rint(8),
            rockland: Some(RocklandSpec::new(vec![(rint(1), 4, 120), (rint(1), 3, 60)])),
        },
        has_rep: false,
    }
}

pub fn abelian(n: usize) -> CatalogEntry {
    let spec = LieAlgebraSpec::abelian(n);
    let v = vars(2 * n);
    let bch = (0..n).map(|i| &v[i] + &v[n + i]).collect();
    let ad = (0..n).map(|i| v[n + i].clone()).collect();
    CatalogEntry {
        id: format!("abelian:{n}"),
        description: format!("abelian group R^{n}"),
        spec,
        golden: Golden {
            bch: Some(bch),
            ad_star: Some(ad),
            pfaffian: Poly::constant(n, rint(1)),
            plancherel_constant: rint(1),
            rockland: Some(RocklandSpec::new((0..n).map(|i| (rint(-1), i, 2)).collect())),
        },
        has_rep: false,
    }
}
