//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits non-zero on failure.
//!
//! `cargo test --test acceptance -- 3 6` runs only the listed criteria.

use std::f64::consts::PI;
use std::time::Instant;

use orbitquant::catalog;
use orbitquant::lie::scalar::rat_abs;
use orbitquant::lie::{apply_multi, Defect, rat, rint, Group, LieAlgebraSpec, Poly, Rat};
use orbitquant::orbits::FlatStructure;
use orbitquant::quantize::ops::op_group_kernel;
use orbitquant::quantize::{
    group_fourier, group_fourier_at, inverse_group_fourier, inverse_group_fourier_grid, pedersen_quantize, trace,
    w_transform, weyl_lambda, Axis, GaussPoly, GridFunction, GridND, OperatorSymbol, SectionOptions, SeparableField,
};
use orbitquant::repcalc::{hs_norm, max_abs, GridOperator, RepChart, RepGrid, RepModel};
use orbitquant::spectral::{c, cis, C64};
use orbitquant::symclasses::{
    homogeneity_check, homogeneity_check_on, hom_length, multi_indices, represented_t_spectrum, sparse_monomials,
    taylor_polynomials, HomogeneityVerdict, RocklandSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

// ---------------------------------------------------------------------------------------------
// Closed-form oracles, written independently of the library.

/// `∫ e^{-iky} e^{-(y-m)²/(2s²)} dy`.
fn gauss_ft(m: f64, s: f64, k: f64) -> C64 {
    cis(-k * m) * (s * (2.0 * PI).sqrt() * (-s * s * k * k / 2.0).exp())
}

/// `(2π)^{-1} ∫ e^{ixy} e^{-(y-m)²/(2s²)} dy`.
fn gauss_ift(m: f64, s: f64, x: f64) -> C64 {
    cis(x * m) * (s / (2.0 * PI).sqrt() * (-s * s * x * x / 2.0).exp())
}

fn gauss(m: f64, s: f64, y: f64) -> f64 {
    (-(y - m) * (y - m) / (2.0 * s * s)).exp()
}

/// `∫ y^k e^{-(y-m)²/(2s²)} dy` from the moments of a normal law.
fn gauss_moment(m: f64, s: f64, k: u32) -> f64 {
    let mut z = vec![1.0, 0.0];
    for j in 2..=k as usize {
        z.push((j - 1) as f64 * z[j - 2]);
    }
    let mut acc = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        acc += binom * m.powi((k - j) as i32) * s.powi(j as i32) * z[j as usize];
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    acc * s * (2.0 * PI).sqrt()
}

/// A product Gaussian with its closed-form transforms.
#[derive(Clone)]
struct Gauss4 {
    m: [f64; 4],
    s: [f64; 4],
}

impl Gauss4 {
    fn value(&self, y: &[f64]) -> f64 {
        (0..4).map(|i| gauss(self.m[i], self.s[i], y[i])).product()
    }

    fn ft(&self, k: &[f64]) -> C64 {
        (0..4).map(|i| gauss_ft(self.m[i], self.s[i], k[i])).product()
    }

    fn ift(&self, x: &[f64]) -> C64 {
        (0..4).map(|i| gauss_ift(self.m[i], self.s[i], x[i])).product()
    }

    fn lib(&self) -> GaussPoly {
        GaussPoly::gaussian(self.m.to_vec(), self.s.to_vec()).unwrap()
    }
}

fn grid4(axes: [(f64, f64, usize); 4]) -> GridND {
    GridND::new(axes.iter().map(|&(a, s, n)| Axis::new(a, s, n).unwrap()).collect()).unwrap()
}

fn rel_max_diff(a: &GridOperator, b: &GridOperator) -> f64 {
    max_abs(&(a - b)) / max_abs(b)
}

fn g4(delta: &str) -> (Group, RepModel) {
    let e = catalog::load(&format!("g4delta:δ={delta}")).unwrap();
    let model = RepModel::new(&e.spec).unwrap();
    (e.group().unwrap(), model)
}

// ---------------------------------------------------------------------------------------------
// 1. Exact algebra.

fn vars(n: usize) -> Vec<Poly<Rat>> {
    (0..n).map(|i| Poly::var(n, i)).collect()
}

/// `x • y` on the four-dimensional two-step group `[Q,P] = S + δT`.
fn bch_g4(delta: &Rat, v: &[Poly<Rat>]) -> Vec<Poly<Rat>> {
    let (q, p, s, t) = (&v[0], &v[1], &v[2], &v[3]);
    let (q2, p2, s2, t2) = (&v[4], &v[5], &v[6], &v[7]);
    let w = &(q * p2) - &(p * q2);
    vec![q + q2, p + p2, &(s + s2) + &w.scale(&rat(1, 2)), &(t + t2) + &w.scale(&(delta * &rat(1, 2)))]
}

fn bch_n5_1(v: &[Poly<Rat>]) -> Vec<Poly<Rat>> {
    let q = &v[..5];
    let p = &v[5..];
    let a = &(&q[4] * &p[1]) - &(&q[1] * &p[4]);
    let b = &(&q[3] * &p[2]) - &(&q[2] * &p[3]);
    let w = &(&q[4] * &p[3]) - &(&q[3] * &p[4]);
    let cubic = &(&q[4] - &p[4]) * &w;
    vec![
        &(&(&q[0] + &p[0]) + &(&a + &b).scale(&rat(1, 2))) + &cubic.scale(&rat(1, 12)),
        &(&q[1] + &p[1]) + &w.scale(&rat(1, 2)),
        &q[2] + &p[2],
        &q[3] + &p[3],
        &q[4] + &p[4],
    ]
}

fn ad_star_g4(delta: &Rat, v: &[Poly<Rat>]) -> Vec<Poly<Rat>> {
    let (q, p) = (&v[0], &v[1]);
    let (rho, th, sg, ta) = (&v[4], &v[5], &v[6], &v[7]);
    let lam = sg + &ta.scale(delta);
    vec![rho + &(p * &lam), th - &(q * &lam), sg.clone(), ta.clone()]
}

/// Coadjoint action on `n5_1`. With `quad = (1/2, -1/2)` this is the action; the variant
/// `(-1/4, 1/4)` is checked below to violate `Ad*_x Ad*_y = Ad*_{x•y}`.
fn ad_star_n5_1_with(v: &[Poly<Rat>], quad: (Rat, Rat)) -> Vec<Poly<Rat>> {
    let q = &v[..5];
    let r = &v[5..];
    vec![
        r[0].clone(),
        &r[1] - &(&q[4] * &r[0]),
        &r[2] - &(&q[3] * &r[0]),
        &(&r[3] + &(&(&q[2] + &(&q[4] * &q[4]).scale(&quad.0)) * &r[0])) - &(&q[4] * &r[1]),
        &(&r[4] + &(&(&q[1] + &(&q[4] * &q[3]).scale(&quad.1)) * &r[0])) + &(&q[3] * &r[1]),
    ]
}

/// `Ad*_x Ad*_y ρ == Ad*_{x•y} ρ` as polynomials in `(x, y, ρ)`.
fn is_action(group: &Group, quad: (Rat, Rat)) -> bool {
    let v = vars(15);
    let (x, rest) = v.split_at(5);
    let (y, rho) = rest.split_at(5);
    let act = |a: &[Poly<Rat>], u: &[Poly<Rat>]| {
        let mut args: Vec<Poly<Rat>> = a.to_vec();
        args.extend_from_slice(u);
        let shape = ad_star_n5_1_with(&vars(10), quad.clone());
        shape.iter().map(|p| p.eval(&args, |c| Poly::constant(15, c.clone()))).collect::<Vec<_>>()
    };
    let lhs = act(x, &act(y, rho));
    let rhs = act(&group.mul(x, y), rho);
    lhs == rhs
}

fn split_args(v: &[Poly<Rat>], n: usize) -> (Vec<Poly<Rat>>, Vec<Poly<Rat>>) {
    (v[..n].to_vec(), v[n..].to_vec())
}

fn criterion_1() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0usize;
    let mut expect = |ok: bool, what: String| {
        checks += 1;
        if !ok {
            failures.push(what);
        }
    };

    for id in catalog::LISTED_IDS {
        let spec = catalog::load(id).unwrap().spec;
        expect(spec.validate().is_empty(), format!("Jacobi/structure on {id}"));
    }
    // [A,B] = C, [B,C] = D, [A,D] = E: the Jacobi sum on (A, B, C) is E.
    let broken = LieAlgebraSpec::from_brackets(
        5,
        &[(0, 1, 2, rint(1)), (1, 2, 3, rint(1)), (0, 3, 4, rint(1))],
        vec![1, 1, 2, 3, 4],
        vec![4, 3, 2, 1, 0],
        ["A", "B", "C", "D", "E"].iter().map(|s| s.to_string()).collect(),
    )
    .unwrap();
    let jacobi_flagged = broken.validate().iter().any(|d| matches!(d, Defect::Jacobi { .. }));
    expect(jacobi_flagged, "Jacobi violation not flagged".into());

    let deltas = [rint(0), rint(1), rat(3, 7), rint(-2)];
    for delta in &deltas {
        let e = catalog::g4delta(delta.clone());
        let g = e.group().unwrap();
        let v = vars(8);
        let (x, y) = split_args(&v, 4);
        expect(g.bch(&x, &y).unwrap() == bch_g4(delta, &v), format!("BCH on g4delta δ={delta}"));
        expect(g.mul(&x, &y) == bch_g4(delta, &v), format!("group law on g4delta δ={delta}"));
        expect(g.ad_star(&x, &y).unwrap() == ad_star_g4(delta, &v), format!("Ad* on g4delta δ={delta}"));
        let flat = FlatStructure::new(&e.spec).unwrap();
        let z = vars(2);
        let pf = &z[0] + &z[1].scale(delta);
        expect(flat.pf == pf || flat.pf == pf.scale(&rint(-1)), format!("Pf on g4delta δ={delta}"));
        for (s, t) in [(rint(1), rint(1)), (rat(-3, 2), rat(5, 4)), (rint(7), rint(0))] {
            let d = rint(2) * rat_abs(&(s.clone() + delta.clone() * t.clone()));
            let d_lib = rint(2i64.pow(flat.d() as u32)) * rat_abs(&flat.pf_exact(&[s.clone(), t.clone()]));
            expect(d == d_lib, format!("Plancherel density on g4delta δ={delta} at ({s},{t})"));
        }
    }
    let heis = catalog::heisenberg();
    {
        let g = heis.group().unwrap();
        let v = vars(6);
        let (x, y) = split_args(&v, 3);
        let w = &(&v[0] * &v[4]) - &(&v[1] * &v[3]);
        let want = vec![&v[0] + &v[3], &v[1] + &v[4], &(&v[2] + &v[5]) + &w.scale(&rat(1, 2))];
        expect(g.bch(&x, &y).unwrap() == want, "BCH on heis1".into());
    }

    let n51 = catalog::n5_1();
    {
        let g = n51.group().unwrap();
        let v = vars(10);
        let (x, y) = split_args(&v, 5);
        expect(g.bch(&x, &y).unwrap() == bch_n5_1(&v), "BCH on n5_1".into());
        let action = (rat(1, 2), rat(-1, 2));
        expect(g.ad_star(&x, &y).unwrap() == ad_star_n5_1_with(&v, action.clone()), "Ad* on n5_1".into());
        expect(is_action(&g, action), "closed-form Ad* on n5_1 is an action".into());
        expect(!is_action(&g, (rat(-1, 4), rat(1, 4))), "quarter-coefficient variant rejected".into());
    }
    for e in [catalog::n5_1(), catalog::n5_2()] {
        let flat = FlatStructure::new(&e.spec).unwrap();
        let z = vars(1);
        let rho4 = z[0].pow(4);
        expect(flat.pf.pow(2) == rho4, format!("Pf² on {}", e.id));
        for r0 in [rint(1), rat(-2, 3), rint(5)] {
            let d_lib = rint(2i64.pow(flat.d() as u32) * (1..=flat.d() as i64).product::<i64>())
                * rat_abs(&flat.pf_exact(&[r0.clone()]));
            let want = rint(8) * r0.clone() * r0.clone();
            expect(d_lib == want, format!("Plancherel density on {} at {r0}", e.id));
        }
    }

    // Rockland homogeneity.
    let two = rint(2);
    let sub_lap = RocklandSpec::new(vec![(rint(-1), 0, 2), (rint(-1), 1, 2)]);
    for e in [catalog::heisenberg(), catalog::g4delta(rint(1)), catalog::g4delta(rint(0))] {
        let g = e.group().unwrap();
        let ok = matches!(homogeneity_check(&g, &sub_lap, 2, &two), HomogeneityVerdict::Pass { .. });
        let off = matches!(homogeneity_check(&g, &sub_lap, 1, &two), HomogeneityVerdict::Fail { .. });
        expect(ok && off, format!("r² homogeneity on {}", e.id));
    }
    {
        let g = n51.group().unwrap();
        let op = RocklandSpec::new(vec![(rint(-1), 2, 6), (rint(1), 3, 12), (rint(1), 4, 12)]);
        let monos = sparse_monomials(&g.spec.weights, 12);
        let ok = matches!(homogeneity_check_on(&g, &op, 12, &rat(3, 2), &monos), HomogeneityVerdict::Pass { .. });
        let off = matches!(homogeneity_check_on(&g, &op, 11, &rat(3, 2), &monos), HomogeneityVerdict::Fail { .. });
        expect(ok && off, "r¹² homogeneity on n5_1".into());
    }
    {
        let e = catalog::n5_2();
        let g = e.group().unwrap();
        let op = RocklandSpec::new(vec![(rint(1), 4, 120), (rint(1), 3, 60)]);
        // High powers of E0 and E1 cost seconds each; they run in the exact_algebra tests.
        let monos: Vec<Vec<u32>> =
            sparse_monomials(&g.spec.weights, 120).into_iter().filter(|m| m[0] <= 2 && m[1] <= 2).collect();
        let ok = matches!(homogeneity_check_on(&g, &op, 120, &two, &monos), HomogeneityVerdict::Pass { .. });
        let top = vec![vec![0, 0, 0, 0, 120]];
        let off = matches!(homogeneity_check_on(&g, &op, 119, &two, &top), HomogeneityVerdict::Fail { .. });
        expect(ok && off, "r¹²⁰ homogeneity on n5_2".into());
    }

    let n = checks;
    outcome(failures.is_empty(), format!("{} exact checks, failures: {:?}", n, failures))
}

// ---------------------------------------------------------------------------------------------
// 2. Pedersen trace formula.

struct OrbitSymbol {
    rho: (f64, f64),
    theta: (f64, f64),
    /// `Σ c · ρ^a ϑ^b`.
    poly: Vec<(u32, u32, C64)>,
}

impl OrbitSymbol {
    fn value(&self, r: f64, t: f64) -> C64 {
        let env = gauss(self.rho.0, self.rho.1, r) * gauss(self.theta.0, self.theta.1, t);
        self.poly.iter().map(|&(a, b, k)| k * r.powi(a as i32) * t.powi(b as i32)).sum::<C64>() * env
    }

    /// `∫∫ Ψ dρ dϑ`.
    fn lebesgue_integral(&self) -> C64 {
        self.poly
            .iter()
            .map(|&(a, b, k)| k * gauss_moment(self.rho.0, self.rho.1, a) * gauss_moment(self.theta.0, self.theta.1, b))
            .sum()
    }
}

fn trace_family() -> Vec<OrbitSymbol> {
    let i = |v: f64| c(0.0, v);
    let r = |v: f64| c(v, 0.0);
    vec![
        OrbitSymbol { rho: (0.0, 3.5), theta: (0.0, 0.5), poly: vec![(0, 0, r(1.0)), (1, 0, r(0.3)), (0, 2, r(0.2))] },
        OrbitSymbol { rho: (0.5, 3.6), theta: (0.1, 0.6), poly: vec![(0, 0, r(1.0)), (2, 0, r(0.05)), (0, 1, i(-0.4))] },
        OrbitSymbol { rho: (-0.5, 3.5), theta: (-0.1, 0.45), poly: vec![(0, 0, r(2.0)), (1, 1, r(0.1)), (3, 0, r(0.002))] },
        OrbitSymbol {
            rho: (0.25, 3.4),
            theta: (0.0, 0.55),
            poly: vec![(0, 0, r(1.0)), (2, 0, r(0.01)), (0, 2, r(0.5)), (1, 0, i(0.2))],
        },
    ]
}

fn criterion_2() -> Outcome {
    let (_, model) = g4("1");
    let lambdas = [-1.0, -0.5, 0.5, 1.0, 2.0];
    let fam = trace_family();
    let mut worst = [0.0f64; 2];
    for (k, m) in [128usize, 256].iter().enumerate() {
        let grid = RepGrid::new(*m, 10.0).unwrap();
        for &lam in &lambdas {
            let chart = RepChart::new(&model, grid, &[lam - 0.3, 0.3]).unwrap();
            for sym in &fam {
                let op = pedersen_quantize(&chart, |r, t| sym.value(r, t)).unwrap();
                let want = sym.lebesgue_integral() / (2.0 * PI * lam.abs());
                worst[k] = worst[k].max((trace(&op) - want).norm() / want.norm());
            }
        }
    }
    let ratio = worst[0] / worst[1];
    outcome(
        worst[0] < 1e-6 && ratio >= 4.0,
        format!("{} symbols; worst rel. error {:.2e} (M=128), {:.2e} (M=256), ratio {:.1}", 20, worst[0], worst[1], ratio),
    )
}

// ---------------------------------------------------------------------------------------------
// 3. Group Fourier kernel vs Weyl_λ of the Euclidean transform.

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let (_, model) = g4("1");
    let rep = RepGrid::new(128, 8.0).unwrap();
    let h = rep.h();
    let ugrid = grid4([(-44.0 * h, h, 89), (-7.0, 0.35, 41), (-7.0, 0.7, 21), (-7.0, 0.7, 21)]);
    let family = [
        (Gauss4 { m: [0.0, 0.0, 0.0, 0.0], s: [0.8, 1.0, 1.0, 1.0] }, [0.9, 0.3]),
        (Gauss4 { m: [0.5, -0.3, 0.2, -0.4], s: [0.7, 0.9, 1.1, 1.0] }, [-0.5, -0.3]),
        (Gauss4 { m: [-0.4, 0.5, -0.5, 0.1], s: [0.8, 1.1, 1.0, 0.9] }, [1.4, 0.6]),
        (Gauss4 { m: [0.2, 0.2, 0.5, 0.5], s: [0.75, 1.0, 0.9, 1.1] }, [0.2, 0.3]),
        (Gauss4 { m: [-0.3, -0.5, 0.0, 0.3], s: [0.8, 0.95, 1.0, 1.0] }, [-1.0, -0.5]),
    ];
    let opts = SectionOptions::default();
    let mut worst: f64 = 0.0;
    let mut per = Vec::new();
    for (u, z) in &family {
        let samples = GridFunction::sample(&ugrid, |x| c(u.value(x), 0.0));
        let a = match group_fourier_at(&model, rep, &samples, z, &opts) {
            Ok(a) => a,
            Err(e) => return outcome(false, format!("group_fourier_at failed: {e}")),
        };
        let lambda = z[0] + z[1];
        let b = weyl_lambda(rep, lambda, |eta, v| u.ft(&[eta, v, z[0], z[1]])).unwrap();
        let d = rel_max_diff(&a, &b);
        per.push(format!("{d:.1e}"));
        worst = worst.max(d);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-6 && secs < 30.0,
        format!("5 Gaussians, 128² kernels; rel. diffs [{}]; {secs:.1} s", per.join(", ")),
    )
}

// ---------------------------------------------------------------------------------------------
// 4. W-identity.

fn w_symbol() -> Gauss4 {
    Gauss4 { m: [0.3, 0.0, 3.0, 0.0], s: [1.0, 1.5, 0.3, 0.3] }
}

fn criterion_4() -> Outcome {
    let (_, model) = g4("1");
    let rep = RepGrid::new(64, 8.0).unwrap();
    let b = w_symbol();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let xs: Vec<Vec<f64>> = (0..20).map(|_| (0..4).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
    let scale = b.ift(&[0.0; 4]).norm();
    let mut errs = Vec::new();
    for n in [64usize, 128] {
        let zgrid = GridND::new(vec![Axis::centered(12.0, n).unwrap(), Axis::centered(12.0, n).unwrap()]).unwrap();
        let section = match w_transform(&model, rep, &b.lib(), &zgrid, &SectionOptions::default()) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("w_transform failed: {e}")),
        };
        let mut worst: f64 = 0.0;
        for x in &xs {
            let got = inverse_group_fourier(&section, x).unwrap();
            worst = worst.max((got - b.ift(x)).norm() / scale);
        }
        errs.push(worst);
    }
    outcome(
        errs[0] < 1e-3 && errs[1] <= errs[0] / 2.0,
        format!("20 points; rel. error {:.2e} (64²), {:.2e} (128²)", errs[0], errs[1]),
    )
}

// ---------------------------------------------------------------------------------------------
// 5. Kernels of the two calculi.

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let (group, model) = g4("1");
    let rep = RepGrid::new(64, 8.0).unwrap();
    let b = w_symbol();
    let a = Gauss4 { m: [0.0, 0.0, 0.0, 0.0], s: [1.5, 1.5, 2.0, 2.0] };
    let zgrid = GridND::new(vec![Axis::centered(12.0, 64).unwrap(), Axis::centered(12.0, 64).unwrap()]).unwrap();
    let section = match w_transform(&model, rep, &b.lib(), &zgrid, &SectionOptions::default()) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("w_transform failed: {e}")),
    };
    let a_lib = a.lib();
    let sym = OperatorSymbol::Separable { a: &a_lib, b: &section };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut diffs = Vec::new();
    let mut refs = Vec::new();
    for _ in 0..50 {
        let x: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // log(y⁻¹x) on the δ = 1 group, written out.
        let w = -y[0] * x[1] + y[1] * x[0];
        let rel = [x[0] - y[0], x[1] - y[1], x[2] - y[2] + w / 2.0, x[3] - y[3] + w / 2.0];
        let want = a.value(&x) * b.ift(&rel);
        let got = op_group_kernel(&group, &sym, &x, &y).unwrap();
        diffs.push((got - want).norm());
        refs.push(want.norm());
    }
    let scale = refs.iter().cloned().fold(0.0, f64::max);
    let worst_global = diffs.iter().cloned().fold(0.0, f64::max) / scale;
    let worst_point = diffs.iter().zip(&refs).map(|(d, r)| d / r).fold(0.0, f64::max);

    // Same kernel through the symbol quantized afresh at one x.
    let f = SeparableField { a: a.lib(), b: b.lib() };
    let ped = OperatorSymbol::Pedersen { f: &f, model: &model, rep, zgrid: &zgrid, opts: SectionOptions::default() };
    let (x, y) = (vec![0.2, -0.1, 0.3, 0.0], vec![-0.4, 0.5, 0.1, 0.2]);
    let k_sep = op_group_kernel(&group, &sym, &x, &y).unwrap();
    let k_ped = op_group_kernel(&group, &ped, &x, &y).unwrap();
    let routes = (k_sep - k_ped).norm() / k_sep.norm();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_point < 1e-3 && routes < 1e-10 && secs < 120.0,
        format!(
            "50 pairs; worst pointwise rel. error {worst_point:.2e} (max-normalized {worst_global:.2e}); routes agree to {routes:.1e}; {secs:.1} s"
        ),
    )
}

// ---------------------------------------------------------------------------------------------
// 6. Plancherel inversion.

fn criterion_6() -> Outcome {
    let (_, model) = g4("1");
    let rep = RepGrid::new(64, 6.0).unwrap();
    let h = rep.h();
    // Narrow in p: the trace over q samples the ϑ-transform with step λh.
    let b = Gauss4 { m: [0.2, 0.0, 5.0, 0.0], s: [1.0, 3.0, 0.5, 0.5] };
    let ugrid = grid4([(-32.0 * h, h, 65), (-2.0, 0.125, 33), (-13.0, 0.65, 41), (-13.0, 0.65, 41)]);
    let u = GridFunction::sample(&ugrid, |x| b.ift(x));
    let norm = u.l2();
    let opts = SectionOptions::default();
    let mut errs = Vec::new();
    let mut details = Vec::new();
    for n in [28usize, 56] {
        let step = 8.0 / n as f64;
        let zgrid = GridND::new(vec![Axis::new(1.0, step, n).unwrap(), Axis::new(-4.0, step, n).unwrap()]).unwrap();
        let section = match group_fourier(&model, rep, &u, &zgrid, &opts) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("group_fourier failed at {n}²: {e}")),
        };
        let back = inverse_group_fourier_grid(&section, &ugrid).unwrap();
        let diff: f64 = back.values.iter().zip(&u.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>();
        let err = (diff * ugrid.cell()).sqrt() / norm;
        let pl = section.plancherel_norm_sq().sqrt() / norm;
        details.push(format!("{n}²: {err:.2e} (Plancherel ratio {pl:.6})"));
        errs.push(err);
    }
    outcome(errs[0] < 1e-3 && errs[1] <= errs[0] / 2.0, format!("rel. L² error {}", details.join(", ")))
}

// ---------------------------------------------------------------------------------------------
// 7. Functions whose transform vanishes on an orbit.

fn criterion_7() -> Outcome {
    let (_, model) = g4("1");
    let rep = RepGrid::new(64, 6.0).unwrap();
    let h = rep.h();
    let ugrid = grid4([(-32.0 * h, h, 65), (-4.0, 0.25, 33), (-13.0, 0.65, 41), (-13.0, 0.65, 41)]);
    let z0 = [4.2, 0.1];
    let base = GaussPoly::gaussian(vec![0.2, 0.0, 4.0, 0.0], vec![1.0, 1.5, 0.5, 0.5]).unwrap();
    let with_root = |shift: f64| {
        base.clone().with_poly(vec![(vec![0, 0, 1, 0], c(1.0, 0.0)), (vec![0, 0, 0, 0], c(-z0[0] + shift, 0.0))])
    };
    let mut out = Vec::new();
    for shift in [0.0, 0.3] {
        let sym = with_root(shift);
        let v = GridFunction::sample(&ugrid, |x| sym.inverse_fourier_at(x));
        let a = group_fourier_at(&model, rep, &v, &z0, &SectionOptions::default()).unwrap();
        out.push((hs_norm(&a), v.l1()));
    }
    let (hs, l1) = out[0];
    let (hs_bad, l1_bad) = out[1];
    let ok = hs < 1e-5 * l1;
    let control = hs_bad >= 1e-5 * l1_bad;
    outcome(
        ok && control,
        format!("‖ξ(v)‖_HS/‖v‖₁ = {:.2e}; perturbed control {:.2e} (must be ≥ 1e-5)", hs / l1, hs_bad / l1_bad),
    )
}

// ---------------------------------------------------------------------------------------------
// 8. Duality of the Taylor polynomials and the spectrum of T.

/// `(X^β q)(e)` from the group law: the coefficient of `t_1⋯t_k` in
/// `q(t_1 E_{j_1} • ⋯ • t_k E_{j_k})`, with `X^β = X_{j_1} ⋯ X_{j_k}`.
fn derivative_at_identity(group: &Group, beta: &[u32], q: &Poly<Rat>) -> Rat {
    let n = group.dim();
    let seq: Vec<usize> = (0..n).flat_map(|j| std::iter::repeat(j).take(beta[j] as usize)).collect();
    let k = seq.len();
    if k == 0 {
        return q.coeff(&vec![0; n]);
    }
    let mut x: Vec<Poly<Rat>> = vec![Poly::zero(k); n];
    for (i, &j) in seq.iter().enumerate() {
        let mut e = vec![Poly::zero(k); n];
        e[j] = Poly::var(k, i);
        x = group.mul(&x, &e);
    }
    let val = q.eval(&x, |c| Poly::constant(k, c.clone()));
    val.coeff(&vec![1; k])
}

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for id in ["abelian:3", "heis1", "g4delta:δ=1", "g4delta:δ=0"] {
        let g = catalog::load(id).unwrap().group().unwrap();
        let w = g.spec.weights.clone();
        let qs = taylor_polynomials(&g, 4).unwrap();
        let betas: Vec<Vec<u32>> = (0..=4).flat_map(|d| multi_indices(&w, d)).collect();
        let fields = g.left_invariant_fields();
        for (alpha, q) in &qs {
            if hom_length(alpha, &w) > 4 {
                continue;
            }
            for beta in &betas {
                let want = if alpha == beta { rint(1) } else { rint(0) };
                let zero = vec![rint(0); g.dim()];
                let via_fields = apply_multi(&fields, beta, q).eval(&zero, |c| c.clone());
                let via_law = derivative_at_identity(&g, beta, q);
                checked += 1;
                if via_fields != want || via_law != want {
                    failures.push(format!("{id}: α={alpha:?} β={beta:?}"));
                }
            }
        }
    }
    let (_, model) = g4("1");
    let grid = RepGrid::new(256, 12.0).unwrap();
    let mut spec_err: f64 = 0.0;
    for z in [[0.7, 0.3], [-1.5, -0.5], [2.0, 0.5]] {
        let chart = RepChart::new(&model, grid, &z).unwrap();
        let lam = chart.lambda.abs();
        let ev = represented_t_spectrum(&chart);
        for k in 0..10 {
            let want = (1.0 + lam * (2 * k + 1) as f64).sqrt();
            spec_err = spec_err.max((ev[k] - want).abs());
        }
    }
    outcome(
        failures.is_empty() && checked > 0 && spec_err < 1e-6,
        format!("{checked} exact pairings, failures {failures:?}; T-spectrum max deviation {spec_err:.2e}"),
    )
}

// ---------------------------------------------------------------------------------------------
// 9. Dilations.

fn criterion_9() -> Outcome {
    let (_, model) = g4("1");
    let grid = RepGrid::new(256, 12.0).unwrap();
    let z = [0.8, 0.4];
    let chart = RepChart::new(&model, grid, &z).unwrap();
    let lam = chart.lambda;
    let nodes = grid.nodes();
    let phis: Vec<Box<dyn Fn(f64) -> C64>> = vec![
        Box::new(|q: f64| c(gauss(0.0, 1.0, q), 0.0)),
        Box::new(|q: f64| cis(0.7 * q) * gauss(0.5, 0.8, q)),
        Box::new(|q: f64| c(q, 0.3) * gauss(-0.3, 1.1, q)),
    ];
    let x = [0.6, -0.4, 0.3, 0.2];
    let mut worst: f64 = 0.0;
    let mut worst_sym: f64 = 0.0;
    for r in [0.5, 2.0, 4.0] {
        let s = f64::sqrt(r);
        let rz = [r * z[0], r * z[1]];
        let target = chart.with_center(&rz).unwrap();
        let u = chart.dilation_intertwiner(r).unwrap();
        let dx = [s * x[0], s * x[1], r * x[2], r * x[3]];
        let pi_dx = chart.matrix(&dx);
        let pi_x = target.matrix(&x);
        for phi in &phis {
            let v = GridOperator::from_fn(grid.m, 1, |k, _| phi(nodes[k]));
            let lhs = &u * (&pi_dx * &v);
            let rhs = &pi_x * (&u * &v);
            // r^{1/4} e^{i(r⟨x_z|𝒵⟩ + rλ(q₀p + qp/2))} φ(√r(q₀ + q))
            let exact = GridOperator::from_fn(grid.m, 1, |k, _| {
                let q0 = nodes[k];
                let phase = r * (x[2] * z[0] + x[3] * z[1]) + r * lam * (q0 * x[1] + x[0] * x[1] / 2.0);
                cis(phase) * phi(s * (q0 + x[0])) * r.powf(0.25)
            });
            let norm = v.norm();
            worst = worst.max((&lhs - &rhs).norm() / norm).max((&lhs - &exact).norm() / norm);
        }
        // U Ped_λ(Ψ) U⁻¹ = Ped_{rλ}(Ψ(· / √r, · / √r)) on the same vectors.
        let psi = |rho: f64, th: f64| c(gauss(0.2, 1.0, rho) * gauss(0.0, 0.9, th), 0.0) * c(1.0, 0.2 * rho);
        let p1 = pedersen_quantize(&chart, psi).unwrap();
        let p2 = pedersen_quantize(&target, |rho, th| psi(rho / s, th / s)).unwrap();
        for phi in &phis {
            let v = GridOperator::from_fn(grid.m, 1, |k, _| phi(nodes[k]));
            let lhs = &u * (&p1 * &v);
            let rhs = &p2 * (&u * &v);
            worst_sym = worst_sym.max((&lhs - &rhs).norm() / v.norm());
        }
    }
    outcome(
        worst < 1e-6 && worst_sym < 1e-6,
        format!("r ∈ {{1/2, 2, 4}}: intertwiner defect {worst:.2e}; Pedersen transport defect {worst_sym:.2e}"),
    )
}

fn main() {
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(usize, &str, fn() -> Outcome); 9] = [
        (1, "exact algebra", criterion_1),
        (2, "Pedersen trace formula", criterion_2),
        (3, "group Fourier kernel = Weyl of Euclidean transform", criterion_3),
        (4, "W-identity", criterion_4),
        (5, "kernels of the two quantizations", criterion_5),
        (6, "Plancherel inversion", criterion_6),
        (7, "vanishing on an orbit kills the orbit's transform", criterion_7),
        (8, "Taylor duality and T-spectrum", criterion_8),
        (9, "dilation intertwining", criterion_9),
    ];
    let mut failed = 0;
    for (k, name, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&k) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        let secs = t.elapsed().as_secs_f64();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {k} ({name}): {} [{secs:.1} s]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
