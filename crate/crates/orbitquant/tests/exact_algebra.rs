use orbitquant::catalog::{self, LISTED_IDS};
use orbitquant::lie::linalg::determinant;
use orbitquant::lie::{rat, rint, Group, LieAlgebraSpec, Rat};
use orbitquant::orbits::{bil_matrix, pfaffian, restrict, FlatStructure};
use orbitquant::symclasses::{homogeneity_check_on, sparse_monomials, HomogeneityVerdict, RocklandSpec};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn vec_of(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small_rat(), n)
}

fn groups() -> Vec<Group> {
    LISTED_IDS.iter().map(|id| catalog::load(id).unwrap().group().unwrap()).collect()
}

fn group_and_points(k: usize) -> impl Strategy<Value = (usize, Vec<Vec<Rat>>)> {
    let dims: Vec<usize> = groups().iter().map(|g| g.dim()).collect();
    (0..dims.len()).prop_flat_map(move |i| (Just(i), prop::collection::vec(vec_of(dims[i]), k)))
}

fn bracket(spec: &LieAlgebraSpec, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    spec.bracket(x, y)
}

fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(p, q)| p + q).collect()
}

fn scale(s: &Rat, a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|p| s * p).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn product_is_associative((gi, p) in group_and_points(3)) {
        let g = &groups()[gi];
        let lhs = g.mul(&g.mul(&p[0], &p[1]), &p[2]);
        let rhs = g.mul(&p[0], &g.mul(&p[1], &p[2]));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_and_identity((gi, p) in group_and_points(1)) {
        let g = &groups()[gi];
        let zero = vec![rint(0); g.dim()];
        prop_assert_eq!(g.mul(&p[0], &g.inverse(&p[0])), zero.clone());
        prop_assert_eq!(g.mul(&p[0], &zero), p[0].clone());
        prop_assert_eq!(g.inverse(&p[0]), scale(&rint(-1), &p[0]));
    }

    #[test]
    fn two_step_product_matches_half_bracket((gi, p) in group_and_points(2)) {
        let g = &groups()[gi];
        prop_assume!(g.spec.step <= 2);
        let want = add(&add(&p[0], &p[1]), &scale(&rat(1, 2), &bracket(&g.spec, &p[0], &p[1])));
        prop_assert_eq!(g.mul(&p[0], &p[1]), want);
    }

    #[test]
    fn dilations_are_automorphisms((gi, p) in group_and_points(2), r in small_rat()) {
        let g = &groups()[gi];
        prop_assume!(r != rint(0));
        let lhs = g.spec.dilate(&r, &g.mul(&p[0], &p[1]));
        let rhs = g.mul(&g.spec.dilate(&r, &p[0]), &g.spec.dilate(&r, &p[1]));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coadjoint_action_is_an_action((gi, p) in group_and_points(3)) {
        let g = &groups()[gi];
        let u = &p[2];
        let lhs = g.ad_star(&g.mul(&p[0], &p[1]), u).unwrap();
        let rhs = g.ad_star(&p[0], &g.ad_star(&p[1], u).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coadjoint_action_fixes_the_center((gi, p) in group_and_points(2)) {
        let g = &groups()[gi];
        let central = g.spec.central_indices().unwrap();
        let v = g.ad_star(&p[0], &p[1]).unwrap();
        for i in central {
            prop_assert_eq!(&v[i], &p[1][i]);
        }
    }

    #[test]
    fn pfaffian_squared_is_determinant((gi, p) in group_and_points(1)) {
        let g = &groups()[gi];
        let Ok(flat) = FlatStructure::new(&g.spec) else { return Ok(()) };
        let b = restrict(&bil_matrix(&g.spec, &p[0]), &flat.predual);
        let pf = pfaffian(&b);
        prop_assert_eq!(&pf * &pf, determinant(&b));
        let z: Vec<Rat> = flat.central.iter().map(|&i| p[0][i].clone()).collect();
        let closed = flat.pf_exact(&z);
        prop_assert_eq!(&closed * &closed, &pf * &pf);
    }

    #[test]
    fn pfaffian_is_constant_on_orbits((gi, p) in group_and_points(2)) {
        let g = &groups()[gi];
        let Ok(flat) = FlatStructure::new(&g.spec) else { return Ok(()) };
        let moved = g.ad_star(&p[0], &p[1]).unwrap();
        let pf = |u: &[Rat]| pfaffian(&restrict(&bil_matrix(&g.spec, u), &flat.predual));
        prop_assert_eq!(pf(&p[1]), pf(&moved));
    }

    #[test]
    fn group_files_round_trip(gi in 0..LISTED_IDS.len()) {
        let spec = catalog::load(LISTED_IDS[gi]).unwrap().spec;
        let back = LieAlgebraSpec::parse_toml(&spec.to_toml()).unwrap();
        prop_assert_eq!(back.c, spec.c);
        prop_assert_eq!(back.weights, spec.weights);
        prop_assert_eq!(back.labels, spec.labels);
    }
}

#[test]
fn jacobi_identity_on_basis() {
    for g in groups() {
        let n = g.dim();
        let e = |i: usize| g.spec.basis_vector::<Rat>(i);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = &g.spec;
                    let t1 = bracket(s, &e(i), &bracket(s, &e(j), &e(k)));
                    let t2 = bracket(s, &e(j), &bracket(s, &e(k), &e(i)));
                    let t3 = bracket(s, &e(k), &bracket(s, &e(i), &e(j)));
                    assert!(add(&add(&t1, &t2), &t3).iter().all(|v| *v == rint(0)), "{:?} at ({i},{j},{k})", s.labels);
                }
            }
        }
    }
}

#[test]
fn n5_2_rockland_is_homogeneous_on_the_full_sparse_family() {
    let g = catalog::n5_2().group().unwrap();
    let op = RocklandSpec::new(vec![(rint(1), 4, 120), (rint(1), 3, 60)]);
    let monos = sparse_monomials(&g.spec.weights, 120);
    let verdict = homogeneity_check_on(&g, &op, 120, &rint(2), &monos);
    assert!(matches!(verdict, HomogeneityVerdict::Pass { .. }), "{verdict:?}");
    let wrong = homogeneity_check_on(&g, &op, 119, &rint(2), &monos);
    assert!(matches!(wrong, HomogeneityVerdict::Fail { .. }));
}
