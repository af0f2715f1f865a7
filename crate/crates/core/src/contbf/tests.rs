use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::{CoeffScheme, GaussScalar};
use crate::crossed::MultiMatrixAlgebra;
use crate::groups::recipe_build;

fn alg(s: &str) -> FdAlgebra {
    FdAlgebra::parse(s).unwrap()
}

fn tuple(a: &FdAlgebra, s: &str) -> Vec<FdElement> {
    a.parse_tuple(s).unwrap()
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

#[test]
fn r0_identical_tuples_are_exact_zero() {
    let c3 = alg("cyclic(3)");
    let a = tuple(&c3, "u[t] ; (1/2)*u[e] + (1/2)*u[t2]");
    let r = r0_lower(&c3, &a, &c3, &a, 3).unwrap();
    assert!(r.exact_zero);
    assert_eq!(r.value, 0.0);
}

#[test]
fn r0_separates_c2_from_c3() {
    let (c2, c3) = (alg("cyclic(2)"), alg("cyclic(3)"));
    let r = r0_lower(&c2, &tuple(&c2, "u[t]"), &c3, &tuple(&c3, "u[t]"), 3).unwrap();
    // Re τ(x²)/2 is 1/2 on the C2 generator and 0 on the C3 one.
    assert_eq!(r.exact, Some(half()));
    assert!(r.value >= 0.4);
    assert!(!r.exact_zero);
    let r2 = r0_lower(&c2, &tuple(&c2, "u[t]"), &c3, &tuple(&c3, "u[t]"), 1).unwrap();
    assert!(r2.exact_zero);
}

#[test]
fn r0_exact_zero_on_lifted_matched_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["finite-relabel", "finite-subgroup"] {
        let pair = recipe_build(name).unwrap();
        let (ga, gb) = (FdAlgebra::group(&pair.g).unwrap(), FdAlgebra::group(&pair.h).unwrap());
        for _ in 0..4 {
            let scheme = CoeffScheme::random(&mut rng, pair.gs.len(), 2, 2);
            let ys: Vec<FdElement> = scheme.build(&pair.g, &pair.gs).unwrap().into_iter().map(FdElement::Group).collect();
            let zs: Vec<FdElement> = scheme.build(&pair.h, &pair.hs).unwrap().into_iter().map(FdElement::Group).collect();
            let r = r0_lower(&ga, &ys, &gb, &zs, 3).unwrap();
            assert!(r.exact_zero, "{name}: {}", r.tsv());
        }
    }
}

#[test]
fn r0_rejects_mismatched_sorts() {
    let c2 = alg("cyclic(2)");
    let e = r0_lower(&c2, &tuple(&c2, "u[t]"), &c2, &tuple(&c2, "2*u[t]"), 2);
    assert!(matches!(e, Err(ContError::Sort(_))));
    let e = r0_lower(&c2, &tuple(&c2, "u[t]"), &c2, &[], 2);
    assert!(matches!(e, Err(ContError::Sort(_))));
}

#[test]
fn ralpha_separates_c2_from_c3() {
    let (c2, c3) = (alg("cyclic(2)"), alg("cyclic(3)"));
    let pool_b = vec![tuple(&c3, "u[t]")];
    let params = RAlphaParams { alpha: 1, degree: 3, eps: 0.25, max_depth: 3, refine_budget: 8000, ..Default::default() };
    let r = r_alpha_lower(&c2, &[], &c3, &[], &[], &pool_b, &params).unwrap();
    assert!(r.value > 0.0, "{}", r.tsv());
    // Duplicator's best reply misses by about 0.186, so no sound bound exceeds it.
    assert!(r.value < 0.19);
    let flat = RAlphaParams { max_depth: 0, ..params };
    assert_eq!(r_alpha_lower(&c2, &[], &c3, &[], &[], &pool_b, &flat).unwrap().value, 0.0);
    assert!(r.resolution.net_points > 0);
    assert_eq!(r.resolution.meshes.last(), Some(&0.25));
}

#[test]
fn ralpha_trivial_cases() {
    let c2 = alg("cyclic(2)");
    let a = tuple(&c2, "u[t]");
    let pool = vec![tuple(&c2, "u[t]"), tuple(&c2, "(1/2)*u[e]")];
    let params = RAlphaParams { alpha: 1, degree: 2, eps: 0.5, ..Default::default() };
    let r = r_alpha_lower(&c2, &a, &c2, &a, &pool, &pool, &params).unwrap();
    assert_eq!(r.value, 0.0);
    assert!(r.exact_zero);
    let empty = r_alpha_lower(&c2, &a, &c2, &a, &[], &[], &params).unwrap();
    assert_eq!(empty.value, 0.0);
    assert!(empty.exact_zero);
}

#[test]
fn ralpha_is_monotone_in_resources() {
    let (c2, c3) = (alg("cyclic(2)"), alg("cyclic(3)"));
    let pool = vec![tuple(&c3, "u[t]")];
    let run = |degree, eps, pool: &[Vec<FdElement>]| {
        let params = RAlphaParams { alpha: 1, degree, eps, ..Default::default() };
        r_alpha_lower(&c2, &[], &c3, &[], &[], pool, &params).unwrap().value
    };
    let base = run(2, 0.5, &pool);
    assert!(run(3, 0.5, &pool) >= base);
    assert!(run(2, 0.3, &pool) >= base);
    let mut bigger = pool.clone();
    bigger.push(tuple(&c3, "(1/2)*u[t2]"));
    assert!(run(2, 0.5, &bigger) >= base);
    assert_eq!(run(2, 0.5, &[]), 0.0);
}

#[test]
fn ralpha_universal_modulus_is_recorded() {
    let (c2, c3) = (alg("cyclic(2)"), alg("cyclic(3)"));
    let params = RAlphaParams { omega: WeakModulus::universal_default(), eps: 0.5, ..Default::default() };
    let pool = vec![tuple(&c3, "u[t]")];
    let r = r_alpha_lower(&c2, &[], &c3, &[], &[], &pool, &params).unwrap();
    assert_eq!(r.resolution.modulus, "universal[sum]");
    let lip = RAlphaParams { eps: 0.5, ..Default::default() };
    let l = r_alpha_lower(&c2, &[], &c3, &[], &[], &pool, &lip).unwrap();
    assert!(r.value <= l.value);
}

#[test]
fn net_covers_the_ball() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for a in [alg("cyclic(2)"), alg("mm(1:1/3, 1:2/3)")] {
        let mesh = BigRational::new(1.into(), 2.into());
        let net = a.net(1, &mesh, 100_000).unwrap();
        for c in &net.cells {
            assert!(c.point.op_norm() <= 1.0 + 1e-9);
        }
        for _ in 0..50 {
            let x = random_in_ball(&mut rng, &a);
            let hit = net.cells.iter().any(|c| a.l2_dist(&x, &c.point) <= c.rho + 1e-12);
            assert!(hit, "{x} is not covered");
        }
        let middle = net.cells.iter().find(|c| c.center.iter().all(|x| x == &BigRational::default())).unwrap();
        let kids = a.refine(1, middle);
        assert!(!kids.is_empty() && kids.iter().all(|k| k.depth == 1 && k.point.op_norm() <= 1.0 + 1e-9));
    }
}

fn random_in_ball(rng: &mut ChaCha8Rng, a: &FdAlgebra) -> FdElement {
    use rand::Rng;
    let coords: Vec<GaussScalar> = (0..a.dim())
        .map(|_| GaussScalar::new(ratio(rng.random_range(-64..=64), 64), ratio(rng.random_range(-64..=64), 64)))
        .collect();
    let x = a.from_coords(&coords);
    let n = x.op_norm();
    if n <= 1.0 {
        return x;
    }
    let t = ((1.0 / n) * 1024.0).floor() as i64;
    x.scale(&GaussScalar::new(ratio(t, 1024), BigRational::default()))
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn formula_family_shape() {
    let fs = basic_formulas(&[1, 2], 2).unwrap();
    // 4 letters: 4 + 16 words, two parts each.
    assert_eq!(fs.len(), 40);
    let f = fs.iter().find(|f| f.word == vec![(0, false), (1, true)]).unwrap();
    assert_eq!(f.lipschitz, 3);
    assert_eq!(f.bound, BigRational::new(2.into(), 3.into()));
    assert_eq!(f.display(), "Re tr(x1 x2*)/3");
    assert_eq!(words(4, 4).unwrap().len(), 8 + 64 + 512 + 4096);
    assert!(matches!(words(4, 7), Err(ContError::Cap { .. })));
}

#[test]
fn scalars_match_the_exact_distance() {
    let s = FdAlgebra::matrix(MultiMatrixAlgebra::scalars());
    let a = tuple(&s, "1/2+1/3 i");
    let b = tuple(&s, "-1/4");
    let exact = (0.75f64.powi(2) + (1.0f64 / 3.0).powi(2)).sqrt();
    let r = r0_lower(&s, &a, &s, &b, 3).unwrap();
    assert!(r.value <= exact + 1e-12);
    assert_eq!(r.exact, Some(BigRational::new(3.into(), 4.into())));
    let pool = vec![tuple(&s, "1"), tuple(&s, "i")];
    let params = RAlphaParams { alpha: 1, degree: 2, eps: 0.25, ..Default::default() };
    let r1 = r_alpha_lower(&s, &a, &s, &b, &pool, &pool, &params).unwrap();
    assert!(r1.value <= exact + 1e-12);
}

fn arb_mat(n: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((-4i64..=4, -4i64..=4), n)
}

fn elem(a: &FdAlgebra, raw: &[(i64, i64)]) -> FdElement {
    let coords: Vec<GaussScalar> = raw.iter().map(|&(r, i)| GaussScalar::new(ratio(r, 8), ratio(i, 8))).collect();
    a.from_coords(&coords)
}

fn shrink_into_ball(x: FdElement) -> FdElement {
    let n = x.op_norm();
    if n <= 1.0 {
        return x;
    }
    let t = ((1.0 / n) * 4096.0).floor() as i64;
    x.scale(&GaussScalar::new(ratio(t, 4096), BigRational::default()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn formulas_respect_their_normalization(
        kind in 0usize..3,
        xa in arb_mat(4), xb in arb_mat(4), ya in arb_mat(4), yb in arb_mat(4),
    ) {
        let a = [alg("cyclic(4)"), alg("mm(2)"), alg("prod(cyclic(2),cyclic(2))")][kind].clone();
        let xs: Vec<FdElement> = [xa, xb].iter().map(|r| shrink_into_ball(elem(&a, r))).collect();
        let ys: Vec<FdElement> = [ya, yb].iter().map(|r| shrink_into_ball(elem(&a, r))).collect();
        let d = xs.iter().zip(&ys).map(|(x, y)| a.l2_dist(x, y)).fold(0.0, f64::max);
        for f in basic_formulas(&[1, 1], 3).unwrap() {
            let (u, v) = (f.eval(&xs).unwrap(), f.eval(&ys).unwrap());
            let gap = (formula_f64(&u) - formula_f64(&v)).abs();
            prop_assert!(gap <= d + 1e-9, "{} moves {} at distance {}", f.display(), gap, d);
            prop_assert!(u.abs() <= f.bound);
        }
    }

    #[test]
    fn r0_is_a_pseudometric(
        xa in arb_mat(4), ya in arb_mat(4), za in arb_mat(4),
    ) {
        let a = alg("cyclic(4)");
        let [x, y, z] = [&xa, &ya, &za].map(|r| vec![shrink_into_ball(elem(&a, r))]);
        let r = |p: &[FdElement], q: &[FdElement]| r0_lower(&a, p, &a, q, 3).unwrap().value;
        prop_assert!((r(&x, &y) - r(&y, &x)).abs() < 1e-15);
        prop_assert!(r(&x, &z) <= r(&x, &y) + r(&y, &z) + 1e-12);
        prop_assert!(r(&x, &x) == 0.0);
    }
}

fn formula_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}
