use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::groups::{ball, parse_group, recipe_build, Group, Word, RECIPES};

const GROUPS: [&str; 5] = ["Z", "free(2)", "cyclic(5)", "freeprod(Z,cyclic(2))", "prod(free(2),cyclic(3))"];

fn random_element(rng: &mut ChaCha8Rng, g: &Group) -> AlgebraElement {
    let gens = g.generators();
    let pool = ball(g, &gens, 2, 10_000).unwrap();
    let n = rng.random_range(0..=4);
    AlgebraElement::from_terms(g, (0..n).map(|_| (pool[rng.random_range(0..pool.len())].clone(), palette(rng))))
}

fn setup(seed: u64, gi: usize) -> (ChaCha8Rng, Group) {
    (ChaCha8Rng::seed_from_u64(seed), parse_group(GROUPS[gi]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn star_algebra_axioms(seed in any::<u64>(), gi in 0..GROUPS.len()) {
        let (mut rng, g) = setup(seed, gi);
        let (x, y, z) = (random_element(&mut rng, &g), random_element(&mut rng, &g), random_element(&mut rng, &g));
        let c = palette(&mut rng);
        prop_assert_eq!(x.conv_mul(&y).unwrap().conv_mul(&z).unwrap(), x.conv_mul(&y.conv_mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.conv_mul(&y.add(&z).unwrap()).unwrap(), x.conv_mul(&y).unwrap().add(&x.conv_mul(&z).unwrap()).unwrap());
        prop_assert_eq!(x.adjoint().adjoint(), x.clone());
        prop_assert_eq!(x.conv_mul(&y).unwrap().adjoint(), y.adjoint().conv_mul(&x.adjoint()).unwrap());
        prop_assert_eq!(x.scale(&c).adjoint(), x.adjoint().scale(&c.conj()));
        prop_assert_eq!(x.add(&y).unwrap().adjoint(), x.adjoint().add(&y.adjoint()).unwrap());
    }

    #[test]
    fn trace_property(seed in any::<u64>(), gi in 0..GROUPS.len()) {
        let (mut rng, g) = setup(seed, gi);
        let (x, y) = (random_element(&mut rng, &g), random_element(&mut rng, &g));
        prop_assert_eq!(x.conv_mul(&y).unwrap().trace(), y.conv_mul(&x).unwrap().trace());
        prop_assert_eq!(x.trace_of_product(&y).unwrap(), x.conv_mul(&y).unwrap().trace());
        let xx = x.adjoint().conv_mul(&x).unwrap().trace();
        prop_assert_eq!(xx, GaussScalar::new(x.l2_norm_sqr(), Default::default()));
    }

    #[test]
    fn oracle_matches_convolution(seed in any::<u64>(), gi in 0..GROUPS.len()) {
        let (mut rng, g) = setup(seed, gi);
        let n = rng.random_range(1..=3);
        let pool = ball(&g, &g.generators(), 2, 10_000).unwrap();
        let tuple: Vec<Word> = (0..n).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect();
        let m = rng.random_range(1..=3);
        let scheme = CoeffScheme::random(&mut rng, n, m, 2);
        let p = StarPolynomial::random(&mut rng, m, 5, 3);
        let conv = p.eval(&scheme.build(&g, &tuple).unwrap()).unwrap().trace();
        prop_assert_eq!(trace_oracle_expand(&p, &g, &tuple, &scheme, 1 << 20).unwrap(), conv);
    }

    #[test]
    fn moment_roots_increase(seed in any::<u64>(), gi in 0..GROUPS.len()) {
        let (mut rng, g) = setup(seed, gi);
        let y = random_element(&mut rng, &g);
        let roots = moment_roots(&moments(&y, 6, DEFAULT_SUPPORT_CAP).unwrap());
        let l1 = y.l1_norm();
        for w in roots.windows(2) {
            prop_assert!(w[0] <= w[1] * (1.0 + 1e-12));
        }
        prop_assert!(roots.iter().all(|r| *r <= l1 * (1.0 + 1e-12)));
    }

    #[test]
    fn unitaries_are_isometric(seed in any::<u64>(), gi in 0..GROUPS.len()) {
        let (mut rng, g) = setup(seed, gi);
        let v = random_element(&mut rng, &g);
        let v = L2Vector::from_terms(&g, v.terms().clone());
        let pool = ball(&g, &g.generators(), 3, 10_000).unwrap();
        let u = AlgebraElement::unitary(&g, pool[rng.random_range(0..pool.len())].clone());
        prop_assert_eq!(u.apply_regular(&v).unwrap().norm_sqr(), v.norm_sqr());
    }

    #[test]
    fn matched_pairs_preserve_traces_and_moments(seed in any::<u64>(), ri in 0..RECIPES.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = recipe_build(RECIPES[ri]).unwrap();
        let scheme = CoeffScheme::random(&mut rng, r.gs.len(), 2, 2);
        let polys = random_polys(&mut rng, 3, 2, 3, 2);
        let opts = LemmaOptions { moments: 3, ..LemmaOptions::default() };
        prop_assert!(verify_trace_equality(&r, &scheme, &polys, &opts).unwrap().all_equal());
        prop_assert!(verify_norm_equality(&r, &scheme, &polys, &opts).unwrap().all_equal());
    }
}
