use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::{
    random_polys, verify_trace_equality, AlgebraElement, CoeffScheme, GaussScalar, LemmaOptions, StarPolynomial,
};
use crate::groups::{parse_group, recipe_build, Group, Word, DEFAULT_CAP};

fn m2() -> Arc<MultiMatrixAlgebra> {
    Arc::new(MultiMatrixAlgebra::matrices(2).unwrap())
}

fn w(g: &Group, s: &str) -> Word {
    g.parse_word(s).unwrap()
}

fn random_tensor(rng: &mut ChaCha8Rng, alg: &Arc<MultiMatrixAlgebra>, legs: &[Word]) -> TensorElement {
    let mut t = TensorElement::zero(alg);
    for _ in 0..rng.random_range(1..=2) {
        let mut factors = Vec::new();
        for l in legs {
            if rng.random_bool(0.6) {
                factors.push((l.clone(), MatElement::random(rng, alg, 0.7)));
            }
        }
        t = t.add(&TensorElement::embed(alg, factors).unwrap().scale(&crate::algebra::palette(rng))).unwrap();
    }
    t
}

fn random_twisted(rng: &mut ChaCha8Rng, g: &Group, alg: &Arc<MultiMatrixAlgebra>) -> TwistedElement {
    let elems = g.elements(64).unwrap();
    let mut x = TwistedElement::zero(g, alg);
    for _ in 0..rng.random_range(1..=3) {
        let at = elems[rng.random_range(0..elems.len())].clone();
        x = x.add(&TwistedElement::term(g, random_tensor(rng, alg, &elems), at)).unwrap();
    }
    x
}

#[test]
fn tensor_traces() {
    let a = m2();
    let c2 = Group::cyclic(2).unwrap();
    let (e, t) = (c2.identity(), w(&c2, "t"));
    assert_eq!(TensorElement::one(&a).trace(), GaussScalar::one());
    let e11 = MatElement::unit(&a, 0, 0, 0).unwrap();
    let x = MatElement::parse(&a, "[[1,2],[3,-i]]").unwrap();
    let x1 = TensorElement::embed(&a, vec![(e.clone(), x.clone()), (t.clone(), MatElement::one(&a))]).unwrap();
    assert_eq!(x1.trace(), x.trace());
    let ee = TensorElement::embed(&a, vec![(e.clone(), e11.clone()), (t, e11.clone())]).unwrap();
    assert_eq!(ee.trace(), GaussScalar::from_ratio(1, 4));
    assert!(matches!(
        TensorElement::embed(&a, vec![(e.clone(), e11.clone()), (e, e11)]),
        Err(CrossedError::DuplicateLeg(_))
    ));
}

#[test]
fn expansion_detects_hidden_cancellation() {
    let a = m2();
    let g = Group::cyclic(2).unwrap();
    let t = w(&g, "t");
    let e11 = MatElement::unit(&a, 0, 0, 0).unwrap();
    let e22 = MatElement::unit(&a, 0, 1, 1).unwrap();
    // e11 ⊗ 1 + e22 ⊗ 1 = 1 ⊗ 1, through a sum the normal form cannot see.
    let lhs = TensorElement::embed(&a, vec![(t.clone(), e11)])
        .unwrap()
        .add(&TensorElement::embed(&a, vec![(t, e22)]).unwrap())
        .unwrap();
    assert!(lhs.value_eq(&TensorElement::one(&a), DEFAULT_CAP).unwrap());
}

#[test]
fn bernoulli_examples() {
    let a = m2();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["cyclic(2)", "prod(cyclic(2),cyclic(2))"] {
        let g = parse_group(name).unwrap();
        let elems = g.elements(64).unwrap();
        for _ in 0..20 {
            let t = random_tensor(&mut rng, &a, &elems);
            assert_eq!(bernoulli_apply(&g, &g.identity(), &t).unwrap(), t);
            for x in &elems {
                let sx = bernoulli_apply(&g, x, &t).unwrap();
                assert_eq!(sx.trace(), t.trace());
                for y in &elems {
                    let lhs = bernoulli_apply(&g, x, &bernoulli_apply(&g, y, &t).unwrap()).unwrap();
                    assert_eq!(lhs, bernoulli_apply(&g, &g.mul(x, y), &t).unwrap());
                }
            }
        }
    }
}

#[test]
fn bernoulli_is_a_left_action_in_free_groups() {
    let a = m2();
    let f = Group::free(2);
    let (x, y) = (w(&f, "a"), w(&f, "b"));
    let t = TensorElement::embed(&a, vec![(w(&f, "a*b"), MatElement::unit(&a, 0, 0, 1).unwrap())]).unwrap();
    let lhs = bernoulli_apply(&f, &x, &bernoulli_apply(&f, &y, &t).unwrap()).unwrap();
    assert_eq!(lhs, bernoulli_apply(&f, &f.mul(&x, &y), &t).unwrap());
    assert_eq!(lhs.legs().into_iter().collect::<Vec<_>>(), vec![w(&f, "a*b*a*b")]);
}

#[test]
fn bernoulli_is_a_star_automorphism() {
    let a = m2();
    let g = parse_group("cyclic(3)").unwrap();
    let elems = g.elements(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let (s, t) = (random_tensor(&mut rng, &a, &elems), random_tensor(&mut rng, &a, &elems));
        for x in &elems {
            let st = bernoulli_apply(&g, x, &s.mul(&t).unwrap()).unwrap();
            let prod = bernoulli_apply(&g, x, &s).unwrap().mul(&bernoulli_apply(&g, x, &t).unwrap()).unwrap();
            assert!(st.value_eq(&prod, DEFAULT_CAP).unwrap());
            assert_eq!(bernoulli_apply(&g, x, &s.adjoint()).unwrap(), bernoulli_apply(&g, x, &s).unwrap().adjoint());
        }
    }
}

#[test]
fn twisted_examples() {
    let a = m2();
    let g = parse_group("cyclic(3)").unwrap();
    let (e, t) = (g.identity(), w(&g, "t"));
    let ti = g.inv(&t);
    let prod = TwistedElement::unitary(&g, &a, t.clone()).mul(&TwistedElement::unitary(&g, &a, ti.clone()), DEFAULT_CAP);
    assert_eq!(prod.unwrap(), TwistedElement::one(&g, &a));
    let b = TensorElement::embed(&a, vec![(e.clone(), MatElement::parse(&a, "[[1,i],[0,2]]").unwrap())]).unwrap();
    let be = TwistedElement::term(&g, b.clone(), e.clone());
    assert_eq!(be.adjoint().unwrap(), TwistedElement::term(&g, b.adjoint(), e.clone()));
    assert_eq!(be.trace(), b.trace());
    assert!(TwistedElement::term(&g, b.clone(), t.clone()).trace().is_zero());
    let b2 = TensorElement::embed(&a, vec![(t.clone(), MatElement::unit(&a, 0, 1, 0).unwrap())]).unwrap();
    let lhs = TwistedElement::term(&g, b.clone(), t.clone()).mul(&TwistedElement::term(&g, b2.clone(), ti), DEFAULT_CAP);
    let rhs = TwistedElement::term(&g, b.mul(&bernoulli_apply(&g, &t, &b2).unwrap()).unwrap(), e);
    assert!(lhs.unwrap().value_eq(&rhs, DEFAULT_CAP).unwrap());
}

#[test]
fn twisted_literals() {
    let a = m2();
    let g = parse_group("cyclic(2)").unwrap();
    let x = TwistedElement::parse(&g, &a, "[[[1,0],[0,0]]@t] + 2*[[[0,1],[0,0]]{e} [[0,0],[1,0]]{t}@e]").unwrap();
    assert_eq!(x.coeffs().len(), 2);
    assert_eq!(x.trace(), GaussScalar::zero());
    let y = TwistedElement::parse(&g, &a, "[3@e]").unwrap();
    assert_eq!(y.trace(), GaussScalar::from_ints(3, 0));
    assert!(TwistedElement::parse(&g, &a, "[1@q]").is_err());
    assert!(TwistedElement::parse(&g, &a, "1@e").is_err());
}

#[test]
fn transport_examples() {
    let a = m2();
    let g = parse_group("free(2)").unwrap();
    let h = parse_group("free(3)").unwrap();
    let gs = vec![w(&g, "a"), w(&g, "b")];
    let hs = vec![w(&h, "c"), w(&h, "a")];
    let x = MatElement::unit(&a, 0, 0, 1).unwrap();
    let y = MatElement::parse(&a, "[[1,0],[0,2]]").unwrap();
    let t = TensorElement::embed(&a, vec![(gs[0].clone(), x.clone()), (gs[1].clone(), y.clone())]).unwrap();
    assert_eq!(transport_coeffs(&gs, &gs, &t).unwrap(), t);
    let moved = transport_coeffs(&gs, &hs, &t).unwrap();
    assert_eq!(moved, TensorElement::embed(&a, vec![(hs[0].clone(), x.clone()), (hs[1].clone(), y.clone())]).unwrap());
    assert_eq!(moved.trace(), t.trace());
    // Repeated entries merge on both sides.
    let gs2 = vec![w(&g, "a"), w(&g, "a")];
    let hs2 = vec![w(&h, "b"), w(&h, "b")];
    let scheme = CrossedScheme { alg: a.clone(), vars: vec![vec![(vec![(GaussScalar::one(), vec![(0, x), (1, y)])], 0)]] };
    let left = scheme.materialize(&scheme.vars[0][0].0, &gs2).unwrap();
    assert_eq!(left.legs().len(), 1);
    assert_eq!(transport_coeffs(&gs2, &hs2, &left).unwrap(), scheme.materialize(&scheme.vars[0][0].0, &hs2).unwrap());
    assert!(matches!(transport_coeffs(&gs2, &hs, &left), Err(CrossedError::Transport(_))));
}

#[test]
fn scalar_coefficients_reduce_to_group_algebra() {
    let s = Arc::new(MultiMatrixAlgebra::scalars());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let g = parse_group("freeprod(Z,cyclic(2))").unwrap();
    let pool = crate::groups::ball(&g, &g.generators(), 2, 1000).unwrap();
    let el = |rng: &mut ChaCha8Rng| {
        AlgebraElement::from_terms(
            &g,
            (0..3).map(|_| (pool[rng.random_range(0..pool.len())].clone(), crate::algebra::palette(rng))),
        )
    };
    for _ in 0..30 {
        let (x, y) = (el(&mut rng), el(&mut rng));
        let (tx, ty) = (TwistedElement::from_group_algebra(&x, &s), TwistedElement::from_group_algebra(&y, &s));
        let prod = TwistedElement::from_group_algebra(&x.conv_mul(&y).unwrap(), &s);
        assert!(tx.mul(&ty, DEFAULT_CAP).unwrap().value_eq(&prod, DEFAULT_CAP).unwrap());
        assert!(tx.adjoint().unwrap().value_eq(&TwistedElement::from_group_algebra(&x.adjoint(), &s), DEFAULT_CAP).unwrap());
        assert_eq!(tx.trace(), x.trace());
    }
}

#[test]
fn trivial_coefficients_reproduce_trace_records() {
    let s = Arc::new(MultiMatrixAlgebra::scalars());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for name in ["finite-relabel", "free-embed", "finite-subgroup"] {
        let r = recipe_build(name).unwrap();
        let scheme = CoeffScheme::random(&mut rng, r.gs.len(), 2, 2);
        let polys = random_polys(&mut rng, 20, 2, 4, 3);
        let opts = LemmaOptions { moments: 0, ..LemmaOptions::default() };
        let plain = verify_trace_equality(&r, &scheme, &polys, &opts).unwrap();
        let crossed = verify_crossed_trace_equality(&r, &CrossedScheme::from_scalar(&scheme, &s), &polys, &opts).unwrap();
        let rows = |rep: &crate::algebra::TraceReport| rep.records.iter().map(|r| r.tsv()).collect::<Vec<_>>();
        assert_eq!(rows(&plain), rows(&crossed.trace));
    }
}

#[test]
fn relabelled_klein_with_matrix_coefficients() {
    let a = m2();
    let r = recipe_build("finite-relabel").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let scheme = CrossedScheme::random(&mut rng, &a, 2, 2, 2);
    let polys = random_polys(&mut rng, 50, 2, 4, 3);
    let rep = verify_crossed_trace_equality(&r, &scheme, &polys, &LemmaOptions { moments: 2, ..LemmaOptions::default() })
        .unwrap();
    assert!(rep.all_equal());
    // The transported side equals a direct build on hs.
    let direct = scheme.build(&r.h, &r.hs).unwrap();
    let moved = scheme.build_transported(&r.h, &r.gs, &r.hs).unwrap();
    for (x, y) in direct.iter().zip(&moved) {
        assert!(x.value_eq(y, DEFAULT_CAP).unwrap());
    }
}

#[test]
fn unitary_coefficients_give_trace_one() {
    let a = m2();
    let r = recipe_build("finite-subgroup").unwrap();
    let u = MatElement::parse(&a, "[[0,i],[1,0]]").unwrap();
    let scheme = CrossedScheme { alg: a.clone(), vars: vec![vec![(vec![(GaussScalar::one(), vec![(0, u)])], 0)]] };
    let p = StarPolynomial::parse("x1*x1^-1", None).unwrap();
    let rep = verify_crossed_trace_equality(&r, &scheme, &[p], &LemmaOptions::default()).unwrap();
    assert_eq!(rep.trace.records[0].left, GaussScalar::one());
    assert!(rep.all_equal());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twisted_star_algebra(seed in any::<u64>(), gi in 0..3usize, mi in 0..2usize) {
        let g = parse_group(["cyclic(2)", "cyclic(3)", "prod(cyclic(2),cyclic(2))"][gi]).unwrap();
        let alg = Arc::new(if mi == 0 { MultiMatrixAlgebra::scalars() } else { MultiMatrixAlgebra::matrices(2).unwrap() });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_twisted(&mut rng, &g, &alg), random_twisted(&mut rng, &g, &alg), random_twisted(&mut rng, &g, &alg));
        let cap = DEFAULT_CAP;
        let xy = x.mul(&y, cap).unwrap();
        prop_assert!(xy.mul(&z, cap).unwrap().value_eq(&x.mul(&y.mul(&z, cap).unwrap(), cap).unwrap(), cap).unwrap());
        prop_assert!(x.adjoint().unwrap().adjoint().unwrap().value_eq(&x, cap).unwrap());
        let anti = y.adjoint().unwrap().mul(&x.adjoint().unwrap(), cap).unwrap();
        prop_assert!(xy.adjoint().unwrap().value_eq(&anti, cap).unwrap());
        prop_assert_eq!(xy.trace(), y.mul(&x, cap).unwrap().trace());
        let xx = x.adjoint().unwrap().mul(&x, cap).unwrap().trace();
        prop_assert!(xx.is_real());
        prop_assert!(xx.re >= Default::default());
        prop_assert_eq!(xx.is_zero(), x.value_is_zero(cap).unwrap());
    }
}
