use proptest::prelude::*;

use super::qf::enumerate;
use super::*;
use crate::games::bf_sym;
use crate::structures::{iso_search, SortedTuple};

fn w(g: &Group, s: &str) -> Word {
    g.parse_word(s).unwrap()
}

fn tuple(g: &Group, s: &str) -> Vec<Word> {
    parse_tuple(g, s).unwrap()
}

#[test]
fn word_problem_examples() {
    let f2 = Group::free(2);
    assert_eq!(f2.mul(&w(&f2, "a*b"), &w(&f2, "b^-1")), w(&f2, "a"));
    let z = Group::z();
    assert_eq!(z.mul(&w(&z, "2"), &w(&z, "3")), w(&z, "5"));
    let fp = parse_group("freeprod(free(1),cyclic(2))").unwrap();
    assert_eq!(fp.mul(&w(&fp, "a*t"), &w(&fp, "t")), w(&fp, "a"));
    assert!(fp.is_identity(&fp.mul(&w(&fp, "t*a"), &w(&fp, "a^-1*t"))));
}

#[test]
fn graph_product_commutation() {
    let g = parse_group("graphprod(path(3),Z,Z,Z)").unwrap();
    // Adjacent vertices commute, the ends of the path do not.
    assert_eq!(w(&g, "2:1*1:1"), w(&g, "1:1*2:1"));
    assert_ne!(w(&g, "3:1*1:1"), w(&g, "1:1*3:1"));
    assert_eq!(g.display_word(&w(&g, "3:1*2:1*1:1")), "2:1*3:1*1:1");
    // 1:1 * 2:1 * 1:-1 cancels through the commuting middle syllable.
    assert_eq!(g.display_word(&w(&g, "1:1*2:1*1:-1")), "2:1");
    assert!(g.check_word(&Word::Graph(vec![(2, Word::Abelian(vec![1])), (1, Word::Abelian(vec![1]))])).is_err());
}

#[test]
fn boxplus_examples() {
    let g = parse_group("freeprod(free(2),free(2))").unwrap();
    let (f0, f1) = match &g {
        Group::FreeProduct(a, b) => ((**a).clone(), (**b).clone()),
        _ => unreachable!(),
    };
    let e = boxplus_decompose(&g, &g.identity()).unwrap();
    assert_eq!(e, (vec![f0.identity()], vec![f1.identity()]));
    let x = w(&g, "1:a*2:b*1:b");
    let (p, q) = boxplus_decompose(&g, &x).unwrap();
    assert_eq!(p, vec![w(&f0, "a"), w(&f0, "b")]);
    assert_eq!(q, vec![w(&f1, "b"), f1.identity()]);
    assert_eq!(boxplus_recompose(&g, &p, &q).unwrap(), x);
    let (p, q) = boxplus_decompose(&g, &w(&g, "1:a^2")).unwrap();
    assert_eq!((p, q), (vec![w(&f0, "a^2")], vec![f1.identity()]));
    assert!(boxplus_decompose(&Group::z(), &Group::z().identity()).is_err());
}

#[test]
fn boxplus_sweep_is_unique() {
    let g = parse_group("freeprod(free(1),cyclic(3))").unwrap();
    let Group::FreeProduct(f0, f1) = &g else { unreachable!() };
    for x in ball(&g, &g.generators(), 5, DEFAULT_CAP).unwrap() {
        let (p, q) = boxplus_decompose(&g, &x).unwrap();
        assert_eq!(boxplus_recompose(&g, &p, &q).unwrap(), x);
        let n = p.len();
        assert_eq!(q.len(), n);
        for i in 0..n {
            assert!(i == 0 || !f0.is_identity(&p[i]), "{}", g.display_word(&x));
            assert!(i == n - 1 || !f1.is_identity(&q[i]), "{}", g.display_word(&x));
        }
    }
}

#[test]
fn qf_examples() {
    let (f2, f3) = (Group::free(2), Group::free(3));
    let r = qf_equal_tuples(&f2, &tuple(&f2, "a, b"), &f3, &tuple(&f3, "a, b"), 8).unwrap();
    assert_eq!(r, TupleMatchResult::Equal(Certificate::FreeBasis));

    let z = Group::z();
    let r = qf_equal_tuples(&z, &tuple(&z, "1, 1"), &z, &tuple(&z, "1, 2"), 8).unwrap();
    let TupleMatchResult::NotEqual(wit) = r else { panic!("{r:?}") };
    assert_eq!(wit.to_string(), "x1*x2^-1");
    assert!(wit.identity_on_left);

    let r = qf_equal_tuples(&z, &tuple(&z, "2, 3"), &z, &tuple(&z, "4, 6"), 8).unwrap();
    assert_eq!(r, TupleMatchResult::Equal(Certificate::AbelianLattice));
    assert!(qf_equal_tuples(&z, &tuple(&z, "1"), &z, &[], 8).is_err());
}

#[test]
fn qf_free_basis_mismatch() {
    let f2 = Group::free(2);
    let r = qf_equal_tuples(&f2, &tuple(&f2, "a, a^-1"), &f2, &tuple(&f2, "a, b"), 8).unwrap();
    let TupleMatchResult::NotEqual(wit) = r else { panic!("{r:?}") };
    assert_eq!(wit.to_string(), "x1*x2");
    let r = qf_equal_tuples(&f2, &tuple(&f2, "a, e"), &f2, &tuple(&f2, "b, e"), 8).unwrap();
    assert!(r.is_equal());
}

#[test]
fn qf_finite_closure() {
    let c4 = Group::cyclic(4).unwrap();
    let c6 = Group::cyclic(6).unwrap();
    let r = qf_equal_tuples(&c4, &tuple(&c4, "t2"), &c6, &tuple(&c6, "t3"), 8).unwrap();
    assert_eq!(r, TupleMatchResult::Equal(Certificate::FiniteClosure));
    let r = qf_equal_tuples(&c4, &tuple(&c4, "t"), &c6, &tuple(&c6, "t3"), 8).unwrap();
    let TupleMatchResult::NotEqual(wit) = r else { panic!("{r:?}") };
    assert!(wit.verify(&c4, &tuple(&c4, "t"), &c6, &tuple(&c6, "t3")));
    // Finite against infinite: the finite side bounds the closure.
    let z = Group::z();
    let r = qf_equal_tuples(&c4, &tuple(&c4, "t"), &z, &tuple(&z, "1"), 8).unwrap();
    let TupleMatchResult::NotEqual(wit) = r else { panic!("{r:?}") };
    assert!(wit.verify(&c4, &tuple(&c4, "t"), &z, &tuple(&z, "1")));
    assert_eq!(wit.letters.len(), 1);
    assert_eq!(wit.letters[0].1.abs(), 4);
}

#[test]
fn qf_unknown_is_bounded() {
    // a and a*b*a*b^-1 generate a free subgroup of rank 2 in free(2); against
    // a free basis of a free product no exact decider applies.
    let f2 = Group::free(2);
    let fp = parse_group("freeprod(Z,Z)").unwrap();
    let r = qf_equal_tuples(&f2, &tuple(&f2, "a, a*b*a*b^-1"), &fp, &tuple(&fp, "1:1, 2:1"), 4).unwrap();
    assert_eq!(r, TupleMatchResult::UnknownUpTo(4));
}

#[test]
fn recipes_certify_equal() {
    for name in RECIPES {
        let r = recipe_build(name).unwrap();
        assert_ne!(r.g, r.h, "{name}");
        let res = qf_equal_tuples(&r.g, &r.gs, &r.h, &r.hs, 8).unwrap();
        assert!(res.is_equal(), "{name}: {res}");
        // Independent check by evaluation up to length 6.
        assert_eq!(enumerate(&r.g, &r.gs, &r.h, &r.hs, 6), TupleMatchResult::UnknownUpTo(6), "{name}");
    }
    assert!(matches!(recipe_build("nope"), Err(GroupError::UnknownRecipe(_))));
}

#[test]
fn ball_examples() {
    let z = Group::z();
    let b = ball(&z, &tuple(&z, "1"), 2, DEFAULT_CAP).unwrap();
    let shown: Vec<String> = b.iter().map(|x| z.display_word(x)).collect();
    assert_eq!(shown, ["-2", "-1", "0", "1", "2"]);
    let f2 = Group::free(2);
    assert_eq!(ball(&f2, &tuple(&f2, "a, b"), 1, DEFAULT_CAP).unwrap().len(), 5);
    let expected: usize = 1 + (1..=3).map(|k| 4 * 3usize.pow(k - 1)).sum::<usize>();
    assert_eq!(ball(&f2, &tuple(&f2, "a, b"), 3, DEFAULT_CAP).unwrap().len(), expected);
    assert_eq!(expected, 53);
    assert!(matches!(ball(&f2, &tuple(&f2, "a, b"), 6, 100), Err(GroupError::CapExceeded { .. })));
}

#[test]
fn finite_structures() {
    let c2 = Group::cyclic(2).unwrap().to_fin_structure().unwrap();
    assert_eq!(c2.total_size(), 2);
    assert_eq!(Group::cyclic(3).unwrap().to_fin_structure().unwrap().total_size(), 3);
    let v4 = parse_group("prod(cyclic(2),cyclic(2))").unwrap();
    let s = v4.to_fin_structure().unwrap();
    assert_eq!(s.total_size(), 4);
    let mul = s.signature().function_index("mul").unwrap();
    assert!((0..4).all(|x| s.apply(mul, &[x, x]) == s.constant(0).index));
    assert!(matches!(Group::z().to_fin_structure(), Err(GroupError::NotFinite(_))));
    assert_eq!(parse_group("graphprod(complete(2),cyclic(2),cyclic(3))").unwrap().order(), Some(6));
    assert_eq!(parse_group("graphprod(empty(2),cyclic(2),cyclic(3))").unwrap().order(), None);
}

fn permutation_group(gens: &[Vec<usize>]) -> TableGroup {
    let n = gens[0].len();
    let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { (0..n).map(|i| p[q[i]]).collect() };
    let mut elems = vec![(0..n).collect::<Vec<_>>()];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let x = compose(&elems[i], g);
            if !elems.contains(&x) {
                elems.push(x);
            }
        }
        i += 1;
    }
    let idx = |p: &Vec<usize>| elems.iter().position(|q| q == p).unwrap() as u32;
    let table = elems.iter().map(|p| elems.iter().map(|q| idx(&compose(p, q))).collect()).collect();
    let names = (0..elems.len()).map(|k| format!("p{k}")).collect();
    TableGroup::new(names, table).unwrap()
}

/// The fourteen groups of order at most 8, up to isomorphism.
fn small_groups() -> Vec<Group> {
    let mut out: Vec<Group> = (1..=8).map(|n| Group::cyclic(n).unwrap()).collect();
    for e in ["prod(cyclic(2),cyclic(2))", "prod(cyclic(2),cyclic(4))", "prod(cyclic(2),cyclic(2),cyclic(2))"] {
        out.push(parse_group(e).unwrap());
    }
    out.push(Group::table(permutation_group(&[vec![1, 0, 2], vec![1, 2, 0]])));
    out.push(Group::table(permutation_group(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]])));
    // Quaternions as permutations of ±1, ±i, ±j, ±k (left multiplication).
    let qi = vec![2, 3, 1, 0, 6, 7, 5, 4];
    let qj = vec![4, 5, 7, 6, 1, 0, 2, 3];
    out.push(Group::table(permutation_group(&[qi, qj])));
    out
}

#[test]
fn small_group_catalogue() {
    let gs = small_groups();
    let orders: Vec<u128> = gs.iter().map(|g| g.order().unwrap()).collect();
    assert_eq!(orders, [1, 2, 3, 4, 5, 6, 7, 8, 4, 8, 8, 6, 8, 8]);
    // Pairwise non-isomorphic.
    let structs: Vec<_> = gs.iter().map(|g| g.to_fin_structure().unwrap()).collect();
    for i in 0..structs.len() {
        for j in 0..i {
            assert!(iso_search(&structs[i], &structs[j]).unwrap().is_none(), "{i} {j}");
        }
    }
}

#[test]
fn knight_saraph_small_groups() {
    let structs: Vec<_> = small_groups().iter().map(|g| g.to_fin_structure().unwrap()).collect();
    let empty = SortedTuple::empty();
    for s in &structs {
        for t in &structs {
            let (eq, _) = bf_sym(s, &empty, t, &empty, 3).unwrap();
            if eq {
                assert!(iso_search(s, t).unwrap().is_some());
            }
        }
    }
}

fn word_from(g: &Group, picks: &[(usize, bool)]) -> Word {
    let gens = g.generators();
    picks.iter().fold(g.identity(), |acc, &(k, inv)| {
        let x = &gens[k % gens.len()];
        g.mul(&acc, &if inv { g.inv(x) } else { x.clone() })
    })
}

fn sample_groups() -> Vec<Group> {
    [
        "free(2)",
        "Z^2",
        "abelian(1,3)",
        "cyclic(5)",
        "prod(free(2),cyclic(3))",
        "freeprod(free(1),cyclic(2))",
        "freeprod(cyclic(2),cyclic(3))",
        "graphprod(path(3),Z,cyclic(2),free(2))",
        "graphprod(cycle(4),cyclic(2),cyclic(2),cyclic(2),cyclic(2))",
    ]
    .iter()
    .map(|e| parse_group(e).unwrap())
    .collect()
}

fn picks() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..8, any::<bool>()), 0..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms_and_canonicality(k in 0usize..9, a in picks(), b in picks(), c in picks()) {
        let g = &sample_groups()[k];
        let (x, y, z) = (word_from(g, &a), word_from(g, &b), word_from(g, &c));
        let xy = g.mul(&x, &y);
        prop_assert!(g.check_word(&xy).is_ok());
        prop_assert_eq!(g.mul(&xy, &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
        prop_assert_eq!(g.is_identity(&x), x == g.identity());
        prop_assert_eq!(g.mul(&g.identity(), &x), x.clone());
        prop_assert_eq!(g.parse_word(&g.display_word(&x)).unwrap(), x);
    }

    #[test]
    fn boxplus_round_trip(a in picks()) {
        let g = parse_group("freeprod(free(2),cyclic(3))").unwrap();
        let x = word_from(&g, &a);
        let (p, q) = boxplus_decompose(&g, &x).unwrap();
        prop_assert_eq!(boxplus_recompose(&g, &p, &q).unwrap(), x);
    }

    #[test]
    fn witnesses_re_evaluate(k in 0usize..9, a in picks(), b in picks(), c in picks(), d in picks()) {
        let g = &sample_groups()[k];
        let gs = [word_from(g, &a), word_from(g, &b)];
        let hs = [word_from(g, &c), word_from(g, &d)];
        if let TupleMatchResult::NotEqual(wit) = qf_equal_tuples(g, &gs, g, &hs, 4).unwrap() {
            prop_assert!(wit.verify(g, &gs, g, &hs));
        }
    }

    #[test]
    fn matched_factors_compose(a in picks(), b in picks()) {
        // Matched tuples in the factors give matched tuples in the products.
        let (f2, f3) = (Group::free(2), Group::free(3));
        let (c4, c2) = (Group::cyclic(4).unwrap(), Group::cyclic(2).unwrap());
        let x = word_from(&f2, &a);
        let y = word_from(&f2, &b);
        let dg = Group::direct(vec![f2.clone(), c4.clone()]);
        let dh = Group::direct(vec![f3.clone(), c2.clone()]);
        let fg = Group::free_product(f2.clone(), c4.clone());
        let fh = Group::free_product(f3.clone(), c2.clone());
        let cases = [
            (&dg, vec![Word::Tuple(vec![x.clone(), Word::Table(2)]), Word::Tuple(vec![y.clone(), c4.identity()])],
             &dh, vec![Word::Tuple(vec![x.clone(), Word::Table(1)]), Word::Tuple(vec![y.clone(), c2.identity()])]),
            (&fg, vec![fg.mul(&fg.embed(0, x.clone()), &fg.embed(1, Word::Table(2))), fg.embed(0, y.clone())],
             &fh, vec![fh.mul(&fh.embed(0, x.clone()), &fh.embed(1, Word::Table(1))), fh.embed(0, y.clone())]),
        ];
        for (g, gs, h, hs) in cases {
            prop_assert_eq!(enumerate(g, &gs, h, &hs, 8), TupleMatchResult::UnknownUpTo(8));
        }
    }
}
