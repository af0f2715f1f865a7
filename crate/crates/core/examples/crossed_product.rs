//! Bernoulli crossed products `M^{⊗G} ⋊ G` with multi-matrix coefficients.
//!
//! ```text
//! cargo run --example crossed_product
//! ```

use std::sync::Arc;

use backforth::algebra::{LemmaOptions, StarPolynomial};
use backforth::crossed::{
    bernoulli_apply, verify_crossed_trace_equality, CrossedScheme, MatElement, MultiMatrixAlgebra, TensorElement,
    TwistedElement,
};
use backforth::groups::{parse_group, recipe_build, DEFAULT_CAP};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // M = M_2 ⊕ C, each block carrying trace weight 1/2.
    let m = Arc::new(MultiMatrixAlgebra::parse("mm(2:1/2, 1:1/2)")?);
    let g = parse_group("cyclic(3)")?;
    let (e, t) = (g.identity(), g.parse_word("t")?);

    let x = MatElement::parse(&m, "[[1,i],[0,2]]|[[3]]")?;
    let b = TensorElement::embed(&m, vec![(e.clone(), x)])?;
    let moved = bernoulli_apply(&g, &t, &b)?;
    let legs = |x: &TensorElement| x.legs().iter().map(|w| g.display_word(w)).collect::<Vec<_>>().join(",");
    println!("b sits on leg {}, σ_t(b) on leg {}", legs(&b), legs(&moved));
    println!("τ(b) = {}   τ(σ_t(b)) = {}", b.trace(), moved.trace());

    // (b u_t)(b u_t^-1) = b σ_t(b) u_e
    let but = TwistedElement::term(&g, b.clone(), t.clone());
    let prod = but.mul(&TwistedElement::term(&g, b.clone(), g.inv(&t)), DEFAULT_CAP)?;
    println!("τ((b u_t)(b u_t⁻¹)) = {}", prod.trace());
    println!("τ(b σ_t(b)) = {}", b.mul(&moved)?.trace());

    let pair = recipe_build("finite-relabel")?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let scheme = CrossedScheme::random(&mut rng, &m, pair.gs.len(), 2, 2);
    let polys: Vec<StarPolynomial> = (0..4).map(|_| StarPolynomial::random(&mut rng, 2, 3, 3)).collect();
    let opts = LemmaOptions { moments: 2, ..Default::default() };
    let rep = verify_crossed_trace_equality(&pair, &scheme, &polys, &opts)?;
    for r in &rep.trace.records {
        println!("trace\t{}", r.tsv());
    }
    for r in &rep.moments {
        println!("moments\t{}", r.tsv());
    }
    Ok(())
}
