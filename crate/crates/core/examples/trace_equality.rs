//! Trace equality for *-polynomials evaluated at matched tuples: the
//! convolution path against the binomial-expansion oracle.
//!
//! ```text
//! cargo run --example trace_equality
//! ```

use backforth::algebra::{
    eval_star_poly, trace_oracle_expand, verify_trace_equality, CoeffScheme, LemmaOptions, StarPolynomial,
    DEFAULT_SUPPORT_CAP,
};
use backforth::groups::recipe_build;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pair = recipe_build("freeprod-mixed")?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let scheme = CoeffScheme::random(&mut rng, pair.gs.len(), 2, 2);

    // `x^-1` denotes the adjoint variable.
    let p = StarPolynomial::parse("x1*x1^-1 + 1/2*x1^2 - i*x2^-1*x1", Some(2))?;
    let y = eval_star_poly(&p, &scheme.build(&pair.g, &pair.gs)?)?;
    let z = eval_star_poly(&p, &scheme.build(&pair.h, &pair.hs)?)?;
    println!("p = {p}");
    println!("tr p(y) = {}   tr p(z) = {}", y.trace(), z.trace());
    println!("expansion oracle: {}", trace_oracle_expand(&p, &pair.g, &pair.gs, &scheme, DEFAULT_SUPPORT_CAP)?);

    let polys: Vec<StarPolynomial> = (0..5).map(|_| StarPolynomial::random(&mut rng, 2, 4, 3)).collect();
    let report = verify_trace_equality(&pair, &scheme, &polys, &LemmaOptions::default())?;
    for r in &report.records {
        println!("{}", r.tsv());
    }
    println!("all equal: {}", report.all_equal());
    Ok(())
}
