//! Lower bounds for the continuous back-and-forth pseudo-distances `r_0`
//! and `r_α` between tuples in finite-dimensional tracial algebras.
//!
//! ```text
//! cargo run --release --example continuous_bounds
//! ```

use backforth::contbf::{r0_lower, r_alpha_lower, FdAlgebra, RAlphaParams, WeakModulus};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c2 = FdAlgebra::parse("cyclic(2)")?;
    let c3 = FdAlgebra::parse("cyclic(3)")?;
    let c4 = FdAlgebra::parse("cyclic(4)")?;
    println!("{}", backforth::contbf::RBound::TSV_HEADER);

    // Generators of different orders are separated by a word trace.
    let r = r0_lower(&c2, &c2.parse_tuple("u[t]")?, &c3, &c3.parse_tuple("u[t]")?, 3)?;
    println!("{}", r.tsv());

    // u[t2] in C4 has the same distribution as u[t] in C2.
    let r = r0_lower(&c2, &c2.parse_tuple("u[t]")?, &c4, &c4.parse_tuple("u[t2]")?, 4)?;
    println!("{}", r.tsv());

    // Rank 1 with empty tuples: Spoiler plays the generator of C3.
    let pool = vec![c3.parse_tuple("u[t]")?];
    let params = RAlphaParams { alpha: 1, degree: 3, omega: WeakModulus::Lipschitz, ..Default::default() };
    let r = r_alpha_lower(&c2, &[], &c3, &[], &[], &pool, &params)?;
    println!("{}", r.tsv());

    let m2 = FdAlgebra::parse("mm(2)")?;
    let r = r0_lower(&m2, &m2.parse_tuple("[[1,0],[0,-1]]")?, &c2, &c2.parse_tuple("u[t]")?, 4)?;
    println!("{}", r.tsv());
    Ok(())
}
