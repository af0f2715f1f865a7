//! Quantifier-free types of tuples in computable groups, and the built-in
//! recipe pairs used by the lemma suites.
//!
//! ```text
//! cargo run --example group_types
//! ```

use backforth::groups::{parse_group, parse_tuple, qf_equal_tuples, recipe_build, RECIPES};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f2 = parse_group("free(2)")?;
    let z2 = parse_group("Z^2")?;
    let words = [("a, b", "e1, e2"), ("a, a^2", "e1, e1^2"), ("a, b", "e1, e1")];
    for (l, r) in words {
        let (gs, hs) = (parse_tuple(&f2, l)?, parse_tuple(&z2, r)?);
        println!("free(2) [{l}] vs Z^2 [{r}]: {}", qf_equal_tuples(&f2, &gs, &z2, &hs, 6)?);
    }

    // Normal forms in a free product.
    let g = parse_group("freeprod(cyclic(2),cyclic(3))")?;
    let w = g.parse_word("1:t*2:t*2:t*1:t*1:t")?;
    println!("normal form: {}", g.display_word(&w));

    for name in RECIPES {
        let r = recipe_build(name)?;
        println!("{name}: {}", qf_equal_tuples(&r.g, &r.gs, &r.h, &r.hs, 6)?);
    }
    Ok(())
}
