//! Back-and-forth relations between the cyclic group of order 4 and the
//! Klein four-group, presented as finite structures.
//!
//! ```text
//! cargo run --example games
//! ```

use backforth::games::{bf_asym, bf_rank, bf_sym, ef_winner, parse_pool};
use backforth::groups::parse_group;
use backforth::structures::{iso_search, SortedTuple};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c4 = parse_group("cyclic(4)")?.to_fin_structure()?;
    let v4 = parse_group("prod(cyclic(2),cyclic(2))")?.to_fin_structure()?;
    let e = SortedTuple::empty();

    // The asymmetric relation starts at rank 1.
    for alpha in 1..3 {
        let (sym, _) = bf_sym(&c4, &e, &v4, &e, alpha)?;
        let (leq, _) = bf_asym(&c4, &e, &v4, &e, alpha)?;
        println!("rank {alpha}: symmetric {sym}, asymmetric {leq}");
    }
    println!("bf rank: {}", bf_rank(&c4, &v4, 4)?);
    println!("isomorphic: {}", iso_search(&c4, &v4)?.is_some());

    let (_, transcript) = bf_sym(&c4, &e, &v4, &e, 2)?;
    print!("{}", transcript.render(&c4, &v4));

    // Two-round EF game on a pair of directed graphs.
    let path = backforth::structures::parse_structure(include_str!("data/path3.struct"))?;
    let cycle = backforth::structures::parse_structure(include_str!("data/cycle3.struct"))?;
    let phi = parse_pool(path.signature(), "(atom E x1 x2)\n(atom E x2 x1)\n")?;
    let ef = ef_winner(&path, &cycle, &phi, 2)?;
    println!("EF winner on path vs cycle: {:?}", ef.winner);
    Ok(())
}
