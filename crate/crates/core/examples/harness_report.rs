//! Building a seeded suite configuration and reading the TSV report, as
//! the `backforth` binary does.
//!
//! ```text
//! cargo run --example harness_report [-- path/to/suite.conf]
//! ```

use backforth::harness::{cmd_crossed, cmd_lemma32, SuiteConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = match std::env::args().nth(1) {
        Some(path) => SuiteConfig::from_text(&std::fs::read_to_string(path)?)?,
        None => SuiteConfig::from_text(include_str!("data/suite.conf"))?,
    };
    let report = cmd_lemma32(&cfg)?;
    print!("{report}");

    // Scalar coefficients make the crossed suite replay the same instances.
    cfg.set("algebra", "scalars")?;
    let crossed = cmd_crossed(&cfg)?;
    let same = report.payloads("trace-equality") == crossed.payloads("crossed-trace");
    println!("# crossed with scalars reproduces the records: {same}");
    std::process::exit(report.status().code());
}
