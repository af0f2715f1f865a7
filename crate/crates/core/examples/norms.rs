//! Exact moments and operator norm bounds in group algebras.
//!
//! ```text
//! cargo run --example norms
//! ```

use backforth::algebra::{moment_roots, moments, norm_bounds, norm_exact_finite, AlgebraElement, DEFAULT_SUPPORT_CAP};
use backforth::groups::parse_group;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // u1 + u-1 in C[Z] has norm 2; its moments are central binomial coefficients.
    let z = parse_group("Z")?;
    let y = AlgebraElement::parse(&z, "u[1] + u[-1]")?;
    let ms = moments(&y, 8, DEFAULT_SUPPORT_CAP)?;
    println!("moments: {}", ms.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", "));
    println!("roots:   {:?}", moment_roots(&ms));
    let b = norm_bounds(&y, 16, 8, DEFAULT_SUPPORT_CAP)?;
    println!("{:.6} <= |y| <= {}", b.lower, b.upper);

    // The free-group Laplacian has norm 2 sqrt(3), about 3.4641.
    let f2 = parse_group("free(2)")?;
    let x = AlgebraElement::parse(&f2, "u[a] + u[a^-1] + u[b] + u[b^-1]")?;
    let b = norm_bounds(&x, 8, 4, DEFAULT_SUPPORT_CAP)?;
    println!("free(2) Laplacian: {:.4} <= |x| <= {}", b.lower, b.upper);

    // Finite groups: the regular representation gives the norm directly.
    let c5 = parse_group("cyclic(5)")?;
    let w = AlgebraElement::parse(&c5, "u[t] + u[t4] + 2*u[e]")?;
    println!("cyclic(5): |w| = {:.9}", norm_exact_finite(&w, 1e-12)?);
    Ok(())
}
