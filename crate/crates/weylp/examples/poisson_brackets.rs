//! The two Poisson brackets and how they match: the canonical symplectic
//! bracket on cotangent-bundle functions, and the divided-commutator
//! bracket on the center computed through Z/p^2 lifts.
//!
//! Run with: cargo run -p weylp --example poisson_brackets

use weylp::center::iso_i;
use weylp::poisson::{bracket_comparison, canonical_bracket, modp_bracket, REDUCTION_SIGN};
use weylp::{Chart, Result, SymbolPolynomial};

fn main() -> Result<()> {
    let p = 3u64;
    let chart = Chart::affine(p, 1, 2)?;
    println!("chart: {chart}");
    println!();

    let x1 = SymbolPolynomial::var_x(&chart, 0);
    let y1 = SymbolPolynomial::var_y(&chart, 0);
    let y2 = SymbolPolynomial::var_y(&chart, 1);

    // The canonical bracket with the convention {y_i, x_j} = delta_ij.
    println!("{{y1, x1}}   = {}", canonical_bracket(&y1, &x1)?);
    println!("{{y2, x1}}   = {}", canonical_bracket(&y2, &x1)?);
    println!("{{y1^2, x1}} = {}", canonical_bracket(&y1.pow(2), &x1)?);

    // The reduction bracket: lift central elements to Z/p^2, commutate,
    // divide by p. On the images of d1^p and x1^p it gives (p-1)! = -1.
    let z = iso_i(&y1)?;
    let w = iso_i(&x1)?;
    println!();
    println!("{{d1^p, x1^p}}_modp = {}", modp_bracket(&z, &w)?);
    println!("pinned sign        = {REDUCTION_SIGN}");

    // Side-by-side comparison: the reduction bracket of the images equals
    // the image of (sign * canonical bracket), exactly.
    println!();
    for (a, b, label) in [
        (y1.clone(), x1.clone(), "(y1, x1)"),
        (y1.pow(2), x1.clone(), "(y1^2, x1)"),
        (
            y1.mul(&y2)?,
            x1.mul(&SymbolPolynomial::var_x(&chart, 1))?,
            "(y1*y2, x1*x2)",
        ),
    ] {
        let report = bracket_comparison(&a, &b)?;
        println!("compare {label:15} -> {report}");
    }

    Ok(())
}
