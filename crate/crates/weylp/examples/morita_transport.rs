//! Transporting centers along explicit algebra maps: validate a map against
//! the presentation, push central elements through it, and read off the
//! induced map of cotangent bundles.
//!
//! Run with: cargo run -p weylp --example morita_transport

use weylp::center::{iso_i, CentralElement};
use weylp::diffop::DiffOperator;
use weylp::localized::LocalizedFunction;
use weylp::morita::automorphisms::{shear, translation};
use weylp::morita::GeneratorImagesMap;
use weylp::{Chart, Result, SymbolPolynomial};

fn main() -> Result<()> {
    let p = 3u64;
    let chart = Chart::affine(p, 1, 1)?;
    println!("chart: {chart}");

    // The shear automorphism x -> x, d -> d + x^2 of the Weyl algebra.
    let g = LocalizedFunction::var(&chart, 0).pow(2);
    let map = shear(&chart, &g)?;

    println!();
    println!("shear: x1 -> x1, d1 -> d1 + x1^2");
    let report = map.validate();
    for check in &report.checks {
        println!(
            "  relation {}: {}",
            check.name,
            if check.ok() { "ok" } else { "FAILED" }
        );
    }

    // Transport of central elements: x^p is fixed, d^p picks up the
    // p-curvature of the shifted derivation, and the result is central.
    let xp = CentralElement::new(DiffOperator::coordinate(&chart, 0).power(p as u32))?;
    let dp = CentralElement::new(DiffOperator::partial_op(&chart, 0).power(p as u32))?;
    println!();
    println!("transport of x1^p: {}", map.transport(&xp)?);
    println!("transport of d1^p: {}", map.transport(&dp)?);

    // The induced map of cotangent bundles shifts the fiber coordinate by a
    // polynomial in x, and preserves the canonical bracket.
    let induced = map.induced_symplectic()?;
    println!();
    println!("induced symplectic map:");
    for (name, image) in induced.table() {
        println!("  {name} -> {image}");
    }
    for check in induced.bracket_checks()? {
        println!(
            "  {}: {}",
            check.name,
            if check.ok() { "ok" } else { "FAILED" }
        );
    }

    // Composition with a translation; the induced maps compose too.
    let t = translation(&chart, &[1])?;
    let composite = GeneratorImagesMap::compose(&t, &map)?;
    let ind = composite.induced_symplectic()?;
    println!();
    println!("translation . shear, induced map:");
    for (name, image) in ind.table() {
        println!("  {name} -> {image}");
    }

    // Transporting a product transports the factors: the map is a ring map
    // on centers, Poisson bracket included.
    let a = iso_i(&SymbolPolynomial::var_y(&chart, 0).pow(2))?;
    let b = iso_i(&SymbolPolynomial::var_x(&chart, 0).mul(&SymbolPolynomial::var_y(&chart, 0))?)?;
    let lhs = composite.transport(&a.mul(&b)?)?;
    let rhs = composite.transport(&a)?.mul(&composite.transport(&b)?)?;
    println!();
    println!(
        "transport(z*w) == transport(z)*transport(w)?  {}",
        lhs == rhs
    );

    Ok(())
}
