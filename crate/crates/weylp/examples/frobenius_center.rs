//! The center of the operator ring in characteristic p: restricted p-th
//! powers of vector fields, the central elements theta^p - theta^[p], and
//! the isomorphism with functions on the cotangent bundle.
//!
//! Run with: cargo run -p weylp --example frobenius_center

use weylp::center::{frob_center, iso_i, iso_i_inverse, restricted_power};
use weylp::diffop::{DiffOperator, VectorField};
use weylp::localized::LocalizedFunction;
use weylp::{Chart, Result, SymbolPolynomial};

fn main() -> Result<()> {
    let p = 3u64;
    let chart = Chart::affine(p, 1, 1)?;
    println!("chart: {chart}");
    println!();

    // theta^[p] is the p-th power derivation: theta applied p times to each
    // coordinate. For the constant field it vanishes; the Euler field is a
    // fixed point by Fermat.
    let d = VectorField::basis(&chart, 0);
    let euler = d.scale(&LocalizedFunction::var(&chart, 0))?;
    println!("d1^[p]           = {}", restricted_power(&d)?);
    println!("(x1*d1)^[p]      = {}", restricted_power(&euler)?);

    // theta^p - theta^[p] always lands in the center.
    println!("frob(d1)         = {}", frob_center(&d)?);
    println!("frob(x1*d1)      = {}", frob_center(&euler)?);

    // The same elements through the cotangent-bundle description: x maps to
    // x^p, the fiber coordinate y to d^p, monomials multiplicatively.
    let x = SymbolPolynomial::var_x(&chart, 0);
    let y = SymbolPolynomial::var_y(&chart, 0);
    println!();
    println!("i(x1)            = {}", iso_i(&x)?);
    println!("i(y1)            = {}", iso_i(&y)?);
    println!("i(x1*y1)         = {}", iso_i(&x.mul(&y)?)?);

    // The inverse reads the exponent pattern back off, including on
    // localized charts where denominators scale by p.
    let z = iso_i(&x.mul(&y)?)?;
    println!("i^-1(x1^3*d1^3)  = {}", iso_i_inverse(&z)?);

    let ring = chart.ring();
    let loc = Chart::localized(p, 1, 1, weylp::Polynomial::var(ring, 1, 0))?;
    let s = SymbolPolynomial::var_y(&loc, 0).scale(&LocalizedFunction::finv_pow(&loc, 1))?;
    let z = iso_i(&s)?;
    println!();
    println!("on {loc}:");
    println!("i(y1/x1)         = {z}");
    println!("i^-1 of that     = {}", iso_i_inverse(&z)?);

    // Forged inputs are rejected: x1*d1 is not central, so it cannot be in
    // the image.
    let forged = DiffOperator::coordinate(&chart, 0).mul(&DiffOperator::partial_op(&chart, 0))?;
    println!();
    println!(
        "preimage of x1*d1: {}",
        match weylp::center::symbol_preimage(&forged) {
            Ok(_) => unreachable!("x1*d1 is not central"),
            Err(e) => e.to_string(),
        }
    );

    Ok(())
}
