//! Normal-form arithmetic in the ring of differential operators: the
//! defining relations, products, commutators, powers, and the action on
//! functions.
//!
//! Run with: cargo run -p weylp --example operator_arithmetic

use weylp::diffop::DiffOperator;
use weylp::localized::LocalizedFunction;
use weylp::{Chart, Result};

fn main() -> Result<()> {
    // The Weyl algebra in one variable over F_7.
    let chart = Chart::affine(7, 1, 1)?;
    let x = DiffOperator::coordinate(&chart, 0);
    let d = DiffOperator::partial_op(&chart, 0);

    println!("chart: {chart}");
    println!();

    // The relation d f - f d = d(f), in its simplest instance.
    println!("d1 * x1        = {}", d.mul(&x)?);
    println!("[d1, x1]       = {}", d.commutator(&x)?);

    // Higher order products pick up generalized Leibniz terms.
    println!("d1^2 * x1^2    = {}", d.power(2).mul(&x.power(2))?);

    // The Euler operator and its square.
    let euler = x.mul(&d)?;
    println!("(x1*d1)^2      = {}", euler.power(2));

    // In characteristic p the p-th power of d is central.
    let dp = d.power(7);
    println!("d1^7 central?    {}", dp.is_central()?);
    println!("x1*d1 central?   {}", euler.is_central()?);

    // Operators act on functions; the Euler operator reads off degrees.
    let h = LocalizedFunction::var(&chart, 0).pow(4);
    println!("(x1*d1)(x1^4)  = {}", euler.apply(&h)?);

    // The Bernstein degree is the total degree in x and d jointly.
    let op = x.power(2).mul(&d.power(3))?;
    println!("deg(x1^2*d1^3) = {}", op.bernstein_degree()?);

    Ok(())
}
