//! Arithmetic on a localized chart: fractions g/f^m, automatic
//! minimization, the quotient rule, and operators with denominators.
//!
//! Run with: cargo run -p weylp --example localized_functions

use weylp::chart::CoeffRing;
use weylp::diffop::DiffOperator;
use weylp::localized::LocalizedFunction;
use weylp::poly::Polynomial;
use weylp::{Chart, Result};

fn main() -> Result<()> {
    // The chart Spec F_5[x]_x: polynomials with powers of x inverted.
    let ring = CoeffRing::new(5, 1)?;
    let f = Polynomial::var(ring, 1, 0);
    let chart = Chart::localized(5, 1, 1, f)?;
    println!("chart: {chart}");
    println!();

    let x = LocalizedFunction::var(&chart, 0);
    let inv = LocalizedFunction::finv_pow(&chart, 1);

    // 1/x times x collapses to 1; representations stay minimal.
    println!("(1/x1) * x1      = {}", inv.mul(&x)?);
    println!(
        "x1^3 / x1^2      = {}",
        LocalizedFunction::new(chart.clone(), x.numerator().pow(3), 2)?
    );

    // The quotient rule: d/dx (1/x) = -1/x^2, and so on down.
    let mut value = inv.clone();
    for step in 1..=3 {
        value = value.partial(0);
        println!("d^{step}/dx^{step} (1/x1)  = {value}");
    }

    // Operators with localized coefficients stay in normal form.
    let d = DiffOperator::partial_op(&chart, 0);
    let inv_op = DiffOperator::scalar(inv.clone());
    println!();
    println!("d1 * (1/x1)      = {}", d.mul(&inv_op)?);
    println!("[d1, 1/x1]       = {}", d.commutator(&inv_op)?);

    // Equality sees through non-minimal representations.
    let doubled = LocalizedFunction::new(chart.clone(), x.numerator().mul(x.numerator())?, 3)?;
    println!();
    println!("x1^2/x1^3 = 1/x1?  {}", doubled == inv);

    Ok(())
}
