//! The expression layer: parsing operator and symbol text, canonical
//! rendering, and the parse-render round trip the CLI is built on.
//!
//! Run with: cargo run -p weylp --example expressions

use weylp::expr::{self, Mode};
use weylp::{Chart, Result};

fn main() -> Result<()> {
    let chart = Chart::affine(5, 1, 2)?;
    println!("chart: {chart}");
    println!();

    // Products evaluate in written order; normalization moves coefficients
    // left of the derivatives.
    for text in [
        "d1*x1",
        "d1^2*x1^2",
        "(x1 + x2)*d1 - d1*x1",
        "x1*d1*x1*d1",
        "3*d2 + 2*d2 + x2^5",
    ] {
        let value = expr::operator_from_text(&chart, text)?;
        println!("{text:24} -> {value}");
    }

    println!();

    // Symbols use y atoms; products are commutative there.
    for text in ["y2*y1 + x1", "(y1 + x2)^2"] {
        let value = expr::symbol_from_text(&chart, text)?;
        println!("{text:24} -> {value}");
    }

    println!();

    // Rendering is canonical: parse(render(v)) evaluates back to v.
    let value = expr::operator_from_text(&chart, "d1^2*x1^2*d2*x2")?;
    let text = value.to_string();
    let again = expr::operator_from_text(&chart, &text)?;
    println!("canonical text   : {text}");
    println!("round trip equal : {}", again == value);

    println!();

    // Errors carry positions and explain the mode rules.
    for (text, mode) in [
        ("y1", Mode::Operator),
        ("x1 + z9", Mode::Symbol),
        ("d1 *", Mode::Operator),
    ] {
        match expr::parse(text, mode) {
            Ok(_) => unreachable!(),
            Err(e) => println!("parse {text:10} fails: {e}"),
        }
    }

    Ok(())
}
