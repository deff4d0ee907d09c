//! The map-description format as a library API: parse a description from
//! text, validate it relation-by-relation, and push central elements
//! through it. The same format drives the validate-map, transport and
//! induced-map subcommands; see docs/map-format.md.
//!
//! Run with: cargo run -p weylp --example map_files

use weylp::center::{iso_i, iso_i_inverse};
use weylp::expr;
use weylp::mapfile;
use weylp::Result;

const GOOD: &str = "\
# x1 -> x1, d1 -> d1 + x1 + 2 on the Weyl algebra at p = 5
p = 5
source.n = 1
target.n = 1
image.x1.1.1 = x1
image.d1.1.1 = d1 + x1 + 2
";

const BAD: &str = "\
p = 5
source.n = 1
target.n = 1
image.x1.1.1 = x1
image.d1.1.1 = x1*d1
";

fn main() -> Result<()> {
    let map = mapfile::parse_str("good.map", GOOD)?;
    println!("parsed map: size {}, source {}", map.size(), map.source());

    let report = map.validate();
    for check in &report.checks {
        println!(
            "  {}: {}",
            check.name,
            if check.ok() {
                "ok".to_string()
            } else {
                format!("residual {}", check.residual)
            }
        );
    }

    // Transport iso_i(x1*y1) = x1^5 d1^5 and read the image back as a symbol.
    let s = expr::symbol_from_text(map.source(), "x1*y1")?;
    let transported = map.transport(&iso_i(&s)?)?;
    println!("transport of i(x1*y1): {transported}");
    println!("as a symbol:           {}", iso_i_inverse(&transported)?);

    // A description can parse cleanly and still fail the relations.
    let bad = mapfile::parse_str("bad.map", BAD)?;
    let report = bad.validate();
    println!();
    println!("bad map valid? {}", report.is_valid());
    for failure in report.failures() {
        println!("  {}: residual {}", failure.name, failure.residual);
    }

    Ok(())
}
