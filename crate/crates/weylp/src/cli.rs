//! Command-line driver: one subcommand per library operation.
//!
//! Exit codes: 0 on success, 1 on domain errors (non-central inputs, images
//! outside the center, non-scalar transports, invalid maps, undefined
//! degrees), 2 on usage, expression and map-file errors. Every error prints
//! one `error[<Code>]: ...` line on stderr.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::center::{
    frob_center, iso_i, restricted_power, symbol_preimage, CentralElement, SymbolPolynomial,
};
use crate::chart::Chart;
use crate::diffop::{DiffOperator, VectorField};
use crate::error::{Error, Result};
use crate::expr;
use crate::localized::LocalizedFunction;
use crate::mapfile;
use crate::morita::{BracketCheck, GeneratorImagesMap, InducedMap, MapValidation};
use crate::poisson::{canonical_bracket, modp_bracket};

#[derive(Parser)]
#[command(
    name = "weylp",
    version,
    about = "Exact arithmetic for differential operators on localized charts in characteristic p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ChartArgs {
    /// Prime characteristic
    #[arg(long)]
    p: u64,
    /// Number of coordinates
    #[arg(long)]
    n: usize,
    /// Chart denominator as a polynomial expression; 1 means affine space
    #[arg(long, default_value = "1")]
    f: String,
    /// Coefficient exponent: the ring is Z/p^e
    #[arg(long, default_value_t = 1)]
    e: u8,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl ChartArgs {
    fn chart(&self) -> Result<Chart> {
        let f = expr::chart_polynomial(self.p, self.e, self.n, &self.f)?;
        Chart::localized(self.p, self.e, self.n, f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExprMode {
    Operator,
    Symbol,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BracketKind {
    Canonical,
    Modp,
}

#[derive(Args)]
struct MapArgs {
    /// Map description file
    file: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print its normal form
    Normalize {
        #[command(flatten)]
        chart: ChartArgs,
        /// Expression kind
        #[arg(long, value_enum, default_value_t = ExprMode::Operator)]
        mode: ExprMode,
        expr: String,
    },
    /// Product of two operators
    Mul {
        #[command(flatten)]
        chart: ChartArgs,
        a: String,
        b: String,
    },
    /// Commutator [a, b]
    Comm {
        #[command(flatten)]
        chart: ChartArgs,
        a: String,
        b: String,
    },
    /// k-th power of an operator
    Power {
        #[command(flatten)]
        chart: ChartArgs,
        expr: String,
        k: u32,
    },
    /// Apply an operator to a function
    Apply {
        #[command(flatten)]
        chart: ChartArgs,
        op: String,
        func: String,
    },
    /// Does the operator lie in the center?
    Central {
        #[command(flatten)]
        chart: ChartArgs,
        expr: String,
    },
    /// p-th power derivation of a vector field
    RestrictedPower {
        #[command(flatten)]
        chart: ChartArgs,
        expr: String,
    },
    /// Central element theta^p - theta^[p] of a vector field
    FrobCenter {
        #[command(flatten)]
        chart: ChartArgs,
        expr: String,
    },
    /// Center isomorphism applied to a symbol
    I {
        #[command(flatten)]
        chart: ChartArgs,
        expr: String,
    },
    /// Inverse center isomorphism applied to a central operator
    InvI {
        #[command(flatten)]
        chart: ChartArgs,
        expr: String,
    },
    /// Poisson bracket of two symbols (canonical) or central operators (modp)
    Pbracket {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, value_enum)]
        kind: BracketKind,
        a: String,
        b: String,
    },
    /// Bernstein filtration degree of an operator on an affine chart
    BernsteinDeg {
        #[command(flatten)]
        chart: ChartArgs,
        expr: String,
    },
    /// Check a generator-images map against the source presentation
    ValidateMap {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Transport a central element (given as a source symbol) through a map
    Transport {
        #[command(flatten)]
        map: MapArgs,
        /// Symbol expression over the source chart
        #[arg(long)]
        symbol: String,
    },
    /// Generator table of the induced map of cotangent bundles
    InducedMap {
        #[command(flatten)]
        map: MapArgs,
    },
}

enum Payload {
    Operator(DiffOperator),
    Symbol(SymbolPolynomial),
    Function(LocalizedFunction),
    Bool(bool),
    Integer(u32),
    Validation(MapValidation),
    Induced(InducedMap, Vec<BracketCheck>),
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error[{}]: {}", err.code(), err);
            err.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Normalize { chart, mode, expr } => {
            let c = chart.chart()?;
            let payload = match mode {
                ExprMode::Operator => Payload::Operator(expr::operator_from_text(&c, &expr)?),
                ExprMode::Symbol => Payload::Symbol(expr::symbol_from_text(&c, &expr)?),
            };
            emit(&c, chart.format, payload)
        }
        Command::Mul { chart, a, b } => {
            let c = chart.chart()?;
            let product =
                expr::operator_from_text(&c, &a)?.mul(&expr::operator_from_text(&c, &b)?)?;
            emit(&c, chart.format, Payload::Operator(product))
        }
        Command::Comm { chart, a, b } => {
            let c = chart.chart()?;
            let comm =
                expr::operator_from_text(&c, &a)?.commutator(&expr::operator_from_text(&c, &b)?)?;
            emit(&c, chart.format, Payload::Operator(comm))
        }
        Command::Power {
            chart,
            expr: text,
            k,
        } => {
            let c = chart.chart()?;
            emit(
                &c,
                chart.format,
                Payload::Operator(expr::operator_from_text(&c, &text)?.power(k)),
            )
        }
        Command::Apply { chart, op, func } => {
            let c = chart.chart()?;
            let value =
                expr::operator_from_text(&c, &op)?.apply(&expr::function_from_text(&c, &func)?)?;
            emit(&c, chart.format, Payload::Function(value))
        }
        Command::Central { chart, expr: text } => {
            let c = chart.chart()?;
            let is_central = expr::operator_from_text(&c, &text)?.is_central()?;
            emit(&c, chart.format, Payload::Bool(is_central))
        }
        Command::RestrictedPower { chart, expr: text } => {
            let c = chart.chart()?;
            let theta = VectorField::from_operator(&expr::operator_from_text(&c, &text)?)?;
            emit(
                &c,
                chart.format,
                Payload::Operator(restricted_power(&theta)?.embed()),
            )
        }
        Command::FrobCenter { chart, expr: text } => {
            let c = chart.chart()?;
            let theta = VectorField::from_operator(&expr::operator_from_text(&c, &text)?)?;
            emit(
                &c,
                chart.format,
                Payload::Operator(frob_center(&theta)?.into_op()),
            )
        }
        Command::I { chart, expr: text } => {
            let c = chart.chart()?;
            let z = iso_i(&expr::symbol_from_text(&c, &text)?)?;
            emit(&c, chart.format, Payload::Operator(z.into_op()))
        }
        Command::InvI { chart, expr: text } => {
            let c = chart.chart()?;
            let s = symbol_preimage(&expr::operator_from_text(&c, &text)?)?;
            emit(&c, chart.format, Payload::Symbol(s))
        }
        Command::Pbracket { chart, kind, a, b } => {
            let c = chart.chart()?;
            match kind {
                BracketKind::Canonical => {
                    let value = canonical_bracket(
                        &expr::symbol_from_text(&c, &a)?,
                        &expr::symbol_from_text(&c, &b)?,
                    )?;
                    emit(&c, chart.format, Payload::Symbol(value))
                }
                BracketKind::Modp => {
                    let z = CentralElement::new(expr::operator_from_text(&c, &a)?)?;
                    let w = CentralElement::new(expr::operator_from_text(&c, &b)?)?;
                    let value = modp_bracket(&z, &w)?;
                    emit(&c, chart.format, Payload::Operator(value.into_op()))
                }
            }
        }
        Command::BernsteinDeg { chart, expr: text } => {
            let c = chart.chart()?;
            let deg = expr::operator_from_text(&c, &text)?.bernstein_degree()?;
            emit(&c, chart.format, Payload::Integer(deg))
        }
        Command::ValidateMap { map } => {
            let loaded = mapfile::load(&map.file)?;
            let report = loaded.validate();
            let valid = report.is_valid();
            let failed = report.failures().count();
            let total = report.checks.len();
            emit(loaded.target(), map.format, Payload::Validation(report))?;
            if valid {
                Ok(())
            } else {
                Err(Error::MapValidationFailed(format!(
                    "{failed} of {total} relations failed"
                )))
            }
        }
        Command::Transport { map, symbol } => {
            let loaded = load_valid_map(&map.file)?;
            let s = expr::symbol_from_text(loaded.source(), &symbol)?;
            let transported = loaded.transport(&iso_i(&s)?)?;
            let target = loaded.target().clone();
            emit(
                &target,
                map.format,
                Payload::Operator(transported.into_op()),
            )
        }
        Command::InducedMap { map } => {
            let loaded = load_valid_map(&map.file)?;
            let induced = loaded.induced_symplectic()?;
            let checks = induced.bracket_checks()?;
            let target = loaded.target().clone();
            emit(&target, map.format, Payload::Induced(induced, checks))
        }
    }
}

fn load_valid_map(path: &std::path::Path) -> Result<GeneratorImagesMap> {
    let map = mapfile::load(path)?;
    let report = map.validate();
    if let Some(failure) = report.failures().next() {
        return Err(Error::MapValidationFailed(format!(
            "relation {} has residual {}",
            failure.name, failure.residual
        )));
    }
    Ok(map)
}

fn emit(chart: &Chart, format: Format, payload: Payload) -> Result<()> {
    let text = match format {
        Format::Text => render_text(&payload),
        Format::Json => render_json(chart, &payload),
    };
    print!("{text}");
    Ok(())
}

fn render_text(payload: &Payload) -> String {
    match payload {
        Payload::Operator(op) => format!("{op}\n"),
        Payload::Symbol(s) => format!("{s}\n"),
        Payload::Function(g) => format!("{g}\n"),
        Payload::Bool(b) => format!("{b}\n"),
        Payload::Integer(k) => format!("{k}\n"),
        Payload::Validation(report) => {
            let mut out = String::new();
            for check in &report.checks {
                if check.ok() {
                    out.push_str(&format!("{}: ok\n", check.name));
                } else {
                    out.push_str(&format!("{}: residual = {}\n", check.name, check.residual));
                }
            }
            let failed = report.failures().count();
            if failed == 0 {
                out.push_str(&format!(
                    "map valid ({} relations checked)\n",
                    report.checks.len()
                ));
            } else {
                out.push_str(&format!(
                    "map INVALID ({failed} of {} relations failed)\n",
                    report.checks.len()
                ));
            }
            out
        }
        Payload::Induced(induced, checks) => {
            let mut out = String::new();
            for (name, image) in induced.table() {
                out.push_str(&format!("{name} -> {image}\n"));
            }
            for check in checks {
                if check.ok() {
                    out.push_str(&format!("{}: ok\n", check.name));
                } else {
                    out.push_str(&format!(
                        "{}: expected {}, found {}\n",
                        check.name, check.expected, check.actual
                    ));
                }
            }
            let preserved = checks.iter().all(|c| c.ok());
            out.push_str(&format!("canonical brackets preserved: {preserved}\n"));
            out
        }
    }
}

fn chart_json(chart: &Chart) -> serde_json::Value {
    serde_json::json!({
        "p": chart.p(),
        "e": chart.e(),
        "n": chart.num_vars(),
        "f": chart.denominator().to_string(),
    })
}

fn operator_json(op: &DiffOperator) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = op
        .terms()
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|(b, c)| {
            serde_json::json!({
                "d": b.exponents(),
                "coeff": c.to_string(),
            })
        })
        .collect();
    serde_json::json!({ "kind": "operator", "text": op.to_string(), "terms": terms })
}

fn symbol_json(s: &SymbolPolynomial) -> serde_json::Value {
    let terms: Vec<serde_json::Value> = s
        .terms()
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .map(|(b, c)| {
            serde_json::json!({
                "y": b.exponents(),
                "coeff": c.to_string(),
            })
        })
        .collect();
    serde_json::json!({ "kind": "symbol", "text": s.to_string(), "terms": terms })
}

fn render_json(chart: &Chart, payload: &Payload) -> String {
    let result = match payload {
        Payload::Operator(op) => operator_json(op),
        Payload::Symbol(s) => symbol_json(s),
        Payload::Function(g) => serde_json::json!({
            "kind": "function",
            "text": g.to_string(),
            "numerator": g.numerator().to_string(),
            "denom_power": g.denom_pow(),
        }),
        Payload::Bool(b) => serde_json::json!({ "kind": "bool", "value": b }),
        Payload::Integer(k) => serde_json::json!({ "kind": "integer", "value": k }),
        Payload::Validation(report) => {
            let relations: Vec<serde_json::Value> = report
                .checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "name": c.name,
                        "ok": c.ok(),
                        "residual": c.residual.to_string(),
                    })
                })
                .collect();
            serde_json::json!({
                "kind": "map_validation",
                "valid": report.is_valid(),
                "relations": relations,
            })
        }
        Payload::Induced(induced, checks) => {
            let images: Vec<serde_json::Value> = induced
                .table()
                .into_iter()
                .map(|(name, image)| {
                    serde_json::json!({ "generator": name, "image": image.to_string() })
                })
                .collect();
            let check_values: Vec<serde_json::Value> = checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "name": c.name,
                        "ok": c.ok(),
                        "expected": c.expected.to_string(),
                        "actual": c.actual.to_string(),
                    })
                })
                .collect();
            serde_json::json!({
                "kind": "induced_map",
                "images": images,
                "bracket_checks": check_values,
                "brackets_preserved": checks.iter().all(|c| c.ok()),
            })
        }
    };
    let envelope = serde_json::json!({
        "schema": "weylp/1",
        "chart": chart_json(chart),
        "result": result,
    });
    format!("{envelope}\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_args_reject_bad_charts() {
        let args = ChartArgs {
            p: 4,
            n: 1,
            f: "1".into(),
            e: 1,
            format: Format::Text,
        };
        assert!(matches!(args.chart(), Err(Error::NotPrime(4))));
        let args = ChartArgs {
            p: 3,
            n: 1,
            f: "1".into(),
            e: 3,
            format: Format::Text,
        };
        assert!(matches!(args.chart(), Err(Error::BadExponent(3))));
    }

    #[test]
    fn json_envelope_shape() {
        let chart = Chart::affine(3, 1, 1).unwrap();
        let payload = Payload::Operator(DiffOperator::one(&chart));
        let text = render_json(&chart, &payload);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["schema"], "weylp/1");
        assert_eq!(value["chart"]["p"], 3);
        assert_eq!(value["result"]["kind"], "operator");
        assert_eq!(value["result"]["text"], "1");
    }
}
