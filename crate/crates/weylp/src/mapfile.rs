//! Line-oriented key-value format describing a generator-images map.
//!
//! ```text
//! # Shear automorphism of D(A^1).
//! p = 3
//! source.n = 1
//! source.f = 1
//! target.n = 1
//! target.f = 1
//! size = 1
//! image.x1.1.1 = x1
//! image.d1.1.1 = d1 + x1^2
//! ```
//!
//! Keys:
//! - `p` (required): prime characteristic shared by both charts.
//! - `source.n`, `target.n` (required): coordinate counts.
//! - `source.f`, `target.f` (default `1`): chart denominators, written as
//!   function expressions without `finv`.
//! - `size` (default `1`): the matrix size N.
//! - `image.<gen>.<row>.<col>`: one matrix entry of a generator image, an
//!   operator expression over the **target** chart; `<gen>` is `x<k>`,
//!   `d<k>` or `finv`, rows and columns are 1-based. Entries not listed are
//!   zero. Every x- and d-generator must appear at least once, and `finv`
//!   exactly when the source chart is localized.
//!
//! `#` starts a comment; blank lines are ignored; duplicate keys are errors.
//! Everything here is a description-level (exit code 2) error; whether the
//! described map satisfies its relations is checked separately by
//! `validate`.

use std::collections::HashMap;
use std::path::Path;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::expr;
use crate::morita::{GeneratorImagesMap, MatrixOperator};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Generator {
    X(usize),
    D(usize),
    FInv,
}

struct RawEntry {
    row: usize,
    col: usize,
    text: String,
    line: usize,
}

fn file_err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::MapFile {
        file: file.to_string(),
        line,
        msg: msg.into(),
    }
}

/// Parse a map description from text. `name` labels error messages (usually
/// the path).
pub fn parse_str(name: &str, content: &str) -> Result<GeneratorImagesMap> {
    let mut p: Option<(u64, usize)> = None;
    let mut source_n: Option<(usize, usize)> = None;
    let mut target_n: Option<(usize, usize)> = None;
    let mut source_f: Option<(String, usize)> = None;
    let mut target_f: Option<(String, usize)> = None;
    let mut size: Option<(usize, usize)> = None;
    let mut entries: HashMap<Generator, Vec<RawEntry>> = HashMap::new();
    let mut seen: HashMap<String, usize> = HashMap::new();

    for (idx, raw_line) in content.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw_line.find('#') {
            Some(h) => &raw_line[..h],
            None => raw_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some(eq) = line.find('=') else {
            return Err(file_err(name, lineno, "expected 'key = value'"));
        };
        let key = line[..eq].trim();
        let value = line[eq + 1..].trim();
        if key.is_empty() || value.is_empty() {
            return Err(file_err(name, lineno, "expected 'key = value'"));
        }
        if let Some(first) = seen.insert(key.to_string(), lineno) {
            return Err(file_err(
                name,
                lineno,
                format!("duplicate key '{key}' (first seen on line {first})"),
            ));
        }

        let parse_usize = |what: &str, v: &str| -> Result<usize> {
            v.parse::<usize>()
                .map_err(|_| file_err(name, lineno, format!("{what} must be a positive integer")))
        };

        match key {
            "p" => {
                p = Some((
                    value
                        .parse::<u64>()
                        .map_err(|_| file_err(name, lineno, "p must be a positive integer"))?,
                    lineno,
                ))
            }
            "source.n" => source_n = Some((parse_usize("source.n", value)?, lineno)),
            "target.n" => target_n = Some((parse_usize("target.n", value)?, lineno)),
            "source.f" => source_f = Some((value.to_string(), lineno)),
            "target.f" => target_f = Some((value.to_string(), lineno)),
            "size" => size = Some((parse_usize("size", value)?, lineno)),
            _ => {
                let rest = key
                    .strip_prefix("image.")
                    .ok_or_else(|| file_err(name, lineno, format!("unknown key '{key}'")))?;
                let parts: Vec<&str> = rest.split('.').collect();
                if parts.len() != 3 {
                    return Err(file_err(
                        name,
                        lineno,
                        format!("image key must be image.<gen>.<row>.<col>, got '{key}'"),
                    ));
                }
                let generator = parse_generator(name, lineno, parts[0])?;
                let row = parse_usize("row", parts[1])?;
                let col = parse_usize("col", parts[2])?;
                entries.entry(generator).or_default().push(RawEntry {
                    row,
                    col,
                    text: value.to_string(),
                    line: lineno,
                });
            }
        }
    }

    let (p, _) = p.ok_or_else(|| file_err(name, 0, "missing required key 'p'"))?;
    let (source_n, _) =
        source_n.ok_or_else(|| file_err(name, 0, "missing required key 'source.n'"))?;
    let (target_n, _) =
        target_n.ok_or_else(|| file_err(name, 0, "missing required key 'target.n'"))?;
    let source_f = source_f.map(|(s, _)| s).unwrap_or_else(|| "1".to_string());
    let target_f = target_f.map(|(s, _)| s).unwrap_or_else(|| "1".to_string());
    let size = size.map(|(s, _)| s).unwrap_or(1);
    if size == 0 {
        return Err(file_err(name, 0, "size must be at least 1"));
    }

    let build_chart = |n: usize, f_text: &str, label: &str| -> Result<Chart> {
        let f = expr::chart_polynomial(p, 1, n, f_text)
            .map_err(|e| file_err(name, 0, format!("bad {label} denominator: {e}")))?;
        Chart::localized(p, 1, n, f).map_err(|e| file_err(name, 0, format!("bad {label}: {e}")))
    };
    let source = build_chart(source_n, &source_f, "source chart")?;
    let target = build_chart(target_n, &target_f, "target chart")?;

    let mut build_matrix = |generator: Generator, label: &str| -> Result<MatrixOperator> {
        let raw = entries.remove(&generator).ok_or_else(|| {
            file_err(
                name,
                0,
                format!("missing image entries for generator '{label}'"),
            )
        })?;
        let mut rows = vec![vec![crate::diffop::DiffOperator::zero(&target); size]; size];
        for entry in raw {
            if entry.row == 0 || entry.row > size || entry.col == 0 || entry.col > size {
                return Err(file_err(
                    name,
                    entry.line,
                    format!(
                        "matrix position ({},{}) outside size {size}",
                        entry.row, entry.col
                    ),
                ));
            }
            let op = expr::operator_from_text(&target, &entry.text).map_err(|e| {
                file_err(
                    name,
                    entry.line,
                    format!(
                        "bad expression for image.{label}.{}.{}: {e}",
                        entry.row, entry.col
                    ),
                )
            })?;
            rows[entry.row - 1][entry.col - 1] = op;
        }
        MatrixOperator::from_rows(rows)
    };

    let x_images = (1..=source_n)
        .map(|k| build_matrix(Generator::X(k), &format!("x{k}")))
        .collect::<Result<Vec<_>>>()?;
    let d_images = (1..=source_n)
        .map(|k| build_matrix(Generator::D(k), &format!("d{k}")))
        .collect::<Result<Vec<_>>>()?;
    let finv_image = if source.is_affine() {
        None
    } else {
        Some(build_matrix(Generator::FInv, "finv")?)
    };

    if let Some(gen) = entries.keys().next() {
        let label = match gen {
            Generator::X(k) => format!("x{k}"),
            Generator::D(k) => format!("d{k}"),
            Generator::FInv => "finv".to_string(),
        };
        return Err(file_err(
            name,
            0,
            format!("image given for '{label}', which is not a generator of the source chart"),
        ));
    }

    GeneratorImagesMap::new(source, target, size, x_images, d_images, finv_image)
        .map_err(|e| file_err(name, 0, e.to_string()))
}

fn parse_generator(name: &str, lineno: usize, text: &str) -> Result<Generator> {
    if text == "finv" {
        return Ok(Generator::FInv);
    }
    let (head, rest) = text.split_at(1.min(text.len()));
    let index: usize = rest.parse().unwrap_or(0);
    match (head, index) {
        ("x", k) if k >= 1 => Ok(Generator::X(k)),
        ("d", k) if k >= 1 => Ok(Generator::D(k)),
        _ => Err(file_err(
            name,
            lineno,
            format!("unknown generator '{text}' (expected x<k>, d<k> or finv)"),
        )),
    }
}

/// Read and parse a map description file.
pub fn load(path: &Path) -> Result<GeneratorImagesMap> {
    let display = path.display().to_string();
    let content = std::fs::read_to_string(path)
        .map_err(|e| file_err(&display, 0, format!("cannot read file: {e}")))?;
    parse_str(&display, &content)
}
