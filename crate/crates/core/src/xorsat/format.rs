//! Line-oriented instance file format.
//!
//! ```text
//! p 3r3x <num_vars> <num_clauses> <seed>
//! c <i> <j> <k> <parity>
//! ...
//! s <bitstring>
//! ```
//!
//! Indices are 0-based, the planted line is optional and must come last.

use std::fmt::Write as _;

use super::{Clause, XorSatError, XorSatInstance};

pub fn serialize(instance: &XorSatInstance) -> String {
    let mut out = String::with_capacity(16 * (instance.clauses().len() + 2));
    let _ = writeln!(
        out,
        "p 3r3x {} {} {}",
        instance.num_vars(),
        instance.clauses().len(),
        instance.seed()
    );
    for c in instance.clauses() {
        let [i, j, k] = c.vars;
        let _ = writeln!(out, "c {i} {j} {k} {}", u8::from(c.parity));
    }
    if let Some(planted) = instance.planted() {
        out.push_str("s ");
        out.extend(planted.iter().map(|&b| if b { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

fn syntax(line: usize, message: impl Into<String>) -> XorSatError {
    XorSatError::SyntaxError {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, XorSatError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{tok}`")))
}

/// Parse and validate an instance file.
pub fn parse(text: &str) -> Result<XorSatInstance, XorSatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| syntax(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") || toks.next() != Some("3r3x") {
        return Err(syntax(hline, "expected header `p 3r3x <vars> <clauses> <seed>`"));
    }
    let num_vars: usize = field(toks.next(), hline, "variable count")?;
    let num_clauses: usize = field(toks.next(), hline, "clause count")?;
    let seed: u64 = field(toks.next(), hline, "seed")?;
    if toks.next().is_some() {
        return Err(syntax(hline, "trailing tokens in header"));
    }

    let mut clauses = Vec::with_capacity(num_clauses);
    let mut planted = None;
    let mut last_line = hline;
    for (ln, line) in lines {
        last_line = ln;
        if planted.is_some() {
            return Err(syntax(ln, "content after planted assignment line"));
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("c") => {
                if clauses.len() == num_clauses {
                    return Err(syntax(
                        ln,
                        format!("more clause lines than the {num_clauses} declared"),
                    ));
                }
                let i = field(toks.next(), ln, "variable index")?;
                let j = field(toks.next(), ln, "variable index")?;
                let k = field(toks.next(), ln, "variable index")?;
                let parity = match toks.next() {
                    Some("0") => false,
                    Some("1") => true,
                    Some(other) => return Err(syntax(ln, format!("parity must be 0 or 1, got `{other}`"))),
                    None => return Err(syntax(ln, "missing parity")),
                };
                if toks.next().is_some() {
                    return Err(syntax(ln, "trailing tokens in clause line"));
                }
                clauses.push(Clause::new([i, j, k], parity));
            }
            Some("s") => {
                if clauses.len() != num_clauses {
                    return Err(syntax(
                        ln,
                        format!(
                            "header declares {num_clauses} clauses but {} were given",
                            clauses.len()
                        ),
                    ));
                }
                let bits = toks.next().ok_or_else(|| syntax(ln, "missing bitstring"))?;
                if toks.next().is_some() {
                    return Err(syntax(ln, "trailing tokens in planted line"));
                }
                let assignment = bits
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(syntax(ln, format!("invalid bit `{ch}`"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if assignment.len() != num_vars {
                    return Err(syntax(
                        ln,
                        format!("bitstring has length {}, expected {num_vars}", assignment.len()),
                    ));
                }
                planted = Some(assignment);
            }
            Some(tag) => return Err(syntax(ln, format!("unknown record type `{tag}`"))),
            None => unreachable!("blank lines are filtered"),
        }
    }
    if clauses.len() != num_clauses {
        return Err(syntax(
            last_line + 1,
            format!(
                "header declares {num_clauses} clauses but {} were given",
                clauses.len()
            ),
        ));
    }

    XorSatInstance::new(num_vars, clauses, planted, seed)
}
