//! Text export of an Ising model.
//!
//! ```text
//! p ising <n> <num_terms>
//! f <i> <h_i>
//! j <i> <j> <J_ij>
//! o <offset>
//! ```
//!
//! `num_terms` counts the `f` and `j` lines; zero fields are omitted. Reals use
//! the shortest representation that parses back to the same `f64`.

use std::fmt::Write as _;

use super::{Coupling, IsingError, IsingModel};

pub fn write_ising(model: &IsingModel) -> String {
    let fields: Vec<(usize, f64)> = model
        .h()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, h)| h != 0.0)
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p ising {} {}",
        model.n(),
        fields.len() + model.couplings().len()
    );
    for (i, h) in fields {
        let _ = writeln!(out, "f {i} {h:?}");
    }
    for c in model.couplings() {
        let _ = writeln!(out, "j {} {} {:?}", c.i, c.j, c.value);
    }
    let _ = writeln!(out, "o {:?}", model.offset());
    out
}

fn syntax(line: usize, message: impl Into<String>) -> IsingError {
    IsingError::SyntaxError {
        line,
        message: message.into(),
    }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize) -> Result<T, IsingError> {
    let tok = tok.ok_or_else(|| syntax(line, "missing value"))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("cannot parse `{tok}`")))
}

pub fn parse_ising(text: &str) -> Result<IsingModel, IsingError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("p") || toks.next() != Some("ising") {
        return Err(syntax(hl, "expected header `p ising <n> <num_terms>`"));
    }
    let n: usize = num(toks.next(), hl)?;
    let num_terms: usize = num(toks.next(), hl)?;

    let mut h = vec![0.0; n];
    let mut couplings = Vec::new();
    let mut offset = None;
    let mut terms = 0usize;
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("f") => {
                let i: usize = num(toks.next(), ln)?;
                if i >= n {
                    return Err(syntax(ln, format!("field index {i} out of range")));
                }
                h[i] = num(toks.next(), ln)?;
                terms += 1;
            }
            Some("j") => {
                let i = num(toks.next(), ln)?;
                let j = num(toks.next(), ln)?;
                let value = num(toks.next(), ln)?;
                couplings.push(Coupling { i, j, value });
                terms += 1;
            }
            Some("o") => offset = Some(num(toks.next(), ln)?),
            Some(tag) => return Err(syntax(ln, format!("unknown record type `{tag}`"))),
            None => unreachable!(),
        }
    }
    if terms != num_terms {
        return Err(syntax(
            hl,
            format!("header declares {num_terms} terms, found {terms}"),
        ));
    }
    IsingModel::new(h, couplings, offset.unwrap_or(0.0))
}
