//! DIMACS CNF output and model input.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use core::fmt::{self, Write};

use super::{CnfInstance, Model};
use crate::Error;

/// Writes the instance in DIMACS CNF: `c map`/`c trig` comments documenting
/// the variable maps, the `p cnf V C` header, then one zero-terminated
/// clause per line.
///
/// Comment grammar: `c map i c v` maps position `i` (1-based) and color `c`
/// to primary variable `v`; `c trig a b c v` maps the anchor/partner
/// positions `a`, `b` (1-based) and color `c` to trigger variable `v`.
pub fn write_dimacs<W: Write>(instance: &CnfInstance, out: &mut W) -> fmt::Result {
    for i in 0..instance.n() {
        for c in 1..=instance.r() {
            writeln!(out, "c map {} {} {}", i + 1, c, instance.primary_var(i, c))?;
        }
    }
    for (&(a, b, c), &v) in instance.trigger_map() {
        writeln!(out, "c trig {} {} {} {}", a + 1, b + 1, c, v)?;
    }
    writeln!(
        out,
        "p cnf {} {}",
        instance.num_vars(),
        instance.clauses().len()
    )?;
    for clause in instance.clauses() {
        for lit in clause {
            write!(out, "{lit} ")?;
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

pub fn dimacs_string(instance: &CnfInstance) -> String {
    let mut s = String::new();
    write_dimacs(instance, &mut s).expect("writing to a String cannot fail");
    s
}

/// [`write_dimacs`] into a byte sink.
#[cfg(feature = "std")]
pub fn write_dimacs_io<W: std::io::Write>(instance: &CnfInstance, out: &mut W) -> std::io::Result<()> {
    out.write_all(dimacs_string(instance).as_bytes())
}

/// A parsed DIMACS file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDimacs {
    pub num_vars: u32,
    pub declared_clauses: usize,
    pub clauses: Vec<Vec<i32>>,
}

pub fn parse_dimacs(text: &str) -> Result<ParsedDimacs, Error> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "duplicate header".to_string(),
                });
            }
            let mut tokens = trimmed.split_whitespace();
            let (_p, format) = (tokens.next(), tokens.next());
            if format != Some("cnf") {
                return Err(Error::Parse {
                    line: line_no,
                    message: "expected 'p cnf'".to_string(),
                });
            }
            let vars = parse_token(tokens.next(), line_no)?;
            let count = parse_token(tokens.next(), line_no)?;
            header = Some((vars as u32, count as usize));
            continue;
        }
        if header.is_none() {
            return Err(Error::Parse {
                line: line_no,
                message: "clause before header".to_string(),
            });
        }
        for token in trimmed.split_whitespace() {
            let lit: i32 = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: "expected an integer literal".to_string(),
            })?;
            if lit == 0 {
                clauses.push(core::mem::take(&mut current));
            } else {
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let (num_vars, declared_clauses) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing header".to_string(),
    })?;
    Ok(ParsedDimacs {
        num_vars,
        declared_clauses,
        clauses,
    })
}

fn parse_token(token: Option<&str>, line: usize) -> Result<i64, Error> {
    token
        .and_then(|t| t.parse().ok())
        .ok_or(Error::Parse {
            line,
            message: "malformed header".to_string(),
        })
}

/// Parses solver model output: whitespace-separated signed literals,
/// optionally spread over `v`-prefixed lines, `0` terminator optional.
/// Comment (`c`), status (`s`), and bare word lines are skipped.
pub fn parse_model(text: &str, num_vars: u32) -> Result<Model, Error> {
    let mut lits: Vec<i32> = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut tokens = trimmed.split_whitespace().peekable();
        match tokens.peek() {
            Some(&"v") | Some(&"V") => {
                tokens.next();
            }
            Some(first) if first.parse::<i32>().is_err() => {
                // status lines like "s SATISFIABLE" or a bare "SAT"
                continue;
            }
            _ => {}
        }
        for token in tokens {
            let lit: i32 = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: "expected a literal".to_string(),
            })?;
            if lit == 0 {
                break;
            }
            lits.push(lit);
        }
    }
    Model::from_literals(num_vars, lits)
}
