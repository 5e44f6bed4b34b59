//! Plain-text automaton files.
//!
//! ```text
//! afa v1            # or: pfa v1
//! states 2
//! alphabet a b
//! initial 2/1 -1/1
//! final 1 0         # AfA: diagonal of F; PFA: the vector y
//! matrix a
//! 1/1 -1/1
//! 0/1 2/1
//! matrix b
//! ...
//! ```
//!
//! Matrix rows are listed top to bottom; column `j` is the image of state
//! `j`. `#` starts a comment. The first violated invariant is reported with
//! the line it was detected on.

use std::fmt;

use crate::matrix::Matrix;
use crate::rational::{format_rational, parse_rational, Rational};

use super::{Afa, Alphabet, AutomatonError, Machine, Pfa, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Pfa,
    Afa,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

fn err(line: usize, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Parse { line, message: message.into() }
}

fn at(line: usize, e: AutomatonError) -> AutomatonError {
    match e {
        AutomatonError::Parse { .. } => e,
        other => err(line, other.to_string()),
    }
}

fn parse_vector(line: &Line<'_>, states: usize) -> Result<Vec<Rational>> {
    let values = &line.tokens[1..];
    if values.len() != states {
        return Err(err(
            line.number,
            format!("expected {states} entries, found {}", values.len()),
        ));
    }
    values
        .iter()
        .map(|t| parse_rational(t).map_err(|e| err(line.number, e.to_string())))
        .collect()
}

fn parse_flags(line: &Line<'_>, states: usize) -> Result<Vec<bool>> {
    let values = &line.tokens[1..];
    if values.len() != states {
        return Err(err(
            line.number,
            format!("expected {states} flags, found {}", values.len()),
        ));
    }
    values
        .iter()
        .map(|t| match *t {
            "0" | "0/1" => Ok(false),
            "1" | "1/1" => Ok(true),
            other => Err(err(line.number, format!("final flag `{other}` is not 0 or 1"))),
        })
        .collect()
}

type ColumnCheck = fn(&[Rational]) -> std::result::Result<(), String>;

pub fn parse_machine(text: &str) -> Result<Machine> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
    });

    let header = lines.next().ok_or_else(|| err(1, "empty automaton file"))?;
    let kind = match header.tokens.as_slice() {
        ["pfa", "v1"] => Kind::Pfa,
        ["afa", "v1"] => Kind::Afa,
        _ => return Err(err(header.number, "expected header `pfa v1` or `afa v1`")),
    };

    let mut states: Option<usize> = None;
    let mut alphabet: Option<(usize, Alphabet)> = None;
    let mut initial: Option<(usize, Vec<Rational>)> = None;
    let mut accepting: Option<Vec<bool>> = None;
    let mut matrices: Vec<Option<(usize, Matrix<Rational>)>> = Vec::new();

    let need_states = |states: Option<usize>, line: usize| {
        states.ok_or_else(|| err(line, "`states` must be declared first"))
    };

    while let Some(line) = lines.next() {
        let n = line.number;
        match line.tokens[0] {
            "states" => {
                if states.is_some() {
                    return Err(err(n, "duplicate `states`"));
                }
                let k = match line.tokens.as_slice() {
                    [_, k] => k.parse::<usize>().map_err(|_| err(n, format!("invalid state count `{k}`")))?,
                    _ => return Err(err(n, "expected `states <count>`")),
                };
                if k == 0 {
                    return Err(err(n, "state count must be positive"));
                }
                states = Some(k);
            }
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(err(n, "duplicate `alphabet`"));
                }
                let a = Alphabet::new(line.tokens[1..].iter().copied()).map_err(|e| at(n, e))?;
                matrices = vec![None; a.len()];
                alphabet = Some((n, a));
            }
            "initial" => {
                let k = need_states(states, n)?;
                if initial.is_some() {
                    return Err(err(n, "duplicate `initial`"));
                }
                let v = parse_vector(&line, k)?;
                let check = match kind {
                    Kind::Pfa => super::check_stochastic_vector(&v).map_err(|r| ("stochastic", r)),
                    Kind::Afa => super::check_affine_vector(&v).map_err(|r| ("affine", r)),
                };
                if let Err((kind, reason)) = check {
                    return Err(at(n, AutomatonError::InitialVector { kind, reason }));
                }
                initial = Some((n, v));
            }
            "final" => {
                let k = need_states(states, n)?;
                if accepting.is_some() {
                    return Err(err(n, "duplicate `final`"));
                }
                accepting = Some(parse_flags(&line, k)?);
            }
            "matrix" => {
                let k = need_states(states, n)?;
                let (_, a) = alphabet
                    .as_ref()
                    .ok_or_else(|| err(n, "`alphabet` must be declared before matrices"))?;
                let symbol = match line.tokens.as_slice() {
                    [_, s] => *s,
                    _ => return Err(err(n, "expected `matrix <symbol>`")),
                };
                let idx = a
                    .index_of(symbol)
                    .ok_or_else(|| err(n, format!("matrix for unknown symbol `{symbol}`")))?;
                if matrices[idx].is_some() {
                    return Err(err(n, format!("duplicate matrix for `{symbol}`")));
                }
                let mut rows = Vec::with_capacity(k);
                let mut last = n;
                for _ in 0..k {
                    let row = lines
                        .next()
                        .ok_or_else(|| err(last + 1, format!("matrix `{symbol}` has fewer than {k} rows")))?;
                    last = row.number;
                    if row.tokens.len() != k {
                        return Err(err(
                            row.number,
                            format!("expected {k} entries, found {}", row.tokens.len()),
                        ));
                    }
                    rows.push(
                        row.tokens
                            .iter()
                            .map(|t| parse_rational(t).map_err(|e| err(row.number, e.to_string())))
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                let m = Matrix::from_rows(rows).map_err(|e| at(n, e.into()))?;
                let (kind_name, check): (_, ColumnCheck) = match kind {
                    Kind::Pfa => ("stochastic", super::check_stochastic_vector),
                    Kind::Afa => ("affine", super::check_affine_vector),
                };
                for col in 0..k {
                    let column: Vec<Rational> = m.column(col).cloned().collect();
                    if let Err(reason) = check(&column) {
                        return Err(at(
                            n,
                            AutomatonError::TransitionMatrix {
                                symbol: symbol.to_string(),
                                kind: kind_name,
                                column: col + 1,
                                reason,
                            },
                        ));
                    }
                }
                matrices[idx] = Some((n, m));
            }
            other => return Err(err(n, format!("unknown directive `{other}`"))),
        }
    }

    let eof = text.lines().count() + 1;
    need_states(states, eof)?;
    let (alpha_line, alphabet) = alphabet.ok_or_else(|| err(eof, "missing `alphabet`"))?;
    let (init_line, initial) = initial.ok_or_else(|| err(eof, "missing `initial`"))?;
    let accepting = accepting.ok_or_else(|| err(eof, "missing `final`"))?;
    let mut transitions = Vec::with_capacity(alphabet.len());
    for (i, m) in matrices.into_iter().enumerate() {
        match m {
            Some((_, m)) => transitions.push(m),
            None => {
                return Err(err(
                    alpha_line,
                    format!("no matrix given for symbol `{}`", alphabet.symbols()[i]),
                ))
            }
        }
    }
    match kind {
        Kind::Pfa => Pfa::new(alphabet, initial, transitions, accepting)
            .map(Machine::Pfa)
            .map_err(|e| at(init_line, e)),
        Kind::Afa => Afa::new(alphabet, initial, transitions, accepting)
            .map(Machine::Afa)
            .map_err(|e| at(init_line, e)),
    }
}

pub(super) fn write_matrix(m: &Matrix<Rational>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(format_rational).collect();
        writeln!(f, "{}", cells.join(" "))?;
    }
    Ok(())
}

pub(super) fn write_machine(machine: &Machine, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let (tag, alphabet, initial, transitions, accepting) = match machine {
        Machine::Pfa(p) => ("pfa", &p.alphabet, &p.initial, &p.transitions, &p.accepting),
        Machine::Afa(a) => ("afa", &a.alphabet, &a.initial, &a.transitions, &a.accepting),
    };
    writeln!(f, "{tag} v1")?;
    writeln!(f, "states {}", initial.len())?;
    writeln!(f, "alphabet {}", alphabet.symbols().join(" "))?;
    let init: Vec<String> = initial.iter().map(format_rational).collect();
    writeln!(f, "initial {}", init.join(" "))?;
    let flags: Vec<&str> = accepting.iter().map(|&b| if b { "1" } else { "0" }).collect();
    writeln!(f, "final {}", flags.join(" "))?;
    for (sym, m) in alphabet.symbols().iter().zip(transitions) {
        writeln!(f, "matrix {sym}")?;
        write_matrix(m, f)?;
    }
    Ok(())
}
