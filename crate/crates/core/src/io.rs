//! Text formats: matrix, function, table and witness files.
//!
//! All formats are line oriented. Blank lines and lines starting with `#`
//! are ignored; line numbers in errors count every physical line. Words
//! are digit strings (comma-separated integers above nine symbols) and
//! the empty word is written `-`.

use std::sync::Arc;

use crate::coe::{Coder, CoeWitness, Stage};
use crate::error::{Error, Result};
use crate::group::TableHomeo;
use crate::sft::{Sft, Word};
use crate::step::StepFunction;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Attaches a line number to word-level parse errors.
fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { line: 0, msg } => Error::Parse { line, msg },
        other => other,
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn render_word(sft: &Sft, w: &[u8]) -> String {
    if w.is_empty() {
        "-".to_string()
    } else {
        sft.format_word(w)
    }
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { items: content_lines(text).collect(), pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.items.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.peek();
        self.pos += 1;
        item
    }

    fn last_line(&self) -> usize {
        self.items.last().map_or(0, |(n, _)| *n)
    }

    fn matrix(&mut self) -> Result<Sft> {
        let (line, head) = self.next().ok_or_else(|| parse_err(self.last_line(), "missing matrix size"))?;
        let n: usize = head.parse().map_err(|_| parse_err(line, format!("bad matrix size {head:?}")))?;
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let (line, text) = self
                .next()
                .ok_or_else(|| parse_err(self.last_line(), format!("matrix has {r} of {n} rows")))?;
            let row: Vec<i64> = text
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad entry {t:?}"))))
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(parse_err(line, format!("row has {} entries, expected {n}", row.len())));
            }
            rows.push(row);
        }
        Sft::validate(&rows)
    }

    /// `<a> <b>` word pairs up to the next line that is not a pair.
    fn pairs(&mut self, src: &Sft, dst: &Sft) -> Result<Vec<(Word, Word)>> {
        let mut out = Vec::new();
        while let Some((line, text)) = self.peek() {
            let mut parts = text.split_whitespace();
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else { break };
            if a == "stage" {
                break;
            }
            let a = src.parse_word(a).map_err(|e| at_line(line, e))?;
            let b = dst.parse_word(b).map_err(|e| at_line(line, e))?;
            out.push((a, b));
            self.pos += 1;
        }
        Ok(out)
    }
}

/// `n`, then `n` rows of `0`/`1` entries.
pub fn parse_matrix(text: &str) -> Result<Sft> {
    let mut lines = Lines::new(text);
    let sft = lines.matrix()?;
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "trailing content after matrix"));
    }
    Ok(sft)
}

pub fn render_matrix(sft: &Sft) -> String {
    let mut s = format!("{}\n", sft.size());
    for row in sft.matrix() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

/// `depth d`, then one `<word> <value>` line per admissible depth-`d` word
/// in lexicographic order.
pub fn parse_function(sft: &Arc<Sft>, text: &str) -> Result<StepFunction> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.next().ok_or_else(|| parse_err(0, "empty function file"))?;
    let depth: usize = head
        .strip_prefix("depth")
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected \"depth <d>\", got {head:?}")))?;
    let mut entries: Vec<(Word, i64)> = Vec::new();
    while let Some((line, text)) = lines.next() {
        let mut parts = text.split_whitespace();
        let (Some(w), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(parse_err(line, format!("expected \"<word> <integer>\", got {text:?}")));
        };
        let w = sft.parse_word(w).map_err(|e| at_line(line, e))?;
        let v: i64 = v.parse().map_err(|_| parse_err(line, format!("bad integer {v:?}")))?;
        if let Some((prev, _)) = entries.last() {
            if *prev >= w {
                return Err(parse_err(line, "words are not in strictly increasing lexicographic order"));
            }
        }
        entries.push((w, v));
    }
    StepFunction::new(sft, depth, entries)
}

/// One `<src> <dst>` line per pair.
pub fn parse_table(sft: &Arc<Sft>, text: &str) -> Result<TableHomeo> {
    let mut lines = Lines::new(text);
    let pairs = lines.pairs(sft, sft)?;
    if let Some((line, text)) = lines.next() {
        return Err(parse_err(line, format!("expected \"<src> <dst>\", got {text:?}")));
    }
    TableHomeo::new(sft, pairs)
}

/// ```text
/// source
/// <matrix>
/// target
/// <matrix>
/// stage coder [into]
/// [<matrix>]
/// <in> <out>
/// ...
/// stage table
/// <src> <dst>
/// ...
/// ```
/// A coder maps into the witness target unless `into` gives an
/// intermediate matrix; a table acts on the current space.
pub fn parse_witness(text: &str) -> Result<CoeWitness> {
    let mut lines = Lines::new(text);
    let header = |lines: &mut Lines, name: &str| -> Result<Arc<Sft>> {
        match lines.next() {
            Some((_, l)) if l == name => Ok(Arc::new(lines.matrix()?)),
            Some((line, l)) => Err(parse_err(line, format!("expected {name:?}, got {l:?}"))),
            None => Err(parse_err(0, format!("missing {name:?} section"))),
        }
    };
    let source = header(&mut lines, "source")?;
    let target = header(&mut lines, "target")?;
    let mut stages = Vec::new();
    let mut current = Arc::clone(&source);
    while let Some((line, text)) = lines.next() {
        let words: Vec<&str> = text.split_whitespace().collect();
        match words.as_slice() {
            ["stage", "table"] => {
                let pairs = lines.pairs(&current, &current)?;
                stages.push(Stage::Table(TableHomeo::new(&current, pairs)?));
            }
            ["stage", "coder", rest @ ..] => {
                let next = match rest {
                    [] => Arc::clone(&target),
                    ["into"] => Arc::new(lines.matrix()?),
                    _ => return Err(parse_err(line, format!("unknown stage header {text:?}"))),
                };
                let pairs = lines.pairs(&current, &next)?;
                stages.push(Stage::Coder(Coder::new(&current, &next, pairs)?));
                current = next;
            }
            _ => return Err(parse_err(line, format!("expected a stage header, got {text:?}"))),
        }
    }
    CoeWitness::new(&source, &target, stages)
}

pub fn render_witness(h: &CoeWitness) -> String {
    let mut s = format!("source\n{}target\n{}", render_matrix(h.source()), render_matrix(h.target()));
    let last = h.stages().len() - 1;
    for (i, st) in h.stages().iter().enumerate() {
        match st {
            Stage::Table(t) => {
                s.push_str("stage table\n");
                s.push_str(&t.render());
            }
            Stage::Coder(c) => {
                if i == last && c.target() == h.target() {
                    s.push_str("stage coder\n");
                } else {
                    s.push_str(&format!("stage coder into\n{}", render_matrix(c.target())));
                }
                for (a, b) in c.pairs() {
                    s.push_str(&format!("{} {}\n", render_word(c.source(), a), render_word(c.target(), b)));
                }
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = "2\n1 1\n1 0\n";
    const WITNESS: &str = "source\n2\n1 1\n1 0\ntarget\n2\n1 1\n1 1\nstage coder\n1 1\n21 2\n";

    #[test]
    fn matrix_round_trip() {
        let g = parse_matrix(GOLDEN).unwrap();
        assert_eq!(g, Sft::golden_mean());
        assert_eq!(render_matrix(&g), GOLDEN);
        assert!(matches!(parse_matrix("2\n1 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_matrix("2\n1 1\n1 x\n"), Err(Error::Parse { line: 3, .. })));
        assert_eq!(parse_matrix("2\n1 2\n1 0\n"), Err(Error::NotZeroOne { row: 1, col: 2, value: 2 }));
        assert!(matches!(parse_matrix(&format!("{GOLDEN}1\n")), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn function_files() {
        let g = Arc::new(Sft::golden_mean());
        let f = parse_function(&g, "# comment\ndepth 1\n1 3\n2 5\n").unwrap();
        assert_eq!(f.render(), "depth 1\n1 3\n2 5\n");
        assert_eq!(parse_function(&g, &f.render()).unwrap(), f);
        assert_eq!(parse_function(&g, "depth 0\n- 4\n").unwrap().constant_value(), Some(4));
        assert!(matches!(parse_function(&g, "depth 1\n2 5\n1 3\n"), Err(Error::Parse { line: 3, .. })));
        assert_eq!(parse_function(&g, "depth 2\n11 1\n12 1\n"), Err(Error::MissingWord("21".into())));
        assert!(matches!(parse_function(&g, "depth 1\n1 3\n3 5\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn table_files() {
        let full = Arc::new(Sft::full_shift(2));
        let t = parse_table(&full, "12 2\n2 12\n11 11\n").unwrap();
        assert_eq!(t, TableHomeo::gen_swap(&full, 1, 2, 1).unwrap());
        assert_eq!(parse_table(&full, &t.render()).unwrap(), t);
        assert!(parse_table(&full, "- -\n").unwrap().is_identity());
        assert!(matches!(parse_table(&full, "12 2 3\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn witness_files() {
        let h = parse_witness(WITNESS).unwrap();
        assert_eq!(render_witness(&h), WITNESS);
        let g = Arc::new(Sft::golden_mean());
        let full = Arc::new(Sft::full_shift(2));
        let chain = format!(
            "source\n{GOLDEN}target\n2\n1 1\n1 1\nstage table\n{}stage coder into\n2\n1 1\n1 1\n1 1\n21 2\nstage table\n{}",
            TableHomeo::gen_swap(&g, 1, 2, 2).unwrap().render(),
            TableHomeo::gen_swap(&full, 1, 2, 1).unwrap().render()
        );
        let h = parse_witness(&chain).unwrap();
        assert_eq!(h.stages().len(), 3);
        assert_eq!(parse_witness(&render_witness(&h)).unwrap(), h);
        assert_eq!(**h.source(), *g);
        assert!(matches!(parse_witness("target\n"), Err(Error::Parse { line: 1, .. })));
        let bad = WITNESS.replace("21 2", "21 1");
        assert_eq!(parse_witness(&bad).unwrap_err().name(), "InverseInvalid");
    }
}
