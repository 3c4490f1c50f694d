//! On-disk forms of a [`ChainComplex`].
//!
//! Single file:
//!
//! ```text
//! chain-complex <max_degree>
//! degree <n> <size>
//! <label>            # one line per generator
//! boundary <n>
//! <rows> <cols>      # matrix fixture block
//! <r> <c> <value>
//! ```
//!
//! Directory: `labels<n>.txt` (one label per line) for `n = 0, 1, …` up to the
//! first missing file, and `d<n>.txt` in the matrix fixture format. A missing
//! `d<n>.txt` means `d_n = 0`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::ChainComplex;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

pub fn to_complex_text(c: &ChainComplex) -> String {
    let mut out = format!("chain-complex {}\n", c.max_degree());
    for n in 0..=c.max_degree() {
        let _ = writeln!(out, "degree {n} {}", c.basis_size(n));
        for l in c.labels(n) {
            out.push_str(l);
            out.push('\n');
        }
    }
    for n in 1..=c.max_degree() {
        let _ = writeln!(out, "boundary {n}");
        out.push_str(&c.boundary(n).to_fixture_string());
    }
    out
}

fn keyword_args<'a>(line: &'a str, keyword: &str) -> Option<Vec<&'a str>> {
    let mut parts = line.split_whitespace();
    (parts.next() == Some(keyword)).then(|| parts.collect())
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("bad count `{s}`")))
}

pub fn parse_complex_text(text: &str) -> Result<ChainComplex> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let mut pos = 0;
    let (hl, header) = *lines
        .first()
        .ok_or_else(|| Error::parse(1, "empty complex file"))?;
    let max_degree = match keyword_args(header, "chain-complex").as_deref() {
        Some([d]) => parse_usize(d, hl)?,
        _ => return Err(Error::parse(hl, "expected `chain-complex <max_degree>`")),
    };
    pos += 1;

    let mut labels: Vec<Vec<String>> = Vec::with_capacity(max_degree + 1);
    for n in 0..=max_degree {
        let (ln, line) = *lines
            .get(pos)
            .ok_or_else(|| Error::parse(hl, format!("missing `degree {n}` section")))?;
        let size = match keyword_args(line, "degree").as_deref() {
            Some([d, k]) if parse_usize(d, ln)? == n => parse_usize(k, ln)?,
            _ => return Err(Error::parse(ln, format!("expected `degree {n} <size>`"))),
        };
        pos += 1;
        let mut ls = Vec::with_capacity(size);
        for _ in 0..size {
            let (_, l) = *lines
                .get(pos)
                .ok_or_else(|| Error::parse(ln, format!("degree {n} lists fewer than {size} labels")))?;
            ls.push(l.to_string());
            pos += 1;
        }
        labels.push(ls);
    }

    let mut boundaries: Vec<Option<IntMatrix>> = vec![None; max_degree];
    while pos < lines.len() {
        let (ln, line) = lines[pos];
        let n = match keyword_args(line, "boundary").as_deref() {
            Some([d]) => parse_usize(d, ln)?,
            _ => return Err(Error::parse(ln, "expected `boundary <n>`")),
        };
        if n == 0 || n > max_degree {
            return Err(Error::parse(ln, format!("boundary degree {n} out of range")));
        }
        if boundaries[n - 1].is_some() {
            return Err(Error::parse(ln, format!("duplicate boundary {n}")));
        }
        pos += 1;
        let start = pos;
        while pos < lines.len() && !lines[pos].1.starts_with("boundary") {
            pos += 1;
        }
        let block: String = lines[start..pos]
            .iter()
            .map(|(_, l)| format!("{l}\n"))
            .collect();
        let m = IntMatrix::parse_fixture(&block).map_err(|e| match e {
            Error::Parse { line, message } => {
                let abs = lines.get(start + line - 1).map_or(ln, |(l, _)| *l);
                Error::parse(abs, message)
            }
            other => other,
        })?;
        boundaries[n - 1] = Some(m);
    }

    let boundaries = boundaries
        .into_iter()
        .enumerate()
        .map(|(k, m)| m.unwrap_or_else(|| IntMatrix::zeros(labels[k].len(), labels[k + 1].len())))
        .collect();
    ChainComplex::new(labels, boundaries)
}

fn prefix_file(e: Error, file: &Path) -> Error {
    match e {
        Error::Parse { line, message } => Error::parse(line, format!("{}: {message}", file.display())),
        other => other,
    }
}

fn read_dir_complex(dir: &Path) -> Result<ChainComplex> {
    let mut labels = Vec::new();
    loop {
        let p = dir.join(format!("labels{}.txt", labels.len()));
        if !p.exists() {
            break;
        }
        let text = fs::read_to_string(&p)?;
        labels.push(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from)
                .collect::<Vec<_>>(),
        );
    }
    if labels.is_empty() {
        return Err(Error::invalid(format!(
            "{} has no labels0.txt",
            dir.display()
        )));
    }
    let mut boundaries = Vec::new();
    for n in 1..labels.len() {
        let p = dir.join(format!("d{n}.txt"));
        let m = if p.exists() {
            IntMatrix::parse_fixture(&fs::read_to_string(&p)?).map_err(|e| prefix_file(e, &p))?
        } else {
            IntMatrix::zeros(labels[n - 1].len(), labels[n].len())
        };
        boundaries.push(m);
    }
    ChainComplex::new(labels, boundaries)
}

/// Reads either serialization; directories use the per-file layout.
pub fn read_complex(path: &Path) -> Result<ChainComplex> {
    if path.is_dir() {
        read_dir_complex(path)
    } else {
        parse_complex_text(&fs::read_to_string(path)?).map_err(|e| prefix_file(e, path))
    }
}

pub fn write_complex_dir(c: &ChainComplex, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for n in 0..=c.max_degree() {
        let mut text = String::new();
        for l in c.labels(n) {
            text.push_str(l);
            text.push('\n');
        }
        fs::write(dir.join(format!("labels{n}.txt")), text)?;
    }
    for n in 1..=c.max_degree() {
        fs::write(dir.join(format!("d{n}.txt")), c.boundary(n).to_fixture_string())?;
    }
    Ok(())
}
