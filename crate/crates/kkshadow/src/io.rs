//! Text formats for families and hypergraphs, and JSON helpers.
//!
//! A family file is a header line `n k` followed by one set per line as
//! comma-separated 1-based elements. A hypergraph file has the header `n`
//! and one edge per line. Blank lines and lines starting with `#` are
//! ignored.

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::setfam::{elems, mask, KSetFamily};
use num_bigint::BigInt;
use serde::Serializer;

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, msg: msg.into() })
}

// (1-based line number, trimmed content) of every meaningful line
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.trim().parse().or_else(|_| parse_err(line, format!("{what}: expected a non-negative integer, got {tok:?}")))
}

fn parse_set(line: usize, s: &str, n: usize) -> Result<u64> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let e = parse_usize(line, tok, "element")?;
        if e == 0 || e > n {
            return parse_err(line, format!("element {e} outside [1, {n}]"));
        }
        if out.contains(&e) {
            return parse_err(line, format!("element {e} repeated"));
        }
        out.push(e);
    }
    Ok(mask(&out))
}

fn check_header(line: usize, n: usize) -> Result<()> {
    crate::setfam::check_n(n).map_err(|e| Error::Parse { line, msg: e.to_string() })
}

pub fn parse_family(text: &str) -> Result<KSetFamily> {
    let mut it = lines(text);
    let Some((ln, header)) = it.next() else { return parse_err(1, "missing header \"n k\"") };
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return parse_err(ln, format!("header must be \"n k\", got {header:?}"));
    }
    let n = parse_usize(ln, toks[0], "n")?;
    let k = parse_usize(ln, toks[1], "k")?;
    check_header(ln, n)?;
    let mut sets = Vec::new();
    for (ln, l) in it {
        let s = parse_set(ln, l, n)?;
        if s.count_ones() as usize != k {
            return parse_err(ln, format!("set has {} elements, expected {k}", s.count_ones()));
        }
        if sets.contains(&s) {
            return parse_err(ln, "duplicate set");
        }
        sets.push(s);
    }
    KSetFamily::new(n, k, sets).map_err(|e| Error::Parse { line: ln, msg: e.to_string() })
}

pub fn format_family(s: &KSetFamily) -> String {
    let mut out = format!("{} {}\n", s.n, s.k);
    for &x in s.sets() {
        out.push_str(&format_set(x));
        out.push('\n');
    }
    out
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut it = lines(text);
    let Some((ln, header)) = it.next() else { return parse_err(1, "missing header \"n\"") };
    let n = parse_usize(ln, header, "n")?;
    check_header(ln, n)?;
    let mut edges = Vec::new();
    for (ln, l) in it {
        let e = parse_set(ln, l, n)?;
        if edges.contains(&e) {
            return parse_err(ln, "duplicate edge");
        }
        edges.push(e);
    }
    let h = Hypergraph::new(n, edges).map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?;
    if !h.is_antichain() {
        return parse_err(ln, "edges do not form an antichain");
    }
    Ok(h)
}

pub fn format_hypergraph(h: &Hypergraph) -> String {
    let mut out = format!("{}\n", h.n);
    for &e in &h.edges {
        out.push_str(&format_set(e));
        out.push('\n');
    }
    out
}

pub fn format_set(x: u64) -> String {
    elems(x).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

/// Serializes a big integer as a decimal string.
pub fn big_str<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn big_vec_str<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}
