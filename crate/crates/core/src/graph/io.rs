//! Plain-text edge-list formats.
//!
//! TG3 (tripartite):
//!
//! ```text
//! TG3 1 n=<n>
//! [12]
//! <i> <j>
//! [13]
//! ...
//! [23]
//! ...
//! ```
//!
//! BG2 (bipartite): a `BG2 1 nl=<nL> nr=<nR>` header followed by `<i> <j>`
//! lines. Indices are 0-based within each part; `#` lines are comments.
//! The encoder omits empty sections, so an edgeless graph is a header-only file.

use std::fmt::Write;

use super::{BipartiteGraph, Layer, TripartiteGraph};
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n').enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header_field(line: usize, token: Option<&str>, key: &str) -> Result<usize> {
    let tok = token.ok_or_else(|| perr(line, format!("missing `{key}=` field")))?;
    let value = tok
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected `{key}=<int>`, found `{tok}`")))?;
    let v: usize = value.parse().map_err(|_| perr(line, format!("bad integer `{value}`")))?;
    if v == 0 {
        return Err(perr(line, format!("{key} must be positive")));
    }
    Ok(v)
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    magic: &str,
    keys: &[&str],
) -> Result<Vec<usize>> {
    let (no, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some(magic) {
        return Err(perr(no, format!("expected `{magic}` header")));
    }
    if toks.next() != Some("1") {
        return Err(perr(no, "unsupported format version"));
    }
    let values = keys.iter().map(|k| header_field(no, toks.next(), k)).collect::<Result<Vec<_>>>()?;
    if let Some(extra) = toks.next() {
        return Err(perr(no, format!("unexpected token `{extra}` in header")));
    }
    Ok(values)
}

fn parse_edge(line: usize, text: &str, n_left: usize, n_right: usize) -> Result<(usize, usize)> {
    let mut toks = text.split_whitespace();
    let mut next = |bound: usize| -> Result<usize> {
        let tok = toks.next().ok_or_else(|| perr(line, "expected `<i> <j>`"))?;
        let v: usize = tok.parse().map_err(|_| perr(line, format!("bad index `{tok}`")))?;
        if v >= bound {
            return Err(perr(line, format!("index {v} out of range (part size {bound})")));
        }
        Ok(v)
    };
    let i = next(n_left)?;
    let j = next(n_right)?;
    if toks.next().is_some() {
        return Err(perr(line, "trailing tokens after edge"));
    }
    Ok((i, j))
}

pub fn encode_tg3(g: &TripartiteGraph) -> String {
    let mut out = format!("TG3 1 n={}\n", g.n());
    for l in Layer::ALL {
        let layer = g.layer(l);
        if layer.edge_count() == 0 {
            continue;
        }
        writeln!(out, "[{}]", l.label()).unwrap();
        for (i, j) in layer.edges() {
            writeln!(out, "{i} {j}").unwrap();
        }
    }
    out
}

pub fn decode_tg3(text: &str) -> Result<TripartiteGraph> {
    let mut lines = content_lines(text);
    let n = parse_header(&mut lines, "TG3", &["n"])?[0];
    let mut g = TripartiteGraph::new(n);
    let mut seen = [false; 3];
    let mut current: Option<Layer> = None;
    for (no, line) in lines {
        if let Some(label) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let layer = match label {
                "12" => Layer::L12,
                "13" => Layer::L13,
                "23" => Layer::L23,
                "11" | "22" | "33" => {
                    return Err(perr(no, format!("section [{label}] would place edges inside a part")))
                }
                _ => return Err(perr(no, format!("unknown section [{label}]"))),
            };
            if std::mem::replace(&mut seen[layer as usize], true) {
                return Err(perr(no, format!("section [{label}] repeated")));
            }
            current = Some(layer);
            continue;
        }
        let layer = current.ok_or_else(|| perr(no, "edge before any section marker"))?;
        let (i, j) = parse_edge(no, line, n, n)?;
        if !g.add_edge(layer, i, j) {
            return Err(perr(no, format!("duplicate edge {i} {j}")));
        }
    }
    Ok(g)
}

pub fn encode_bg2(b: &BipartiteGraph) -> String {
    let mut out = format!("BG2 1 nl={} nr={}\n", b.n_left(), b.n_right());
    for (i, j) in b.edges() {
        writeln!(out, "{i} {j}").unwrap();
    }
    out
}

pub fn decode_bg2(text: &str) -> Result<BipartiteGraph> {
    let mut lines = content_lines(text);
    let sizes = parse_header(&mut lines, "BG2", &["nl", "nr"])?;
    let (nl, nr) = (sizes[0], sizes[1]);
    let mut b = BipartiteGraph::new(nl, nr);
    for (no, line) in lines {
        let (i, j) = parse_edge(no, line, nl, nr)?;
        if !b.add_edge(i, j) {
            return Err(perr(no, format!("duplicate edge {i} {j}")));
        }
    }
    Ok(b)
}
