//! Line-oriented text format for nets.
//!
//! ```text
//! # Wheatstone
//! s 0
//! t 3
//! e 0 1
//! e 0 2
//! ```
//!
//! `s` and `t` name the terminals, each `e` line adds an edge and edges get
//! ids in file order. Blank lines and lines starting with `#` are ignored.
//! Node ids are the integers used in the file; a node exists iff it is
//! mentioned.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::detector::WEmbedding;
use crate::error::ParseError;
use crate::net::{Net, NodeId};

/// Node ids above this are rejected to keep adjacency tables small.
pub const MAX_NODE_ID: usize = 1 << 24;

/// A parsed file before terminals are enforced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetFile {
    pub source: Option<NodeId>,
    pub target: Option<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
    pub nodes: BTreeSet<NodeId>,
}

impl NetFile {
    /// Builds the net for terminals `s` and `t`.
    pub fn to_net_with(&self, s: NodeId, t: NodeId) -> Result<Net, ParseError> {
        let cap = self
            .nodes
            .iter()
            .next_back()
            .map_or(0, |&v| v + 1)
            .max(s.max(t) + 1);
        let mut present = vec![false; cap];
        for &v in &self.nodes {
            present[v] = true;
        }
        present[s] = true;
        present[t] = true;
        Net::from_parts(present, self.edges.iter().map(|&e| Some(e)).collect(), s, t).map_err(|e| {
            ParseError {
                line: 0,
                message: e.to_string(),
            }
        })
    }

    pub fn to_net(&self) -> Result<Net, ParseError> {
        let missing = |what: &str| ParseError {
            line: 0,
            message: format!("missing `{what}` line"),
        };
        let s = self.source.ok_or_else(|| missing("s"))?;
        let t = self.target.ok_or_else(|| missing("t"))?;
        self.to_net_with(s, t)
    }
}

fn parse_id(tok: Option<&str>, line: usize) -> Result<NodeId, ParseError> {
    let err = |message: String| ParseError { line, message };
    let tok = tok.ok_or_else(|| err("missing node id".into()))?;
    let v: NodeId = tok
        .parse()
        .map_err(|_| err(format!("`{tok}` is not a non-negative integer")))?;
    if v > MAX_NODE_ID {
        return Err(err(format!("node id {v} exceeds {MAX_NODE_ID}")));
    }
    Ok(v)
}

/// Parses the text without requiring terminals.
pub fn parse_file(text: &str) -> Result<NetFile, ParseError> {
    let mut f = NetFile {
        source: None,
        target: None,
        edges: Vec::new(),
        nodes: BTreeSet::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut toks = body.split_whitespace();
        let kind = toks.next().expect("nonempty line");
        let err = |message: String| ParseError { line, message };
        match kind {
            "s" | "t" => {
                let v = parse_id(toks.next(), line)?;
                let slot = if kind == "s" {
                    &mut f.source
                } else {
                    &mut f.target
                };
                if slot.is_some() {
                    return Err(err(format!("duplicate `{kind}` line")));
                }
                *slot = Some(v);
                f.nodes.insert(v);
            }
            "e" => {
                let u = parse_id(toks.next(), line)?;
                let v = parse_id(toks.next(), line)?;
                f.edges.push((u, v));
                f.nodes.insert(u);
                f.nodes.insert(v);
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(err(format!("unexpected token `{extra}`")));
        }
    }
    if let (Some(s), Some(t)) = (f.source, f.target) {
        if s == t {
            return Err(ParseError {
                line: 0,
                message: format!("source and target are both {s}"),
            });
        }
    }
    Ok(f)
}

/// Parses a net; both terminals are required.
pub fn parse(text: &str) -> Result<Net, ParseError> {
    parse_file(text)?.to_net()
}

/// Writes `net` in the text format, edges in id order, after `header`
/// comment lines.
pub fn emit(net: &Net, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        for l in h.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = writeln!(out, "s {}", net.source());
    let _ = writeln!(out, "t {}", net.target());
    for e in net.edges() {
        let _ = writeln!(out, "e {} {}", e.tail, e.head);
    }
    out
}

/// A Graphviz rendering; edges of `witness` are drawn bold and coloured.
pub fn to_dot(net: &Net, witness: Option<&WEmbedding>) -> String {
    let mut on_witness = vec![None; net.edge_capacity()];
    if let Some(w) = witness {
        let colored = [
            (&w.ab, "red"),
            (&w.ac, "blue"),
            (&w.bc, "darkgreen"),
            (&w.bd, "blue"),
            (&w.cd, "red"),
            (&w.source_tail, "gray40"),
            (&w.target_tail, "gray40"),
        ];
        for (p, color) in colored {
            for &e in p.edges() {
                on_witness[e] = Some(color);
            }
        }
    }
    let mut out = String::from("digraph net {\n  rankdir=LR;\n");
    for v in net.nodes() {
        let shape = if v == net.source() || v == net.target() {
            "doublecircle"
        } else {
            "circle"
        };
        let label = if v == net.source() {
            format!("s={v}")
        } else if v == net.target() {
            format!("t={v}")
        } else {
            v.to_string()
        };
        let _ = writeln!(out, "  {v} [shape={shape}, label=\"{label}\"];");
    }
    for e in net.edges() {
        match on_witness[e.id] {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "  {} -> {} [label=\"e{}\", color={c}, penwidth=2];",
                    e.tail, e.head, e.id
                );
            }
            None => {
                let _ = writeln!(out, "  {} -> {} [label=\"e{}\"];", e.tail, e.head, e.id);
            }
        }
    }
    out.push_str("}\n");
    out
}
