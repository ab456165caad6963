//! Line-oriented text formats for trees, strategies, and traces.
//!
//! Tree files: `tree <vertex-count> <color-count>`, then `e <u> <v>
//! <color>` per edge and optional `label <vertex> <name>` lines. Strategy
//! files: `searchers <k>`, one `color <searcher> <color>` line per
//! searcher, then `place`/`remove`/`slide` moves. `#` starts a comment in
//! both. Emission is canonical, so emit, parse, emit round-trips are
//! byte-identical.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{GraphError, LabeledGraph};
use crate::sim::{Move, SearcherAssignment, Strategy, Trace};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// Split a line into tokens, dropping anything after `#`.
fn tokens(line: &str) -> Vec<&str> {
    line.split('#').next().unwrap_or("").split_whitespace().collect()
}

fn parse_num(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("bad {what}: {tok:?}")))
}

/// Parse a tree file. Graphs with cycles are accepted (the keyword names
/// the format, not a constraint); tree-only operations check `is_tree`
/// themselves.
pub fn parse_tree(text: &str) -> Result<LabeledGraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut labels: Vec<(usize, String, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let t = tokens(raw);
        if t.is_empty() {
            continue;
        }
        match t[0] {
            "tree" => {
                if header.is_some() {
                    return Err(syntax(ln, "duplicate header"));
                }
                if t.len() != 3 {
                    return Err(syntax(ln, "expected: tree <vertex-count> <color-count>"));
                }
                header = Some((
                    parse_num(t[1], ln, "vertex count")?,
                    parse_num(t[2], ln, "color count")?,
                ));
            }
            "e" => {
                if header.is_none() {
                    return Err(syntax(ln, "edge before header"));
                }
                if t.len() != 4 {
                    return Err(syntax(ln, "expected: e <u> <v> <color>"));
                }
                edges.push((
                    parse_num(t[1], ln, "vertex")?,
                    parse_num(t[2], ln, "vertex")?,
                    parse_num(t[3], ln, "color")?,
                    ln,
                ));
            }
            "label" => {
                if t.len() != 3 {
                    return Err(syntax(ln, "expected: label <vertex> <name>"));
                }
                labels.push((parse_num(t[1], ln, "vertex")?, t[2].to_string(), ln));
            }
            other => return Err(syntax(ln, format!("unknown directive {other:?}"))),
        }
    }
    let (vc, cc) = header.ok_or_else(|| syntax(text.lines().count().max(1), "missing header"))?;
    for &(_, _, c, ln) in &edges {
        if c >= cc {
            return Err(syntax(ln, format!("color {c} exceeds declared count {cc}")));
        }
    }
    let plain: Vec<(usize, usize, usize)> = edges.iter().map(|&(u, v, c, _)| (u, v, c)).collect();
    let first_edge_line = edges.first().map(|&(_, _, _, ln)| ln).unwrap_or(1);
    let mut g = LabeledGraph::new_graph(vc, plain).map_err(|e| ParseError::Graph {
        line: first_edge_line,
        source: e,
    })?;
    g.set_color_count(cc);
    for (v, name, ln) in labels {
        g.add_label(&name, v).map_err(|e| ParseError::Graph { line: ln, source: e })?;
    }
    Ok(g)
}

/// Canonical tree file text: header, edges in id order, labels sorted by
/// vertex then name.
pub fn emit_tree(g: &LabeledGraph) -> String {
    let mut out = String::new();
    writeln!(out, "tree {} {}", g.vertex_count(), g.color_count()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {} {}", e.u, e.v, e.color).unwrap();
    }
    let mut labels: Vec<(usize, &str)> = g.labels().iter().map(|(n, &v)| (v, n.as_str())).collect();
    labels.sort();
    for (v, name) in labels {
        writeln!(out, "label {v} {name}").unwrap();
    }
    out
}

pub fn parse_strategy(text: &str) -> Result<Strategy, ParseError> {
    let mut k: Option<usize> = None;
    let mut colors: Vec<Option<usize>> = Vec::new();
    let mut moves = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let t = tokens(raw);
        if t.is_empty() {
            continue;
        }
        match t[0] {
            "searchers" => {
                if k.is_some() {
                    return Err(syntax(ln, "duplicate searchers line"));
                }
                if t.len() != 2 {
                    return Err(syntax(ln, "expected: searchers <k>"));
                }
                let n = parse_num(t[1], ln, "searcher count")?;
                k = Some(n);
                colors = vec![None; n];
            }
            "color" => {
                if k.is_none() {
                    return Err(syntax(ln, "color before searchers line"));
                }
                if t.len() != 3 {
                    return Err(syntax(ln, "expected: color <searcher> <color>"));
                }
                let s = parse_num(t[1], ln, "searcher id")?;
                let c = parse_num(t[2], ln, "color")?;
                if s >= colors.len() {
                    return Err(syntax(ln, format!("searcher {s} out of range")));
                }
                if colors[s].is_some() {
                    return Err(syntax(ln, format!("searcher {s} colored twice")));
                }
                colors[s] = Some(c);
            }
            "place" | "remove" => {
                if t.len() != 3 {
                    return Err(syntax(ln, format!("expected: {} <searcher> <vertex>", t[0])));
                }
                let s = parse_num(t[1], ln, "searcher id")?;
                let v = parse_num(t[2], ln, "vertex")?;
                moves.push(if t[0] == "place" {
                    Move::Place { s, v }
                } else {
                    Move::Remove { s, v }
                });
            }
            "slide" => {
                if t.len() != 4 {
                    return Err(syntax(ln, "expected: slide <searcher> <from> <to>"));
                }
                moves.push(Move::Slide {
                    s: parse_num(t[1], ln, "searcher id")?,
                    from: parse_num(t[2], ln, "vertex")?,
                    to: parse_num(t[3], ln, "vertex")?,
                });
            }
            other => return Err(syntax(ln, format!("unknown directive {other:?}"))),
        }
    }
    let last = text.lines().count().max(1);
    if k.is_none() {
        return Err(syntax(last, "missing searchers line"));
    }
    let mut assigned = Vec::with_capacity(colors.len());
    for (s, c) in colors.iter().enumerate() {
        match c {
            Some(c) => assigned.push(*c),
            None => return Err(syntax(last, format!("searcher {s} has no color line"))),
        }
    }
    Ok(Strategy {
        assignment: SearcherAssignment::new(assigned),
        moves,
    })
}

pub fn emit_strategy(s: &Strategy) -> String {
    let mut out = String::new();
    writeln!(out, "searchers {}", s.assignment.searcher_count()).unwrap();
    for (i, c) in s.assignment.colors.iter().enumerate() {
        writeln!(out, "color {i} {c}").unwrap();
    }
    for mv in &s.moves {
        match *mv {
            Move::Place { s, v } => writeln!(out, "place {s} {v}").unwrap(),
            Move::Remove { s, v } => writeln!(out, "remove {s} {v}").unwrap(),
            Move::Slide { s, from, to } => writeln!(out, "slide {s} {from} {to}").unwrap(),
        }
    }
    out
}

/// One line per move (`<i> <clean-size> recontaminated=<n>`, 1-based) and
/// a final summary line.
pub fn render_trace(graph: &LabeledGraph, trace: &Trace) -> String {
    let mut out = String::new();
    for (i, step) in trace.steps.iter().enumerate() {
        writeln!(
            out,
            "{} {} recontaminated={}",
            i + 1,
            step.clean_size,
            step.recontaminated.len()
        )
        .unwrap();
    }
    writeln!(
        out,
        "result={} searchers={} unit_recontaminations={} monotone={} connected={}",
        if trace.success { "success" } else { "failure" },
        trace.searcher_count,
        trace.unit_recontaminations,
        crate::sim::is_monotone(trace),
        crate::sim::is_connected_trace(graph, trace),
    )
    .unwrap();
    out
}
