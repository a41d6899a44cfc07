//! METIS graph files and plain partition files.
//!
//! A graph file starts with `n m [fmt [ncon]]` after optional `%` comment
//! lines. `fmt` is a flag string of up to three digits: the last digit
//! enables edge weights, the middle one node weights, the first one vertex
//! sizes (not supported). Line `i` of the body lists the (1-indexed)
//! neighbors of node `i`, preceded by the node weight and each followed by
//! the edge weight when the respective flags are set. `m` counts undirected
//! edges.
//!
//! A partition file has one line per node holding its 0-indexed block.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::{BlockId, Graph, NodeId, Weight};
use crate::error::{Error, Result};

pub fn load_metis(path: impl AsRef<Path>) -> Result<Graph> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    parse_metis(&text)
}

pub fn read_metis(mut reader: impl Read) -> Result<Graph> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_metis(&text)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} '{token}'")))
}

pub fn parse_metis(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('%'));

    let (header_line, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or_else(|| parse_err(1, "missing header"))?;
    let tokens: Vec<&str> = header.split_ascii_whitespace().collect();
    if tokens.len() < 2 || tokens.len() > 4 {
        return Err(parse_err(
            header_line,
            format!("header must hold 2 to 4 fields, found {}", tokens.len()),
        ));
    }
    let n: usize = parse_number(tokens[0], header_line, "node count")?;
    let m: usize = parse_number(tokens[1], header_line, "edge count")?;
    let (has_node_weights, has_edge_weights) = match tokens.get(2) {
        None => (false, false),
        Some(fmt) => parse_fmt(fmt, header_line)?,
    };
    if let Some(ncon) = tokens.get(3) {
        let ncon: usize = parse_number(ncon, header_line, "constraint count")?;
        if ncon != 1 {
            return Err(Error::Unsupported(format!(
                "{ncon} node weights per node (only 1 is supported)"
            )));
        }
    }
    if n > NodeId::MAX as usize {
        return Err(Error::Unsupported(format!(
            "{n} nodes exceed the node ID width"
        )));
    }

    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    let mut adjacency: Vec<NodeId> = Vec::with_capacity(2 * m);
    let mut edge_weights: Vec<Weight> = Vec::with_capacity(2 * m);
    let mut node_weights: Vec<Weight> = Vec::with_capacity(n);

    let mut last_line = header_line;
    for node in 0..n {
        let (line_no, line) = lines.next().ok_or_else(|| {
            parse_err(
                last_line + 1,
                format!("expected {n} node lines, found {node}"),
            )
        })?;
        last_line = line_no;
        let mut tokens = line.split_ascii_whitespace();
        if has_node_weights {
            let w = tokens
                .next()
                .ok_or_else(|| parse_err(line_no, "missing node weight"))?;
            node_weights.push(parse_number(w, line_no, "node weight")?);
        } else {
            node_weights.push(1);
        }
        while let Some(t) = tokens.next() {
            let neighbor: usize = parse_number(t, line_no, "neighbor")?;
            if neighbor == 0 || neighbor > n {
                return Err(parse_err(
                    line_no,
                    format!("neighbor {neighbor} out of range 1..={n}"),
                ));
            }
            let weight = if has_edge_weights {
                let w = tokens.next().ok_or_else(|| {
                    parse_err(line_no, format!("neighbor {neighbor} lacks an edge weight"))
                })?;
                let w: Weight = parse_number(w, line_no, "edge weight")?;
                if w == 0 {
                    return Err(parse_err(line_no, "edge weights must be positive"));
                }
                w
            } else {
                1
            };
            adjacency.push((neighbor - 1) as NodeId);
            edge_weights.push(weight);
        }
        offsets.push(adjacency.len());
    }
    if let Some((line_no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(parse_err(
            line_no,
            format!("unexpected content after {n} node lines"),
        ));
    }

    let entries = adjacency.len();
    let graph = Graph::from_csr(offsets, adjacency, edge_weights, node_weights)?;
    if entries != 2 * m {
        return Err(parse_err(
            header_line,
            format!("header declares {m} edges, body holds {}", entries / 2),
        ));
    }
    Ok(graph)
}

fn parse_fmt(fmt: &str, line: usize) -> Result<(bool, bool)> {
    if fmt.is_empty() || fmt.len() > 3 || !fmt.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(parse_err(line, format!("invalid format flags '{fmt}'")));
    }
    let padded = format!("{fmt:0>3}");
    let flags = padded.as_bytes();
    if flags[0] == b'1' {
        return Err(Error::Unsupported("vertex sizes (fmt 1xx)".into()));
    }
    Ok((flags[1] == b'1', flags[2] == b'1'))
}

/// Writes `g` in METIS format. Weight flags are emitted only when some weight
/// differs from 1.
pub fn write_metis(g: &Graph, writer: impl Write) -> Result<()> {
    let mut out = BufWriter::new(writer);
    let node_weights = g.node_weights().iter().any(|&w| w != 1);
    let edge_weights = g.edge_weights().iter().any(|&w| w != 1);
    write!(out, "{} {}", g.num_nodes(), g.num_edges())?;
    match (node_weights, edge_weights) {
        (false, false) => {}
        (false, true) => write!(out, " 1")?,
        (true, false) => write!(out, " 10")?,
        (true, true) => write!(out, " 11")?,
    }
    writeln!(out)?;
    for v in 0..g.num_nodes() as NodeId {
        let mut first = true;
        let mut sep = |out: &mut BufWriter<_>| -> std::io::Result<()> {
            if !first {
                out.write_all(b" ")?;
            }
            first = false;
            Ok(())
        };
        if node_weights {
            sep(&mut out)?;
            write!(out, "{}", g.node_weight(v))?;
        }
        for (u, w) in g.neighbors(v) {
            sep(&mut out)?;
            write!(out, "{}", u as usize + 1)?;
            if edge_weights {
                write!(out, " {w}")?;
            }
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_metis(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_metis(g, File::create(path)?)
}

pub fn write_partition(labels: &[BlockId], writer: impl Write) -> Result<()> {
    let mut out = BufWriter::new(writer);
    for l in labels {
        writeln!(out, "{l}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_partition(labels: &[BlockId], path: impl AsRef<Path>) -> Result<()> {
    write_partition(labels, File::create(path)?)
}

/// Reads a partition file for a graph with `num_nodes` nodes. A trailing
/// empty line is tolerated; any other line-count difference is an error.
pub fn read_partition(mut reader: impl Read, num_nodes: usize) -> Result<Vec<BlockId>> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let lines: Vec<&str> = text.lines().collect();
    let mut count = lines.len();
    while count > 0 && lines[count - 1].trim().is_empty() {
        count -= 1;
    }
    if count != num_nodes {
        return Err(Error::LineCount {
            expected: num_nodes,
            found: count,
        });
    }
    lines[..count]
        .iter()
        .enumerate()
        .map(|(i, l)| parse_number(l.trim(), i + 1, "block ID"))
        .collect()
}

pub fn load_partition(path: impl AsRef<Path>, num_nodes: usize) -> Result<Vec<BlockId>> {
    read_partition(File::open(path)?, num_nodes)
}
