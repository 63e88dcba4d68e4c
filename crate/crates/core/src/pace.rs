//! Readers and writers for the PACE text formats: `.gr` graphs
//! (`p tw <n> <m>` header plus one line per edge) and `.td` tree
//! decompositions (`s td <bags> <max-bag-size> <n>` header, `b` lines,
//! then tree edges). Vertices and bag ids are 1-indexed on disk and
//! 0-indexed in memory; conversion happens only here.
//!
//! Writers emit a canonical form — LF line endings, single spaces, no
//! comments, edges sorted ascending — so `parse(write(x)) == x` and a
//! parsed canonical file is reproduced byte for byte.

use std::fmt::Write as _;

use thiserror::Error;

use crate::decomp::TreeDecomposition;
use crate::model::{Graph, GraphError};

/// Parse failure with the 1-indexed source line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// Non-comment, non-blank lines paired with their 1-indexed position.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('c'))
}

fn parse_fields(line_no: usize, line: &str, expected: usize) -> Result<Vec<usize>, ParseError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != expected {
        return Err(ParseError::new(
            line_no,
            format!("expected {expected} fields, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>()
                .map_err(|_| ParseError::new(line_no, format!("invalid number {f:?}")))
        })
        .collect()
}

fn to_zero_indexed(line_no: usize, value: usize, max: usize, what: &str) -> Result<usize, ParseError> {
    if value == 0 || value > max {
        return Err(ParseError::new(
            line_no,
            format!("{what} {value} out of range 1..={max}"),
        ));
    }
    Ok(value - 1)
}

/// Reads a `.gr` graph file.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "missing problem line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "p" || fields[1] != "tw" {
        return Err(ParseError::new(header_no, "expected header \"p tw <n> <m>\""));
    }
    let n: usize = fields[2]
        .parse()
        .map_err(|_| ParseError::new(header_no, format!("invalid vertex count {:?}", fields[2])))?;
    let m: usize = fields[3]
        .parse()
        .map_err(|_| ParseError::new(header_no, format!("invalid edge count {:?}", fields[3])))?;

    let mut g = Graph::new(n);
    let mut edges_seen = 0usize;
    for (line_no, line) in lines {
        if edges_seen == m {
            return Err(ParseError::new(
                line_no,
                format!("unexpected extra line after {m} edges"),
            ));
        }
        let nums = parse_fields(line_no, line, 2)?;
        let u = to_zero_indexed(line_no, nums[0], n, "vertex")?;
        let v = to_zero_indexed(line_no, nums[1], n, "vertex")?;
        g.add_edge(u, v).map_err(|e| match e {
            GraphError::SelfLoop { .. } => ParseError::new(line_no, "self-loop edge"),
            GraphError::DuplicateEdge { .. } => ParseError::new(line_no, "duplicate edge"),
            GraphError::VertexOutOfRange { .. } => unreachable!("range-checked above"),
        })?;
        edges_seen += 1;
    }
    if edges_seen != m {
        return Err(ParseError::new(
            text.lines().count().max(1),
            format!("header promised {m} edges, found {edges_seen}"),
        ));
    }
    Ok(g)
}

/// Writes a graph in canonical `.gr` form.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "p tw {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Reads a `.td` file; returns the decomposition and the vertex count
/// declared in its header.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize), ParseError> {
    let mut lines = content_lines(text);
    let (header_no, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "missing solution line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "s" || fields[1] != "td" {
        return Err(ParseError::new(
            header_no,
            "expected header \"s td <bags> <max-bag-size> <n>\"",
        ));
    }
    let parse_num = |idx: usize, what: &str| -> Result<usize, ParseError> {
        fields[idx]
            .parse::<usize>()
            .map_err(|_| ParseError::new(header_no, format!("invalid {what} {:?}", fields[idx])))
    };
    let num_bags = parse_num(2, "bag count")?;
    let declared_max = parse_num(3, "max bag size")?;
    let n = parse_num(4, "vertex count")?;

    let mut bags: Vec<Option<Vec<usize>>> = vec![None; num_bags];
    let mut edges = Vec::new();
    for (line_no, line) in lines {
        if let Some(rest) = line.strip_prefix("b ").or(if line == "b" { Some("") } else { None }) {
            let mut nums = rest.split_whitespace();
            let id_text = nums
                .next()
                .ok_or_else(|| ParseError::new(line_no, "bag line without an id"))?;
            let id = id_text
                .parse::<usize>()
                .map_err(|_| ParseError::new(line_no, format!("invalid bag id {id_text:?}")))?;
            let id = to_zero_indexed(line_no, id, num_bags, "bag id")?;
            if bags[id].is_some() {
                return Err(ParseError::new(line_no, format!("bag {} defined twice", id + 1)));
            }
            let mut bag = Vec::new();
            for v_text in nums {
                let v = v_text.parse::<usize>().map_err(|_| {
                    ParseError::new(line_no, format!("invalid vertex {v_text:?}"))
                })?;
                bag.push(to_zero_indexed(line_no, v, n, "vertex")?);
            }
            bags[id] = Some(bag);
        } else {
            let nums = parse_fields(line_no, line, 2)?;
            let a = to_zero_indexed(line_no, nums[0], num_bags, "bag id")?;
            let b = to_zero_indexed(line_no, nums[1], num_bags, "bag id")?;
            edges.push((a, b));
        }
    }
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| ParseError::new(text.lines().count().max(1), format!("bag {} never defined", i + 1))))
        .collect::<Result<_, _>>()?;

    let td = TreeDecomposition::new(bags, edges);
    if td.max_bag_size() != declared_max {
        return Err(ParseError::new(
            header_no,
            format!(
                "header declares max bag size {declared_max}, bags reach {}",
                td.max_bag_size()
            ),
        ));
    }
    Ok((td, n))
}

/// Writes a decomposition in canonical `.td` form. `n` is the vertex count
/// of the graph the decomposition belongs to.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    writeln!(out, "s td {} {} {}", td.bag_count(), td.max_bag_size(), n).unwrap();
    for (i, bag) in td.bags.iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for &v in bag {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}
