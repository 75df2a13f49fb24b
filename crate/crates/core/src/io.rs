//! Graph file formats: edge list, JSON and adjacency-matrix CSV.
//!
//! Writers are canonical (sorted edges, fixed layout), so reading a written
//! file and writing it again reproduces the same bytes.

use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::graph::{DegreeConvention, DirectedGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphFormat {
    /// `u v` per line, `#` comments, optional `n <count>` header.
    EdgeList,
    /// `{"num_vertices": n, "edges": [[u, v], ...]}`.
    Json,
    /// `n` rows of `n` comma-separated 0/1 entries.
    Matrix,
}

impl GraphFormat {
    pub const ALL: [GraphFormat; 3] = [GraphFormat::EdgeList, GraphFormat::Json, GraphFormat::Matrix];

    /// Guesses the format from a file extension: `.json`, `.csv`, anything
    /// else is an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => GraphFormat::Json,
            Some("csv") => GraphFormat::Matrix,
            _ => GraphFormat::EdgeList,
        }
    }
}

impl fmt::Display for GraphFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphFormat::EdgeList => "edges",
            GraphFormat::Json => "json",
            GraphFormat::Matrix => "matrix",
        })
    }
}

impl FromStr for GraphFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edges" | "edgelist" | "txt" => Ok(GraphFormat::EdgeList),
            "json" => Ok(GraphFormat::Json),
            "matrix" | "csv" => Ok(GraphFormat::Matrix),
            other => Err(format!("unknown graph format {other:?} (expected edges, json or matrix)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    num_vertices: usize,
    edges: Vec<(VertexId, VertexId)>,
}

fn parse_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

fn parse_index(token: &str, line: usize) -> Result<usize, FormatError> {
    token.parse().map_err(|_| parse_error(line, format!("expected a vertex index, got {token:?}")))
}

pub fn parse_graph(
    text: &str,
    format: GraphFormat,
    convention: DegreeConvention,
) -> Result<DirectedGraph, FormatError> {
    let (n, edges) = match format {
        GraphFormat::EdgeList => parse_edge_list(text)?,
        GraphFormat::Json => {
            let raw: JsonGraph = serde_json::from_str(text)?;
            (raw.num_vertices, raw.edges)
        }
        GraphFormat::Matrix => parse_matrix(text)?,
    };
    Ok(DirectedGraph::with_convention(n, &edges, convention)?)
}

fn parse_edge_list(text: &str) -> Result<(usize, Vec<(VertexId, VertexId)>), FormatError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<_> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            ["n", count] if declared.is_none() && edges.is_empty() => {
                declared = Some(parse_index(count, line)?);
            }
            [u, v] => edges.push((parse_index(u, line)?, parse_index(v, line)?)),
            _ => return Err(parse_error(line, format!("expected \"u v\", got {trimmed:?}"))),
        }
    }
    let n = declared
        .unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
    Ok((n, edges))
}

fn parse_matrix(text: &str) -> Result<(usize, Vec<(VertexId, VertexId)>), FormatError> {
    let rows: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let n = rows.len();
    let mut edges = Vec::new();
    for (u, &(line, row)) in rows.iter().enumerate() {
        let cells: Vec<_> = row.split(',').map(str::trim).collect();
        if cells.len() != n {
            return Err(parse_error(line, format!("expected {n} entries, got {}", cells.len())));
        }
        for (v, cell) in cells.into_iter().enumerate() {
            match cell {
                "0" => {}
                "1" => edges.push((u, v)),
                other => return Err(parse_error(line, format!("expected 0 or 1, got {other:?}"))),
            }
        }
    }
    Ok((n, edges))
}

pub fn write_graph(graph: &DirectedGraph, format: GraphFormat) -> String {
    let mut out = String::new();
    match format {
        GraphFormat::EdgeList => {
            writeln!(out, "n {}", graph.num_vertices()).unwrap();
            for (u, v) in graph.edges() {
                writeln!(out, "{u} {v}").unwrap();
            }
        }
        GraphFormat::Json => {
            let raw = JsonGraph { num_vertices: graph.num_vertices(), edges: graph.edges().collect() };
            out = serde_json::to_string(&raw).expect("plain integers always serialize");
            out.push('\n');
        }
        GraphFormat::Matrix => {
            let n = graph.num_vertices();
            for u in 0..n {
                let row: Vec<&str> =
                    (0..n).map(|v| if graph.has_edge(u, v) { "1" } else { "0" }).collect();
                writeln!(out, "{}", row.join(",")).unwrap();
            }
        }
    }
    out
}

pub fn read_graph_file(
    path: &Path,
    format: Option<GraphFormat>,
    convention: DegreeConvention,
) -> Result<DirectedGraph, FormatError> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text, format.unwrap_or_else(|| GraphFormat::from_path(path)), convention)
}

pub fn write_graph_file(
    graph: &DirectedGraph,
    path: &Path,
    format: Option<GraphFormat>,
) -> Result<(), FormatError> {
    let text = write_graph(graph, format.unwrap_or_else(|| GraphFormat::from_path(path)));
    Ok(std::fs::write(path, text)?)
}
