//! The `.emg` instance text format.
//!
//! ```text
//! c optional comment, ignored
//! p em <n_left> <n_right> <m_edges> <k>
//! e <a> <b> <r|b>
//! ```
//!
//! The `p` line appears exactly once before any `e` line; `e` lines use
//! 1-based vertex indices and appear exactly `m_edges` times. Parsing is
//! strict: unknown tags, wrong arities and trailing tokens are errors.
//! Blank lines are permitted.

use crate::graph::{Color, ColoredBipartiteGraph, GraphError};
use thiserror::Error;

/// A parsed instance: the graph together with the red-edge budget `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmInstance {
    pub graph: ColoredBipartiteGraph,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("missing `p em` header line")]
    MissingHeader,
    #[error("line {0}: second `p` line, the header must appear exactly once")]
    DuplicateHeader(usize),
    #[error("line {0}: edge line before the `p em` header")]
    EdgeBeforeHeader(usize),
    #[error("line {line}: unknown line tag `{tag}`")]
    UnknownTag { line: usize, tag: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: vertex index {value} outside 1..={limit}")]
    VertexIndex {
        line: usize,
        value: usize,
        limit: usize,
    },
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize, FormatError> {
    token.parse::<usize>().map_err(|_| {
        syntax(
            line,
            format!("{what} `{token}` is not a non-negative integer"),
        )
    })
}

/// Parses the text of an `.emg` file.
pub fn parse_emg(input: &str) -> Result<EmInstance, FormatError> {
    let mut header: Option<(usize, usize, usize, usize)> = None;
    let mut edges: Vec<(usize, usize, Color)> = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        let Some(&tag) = tokens.first() else {
            continue;
        };
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(FormatError::DuplicateHeader(line));
                }
                if tokens.len() != 6 || tokens[1] != "em" {
                    return Err(syntax(
                        line,
                        "expected `p em <n_left> <n_right> <m_edges> <k>`",
                    ));
                }
                let n_left = parse_usize(line, tokens[2], "n_left")?;
                let n_right = parse_usize(line, tokens[3], "n_right")?;
                let m_edges = parse_usize(line, tokens[4], "m_edges")?;
                let k = parse_usize(line, tokens[5], "k")?;
                header = Some((n_left, n_right, m_edges, k));
            }
            "e" => {
                let Some((n_left, n_right, _, _)) = header else {
                    return Err(FormatError::EdgeBeforeHeader(line));
                };
                if tokens.len() != 4 {
                    return Err(syntax(line, "expected `e <a> <b> <r|b>`"));
                }
                let a = parse_usize(line, tokens[1], "a")?;
                let b = parse_usize(line, tokens[2], "b")?;
                if a == 0 || a > n_left {
                    return Err(FormatError::VertexIndex {
                        line,
                        value: a,
                        limit: n_left,
                    });
                }
                if b == 0 || b > n_right {
                    return Err(FormatError::VertexIndex {
                        line,
                        value: b,
                        limit: n_right,
                    });
                }
                let color = match tokens[3] {
                    "r" => Color::Red,
                    "b" => Color::Blue,
                    other => {
                        return Err(syntax(
                            line,
                            format!("color must be `r` or `b`, got `{other}`"),
                        ))
                    }
                };
                edges.push((a - 1, b - 1, color));
            }
            other => {
                return Err(FormatError::UnknownTag {
                    line,
                    tag: other.to_string(),
                });
            }
        }
    }
    let Some((n_left, n_right, m_edges, k)) = header else {
        return Err(FormatError::MissingHeader);
    };
    if edges.len() != m_edges {
        return Err(FormatError::EdgeCountMismatch {
            declared: m_edges,
            found: edges.len(),
        });
    }
    let graph = ColoredBipartiteGraph::new(n_left, n_right, edges)?;
    Ok(EmInstance { graph, k })
}

/// Writes an instance in `.emg` form, with optional leading comments.
pub fn write_emg(graph: &ColoredBipartiteGraph, k: usize, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("c ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!(
        "p em {} {} {} {}\n",
        graph.n_left(),
        graph.n_right(),
        graph.edge_count(),
        k
    ));
    for e in graph.edges() {
        out.push_str(&format!("e {} {} {}\n", e.a + 1, e.b + 1, e.color.letter()));
    }
    out
}
