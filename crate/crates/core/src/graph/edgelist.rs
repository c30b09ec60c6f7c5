//! Plain-text edge-list interchange format.
//!
//! ```text
//! N M
//! u v
//! ...
//! ```
//!
//! The header gives the vertex and edge counts, followed by `M` lines of
//! 0-indexed endpoints with `u <= v`. UTF-8 with `\n` line endings. Repeated
//! lines encode multi-edges; loop lines are accepted and dropped on read.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

impl Graph {
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(8 * (self.n_edges() + 1));
        writeln!(out, "{} {}", self.n_vertices(), self.n_edges()).unwrap();
        for &(u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Parses the edge-list format. Graphs with repeated edges come back with
    /// `allows_multi() == true`.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let (n, m) = parse_pair(header, hline + 1)?;
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            edges.push(parse_pair(line, idx + 1)?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hline + 1,
                message: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        let mut sorted = edges.clone();
        for e in &mut sorted {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        sorted.sort_unstable();
        let has_dups = sorted.windows(2).any(|w| w[0] == w[1] && w[0].0 != w[0].1);
        Graph::from_edges(n, edges, has_dups)
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_edge_list()).map_err(|e| Error::io(path, e))
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Graph::parse_edge_list(&text)
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: lineno,
            message: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            message: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}
