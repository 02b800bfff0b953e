//! Edge-list files: a header line `n m`, then `m` lines `u v` with
//! 0-indexed endpoints. Lines starting with `#` are comments.

use super::Graph;
use crate::{Error, Result};
use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |msg: String| Error::Parse { line: line_no, msg };
        if fields.len() != 2 {
            return Err(parse_err(format!("expected two fields, found {}", fields.len())));
        }
        let a: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(format!("not a natural number: {:?}", fields[0])))?;
        let b: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(format!("not a natural number: {:?}", fields[1])))?;
        match header {
            None => header = Some((a, b, line_no)),
            Some((n, m, _)) => {
                if a >= n || b >= n {
                    return Err(parse_err(format!("edge ({a}, {b}) out of range for n = {n}")));
                }
                if a == b {
                    return Err(parse_err(format!("self-loop at vertex {a}")));
                }
                if !seen.insert((a.min(b), a.max(b))) {
                    return Err(parse_err(format!("duplicate edge ({a}, {b})")));
                }
                if edges.len() == m {
                    return Err(parse_err(format!("more than the declared {m} edges")));
                }
                edges.push((a, b));
            }
        }
    }
    let Some((n, m, line)) = header else {
        return Err(Error::Parse {
            line: 0,
            msg: "missing header line".into(),
        });
    };
    if edges.len() != m {
        return Err(Error::Parse {
            line,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

/// Writes the canonical form: edges as `u v` with `u < v`, sorted.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_edge_list(g, &mut w)?;
    w.flush()?;
    Ok(())
}
