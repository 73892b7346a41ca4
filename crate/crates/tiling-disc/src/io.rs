//! Text graph format.
//!
//! ```text
//! g <n> <m> <r>
//! e <u> <v> <+1|-1>     (m lines, 0 <= u < v < n)
//! ```
//!
//! Lines starting with `#` are ignored. Writing then reading reproduces the
//! input byte for byte: edges are emitted in lexicographic order and signs as
//! literal `+1` / `-1`.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{EdgeLabeling, Graph};

/// Parsed header plus contents of a graph file.
pub struct GraphFile {
    pub graph: Graph,
    pub labeling: EdgeLabeling,
    /// Intended clique size from the header.
    pub r: usize,
}

pub fn write_graph(g: &Graph, f: &EdgeLabeling, r: usize, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "g {} {} {}", g.n(), g.edge_count(), r)?;
    for (u, v) in g.edges() {
        let s = match f.label(u, v) {
            Ok(1) => "+1",
            Ok(_) => "-1",
            Err(_) => "+1", // unreachable for total labellings; callers validate
        };
        writeln!(w, "e {u} {v} {s}")?;
    }
    Ok(())
}

pub fn read_graph(r: impl BufRead) -> Result<GraphFile> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut graph: Option<Graph> = None;
    let mut labeling: Option<EdgeLabeling> = None;
    let mut seen_edges = 0usize;

    for (lineno, line) in r.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| Error::Format {
            line: lineno,
            msg: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "g" => {
                if header.is_some() {
                    return Err(Error::Format {
                        line: lineno,
                        msg: "duplicate header line".into(),
                    });
                }
                if fields.len() != 4 {
                    return Err(Error::Format {
                        line: lineno,
                        msg: "header must be `g <n> <m> <r>`".into(),
                    });
                }
                let n = parse_num(fields[1], lineno)?;
                let m = parse_num(fields[2], lineno)?;
                let cr = parse_num(fields[3], lineno)?;
                header = Some((n, m, cr));
                graph = Some(Graph::new(n));
                labeling = Some(EdgeLabeling::new(n));
            }
            "e" => {
                let (g, f) = match (graph.as_mut(), labeling.as_mut()) {
                    (Some(g), Some(f)) => (g, f),
                    _ => {
                        return Err(Error::Format {
                            line: lineno,
                            msg: "edge line before header".into(),
                        })
                    }
                };
                if fields.len() != 4 {
                    return Err(Error::Format {
                        line: lineno,
                        msg: "edge must be `e <u> <v> <+1|-1>`".into(),
                    });
                }
                let u = parse_num(fields[1], lineno)? as u32;
                let v = parse_num(fields[2], lineno)? as u32;
                if u >= v {
                    return Err(Error::Format {
                        line: lineno,
                        msg: format!("edge endpoints must satisfy u < v, got {u} {v}"),
                    });
                }
                let sign = match fields[3] {
                    "+1" => 1i8,
                    "-1" => -1i8,
                    other => {
                        return Err(Error::Format {
                            line: lineno,
                            msg: format!("label `{other}` not in {{+1,-1}}"),
                        })
                    }
                };
                g.add_edge(u, v).map_err(|e| Error::Format {
                    line: lineno,
                    msg: e.to_string(),
                })?;
                f.set(u, v, sign).map_err(|e| Error::Format {
                    line: lineno,
                    msg: e.to_string(),
                })?;
                seen_edges += 1;
            }
            other => {
                return Err(Error::Format {
                    line: lineno,
                    msg: format!("unknown record `{other}`"),
                })
            }
        }
    }

    let (n, m, r) = header.ok_or(Error::Format {
        line: 0,
        msg: "missing header line".into(),
    })?;
    let graph = graph.expect("graph exists with header");
    let labeling = labeling.expect("labeling exists with header");
    if seen_edges != m || graph.edge_count() != m {
        return Err(Error::Format {
            line: 0,
            msg: format!(
                "header declares {m} edges, found {} distinct of {seen_edges} listed",
                graph.edge_count()
            ),
        });
    }
    let _ = n;
    Ok(GraphFile { graph, labeling, r })
}

fn parse_num(s: &str, line: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::Format {
        line,
        msg: format!("expected a non-negative integer, got `{s}`"),
    })
}
