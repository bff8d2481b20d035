//! Dense text format.
//!
//! ```text
//! # optional comment lines
//! n
//! a_00 a_01 ... a_0(n-1)
//! ...
//! ```
//!
//! Entries are whitespace-separated decimals. Writing uses 17 significant
//! digits so every `f64` survives a round trip.

use crate::error::{Error, Result};
use crate::graph::{Graph, SymMatrix};

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        msg: "empty input".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("expected node count, found `{header}`"),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line: line_no,
            msg: "node count must be positive".into(),
        });
    }

    let mut rows = Vec::with_capacity(n);
    for (line_no, line) in lines {
        if rows.len() == n {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("more than {n} matrix rows"),
            });
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                let v: f64 = tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad number `{tok}`"),
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Parse {
                        line: line_no,
                        msg: format!("non-finite value `{tok}`"),
                    })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != n {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse {
            line: 0,
            msg: format!("expected {n} matrix rows, found {}", rows.len()),
        });
    }
    let adjacency = SymMatrix::from_rows(&rows).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })?;
    Ok(Graph::new(adjacency))
}

pub fn serialize_graph(g: &Graph) -> String {
    let a = &g.adjacency;
    let mut out = String::new();
    if let Some(name) = &g.name {
        out.push_str("# ");
        out.push_str(name);
        out.push('\n');
    }
    out.push_str(&format!("{}\n", a.n()));
    for i in 0..a.n() {
        let cells: Vec<String> = a.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
