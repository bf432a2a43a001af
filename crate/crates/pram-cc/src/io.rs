//! Edge-list file format and JSON report serialization.
//!
//! Edge lists: a header line `n m`, then m lines `u v` with 1-based vertex
//! ids, `#` comment lines anywhere, LF line endings.

use std::io::{BufRead, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::{MultiGraph, V};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("header declares {declared} edges, found {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<MultiGraph, EdgeListError> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs: Vec<(V, V)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut it = body.split_whitespace();
        let parse = |tok: Option<&str>, what: &str| -> Result<usize, EdgeListError> {
            tok.ok_or_else(|| EdgeListError::Parse {
                line: lineno,
                msg: format!("missing {what}"),
            })?
            .parse::<usize>()
            .map_err(|e| EdgeListError::Parse { line: lineno, msg: format!("bad {what}: {e}") })
        };
        let a = parse(it.next(), "first field")?;
        let b = parse(it.next(), "second field")?;
        if it.next().is_some() {
            return Err(EdgeListError::Parse { line: lineno, msg: "trailing fields".into() });
        }
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a == 0 || b == 0 || a > n || b > n {
                    return Err(EdgeListError::Parse {
                        line: lineno,
                        msg: format!("vertex out of range 1..={n}"),
                    });
                }
                pairs.push(((a - 1) as V, (b - 1) as V));
            }
        }
    }
    let (n, m) = header.ok_or(EdgeListError::MissingHeader)?;
    if pairs.len() != m {
        return Err(EdgeListError::EdgeCount { declared: m, found: pairs.len() });
    }
    Ok(MultiGraph::from_pairs(n, &pairs))
}

pub fn read_edge_list_path(path: &Path) -> Result<MultiGraph, EdgeListError> {
    let f = std::fs::File::open(path)?;
    read_edge_list(std::io::BufReader::new(f))
}

pub fn write_edge_list<W: Write>(mut w: W, g: &MultiGraph) -> std::io::Result<()> {
    writeln!(w, "{} {}", g.n, g.live_count())?;
    for e in g.edges() {
        writeln!(w, "{} {}", e.u + 1, e.v + 1)?;
    }
    Ok(())
}

pub fn write_edge_list_path(path: &Path, g: &MultiGraph) -> std::io::Result<()> {
    let f = std::fs::File::create(path)?;
    write_edge_list(std::io::BufWriter::new(f), g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let g = MultiGraph::from_pairs(4, &[(0, 1), (2, 3), (1, 1)]);
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g).unwrap();
        let g2 = read_edge_list(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(g2.n, 4);
        let es: Vec<(V, V)> = g2.edges().map(|e| (e.u, e.v)).collect();
        assert_eq!(es, vec![(0, 1), (2, 3), (1, 1)]);
    }

    #[test]
    fn comments_and_blank_lines_ok() {
        let text = "# a graph\n3 2\n\n1 2\n# middle\n2 3\n";
        let g = read_edge_list(std::io::Cursor::new(text)).unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.live_count(), 2);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "3 2\n1 2\nx 3\n";
        match read_edge_list(std::io::Cursor::new(text)) {
            Err(EdgeListError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "2 1\n1 3\n";
        match read_edge_list(std::io::Cursor::new(text)) {
            Err(EdgeListError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected range error, got {other:?}"),
        }
        let text = "3 5\n1 2\n";
        assert!(matches!(
            read_edge_list(std::io::Cursor::new(text)),
            Err(EdgeListError::EdgeCount { declared: 5, found: 1 })
        ));
    }
}
