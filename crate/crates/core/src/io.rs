//! Plain-text instance files.
//!
//! ```text
//! # comment lines start with '#'
//! n m k
//! u v c      (m lines, 0-based endpoints, decimal cost)
//! ```

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::graph::{DagInstance, GraphError};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn parse_err(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_instance_str(text: &str) -> Result<DagInstance, InstanceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header `n m k`"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 {
        return Err(parse_err(hl, format!("header needs 3 fields, found {}", h.len())));
    }
    let int = |line: usize, tok: &str, what: &str| {
        tok.parse::<usize>()
            .map_err(|_| parse_err(line, format!("{what} `{tok}` is not a nonnegative integer")))
    };
    let (n, m, k) = (int(hl, h[0], "n")?, int(hl, h[1], "m")?, int(hl, h[2], "k")?);

    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        if edges.len() == m {
            return Err(parse_err(line, format!("more than the {m} declared edges")));
        }
        let f: Vec<&str> = text.split_whitespace().collect();
        if f.len() != 3 {
            return Err(parse_err(line, format!("edge needs 3 fields, found {}", f.len())));
        }
        let c = f[2]
            .parse::<f64>()
            .map_err(|_| parse_err(line, format!("cost `{}` is not a number", f[2])))?;
        edges.push((int(line, f[0], "tail")?, int(line, f[1], "head")?, c));
    }
    if edges.len() != m {
        let last = text.lines().count().max(1);
        return Err(parse_err(last, format!("expected {m} edges, found {}", edges.len())));
    }
    Ok(DagInstance::new(n, edges, k)?)
}

pub fn parse_instance(path: impl AsRef<Path>) -> Result<DagInstance, InstanceError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance_str(&text)
}

/// Serializes with shortest round-trip costs, so parsing the output gives
/// back the same instance.
pub fn emit_instance(inst: &DagInstance) -> String {
    let mut out = format!("{} {} {}\n", inst.n(), inst.m(), inst.k());
    for e in inst.edges() {
        out.push_str(&format!("{} {} {}\n", e.tail, e.head, e.cost));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_file() {
        let g = parse_instance_str("2 1 1\n0 1 1.0").unwrap();
        assert_eq!((g.n(), g.m(), g.k()), (2, 1, 1));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = parse_instance_str("# header next\n\n3 2 2\n# edges\n0 1 0.5\n1 2 2\n").unwrap();
        assert_eq!(g.costs(), vec![0.5, 2.0]);
    }

    #[test]
    fn k_out_of_range() {
        let e = parse_instance_str("3 2 5\n0 1 1\n1 2 1").unwrap_err();
        assert!(matches!(e, InstanceError::Graph(GraphError::KOutOfRange { k: 5, n: 3 })));
        let e = parse_instance_str("1 0 1\n").unwrap_err();
        assert!(matches!(e, InstanceError::Graph(GraphError::KOutOfRange { .. })));
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_instance_str("2 1 1\n# c\n0 x 1\n").unwrap_err() {
            InstanceError::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_instance_str("2 2 1\n0 1 1\n").unwrap_err() {
            InstanceError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_instance_str("2 1\n").is_err());
        assert!(parse_instance_str("2 1 1\n0 1 1\n1 0 1\n").is_err());
        assert!(matches!(
            parse_instance_str("2 1 1\n0 1 -1\n").unwrap_err(),
            InstanceError::Graph(GraphError::NegativeCost { .. })
        ));
    }

    #[test]
    fn emit_then_parse_is_identity() {
        let g = DagInstance::new(3, vec![(0, 1, 0.1), (1, 2, 1.0 / 3.0), (0, 2, 7.0)], 1).unwrap();
        assert_eq!(parse_instance_str(&emit_instance(&g)).unwrap(), g);
    }
}
