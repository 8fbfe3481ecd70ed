use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

/// Directive written by [`write_graph`] when a graph has isolated nodes,
/// which an edge list alone cannot express.
const NODES_DIRECTIVE: &str = "# nodes:";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// Whitespace separated `u v [w]` lines; `#` and `%` start comments.
    EdgeList,
    /// Matrix Market coordinate format (pattern, real or integer).
    MatrixMarket,
}

impl GraphFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") || ext.eq_ignore_ascii_case("mm") => {
                GraphFormat::MatrixMarket
            }
            _ => GraphFormat::EdgeList,
        }
    }
}

pub fn load_graph_file(path: &Path, format: GraphFormat) -> Result<Graph> {
    let file = File::open(path)?;
    load_graph(BufReader::new(file), format)
}

/// Reads a graph and canonicalizes it.
///
/// Edge-list node ids are arbitrary non-negative integers; they are compacted
/// to `0..n` in ascending id order, so files written by [`write_graph`] load
/// back with identical ids.
pub fn load_graph<R: BufRead>(reader: R, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::EdgeList => read_edge_list(reader),
        GraphFormat::MatrixMarket => read_matrix_market(reader),
    }
}

fn parse_weight(token: &str, line: usize) -> Result<f64> {
    let w: f64 = token
        .parse()
        .map_err(|_| Error::parse(line, format!("bad weight {token:?}")))?;
    if !w.is_finite() {
        return Err(Error::parse(line, format!("weight {token:?} is not finite")));
    }
    if w < 0.0 {
        return Err(Error::validation(format!("line {line}: negative weight {w}")));
    }
    Ok(w)
}

fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut declared_nodes = None;
    let mut raw = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if let Some(rest) = text.strip_prefix(NODES_DIRECTIVE) {
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad node count {:?}", rest.trim())))?;
            declared_nodes = Some(n);
            continue;
        }
        if text.is_empty() || text.starts_with('#') || text.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::parse(
                lineno,
                format!("expected `u v [w]`, found {} fields", tokens.len()),
            ));
        }
        let id = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| Error::parse(lineno, format!("bad node id {t:?}")))
        };
        let w = match tokens.get(2) {
            Some(t) => parse_weight(t, lineno)?,
            None => 1.0,
        };
        raw.push((id(tokens[0])?, id(tokens[1])?, w));
    }

    if let Some(n) = declared_nodes {
        let edges = raw
            .into_iter()
            .map(|(u, v, w)| {
                if u >= n as u64 || v >= n as u64 {
                    Err(Error::validation(format!(
                        "edge ({u}, {v}) exceeds declared node count {n}"
                    )))
                } else {
                    Ok((u as usize, v as usize, w))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        return Graph::from_edges(n, edges);
    }

    let mut ids: Vec<u64> = raw.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let compact: HashMap<u64, usize> = ids.iter().enumerate().map(|(k, &id)| (id, k)).collect();
    Graph::from_edges(
        ids.len(),
        raw.into_iter().map(|(u, v, w)| (compact[&u], compact[&v], w)),
    )
}

fn read_matrix_market<R: BufRead>(reader: R) -> Result<Graph> {
    let mut lines = reader.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty Matrix Market file"))?;
    let header = header?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::parse(1, "missing `%%MatrixMarket matrix` header"));
    }
    if fields[2] != "coordinate" {
        return Err(Error::parse(1, "only coordinate matrices are supported"));
    }
    let pattern = match fields[3].as_str() {
        "pattern" => true,
        "real" | "integer" => false,
        other => return Err(Error::parse(1, format!("unsupported field type {other:?}"))),
    };
    if !matches!(fields[4].as_str(), "symmetric" | "general") {
        return Err(Error::parse(1, format!("unsupported symmetry {:?}", fields[4])));
    }

    let mut size = None;
    let mut edges = Vec::new();
    let mut last_line = 1;
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        last_line = lineno;
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(lineno, format!("bad integer {t:?}")))
        };
        match size {
            None => {
                if tokens.len() != 3 {
                    return Err(Error::parse(lineno, "expected `rows cols entries` size line"));
                }
                let (rows, cols, nnz) = (num(tokens[0])?, num(tokens[1])?, num(tokens[2])?);
                if rows != cols {
                    return Err(Error::validation(format!(
                        "adjacency matrix must be square, got {rows}x{cols}"
                    )));
                }
                size = Some((rows, nnz));
                edges.reserve(nnz);
            }
            Some((rows, _)) => {
                let expected = if pattern { 2 } else { 3 };
                if tokens.len() != expected {
                    return Err(Error::parse(
                        lineno,
                        format!("expected {expected} fields, found {}", tokens.len()),
                    ));
                }
                let (i, j) = (num(tokens[0])?, num(tokens[1])?);
                if i == 0 || j == 0 || i > rows || j > rows {
                    return Err(Error::parse(lineno, format!("index ({i}, {j}) out of range")));
                }
                let w = if pattern { 1.0 } else { parse_weight(tokens[2], lineno)? };
                edges.push((i - 1, j - 1, w));
            }
        }
    }
    let (rows, nnz) = size.ok_or_else(|| Error::parse(last_line, "missing size line"))?;
    if edges.len() != nnz {
        return Err(Error::parse(
            last_line,
            format!("header declares {nnz} entries, found {}", edges.len()),
        ));
    }
    Graph::from_edges(rows, edges)
}

/// Writes one `u v w` line per edge in lexicographic order.
pub fn write_graph<W: Write>(g: &Graph, mut sink: W) -> Result<()> {
    if g.isolated_count() > 0 {
        writeln!(sink, "{NODES_DIRECTIVE} {}", g.n())?;
    }
    for (u, v, w) in g.edges() {
        writeln!(sink, "{u} {v} {w}")?;
    }
    sink.flush()?;
    Ok(())
}

pub fn write_graph_file(g: &Graph, path: &Path) -> Result<()> {
    write_graph(g, BufWriter::new(File::create(path)?))
}

/// Writes `u v value` per edge, e.g. algebraic distances for inspection.
pub fn write_edge_values<W: Write>(g: &Graph, values: &[f64], mut sink: W) -> Result<()> {
    if values.len() != g.m() {
        return Err(Error::validation("value count does not match edge count"));
    }
    for ((u, v, _), x) in g.edges().zip(values) {
        writeln!(sink, "{u} {v} {x}")?;
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load(text: &str) -> Result<Graph> {
        load_graph(text.as_bytes(), GraphFormat::EdgeList)
    }

    fn dump(g: &Graph) -> String {
        let mut out = Vec::new();
        write_graph(g, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn path_of_three() {
        let g = load("0 1\n1 2\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(g.degrees(), vec![1, 2, 1]);
    }

    #[test]
    fn duplicate_and_self_loop() {
        let g = load("0 1\n1 0\n0 0\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
    }

    #[test]
    fn comments_and_weights() {
        let g = load("# header\n% other\n\n10 20 2.5\n20 30\n10 20 4\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        assert_eq!(g.edge_weight(g.edge_index(0, 1).unwrap()), 4.0);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match load("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match load("0 1\n1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_weight_is_validation_error() {
        assert!(matches!(load("0 1 -2\n"), Err(Error::Validation(_))));
    }

    #[test]
    fn writes_sorted_lines() {
        let g = load("0 1\n1 2\n").unwrap();
        assert_eq!(dump(&g), "0 1 1\n1 2 1\n");
        let k3 = load("2 1\n0 2\n1 0\n").unwrap();
        assert_eq!(dump(&k3), "0 1 1\n0 2 1\n1 2 1\n");
    }

    #[test]
    fn isolated_nodes_survive_round_trip() {
        let g = Graph::from_edges(5, [(1, 3, 1.0)]).unwrap();
        let text = dump(&g);
        assert!(text.starts_with("# nodes: 5\n"));
        assert_eq!(load(&text).unwrap(), g);
    }

    #[test]
    fn matrix_market_symmetric() {
        let text = "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n4 4 3\n2 1\n3 2\n3 3\n";
        let g = load_graph(text.as_bytes(), GraphFormat::MatrixMarket).unwrap();
        assert_eq!((g.n(), g.m()), (4, 2));
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));

        let real = "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 2 0.5\n2 1 0.75\n";
        let g = load_graph(real.as_bytes(), GraphFormat::MatrixMarket).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.edge_weight(0), 0.75);
    }

    #[test]
    fn matrix_market_errors() {
        let short = "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n";
        assert!(matches!(
            load_graph(short.as_bytes(), GraphFormat::MatrixMarket),
            Err(Error::Parse { .. })
        ));
        let bad = "%%MatrixMarket matrix array real general\n";
        assert!(load_graph(bad.as_bytes(), GraphFormat::MatrixMarket).is_err());
        let neg = "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 -1\n";
        assert!(matches!(
            load_graph(neg.as_bytes(), GraphFormat::MatrixMarket),
            Err(Error::Validation(_))
        ));
    }

    prop_compose! {
        fn arb_graph()(n in 1usize..30)
            (n in Just(n), raw in prop::collection::vec((0..n, 0..n, 0u32..5), 0..80)) -> Graph {
            Graph::from_edges(n, raw.into_iter().map(|(u, v, w)| (u, v, 0.5 + w as f64))).unwrap()
        }
    }

    proptest! {
        #[test]
        fn write_then_load_is_identity(g in arb_graph()) {
            let text = dump(&g);
            let back = load(&text).unwrap();
            back.check_invariants().unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(dump(&back), text);
        }
    }
}
