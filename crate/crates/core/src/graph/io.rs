use super::{GraphError, MetricGraph, VertexId};

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<u32, GraphError> {
    tok.parse::<u32>()
        .map_err(|_| parse_err(line, format!("bad vertex id `{tok}`")))
}

/// Parses the adjacency text format. Line numbers in errors are 1-based.
pub fn load_graph(text: &str) -> Result<MetricGraph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let (name, n) = match parts.as_slice() {
        ["graph", name, n] => (
            name.to_string(),
            n.parse::<usize>()
                .map_err(|_| parse_err(hline, format!("bad vertex count `{n}`")))?,
        ),
        _ => return Err(parse_err(hline, "expected `graph <name> <vertex_count>`")),
    };

    let mut adjacency: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    let mut line_of = Vec::with_capacity(n);
    for (lno, line) in lines {
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(lno, "expected `<id>: <neighbors>`"))?;
        let id = parse_id(head.trim(), lno)?;
        if id as usize >= n {
            return Err(GraphError::OutOfRange { line: lno, id });
        }
        if id as usize != adjacency.len() {
            return Err(parse_err(
                lno,
                format!("expected vertex {} but found {id}", adjacency.len()),
            ));
        }
        let mut nbrs = Vec::new();
        for tok in rest.split_whitespace() {
            let w = parse_id(tok, lno)?;
            if w as usize >= n {
                return Err(GraphError::OutOfRange { line: lno, id: w });
            }
            if w == id {
                return Err(parse_err(lno, format!("self loop at {id}")));
            }
            if nbrs.last().is_some_and(|&VertexId(last)| last >= w) {
                return Err(parse_err(lno, "neighbor list must be strictly ascending"));
            }
            nbrs.push(VertexId(w));
        }
        adjacency.push(nbrs);
        line_of.push(lno);
    }
    if adjacency.len() != n {
        return Err(parse_err(
            line_of.last().copied().unwrap_or(hline),
            format!("header declares {n} vertices but {} listed", adjacency.len()),
        ));
    }
    for (u, nbrs) in adjacency.iter().enumerate() {
        for &v in nbrs {
            if adjacency[v.idx()].binary_search(&VertexId(u as u32)).is_err() {
                return Err(GraphError::Asymmetric {
                    line: line_of[u],
                    u: u as u32,
                    v: v.0,
                });
            }
        }
    }
    Ok(MetricGraph::from_sorted_adjacency(name, adjacency))
}

pub fn store_graph(g: &MetricGraph) -> String {
    let mut out = format!("graph {} {}\n", g.name(), g.vertex_count());
    for v in g.vertices() {
        out.push_str(&format!("{v}:"));
        for w in g.neighbors(v) {
            out.push_str(&format!(" {w}"));
        }
        out.push('\n');
    }
    out
}

/// Canonical whitespace form: comments and blank lines dropped, runs of spaces collapsed.
pub fn normalize(text: &str) -> String {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let l = l.replace(':', ": ");
            let joined = l.split_whitespace().collect::<Vec<_>>().join(" ");
            joined.replace(" :", ":")
        })
        .map(|l| l + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolated_vertices() {
        let g = load_graph("graph iso 3\n0:\n1:\n2:\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn round_trip_up_to_whitespace() {
        let text = "# a triangle\ngraph tri 3\n0:  1   2\n\n1: 0 2\n2 : 0 1\n";
        let g = load_graph(text).unwrap();
        assert_eq!(store_graph(&g), normalize(text));
    }

    #[test]
    fn asymmetric_names_pair() {
        let err = load_graph("graph bad 3\n0: 1\n1:\n2:\n").unwrap_err();
        assert_eq!(err, GraphError::Asymmetric { line: 2, u: 0, v: 1 });
    }

    #[test]
    fn range_and_syntax_errors_carry_lines() {
        assert_eq!(
            load_graph("graph bad 2\n0: 5\n1:\n").unwrap_err(),
            GraphError::OutOfRange { line: 2, id: 5 }
        );
        assert!(matches!(
            load_graph("graph bad 2\n0 1\n").unwrap_err(),
            GraphError::Parse { line: 2, .. }
        ));
        assert!(matches!(
            load_graph("graph bad 2\n0: 1\n1: x\n").unwrap_err(),
            GraphError::Parse { line: 3, .. }
        ));
    }
}
