//! Plain-text plumbing graph files.
//!
//! ```text
//! # Sigma(2,5,7)
//! vertex v1 -1
//! vertex v2 -2
//! edge v1 v2
//! ```

use plumbing_hf::PlumbingGraph;

use crate::error::CliError;

pub fn parse_graph_file(text: &str) -> Result<PlumbingGraph, CliError> {
    let mut vertices: Vec<(String, i64)> = Vec::new();
    let mut edges: Vec<(String, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["vertex", label, weight] => {
                let weight = weight
                    .parse::<i64>()
                    .map_err(|_| CliError::Syntax { line, msg: format!("weight `{weight}` is not an integer") })?;
                vertices.push((label.to_string(), weight));
            }
            ["edge", a, b] => edges.push((a.to_string(), b.to_string())),
            ["vertex", ..] => return Err(CliError::Syntax { line, msg: "expected `vertex <label> <weight>`".into() }),
            ["edge", ..] => return Err(CliError::Syntax { line, msg: "expected `edge <label> <label>`".into() }),
            [word, ..] => return Err(CliError::Syntax { line, msg: format!("unknown directive `{word}`") }),
        }
    }
    if vertices.is_empty() {
        return Err(CliError::NoVertices);
    }
    Ok(PlumbingGraph::new(&vertices, &edges)?)
}

pub fn render_graph_file(graph: &PlumbingGraph, title: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(t) = title {
        out.push_str(&format!("# {t}\n"));
    }
    for v in graph.vertices() {
        out.push_str(&format!("vertex {} {}\n", v.label, v.weight));
    }
    for (a, b) in graph.edges() {
        out.push_str(&format!("edge {} {}\n", graph.label(a), graph.label(b)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIGMA_257: &str = "vertex v1 -1\nvertex v2 -2\nvertex v3 -5\nvertex v4 -4\nvertex v5 -2\n\
        edge v1 v2\nedge v1 v3\nedge v1 v4\nedge v4 v5\n";

    #[test]
    fn parses_sigma_257() {
        let g = parse_graph_file(SIGMA_257).unwrap();
        let direct = PlumbingGraph::new(
            &[("v1", -1), ("v2", -2), ("v3", -5), ("v4", -4), ("v5", -2)],
            &[("v1", "v2"), ("v1", "v3"), ("v1", "v4"), ("v4", "v5")],
        )
        .unwrap();
        assert_eq!(g, direct);
    }

    #[test]
    fn comments_and_blanks() {
        let g = parse_graph_file("# header\n\nvertex a -1   # trailing\n").unwrap();
        assert_eq!(g.weights(), vec![-1]);
    }

    #[test]
    fn errors() {
        assert_eq!(parse_graph_file(""), Err(CliError::NoVertices));
        assert!(matches!(parse_graph_file("vertex a x"), Err(CliError::Syntax { line: 1, .. })));
        assert!(matches!(parse_graph_file("vertex a -1\nnode b"), Err(CliError::Syntax { line: 2, .. })));
        assert!(matches!(parse_graph_file("vertex a -1\nedge a"), Err(CliError::Syntax { line: 2, .. })));
        assert!(matches!(parse_graph_file("vertex a -1\nedge a b"), Err(CliError::Core(_))));
    }

    #[test]
    fn round_trip() {
        let g = parse_graph_file(SIGMA_257).unwrap();
        assert_eq!(parse_graph_file(&render_graph_file(&g, Some("test"))).unwrap(), g);
    }
}
