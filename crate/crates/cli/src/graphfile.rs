//! Text graph format: first line `n m`, then `m` lines `u v` with
//! `0 <= u < v < n`. Errors carry the offending line number.

use qpdkit_core::graph::Graph;

pub fn parse_graph(text: &str) -> Result<Graph, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_no, header) = lines.next().ok_or_else(|| "empty graph file".to_string())?;
    let mut tokens = header.split_whitespace();
    let n: usize = tokens
        .next()
        .ok_or_else(|| format!("line {header_no}: missing vertex count"))?
        .parse()
        .map_err(|_| format!("line {header_no}: invalid vertex count"))?;
    let m: usize = tokens
        .next()
        .ok_or_else(|| format!("line {header_no}: missing edge count"))?
        .parse()
        .map_err(|_| format!("line {header_no}: invalid edge count"))?;
    if tokens.next().is_some() {
        return Err(format!("line {header_no}: trailing tokens after 'n m'"));
    }

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| format!("expected {m} edge lines, file ended early"))?;
        let mut tokens = line.split_whitespace();
        let u: usize = tokens
            .next()
            .ok_or_else(|| format!("line {line_no}: missing endpoint"))?
            .parse()
            .map_err(|_| format!("line {line_no}: invalid endpoint"))?;
        let v: usize = tokens
            .next()
            .ok_or_else(|| format!("line {line_no}: missing second endpoint"))?
            .parse()
            .map_err(|_| format!("line {line_no}: invalid endpoint"))?;
        if tokens.next().is_some() {
            return Err(format!("line {line_no}: trailing tokens after 'u v'"));
        }
        if u >= v {
            return Err(format!("line {line_no}: endpoints must satisfy u < v"));
        }
        if v >= n {
            return Err(format!(
                "line {line_no}: vertex {v} out of range for n = {n}"
            ));
        }
        // Duplicate detection here keeps the line number; the constructor
        // would reject it too, but without location.
        if edges.contains(&(u, v)) {
            return Err(format!("line {line_no}: duplicate edge {u} {v}"));
        }
        edges.push((u, v));
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(format!("line {line_no}: extra content after {m} edges"));
    }
    Graph::new(n, edges).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_triangle() {
        let g = parse_graph("3 3\n0 1\n0 2\n1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().len(), 3);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(parse_graph("").unwrap_err().contains("empty"));
        assert!(parse_graph("3\n").unwrap_err().contains("line 1"));
        let dup = parse_graph("3 3\n0 1\n0 1\n1 2\n").unwrap_err();
        assert!(dup.contains("line 3") && dup.contains("duplicate"), "{dup}");
        let loopy = parse_graph("3 2\n1 1\n0 2\n").unwrap_err();
        assert!(
            loopy.contains("line 2") && loopy.contains("u < v"),
            "{loopy}"
        );
        let range = parse_graph("3 2\n0 5\n0 1\n").unwrap_err();
        assert!(
            range.contains("line 2") && range.contains("out of range"),
            "{range}"
        );
        let reorder = parse_graph("4 2\n2 1\n0 3\n").unwrap_err();
        assert!(reorder.contains("line 2"), "{reorder}");
        let short = parse_graph("4 3\n0 1\n").unwrap_err();
        assert!(short.contains("ended early"), "{short}");
        let extra = parse_graph("3 2\n0 1\n1 2\n0 2\n").unwrap_err();
        assert!(extra.contains("line 4"), "{extra}");
        // Disconnected graphs are structurally valid lines but rejected.
        let disc = parse_graph("4 2\n0 1\n2 3\n").unwrap_err();
        assert!(disc.contains("disconnected"), "{disc}");
    }
}
