//! Line-oriented text formats.
//!
//! Detector graph:
//! ```text
//! dgraph v1 <num_vertices>
//! v <id> detector|boundary
//! e <id1> <id2> <p> [w <int>]
//! ```
//! Syndromes: one shot per line, space-separated active detector ids; an
//! empty line is a shot without detections.

use std::fmt::Write as _;

use super::{DetectorEdge, DetectorGraph, VertexKind};
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

impl DetectorGraph {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("dgraph") || tokens.next() != Some("v1") {
            return Err(parse_err(hline, "expected header `dgraph v1 <num_vertices>`"));
        }
        let n: usize = parse_num(tokens.next(), hline, "vertex count")?;
        if tokens.next().is_some() {
            return Err(parse_err(hline, "trailing tokens in header"));
        }
        let mut kinds: Vec<Option<VertexKind>> = vec![None; n];
        let mut edges = Vec::new();
        for (ln, line) in lines {
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("v") => {
                    let id: usize = parse_num(tokens.next(), ln, "vertex id")?;
                    let kind = match tokens.next() {
                        Some("detector") => VertexKind::Detector,
                        Some("boundary") => VertexKind::Boundary,
                        other => {
                            return Err(parse_err(ln, format!("unknown vertex kind {other:?}")))
                        }
                    };
                    let slot = kinds
                        .get_mut(id)
                        .ok_or_else(|| parse_err(ln, format!("vertex id {id} out of range")))?;
                    if slot.replace(kind).is_some() {
                        return Err(parse_err(ln, format!("vertex {id} declared twice")));
                    }
                }
                Some("e") => {
                    let a = parse_num(tokens.next(), ln, "edge endpoint")?;
                    let b = parse_num(tokens.next(), ln, "edge endpoint")?;
                    let p: f64 = parse_num(tokens.next(), ln, "probability")?;
                    let mut edge = DetectorEdge::new(a, b, p);
                    match tokens.next() {
                        None => {}
                        Some("w") => edge.weight_override = Some(parse_num(tokens.next(), ln, "weight")?),
                        Some(t) => return Err(parse_err(ln, format!("unexpected token `{t}`"))),
                    }
                    if tokens.next().is_some() {
                        return Err(parse_err(ln, "trailing tokens"));
                    }
                    edges.push(edge);
                }
                Some(t) => return Err(parse_err(ln, format!("unknown record `{t}`"))),
                None => unreachable!(),
            }
        }
        let kinds = kinds
            .into_iter()
            .enumerate()
            .map(|(id, k)| k.ok_or_else(|| Error::InvalidGraph(format!("vertex {id} never declared"))))
            .collect::<Result<Vec<_>>>()?;
        DetectorGraph::new(kinds, edges)
    }

    /// Serializes in the text format. Probabilities use Rust's shortest
    /// round-trip representation, so `parse(to_text(g))` reproduces `g`
    /// (observable masks are not part of the format).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "dgraph v1 {}", self.num_vertices()).unwrap();
        for v in self.vertices() {
            let kind = match v.kind {
                VertexKind::Detector => "detector",
                VertexKind::Boundary => "boundary",
            };
            writeln!(s, "v {} {kind}", v.id).unwrap();
        }
        for e in self.edges() {
            write!(s, "e {} {} {:?}", e.a, e.b, e.probability).unwrap();
            if let Some(w) = e.weight_override {
                write!(s, " w {w}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// Parses a syndrome file: one `Vec` of active detector ids per line.
pub fn parse_syndromes(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut shots = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let shot = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(i + 1, format!("invalid detector id `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        shots.push(shot);
    }
    Ok(shots)
}

pub fn write_syndromes(shots: &[Vec<usize>]) -> String {
    let mut s = String::new();
    for shot in shots {
        let ids: Vec<String> = shot.iter().map(|d| d.to_string()).collect();
        s.push_str(&ids.join(" "));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "dgraph v1 3
v 0 detector
v 1 detector
v 2 boundary
e 0 1 0.001
e 1 2 0.002 w 9
e 0 2 0.5
";

    #[test]
    fn parses_sample() {
        let g = DetectorGraph::parse(SAMPLE).unwrap();
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.num_detectors(), 2);
        assert_eq!(g.edges()[1].weight_override, Some(9));
        assert_eq!(g.edges()[2].probability, 0.5);
        assert_eq!(g.to_text(), SAMPLE);
    }

    #[test]
    fn reports_line_numbers() {
        let bad = "dgraph v1 2\nv 0 detector\nv 1 boundary\ne 0 1 zero\n";
        assert!(matches!(DetectorGraph::parse(bad), Err(Error::Parse { line: 4, .. })));
        assert!(DetectorGraph::parse("graph v1 2").is_err());
        assert!(DetectorGraph::parse("dgraph v1 2\nv 0 detector\n").is_err());
        assert!(DetectorGraph::parse("dgraph v1 1\nv 0 detector\nv 0 detector\n").is_err());
        assert!(DetectorGraph::parse("dgraph v1 2\nv 0 detector\nv 1 boundary\ne 0 1 1.5\n").is_err());
    }

    #[test]
    fn syndromes_keep_empty_shots() {
        let text = "1 5 7\n\n3\n";
        let shots = parse_syndromes(text).unwrap();
        assert_eq!(shots, vec![vec![1, 5, 7], vec![], vec![3]]);
        assert_eq!(write_syndromes(&shots), text);
        assert!(parse_syndromes("1 x\n").is_err());
    }
}
