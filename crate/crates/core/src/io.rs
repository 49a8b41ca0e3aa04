//! JSON documents for graphs and fields.
//!
//! Graph: `{"vertices": [{"id", "mu"}], "edges": [{"u", "v", "w", "w_rev"?}]}`.
//! Field: `{"field": [{"id", "value": number | [number, ...]}]}`.
//!
//! Writers print every number with 17 significant digits so documents
//! round-trip binary64 exactly and identical inputs give identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fields::{ScalarField, VectorField};
use crate::graph::{build_graph, Edge, VertexId, WeightedGraph};
use crate::numeric::fmt17;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    id: VertexId,
    mu: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    vertices: Vec<VertexEntry>,
    edges: Vec<Edge>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum FieldValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldEntry {
    id: VertexId,
    value: FieldValue,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDocument {
    field: Vec<FieldEntry>,
}

fn num(x: f64) -> String {
    if x.is_finite() {
        fmt17(x)
    } else {
        "null".to_string()
    }
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    let mut seen = std::collections::BTreeSet::new();
    for v in &doc.vertices {
        if !seen.insert(v.id) {
            return Err(Error::Parse(format!("vertex {} listed twice", v.id)));
        }
    }
    build_graph(&doc.edges, doc.vertices.iter().map(|v| (v.id, v.mu)))
}

pub fn graph_to_json(g: &WeightedGraph) -> String {
    let mut s = String::from("{\n  \"vertices\": [\n");
    let n = g.len();
    for (k, (id, mu)) in g.measure_pairs().into_iter().enumerate() {
        let sep = if k + 1 < n { "," } else { "" };
        let _ = writeln!(s, "    {{\"id\": {id}, \"mu\": {}}}{sep}", num(mu));
    }
    s.push_str("  ],\n  \"edges\": [\n");
    let edges = g.edges();
    for (k, e) in edges.iter().enumerate() {
        let sep = if k + 1 < edges.len() { "," } else { "" };
        let _ = write!(
            s,
            "    {{\"u\": {}, \"v\": {}, \"w\": {}",
            e.u,
            e.v,
            num(e.w)
        );
        if let Some(wr) = e.w_rev {
            let _ = write!(s, ", \"w_rev\": {}", num(wr));
        }
        let _ = writeln!(s, "}}{sep}");
    }
    s.push_str("  ]\n}\n");
    s
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &WeightedGraph) -> Result<()> {
    Ok(std::fs::write(path, graph_to_json(g))?)
}

/// Reads a scalar field; vertices not listed are zero.
pub fn parse_scalar_field<'g>(text: &str, g: &'g WeightedGraph) -> Result<ScalarField<'g>> {
    let doc: FieldDocument = serde_json::from_str(text)?;
    let mut entries = Vec::with_capacity(doc.field.len());
    for e in doc.field {
        match e.value {
            FieldValue::Scalar(v) => entries.push((e.id, v)),
            FieldValue::Vector(_) => {
                return Err(Error::Parse(format!(
                    "vertex {} has a vector value in a scalar field",
                    e.id
                )))
            }
        }
    }
    ScalarField::from_sparse(g, entries)
}

/// Reads a vector field; vertices not listed carry the zero vector.
pub fn parse_vector_field<'g>(text: &str, g: &'g WeightedGraph) -> Result<VectorField<'g>> {
    let doc: FieldDocument = serde_json::from_str(text)?;
    let mut vectors: Vec<Vec<f64>> = (0..g.len()).map(|i| vec![0.0; g.degree(i)]).collect();
    for e in doc.field {
        let i = g.index_of(e.id)?;
        vectors[i] = match e.value {
            FieldValue::Vector(v) => v,
            FieldValue::Scalar(v) => vec![v],
        };
    }
    VectorField::from_vectors(g, &vectors)
}

pub fn scalar_field_to_json(u: &ScalarField<'_>) -> String {
    let g = u.graph();
    let mut s = String::from("{\n  \"field\": [\n");
    for i in 0..g.len() {
        let sep = if i + 1 < g.len() { "," } else { "" };
        let _ = writeln!(
            s,
            "    {{\"id\": {}, \"value\": {}}}{sep}",
            g.id(i),
            num(u.at(i))
        );
    }
    s.push_str("  ]\n}\n");
    s
}

pub fn vector_field_to_json(f: &VectorField<'_>) -> String {
    let g = f.graph();
    let mut s = String::from("{\n  \"field\": [\n");
    for i in 0..g.len() {
        let sep = if i + 1 < g.len() { "," } else { "" };
        let coords: Vec<String> = f.at(i).iter().map(|&c| num(c)).collect();
        let _ = writeln!(
            s,
            "    {{\"id\": {}, \"value\": [{}]}}{sep}",
            g.id(i),
            coords.join(", ")
        );
    }
    s.push_str("  ]\n}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_VERTEX: &str = r#"{"vertices": [{"id": 1, "mu": 1.0}, {"id": 2, "mu": 1.0}],
        "edges": [{"u": 1, "v": 2, "w": 1.0}]}"#;

    #[test]
    fn parses_sample_graph() {
        let g = parse_graph(TWO_VERTEX).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.is_symmetric());
    }

    #[test]
    fn asymmetric_edges_round_trip() {
        let text = r#"{"vertices": [{"id": 3, "mu": 0.5}, {"id": 7, "mu": 2.0}],
            "edges": [{"u": 7, "v": 3, "w": 0.25, "w_rev": 4.0}]}"#;
        let g = parse_graph(text).unwrap();
        assert!(!g.is_symmetric());
        let again = parse_graph(&graph_to_json(&g)).unwrap();
        assert_eq!(g, again);
        assert_eq!(graph_to_json(&g), graph_to_json(&again));
    }

    #[test]
    fn malformed_documents_are_parse_errors() {
        assert!(parse_graph("{").unwrap_err().is_parse());
        assert!(parse_graph(r#"{"vertices": [], "edges": [], "extra": 1}"#)
            .unwrap_err()
            .is_parse());
        let dup = r#"{"vertices": [{"id": 1, "mu": 1.0}, {"id": 1, "mu": 1.0}],
            "edges": [{"u": 1, "v": 2, "w": 1.0}]}"#;
        assert!(parse_graph(dup).unwrap_err().is_parse());
        let bad = r#"{"vertices": [{"id": 1, "mu": 1.0}, {"id": 2, "mu": 1.0}],
            "edges": [{"u": 1, "v": 2, "w": -1.0}]}"#;
        assert_eq!(
            parse_graph(bad).unwrap_err(),
            Error::NonPositiveWeight(1, 2, -1.0)
        );
    }

    #[test]
    fn fields_round_trip() {
        let g = parse_graph(TWO_VERTEX).unwrap();
        let u = parse_scalar_field(r#"{"field": [{"id": 2, "value": 0.1}]}"#, &g).unwrap();
        assert_eq!(u.values(), &[0.0, 0.1]);
        let again = parse_scalar_field(&scalar_field_to_json(&u), &g).unwrap();
        assert_eq!(again.values(), u.values());

        let f = parse_vector_field(r#"{"field": [{"id": 1, "value": [0.5]}]}"#, &g).unwrap();
        let again = parse_vector_field(&vector_field_to_json(&f), &g).unwrap();
        assert_eq!(again.flat(), f.flat());

        let err = parse_scalar_field(r#"{"field": [{"id": 1, "value": [1.0]}]}"#, &g);
        assert!(err.unwrap_err().is_parse());
        let err = parse_vector_field(r#"{"field": [{"id": 1, "value": [1.0, 2.0]}]}"#, &g);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        let err = parse_scalar_field(r#"{"field": [{"id": 9, "value": 1.0}]}"#, &g);
        assert_eq!(err.unwrap_err(), Error::UnknownVertex(9));
    }
}
