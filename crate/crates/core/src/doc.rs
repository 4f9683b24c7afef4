//! The forest document format.
//!
//! A document is a JSON object with a fixed set of sections: `format`,
//! `schema` (vertices, f, w), `trees` (vertices, edges, rings with fraction
//! gaps), `coverings` (vertex images and local degrees), and an optional
//! `marked` list for hull extraction. Every fraction is written as a reduced
//! `p/q` string, unknown fields are rejected, and [`serialize_document`]
//! emits a canonical form: sorted keys, sorted vertex and edge lists,
//! canonical ring rotations, and a trailing newline, so round-trips are
//! bit-exact.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::{format_rational, parse_rational};
use crate::forest::{ForestStructureError, HubbardForest};
use crate::schema::{MappingSchema, SchemaVertexId};
use crate::tree::{AngledTree, Spoke, VertexId};

/// The document format version this crate reads and writes.
pub const FORMAT_VERSION: u32 = 1;

/// Why a document failed to parse.
#[derive(Debug, Error)]
pub enum DocError {
    /// Not syntactically valid JSON, or a field of the wrong shape. The
    /// message carries the line and column.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    /// Syntactically fine, but a section's content is inconsistent.
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    /// The sections do not assemble into a forest.
    #[error(transparent)]
    Structure(#[from] ForestStructureError),
}

fn field(path: impl Into<String>, message: impl Into<String>) -> DocError {
    DocError::Field {
        path: path.into(),
        message: message.into(),
    }
}

/// A parsed forest document: the forest itself plus the optional marked
/// vertex set used by hull extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub forest: HubbardForest,
    pub marked: Option<BTreeSet<VertexId>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRepr {
    format: u32,
    schema: SchemaRepr,
    #[serde(default)]
    trees: BTreeMap<String, TreeRepr>,
    #[serde(default)]
    coverings: BTreeMap<String, CoveringRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    marked: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemaRepr {
    vertices: Vec<String>,
    f: BTreeMap<String, String>,
    w: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeRepr {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    ring: BTreeMap<String, Vec<(String, String)>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoveringRepr {
    map: BTreeMap<String, String>,
    degrees: BTreeMap<String, u32>,
}

/// Parses a document. Checks the grammar and the structural consistency of
/// every section; semantic validity (the six conditions) is left to
/// [`HubbardForest::validate`].
pub fn parse_document(text: &str) -> Result<Document, DocError> {
    let repr: DocumentRepr = serde_json::from_str(text)?;
    if repr.format != FORMAT_VERSION {
        return Err(field(
            "format",
            format!("unsupported version {}, expected {FORMAT_VERSION}", repr.format),
        ));
    }

    let declared: BTreeSet<&String> = repr.schema.vertices.iter().collect();
    if declared.len() != repr.schema.vertices.len() {
        return Err(field("schema.vertices", "duplicate vertex"));
    }
    for u in repr.schema.f.keys().chain(repr.schema.w.keys()) {
        if !declared.contains(u) {
            return Err(field("schema", format!("entry for undeclared vertex {u}")));
        }
    }
    for u in &declared {
        if !repr.schema.f.contains_key(*u) {
            return Err(field("schema.f", format!("no image for {u}")));
        }
        if !repr.schema.w.contains_key(*u) {
            return Err(field("schema.w", format!("no weight for {u}")));
        }
    }
    let f = repr
        .schema
        .f
        .iter()
        .map(|(a, b)| (SchemaVertexId::new(a.clone()), SchemaVertexId::new(b.clone())))
        .collect();
    let w = repr
        .schema
        .w
        .iter()
        .map(|(a, n)| (SchemaVertexId::new(a.clone()), *n))
        .collect();
    let schema = MappingSchema::new(f, w).map_err(|e| field("schema.f", e.to_string()))?;

    let mut trees = BTreeMap::new();
    for (u, tr) in &repr.trees {
        let path = format!("trees.{u}");
        let names: BTreeSet<&String> = tr.vertices.iter().collect();
        if names.len() != tr.vertices.len() {
            return Err(field(path, "duplicate vertex"));
        }
        for v in tr.ring.keys() {
            if !names.contains(v) {
                return Err(field(
                    format!("{path}.ring"),
                    format!("ring for undeclared vertex {v}"),
                ));
            }
        }
        let mut rings = BTreeMap::new();
        for v in &tr.vertices {
            let spokes = tr
                .ring
                .get(v)
                .ok_or_else(|| field(format!("{path}.ring"), format!("no ring for {v}")))?;
            let mut ring = Vec::with_capacity(spokes.len());
            for (to, gap) in spokes {
                if !names.contains(to) {
                    return Err(field(
                        format!("{path}.ring.{v}"),
                        format!("unknown neighbor {to}"),
                    ));
                }
                let gap = parse_rational(gap)
                    .map_err(|e| field(format!("{path}.ring.{v}"), e.to_string()))?;
                ring.push(Spoke::new(to.clone(), gap));
            }
            rings.insert(VertexId::new(v.clone()), ring);
        }
        let tree = AngledTree::new(rings).map_err(|e| field(path.clone(), e.to_string()))?;
        let mut listed = BTreeSet::new();
        for (a, b) in &tr.edges {
            if a == b || !listed.insert((a.min(b).as_str(), a.max(b).as_str())) {
                return Err(field(format!("{path}.edges"), format!("bad edge {a}-{b}")));
            }
        }
        let tree_edges = tree.edges();
        let derived: BTreeSet<(&str, &str)> = tree_edges
            .iter()
            .map(|e| {
                let (a, b) = e.ends();
                (a.as_str(), b.as_str())
            })
            .collect();
        if listed != derived {
            return Err(field(
                format!("{path}.edges"),
                "edge list disagrees with the rings",
            ));
        }
        trees.insert(SchemaVertexId::new(u.clone()), tree);
    }

    let maps = repr
        .coverings
        .iter()
        .map(|(u, cv)| {
            (
                SchemaVertexId::new(u.clone()),
                cv.map
                    .iter()
                    .map(|(a, b)| (VertexId::new(a.clone()), VertexId::new(b.clone())))
                    .collect(),
            )
        })
        .collect();
    let degrees = repr
        .coverings
        .iter()
        .map(|(u, cv)| {
            (
                SchemaVertexId::new(u.clone()),
                cv.degrees
                    .iter()
                    .map(|(a, d)| (VertexId::new(a.clone()), *d))
                    .collect(),
            )
        })
        .collect();

    let marked = match repr.marked {
        None => None,
        Some(list) => {
            let mut set = BTreeSet::new();
            for name in list {
                if !set.insert(VertexId::new(name.clone())) {
                    return Err(field("marked", format!("duplicate vertex {name}")));
                }
            }
            Some(set)
        }
    };

    let forest = HubbardForest::new(schema, trees, maps, degrees)?;
    Ok(Document { forest, marked })
}

/// Serializes a document canonically: sorted keys and lists, canonical ring
/// rotations, reduced `p/q` fractions, pretty-printed with a trailing
/// newline.
pub fn serialize_document(doc: &Document) -> String {
    let forest = &doc.forest;
    let schema = forest.schema();
    let repr = DocumentRepr {
        format: FORMAT_VERSION,
        schema: SchemaRepr {
            vertices: schema.vertices().map(ToString::to_string).collect(),
            f: schema
                .map()
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            w: schema
                .weights()
                .iter()
                .map(|(a, n)| (a.to_string(), *n))
                .collect(),
        },
        trees: forest
            .trees()
            .iter()
            .map(|(u, t)| {
                (
                    u.to_string(),
                    TreeRepr {
                        vertices: t.vertices().map(ToString::to_string).collect(),
                        edges: t
                            .edges()
                            .iter()
                            .map(|e| {
                                let (a, b) = e.ends();
                                (a.to_string(), b.to_string())
                            })
                            .collect(),
                        ring: t
                            .vertices()
                            .map(|v| {
                                (
                                    v.to_string(),
                                    t.ring(v)
                                        .iter()
                                        .map(|s| (s.to.to_string(), format_rational(&s.gap)))
                                        .collect(),
                                )
                            })
                            .collect(),
                    },
                )
            })
            .collect(),
        coverings: forest
            .trees()
            .keys()
            .map(|u| {
                (
                    u.to_string(),
                    CoveringRepr {
                        map: forest
                            .map_at(u)
                            .iter()
                            .map(|(a, b)| (a.to_string(), b.to_string()))
                            .collect(),
                        degrees: forest
                            .degrees_at(u)
                            .iter()
                            .map(|(a, d)| (a.to_string(), *d))
                            .collect(),
                    },
                )
            })
            .collect(),
        marked: doc
            .marked
            .as_ref()
            .map(|m| m.iter().map(ToString::to_string).collect()),
    };
    let mut out =
        serde_json::to_string_pretty(&repr).expect("document serialization is infallible");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::test_fixtures::{basilica_forest, vid};

    fn basilica_doc() -> Document {
        Document {
            forest: basilica_forest(),
            marked: None,
        }
    }

    #[test]
    fn round_trips_are_bit_exact() {
        let doc = basilica_doc();
        let text = serialize_document(&doc);
        assert!(text.ends_with("}\n"));
        let back = parse_document(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(serialize_document(&back), text);
    }

    #[test]
    fn marked_vertices_survive_the_trip() {
        let mut doc = basilica_doc();
        doc.marked = Some([vid("a"), vid("0")].into_iter().collect());
        let text = serialize_document(&doc);
        assert!(text.contains("\"marked\""));
        assert_eq!(parse_document(&text).unwrap(), doc);
        assert!(!serialize_document(&basilica_doc()).contains("\"marked\""));
    }

    #[test]
    fn unreduced_fractions_are_rejected() {
        let text = serialize_document(&basilica_doc()).replace("1/2", "2/4");
        match parse_document(&text).unwrap_err() {
            DocError::Field { path, .. } => assert_eq!(path, "trees.u.ring.a"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn missing_covering_names_the_schema_vertex() {
        let doc = basilica_doc();
        let mut repr: DocumentRepr =
            serde_json::from_str(&serialize_document(&doc)).unwrap();
        repr.coverings.clear();
        let text = serde_json::to_string(&repr).unwrap();
        match parse_document(&text).unwrap_err() {
            DocError::Structure(ForestStructureError::MissingCovering(u)) => {
                assert_eq!(u.as_str(), "u");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn unknown_fields_and_bad_versions_are_rejected() {
        let text = serialize_document(&basilica_doc());
        let extra = text.replace("\"format\": 1,", "\"format\": 1,\n  \"extra\": 0,");
        assert!(matches!(parse_document(&extra), Err(DocError::Json(_))));
        let wrong = text.replace("\"format\": 1,", "\"format\": 2,");
        match parse_document(&wrong).unwrap_err() {
            DocError::Field { path, .. } => assert_eq!(path, "format"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn edge_list_must_match_the_rings() {
        let doc = basilica_doc();
        let mut repr: DocumentRepr =
            serde_json::from_str(&serialize_document(&doc)).unwrap();
        repr.trees.get_mut("u").unwrap().edges.pop();
        let text = serde_json::to_string(&repr).unwrap();
        match parse_document(&text).unwrap_err() {
            DocError::Field { path, .. } => assert_eq!(path, "trees.u.edges"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn duplicate_marked_vertices_are_rejected() {
        let text = serialize_document(&basilica_doc())
            .replace("\"format\": 1,", "\"format\": 1,\n  \"marked\": [\"a\", \"a\"],");
        match parse_document(&text).unwrap_err() {
            DocError::Field { path, .. } => assert_eq!(path, "marked"),
            other => panic!("unexpected error {other}"),
        }
    }
}
