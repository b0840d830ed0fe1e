//! The `.mdse` graph file format: UTF-8 JSON with implicit vertex ids.
//!
//! A document lists hypothesis groups, events, and edges. Vertex ids are
//! implicit: hypotheses are numbered first in group/member order, then
//! events, all zero-based — eliminating user-supplied ids removes an entire
//! class of referential-integrity mistakes. The format is text-based and
//! human-diffable so fixture files double as readable model descriptions.
//!
//! ```json
//! {
//!   "version": 1,
//!   "groups": [ { "role": "star", "priors": [0.4, 0.25, 0.35] } ],
//!   "events": [ { "kind": "star", "label": "default" } ],
//!   "edges": [ { "src": 0, "dst": 3, "weight": 0.7 } ]
//! }
//! ```
//!
//! [`serialize_graph`] emits the canonical form: keys in the order above,
//! groups/events/members in id order, edges sorted by `(src, dst)`, floats
//! in shortest round-trippable notation. Identical graphs serialize to
//! identical bytes, `parse(serialize(g))` preserves shape, validation, and
//! query results, and `serialize(parse(d))` canonicalizes `d`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BuildError, EventKind, GroupRole, MdseGraph, NodeId};

/// Current document version.
pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub version: u32,
    pub groups: Vec<GroupEntry>,
    pub events: Vec<EventEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupEntry {
    pub role: RoleTag,
    pub priors: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventEntry {
    pub kind: KindTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleTag {
    Star,
    Prime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    Star,
    Prime,
}

impl From<RoleTag> for GroupRole {
    fn from(tag: RoleTag) -> Self {
        match tag {
            RoleTag::Star => GroupRole::StarGroup,
            RoleTag::Prime => GroupRole::PrimeGroup,
        }
    }
}

impl From<GroupRole> for RoleTag {
    fn from(role: GroupRole) -> Self {
        match role {
            GroupRole::StarGroup => RoleTag::Star,
            GroupRole::PrimeGroup => RoleTag::Prime,
        }
    }
}

impl From<KindTag> for EventKind {
    fn from(tag: KindTag) -> Self {
        match tag {
            KindTag::Star => EventKind::Star,
            KindTag::Prime => EventKind::Prime,
        }
    }
}

impl From<EventKind> for KindTag {
    fn from(kind: EventKind) -> Self {
        match kind {
            EventKind::Star => KindTag::Star,
            EventKind::Prime => KindTag::Prime,
        }
    }
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("{location}: {source}")]
    Build {
        location: String,
        source: BuildError,
    },
}

impl DocumentError {
    pub fn build_error(&self) -> Option<&BuildError> {
        match self {
            DocumentError::Build { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// Parses document text without constructing a graph. Surfaces JSON syntax
/// and schema problems only.
pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| {
        if e.classify() == serde_json::error::Category::Data {
            DocumentError::Schema(e.to_string())
        } else {
            DocumentError::Syntax(e.to_string())
        }
    })?;
    if doc.version != DOCUMENT_VERSION {
        return Err(DocumentError::Schema(format!(
            "unsupported version {} (expected {DOCUMENT_VERSION})",
            doc.version
        )));
    }
    Ok(doc)
}

/// Builds a frozen graph from a document through the checked builder.
/// Builder rejections carry the offending document location.
pub fn build_graph(doc: &Document) -> Result<MdseGraph, DocumentError> {
    let mut builder = MdseGraph::new();
    for (idx, group) in doc.groups.iter().enumerate() {
        builder
            .add_hypothesis_group(&group.priors, group.role.into())
            .map_err(|source| DocumentError::Build {
                location: format!("groups[{idx}]"),
                source,
            })?;
    }
    for (idx, event) in doc.events.iter().enumerate() {
        let result = match &event.label {
            Some(label) => builder.add_event_with_label(event.kind.into(), label),
            None => builder.add_event(event.kind.into()),
        };
        result.map_err(|source| DocumentError::Build {
            location: format!("events[{idx}]"),
            source,
        })?;
    }
    for (idx, edge) in doc.edges.iter().enumerate() {
        builder
            .add_edge(NodeId::new(edge.src), NodeId::new(edge.dst), edge.weight)
            .map_err(|source| DocumentError::Build {
                location: format!("edges[{idx}]"),
                source,
            })?;
    }
    Ok(builder.freeze())
}

/// Assembles a frozen graph from a document with no structural checks, so
/// that [`MdseGraph::validate`] can report every problem instead of the
/// builder stopping at the first one. Prior and weight values are taken as
/// written.
pub fn raw_graph(doc: &Document) -> MdseGraph {
    MdseGraph::from_raw_parts(
        doc.groups
            .iter()
            .map(|g| (g.role.into(), g.priors.clone()))
            .collect(),
        doc.events
            .iter()
            .map(|e| (e.kind.into(), e.label.clone()))
            .collect(),
        doc.edges
            .iter()
            .map(|e| (e.src, e.dst, e.weight))
            .collect(),
    )
}

/// Parses and builds in one step: the strict route used by every consumer
/// that needs a well-formed graph.
pub fn parse_graph(text: &str) -> Result<MdseGraph, DocumentError> {
    build_graph(&parse_document(text)?)
}

/// Serializes a frozen graph to canonical document text.
///
/// Vertices are renumbered to the canonical implicit order (hypotheses
/// first, then events); relative order within each class is preserved, so a
/// round-trip keeps all iteration orders — and therefore all computed bits —
/// intact.
pub fn serialize_graph(graph: &MdseGraph) -> String {
    let mut doc_id = vec![usize::MAX; graph.vertex_count()];
    let mut next = 0;
    for group in graph.groups() {
        for &(id, _) in &group.members {
            doc_id[id.index()] = next;
            next += 1;
        }
    }
    for event in graph.events() {
        doc_id[event.id.index()] = next;
        next += 1;
    }

    let mut edges: Vec<EdgeEntry> = graph
        .edges()
        .iter()
        .map(|e| EdgeEntry {
            src: doc_id[e.src.index()],
            dst: doc_id[e.dst.index()],
            weight: e.weight,
        })
        .collect();
    edges.sort_by_key(|e| (e.src, e.dst));

    let doc = Document {
        version: DOCUMENT_VERSION,
        groups: graph
            .groups()
            .iter()
            .map(|g| GroupEntry {
                role: g.role.into(),
                priors: g.members.iter().map(|&(_, p)| p).collect(),
            })
            .collect(),
        events: graph
            .events()
            .iter()
            .map(|e| EventEntry {
                kind: e.kind.into(),
                label: e.label.clone(),
            })
            .collect(),
        edges,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serialization");
    text.push('\n');
    text
}
