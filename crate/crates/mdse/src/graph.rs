//! Graph data model: complete hypothesis groups, star/prime events, weighted
//! directed edges, freezing, and structural validation.
//!
//! A graph is built incrementally, then [`frozen`](MdseGraph::freeze). Freezing
//! consumes the builder, computes the shape counters and adjacency, and makes
//! the graph an immutable value; every query in the crate operates on frozen
//! graphs only. Mutating a frozen graph is an error, querying an unfrozen one
//! is an error.
//!
//! Structural legality is enforced at two layers: the builder rejects
//! locally detectable mistakes at insertion time (loops, duplicate edges,
//! illegal directions), and [`MdseGraph::validate`] re-checks the whole
//! frozen graph, including graphs assembled from untrusted raw parts via
//! [`MdseGraph::from_raw_parts`].

use std::fmt;

use thiserror::Error;

use crate::NORMALIZATION_TOLERANCE;

/// Identifier of a vertex (hypothesis or event). Dense, assigned in
/// insertion order from a single counter, so ascending-id iteration is a
/// deterministic total order over vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) usize);

impl NodeId {
    pub fn new(index: usize) -> Self {
        NodeId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifier of a hypothesis group: its zero-based position among groups.
///
/// Groups are not vertices; keeping their ids in a separate namespace from
/// [`NodeId`] avoids an entire class of referential mix-ups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(pub(crate) usize);

impl GroupId {
    pub fn new(index: usize) -> Self {
        GroupId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which event family a hypothesis group canonically feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupRole {
    /// Feeds star events (the interior event layer).
    StarGroup,
    /// Feeds prime events (the sink layer).
    PrimeGroup,
}

/// Event family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    /// Depends only on hypotheses; may feed prime events.
    Star,
    /// Depends on hypotheses and/or star events; outdegree is always empty.
    Prime,
}

/// A complete group of mutually exclusive hypotheses. Priors sum to 1 within
/// [`NORMALIZATION_TOLERANCE`]; hypothesis vertices never receive edges.
#[derive(Debug, Clone)]
pub struct HypothesisGroup {
    pub group_id: GroupId,
    pub role: GroupRole,
    /// `(vertex, prior)` in insertion order, which is ascending `NodeId`.
    pub members: Vec<(NodeId, f64)>,
}

/// An event vertex.
#[derive(Debug, Clone)]
pub struct EventNode {
    pub id: NodeId,
    pub kind: EventKind,
    pub label: Option<String>,
}

/// Directed weighted edge. The weight is the conditional probability of the
/// target occurring given the source (a true hypothesis, or an occurred star
/// event).
#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub weight: f64,
}

/// Shape counters of a frozen graph.
///
/// `n` events split into `i` star and `k` prime events (`n = i + k`);
/// `m` hypotheses across all groups; `v = n + m` vertices; `e` edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GraphShape {
    pub n: usize,
    pub m: usize,
    pub i: usize,
    pub k: usize,
    pub e: usize,
    pub v: usize,
}

#[derive(Debug, Clone)]
enum VertexClass {
    Hypothesis { group: usize, member: usize },
    Event { index: usize },
}

/// Errors raised while building a graph.
#[derive(Debug, Error, PartialEq)]
pub enum BuildError {
    #[error("graph is frozen; no further mutation is allowed")]
    Frozen,
    #[error("priors must be non-empty")]
    EmptyPriors,
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("priors sum to {sum}, expected 1 within {tolerance}")]
    NotNormalized { sum: f64, tolerance: f64 },
    #[error("unknown vertex id {0}")]
    UnknownId(NodeId),
    #[error("self-edge on vertex {0}")]
    LoopDetected(NodeId),
    #[error("duplicate edge {src} -> {dst}")]
    DuplicateEdge { src: NodeId, dst: NodeId },
    #[error("illegal edge direction {src} -> {dst}: {reason}")]
    BadDirection {
        src: NodeId,
        dst: NodeId,
        reason: &'static str,
    },
}

/// Errors raised by queries on a graph.
#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("graph is not frozen; freeze it before querying")]
    NotFrozen,
    #[error("unknown vertex id {0}")]
    UnknownId(NodeId),
}

/// How much of the structural contract to enforce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    /// Structural sanity: loops, multi-edges, edge directions, isolation,
    /// acyclicity.
    Relaxed,
    /// Everything in `Relaxed` plus the definitional minimum sizes and the
    /// per-class degree intervals.
    Strict,
}

/// Stable identifier of a validation rule. Rendered kebab-case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    Loop,
    MultiEdge,
    UnknownEndpoint,
    HypothesisIndegree,
    PrimeOutdegree,
    StarToStar,
    IsolatedVertex,
    Cycle,
    MinVertices,
    MinEdges,
    HypothesisOutdegreeMin,
    HypothesisOutdegreeMax,
    StarIndegreeMin,
    StarIndegreeMax,
    StarOutdegreeMin,
    StarOutdegreeMax,
    PrimeIndegreeMin,
    PrimeIndegreeMax,
}

impl RuleId {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleId::Loop => "loop",
            RuleId::MultiEdge => "multi-edge",
            RuleId::UnknownEndpoint => "unknown-endpoint",
            RuleId::HypothesisIndegree => "hypothesis-indegree",
            RuleId::PrimeOutdegree => "prime-outdegree",
            RuleId::StarToStar => "star-to-star",
            RuleId::IsolatedVertex => "isolated-vertex",
            RuleId::Cycle => "cycle",
            RuleId::MinVertices => "min-vertices",
            RuleId::MinEdges => "min-edges",
            RuleId::HypothesisOutdegreeMin => "hypothesis-outdegree-min",
            RuleId::HypothesisOutdegreeMax => "hypothesis-outdegree-max",
            RuleId::StarIndegreeMin => "star-indegree-min",
            RuleId::StarIndegreeMax => "star-indegree-max",
            RuleId::StarOutdegreeMin => "star-outdegree-min",
            RuleId::StarOutdegreeMax => "star-outdegree-max",
            RuleId::PrimeIndegreeMin => "prime-indegree-min",
            RuleId::PrimeIndegreeMax => "prime-indegree-max",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A single validation finding.
#[derive(Debug, Clone)]
pub struct Violation {
    pub rule: RuleId,
    pub detail: String,
}

/// Result of [`MdseGraph::validate`]. `passed` holds exactly when
/// `violations` is empty.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn rules(&self) -> Vec<RuleId> {
        self.violations.iter().map(|v| v.rule).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            ValidationMode::Relaxed => "relaxed",
            ValidationMode::Strict => "strict",
        };
        if self.passed {
            writeln!(f, "PASS ({mode}): no violations")?;
        } else {
            writeln!(f, "FAIL ({mode}): {} violation(s)", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  {}: {}", v.rule, v.detail)?;
            }
        }
        Ok(())
    }
}

/// Degree-sum diagnostic of a frozen graph.
///
/// In any digraph the indegree sum, the outdegree sum, and the edge count
/// coincide; the first three fields exhibit that identity. The last two carry
/// the model's own degree-sum accounting: `classwise_max_degree_sum = n + 2m`
/// (adding up the per-class maximum contributions) and `dense_degree_sum =
/// (n + m)(n + m - 1)` (every ordered vertex pair). The two disagree on
/// essentially every shape, which is why neither is usable as a handshake
/// bound; they are reported so the disagreement can be observed directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HandshakeReport {
    pub sum_indegree: usize,
    pub sum_outdegree: usize,
    pub edge_count: usize,
    pub classwise_max_degree_sum: usize,
    pub dense_degree_sum: usize,
}

/// Per-vertex degree report: actual degrees plus the strict-mode total-degree
/// interval for the vertex's class.
///
/// Hypotheses: `[1, members-of-role]` (indegree is always 0). Star events:
/// `[2, k + star-group members]`. Prime events: `[2, i + prime-group
/// members]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBounds {
    pub indegree: usize,
    pub outdegree: usize,
    pub min_degree: usize,
    pub max_degree: usize,
}

/// Reference upper envelope for the edge count of a graph with `n` events
/// and `m` hypotheses: `(n + m)(n + m + 1) / 2`.
///
/// This is the model's stated accounting value. It is inconsistent both with
/// the structural constraints (which admit at most one edge per ordered pair
/// of distinct vertices) and with the dense degree-sum in
/// [`HandshakeReport`], so validation never enforces it; it exists as a
/// documented reference quantity.
pub fn max_edge_bound(n: usize, m: usize) -> usize {
    let s = n + m;
    s * (s + 1) / 2
}

/// The pseudo-bipartite hypothesis/event graph.
///
/// One type serves as both the builder and the frozen value: `add_*` methods
/// work until [`freeze`](Self::freeze), queries work after it.
#[derive(Debug, Clone, Default)]
pub struct MdseGraph {
    groups: Vec<HypothesisGroup>,
    events: Vec<EventNode>,
    edges: Vec<Edge>,
    vertices: Vec<VertexClass>,
    frozen: bool,
    shape: GraphShape,
    /// Edge indices by target, hypothesis sources first, then event sources,
    /// ascending id within each block. This order is invariant under the
    /// canonical renumbering done by serialization, which keeps summation
    /// order (and therefore bits) stable across a round-trip.
    in_edges: Vec<Vec<usize>>,
    out_degree: Vec<usize>,
    relaxed_ok: bool,
    /// Ordered pairs already present; keeps duplicate detection O(1) during
    /// bulk construction.
    edge_pairs: std::collections::HashSet<(NodeId, NodeId)>,
}

impl MdseGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a complete group of hypotheses with the given priors.
    /// Returns the fresh vertex ids in member order.
    pub fn add_hypothesis_group(
        &mut self,
        priors: &[f64],
        role: GroupRole,
    ) -> Result<Vec<NodeId>, BuildError> {
        if self.frozen {
            return Err(BuildError::Frozen);
        }
        if priors.is_empty() {
            return Err(BuildError::EmptyPriors);
        }
        for &p in priors {
            if !(0.0..=1.0).contains(&p) {
                return Err(BuildError::OutOfRange(p));
            }
        }
        let sum: f64 = priors.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(BuildError::NotNormalized {
                sum,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        }
        let group = self.groups.len();
        let mut ids = Vec::with_capacity(priors.len());
        let mut members = Vec::with_capacity(priors.len());
        for (member, &p) in priors.iter().enumerate() {
            let id = NodeId(self.vertices.len());
            self.vertices.push(VertexClass::Hypothesis { group, member });
            ids.push(id);
            members.push((id, p));
        }
        self.groups.push(HypothesisGroup {
            group_id: GroupId(group),
            role,
            members,
        });
        Ok(ids)
    }

    /// Appends an event vertex and returns its id.
    pub fn add_event(&mut self, kind: EventKind) -> Result<NodeId, BuildError> {
        self.push_event(kind, None)
    }

    pub fn add_event_with_label(
        &mut self,
        kind: EventKind,
        label: &str,
    ) -> Result<NodeId, BuildError> {
        self.push_event(kind, Some(label.to_owned()))
    }

    fn push_event(&mut self, kind: EventKind, label: Option<String>) -> Result<NodeId, BuildError> {
        if self.frozen {
            return Err(BuildError::Frozen);
        }
        let id = NodeId(self.vertices.len());
        self.vertices.push(VertexClass::Event {
            index: self.events.len(),
        });
        self.events.push(EventNode { id, kind, label });
        Ok(id)
    }

    /// Adds a directed edge carrying `P(dst | src)`.
    ///
    /// Legal directions are hypothesis -> event and star event -> prime
    /// event; everything else is rejected, as are self-edges, duplicate
    /// `(src, dst)` pairs, and weights outside `[0, 1]`.
    pub fn add_edge(&mut self, src: NodeId, dst: NodeId, weight: f64) -> Result<(), BuildError> {
        if self.frozen {
            return Err(BuildError::Frozen);
        }
        if src.0 >= self.vertices.len() {
            return Err(BuildError::UnknownId(src));
        }
        if dst.0 >= self.vertices.len() {
            return Err(BuildError::UnknownId(dst));
        }
        if src == dst {
            return Err(BuildError::LoopDetected(src));
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(BuildError::OutOfRange(weight));
        }
        if self.edge_pairs.contains(&(src, dst)) {
            return Err(BuildError::DuplicateEdge { src, dst });
        }
        let reason = match (&self.vertices[src.0], &self.vertices[dst.0]) {
            (_, VertexClass::Hypothesis { .. }) => Some("target is a hypothesis"),
            (VertexClass::Event { index }, VertexClass::Event { index: dst_index }) => {
                match (self.events[*index].kind, self.events[*dst_index].kind) {
                    (EventKind::Prime, _) => Some("source is a prime event"),
                    (EventKind::Star, EventKind::Star) => {
                        Some("star events cannot feed star events")
                    }
                    (EventKind::Star, EventKind::Prime) => None,
                }
            }
            (VertexClass::Hypothesis { .. }, VertexClass::Event { .. }) => None,
        };
        if let Some(reason) = reason {
            return Err(BuildError::BadDirection { src, dst, reason });
        }
        self.edge_pairs.insert((src, dst));
        self.edges.push(Edge { src, dst, weight });
        Ok(())
    }

    /// Consumes the builder and returns the frozen, immutable graph with
    /// computed shape and adjacency. Freezing an already frozen graph is the
    /// identity.
    pub fn freeze(mut self) -> MdseGraph {
        if self.frozen {
            return self;
        }
        self.frozen = true;
        self.rebuild_derived();
        self
    }

    /// Assembles a frozen graph directly from raw parts, bypassing every
    /// builder check.
    ///
    /// Groups are `(role, priors)`, events are `(kind, label)`, and edges
    /// reference vertices by the canonical implicit numbering: hypotheses
    /// first in group/member order, then events, zero-based. Nothing is
    /// checked, not even that edge endpoints exist; run
    /// [`validate`](Self::validate) to diagnose the result. Queries on a
    /// structurally invalid raw graph are refused.
    pub fn from_raw_parts(
        groups: Vec<(GroupRole, Vec<f64>)>,
        events: Vec<(EventKind, Option<String>)>,
        edges: Vec<(usize, usize, f64)>,
    ) -> MdseGraph {
        let mut g = MdseGraph::new();
        for (group, (role, priors)) in groups.into_iter().enumerate() {
            let mut members = Vec::with_capacity(priors.len());
            for (member, p) in priors.into_iter().enumerate() {
                let id = NodeId(g.vertices.len());
                g.vertices.push(VertexClass::Hypothesis { group, member });
                members.push((id, p));
            }
            g.groups.push(HypothesisGroup {
                group_id: GroupId(group),
                role,
                members,
            });
        }
        for (kind, label) in events {
            let id = NodeId(g.vertices.len());
            g.vertices.push(VertexClass::Event {
                index: g.events.len(),
            });
            g.events.push(EventNode { id, kind, label });
        }
        for (src, dst, weight) in edges {
            g.edges.push(Edge {
                src: NodeId(src),
                dst: NodeId(dst),
                weight,
            });
        }
        g.frozen = true;
        g.rebuild_derived();
        g
    }

    fn rebuild_derived(&mut self) {
        let i = self
            .events
            .iter()
            .filter(|e| e.kind == EventKind::Star)
            .count();
        let n = self.events.len();
        let m: usize = self.groups.iter().map(|g| g.members.len()).sum();
        self.shape = GraphShape {
            n,
            m,
            i,
            k: n - i,
            e: self.edges.len(),
            v: n + m,
        };
        let v = self.vertices.len();
        self.in_edges = vec![Vec::new(); v];
        self.out_degree = vec![0; v];
        for (idx, e) in self.edges.iter().enumerate() {
            // Edges with endpoints outside the vertex table can only come
            // from raw parts; they are flagged by validate and skipped here.
            if e.src.0 < v && e.dst.0 < v {
                self.in_edges[e.dst.0].push(idx);
                self.out_degree[e.src.0] += 1;
            }
        }
        for list in &mut self.in_edges {
            list.sort_by_key(|&idx| {
                let src = self.edges[idx].src;
                (matches!(self.vertices[src.0], VertexClass::Event { .. }), src)
            });
        }
        self.relaxed_ok = self.run_validation(ValidationMode::Relaxed).is_empty();
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Shape counters. Computed at freeze time; zeroed before that.
    pub fn shape(&self) -> GraphShape {
        self.shape
    }

    pub fn groups(&self) -> &[HypothesisGroup] {
        &self.groups
    }

    pub fn events(&self) -> &[EventNode] {
        &self.events
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn group(&self, id: GroupId) -> Option<&HypothesisGroup> {
        self.groups.get(id.0)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id.0 < self.vertices.len()
    }

    pub fn is_hypothesis(&self, id: NodeId) -> bool {
        matches!(
            self.vertices.get(id.0),
            Some(VertexClass::Hypothesis { .. })
        )
    }

    /// Event kind of `id`, or `None` when `id` is not an event vertex.
    pub fn event_kind(&self, id: NodeId) -> Option<EventKind> {
        match self.vertices.get(id.0)? {
            VertexClass::Event { index } => Some(self.events[*index].kind),
            VertexClass::Hypothesis { .. } => None,
        }
    }

    /// Prior probability of a hypothesis vertex.
    pub fn prior(&self, id: NodeId) -> Option<f64> {
        match self.vertices.get(id.0)? {
            VertexClass::Hypothesis { group, member } => {
                Some(self.groups[*group].members[*member].1)
            }
            VertexClass::Event { .. } => None,
        }
    }

    /// Group owning a hypothesis vertex.
    pub fn group_of(&self, id: NodeId) -> Option<GroupId> {
        match self.vertices.get(id.0)? {
            VertexClass::Hypothesis { group, .. } => Some(GroupId(*group)),
            VertexClass::Event { .. } => None,
        }
    }

    /// In-edges of `id`, hypothesis sources first, then event sources,
    /// ascending id within each block.
    pub fn parents(&self, id: NodeId) -> &[usize] {
        self.in_edges.get(id.0).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    /// Weight of the `src -> dst` edge, if present.
    pub fn weight(&self, src: NodeId, dst: NodeId) -> Option<f64> {
        self.parents(dst)
            .iter()
            .map(|&idx| &self.edges[idx])
            .find(|e| e.src == src)
            .map(|e| e.weight)
    }

    pub fn indegree(&self, id: NodeId) -> usize {
        self.parents(id).len()
    }

    pub fn outdegree(&self, id: NodeId) -> usize {
        self.out_degree.get(id.0).copied().unwrap_or(0)
    }

    /// Total member count of star-role groups.
    pub fn star_member_total(&self) -> usize {
        self.role_member_total(GroupRole::StarGroup)
    }

    /// Total member count of prime-role groups.
    pub fn prime_member_total(&self) -> usize {
        self.role_member_total(GroupRole::PrimeGroup)
    }

    fn role_member_total(&self, role: GroupRole) -> usize {
        self.groups
            .iter()
            .filter(|g| g.role == role)
            .map(|g| g.members.len())
            .sum()
    }

    /// Whether the frozen graph passes relaxed validation. Cached at freeze
    /// time so queries can gate on it in O(1).
    pub fn relaxed_valid(&self) -> bool {
        self.frozen && self.relaxed_ok
    }

    /// Checks the graph against the structural contract.
    pub fn validate(&self, mode: ValidationMode) -> Result<ValidationReport, GraphError> {
        if !self.frozen {
            return Err(GraphError::NotFrozen);
        }
        let violations = self.run_validation(mode);
        Ok(ValidationReport {
            mode,
            passed: violations.is_empty(),
            violations,
        })
    }

    fn run_validation(&self, mode: ValidationMode) -> Vec<Violation> {
        let mut out = Vec::new();
        let v = self.vertices.len();

        // Per-edge rules. An edge failing an earlier rule is not re-reported
        // under later ones.
        let mut seen_pairs = std::collections::HashSet::new();
        for e in &self.edges {
            if e.src.0 >= v || e.dst.0 >= v {
                out.push(Violation {
                    rule: RuleId::UnknownEndpoint,
                    detail: format!("edge {} -> {} references a missing vertex", e.src, e.dst),
                });
                continue;
            }
            if e.src == e.dst {
                out.push(Violation {
                    rule: RuleId::Loop,
                    detail: format!("self-edge on vertex {}", e.src),
                });
                continue;
            }
            if !seen_pairs.insert((e.src, e.dst)) {
                out.push(Violation {
                    rule: RuleId::MultiEdge,
                    detail: format!("duplicate edge {} -> {}", e.src, e.dst),
                });
                continue;
            }
            match (&self.vertices[e.src.0], &self.vertices[e.dst.0]) {
                (_, VertexClass::Hypothesis { .. }) => out.push(Violation {
                    rule: RuleId::HypothesisIndegree,
                    detail: format!("hypothesis {} has incoming edge from {}", e.dst, e.src),
                }),
                (VertexClass::Event { index }, VertexClass::Event { index: dst_index }) => {
                    match (self.events[*index].kind, self.events[*dst_index].kind) {
                        (EventKind::Prime, _) => out.push(Violation {
                            rule: RuleId::PrimeOutdegree,
                            detail: format!("prime event {} has outgoing edge to {}", e.src, e.dst),
                        }),
                        (EventKind::Star, EventKind::Star) => out.push(Violation {
                            rule: RuleId::StarToStar,
                            detail: format!("star event {} feeds star event {}", e.src, e.dst),
                        }),
                        (EventKind::Star, EventKind::Prime) => {}
                    }
                }
                (VertexClass::Hypothesis { .. }, VertexClass::Event { .. }) => {}
            }
        }

        // Isolation: a vertex with no edge at all does not belong to the
        // space and renders it incoherent.
        for id in 0..v {
            if self.indegree(NodeId(id)) == 0 && self.outdegree(NodeId(id)) == 0 {
                out.push(Violation {
                    rule: RuleId::IsolatedVertex,
                    detail: format!("vertex {id} has no edges"),
                });
            }
        }

        // Acyclicity via Kahn's algorithm over edges with valid distinct
        // endpoints (self-edges are already reported as loops).
        if let Some(cyclic) = self.find_cycle_vertices() {
            out.push(Violation {
                rule: RuleId::Cycle,
                detail: format!(
                    "directed cycle through vertices {:?}",
                    cyclic.iter().map(|n| n.0).collect::<Vec<_>>()
                ),
            });
        }

        if mode == ValidationMode::Strict {
            self.check_strict(&mut out);
        }
        out
    }

    fn find_cycle_vertices(&self) -> Option<Vec<NodeId>> {
        let v = self.vertices.len();
        let mut indeg = vec![0usize; v];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); v];
        for e in &self.edges {
            if e.src.0 < v && e.dst.0 < v && e.src != e.dst {
                adj[e.src.0].push(e.dst.0);
                indeg[e.dst.0] += 1;
            }
        }
        let mut queue: Vec<usize> = (0..v).filter(|&id| indeg[id] == 0).collect();
        let mut removed = 0usize;
        while let Some(id) = queue.pop() {
            removed += 1;
            for &next in &adj[id] {
                indeg[next] -= 1;
                if indeg[next] == 0 {
                    queue.push(next);
                }
            }
        }
        if removed == v {
            None
        } else {
            let mut cyclic: Vec<NodeId> = (0..v)
                .filter(|&id| indeg[id] > 0)
                .map(NodeId)
                .collect();
            cyclic.sort();
            Some(cyclic)
        }
    }

    fn check_strict(&self, out: &mut Vec<Violation>) {
        const MIN_VERTICES: usize = 4;
        const MIN_EDGES: usize = 3;
        if self.shape.v < MIN_VERTICES {
            out.push(Violation {
                rule: RuleId::MinVertices,
                detail: format!("{} vertices, minimum is {MIN_VERTICES}", self.shape.v),
            });
        }
        if self.shape.e < MIN_EDGES {
            out.push(Violation {
                rule: RuleId::MinEdges,
                detail: format!("{} edges, minimum is {MIN_EDGES}", self.shape.e),
            });
        }
        let star_members = self.star_member_total();
        let prime_members = self.prime_member_total();
        let (i, k) = (self.shape.i, self.shape.k);
        for group in &self.groups {
            let cap = match group.role {
                GroupRole::StarGroup => star_members,
                GroupRole::PrimeGroup => prime_members,
            };
            for &(id, _) in &group.members {
                let out_deg = self.outdegree(id);
                if out_deg < 1 {
                    out.push(Violation {
                        rule: RuleId::HypothesisOutdegreeMin,
                        detail: format!("hypothesis {id} has outdegree 0, minimum is 1"),
                    });
                } else if out_deg > cap {
                    out.push(Violation {
                        rule: RuleId::HypothesisOutdegreeMax,
                        detail: format!("hypothesis {id} has outdegree {out_deg}, maximum is {cap}"),
                    });
                }
            }
        }
        for event in &self.events {
            let in_deg = self.indegree(event.id);
            let out_deg = self.outdegree(event.id);
            match event.kind {
                EventKind::Star => {
                    if in_deg < 1 {
                        out.push(Violation {
                            rule: RuleId::StarIndegreeMin,
                            detail: format!("star event {} has indegree 0, minimum is 1", event.id),
                        });
                    } else if in_deg > star_members {
                        out.push(Violation {
                            rule: RuleId::StarIndegreeMax,
                            detail: format!(
                                "star event {} has indegree {in_deg}, maximum is {star_members}",
                                event.id
                            ),
                        });
                    }
                    if out_deg < 1 {
                        out.push(Violation {
                            rule: RuleId::StarOutdegreeMin,
                            detail: format!(
                                "star event {} has outdegree 0, minimum is 1",
                                event.id
                            ),
                        });
                    } else if out_deg > k {
                        out.push(Violation {
                            rule: RuleId::StarOutdegreeMax,
                            detail: format!(
                                "star event {} has outdegree {out_deg}, maximum is {k}",
                                event.id
                            ),
                        });
                    }
                }
                EventKind::Prime => {
                    let cap = i + prime_members;
                    if in_deg < 2 {
                        out.push(Violation {
                            rule: RuleId::PrimeIndegreeMin,
                            detail: format!(
                                "prime event {} has indegree {in_deg}, minimum is 2",
                                event.id
                            ),
                        });
                    } else if in_deg > cap {
                        out.push(Violation {
                            rule: RuleId::PrimeIndegreeMax,
                            detail: format!(
                                "prime event {} has indegree {in_deg}, maximum is {cap}",
                                event.id
                            ),
                        });
                    }
                }
            }
        }
    }

    /// Actual degrees of `id` plus the strict total-degree interval for its
    /// class.
    pub fn degree_bounds(&self, id: NodeId) -> Result<DegreeBounds, GraphError> {
        if !self.frozen {
            return Err(GraphError::NotFrozen);
        }
        let class = self.vertices.get(id.0).ok_or(GraphError::UnknownId(id))?;
        let (min_degree, max_degree) = match class {
            VertexClass::Hypothesis { group, .. } => {
                let cap = match self.groups[*group].role {
                    GroupRole::StarGroup => self.star_member_total(),
                    GroupRole::PrimeGroup => self.prime_member_total(),
                };
                (1, cap)
            }
            VertexClass::Event { index } => match self.events[*index].kind {
                EventKind::Star => (2, self.shape.k + self.star_member_total()),
                EventKind::Prime => (2, self.shape.i + self.prime_member_total()),
            },
        };
        Ok(DegreeBounds {
            indegree: self.indegree(id),
            outdegree: self.outdegree(id),
            min_degree,
            max_degree,
        })
    }

    /// Degree-sum identity plus the model's two disagreeing accounting
    /// formulas. See [`HandshakeReport`].
    pub fn handshake_report(&self) -> Result<HandshakeReport, GraphError> {
        if !self.frozen {
            return Err(GraphError::NotFrozen);
        }
        let v = self.vertices.len();
        let sum_indegree: usize = (0..v).map(|id| self.indegree(NodeId(id))).sum();
        let sum_outdegree: usize = (0..v).map(|id| self.outdegree(NodeId(id))).sum();
        let (n, m) = (self.shape.n, self.shape.m);
        Ok(HandshakeReport {
            sum_indegree,
            sum_outdegree,
            edge_count: self.edges.len(),
            classwise_max_degree_sum: n + 2 * m,
            dense_degree_sum: (n + m) * (n + m).saturating_sub(1),
        })
    }

    /// Copy of this graph with one group's priors replaced. Structure is
    /// untouched, so cached relaxed validity carries over.
    pub(crate) fn with_group_priors(&self, group: GroupId, priors: &[f64]) -> MdseGraph {
        debug_assert!(self.frozen);
        debug_assert_eq!(self.groups[group.0].members.len(), priors.len());
        let mut next = self.clone();
        for (slot, &p) in next.groups[group.0].members.iter_mut().zip(priors) {
            slot.1 = p;
        }
        next
    }
}
