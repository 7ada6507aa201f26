//! Typed entity graph extracted from a single ontology.
//!
//! Nodes are classified as concepts, sub-concepts, properties or instances
//! and connected by `Isa`, `InstanceOf` and `HasProperty` arcs. A graph is
//! immutable once built; entity order is the input-document order, and every
//! downstream index (score-matrix rows and columns) inherits it, so two runs
//! over the same bytes produce identical output.

use std::collections::{HashMap, HashSet};
use thiserror::Error;

/// Classification of a node in the entity graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntityKind {
    /// Class-like node without a superclass.
    Concept,
    /// Class-like node with at least one `Isa` arc to a parent class.
    SubConcept,
    /// Attribute or relation declared on a class.
    Property,
    /// Individual belonging to a class.
    Instance,
}

impl EntityKind {
    pub const ALL: [EntityKind; 4] = [
        EntityKind::Concept,
        EntityKind::SubConcept,
        EntityKind::Property,
        EntityKind::Instance,
    ];

    /// Concepts and sub-concepts both act as classes for arc typing.
    pub fn is_class_like(self) -> bool {
        matches!(self, EntityKind::Concept | EntityKind::SubConcept)
    }

    fn dump_keyword(self) -> &'static str {
        match self {
            EntityKind::Concept => "CONCEPT",
            EntityKind::SubConcept => "SUBCONCEPT",
            EntityKind::Property => "PROPERTY",
            EntityKind::Instance => "INSTANCE",
        }
    }
}

/// Index of an entity within its graph, assigned in insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntityId(usize);

impl EntityId {
    pub fn new(index: usize) -> EntityId {
        EntityId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

/// One node of the entity graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Entity {
    pub id: EntityId,
    /// Full resource identifier.
    pub uri: String,
    /// Normalized display label; never empty in a validated graph.
    pub label: String,
    pub kind: EntityKind,
}

/// Label of an arc between two entities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArcKind {
    /// SubConcept -> Concept | SubConcept.
    Isa,
    /// Instance -> Concept | SubConcept.
    InstanceOf,
    /// Concept | SubConcept -> Property.
    HasProperty,
}

impl ArcKind {
    pub fn dump_keyword(self) -> &'static str {
        match self {
            ArcKind::Isa => "ISA",
            ArcKind::InstanceOf => "INSTANCEOF",
            ArcKind::HasProperty => "HASPROPERTY",
        }
    }

    fn from_dump_keyword(word: &str) -> Option<ArcKind> {
        match word {
            "ISA" => Some(ArcKind::Isa),
            "INSTANCEOF" => Some(ArcKind::InstanceOf),
            "HASPROPERTY" => Some(ArcKind::HasProperty),
            _ => None,
        }
    }

    /// Entity kinds allowed at the source end of this arc.
    fn source_kinds(self) -> &'static [EntityKind] {
        match self {
            ArcKind::Isa => &[EntityKind::SubConcept],
            ArcKind::InstanceOf => &[EntityKind::Instance],
            ArcKind::HasProperty => &[EntityKind::Concept, EntityKind::SubConcept],
        }
    }

    /// Entity kinds allowed at the destination end of this arc.
    fn target_kinds(self) -> &'static [EntityKind] {
        match self {
            ArcKind::Isa | ArcKind::InstanceOf => &[EntityKind::Concept, EntityKind::SubConcept],
            ArcKind::HasProperty => &[EntityKind::Property],
        }
    }
}

/// A labeled arc between two entities of the same graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub source: EntityId,
    pub kind: ArcKind,
    pub target: EntityId,
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("entity {uri} has an empty label after normalization")]
    EmptyLabel { uri: String },
    #[error("duplicate entity uri {uri}")]
    DuplicateUri { uri: String },
    #[error("arc references undeclared resource {uri}")]
    UnknownReference { uri: String },
    #[error("{kind} arc from {from} to {to} violates arc typing")]
    InvalidArc {
        from: String,
        kind: &'static str,
        to: String,
    },
    #[error("entity {uri} declared {declared} but its ISA arcs say otherwise")]
    KindMismatch { uri: String, declared: &'static str },
    #[error("ISA arcs form a cycle through {uri}")]
    IsaCycle { uri: String },
    #[error("debug dump line {line}: {message}")]
    DumpSyntax { line: usize, message: String },
}

/// Entity kind as supplied by a parser, before validation.
///
/// `ClassLike` defers the Concept/SubConcept split to graph construction:
/// a class-like node becomes SubConcept exactly when it ends up with an
/// outgoing `Isa` arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PendingKind {
    ClassLike,
    Property,
    Instance,
    Fixed(EntityKind),
}

/// Entity as collected by a parser, keyed by uri.
#[derive(Debug, Clone)]
pub struct PendingEntity {
    pub uri: String,
    pub label: String,
    pub kind: PendingKind,
}

/// Arc as collected by a parser, endpoints by uri.
#[derive(Debug, Clone)]
pub struct PendingArc {
    pub source_uri: String,
    pub kind: ArcKind,
    pub target_uri: String,
}

/// In-memory typed graph of one parsed ontology.
#[derive(Debug, Clone, PartialEq)]
pub struct EntityGraph {
    ontology_uri: String,
    entities: Vec<Entity>,
    arcs: Vec<Arc>,
}

impl EntityGraph {
    /// Validate parser output and assemble the graph.
    ///
    /// Checks: non-empty labels, unique uris, arc endpoints resolve, arc
    /// typing holds, declared kinds agree with the ISA structure, and the
    /// ISA arcs form a DAG. Duplicate arcs are dropped, keeping the first.
    pub fn from_parts(
        ontology_uri: impl Into<String>,
        pending_entities: Vec<PendingEntity>,
        pending_arcs: Vec<PendingArc>,
    ) -> Result<EntityGraph, GraphError> {
        let mut index_of: HashMap<String, usize> = HashMap::new();
        for (i, e) in pending_entities.iter().enumerate() {
            if e.label.is_empty() {
                return Err(GraphError::EmptyLabel { uri: e.uri.clone() });
            }
            if index_of.insert(e.uri.clone(), i).is_some() {
                return Err(GraphError::DuplicateUri { uri: e.uri.clone() });
            }
        }

        let mut arcs: Vec<Arc> = Vec::with_capacity(pending_arcs.len());
        let mut seen: HashSet<(usize, ArcKind, usize)> = HashSet::new();
        for a in &pending_arcs {
            let src = *index_of
                .get(&a.source_uri)
                .ok_or_else(|| GraphError::UnknownReference {
                    uri: a.source_uri.clone(),
                })?;
            let dst = *index_of
                .get(&a.target_uri)
                .ok_or_else(|| GraphError::UnknownReference {
                    uri: a.target_uri.clone(),
                })?;
            if seen.insert((src, a.kind, dst)) {
                arcs.push(Arc {
                    source: EntityId(src),
                    kind: a.kind,
                    target: EntityId(dst),
                });
            }
        }

        let mut has_isa = vec![false; pending_entities.len()];
        for a in &arcs {
            if a.kind == ArcKind::Isa {
                has_isa[a.source.index()] = true;
            }
        }

        let entities: Vec<Entity> = pending_entities
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                let kind = match e.kind {
                    PendingKind::ClassLike if has_isa[i] => EntityKind::SubConcept,
                    PendingKind::ClassLike => EntityKind::Concept,
                    PendingKind::Property => EntityKind::Property,
                    PendingKind::Instance => EntityKind::Instance,
                    PendingKind::Fixed(k) => k,
                };
                Entity {
                    id: EntityId(i),
                    uri: e.uri,
                    label: e.label,
                    kind,
                }
            })
            .collect();

        for a in &arcs {
            let src = &entities[a.source.index()];
            let dst = &entities[a.target.index()];
            if !a.kind.source_kinds().contains(&src.kind) || !a.kind.target_kinds().contains(&dst.kind) {
                return Err(GraphError::InvalidArc {
                    from: src.uri.clone(),
                    kind: a.kind.dump_keyword(),
                    to: dst.uri.clone(),
                });
            }
        }

        // SubConcept iff at least one outgoing ISA arc. Derived kinds hold
        // by construction; fixed kinds can disagree.
        for e in &entities {
            let sub = e.kind == EntityKind::SubConcept;
            if sub != has_isa[e.id.index()] && e.kind.is_class_like() {
                return Err(GraphError::KindMismatch {
                    uri: e.uri.clone(),
                    declared: e.kind.dump_keyword(),
                });
            }
        }

        let graph = EntityGraph {
            ontology_uri: ontology_uri.into(),
            entities,
            arcs,
        };
        graph.check_isa_acyclic()?;
        Ok(graph)
    }

    fn check_isa_acyclic(&self) -> Result<(), GraphError> {
        // Colors: 0 unvisited, 1 on the current path, 2 done.
        let n = self.entities.len();
        let mut next: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &self.arcs {
            if a.kind == ArcKind::Isa {
                next[a.source.index()].push(a.target.index());
            }
        }
        let mut color = vec![0u8; n];
        for start in 0..n {
            if color[start] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            color[start] = 1;
            while let Some(&mut (node, ref mut edge)) = stack.last_mut() {
                if *edge < next[node].len() {
                    let child = next[node][*edge];
                    *edge += 1;
                    match color[child] {
                        0 => {
                            color[child] = 1;
                            stack.push((child, 0));
                        }
                        1 => {
                            return Err(GraphError::IsaCycle {
                                uri: self.entities[child].uri.clone(),
                            });
                        }
                        _ => {}
                    }
                } else {
                    color[node] = 2;
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    pub fn ontology_uri(&self) -> &str {
        &self.ontology_uri
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id.index()]
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    /// Entities of one kind in insertion order.
    pub fn entities_of_kind(&self, kind: EntityKind) -> Vec<&Entity> {
        self.entities.iter().filter(|e| e.kind == kind).collect()
    }

    /// 0/1 matrix over entity order: `m[i][j] = 1` iff an arc of any kind
    /// runs from entity `i` to entity `j`.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.entities.len();
        let mut m = vec![vec![0u8; n]; n];
        for a in &self.arcs {
            m[a.source.index()][a.target.index()] = 1;
        }
        m
    }

    /// Plain-text dump of the graph for manual inspection.
    ///
    /// One line per entity, then one line per arc; see
    /// [`EntityGraph::parse_debug_dump`] for the inverse. Output is
    /// deterministic for a given graph.
    pub fn dump_debug(&self) -> String {
        let mut out = String::new();
        for e in &self.entities {
            out.push_str(e.kind.dump_keyword());
            out.push(' ');
            out.push_str(&e.label);
            out.push(' ');
            out.push_str(&e.uri);
            match e.kind {
                EntityKind::SubConcept => {
                    if let Some(parent) = self.first_arc_from(e.id, ArcKind::Isa) {
                        out.push_str(" ISA ");
                        out.push_str(&self.entities[parent.index()].label);
                    }
                }
                EntityKind::Property => {
                    if let Some(owner) = self.first_arc_to(e.id, ArcKind::HasProperty) {
                        out.push_str(" OF ");
                        out.push_str(&self.entities[owner.index()].label);
                    }
                }
                EntityKind::Instance => {
                    if let Some(class) = self.first_arc_from(e.id, ArcKind::InstanceOf) {
                        out.push_str(" INSTANCEOF ");
                        out.push_str(&self.entities[class.index()].label);
                    }
                }
                EntityKind::Concept => {}
            }
            out.push('\n');
        }
        for a in &self.arcs {
            out.push_str("ARC ");
            out.push_str(&self.entities[a.source.index()].label);
            out.push(' ');
            out.push_str(a.kind.dump_keyword());
            out.push(' ');
            out.push_str(&self.entities[a.target.index()].label);
            out.push('\n');
        }
        out
    }

    fn first_arc_from(&self, id: EntityId, kind: ArcKind) -> Option<EntityId> {
        self.arcs
            .iter()
            .find(|a| a.source == id && a.kind == kind)
            .map(|a| a.target)
    }

    fn first_arc_to(&self, id: EntityId, kind: ArcKind) -> Option<EntityId> {
        self.arcs
            .iter()
            .find(|a| a.target == id && a.kind == kind)
            .map(|a| a.source)
    }

    /// Parse a document produced by [`EntityGraph::dump_debug`].
    ///
    /// Entity kinds come from the line keywords; arcs are rebuilt from the
    /// `ARC` section only (the `ISA`/`OF`/`INSTANCEOF` clauses on entity
    /// lines are derived data and ignored). Arc endpoints resolve to the
    /// first entity whose label and kind fit the arc; labels are lower-case
    /// by construction, so the upper-case keywords cannot collide with them.
    pub fn parse_debug_dump(text: &str) -> Result<EntityGraph, GraphError> {
        let mut entities: Vec<PendingEntity> = Vec::new();
        let mut arc_lines: Vec<(usize, String)> = Vec::new();

        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            if line.is_empty() {
                continue;
            }
            let (keyword, rest) = line.split_once(' ').ok_or_else(|| GraphError::DumpSyntax {
                line: line_no,
                message: format!("unrecognized line {line:?}"),
            })?;
            if keyword == "ARC" {
                arc_lines.push((line_no, rest.to_string()));
                continue;
            }
            let kind = match keyword {
                "CONCEPT" => EntityKind::Concept,
                "SUBCONCEPT" => EntityKind::SubConcept,
                "PROPERTY" => EntityKind::Property,
                "INSTANCE" => EntityKind::Instance,
                other => {
                    return Err(GraphError::DumpSyntax {
                        line: line_no,
                        message: format!("unknown keyword {other}"),
                    })
                }
            };
            // Strip the derived clause, if present.
            let head = match kind {
                EntityKind::SubConcept => rest.split(" ISA ").next().unwrap_or(rest),
                EntityKind::Property => rest.split(" OF ").next().unwrap_or(rest),
                EntityKind::Instance => rest.split(" INSTANCEOF ").next().unwrap_or(rest),
                EntityKind::Concept => rest,
            };
            let (label, uri) = head.rsplit_once(' ').ok_or_else(|| GraphError::DumpSyntax {
                line: line_no,
                message: "expected `<label> <uri>`".to_string(),
            })?;
            entities.push(PendingEntity {
                uri: uri.to_string(),
                label: label.to_string(),
                kind: PendingKind::Fixed(kind),
            });
        }

        let find = |label: &str, allowed: &[EntityKind], line: usize| -> Result<String, GraphError> {
            entities
                .iter()
                .find(|e| {
                    e.label == label
                        && matches!(e.kind, PendingKind::Fixed(k) if allowed.contains(&k))
                })
                .map(|e| e.uri.clone())
                .ok_or_else(|| GraphError::DumpSyntax {
                    line,
                    message: format!("arc endpoint {label:?} does not match any entity"),
                })
        };

        let mut arcs: Vec<PendingArc> = Vec::new();
        for (line_no, rest) in arc_lines {
            let words: Vec<&str> = rest.split(' ').collect();
            let kind_pos = words
                .iter()
                .position(|w| ArcKind::from_dump_keyword(w).is_some())
                .ok_or_else(|| GraphError::DumpSyntax {
                    line: line_no,
                    message: "missing arc keyword".to_string(),
                })?;
            let kind = ArcKind::from_dump_keyword(words[kind_pos]).unwrap();
            let src_label = words[..kind_pos].join(" ");
            let dst_label = words[kind_pos + 1..].join(" ");
            arcs.push(PendingArc {
                source_uri: find(&src_label, kind.source_kinds(), line_no)?,
                kind,
                target_uri: find(&dst_label, kind.target_kinds(), line_no)?,
            });
        }

        EntityGraph::from_parts(String::new(), entities, arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(uri: &str, label: &str) -> PendingEntity {
        PendingEntity {
            uri: uri.to_string(),
            label: label.to_string(),
            kind: PendingKind::ClassLike,
        }
    }

    fn pend(uri: &str, label: &str, kind: PendingKind) -> PendingEntity {
        PendingEntity {
            uri: uri.to_string(),
            label: label.to_string(),
            kind,
        }
    }

    fn isa(src: &str, dst: &str) -> PendingArc {
        PendingArc {
            source_uri: src.to_string(),
            kind: ArcKind::Isa,
            target_uri: dst.to_string(),
        }
    }

    #[test]
    fn empty_graph_is_valid() {
        let g = EntityGraph::from_parts("", vec![], vec![]).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.adjacency_matrix(), Vec::<Vec<u8>>::new());
        assert_eq!(g.dump_debug(), "");
        assert!(g.entities_of_kind(EntityKind::Concept).is_empty());
    }

    #[test]
    fn subconcept_derived_from_isa_arc() {
        let g = EntityGraph::from_parts(
            "urn:t",
            vec![class("u:a", "a"), class("u:b", "b")],
            vec![isa("u:b", "u:a")],
        )
        .unwrap();
        assert_eq!(g.entities()[0].kind, EntityKind::Concept);
        assert_eq!(g.entities()[1].kind, EntityKind::SubConcept);
        // Adjacency over order [a, b]: only b -> a.
        assert_eq!(g.adjacency_matrix(), vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn adjacency_row_sum_is_out_degree() {
        let g = EntityGraph::from_parts(
            "urn:t",
            vec![
                class("u:a", "a"),
                class("u:b", "b"),
                pend("u:p", "p", PendingKind::Property),
                pend("u:i", "i", PendingKind::Instance),
            ],
            vec![
                isa("u:b", "u:a"),
                PendingArc {
                    source_uri: "u:b".into(),
                    kind: ArcKind::HasProperty,
                    target_uri: "u:p".into(),
                },
                PendingArc {
                    source_uri: "u:i".into(),
                    kind: ArcKind::InstanceOf,
                    target_uri: "u:a".into(),
                },
            ],
        )
        .unwrap();
        let m = g.adjacency_matrix();
        for e in g.entities() {
            let out = g.arcs().iter().filter(|a| a.source == e.id).count();
            let row_sum: usize = m[e.id.index()].iter().map(|&v| v as usize).sum();
            assert_eq!(row_sum, out);
        }
    }

    #[test]
    fn kinds_partition_entities() {
        let g = EntityGraph::from_parts(
            "urn:t",
            vec![
                class("u:a", "a"),
                class("u:b", "b"),
                pend("u:i", "i", PendingKind::Instance),
            ],
            vec![isa("u:b", "u:a")],
        )
        .unwrap();
        let total: usize = EntityKind::ALL
            .iter()
            .map(|&k| g.entities_of_kind(k).len())
            .sum();
        assert_eq!(total, g.len());
        assert_eq!(g.entities_of_kind(EntityKind::Instance).len(), 1);
    }

    #[test]
    fn duplicate_arcs_deduplicated() {
        let g = EntityGraph::from_parts(
            "urn:t",
            vec![class("u:a", "a"), class("u:b", "b")],
            vec![isa("u:b", "u:a"), isa("u:b", "u:a")],
        )
        .unwrap();
        assert_eq!(g.arcs().len(), 1);
    }

    #[test]
    fn isa_cycle_rejected() {
        let err = EntityGraph::from_parts(
            "urn:t",
            vec![class("u:a", "a"), class("u:b", "b")],
            vec![isa("u:a", "u:b"), isa("u:b", "u:a")],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::IsaCycle { .. }));
    }

    #[test]
    fn unknown_arc_endpoint_rejected() {
        let err = EntityGraph::from_parts("urn:t", vec![class("u:a", "a")], vec![isa("u:a", "u:x")])
            .unwrap_err();
        assert_eq!(
            err,
            GraphError::UnknownReference {
                uri: "u:x".to_string()
            }
        );
    }

    #[test]
    fn empty_label_rejected() {
        let err = EntityGraph::from_parts("urn:t", vec![class("u:a", "")], vec![]).unwrap_err();
        assert!(matches!(err, GraphError::EmptyLabel { .. }));
    }

    #[test]
    fn arc_typing_enforced() {
        // InstanceOf from a class is invalid.
        let err = EntityGraph::from_parts(
            "urn:t",
            vec![class("u:a", "a"), class("u:b", "b")],
            vec![PendingArc {
                source_uri: "u:a".into(),
                kind: ArcKind::InstanceOf,
                target_uri: "u:b".into(),
            }],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::InvalidArc { .. }));
    }

    #[test]
    fn fixed_subconcept_without_isa_rejected() {
        let err = EntityGraph::from_parts(
            "urn:t",
            vec![pend("u:a", "a", PendingKind::Fixed(EntityKind::SubConcept))],
            vec![],
        )
        .unwrap_err();
        assert!(matches!(err, GraphError::KindMismatch { .. }));
    }

    #[test]
    fn dump_single_concept() {
        let g = EntityGraph::from_parts("urn:t", vec![class("u:car", "car")], vec![]).unwrap();
        assert_eq!(g.dump_debug(), "CONCEPT car u:car\n");
    }

    #[test]
    fn dump_round_trip_is_identical() {
        let g = EntityGraph::from_parts(
            "urn:t",
            vec![
                class("u:vehicle", "vehicle"),
                pend("u:make", "make model", PendingKind::Property),
                class("u:wheel", "wheel"),
                pend("u:w1", "wheel one", PendingKind::Instance),
            ],
            vec![
                isa("u:wheel", "u:vehicle"),
                PendingArc {
                    source_uri: "u:vehicle".into(),
                    kind: ArcKind::HasProperty,
                    target_uri: "u:make".into(),
                },
                PendingArc {
                    source_uri: "u:w1".into(),
                    kind: ArcKind::InstanceOf,
                    target_uri: "u:wheel".into(),
                },
            ],
        )
        .unwrap();
        let dump = g.dump_debug();
        let reparsed = EntityGraph::parse_debug_dump(&dump).unwrap();
        assert_eq!(reparsed.dump_debug(), dump);
    }

    #[test]
    fn dump_parse_rejects_garbage() {
        let err = EntityGraph::parse_debug_dump("WIDGET foo u:foo\n").unwrap_err();
        assert!(matches!(err, GraphError::DumpSyntax { line: 1, .. }));
    }
}
