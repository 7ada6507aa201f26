//! Walker for generic XML: the simplest hierarchy-preserving mapping.
//!
//! The root element name becomes a concept, nested element names become
//! sub-concepts of their enclosing element, attributes become properties
//! of their owner, and text-only leaf elements become instances of their
//! parent. Repeated names merge into one entity (elements and attributes
//! in separate namespaces); the first occurrence decides the category and
//! arcs that would violate arc typing after merging are dropped.

use std::collections::HashMap;

use super::{normalize_label, ParseError};
use crate::graph::{ArcKind, EntityGraph, PendingArc, PendingEntity, PendingKind};
use crate::xml_doc::XmlNode;

struct Collector {
    base: String,
    entities: Vec<PendingEntity>,
    element_index: HashMap<String, usize>,
    attribute_index: HashMap<String, usize>,
    arcs: Vec<PendingArc>,
}

impl Collector {
    fn register_element(&mut self, name: &str, kind: PendingKind) -> usize {
        if let Some(&i) = self.element_index.get(name) {
            return i;
        }
        let i = self.entities.len();
        self.entities.push(PendingEntity {
            uri: format!("{}#{}", self.base, name),
            label: normalize_label(name),
            kind,
        });
        self.element_index.insert(name.to_string(), i);
        i
    }

    fn register_attribute(&mut self, name: &str) -> usize {
        if let Some(&i) = self.attribute_index.get(name) {
            return i;
        }
        let i = self.entities.len();
        self.entities.push(PendingEntity {
            uri: format!("{}#@{}", self.base, name),
            label: normalize_label(name),
            kind: PendingKind::Property,
        });
        self.attribute_index.insert(name.to_string(), i);
        i
    }
}

pub(super) fn parse(root: &XmlNode) -> Result<EntityGraph, ParseError> {
    let base = format!("urn:xml:{}", root.local);
    let mut c = Collector {
        base: base.clone(),
        entities: Vec::new(),
        element_index: HashMap::new(),
        attribute_index: HashMap::new(),
        arcs: Vec::new(),
    };
    walk(&mut c, root, None);
    Ok(EntityGraph::from_parts(base, c.entities, c.arcs)?)
}

fn walk(c: &mut Collector, node: &XmlNode, parent: Option<usize>) {
    let text_leaf = node.children.is_empty() && !node.text.is_empty();
    let desired = if parent.is_none() || !text_leaf {
        PendingKind::ClassLike
    } else {
        PendingKind::Instance
    };
    let me = c.register_element(&node.local, desired);
    let my_kind = c.entities[me].kind;

    if let Some(p) = parent {
        let parent_is_class = c.entities[p].kind == PendingKind::ClassLike;
        // A merged name keeps its first category, so an occurrence may be
        // unable to connect; such arcs are dropped rather than invalidating
        // the graph.
        match my_kind {
            PendingKind::ClassLike if parent_is_class && me != p => {
                c.arcs.push(PendingArc {
                    source_uri: c.entities[me].uri.clone(),
                    kind: ArcKind::Isa,
                    target_uri: c.entities[p].uri.clone(),
                });
            }
            PendingKind::Instance if parent_is_class => {
                c.arcs.push(PendingArc {
                    source_uri: c.entities[me].uri.clone(),
                    kind: ArcKind::InstanceOf,
                    target_uri: c.entities[p].uri.clone(),
                });
            }
            _ => {}
        }
    }

    if my_kind == PendingKind::ClassLike {
        for attr in &node.attrs {
            let prop = c.register_attribute(&attr.local);
            c.arcs.push(PendingArc {
                source_uri: c.entities[me].uri.clone(),
                kind: ArcKind::HasProperty,
                target_uri: c.entities[prop].uri.clone(),
            });
        }
    }

    for child in &node.children {
        walk(c, child, Some(me));
    }
}
