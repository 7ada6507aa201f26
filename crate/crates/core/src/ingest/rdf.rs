//! Walker for RDF/XML documents, with or without OWL vocabulary.
//!
//! The mapping keeps exactly the vocabulary needed to populate the four
//! entity categories: `owl:Class`/`rdfs:Class` become concepts (or
//! sub-concepts once they carry `rdfs:subClassOf`), property declarations
//! become properties attached to their `rdfs:domain` classes, and resources
//! typed with a declared class become instances. Blank nodes and
//! `owl:Restriction` bodies are skipped.

use std::collections::HashMap;

use super::{normalize_label, ParseError};
use crate::graph::{ArcKind, EntityGraph, PendingArc, PendingEntity, PendingKind};
use crate::xml_doc::XmlNode;

pub(crate) const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub(crate) const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub(crate) const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

struct Collector {
    base: String,
    ontology_uri: Option<String>,
    entities: Vec<PendingEntity>,
    index: HashMap<String, usize>,
    arcs: Vec<PendingArc>,
}

impl Collector {
    fn resolve(&self, reference: &str) -> String {
        if reference.is_empty() {
            self.base.clone()
        } else if let Some(fragment) = reference.strip_prefix('#') {
            format!("{}#{}", self.base, fragment)
        } else {
            reference.to_string()
        }
    }

    /// Register a resource, merging repeated mentions. Conflicting
    /// categories for one uri are a parse error.
    fn register(&mut self, uri: &str, kind: PendingKind) -> Result<usize, ParseError> {
        if let Some(&i) = self.index.get(uri) {
            let existing = self.entities[i].kind;
            if existing != kind {
                return Err(ParseError::ConflictingDeclaration {
                    uri: uri.to_string(),
                    first: kind_name(existing),
                    second: kind_name(kind),
                });
            }
            return Ok(i);
        }
        let i = self.entities.len();
        self.entities.push(PendingEntity {
            uri: uri.to_string(),
            label: normalize_label(uri),
            kind,
        });
        self.index.insert(uri.to_string(), i);
        Ok(i)
    }

    fn arc(&mut self, source_uri: String, kind: ArcKind, target_uri: String) {
        self.arcs.push(PendingArc {
            source_uri,
            kind,
            target_uri,
        });
    }
}

fn kind_name(kind: PendingKind) -> &'static str {
    match kind {
        PendingKind::ClassLike => "a class",
        PendingKind::Property => "a property",
        PendingKind::Instance => "an instance",
        PendingKind::Fixed(_) => "a fixed kind",
    }
}

pub(super) fn parse(root: &XmlNode) -> Result<EntityGraph, ParseError> {
    let base = root.attr(XML_NS, "base").unwrap_or("").to_string();
    let mut c = Collector {
        base,
        ontology_uri: None,
        entities: Vec::new(),
        index: HashMap::new(),
        arcs: Vec::new(),
    };

    if root.is(RDF_NS, "RDF") {
        for child in &root.children {
            subject(&mut c, child)?;
        }
    } else {
        subject(&mut c, root)?;
    }

    let ontology_uri = c.ontology_uri.unwrap_or_else(|| c.base.clone());
    Ok(EntityGraph::from_parts(ontology_uri, c.entities, c.arcs)?)
}

/// URI of a subject node from `rdf:about` or `rdf:ID`; blank nodes yield
/// `None` and are skipped.
fn resource_uri(c: &Collector, node: &XmlNode) -> Option<String> {
    if let Some(about) = node.attr(RDF_NS, "about") {
        return Some(c.resolve(about));
    }
    node.attr(RDF_NS, "ID")
        .map(|id| format!("{}#{}", c.base, id))
}

fn is_vocabulary(ns: &str) -> bool {
    ns == RDF_NS || ns == RDFS_NS || ns == OWL_NS
}

fn is_class_element(node: &XmlNode) -> bool {
    node.is(OWL_NS, "Class") || node.is(RDFS_NS, "Class")
}

fn is_property_element(node: &XmlNode) -> bool {
    node.is(OWL_NS, "ObjectProperty")
        || node.is(OWL_NS, "DatatypeProperty")
        || node.is(RDF_NS, "Property")
}

fn subject(c: &mut Collector, node: &XmlNode) -> Result<(), ParseError> {
    let uri = match resource_uri(c, node) {
        Some(uri) => uri,
        None => return Ok(()), // blank node
    };

    if node.is(OWL_NS, "Ontology") {
        c.ontology_uri = Some(uri);
        return Ok(());
    }
    if node.is(OWL_NS, "Restriction") {
        return Ok(());
    }
    if is_class_element(node) {
        c.register(&uri, PendingKind::ClassLike)?;
        return class_body(c, &uri, node);
    }
    if is_property_element(node) {
        c.register(&uri, PendingKind::Property)?;
        return property_body(c, &uri, node);
    }
    if node.is(RDF_NS, "Description") {
        return description(c, &uri, node);
    }
    if !is_vocabulary(&node.ns) {
        // Typed node syntax: the element name is the class uri.
        let class_uri = format!("{}{}", node.ns, node.local);
        c.register(&uri, PendingKind::Instance)?;
        c.arc(uri, ArcKind::InstanceOf, class_uri);
    }
    // Remaining vocabulary elements (annotations and the like) are out of
    // the entity vocabulary.
    Ok(())
}

fn class_body(c: &mut Collector, uri: &str, node: &XmlNode) -> Result<(), ParseError> {
    for child in &node.children {
        if child.is(RDFS_NS, "subClassOf") {
            if let Some(parent) = object_reference(c, child)? {
                c.arc(uri.to_string(), ArcKind::Isa, parent);
            }
        }
    }
    Ok(())
}

fn property_body(c: &mut Collector, uri: &str, node: &XmlNode) -> Result<(), ParseError> {
    for child in &node.children {
        if child.is(RDFS_NS, "domain") {
            if let Some(domain) = object_reference(c, child)? {
                c.arc(domain, ArcKind::HasProperty, uri.to_string());
            }
        }
    }
    Ok(())
}

/// Object of a property element: an `rdf:resource` attribute or a nested
/// named class. Restriction bodies and blank nests resolve to nothing.
fn object_reference(c: &mut Collector, node: &XmlNode) -> Result<Option<String>, ParseError> {
    if let Some(target) = node.attr(RDF_NS, "resource") {
        return Ok(Some(c.resolve(target)));
    }
    for inner in &node.children {
        if is_class_element(inner) {
            if let Some(uri) = resource_uri(c, inner) {
                c.register(&uri, PendingKind::ClassLike)?;
                class_body(c, &uri, inner)?;
                return Ok(Some(uri));
            }
        }
    }
    Ok(None)
}

fn description(c: &mut Collector, uri: &str, node: &XmlNode) -> Result<(), ParseError> {
    // Gather rdf:type targets first to decide the category.
    let mut types: Vec<String> = Vec::new();
    for child in &node.children {
        if child.is(RDF_NS, "type") {
            if let Some(target) = child.attr(RDF_NS, "resource") {
                types.push(c.resolve(target));
            }
        }
    }
    let class_type = format!("{OWL_NS}Class");
    let rdfs_class_type = format!("{RDFS_NS}Class");
    let property_types = [
        format!("{OWL_NS}ObjectProperty"),
        format!("{OWL_NS}DatatypeProperty"),
        format!("{RDF_NS}Property"),
    ];

    if types.iter().any(|t| t == &class_type || t == &rdfs_class_type) {
        c.register(uri, PendingKind::ClassLike)?;
        return class_body(c, uri, node);
    }
    if types.iter().any(|t| property_types.contains(t)) {
        c.register(uri, PendingKind::Property)?;
        return property_body(c, uri, node);
    }
    let user_types: Vec<&String> = types
        .iter()
        .filter(|t| !t.starts_with(RDF_NS) && !t.starts_with(RDFS_NS) && !t.starts_with(OWL_NS))
        .collect();
    if !user_types.is_empty() {
        c.register(uri, PendingKind::Instance)?;
        for t in user_types {
            c.arc(uri.to_string(), ArcKind::InstanceOf, t.clone());
        }
    }
    // Untyped descriptions carry nothing we track.
    Ok(())
}
