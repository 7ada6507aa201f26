//! Input detection and parsing of OWL/RDF/XML ontologies into entity
//! graphs.
//!
//! Detection is a pure function of the document bytes (root element
//! namespace declarations), never of the file name, so a source in OWL and
//! a target in bare RDF or plain XML mix freely in one run.

mod generic;
mod rdf;

use thiserror::Error;

use crate::graph::{EntityGraph, GraphError};
use crate::xml_doc::{self, XmlError};

pub(crate) use rdf::{OWL_NS, RDF_NS};

/// Serialization family of an input document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatKind {
    /// RDF/XML carrying the OWL namespace.
    OwlRdfXml,
    /// RDF/XML without OWL vocabulary.
    RdfXml,
    /// Any other well-formed XML.
    GenericXml,
}

impl FormatKind {
    pub fn name(self) -> &'static str {
        match self {
            FormatKind::OwlRdfXml => "owl-rdf-xml",
            FormatKind::RdfXml => "rdf-xml",
            FormatKind::GenericXml => "generic-xml",
        }
    }
}

impl std::fmt::Display for FormatKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("malformed XML at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("document has no root element")]
    EmptyDocument,
    #[error("resource {uri} is declared both as {first} and as {second}")]
    ConflictingDeclaration {
        uri: String,
        first: &'static str,
        second: &'static str,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<XmlError> for ParseError {
    fn from(e: XmlError) -> Self {
        match e {
            XmlError::Malformed {
                line,
                column,
                message,
            } => ParseError::Malformed {
                line,
                column,
                message,
            },
            XmlError::EmptyDocument => ParseError::EmptyDocument,
        }
    }
}

/// Decide the serialization family from the root element's namespace
/// declarations.
pub fn detect_format(doc: &[u8]) -> Result<FormatKind, ParseError> {
    let root = xml_doc::parse(doc)?;
    Ok(if root.declares_namespace(OWL_NS) {
        FormatKind::OwlRdfXml
    } else if root.declares_namespace(RDF_NS) {
        FormatKind::RdfXml
    } else {
        FormatKind::GenericXml
    })
}

/// Parse a document of a known format into a validated entity graph.
pub fn parse_ontology(doc: &[u8], format: FormatKind) -> Result<EntityGraph, ParseError> {
    let root = xml_doc::parse(doc)?;
    match format {
        FormatKind::OwlRdfXml | FormatKind::RdfXml => rdf::parse(&root),
        FormatKind::GenericXml => generic::parse(&root),
    }
}

/// Detect the format and parse in one step.
pub fn parse_bytes(doc: &[u8]) -> Result<(FormatKind, EntityGraph), ParseError> {
    let format = detect_format(doc)?;
    Ok((format, parse_ontology(doc, format)?))
}

/// Normalize a raw name or uri into a comparable label: strip the uri
/// namespace (text after the last `#` or `/`), split camelCase and
/// `_`/`-` boundaries into tokens, lower-case, and join with single
/// spaces. Returns an empty string when no local name can be extracted;
/// callers reject such entities.
pub fn normalize_label(raw: &str) -> String {
    let local = match raw.rfind(['#', '/']) {
        Some(pos) => &raw[pos + 1..],
        None => raw,
    };
    let chars: Vec<char> = local.chars().collect();
    let mut tokens: Vec<String> = Vec::new();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c == '_' || c == '-' || c.is_whitespace() {
            flush(&mut cur, &mut tokens);
            continue;
        }
        if c.is_uppercase() {
            let starts_word = match chars.get(i.wrapping_sub(1)) {
                Some(p) if i > 0 => {
                    p.is_lowercase()
                        || p.is_numeric()
                        || (p.is_uppercase()
                            && chars.get(i + 1).is_some_and(|n| n.is_lowercase()))
                }
                _ => false,
            };
            if starts_word {
                flush(&mut cur, &mut tokens);
            }
        }
        cur.extend(c.to_lowercase());
    }
    flush(&mut cur, &mut tokens);
    tokens.join(" ")
}

fn flush(cur: &mut String, tokens: &mut Vec<String>) {
    if !cur.is_empty() {
        tokens.push(std::mem::take(cur));
    }
}
