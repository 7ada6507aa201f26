//! Minimal namespace-aware XML tree over a streaming reader.
//!
//! The ontology inputs and alignment files are small, so the whole document
//! is materialized. Only well-formedness is required; DTD/schema validation
//! is out of scope.

use quick_xml::events::attributes::Attribute;
use quick_xml::events::{BytesStart, Event};
use quick_xml::name::ResolveResult;
use quick_xml::reader::NsReader;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum XmlError {
    #[error("line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("document has no root element")]
    EmptyDocument,
}

/// An element with resolved namespaces, its attributes in document order,
/// direct text content and child elements.
#[derive(Debug, Clone, Default)]
pub struct XmlNode {
    /// Resolved namespace uri of the element; empty when unbound.
    pub ns: String,
    pub local: String,
    pub attrs: Vec<XmlAttr>,
    pub children: Vec<XmlNode>,
    /// Concatenated direct text content, whitespace-trimmed.
    pub text: String,
    /// Namespace declarations made on this element, prefix to uri
    /// (empty prefix for the default namespace).
    pub ns_decls: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct XmlAttr {
    /// Resolved namespace uri; empty for unprefixed attributes.
    pub ns: String,
    pub local: String,
    pub value: String,
}

impl XmlNode {
    pub fn attr(&self, ns: &str, local: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|a| a.ns == ns && a.local == local)
            .map(|a| a.value.as_str())
    }

    pub fn is(&self, ns: &str, local: &str) -> bool {
        self.ns == ns && self.local == local
    }

    /// True when some namespace declaration in the subtree binds `uri`.
    /// Detection only looks at the root, but nested re-declarations are
    /// legal XML, so the whole tree is recorded.
    pub fn declares_namespace(&self, uri: &str) -> bool {
        self.ns_decls.iter().any(|(_, u)| u == uri)
    }
}

/// Parse a byte sequence into its root element.
pub fn parse(doc: &[u8]) -> Result<XmlNode, XmlError> {
    let mut reader = NsReader::from_reader(doc);
    reader.config_mut().trim_text(true);

    let mut stack: Vec<XmlNode> = Vec::new();
    let mut root: Option<XmlNode> = None;
    let mut buf = Vec::new();
    loop {
        let pos_before = reader.buffer_position() as usize;
        match reader.read_event_into(&mut buf) {
            Ok(Event::Start(e)) => {
                let node = start_node(&reader, &e, doc, pos_before)?;
                if root.is_some() && stack.is_empty() {
                    return Err(at(doc, pos_before, "multiple root elements"));
                }
                stack.push(node);
            }
            Ok(Event::Empty(e)) => {
                let node = start_node(&reader, &e, doc, pos_before)?;
                if root.is_some() && stack.is_empty() {
                    return Err(at(doc, pos_before, "multiple root elements"));
                }
                close(node, &mut stack, &mut root);
            }
            Ok(Event::End(_)) => {
                let node = stack.pop().expect("end event without matching start");
                close(node, &mut stack, &mut root);
            }
            Ok(Event::Text(t)) => {
                let text = t
                    .unescape()
                    .map_err(|e| at(doc, pos_before, &e.to_string()))?;
                if let Some(top) = stack.last_mut() {
                    if !top.text.is_empty() {
                        top.text.push(' ');
                    }
                    top.text.push_str(text.trim());
                } else if !text.trim().is_empty() {
                    return Err(at(doc, pos_before, "text outside the root element"));
                }
            }
            Ok(Event::CData(t)) => {
                let text = String::from_utf8_lossy(t.as_ref()).into_owned();
                if let Some(top) = stack.last_mut() {
                    if !top.text.is_empty() {
                        top.text.push(' ');
                    }
                    top.text.push_str(text.trim());
                }
            }
            Ok(Event::Eof) => break,
            Ok(_) => {} // declarations, comments, processing instructions, DTD
            Err(e) => return Err(at(doc, reader.buffer_position() as usize, &e.to_string())),
        }
        buf.clear();
    }
    root.ok_or(XmlError::EmptyDocument)
}

fn close(node: XmlNode, stack: &mut [XmlNode], root: &mut Option<XmlNode>) {
    match stack.last_mut() {
        Some(parent) => parent.children.push(node),
        None => *root = Some(node),
    }
}

fn start_node(
    reader: &NsReader<&[u8]>,
    e: &BytesStart,
    doc: &[u8],
    pos: usize,
) -> Result<XmlNode, XmlError> {
    let (ns, local) = reader.resolve_element(e.name());
    let mut node = XmlNode {
        ns: resolve_uri(&ns),
        local: String::from_utf8_lossy(local.as_ref()).into_owned(),
        ..XmlNode::default()
    };
    for attr in e.attributes() {
        let attr: Attribute = attr.map_err(|err| at(doc, pos, &err.to_string()))?;
        let value = attr
            .unescape_value()
            .map_err(|err| at(doc, pos, &err.to_string()))?
            .into_owned();
        if let Some(binding) = attr.key.as_namespace_binding() {
            let prefix = match binding {
                quick_xml::name::PrefixDeclaration::Default => String::new(),
                quick_xml::name::PrefixDeclaration::Named(p) => {
                    String::from_utf8_lossy(p).into_owned()
                }
            };
            node.ns_decls.push((prefix, value));
            continue;
        }
        let (ares, alocal) = reader.resolve_attribute(attr.key);
        node.attrs.push(XmlAttr {
            ns: resolve_uri(&ares),
            local: String::from_utf8_lossy(alocal.as_ref()).into_owned(),
            value,
        });
    }
    Ok(node)
}

fn resolve_uri(r: &ResolveResult) -> String {
    match r {
        ResolveResult::Bound(ns) => String::from_utf8_lossy(ns.as_ref()).into_owned(),
        _ => String::new(),
    }
}

fn at(doc: &[u8], offset: usize, message: &str) -> XmlError {
    let offset = offset.min(doc.len());
    let line = doc[..offset].iter().filter(|&&b| b == b'\n').count() + 1;
    let column = doc[..offset]
        .iter()
        .rposition(|&b| b == b'\n')
        .map(|p| offset - p)
        .unwrap_or(offset + 1);
    XmlError::Malformed {
        line,
        column,
        message: message.to_string(),
    }
}
