//! Reading and writing the alignment XML interchange format.
//!
//! The writer is byte-deterministic: the same mappings always serialize to
//! the same document. The reader is the inverse up to whitespace and is
//! also used to load reference alignments for evaluation.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::EntityKind;
use crate::matching::{Mapping, Relation};
use crate::xml_doc::{self, XmlError, XmlNode};

/// Base namespace carried on the document root.
pub const ALIGNMENT_BASE: &str = "http://knowledgeweb.semanticweb.org/heterogeneity/alignment#";
/// Datatype attribute on every measure element.
pub const MEASURE_DATATYPE: &str = "http://www.w3.org/2001/XMLSchema#float";
/// Method recorded in the header.
pub const METHOD_NAME: &str = "Automated generated";

const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const RELATION_SYMBOLS: [&str; 4] = ["=", "<", ">", "%"];

#[derive(Debug, Error, PartialEq)]
pub enum AlignmentError {
    #[error("malformed XML at line {line}, column {column}: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("document has no root element")]
    EmptyDocument,
    #[error("document has no Alignment element")]
    NotAnAlignment,
    #[error("header field <{name}> is missing")]
    MissingHeaderField { name: &'static str },
    #[error("header field <{name}> appears more than once")]
    DuplicateHeaderField { name: &'static str },
    #[error("cell is missing <{name}>")]
    MissingCellField { name: &'static str },
    #[error("measure {text:?} is not a number")]
    InvalidMeasure { text: String },
    #[error("measure {value} is outside [0, 1]")]
    MeasureOutOfRange { value: f64 },
    #[error("unknown relation symbol {symbol:?}")]
    UnknownRelation { symbol: String },
    #[error("duplicate cell for ({entity1}, {entity2})")]
    DuplicateCell { entity1: String, entity2: String },
}

impl From<XmlError> for AlignmentError {
    fn from(e: XmlError) -> Self {
        match e {
            XmlError::Malformed {
                line,
                column,
                message,
            } => AlignmentError::Malformed {
                line,
                column,
                message,
            },
            XmlError::EmptyDocument => AlignmentError::EmptyDocument,
        }
    }
}

/// Header block of an alignment document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentHeader {
    pub xml: String,
    pub level: String,
    pub alignment_type: String,
    pub method: String,
    pub uri1: String,
    pub uri2: String,
}

impl AlignmentHeader {
    pub fn new(uri1: impl Into<String>, uri2: impl Into<String>) -> AlignmentHeader {
        AlignmentHeader {
            xml: "yes".to_string(),
            level: "0".to_string(),
            alignment_type: "11".to_string(),
            method: METHOD_NAME.to_string(),
            uri1: uri1.into(),
            uri2: uri2.into(),
        }
    }
}

/// One correspondence cell: entity uris, similarity measure and relation
/// symbol (`=`, `<`, `>` or `%`).
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentCell {
    pub entity1: String,
    pub entity2: String,
    pub measure: f64,
    pub relation: String,
}

/// An ordered set of alignment cells plus header metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub header: AlignmentHeader,
    pub cells: Vec<AlignmentCell>,
}

/// Relation symbol for a mapping. `Isa` points the angle bracket at the
/// more general side: a sub-concept source is written `<`, a sub-concept
/// target `>`.
pub fn relation_symbol(mapping: &Mapping) -> &'static str {
    match mapping.relation {
        Relation::Equivalence => "=",
        Relation::General => "%",
        Relation::Isa => {
            if mapping.source.kind == EntityKind::SubConcept {
                "<"
            } else {
                ">"
            }
        }
    }
}

/// Measure text: up to six decimals with trailing zeros trimmed, always
/// keeping one decimal digit. Re-parsing stays within 1e-6 of the input.
pub fn format_measure(value: f64) -> String {
    let mut s = format!("{value:.6}");
    while s.ends_with('0') && !s.ends_with(".0") {
        s.pop();
    }
    s
}

impl Alignment {
    pub fn from_mappings(mappings: &[Mapping], uri1: &str, uri2: &str) -> Alignment {
        Alignment {
            header: AlignmentHeader::new(uri1, uri2),
            cells: mappings
                .iter()
                .map(|m| AlignmentCell {
                    entity1: m.source.uri.clone(),
                    entity2: m.target.uri.clone(),
                    measure: m.score,
                    relation: relation_symbol(m).to_string(),
                })
                .collect(),
        }
    }

    pub fn to_xml(&self) -> String {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n");
        out.push_str(&format!(
            "<rdf:RDF xmlns:rdf=\"{RDF_NS}\" xml:base=\"{ALIGNMENT_BASE}\">\n"
        ));
        out.push_str("<Alignment>\n");
        out.push_str(&format!("  <xml>{}</xml>\n", escape(&self.header.xml)));
        out.push_str(&format!("  <level>{}</level>\n", escape(&self.header.level)));
        out.push_str(&format!(
            "  <type>{}</type>\n",
            escape(&self.header.alignment_type)
        ));
        out.push_str(&format!(
            "  <method>{}</method>\n",
            escape(&self.header.method)
        ));
        out.push_str("  <onto1></onto1>\n");
        out.push_str("  <onto2></onto2>\n");
        out.push_str(&format!("  <uri1>{}</uri1>\n", escape(&self.header.uri1)));
        out.push_str(&format!("  <uri2>{}</uri2>\n", escape(&self.header.uri2)));
        for cell in &self.cells {
            out.push_str("  <map>\n");
            out.push_str("    <Cell>\n");
            out.push_str(&format!(
                "      <entity1 rdf:resource=\"{}\"/>\n",
                escape(&cell.entity1)
            ));
            out.push_str(&format!(
                "      <entity2 rdf:resource=\"{}\"/>\n",
                escape(&cell.entity2)
            ));
            out.push_str(&format!(
                "      <measure rdf:datatype=\"{MEASURE_DATATYPE}\">{}</measure>\n",
                format_measure(cell.measure)
            ));
            out.push_str(&format!(
                "      <relation>{}</relation>\n",
                escape(&cell.relation)
            ));
            out.push_str("    </Cell>\n");
            out.push_str("  </map>\n");
        }
        out.push_str("</Alignment>\n");
        out.push_str("</rdf:RDF>\n");
        out
    }
}

/// Serialize mappings into the alignment XML document.
pub fn write_alignment(mappings: &[Mapping], uri1: &str, uri2: &str) -> String {
    Alignment::from_mappings(mappings, uri1, uri2).to_xml()
}

/// Parse an alignment document. Inverse of [`write_alignment`] up to
/// whitespace; header fields must appear exactly once, measures must be
/// numbers in `[0, 1]`, relations must be known symbols and no entity pair
/// may repeat.
pub fn read_alignment(doc: &[u8]) -> Result<Alignment, AlignmentError> {
    let root = xml_doc::parse(doc)?;
    let alignment = if root.local == "Alignment" {
        &root
    } else {
        root.children
            .iter()
            .find(|c| c.local == "Alignment")
            .ok_or(AlignmentError::NotAnAlignment)?
    };

    let mut xml: Option<String> = None;
    let mut level: Option<String> = None;
    let mut alignment_type: Option<String> = None;
    let mut method: Option<String> = None;
    let mut uri1: Option<String> = None;
    let mut uri2: Option<String> = None;
    let mut cells: Vec<AlignmentCell> = Vec::new();
    let mut seen_pairs: HashSet<(String, String)> = HashSet::new();

    for child in &alignment.children {
        let slot = match child.local.as_str() {
            "xml" => Some((&mut xml, "xml")),
            "level" => Some((&mut level, "level")),
            "type" => Some((&mut alignment_type, "type")),
            "method" => Some((&mut method, "method")),
            "uri1" => Some((&mut uri1, "uri1")),
            "uri2" => Some((&mut uri2, "uri2")),
            _ => None,
        };
        if let Some((slot, name)) = slot {
            if slot.is_some() {
                return Err(AlignmentError::DuplicateHeaderField { name });
            }
            *slot = Some(child.text.clone());
            continue;
        }
        if child.local == "map" {
            for cell_node in child.children.iter().filter(|c| c.local == "Cell") {
                let cell = read_cell(cell_node)?;
                let key = (cell.entity1.clone(), cell.entity2.clone());
                if !seen_pairs.insert(key) {
                    return Err(AlignmentError::DuplicateCell {
                        entity1: cell.entity1,
                        entity2: cell.entity2,
                    });
                }
                cells.push(cell);
            }
        }
    }

    let header = AlignmentHeader {
        xml: xml.ok_or(AlignmentError::MissingHeaderField { name: "xml" })?,
        level: level.ok_or(AlignmentError::MissingHeaderField { name: "level" })?,
        alignment_type: alignment_type
            .ok_or(AlignmentError::MissingHeaderField { name: "type" })?,
        method: method.ok_or(AlignmentError::MissingHeaderField { name: "method" })?,
        uri1: uri1.ok_or(AlignmentError::MissingHeaderField { name: "uri1" })?,
        uri2: uri2.ok_or(AlignmentError::MissingHeaderField { name: "uri2" })?,
    };
    Ok(Alignment { header, cells })
}

fn read_cell(node: &XmlNode) -> Result<AlignmentCell, AlignmentError> {
    let entity = |name: &'static str| -> Result<String, AlignmentError> {
        let child = node
            .children
            .iter()
            .find(|c| c.local == name)
            .ok_or(AlignmentError::MissingCellField { name })?;
        child
            .attr(RDF_NS, "resource")
            .or_else(|| child.attr("", "resource"))
            .map(str::to_string)
            .ok_or(AlignmentError::MissingCellField { name })
    };
    let entity1 = entity("entity1")?;
    let entity2 = entity("entity2")?;

    let measure_node = node
        .children
        .iter()
        .find(|c| c.local == "measure")
        .ok_or(AlignmentError::MissingCellField { name: "measure" })?;
    let measure: f64 =
        measure_node
            .text
            .trim()
            .parse()
            .map_err(|_| AlignmentError::InvalidMeasure {
                text: measure_node.text.clone(),
            })?;
    if !(0.0..=1.0).contains(&measure) {
        return Err(AlignmentError::MeasureOutOfRange { value: measure });
    }

    let relation_node = node
        .children
        .iter()
        .find(|c| c.local == "relation")
        .ok_or(AlignmentError::MissingCellField { name: "relation" })?;
    let relation = relation_node.text.trim().to_string();
    if !RELATION_SYMBOLS.contains(&relation.as_str()) {
        return Err(AlignmentError::UnknownRelation { symbol: relation });
    }

    Ok(AlignmentCell {
        entity1,
        entity2,
        measure,
        relation,
    })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Entity, EntityId};
    use crate::metrics::MetricId;
    use proptest::prelude::*;

    fn entity(uri: &str, kind: EntityKind) -> Entity {
        Entity {
            id: EntityId::new(0),
            uri: uri.to_string(),
            label: String::new(),
            kind,
        }
    }

    fn mapping(uri1: &str, uri2: &str, relation: Relation, score: f64) -> Mapping {
        mapping_kinds(uri1, EntityKind::Concept, uri2, EntityKind::Concept, relation, score)
    }

    fn mapping_kinds(
        uri1: &str,
        k1: EntityKind,
        uri2: &str,
        k2: EntityKind,
        relation: Relation,
        score: f64,
    ) -> Mapping {
        Mapping {
            source: entity(uri1, k1),
            target: entity(uri2, k2),
            relation,
            metric: MetricId::Levenshtein,
            score,
        }
    }

    #[test]
    fn two_cell_round_trip() {
        let maps = vec![
            mapping(
                "http://example.org/O1.rdf#Academic",
                "http://example.org/O2.rdf#Academic",
                Relation::Equivalence,
                1.0,
            ),
            mapping(
                "http://example.org/O1.rdf#Book",
                "http://example.org/O2.rdf#Book",
                Relation::Equivalence,
                1.0,
            ),
        ];
        let doc = write_alignment(&maps, "http://example.org/O1.rdf", "http://example.org/O2.rdf");
        let parsed = read_alignment(doc.as_bytes()).unwrap();
        assert_eq!(parsed.header.xml, "yes");
        assert_eq!(parsed.header.level, "0");
        assert_eq!(parsed.header.alignment_type, "11");
        assert_eq!(parsed.header.method, METHOD_NAME);
        assert_eq!(parsed.cells.len(), 2);
        for cell in &parsed.cells {
            assert_eq!(cell.measure, 1.0);
            assert_eq!(cell.relation, "=");
        }
    }

    #[test]
    fn empty_alignment_has_header_only() {
        let doc = write_alignment(&[], "u1", "u2");
        assert!(!doc.contains("<map>"));
        let parsed = read_alignment(doc.as_bytes()).unwrap();
        assert!(parsed.cells.is_empty());
        assert_eq!(parsed.header.uri1, "u1");
    }

    #[test]
    fn isa_symbol_direction() {
        let sub_source = mapping_kinds(
            "u:a",
            EntityKind::SubConcept,
            "u:b",
            EntityKind::Concept,
            Relation::Isa,
            0.9,
        );
        assert_eq!(relation_symbol(&sub_source), "<");
        let sub_target = mapping_kinds(
            "u:a",
            EntityKind::Concept,
            "u:b",
            EntityKind::SubConcept,
            Relation::Isa,
            0.9,
        );
        assert_eq!(relation_symbol(&sub_target), ">");
        let general = mapping_kinds(
            "u:a",
            EntityKind::Property,
            "u:b",
            EntityKind::Concept,
            Relation::General,
            0.9,
        );
        assert_eq!(relation_symbol(&general), "%");
    }

    #[test]
    fn escaped_symbols_round_trip() {
        let maps = vec![mapping_kinds(
            "u:a?x=1&y=2",
            EntityKind::SubConcept,
            "u:b",
            EntityKind::Concept,
            Relation::Isa,
            0.75,
        )];
        let doc = write_alignment(&maps, "u&1", "u<2");
        let parsed = read_alignment(doc.as_bytes()).unwrap();
        assert_eq!(parsed.cells[0].entity1, "u:a?x=1&y=2");
        assert_eq!(parsed.cells[0].relation, "<");
        assert_eq!(parsed.header.uri2, "u<2");
    }

    #[test]
    fn missing_type_field_rejected() {
        let doc = write_alignment(&[], "u1", "u2").replace("  <type>11</type>\n", "");
        assert_eq!(
            read_alignment(doc.as_bytes()).unwrap_err(),
            AlignmentError::MissingHeaderField { name: "type" }
        );
    }

    #[test]
    fn out_of_range_measure_rejected() {
        let doc = write_alignment(&[mapping("u:a", "u:b", Relation::Equivalence, 1.0)], "u1", "u2")
            .replace(">1.0</measure>", ">1.5</measure>");
        assert_eq!(
            read_alignment(doc.as_bytes()).unwrap_err(),
            AlignmentError::MeasureOutOfRange { value: 1.5 }
        );
    }

    #[test]
    fn unknown_relation_rejected() {
        let doc = write_alignment(&[mapping("u:a", "u:b", Relation::Equivalence, 1.0)], "u1", "u2")
            .replace("<relation>=</relation>", "<relation>~</relation>");
        assert_eq!(
            read_alignment(doc.as_bytes()).unwrap_err(),
            AlignmentError::UnknownRelation {
                symbol: "~".to_string()
            }
        );
    }

    #[test]
    fn duplicate_pair_rejected() {
        let maps = vec![
            mapping("u:a", "u:b", Relation::Equivalence, 1.0),
            mapping("u:a", "u:b", Relation::Equivalence, 0.5),
        ];
        let doc = write_alignment(&maps, "u1", "u2");
        assert!(matches!(
            read_alignment(doc.as_bytes()).unwrap_err(),
            AlignmentError::DuplicateCell { .. }
        ));
    }

    #[test]
    fn measure_formatting() {
        assert_eq!(format_measure(1.0), "1.0");
        assert_eq!(format_measure(0.75), "0.75");
        assert_eq!(format_measure(2.0 / 3.0), "0.666667");
        assert_eq!(format_measure(0.0), "0.0");
    }

    #[test]
    fn write_is_deterministic() {
        let maps = vec![mapping("u:a", "u:b", Relation::Equivalence, 0.625)];
        assert_eq!(
            write_alignment(&maps, "u1", "u2"),
            write_alignment(&maps, "u1", "u2")
        );
    }

    proptest! {
        #[test]
        fn measure_survives_within_tolerance(value in 0.0f64..=1.0) {
            let text = format_measure(value);
            let back: f64 = text.parse().unwrap();
            prop_assert!((back - value).abs() < 1e-6);
        }

        #[test]
        fn random_alignments_round_trip(
            cells in proptest::collection::vec(
                ("[a-z]{1,8}", "[a-z]{1,8}", 0u32..=1_000_000u32, 0usize..4),
                0..12,
            ),
            uri1 in "[a-z:/#.]{1,16}",
            uri2 in "[a-z:/#.]{1,16}",
        ) {
            let mut alignment = Alignment {
                header: AlignmentHeader::new(uri1, uri2),
                cells: Vec::new(),
            };
            let mut seen = std::collections::HashSet::new();
            for (e1, e2, measure_millionths, rel) in cells {
                let entity1 = format!("urn:s#{e1}");
                let entity2 = format!("urn:t#{e2}");
                if !seen.insert((entity1.clone(), entity2.clone())) {
                    continue;
                }
                // Exactly representable at six decimals so equality is exact.
                let measure: f64 =
                    format!("0.{measure_millionths:06}").parse().unwrap();
                alignment.cells.push(AlignmentCell {
                    entity1,
                    entity2,
                    measure,
                    relation: RELATION_SYMBOLS[rel].to_string(),
                });
            }
            let parsed = read_alignment(alignment.to_xml().as_bytes()).unwrap();
            prop_assert_eq!(parsed, alignment);
        }
    }
}
