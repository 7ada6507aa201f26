//! Graph-based ontology matching.
//!
//! The pipeline: parse two ontologies (OWL/RDF-XML, bare RDF/XML or generic
//! XML) into typed entity graphs, score every cross-ontology entity pair
//! with a string similarity metric, solve the score matrix as a
//! maximum-weight bipartite assignment, and emit the kept pairs in the
//! alignment XML interchange format. A separate evaluation step scores a
//! system alignment against a reference with precision, recall and
//! F-measure.

pub mod alignment;
pub mod assignment;
pub mod evaluation;
pub mod graph;
pub mod ingest;
pub mod matching;
pub mod metrics;
mod xml_doc;

pub use alignment::{read_alignment, write_alignment, Alignment, AlignmentCell, AlignmentHeader};
pub use assignment::{brute_force_assignment, kuhn_munkres, Assignment};
pub use evaluation::{EvalReport, WeightClass};
pub use graph::{ArcKind, Entity, EntityGraph, EntityId, EntityKind};
pub use ingest::{detect_format, normalize_label, parse_bytes, parse_ontology, FormatKind};
pub use matching::{
    build_score_matrix, classify_correspondence, mappings_from_assignment, Mapping, Relation,
    ScoreMatrix,
};
pub use metrics::{metric_by_id, MetricId, DEFAULT_QGRAM_SIZE};
