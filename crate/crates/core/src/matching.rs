//! Cross-ontology candidate pairs, correspondence classification, and the
//! score matrix handed to the assignment step.
//!
//! Every source entity is paired with every target entity in one global
//! matrix; pairs whose kinds admit no correspondence relation are kept at
//! score zero and can never be emitted as mappings.

use thiserror::Error;

use crate::assignment::Assignment;
use crate::graph::{Entity, EntityGraph, EntityKind};
use crate::metrics::{similarity_with, MetricId};

/// Correspondence relation between two matched entities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// Same-level match: both sides have the same entity kind.
    Equivalence,
    /// Sub-concept on one side, concept on the other.
    Isa,
    /// Property on one side, concept or sub-concept on the other.
    General,
}

#[derive(Debug, Error, PartialEq)]
pub enum MatchingError {
    #[error("ontology {uri} has no entities to match")]
    EmptyOntology { uri: String },
}

/// Relation for a pair of entity kinds, or `None` when the pair admits no
/// correspondence (for example instance vs property).
pub fn classify_correspondence(source: EntityKind, target: EntityKind) -> Option<Relation> {
    use EntityKind::*;
    match (source, target) {
        (a, b) if a == b => Some(Relation::Equivalence),
        (SubConcept, Concept) | (Concept, SubConcept) => Some(Relation::Isa),
        (Property, Concept) | (Property, SubConcept) | (Concept, Property) | (SubConcept, Property) => {
            Some(Relation::General)
        }
        _ => None,
    }
}

/// One correspondence: source and target entity, the relation between
/// them, the metric that produced the score, and the score itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Mapping {
    pub source: Entity,
    pub target: Entity,
    pub relation: Relation,
    pub metric: MetricId,
    pub score: f64,
}

/// Pairwise similarity of all source entities against all target entities.
///
/// Rows follow the source graph's entity order, columns the target's.
#[derive(Debug, Clone)]
pub struct ScoreMatrix {
    rows: Vec<Entity>,
    cols: Vec<Entity>,
    metric: MetricId,
    values: Vec<Vec<f64>>,
    relations: Vec<Vec<Option<Relation>>>,
}

impl ScoreMatrix {
    pub fn rows(&self) -> &[Entity] {
        &self.rows
    }

    pub fn cols(&self) -> &[Entity] {
        &self.cols
    }

    pub fn metric(&self) -> MetricId {
        self.metric
    }

    /// Row-major similarity values, one inner vector per source entity.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row][col]
    }

    pub fn relation(&self, row: usize, col: usize) -> Option<Relation> {
        self.relations[row][col]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }
}

/// Score every cross-ontology entity pair with the chosen metric.
///
/// Cells without a correspondence relation score zero. Comparison always
/// runs on the normalized labels, never on raw uris.
pub fn build_score_matrix(
    source: &EntityGraph,
    target: &EntityGraph,
    metric: MetricId,
    qgram_size: usize,
) -> Result<ScoreMatrix, MatchingError> {
    if source.is_empty() {
        return Err(MatchingError::EmptyOntology {
            uri: source.ontology_uri().to_string(),
        });
    }
    if target.is_empty() {
        return Err(MatchingError::EmptyOntology {
            uri: target.ontology_uri().to_string(),
        });
    }

    let rows: Vec<Entity> = source.entities().to_vec();
    let cols: Vec<Entity> = target.entities().to_vec();
    let mut values = vec![vec![0.0f64; cols.len()]; rows.len()];
    let mut relations = vec![vec![None; cols.len()]; rows.len()];
    for (i, s) in rows.iter().enumerate() {
        for (j, t) in cols.iter().enumerate() {
            let relation = classify_correspondence(s.kind, t.kind);
            relations[i][j] = relation;
            if relation.is_some() {
                values[i][j] = similarity_with(metric, &s.label, &t.label, qgram_size);
            }
        }
    }
    Ok(ScoreMatrix {
        rows,
        cols,
        metric,
        values,
        relations,
    })
}

/// Turn an assignment over the score matrix into mappings.
///
/// Keeps assigned pairs whose score reaches `threshold` and whose kinds
/// admit a relation; output is sorted by source entity order.
pub fn mappings_from_assignment(
    matrix: &ScoreMatrix,
    assignment: &Assignment,
    threshold: f64,
) -> Vec<Mapping> {
    let mut out: Vec<Mapping> = Vec::new();
    for &(i, j) in assignment.pairs() {
        let score = matrix.value(i, j);
        let relation = match matrix.relation(i, j) {
            Some(r) => r,
            None => continue,
        };
        if score < threshold {
            continue;
        }
        out.push(Mapping {
            source: matrix.rows[i].clone(),
            target: matrix.cols[j].clone(),
            relation,
            metric: matrix.metric,
            score,
        });
    }
    out.sort_by_key(|m| m.source.id);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::kuhn_munkres;
    use crate::graph::{PendingArc, PendingEntity, PendingKind};

    fn graph(entries: &[(&str, &str, PendingKind)]) -> EntityGraph {
        let entities = entries
            .iter()
            .map(|(uri, label, kind)| PendingEntity {
                uri: uri.to_string(),
                label: label.to_string(),
                kind: *kind,
            })
            .collect();
        EntityGraph::from_parts("urn:test", entities, Vec::<PendingArc>::new()).unwrap()
    }

    #[test]
    fn classification_table() {
        use EntityKind::*;
        assert_eq!(classify_correspondence(Concept, Concept), Some(Relation::Equivalence));
        assert_eq!(classify_correspondence(Instance, Instance), Some(Relation::Equivalence));
        assert_eq!(classify_correspondence(SubConcept, Concept), Some(Relation::Isa));
        assert_eq!(classify_correspondence(Concept, SubConcept), Some(Relation::Isa));
        assert_eq!(classify_correspondence(Property, SubConcept), Some(Relation::General));
        assert_eq!(classify_correspondence(SubConcept, Property), Some(Relation::General));
        assert_eq!(classify_correspondence(Instance, Property), None);
        assert_eq!(classify_correspondence(Instance, Concept), None);
        assert_eq!(classify_correspondence(Property, Instance), None);
    }

    #[test]
    fn single_concept_self_match() {
        let g = graph(&[("u:car", "car", PendingKind::ClassLike)]);
        let m = build_score_matrix(&g, &g, MetricId::Levenshtein, 2).unwrap();
        assert_eq!(m.dims(), (1, 1));
        assert_eq!(m.value(0, 0), 1.0);
        assert_eq!(m.relation(0, 0), Some(Relation::Equivalence));
    }

    #[test]
    fn incompatible_kinds_score_zero() {
        let source = graph(&[("u:car", "car", PendingKind::ClassLike)]);
        let target = graph(&[
            ("u:cars", "cars", PendingKind::ClassLike),
            ("u:car-instance", "car", PendingKind::Instance),
        ]);
        let m = build_score_matrix(&source, &target, MetricId::Levenshtein, 2).unwrap();
        assert_eq!(m.values(), &[vec![0.75, 0.0]]);
        assert_eq!(m.relation(0, 1), None);
    }

    #[test]
    fn dimensions_follow_entity_counts() {
        let source = graph(&[
            ("u:a", "a", PendingKind::ClassLike),
            ("u:b", "b", PendingKind::ClassLike),
            ("u:c", "c", PendingKind::ClassLike),
        ]);
        let target = graph(&[
            ("u:v", "v", PendingKind::ClassLike),
            ("u:w", "w", PendingKind::ClassLike),
            ("u:x", "x", PendingKind::ClassLike),
            ("u:y", "y", PendingKind::ClassLike),
            ("u:z", "z", PendingKind::ClassLike),
        ]);
        let m = build_score_matrix(&source, &target, MetricId::Jaccard, 2).unwrap();
        assert_eq!(m.dims(), (3, 5));
    }

    #[test]
    fn empty_ontology_rejected() {
        let empty = EntityGraph::from_parts("urn:empty", vec![], vec![]).unwrap();
        let g = graph(&[("u:car", "car", PendingKind::ClassLike)]);
        assert!(matches!(
            build_score_matrix(&empty, &g, MetricId::Levenshtein, 2),
            Err(MatchingError::EmptyOntology { .. })
        ));
        assert!(matches!(
            build_score_matrix(&g, &empty, MetricId::Levenshtein, 2),
            Err(MatchingError::EmptyOntology { .. })
        ));
    }

    #[test]
    fn self_match_diagonal_is_one_for_every_metric() {
        let g = graph(&[
            ("u:vehicle", "vehicle", PendingKind::ClassLike),
            ("u:make", "make", PendingKind::Property),
            ("u:item", "item one", PendingKind::Instance),
        ]);
        for metric in MetricId::ALL {
            let m = build_score_matrix(&g, &g, metric, 2).unwrap();
            for i in 0..g.len() {
                assert_eq!(m.value(i, i), 1.0, "metric {metric}");
            }
        }
    }

    #[test]
    fn threshold_filters_and_orders_mappings() {
        let values = vec![vec![0.9, 0.1], vec![0.4, 0.8]];
        let source = graph(&[
            ("u:s0", "alpha", PendingKind::ClassLike),
            ("u:s1", "beta", PendingKind::ClassLike),
        ]);
        let target = graph(&[
            ("u:t0", "gamma", PendingKind::ClassLike),
            ("u:t1", "delta", PendingKind::ClassLike),
        ]);
        let mut matrix = build_score_matrix(&source, &target, MetricId::Levenshtein, 2).unwrap();
        matrix.values = values.clone();
        let assignment = kuhn_munkres(&values).unwrap();

        let maps = mappings_from_assignment(&matrix, &assignment, 0.5);
        assert_eq!(maps.len(), 2);
        assert_eq!(maps[0].score, 0.9);
        assert_eq!(maps[1].score, 0.8);
        assert!(maps[0].source.id < maps[1].source.id);

        let none = mappings_from_assignment(&matrix, &assignment, 0.95);
        assert!(none.is_empty());
    }

    #[test]
    fn raising_threshold_never_adds_mappings() {
        let source = graph(&[
            ("u:car", "car", PendingKind::ClassLike),
            ("u:boat", "boat", PendingKind::ClassLike),
        ]);
        let target = graph(&[
            ("u:cars", "cars", PendingKind::ClassLike),
            ("u:plane", "plane", PendingKind::ClassLike),
        ]);
        let matrix = build_score_matrix(&source, &target, MetricId::Levenshtein, 2).unwrap();
        let assignment = kuhn_munkres(matrix.values()).unwrap();
        let mut previous = usize::MAX;
        for threshold in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let maps = mappings_from_assignment(&matrix, &assignment, threshold);
            assert!(maps.len() <= previous);
            previous = maps.len();
        }
    }
}
