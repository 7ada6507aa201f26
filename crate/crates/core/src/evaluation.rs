//! Precision, recall and F-measure of a system alignment against a
//! reference alignment, plus per-category averaging.

use thiserror::Error;

use crate::alignment::Alignment;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("reference alignment has no cells")]
    EmptyReference,
    #[error("no reports fall into the selected category")]
    EmptyCategory,
}

/// Scores of one system/reference comparison together with the underlying
/// counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub correct: usize,
    pub system_total: usize,
    pub reference_total: usize,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

/// Number of cells whose (entity1, entity2) pair appears in both
/// alignments. With `strict_relation` the relation symbol must agree too;
/// the measure is never compared.
pub fn correct_mappings(system: &Alignment, reference: &Alignment, strict_relation: bool) -> usize {
    use std::collections::HashSet;
    if strict_relation {
        let reference_cells: HashSet<(&str, &str, &str)> = reference
            .cells
            .iter()
            .map(|c| (c.entity1.as_str(), c.entity2.as_str(), c.relation.as_str()))
            .collect();
        system
            .cells
            .iter()
            .filter(|c| {
                reference_cells.contains(&(
                    c.entity1.as_str(),
                    c.entity2.as_str(),
                    c.relation.as_str(),
                ))
            })
            .count()
    } else {
        let reference_pairs: HashSet<(&str, &str)> = reference
            .cells
            .iter()
            .map(|c| (c.entity1.as_str(), c.entity2.as_str()))
            .collect();
        system
            .cells
            .iter()
            .filter(|c| reference_pairs.contains(&(c.entity1.as_str(), c.entity2.as_str())))
            .count()
    }
}

/// Correct mappings over the total mappings produced by the system;
/// zero when the system produced nothing.
pub fn precision(correct: usize, system_total: usize) -> f64 {
    if system_total == 0 {
        0.0
    } else {
        correct as f64 / system_total as f64
    }
}

/// Correct mappings over the total mappings in the reference.
pub fn recall(correct: usize, reference_total: usize) -> Result<f64, EvalError> {
    if reference_total == 0 {
        return Err(EvalError::EmptyReference);
    }
    Ok(correct as f64 / reference_total as f64)
}

/// Harmonic mean `2PR / (P + R)`, zero when both inputs are zero.
pub fn f_measure(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

impl EvalReport {
    /// Compare a system alignment against a reference.
    pub fn evaluate(
        system: &Alignment,
        reference: &Alignment,
        strict_relation: bool,
    ) -> Result<EvalReport, EvalError> {
        let correct = correct_mappings(system, reference, strict_relation);
        EvalReport::from_counts(correct, system.cells.len(), reference.cells.len())
    }

    pub fn from_counts(
        correct: usize,
        system_total: usize,
        reference_total: usize,
    ) -> Result<EvalReport, EvalError> {
        let p = precision(correct, system_total);
        let r = recall(correct, reference_total)?;
        Ok(EvalReport {
            correct,
            system_total,
            reference_total,
            precision: p,
            recall: r,
            f_measure: f_measure(p, r),
        })
    }
}

/// Size class of a benchmark ontology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightClass {
    Light,
    Heavy,
}

/// Report selection for averaging.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Light,
    Heavy,
    All,
}

/// Arithmetic mean of (P, R, F) over the reports in the category — means
/// of the per-ontology values, not pooled counts.
pub fn category_average(
    reports: &[(String, WeightClass, EvalReport)],
    category: Category,
) -> Result<(f64, f64, f64), EvalError> {
    let selected: Vec<&EvalReport> = reports
        .iter()
        .filter(|(_, class, _)| match category {
            Category::All => true,
            Category::Light => *class == WeightClass::Light,
            Category::Heavy => *class == WeightClass::Heavy,
        })
        .map(|(_, _, r)| r)
        .collect();
    if selected.is_empty() {
        return Err(EvalError::EmptyCategory);
    }
    let n = selected.len() as f64;
    Ok((
        selected.iter().map(|r| r.precision).sum::<f64>() / n,
        selected.iter().map(|r| r.recall).sum::<f64>() / n,
        selected.iter().map(|r| r.f_measure).sum::<f64>() / n,
    ))
}

/// Plain-text table with P, R and F to five decimals.
pub fn render_table(rows: &[(String, EvalReport)]) -> String {
    let id_width = rows
        .iter()
        .map(|(id, _)| id.len())
        .max()
        .unwrap_or(0)
        .max("ontology".len());
    let mut out = format!("{:<id_width$}  {:>7}  {:>7}  {:>7}\n", "ontology", "P", "R", "F");
    for (id, r) in rows {
        out.push_str(&format!(
            "{:<id_width$}  {:>7.5}  {:>7.5}  {:>7.5}\n",
            id, r.precision, r.recall, r.f_measure
        ));
    }
    out
}

/// Machine-readable line per record:
/// `id<TAB>correct<TAB>system<TAB>reference<TAB>P<TAB>R<TAB>F`.
pub fn render_records(rows: &[(String, EvalReport)]) -> String {
    let mut out = String::new();
    for (id, r) in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{:.5}\t{:.5}\t{:.5}\n",
            id, r.correct, r.system_total, r.reference_total, r.precision, r.recall, r.f_measure
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{AlignmentCell, AlignmentHeader};
    use proptest::prelude::*;

    fn alignment(pairs: &[(&str, &str)]) -> Alignment {
        Alignment {
            header: AlignmentHeader::new("u1", "u2"),
            cells: pairs
                .iter()
                .map(|(a, b)| AlignmentCell {
                    entity1: a.to_string(),
                    entity2: b.to_string(),
                    measure: 1.0,
                    relation: "=".to_string(),
                })
                .collect(),
        }
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(precision(3, 4), 0.75);
        assert_eq!(precision(5, 5), 1.0);
        assert_eq!(precision(0, 5), 0.0);
        assert_eq!(precision(0, 0), 0.0);
        assert_eq!(recall(3, 5).unwrap(), 0.6);
        assert_eq!(recall(7, 7).unwrap(), 1.0);
        assert_eq!(recall(0, 7).unwrap(), 0.0);
        assert_eq!(recall(0, 0).unwrap_err(), EvalError::EmptyReference);
        assert!((f_measure(0.75, 0.6) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(f_measure(1.0, 1.0), 1.0);
        assert_eq!(f_measure(0.0, 0.0), 0.0);
    }

    #[test]
    fn counts_overlapping_pairs() {
        let reference = alignment(&[("a", "a"), ("b", "b"), ("c", "c"), ("d", "d"), ("e", "e")]);
        let system = alignment(&[("a", "a"), ("b", "b"), ("c", "c"), ("x", "y")]);
        assert_eq!(correct_mappings(&system, &reference, false), 3);
        assert_eq!(correct_mappings(&reference, &reference, false), 5);
        let disjoint = alignment(&[("p", "q")]);
        assert_eq!(correct_mappings(&disjoint, &reference, false), 0);

        let report = EvalReport::evaluate(&system, &reference, false).unwrap();
        assert_eq!(report.precision, 0.75);
        assert_eq!(report.recall, 0.6);
        assert!((report.f_measure - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn strict_relation_mode() {
        let mut system = alignment(&[("a", "a")]);
        system.cells[0].relation = "<".to_string();
        let reference = alignment(&[("a", "a")]);
        assert_eq!(correct_mappings(&system, &reference, false), 1);
        assert_eq!(correct_mappings(&system, &reference, true), 0);
    }

    #[test]
    fn self_evaluation_is_perfect() {
        let a = alignment(&[("a", "a"), ("b", "b")]);
        let report = EvalReport::evaluate(&a, &a, true).unwrap();
        assert_eq!(report.precision, 1.0);
        assert_eq!(report.recall, 1.0);
        assert_eq!(report.f_measure, 1.0);
    }

    #[test]
    fn category_averaging() {
        let r1 = EvalReport::from_counts(1, 2, 2).unwrap(); // P 0.5
        let r2 = EvalReport::from_counts(2, 2, 2).unwrap(); // P 1.0
        let reports = vec![
            ("one".to_string(), WeightClass::Light, r1),
            ("two".to_string(), WeightClass::Heavy, r2),
        ];
        let (p, _, _) = category_average(&reports, Category::All).unwrap();
        assert_eq!(p, 0.75);
        let (p_light, _, _) = category_average(&reports, Category::Light).unwrap();
        assert_eq!(p_light, 0.5);
        let single = &reports[..1];
        let (p1, r1m, f1) = category_average(single, Category::All).unwrap();
        assert_eq!((p1, r1m, f1), (0.5, 0.5, 0.5));
        assert_eq!(
            category_average(&reports[..1], Category::Heavy).unwrap_err(),
            EvalError::EmptyCategory
        );
    }

    #[test]
    fn renderers_use_five_decimals() {
        let report = EvalReport::from_counts(3, 4, 5).unwrap();
        let table = render_table(&[("o101".to_string(), report.clone())]);
        assert!(table.contains("0.75000"));
        assert!(table.contains("0.60000"));
        assert!(table.contains("0.66667"));
        let records = render_records(&[("o101".to_string(), report)]);
        assert_eq!(records, "o101\t3\t4\t5\t0.75000\t0.60000\t0.66667\n");
    }

    proptest! {
        #[test]
        fn f_measure_between_min_and_max(p in 0.0f64..=1.0, r in 0.0f64..=1.0) {
            prop_assume!(p + r > 0.0);
            let f = f_measure(p, r);
            prop_assert!(f >= p.min(r) - 1e-9);
            prop_assert!(f <= p.max(r) + 1e-9);
        }
    }
}
