//! Python extension module exposing the matcher's main types and
//! operations: format detection, parsing, the similarity metrics, the
//! assignment solver, the end-to-end pipeline and alignment evaluation.

// The pyfunction wrappers expand to error conversions clippy flags as
// no-ops.
#![allow(clippy::useless_conversion)]

use std::fs;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use ontomatch::evaluation::EvalReport;
use ontomatch::matching::mappings_from_assignment;
use ontomatch::metrics::{similarity_with, MetricId};
use ontomatch::{
    brute_force_assignment, build_score_matrix, kuhn_munkres, parse_bytes, read_alignment,
    write_alignment,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn read_file(path: &str) -> PyResult<Vec<u8>> {
    fs::read(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))
}

fn metric_id(name: &str) -> PyResult<MetricId> {
    name.parse().map_err(value_err)
}

/// Parsed ontology as a typed entity graph.
#[pyclass(name = "EntityGraph", module = "ontomatch_py")]
struct PyEntityGraph {
    inner: ontomatch::EntityGraph,
}

#[pymethods]
impl PyEntityGraph {
    /// Ontology uri recorded in the document, possibly empty.
    #[getter]
    fn ontology_uri(&self) -> &str {
        self.inner.ontology_uri()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Entities as (uri, label, kind) tuples in document order.
    fn entities(&self) -> Vec<(String, String, String)> {
        self.inner
            .entities()
            .iter()
            .map(|e| {
                (
                    e.uri.clone(),
                    e.label.clone(),
                    format!("{:?}", e.kind).to_lowercase(),
                )
            })
            .collect()
    }

    /// Arcs as (source uri, kind, target uri) tuples.
    fn arcs(&self) -> Vec<(String, String, String)> {
        self.inner
            .arcs()
            .iter()
            .map(|a| {
                (
                    self.inner.entity(a.source).uri.clone(),
                    a.kind.dump_keyword().to_string(),
                    self.inner.entity(a.target).uri.clone(),
                )
            })
            .collect()
    }

    /// Plain-text debug dump of the graph.
    fn debug_dump(&self) -> String {
        self.inner.dump_debug()
    }

    fn __repr__(&self) -> String {
        format!(
            "EntityGraph(entities={}, arcs={})",
            self.inner.len(),
            self.inner.arcs().len()
        )
    }
}

/// Detect the serialization family of an XML document:
/// "owl-rdf-xml", "rdf-xml" or "generic-xml".
#[pyfunction]
fn detect_format(doc: &[u8]) -> PyResult<&'static str> {
    ontomatch::detect_format(doc)
        .map(|f| f.name())
        .map_err(value_err)
}

/// Normalize a raw name or uri into a comparable label.
#[pyfunction]
fn normalize_label(raw: &str) -> String {
    ontomatch::normalize_label(raw)
}

/// Minimum number of single-character edits between two strings.
#[pyfunction]
fn levenshtein_edits(x: &str, y: &str) -> usize {
    ontomatch::metrics::levenshtein_edits(x, y)
}

/// Similarity in [0, 1] under the named metric
/// (levenshtein, qgrams, smithwaterman or jaccard).
#[pyfunction]
#[pyo3(signature = (metric, x, y, qgram_size = 2))]
fn similarity(metric: &str, x: &str, y: &str, qgram_size: usize) -> PyResult<f64> {
    if qgram_size == 0 {
        return Err(PyValueError::new_err("qgram_size must be at least 1"));
    }
    Ok(similarity_with(metric_id(metric)?, x, y, qgram_size))
}

/// Maximum-weight assignment of a rectangular matrix; returns
/// (pairs, total_weight) with pairs sorted by row.
#[pyfunction]
fn assignment(values: Vec<Vec<f64>>) -> PyResult<(Vec<(usize, usize)>, f64)> {
    let a = kuhn_munkres(&values).map_err(value_err)?;
    Ok((a.pairs().to_vec(), a.total_weight()))
}

/// Exhaustive assignment oracle for matrices with min(m, n) <= 8.
#[pyfunction]
fn assignment_brute_force(values: Vec<Vec<f64>>) -> PyResult<(Vec<(usize, usize)>, f64)> {
    let a = brute_force_assignment(&values).map_err(value_err)?;
    Ok((a.pairs().to_vec(), a.total_weight()))
}

/// Parse an ontology file (OWL/RDF/XML) into an entity graph.
#[pyfunction]
fn parse_file(path: &str) -> PyResult<PyEntityGraph> {
    let bytes = read_file(path)?;
    let (_, graph) = parse_bytes(&bytes).map_err(value_err)?;
    Ok(PyEntityGraph { inner: graph })
}

/// Parse an ontology from bytes.
#[pyfunction]
fn parse(doc: &[u8]) -> PyResult<PyEntityGraph> {
    let (_, graph) = parse_bytes(doc).map_err(value_err)?;
    Ok(PyEntityGraph { inner: graph })
}

/// Run the full pipeline on two ontology files and return the alignment
/// XML document as a string.
#[pyfunction]
#[pyo3(signature = (source, target, metric = "levenshtein", threshold = 0.5, qgram_size = 2))]
fn match_files(
    source: &str,
    target: &str,
    metric: &str,
    threshold: f64,
    qgram_size: usize,
) -> PyResult<String> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(PyValueError::new_err("threshold must lie in [0, 1]"));
    }
    if qgram_size == 0 {
        return Err(PyValueError::new_err("qgram_size must be at least 1"));
    }
    let metric = metric_id(metric)?;
    let (_, source_graph) = parse_bytes(&read_file(source)?).map_err(value_err)?;
    let (_, target_graph) = parse_bytes(&read_file(target)?).map_err(value_err)?;
    let matrix =
        build_score_matrix(&source_graph, &target_graph, metric, qgram_size).map_err(value_err)?;
    let solved = kuhn_munkres(matrix.values()).map_err(value_err)?;
    let mappings = mappings_from_assignment(&matrix, &solved, threshold);
    let uri1 = or_path(source_graph.ontology_uri(), source);
    let uri2 = or_path(target_graph.ontology_uri(), target);
    Ok(write_alignment(&mappings, &uri1, &uri2))
}

fn or_path(uri: &str, path: &str) -> String {
    if uri.is_empty() {
        PathBuf::from(path).display().to_string()
    } else {
        uri.to_string()
    }
}

/// Evaluate a system alignment file against a reference alignment file.
/// Returns a dict with correct, system_total, reference_total, precision,
/// recall and f_measure.
#[pyfunction]
#[pyo3(signature = (system, reference, strict_relation = false))]
fn evaluate_files(
    py: Python<'_>,
    system: &str,
    reference: &str,
    strict_relation: bool,
) -> PyResult<PyObject> {
    let system_alignment = read_alignment(&read_file(system)?).map_err(value_err)?;
    let reference_alignment = read_alignment(&read_file(reference)?).map_err(value_err)?;
    let report = EvalReport::evaluate(&system_alignment, &reference_alignment, strict_relation)
        .map_err(value_err)?;
    let dict = pyo3::types::PyDict::new_bound(py);
    dict.set_item("correct", report.correct)?;
    dict.set_item("system_total", report.system_total)?;
    dict.set_item("reference_total", report.reference_total)?;
    dict.set_item("precision", report.precision)?;
    dict.set_item("recall", report.recall)?;
    dict.set_item("f_measure", report.f_measure)?;
    Ok(dict.into())
}

#[pymodule]
fn ontomatch_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEntityGraph>()?;
    m.add_function(wrap_pyfunction!(detect_format, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_label, m)?)?;
    m.add_function(wrap_pyfunction!(levenshtein_edits, m)?)?;
    m.add_function(wrap_pyfunction!(similarity, m)?)?;
    m.add_function(wrap_pyfunction!(assignment, m)?)?;
    m.add_function(wrap_pyfunction!(assignment_brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(parse_file, m)?)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(match_files, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_files, m)?)?;
    Ok(())
}
