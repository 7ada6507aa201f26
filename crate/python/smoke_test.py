#!/usr/bin/env python3
"""Smoke test for the ontomatch_py extension module.

Build the module first, then run this script from the repository root:

    cargo build -p ontomatch-python
    python3 python/smoke_test.py
"""

import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "crates" / "core" / "tests" / "fixtures"


def load_module():
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libontomatch_py.so", "ontomatch_py.so", "libontomatch_py.dylib")
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("extension not built; run: cargo build -p ontomatch-python")
    stage = Path(tempfile.mkdtemp(prefix="ontomatch_py_"))
    shutil.copy(built, stage / "ontomatch_py.so")
    sys.path.insert(0, str(stage))
    import ontomatch_py

    return ontomatch_py


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    om = load_module()

    assert om.detect_format(b"<catalog><item/></catalog>") == "generic-xml"
    assert om.detect_format(
        b'<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"/>'
    ) == "rdf-xml"
    print("ok detect_format")

    assert om.normalize_label("http://ex.org/onto#HasEngineSize") == "has engine size"
    assert om.normalize_label("Blood_Pressure") == "blood pressure"
    print("ok normalize_label")

    assert om.levenshtein_edits("car", "cars") == 1
    assert approx(om.similarity("levenshtein", "car", "cars"), 0.75)
    assert approx(om.similarity("qgrams", "car", "cars"), 0.8)
    assert approx(om.similarity("smithwaterman", "car", "cars"), 1.0)
    assert approx(om.similarity("jaccard", "blood pressure", "blood sugar"), 1.0 / 3.0)
    try:
        om.similarity("cosine", "a", "b")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown metric accepted")
    print("ok similarity metrics")

    matrix = [[0.9, 0.1], [0.4, 0.8]]
    pairs, total = om.assignment(matrix)
    assert pairs == [(0, 0), (1, 1)]
    assert approx(total, 1.7)
    oracle_pairs, oracle_total = om.assignment_brute_force(matrix)
    assert (pairs, total) == (oracle_pairs, oracle_total)
    print("ok assignment")

    graph = om.parse_file(str(FIXTURES / "univ.owl"))
    assert len(graph) == 11
    kinds = {kind for (_, _, kind) in graph.entities()}
    assert kinds == {"concept", "subconcept", "property", "instance"}
    assert "CONCEPT organization" in graph.debug_dump()
    print("ok parse_file:", repr(graph))

    doc = om.match_files(
        str(FIXTURES / "plural_source.owl"),
        str(FIXTURES / "plural_target.owl"),
        metric="levenshtein",
        threshold=0.5,
    )
    assert doc.count("<Cell>") == 5
    assert "<method>Automated generated</method>" in doc
    print("ok match_files")

    with tempfile.NamedTemporaryFile("w", suffix=".xml", delete=False) as handle:
        handle.write(doc)
        system_path = handle.name
    report = om.evaluate_files(system_path, str(FIXTURES / "plural_reference.xml"))
    assert report["correct"] == 5
    assert approx(report["precision"], 1.0)
    assert approx(report["recall"], 1.0)
    assert approx(report["f_measure"], 1.0)
    print("ok evaluate_files:", report)

    print("smoke test passed")


if __name__ == "__main__":
    main()
