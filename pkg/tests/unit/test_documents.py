# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Unit tests for the documents module."""

import json
import math
import random
from pathlib import Path

import numpy as np
import pytest

from chaincx import as_matrix
from documents import (
    CategoryDocument,
    DocumentError,
    category_to_document,
    diagram_to_document,
    dump_category,
    dump_document,
    functor_to_document,
    load_category,
    load_diagram,
    load_functor,
    read_matrix,
    write_matrix,
)
from fincat import build_category, named_shape, p0_inclusion
from generators import functor_instance, random_diagram
from groth import hoc
from holim import sphere

SAMPLES = Path(__file__).parents[2] / "samples"


def write_json(path: Path, doc) -> Path:
    """Write a document and return its path."""
    path.write_text(json.dumps(doc))
    return path


def pullback_document(**changes) -> dict:
    """An inline diagram document over the pullback shape."""
    doc = {
        "shape": "pullback",
        "vertices": {"a": {"ranks": {"3": 1}}, "b": {"ranks": {"3": 1}}, "c": {"ranks": {}}},
        "maps": {"a->b": {"3": [[2]]}, "c->b": {}},
    }
    doc.update(changes)
    return doc


class TestCategories:
    """Tests for category documents."""

    def test_poset_shorthand(self):
        """Objects default to the order they appear in the pairs."""
        pairs = [["a", "b"], ["c", "b"]]
        doc = CategoryDocument.model_validate({"poset": {"relation_pairs": pairs}})
        assert doc.build() == named_shape("pullback")

    def test_sample(self):
        """The sample poset is the pullback shape."""
        assert load_category(SAMPLES / "pullback.json") == named_shape("pullback")

    def test_shape_name(self):
        """Names that are not paths resolve to built-in shapes."""
        assert load_category("p0(2)") == named_shape("p0(2)")

    @pytest.mark.parametrize("shape", ["p0(2)", "pushout", "discrete(2)", "p(2)"])
    def test_round_trip(self, tmp_path, shape):
        """A dumped category loads back unchanged."""
        c = named_shape(shape)
        dump_category(c, tmp_path / "c.json")
        assert load_category(tmp_path / "c.json") == c

    @pytest.mark.parametrize("seed", range(5))
    def test_hoc_round_trip(self, tmp_path, seed):
        """The cofiber category loads back equal to itself."""
        functor = p0_inclusion() if seed == 0 else functor_instance(random.Random(seed))
        cofiber = hoc(functor).cofiber
        dump_category(cofiber, tmp_path / "hoc.json")
        assert load_category(tmp_path / "hoc.json") == cofiber

    def test_explicit(self):
        """Identity composites are implicit in the document."""
        c = build_category(
            ["a", "b", "c"],
            [("f", "a", "b"), ("g", "b", "c"), ("h", "a", "c")],
            [("g", "f", "h")],
        )
        doc = category_to_document(c)
        assert doc["compose"] == [["g", "f", "h"]]
        assert [m["name"] for m in doc["morphisms"]] == ["f", "g", "h"]

    def test_unknown_object(self, tmp_path):
        """Structural errors are reported as document errors."""
        doc = {"objects": ["a"], "morphisms": [{"name": "f", "src": "a", "tgt": "z"}]}
        path = write_json(tmp_path / "c.json", doc)
        with pytest.raises(DocumentError, match="unknown object"):
            load_category(path)

    def test_bad_json(self, tmp_path):
        """Syntax errors cite the line."""
        path = tmp_path / "c.json"
        path.write_text('{\n  "objects": [\n')
        with pytest.raises(DocumentError, match="line 3"):
            load_category(path)

    def test_extra_field(self, tmp_path):
        """Unknown fields are rejected with their path."""
        path = write_json(tmp_path / "c.json", {"objects": [], "bogus": 1})
        with pytest.raises(DocumentError, match="field bogus"):
            load_category(path)

    def test_missing_file(self, tmp_path):
        """Unreadable files are document errors."""
        with pytest.raises(DocumentError):
            load_category(tmp_path / "missing.json")


class TestFunctors:
    """Tests for functor documents."""

    def test_sample(self):
        """The sample is the inclusion of P0(1+) into P0(2+)."""
        assert load_functor(SAMPLES / "incl_p01_p02.json") == p0_inclusion()

    def test_round_trip(self, tmp_path):
        """Explicit morphism maps load back unchanged."""
        functor = p0_inclusion()
        path = tmp_path / "f.json"
        dump_document(functor_to_document(functor), path)
        assert load_functor(path) == functor

    def test_missing_image(self, tmp_path):
        """Every source object needs an image."""
        path = write_json(
            tmp_path / "f.json", {"source": "arrow", "target": "arrow", "objects": {"0": "0"}}
        )
        with pytest.raises(DocumentError):
            load_functor(path)


class TestDiagrams:
    """Tests for diagram documents."""

    def test_sample(self):
        """Vertices may live in separate files; conn accepts inf."""
        d = load_diagram(SAMPLES / "spheres_pullback.json")
        assert d.vertex("b") == sphere(3)
        assert d.conn == (math.inf, 2, math.inf)

    def test_inline(self, tmp_path):
        """Inline matrices become chain map components."""
        d = load_diagram(write_json(tmp_path / "d.json", pullback_document()))
        f = d.edges[d.shape.morphism("a->b")]
        assert np.array_equal(f.component(3), as_matrix([[2]]))
        assert d.conn is None

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trip(self, tmp_path, seed):
        """A dumped diagram loads back unchanged."""
        d = random_diagram(random.Random(seed), named_shape("p0(2)"), high=4)
        path = tmp_path / "d.json"
        dump_document(diagram_to_document(d), path)
        loaded = load_diagram(path)
        assert loaded.shape == d.shape
        assert loaded.vertices == d.vertices
        assert loaded.edges == d.edges

    def test_conn_round_trip(self):
        """Infinite annotations are written as inf."""
        d = load_diagram(SAMPLES / "spheres_pullback.json")
        assert diagram_to_document(d)["conn"] == {"a": "inf", "b": 2, "c": "inf"}

    def test_bad_conn(self, tmp_path):
        """Only integers and inf are connectivity annotations."""
        path = write_json(tmp_path / "d.json", pullback_document(conn={"a": "big"}))
        with pytest.raises(DocumentError, match="field conn"):
            load_diagram(path)

    def test_missing_vertex(self, tmp_path):
        """Every shape object needs a complex."""
        doc = pullback_document()
        del doc["vertices"]["b"]
        with pytest.raises(DocumentError, match="field vertices: missing b"):
            load_diagram(write_json(tmp_path / "d.json", doc))

    def test_missing_map(self, tmp_path):
        """Every non-identity morphism needs a map."""
        doc = pullback_document(maps={"a->b": {}})
        with pytest.raises(DocumentError, match="field maps: missing c->b"):
            load_diagram(write_json(tmp_path / "d.json", doc))

    def test_wrong_shape(self, tmp_path):
        """Matrices must match the ranks of their endpoints."""
        doc = pullback_document(maps={"a->b": {"3": [[1, 2]]}, "c->b": {}})
        with pytest.raises(DocumentError, match="maps.a->b.3"):
            load_diagram(write_json(tmp_path / "d.json", doc))


class TestMatrices:
    """Tests for the plain-text matrix format."""

    def test_sample(self):
        """The sample holds [[2, 4], [6, 8]] with labels."""
        m, rows, cols = read_matrix((SAMPLES / "snf_2x2.txt").read_text())
        assert np.array_equal(m, as_matrix([[2, 4], [6, 8]]))
        assert rows is not None and cols is not None

    def test_labels(self):
        """Labels are written as headers and read back."""
        m = as_matrix([[1, -2, 0], [0, 3, 4]])
        text = write_matrix(m, ["x", "y"], ["p", "q", "r"])
        assert text.splitlines()[0] == "# shape: 2 3"
        back, rows, cols = read_matrix(text)
        assert np.array_equal(back, m)
        assert rows == ["x", "y"] and cols == ["p", "q", "r"]

    def test_empty(self):
        """The shape header gives an empty matrix its dimensions."""
        m, _, _ = read_matrix("# shape: 0 3\n")
        assert m.shape == (0, 3)

    def test_no_header(self):
        """The shape is inferred from the rows."""
        m, rows, cols = read_matrix("1 2\n3 4\n")
        assert m.shape == (2, 2) and rows is None and cols is None

    def test_ragged(self):
        """Short rows are reported with their line."""
        with pytest.raises(DocumentError, match="line 3: 1 entries, expected 2"):
            read_matrix("# shape: 2 2\n1 2\n3\n")

    def test_not_integers(self):
        """Non-integer entries are reported with their line."""
        with pytest.raises(DocumentError, match="line 2: not a row of integers"):
            read_matrix("1 2\n1.5 2\n")

    def test_blank(self):
        """An empty text needs a shape header."""
        with pytest.raises(DocumentError, match="without a shape header"):
            read_matrix("\n")
