# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""JSON documents for categories, functors and diagrams, and plain-text matrices.

A category document lists objects, non-identity morphisms and the composites of
non-identity pairs; identities are implicit and named `id_<object>`:

    {"objects": ["a", "b"], "morphisms": [{"name": "f", "src": "a", "tgt": "b"}],
     "compose": []}

Posets may instead be given as `{"poset": {"objects": [...], "relation_pairs": [...]}}`.
Anywhere a category is expected a built-in shape name such as `"p0(2)"` is accepted.

A diagram document holds a shape, one complex per object label and one map per
non-identity morphism name. Complexes and matrices are given inline or as paths,
relative to the document, of complex documents and plain-text matrix files.
"""

import json
import logging
import math
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from chaincx import ChainComplex, ChainMap, as_matrix
from fincat import (
    CategoryError,
    FinCategory,
    FinFunctor,
    build_category,
    named_shape,
    preorder_category,
    thin_functor,
)
from holim import Diagram, make_diagram

logger = logging.getLogger(__name__)

INFINITE_CONN = "inf"


class DocumentError(ValueError):
    """Raised for malformed documents; the message cites the field path or line."""


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class MorphismEntry(_Document):
    """A non-identity morphism."""

    name: str
    src: str
    tgt: str


class PosetEntry(_Document):
    """Shorthand for a preorder; objects default to those named by the pairs."""

    objects: list[str] | None = None
    relation_pairs: list[tuple[str, str]] = Field(default_factory=list)


class CategoryDocument(_Document):
    """A finite category, explicit or as a poset shorthand."""

    objects: list[str] = Field(default_factory=list)
    morphisms: list[MorphismEntry] = Field(default_factory=list)
    compose: list[tuple[str, str, str]] = Field(default_factory=list)
    poset: PosetEntry | None = None

    def build(self) -> FinCategory:
        """Construct the category."""
        if self.poset is None:
            return build_category(
                self.objects, [(m.name, m.src, m.tgt) for m in self.morphisms], self.compose
            )
        objects = self.poset.objects
        if objects is None:
            objects = list(dict.fromkeys(x for pair in self.poset.relation_pairs for x in pair))
        return preorder_category(objects, self.poset.relation_pairs)


class ComplexDocument(_Document):
    """A bounded complex: ranks and boundary matrices d(n): C_n -> C_{n-1} by degree."""

    ranks: dict[int, int]
    differentials: dict[int, list[list[int]] | str] = Field(default_factory=dict)


class FunctorDocument(_Document):
    """A functor; the morphism map may be omitted when the target is thin."""

    source: CategoryDocument | str
    target: CategoryDocument | str
    objects: dict[str, str]
    morphisms: dict[str, str] | None = None


class DiagramDocument(_Document):
    """A diagram of complexes with optional connectivity annotations."""

    shape: CategoryDocument | str
    vertices: dict[str, ComplexDocument | str]
    maps: dict[str, dict[int, list[list[int]] | str]] = Field(default_factory=dict)
    conn: dict[str, int | str] | None = None

    @field_validator("conn")
    @classmethod
    def _finite_or_inf(cls, value):
        if value is not None:
            for label, c in value.items():
                if isinstance(c, str) and c != INFINITE_CONN:
                    raise ValueError(f"conn of {label} must be an integer or {INFINITE_CONN!r}")
        return value


def _wrap(e: ValidationError, where: str) -> DocumentError:
    first = e.errors()[0]
    path = ".".join(str(p) for p in first["loc"])
    return DocumentError(f"{where}: field {path}: {first['msg']}")


def _parse(model: type[BaseModel], data: Any, where: str):
    try:
        return model.model_validate(data)
    except ValidationError as e:
        logger.error("Invalid %s document %s", model.__name__, where)
        raise _wrap(e, where) from None


def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path}: line {e.lineno}: {e.msg}") from None
    except OSError as e:
        raise DocumentError(f"{path}: {e.strerror}") from None


def resolve_category(value: CategoryDocument | str, base: Path | None = None) -> FinCategory:
    """A category from a document, a built-in shape name or a path to a document."""
    try:
        if isinstance(value, CategoryDocument):
            return value.build()
        if value.endswith(".json"):
            path = (base or Path.cwd()) / value
            return _parse(CategoryDocument, _read_json(path), str(path)).build()
        return named_shape(value)
    except CategoryError as e:
        raise DocumentError(str(e)) from None


def load_category(path: Path | str) -> FinCategory:
    """Read a category document, or resolve a built-in shape name."""
    text = str(path)
    if not text.endswith(".json"):
        return resolve_category(text)
    path = Path(path)
    return resolve_category(_parse(CategoryDocument, _read_json(path), str(path)))


def category_to_document(c: FinCategory) -> dict:
    """The explicit document of c; identities and their composites are left implicit."""
    names = [m.name for m in c.morphisms]
    return {
        "objects": list(c.objects),
        "morphisms": [
            {"name": names[f], "src": c.objects[c.src(f)], "tgt": c.objects[c.tgt(f)]}
            for f in c.non_identities
        ],
        "compose": [
            [names[g], names[f], names[h]]
            for (g, f), h in sorted(c.composition.items(), key=lambda e: (e[0][1], e[0][0]))
            if not c.is_identity(g) and not c.is_identity(f)
        ],
    }


def dump_category(c: FinCategory, path: Path | str | None = None) -> str:
    """Serialize c; the text is also written when a path is given."""
    return dump_document(category_to_document(c), path)


def load_functor(path: Path | str) -> FinFunctor:
    """Read a functor document."""
    path = Path(path)
    doc: FunctorDocument = _parse(FunctorDocument, _read_json(path), str(path))
    source = resolve_category(doc.source, path.parent)
    target = resolve_category(doc.target, path.parent)
    try:
        if doc.morphisms is None:
            return thin_functor(source, target, doc.objects)
        omap = tuple(target.object(doc.objects[x]) for x in source.objects)
        fmap = tuple(
            target.identities[omap[m.src]]
            if m.is_identity
            else target.morphism(doc.morphisms[m.name])
            for m in source.morphisms
        )
        return FinFunctor(source, target, omap, fmap)
    except KeyError as e:
        raise DocumentError(f"{path}: field objects/morphisms: no image for {e}") from None
    except CategoryError as e:
        raise DocumentError(f"{path}: {e}") from None


def functor_to_document(functor: FinFunctor) -> dict:
    """The document of a functor with explicit source and target."""
    src, tgt = functor.source, functor.target
    return {
        "source": category_to_document(src),
        "target": category_to_document(tgt),
        "objects": {x: tgt.objects[y] for x, y in zip(src.objects, functor.object_map)},
        "morphisms": {
            src.morphisms[f].name: tgt.morphisms[functor.morphism_map[f]].name
            for f in src.non_identities
        },
    }


def _matrix(value: list[list[int]] | str, shape: tuple[int, int], base: Path, where: str):
    if isinstance(value, str):
        path = base / value
        try:
            text = path.read_text()
        except OSError as e:
            raise DocumentError(f"{path}: {e.strerror}") from None
        m = read_matrix(text, str(path))[0]
    else:
        try:
            m = as_matrix(value, shape)
        except ValueError as e:
            raise DocumentError(f"{where}: {e}") from None
    if m.shape != shape:
        raise DocumentError(f"{where}: matrix has shape {m.shape}, expected {shape}")
    return m


def _complex(value: ComplexDocument | str, base: Path, where: str) -> ChainComplex:
    if isinstance(value, str):
        path = base / value
        value = _parse(ComplexDocument, _read_json(path), str(path))
        base, where = path.parent, str(path)
    ranks = value.ranks
    diffs = {
        n: _matrix(m, (ranks.get(n - 1, 0), ranks.get(n, 0)), base, f"{where}: d({n})")
        for n, m in value.differentials.items()
    }
    c = ChainComplex(ranks, diffs)
    c.check()
    return c


def load_diagram(path: Path | str) -> Diagram:
    """Read a diagram document; vertices and matrices may live in separate files."""
    path = Path(path)
    doc: DiagramDocument = _parse(DiagramDocument, _read_json(path), str(path))
    return diagram_from_document(doc, path.parent, str(path))


def diagram_from_document(doc: DiagramDocument, base: Path, where: str = "diagram") -> Diagram:
    """Build the diagram a parsed document describes."""
    shape = resolve_category(doc.shape, base)
    missing = [x for x in shape.objects if x not in doc.vertices]
    if missing:
        raise DocumentError(f"{where}: field vertices: missing {', '.join(missing)}")
    vertices = [_complex(doc.vertices[x], base, f"{where}: vertices.{x}") for x in shape.objects]
    maps = {}
    for f in shape.non_identities:
        m = shape.morphisms[f]
        if m.name not in doc.maps:
            raise DocumentError(f"{where}: field maps: missing {m.name}")
        source, target = vertices[m.src], vertices[m.tgt]
        components = {
            n: _matrix(v, (target.rank(n), source.rank(n)), base, f"{where}: maps.{m.name}.{n}")
            for n, v in doc.maps[m.name].items()
        }
        maps[f] = ChainMap(source, target, components)
    conn = None
    if doc.conn is not None:
        conn = [_conn(doc.conn.get(x)) for x in shape.objects]
    return make_diagram(shape, vertices, maps, conn)


def _conn(value: int | str | None) -> int | float | None:
    if value is None:
        return None
    return math.inf if value == INFINITE_CONN else int(value)


def _rows(m: np.ndarray) -> list[list[int]]:
    return [[int(v) for v in row] for row in m]


def complex_to_document(c: ChainComplex) -> dict:
    """Inline document of a complex."""
    return {
        "ranks": {str(n): r for n, r in sorted(c.ranks.items())},
        "differentials": {str(n): _rows(m) for n, m in sorted(c.differentials.items())},
    }


def diagram_to_document(d: Diagram) -> dict:
    """Inline document of a diagram, with the explicit shape document."""
    shape = d.shape
    doc: dict[str, Any] = {
        "shape": category_to_document(shape),
        "vertices": {x: complex_to_document(v) for x, v in zip(shape.objects, d.vertices)},
        "maps": {
            shape.morphisms[f].name: {
                str(n): _rows(m) for n, m in sorted(d.edges[f].components.items())
            }
            for f in shape.non_identities
        },
    }
    if d.conn is not None:
        doc["conn"] = {
            x: INFINITE_CONN if c == math.inf else int(c)
            for x, c in zip(shape.objects, d.conn)
            if c is not None
        }
    return doc


def dump_document(doc: Mapping, path: Path | str | None = None) -> str:
    """Pretty JSON with a trailing newline; written to `path` when given."""
    text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def write_matrix(
    m: np.ndarray, rows: list[str] | None = None, cols: list[str] | None = None
) -> str:
    """Plain-text matrix: a shape header, optional label headers, one row per line."""
    m = as_matrix(m, np.shape(m))
    lines = [f"# shape: {m.shape[0]} {m.shape[1]}"]
    if rows is not None:
        lines.append("# rows: " + " ".join(rows))
    if cols is not None:
        lines.append("# cols: " + " ".join(cols))
    lines.extend(" ".join(str(int(v)) for v in row) for row in m)
    return "\n".join(lines) + "\n"


def read_matrix(  # noqa: C901
    text: str, where: str = "matrix"
) -> tuple[np.ndarray, list[str] | None, list[str] | None]:
    """Parse the format of `write_matrix`; the shape header is optional for nonempty input.

    Returns:
        The matrix with its row and column labels, when present.

    Raises:
        DocumentError: citing the offending line.
    """
    headers: dict[str, tuple[int, str]] = {}
    body: list[tuple[int, list[int]]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            headers[key.strip()] = (number, value.strip())
            continue
        try:
            body.append((number, [int(v) for v in line.split()]))
        except ValueError:
            raise DocumentError(f"{where}: line {number}: not a row of integers") from None
    if "shape" in headers:
        number, value = headers["shape"]
        try:
            n_rows, n_cols = (int(v) for v in value.split())
        except ValueError:
            raise DocumentError(f"{where}: line {number}: bad shape header") from None
    elif body:
        n_rows, n_cols = len(body), len(body[0][1])
    else:
        raise DocumentError(f"{where}: empty matrix without a shape header")
    if len(body) != n_rows:
        raise DocumentError(f"{where}: {len(body)} rows, expected {n_rows}")
    for number, row in body:
        if len(row) != n_cols:
            raise DocumentError(f"{where}: line {number}: {len(row)} entries, expected {n_cols}")
    m = as_matrix([row for _, row in body], (n_rows, n_cols))
    labels = []
    for key, size in (("rows", n_rows), ("cols", n_cols)):
        if key not in headers:
            labels.append(None)
            continue
        number, value = headers[key]
        names = value.split()
        if len(names) != size:
            raise DocumentError(f"{where}: line {number}: {len(names)} labels, expected {size}")
        labels.append(names)
    return m, labels[0], labels[1]
