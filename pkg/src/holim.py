# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Homotopy limits of diagrams of chain complexes.

The homotopy limit over a finite shape I is modelled by the total complex of the
normalized cosimplicial replacement: in total degree n it is the sum, over nondegenerate
simplices s = (i0 -> ... -> ik) of the nerve of I, of the degree n + k part of the value
at ik. The differential is

    D x = (-1)^k d x + delta x,
    (delta x)_t = sum_j (-1)^j phi_j x_{face_j t},

where phi_j is the identity except for the last face, which acts by the value of the
diagram on the last arrow of t. Connectivity is measured homologically: a complex is
n-connected when its integral homology vanishes through degree n.
"""

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from chaincx import (
    ChainComplex,
    ChainMap,
    block_matrix,
    connectivity,
    homology,
    homology_iso_check,
    homology_table,
    homotopy_fiber,
    identity,
    induced_is_zero,
    quasi_iso_check,
    zeros,
)
from config import Limits
from fincat import FinCategory, FinFunctor, named_shape, preorder_category
from groth import CofiberData, hoc
from nerve import (
    Nerve,
    Simplex,
    degree_table,
    dimension,
    face,
    image_simplex,
    is_degenerate,
    last_vertex,
    nerve,
    require_finite_degrees,
    simplex_label,
)
from reports import Report

logger = logging.getLogger(__name__)

PROXY_NOTE = "connectivity is measured by vanishing integral homology (H_k = 0 for k <= n)"

Conn = int | float


class DiagramError(ValueError):
    """Raised for non-functorial diagrams and false connectivity annotations."""


@dataclass(frozen=True, eq=False)
class Diagram:
    """A functor from a finite shape to chain complexes.

    Attributes:
        shape: the shape I
        vertices: per object, the complex X_i
        edges: per morphism, identities included, the chain map X(a)
        conn: optional per-object connectivity annotations; None marks a missing entry
    """

    shape: FinCategory
    vertices: tuple[ChainComplex, ...]
    edges: tuple[ChainMap, ...]
    conn: tuple[Conn | None, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.conn is not None:
            object.__setattr__(self, "conn", tuple(self.conn))
            if len(self.conn) != self.shape.size:
                raise DiagramError("one connectivity annotation is needed per object")
        if len(self.vertices) != self.shape.size:
            raise DiagramError("one complex is needed per object")
        if len(self.edges) != len(self.shape.morphisms):
            raise DiagramError("one chain map is needed per morphism")

    def vertex(self, label: str) -> ChainComplex:
        """The complex at a labelled object."""
        return self.vertices[self.shape.object(label)]

    def check(self):
        """Raise `DiagramError` unless the diagram validates."""
        report = validate_diagram(self)
        if not report.passed:
            detail = "; ".join(c.render() for c in report.failures)
            logger.error("Invalid diagram: %s", detail)
            raise DiagramError(detail)


def make_diagram(
    shape: FinCategory,
    vertices: Sequence[ChainComplex],
    maps: Mapping[int, ChainMap],
    conn: Sequence[Conn | None] | None = None,
) -> Diagram:
    """Assemble a diagram from its non-identity maps; identities are filled in."""
    edges = []
    for f, m in enumerate(shape.morphisms):
        if shape.is_identity(f):
            edges.append(ChainMap.identity(vertices[m.src]))
        elif f in maps:
            edges.append(maps[f])
        else:
            raise DiagramError(f"no chain map for {m.name}")
    return Diagram(shape, tuple(vertices), tuple(edges), None if conn is None else tuple(conn))


def validate_diagram(d: Diagram) -> Report:  # noqa: C901
    """Check endpoints, chain maps, functoriality and connectivity annotations."""
    shape = d.shape
    report = Report("diagram")
    for f, m in enumerate(shape.morphisms):
        e = d.edges[f]
        if e.source != d.vertices[m.src] or e.target != d.vertices[m.tgt]:
            report.add("endpoints", False, m.name)
        elif not e.is_chain_map():
            report.add("chain map", False, m.name)
    if report.failures:
        return report
    for x, f in enumerate(shape.identities):
        if d.edges[f] != ChainMap.identity(d.vertices[x]):
            report.add("identities", False, shape.objects[x])
    for (g, f), gf in sorted(shape.composition.items()):
        if d.edges[gf] != d.edges[g].after(d.edges[f]):
            report.add(
                "composition", False, f"{shape.morphisms[g].name} o {shape.morphisms[f].name}"
            )
    if not report.failures:
        report.add("functoriality", True)
    if d.conn is not None:
        for x, declared in enumerate(d.conn):
            if declared is None:
                continue
            actual = connectivity(d.vertices[x])
            ok = actual >= declared
            report.add(
                f"conn {shape.objects[x]}",
                ok,
                f"declared {_fmt(declared)}, homology gives {_fmt(actual)}",
            )
    return report


def effective_conn(d: Diagram) -> tuple[Conn, ...]:
    """Declared connectivity where present, otherwise computed from homology."""
    declared = d.conn or (None,) * d.shape.size
    return tuple(
        c if c is not None else connectivity(x) for c, x in zip(declared, d.vertices)
    )


def _fmt(value: Conn) -> str:
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    return str(int(value))


def constant_diagram(shape: FinCategory, x: ChainComplex) -> Diagram:
    """Every object goes to x and every morphism to the identity."""
    return Diagram(
        shape, (x,) * shape.size, tuple(ChainMap.identity(x) for _ in shape.morphisms)
    )


def sphere(n: int) -> ChainComplex:
    """Z concentrated in degree n, standing in for an n-sphere."""
    return ChainComplex.concentrated(n)


def pullback_diagram(
    f: ChainMap, g: ChainMap, conn: Sequence[Conn | None] | None = None
) -> Diagram:
    """The diagram a -> b <- c given by f: X_a -> X_b and g: X_c -> X_b."""
    if f.target != g.target:
        raise DiagramError("the two maps of a pullback diagram must share their target")
    shape = named_shape("pullback")
    maps = {shape.morphism("a->b"): f, shape.morphism("c->b"): g}
    return make_diagram(shape, (f.source, f.target, g.source), maps, conn)


def restrict_diagram(functor: FinFunctor, d: Diagram) -> Diagram:
    """The pulled-back diagram F*D on the source of F."""
    if functor.target != d.shape:
        raise DiagramError("the functor does not land in the diagram's shape")
    conn = None
    if d.conn is not None:
        conn = tuple(d.conn[x] for x in functor.object_map)
    return Diagram(
        functor.source,
        tuple(d.vertices[x] for x in functor.object_map),
        tuple(d.edges[f] for f in functor.morphism_map),
        conn,
    )


def theorem_a_bound(c: FinCategory, conn: Sequence[Conn] | Mapping[str, Conn]) -> Conn:
    """The connectivity lower bound min over objects of conn(i) - deg(i).

    Args:
        c: the shape
        conn: per-object connectivity, by index or by label

    Returns:
        The bound; `math.inf` for the empty shape.

    Raises:
        InfiniteDimensionError: when some over category has an infinite nerve.
        DiagramError: when `conn` misses an object, names an unknown one or has the wrong
            length.
    """
    if isinstance(conn, Mapping):
        missing = [x for x in c.objects if x not in conn]
        if missing:
            raise DiagramError(f"no connectivity given for {', '.join(missing)}")
        unknown = [x for x in conn if x not in c.objects]
        if unknown:
            raise DiagramError(f"no object labelled {', '.join(unknown)}")
        values = [conn[x] for x in c.objects]
    else:
        values = list(conn)
        if len(values) != c.size:
            raise DiagramError(f"{len(values)} connectivity values for {c.size} objects")
    table = degree_table(c)
    require_finite_degrees(c, table)
    bound = min((v - deg for v, deg in zip(values, table.degrees)), default=math.inf)
    logger.debug("Connectivity bound for %r: %s", c, bound)
    return bound


@dataclass(frozen=True, eq=False)
class TotalComplex:
    """The total complex of a diagram with an index of its generators.

    Attributes:
        diagram: the diagram
        nerve: the simplices of the shape that index the product
        complex: the total complex
        offsets: total degree -> simplex -> first row of its block
    """

    diagram: Diagram
    nerve: Nerve
    complex: ChainComplex
    offsets: Mapping[int, Mapping[Simplex, int]] = field(default_factory=dict)

    def value(self, s: Simplex) -> ChainComplex:
        """The complex at the last vertex of a simplex."""
        return self.diagram.vertices[last_vertex(self.diagram.shape, s)]

    def block(self, n: int, s: Simplex) -> slice | None:
        """Rows of the block of simplex s in total degree n, or None when it is empty."""
        start = self.offsets.get(n, {}).get(s)
        if start is None:
            return None
        return slice(start, start + self.value(s).rank(n + dimension(s)))

    def generators(self, n: int) -> list[tuple[Simplex, int]]:
        """The pairs (simplex, basis index) spanning total degree n, in order."""
        return [
            (s, k)
            for s in self.offsets.get(n, {})
            for k in range(self.value(s).rank(n + dimension(s)))
        ]


def total_complex(  # noqa: C901
    d: Diagram,
    normalized: bool = True,
    cap: int | None = None,
    limits: Limits | None = None,
) -> TotalComplex:
    """Totalize the cosimplicial replacement of a diagram.

    Args:
        d: the diagram
        normalized: use nondegenerate simplices only; otherwise the truncation at `cap`
            of the unnormalized replacement, whose homology is exact in degrees
            n >= top + 1 - cap where top is the highest degree of any vertex
        cap: highest simplicial level; defaults to the nerve dimension
        limits: capacity limits
    """
    limits = limits or Limits.from_env()
    shape = d.shape
    n = nerve(shape, cap, normalized, limits)
    offsets: dict[int, dict[Simplex, int]] = {}
    ranks: dict[int, int] = {}
    labels: dict[int, list[str]] = {}
    for level in n.simplices:
        for s in level:
            x = d.vertices[last_vertex(shape, s)]
            for internal in x.degrees:
                t = internal - dimension(s)
                offsets.setdefault(t, {})[s] = ranks.get(t, 0)
                ranks[t] = ranks.get(t, 0) + x.rank(internal)
                name = simplex_label(shape, s)
                labels.setdefault(t, []).extend(f"{name}#{k}" for k in range(x.rank(internal)))
    for t, r in ranks.items():
        limits.check("max_generators", r, f"total complex degree {t}")

    diffs = {}
    for t in ranks:
        if t - 1 not in ranks:
            continue
        m = zeros(ranks[t - 1], ranks[t])
        below = offsets[t - 1]
        for s, col in offsets[t].items():
            level = dimension(s)
            x = d.vertices[last_vertex(shape, s)]
            internal = t + level
            if s in below:
                row = below[s]
                sign = -1 if level % 2 else 1
                m[row : row + x.rank(internal - 1), col : col + x.rank(internal)] += (
                    sign * x.d(internal)
                )
        for tau, row in below.items():
            level = dimension(tau)
            if level == 0:
                continue
            y = d.vertices[last_vertex(shape, tau)]
            internal = t - 1 + level
            for j in range(level + 1):
                s = face(shape, tau, j)
                if normalized and is_degenerate(shape, s):
                    continue
                col = offsets[t].get(s)
                if col is None:
                    continue
                sign = -1 if j % 2 else 1
                if j < level:
                    block = identity(y.rank(internal))
                else:
                    block = d.edges[tau[-1]].component(internal)
                m[row : row + block.shape[0], col : col + block.shape[1]] += sign * block
        diffs[t] = m
    complex_ = ChainComplex(ranks, diffs, {t: tuple(v) for t, v in labels.items()})
    complex_.check()
    logger.debug("Total complex over %r: ranks %s", shape, dict(sorted(ranks.items())))
    return TotalComplex(d, n, complex_, offsets)


def restriction_map(
    functor: FinFunctor,
    d: Diagram,
    source: TotalComplex | None = None,
    target: TotalComplex | None = None,
    limits: Limits | None = None,
) -> tuple[ChainMap, TotalComplex, TotalComplex]:
    """The restriction Tot_J(D) -> Tot_I(F*D).

    A simplex s of the source shape reads the block of F(s), or zero when F(s) contains
    an identity.

    Returns:
        The chain map with its source and target total complexes.
    """
    limits = limits or Limits.from_env()
    source = source or total_complex(d, limits=limits)
    target = target or total_complex(restrict_diagram(functor, d), limits=limits)
    j_cat = functor.target
    components = {}
    for t in target.complex.degrees:
        m = zeros(target.complex.rank(t), source.complex.rank(t))
        for s in target.offsets.get(t, {}):
            image = image_simplex(functor, s)
            if is_degenerate(j_cat, image):
                continue
            rows, cols = target.block(t, s), source.block(t, image)
            if rows is None or cols is None:
                continue
            m[rows, cols] = identity(rows.stop - rows.start)
        components[t] = m
    f = ChainMap(source.complex, target.complex, components)
    f.check()
    return f, source, target


def extend_over_hoc(
    functor: FinFunctor, d: Diagram, data: CofiberData | None = None
) -> tuple[Diagram, CofiberData]:
    """Extend D on J to hoc F: X_j on J, X_F(i) on I, and the zero complex at *.

    A morphism j -> i, that is u: j -> F(i) in J, acts by X(u); the morphisms out of * are
    zero maps.
    """
    data = data or hoc(functor)
    c = data.cofiber
    zero = ChainComplex.zero()
    vertices = []
    for x in range(c.size):
        part, y = data.part(x), data.fiber_object(x)
        if part == "J":
            vertices.append(d.vertices[y])
        elif part == "I":
            vertices.append(d.vertices[functor.object_map[y]])
        else:
            vertices.append(zero)
    edges = []
    for m, record in enumerate(c.morphisms):
        f = data.fiber_morphism(m)
        part = data.part(record.src)
        if part == "J":
            edges.append(d.edges[f])
        elif part == "I":
            edges.append(d.edges[functor.morphism_map[f]])
        elif data.part(record.tgt) == "*":
            edges.append(ChainMap.identity(zero))
        else:
            edges.append(ChainMap.zero(zero, vertices[record.tgt]))
    extended = Diagram(c, tuple(vertices), tuple(edges))
    extended.check()
    logger.debug("Extended diagram over hoc F with %d objects", c.size)
    return extended, data


def _degree_span(*complexes: ChainComplex) -> range:
    degrees = [n for c in complexes for n in c.degrees]
    if not degrees:
        return range(0)
    return range(min(degrees), max(degrees) + 1)


def verify_theorem_a(
    d: Diagram, degrees: Iterable[int] | None = None, limits: Limits | None = None
) -> Report:
    """Check that Tot(D) is at least as connected as the bound from the shape.

    The report carries the degree-by-degree homology table, the bound, and the first
    degree with nonzero homology as tightness data. `degrees` widens the table beyond
    the degrees where Tot(D) is nonzero.
    """
    limits = limits or Limits.from_env()
    d.check()
    conn = effective_conn(d)
    bound = theorem_a_bound(d.shape, conn)
    tot = total_complex(d, limits=limits).complex
    report = Report("connectivity of the homotopy limit")
    span = sorted(set(_degree_span(tot)) | set(degrees or ()))
    table = homology_table(tot, span)
    for n, h in table.items():
        report.row(f"degree {n}: {h}")
    checked = [n for n in span if n <= bound]
    nonzero = [n for n in checked if not table[n].is_zero]
    report.add(
        f"H_k(Tot) = 0 for k <= {_fmt(bound)}",
        not nonzero,
        f"nonzero in degrees {nonzero}" if nonzero else f"{len(checked)} degrees checked",
    )
    first = next((n for n in span if not table[n].is_zero), None)
    if first is None:
        report.note("Tot is acyclic")
    else:
        tight = bound != math.inf and first == bound + 1
        report.note(
            f"first nonzero homology in degree {first}: {table[first]}"
            + (" (bound is tight)" if tight else "")
        )
    report.note(PROXY_NOTE)
    logger.info("Connectivity bound %s: %s", _fmt(bound), "PASS" if report.passed else "FAIL")
    return report


def _null_homotopy(
    data: CofiberData, tot_hoc: TotalComplex, tot_i: TotalComplex
) -> dict[int, np.ndarray]:
    """Matrices of H: Tot_hoc(X) -> Tot_I(F*D), of degree +1.

    H pairs the prism of the transformation F(i) -> i with plus signs and the cone of
    * -> i with a minus sign, so that D H + H D = -(F* o iota*).
    """
    functor = data.functor
    i_cat, c = functor.source, data.cofiber
    kappa, iota = data.kappa.morphism_map, data.iota
    components: dict[int, np.ndarray] = {}
    for n in set(tot_hoc.complex.degrees) | {t - 1 for t in tot_i.complex.degrees}:
        m = zeros(tot_i.complex.rank(n + 1), tot_hoc.complex.rank(n))
        for s in tot_i.offsets.get(n + 1, {}):
            rows = tot_i.block(n + 1, s)
            level = dimension(s)
            prisms: list[tuple[int, Simplex]] = []
            start = iota.object_map[functor.object_map[s[0]]]
            for j in range(level + 1):
                lower = tuple(iota.morphism_map[functor.morphism_map[a]] for a in s[1 : j + 1])
                upper = tuple(kappa[a] for a in s[j + 1 :])
                unit = data.unit(i_cat.tgt(s[j]) if j else s[0])
                prisms.append((-1 if j % 2 else 1, (start,) + lower + (unit,) + upper))
            cone = (data.star, data.basepoint(s[0])) + tuple(kappa[a] for a in s[1:])
            prisms.append((-1, cone))
            for sign, p in prisms:
                if is_degenerate(c, p):
                    continue
                cols = tot_hoc.block(n, p)
                if rows is None or cols is None:
                    continue
                m[rows, cols] += sign * identity(rows.stop - rows.start)
        components[n] = m
    return components


def verify_theorem_b(
    functor: FinFunctor,
    d: Diagram,
    degrees: Iterable[int] = range(-4, 5),
    limits: Limits | None = None,
) -> Report:
    """Check the homotopy cartesian square for the restriction along F.

    Builds the extension over hoc F, the restrictions iota* and F*, checks that
    F* o iota* vanishes in homology through an explicit null-homotopy, and checks that
    the induced map Tot_hoc(X) -> fiber(F*) is a quasi-isomorphism in the given degrees.
    """
    limits = limits or Limits.from_env()
    degrees = list(degrees)
    if functor.target != d.shape:
        raise DiagramError("the functor does not land in the diagram's shape")
    d.check()
    extended, data = extend_over_hoc(functor, d)
    tot_hoc = total_complex(extended, limits=limits)
    tot_j = total_complex(d, limits=limits)
    iota_star, _, _ = restriction_map(data.iota, extended, tot_hoc, tot_j, limits)
    f_star, _, tot_i = restriction_map(functor, d, tot_j, None, limits)
    composite = f_star.after(iota_star)

    report = Report("homotopy cartesian square")
    zero_in = [n for n in degrees if not induced_is_zero(composite, n)]
    report.add(
        "F* o iota* is zero in homology",
        not zero_in,
        f"nonzero in degrees {zero_in}" if zero_in else "",
    )

    h = _null_homotopy(data, tot_hoc, tot_i)
    a, b = tot_hoc.complex, tot_i.complex

    def homotopy(n: int) -> np.ndarray:
        m = h.get(n)
        return m if m is not None else zeros(b.rank(n + 1), a.rank(n))

    failing = [
        n
        for n in a.degrees
        if not np.array_equal(
            b.d(n + 1) @ homotopy(n) + homotopy(n - 1) @ a.d(n), -composite.component(n)
        )
    ]
    report.add(
        "D H + H D = -F* o iota*", not failing, f"fails in degrees {failing}" if failing else ""
    )

    fib, _ = homotopy_fiber(f_star, limits)
    comparison = ChainMap(
        a,
        fib,
        {n: block_matrix([[iota_star.component(n)], [homotopy(n)]]) for n in a.degrees},
    )
    report.add("Tot_hoc(X) -> fiber(F*) is a chain map", comparison.is_chain_map())
    for n in degrees:
        report.row(f"degree {n}: {homology(a, n)} | {homology(fib, n)}")
    report.extend(quasi_iso_check(comparison, degrees), "comparison: ")

    conn = effective_conn(restrict_diagram(functor, d))
    bound = theorem_a_bound(functor.source, conn)
    if bound >= 0:
        report.note(
            f"every X_F(i) is at least deg(i)-connected, so Tot_I(F*D) is "
            f"{_fmt(bound)}-connected"
        )
    report.note(PROXY_NOTE)
    logger.info("Homotopy cartesian square: %s", "PASS" if report.passed else "FAIL")
    return report


def initial_object(c: FinCategory) -> int | None:
    """An object with exactly one morphism to every object, if any."""
    for x in range(c.size):
        if all(len(c.hom(x, y)) == 1 for y in range(c.size)):
            return x
    return None


def cofinality_check(d: Diagram, limits: Limits | None = None) -> Report:
    """Compare Tot(D) with the value at an initial object of the shape.

    Raises:
        DiagramError: when the shape has no initial object.
    """
    limits = limits or Limits.from_env()
    x0 = initial_object(d.shape)
    if x0 is None:
        raise DiagramError("the shape has no initial object")
    point = preorder_category([d.shape.objects[x0]], [])
    pick = FinFunctor(point, d.shape, (x0,), (d.shape.identities[x0],))
    evaluation, tot, _ = restriction_map(pick, d, limits=limits)
    span = _degree_span(tot.complex, d.vertices[x0])
    report = Report(f"homotopy limit at the initial object {d.shape.objects[x0]}")
    report.extend(homology_iso_check(tot.complex, d.vertices[x0], span))
    report.extend(quasi_iso_check(evaluation, span), "evaluation: ")
    return report
