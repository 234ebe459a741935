# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Nerves of finite categories and their chain complexes.

A k-simplex is stored as a flat tuple `(x, m1, ..., mk)`: the start object followed by k
composable morphism indices. Nondegenerate simplices contain no identities. The
normalized chain complex is free on the nondegenerate simplices; faces that compose to
an identity contribute zero.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from graphlib import CycleError, TopologicalSorter

import numpy as np

from chaincx import ChainComplex, ChainMap, zeros
from config import Limits
from fincat import FinCategory, FinFunctor, full_subcategory, over_category

logger = logging.getLogger(__name__)

Simplex = tuple[int, ...]

AUGMENTATION_LABEL = "()"


class InfiniteDimensionError(ValueError):
    """Raised when a nerve has simplices of every dimension."""

    def __init__(self, witness: tuple[str, ...], where: str = "category"):
        super().__init__(f"{where} has an infinite-dimensional nerve: cycle {', '.join(witness)}")
        self.witness = witness


def dimension(s: Simplex) -> int:
    """Simplicial dimension of a simplex."""
    return len(s) - 1


def vertices(c: FinCategory, s: Simplex) -> tuple[int, ...]:
    """The objects x0, ..., xk visited by a simplex."""
    return (s[0],) + tuple(c.tgt(m) for m in s[1:])


def last_vertex(c: FinCategory, s: Simplex) -> int:
    """The final object of a simplex."""
    return c.tgt(s[-1]) if len(s) > 1 else s[0]


def is_degenerate(c: FinCategory, s: Simplex) -> bool:
    """Whether the string contains an identity."""
    return any(c.is_identity(m) for m in s[1:])


def face(c: FinCategory, s: Simplex, k: int) -> Simplex:
    """The k-th face: drop the first or last morphism, or compose an inner pair."""
    n = dimension(s)
    if not 0 <= k <= n or n == 0:
        raise ValueError(f"no face {k} of a {n}-simplex")
    if k == 0:
        return (c.tgt(s[1]),) + s[2:]
    if k == n:
        return s[:-1]
    return s[:k] + (c.compose(s[k + 1], s[k]),) + s[k + 2 :]


def simplex_label(c: FinCategory, s: Simplex) -> str:
    """Object label for vertices, `|`-joined morphism names otherwise."""
    if len(s) == 1:
        return c.objects[s[0]]
    return "|".join(c.morphisms[m].name for m in s[1:])


def image_simplex(functor: FinFunctor, s: Simplex) -> Simplex:
    """Apply a functor to a simplex."""
    return (functor.object_map[s[0]],) + tuple(functor.morphism_map[m] for m in s[1:])


@dataclass(frozen=True, eq=False)
class Nerve:
    """Simplices of a nerve up to a level cap.

    Attributes:
        base: the category
        simplices: per dimension, the simplices in enumeration order
        cap: highest enumerated dimension
        normalized: True when only nondegenerate simplices are stored
    """

    base: FinCategory
    simplices: tuple[tuple[Simplex, ...], ...]
    cap: int
    normalized: bool = True

    @property
    def dimension(self) -> int:
        """Highest dimension with a stored simplex, -1 for the empty nerve."""
        return max((k for k, level in enumerate(self.simplices) if level), default=-1)

    def count(self, k: int) -> int:
        """Number of stored k-simplices."""
        return len(self.simplices[k]) if 0 <= k < len(self.simplices) else 0

    @cached_property
    def index(self) -> dict[Simplex, int]:
        """Simplex -> position within its level."""
        return {s: k for level in self.simplices for k, s in enumerate(level)}

    def labels(self, k: int) -> tuple[str, ...]:
        """Labels of the k-simplices."""
        return tuple(simplex_label(self.base, s) for s in self.simplices[k])


def nerve(
    c: FinCategory, cap: int | None = None, normalized: bool = True, limits: Limits | None = None
) -> Nerve:
    """Enumerate the simplices of the nerve of c through dimension `cap`.

    Args:
        c: the category
        cap: highest dimension; defaults to the nerve dimension
        normalized: skip degenerate simplices
        limits: capacity limits

    Raises:
        InfiniteDimensionError: when no cap is given and the nerve is infinite.
        CapacityError: when more than `max_simplices` simplices would be stored.
    """
    limits = limits or Limits.from_env()
    if cap is None:
        dim = nerve_dimension(c)
        if dim == math.inf:
            raise InfiniteDimensionError(_cycle_names(c, find_cycle(c)))
        cap = int(dim)
    extensions = [
        c.outgoing[x] if normalized else tuple(f for f, m in enumerate(c.morphisms) if m.src == x)
        for x in range(c.size)
    ]
    levels: list[tuple[Simplex, ...]] = [tuple((x,) for x in range(c.size))]
    total = len(levels[0])
    for _ in range(cap):
        level = tuple(s + (f,) for s in levels[-1] for f in extensions[last_vertex(c, s)])
        total += len(level)
        limits.check("max_simplices", total, "nerve simplex count")
        levels.append(level)
    logger.debug(
        "Nerve of %r through dimension %d: %s", c, cap, [len(level) for level in levels]
    )
    return Nerve(c, tuple(levels), cap, normalized)


def find_cycle(c: FinCategory) -> tuple[int, ...] | None:
    """A closed string of non-identity morphisms, or None when there is none."""
    for k in c.non_identities:
        if c.src(k) == c.tgt(k):
            return (k,)
    graph: dict[int, set[int]] = {x: set() for x in range(c.size)}
    for k in c.non_identities:
        graph[c.tgt(k)].add(c.src(k))
    try:
        tuple(TopologicalSorter(graph).static_order())
    except CycleError as e:
        cycle = e.args[1]
        return tuple(c.hom(x, y)[0] for x, y in zip(cycle, cycle[1:]))
    return None


def _cycle_names(c: FinCategory, cycle: tuple[int, ...] | None) -> tuple[str, ...]:
    return tuple(c.morphisms[k].name for k in cycle or ())


def nerve_dimension(c: FinCategory) -> int | float:
    """Length of the longest string of composable non-identity morphisms.

    Returns `math.inf` when the non-identity morphisms contain a cycle; -1 for the empty
    category.
    """
    if find_cycle(c) is not None:
        return math.inf
    graph: dict[int, set[int]] = {x: set() for x in range(c.size)}
    for k in c.non_identities:
        graph[c.tgt(k)].add(c.src(k))
    longest = [0] * c.size
    for y in TopologicalSorter(graph).static_order():
        longest[y] = max((longest[x] + 1 for x in graph[y]), default=0)
    return max(longest, default=-1)


@dataclass(frozen=True)
class DegreeTable:
    """deg(i) = dim N(C/i) for every object i; `math.inf` marks infinite degrees."""

    category: FinCategory
    degrees: tuple[int | float, ...]

    def __getitem__(self, label: str) -> int | float:
        return self.degrees[self.category.object(label)]

    @property
    def finite(self) -> bool:
        """True when every degree is finite."""
        return all(d != math.inf for d in self.degrees)

    def render(self) -> str:
        """One `label: degree` line per object."""
        return "".join(
            f"{label}: {'inf' if d == math.inf else d}\n"
            for label, d in zip(self.category.objects, self.degrees)
        )


def degree_table(c: FinCategory) -> DegreeTable:
    """Compute the degree of every object from its over category."""
    degrees = tuple(nerve_dimension(over_category(c, i)[0]) for i in range(c.size))
    logger.debug("Degree table of %r: %s", c, degrees)
    return DegreeTable(c, degrees)


def require_finite_degrees(c: FinCategory, table: DegreeTable):
    """Raise `InfiniteDimensionError`, with a witness cycle, if some degree is infinite."""
    for i, d in enumerate(table.degrees):
        if d == math.inf:
            over, _ = over_category(c, i)
            witness = _cycle_names(over, find_cycle(over))
            logger.error("Over category at %s has an infinite nerve", c.objects[i])
            raise InfiniteDimensionError(witness, f"over category at {c.objects[i]}")


@dataclass(frozen=True)
class ReedyResult:
    """Outcome of the directed Reedy check; `witness` names a violating morphism."""

    holds: bool
    witness: str | None = None


def is_directed_reedy(c: FinCategory, table: DegreeTable | None = None) -> ReedyResult:
    """Whether every non-identity morphism strictly raises the degree.

    Raises:
        InfiniteDimensionError: when some object has infinite degree.
    """
    table = table or degree_table(c)
    require_finite_degrees(c, table)
    for k in c.non_identities:
        m = c.morphisms[k]
        if not table.degrees[m.src] < table.degrees[m.tgt]:
            logger.info("Degree does not increase along %s", m.name)
            return ReedyResult(False, m.name)
    return ReedyResult(True)


def degree_stratum(c: FinCategory, d: int, table: DegreeTable | None = None) -> tuple[int, ...]:
    """Objects of degree exactly d."""
    table = table or degree_table(c)
    return tuple(i for i, deg in enumerate(table.degrees) if deg == d)


def degree_filtration(
    c: FinCategory, d: int, table: DegreeTable | None = None
) -> tuple[FinCategory, FinFunctor]:
    """The full subcategory on the objects of degree at most d, with its inclusion."""
    table = table or degree_table(c)
    return full_subcategory(c, (i for i, deg in enumerate(table.degrees) if deg <= d))


def _boundary(n: Nerve, k: int) -> np.ndarray:
    c = n.base
    rows, cols = n.simplices[k - 1], n.simplices[k]
    out = zeros(len(rows), len(cols))
    index = n.index
    for col, s in enumerate(cols):
        for j in range(k + 1):
            f = face(c, s, j)
            if n.normalized and is_degenerate(c, f):
                continue
            out[index[f], col] += -1 if j % 2 else 1
    return out


def chains(n: Nerve, reduced: bool = False, limits: Limits | None = None) -> ChainComplex:
    """The chain complex free on the stored simplices of a nerve, with simplex labels."""
    limits = limits or Limits.from_env()
    ranks = {k: n.count(k) for k in range(n.cap + 1)}
    for k, r in ranks.items():
        limits.check("max_generators", r, f"nerve chains in degree {k}")
    diffs = {k: _boundary(n, k) for k in range(1, n.cap + 1)}
    labels = {k: n.labels(k) for k in range(n.cap + 1)}
    if reduced:
        # the empty nerve keeps its augmentation: its reduced homology is Z in degree -1
        ranks[-1] = 1
        diffs[0] = np.ones((1, n.count(0)), dtype=object)
        labels[-1] = (AUGMENTATION_LABEL,)
    complex_ = ChainComplex(ranks, diffs, {k: v for k, v in labels.items() if v})
    complex_.check()
    return complex_


def nerve_chain_complex(
    c: FinCategory,
    cap: int | None = None,
    reduced: bool = False,
    normalized: bool = True,
    limits: Limits | None = None,
) -> ChainComplex:
    """The chain complex of the nerve of c.

    Args:
        c: the category
        cap: highest dimension; defaults to the nerve dimension
        reduced: add the augmentation in degree -1
        normalized: use nondegenerate simplices only
        limits: capacity limits
    """
    limits = limits or Limits.from_env()
    return chains(nerve(c, cap, normalized, limits), reduced, limits)


def induced_nerve_chain_map(
    functor: FinFunctor,
    cap: int | None = None,
    reduced: bool = False,
    limits: Limits | None = None,
) -> ChainMap:
    """The normalized chain map N(F): simplices go to their image, or to zero if degenerate.

    Both nerves are enumerated through the same cap, which defaults to the larger of the
    two nerve dimensions.
    """
    limits = limits or Limits.from_env()
    src, tgt = functor.source, functor.target
    if cap is None:
        dims = [nerve_dimension(src), nerve_dimension(tgt)]
        for c, dim in zip((src, tgt), dims):
            if dim == math.inf:
                raise InfiniteDimensionError(_cycle_names(c, find_cycle(c)))
        cap = int(max(dims + [0]))
    source_nerve = nerve(src, cap, limits=limits)
    target_nerve = nerve(tgt, cap, limits=limits)
    a = chains(source_nerve, reduced, limits)
    b = chains(target_nerve, reduced, limits)
    components = {}
    for k in range(cap + 1):
        m = zeros(b.rank(k), a.rank(k))
        for col, s in enumerate(source_nerve.simplices[k]):
            image = image_simplex(functor, s)
            if not is_degenerate(tgt, image):
                m[target_nerve.index[image], col] = 1
        components[k] = m
    if reduced:
        components[-1] = np.ones((1, 1), dtype=object)
    f = ChainMap(a, b, components)
    f.check()
    return f
