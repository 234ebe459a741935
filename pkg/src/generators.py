# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Seeded random instances for the randomized verification suites.

Every factory takes a `random.Random`, so a suite is reproduced exactly from its seed.
Complexes are sums of elementary pieces (Z in one degree, or Z --m--> Z) written in a
random unimodular basis. Diagrams over a poset are built from families that are
functorial by construction:

  - X_i contains the sum of A_j over j <= i; along i <= i' this part is included,
  - X_i contains the sum of B_j over j >= i; along i <= i' this part is projected,
  - X_i contains a twist complex T; along i <= i' it is multiplied by 2^(h(i') - h(i)),
    where h is a monotone height.
"""

import logging
import random
from dataclasses import dataclass

import numpy as np

from chaincx import ChainComplex, ChainMap, block_matrix, direct_sum, identity, zeros
from fincat import FinCategory, FinFunctor, named_shape, preorder_category, thin_functor
from holim import Diagram, make_diagram
from nerve import degree_table

logger = logging.getLogger(__name__)

THEOREM_A_SHAPES = ("pullback", "p0(2)", "arrow", "random")


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> tuple[np.ndarray, np.ndarray]:
    """A random matrix with determinant +-1 and its inverse."""
    p, q = identity(n), identity(n)
    for _ in range(steps if n > 1 else 0):
        a, b = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        # row_a += c row_b; the inverse subtracts c column_a from column_b
        p[a, :] += c * p[b, :]
        q[:, b] -= c * q[:, a]
    for a in range(n):
        if rng.random() < 0.3:
            p[a, :] = -p[a, :]
            q[:, a] = -q[:, a]
    return p, q


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 9) -> np.ndarray:
    """Entries drawn uniformly from [-bound, bound]."""
    m = zeros(rows, cols)
    for i in range(rows):
        for j in range(cols):
            m[i, j] = rng.randint(-bound, bound)
    return m


def random_complex(
    rng: random.Random, low: int = 0, high: int = 6, max_rank: int = 2
) -> ChainComplex:
    """A random bounded complex with ranks at most `max_rank` per piece and degree."""
    ranks: dict[int, int] = {}
    entries: list[tuple[int, int, int, int]] = []  # (degree, row, col, value)
    for n in range(low, high + 1):
        for _ in range(rng.randint(0, max_rank)):
            if n > low and rng.random() < 0.5:
                lower, upper = ranks.get(n - 1, 0), ranks.get(n, 0)
                entries.append((n, lower, upper, rng.choice((1, 1, 2, 3))))
                ranks[n - 1] = lower + 1
            ranks[n] = ranks.get(n, 0) + 1
    diffs = {n: zeros(ranks.get(n - 1, 0), ranks.get(n, 0)) for n in ranks}
    for n, row, col, value in entries:
        diffs[n][row, col] = value
    bases = {n: random_unimodular(rng, r) for n, r in ranks.items()}
    conjugated = {
        n: bases[n - 1][0] @ m @ bases[n][1] for n, m in diffs.items() if n - 1 in bases
    }
    return ChainComplex(ranks, conjugated)


def random_poset(rng: random.Random, size: int, density: float = 0.5) -> FinCategory:
    """A random partial order on `0..size-1` refining the index order."""
    labels = [str(k) for k in range(size)]
    pairs = [
        (labels[a], labels[b])
        for a in range(size)
        for b in range(a + 1, size)
        if rng.random() < density
    ]
    return preorder_category(labels, pairs)


def random_monotone_functor(
    rng: random.Random, source_size: int, target: FinCategory, density: float = 0.5
) -> FinFunctor:
    """A random functor into a thin category from a random poset on `0..source_size-1`.

    The source order only relates objects whose images are related, so the object map is
    monotone and the functor exists.
    """
    images = [rng.randrange(target.size) for _ in range(source_size)]
    labels = [str(k) for k in range(source_size)]
    pairs = [
        (labels[a], labels[b])
        for a in range(source_size)
        for b in range(a + 1, source_size)
        if target.hom(images[a], images[b]) and rng.random() < density
    ]
    source = preorder_category(labels, pairs)
    return thin_functor(
        source, target, {labels[k]: target.objects[images[k]] for k in range(source_size)}
    )


def _selection(sizes: list[int], keep_from: list[bool], keep_to: list[bool]) -> np.ndarray:
    """0/1 matrix from the kept blocks of one sum to the kept blocks of another.

    A block kept on both sides maps by the identity; a block kept only on one side is
    dropped (projection) or zero-filled (inclusion).
    """
    rows = [k for k in range(len(sizes)) if keep_to[k]]
    cols = [k for k in range(len(sizes)) if keep_from[k]]
    out = zeros(sum(sizes[k] for k in rows), sum(sizes[k] for k in cols))
    top = 0
    for k in rows:
        left = 0
        for other in cols:
            if k == other:
                out[top : top + sizes[k], left : left + sizes[k]] = identity(sizes[k])
            left += sizes[other]
        top += sizes[k]
    return out


@dataclass(frozen=True, eq=False)
class _Family:
    """Summands of a generated diagram, one `up` and one `down` per shape object."""

    ups: tuple[ChainComplex, ...]
    downs: tuple[ChainComplex, ...]
    twist: ChainComplex
    heights: tuple[int, ...]


def _summand(rng: random.Random, high: int, chance: float = 0.4) -> ChainComplex:
    if rng.random() >= chance:
        return ChainComplex.zero()
    low = rng.randint(0, high)
    return random_complex(rng, low, min(low + 2, high), max_rank=1)


def random_diagram(rng: random.Random, shape: FinCategory, high: int = 6) -> Diagram:
    """A random functorial diagram over a thin acyclic shape, in degrees `0..high`."""
    if not shape.is_thin:
        raise ValueError("random diagrams need a thin shape")
    size = shape.size
    family = _Family(
        tuple(_summand(rng, high) for _ in range(size)),
        tuple(_summand(rng, high) for _ in range(size)),
        _summand(rng, high),
        tuple(int(h) for h in degree_table(shape).degrees),
    )
    below = [[bool(shape.hom(j, i)) for j in range(size)] for i in range(size)]
    above = [[bool(shape.hom(i, j)) for j in range(size)] for i in range(size)]
    vertices = [
        direct_sum(
            *(a for a, keep in zip(family.ups, below[i]) if keep),
            *(b for b, keep in zip(family.downs, above[i]) if keep),
            family.twist,
        )
        for i in range(size)
    ]

    maps = {}
    for f in shape.non_identities:
        m = shape.morphisms[f]
        factor = 2 ** (family.heights[m.tgt] - family.heights[m.src])
        components = {}
        for n in set(vertices[m.src].ranks) | set(vertices[m.tgt].ranks):
            up = _selection([a.rank(n) for a in family.ups], below[m.src], below[m.tgt])
            down = _selection([b.rank(n) for b in family.downs], above[m.src], above[m.tgt])
            twist = factor * identity(family.twist.rank(n))
            blocks = [up, down, twist]
            grid = [[zeros(r.shape[0], c.shape[1]) for c in blocks] for r in blocks]
            for k, b in enumerate(blocks):
                grid[k][k] = b
            components[n] = block_matrix(grid)
        maps[f] = ChainMap(vertices[m.src], vertices[m.tgt], components)
    diagram = make_diagram(shape, vertices, maps)
    logger.debug("Random diagram over %r: ranks %s", shape, [v.ranks for v in vertices])
    return diagram


def random_shape(rng: random.Random, kind: str | None = None, max_objects: int = 5) -> FinCategory:
    """One of the shapes used by the connectivity suite."""
    kind = kind or rng.choice(THEOREM_A_SHAPES)
    if kind == "random":
        return random_poset(rng, rng.randint(1, max_objects))
    return named_shape(kind)


def theorem_a_instance(rng: random.Random) -> Diagram:
    """A random diagram over one of the connectivity suite's shapes."""
    return random_diagram(rng, random_shape(rng))


def theorem_b_instance(
    rng: random.Random, max_objects: int = 5
) -> tuple[FinFunctor, Diagram]:
    """A random monotone functor between small posets and a random diagram on its target."""
    target = random_poset(rng, rng.randint(1, max_objects))
    functor = random_monotone_functor(rng, rng.randint(0, max_objects), target)
    return functor, random_diagram(rng, target, high=4)


def functor_instance(rng: random.Random, max_objects: int = 6) -> FinFunctor:
    """A random monotone functor for the cofiber suites."""
    target = random_poset(rng, rng.randint(1, max_objects))
    return random_monotone_functor(rng, rng.randint(0, max_objects), target)
