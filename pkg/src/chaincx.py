# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Exact homological algebra over the integers.

Matrices are numpy arrays with `dtype=object` holding Python ints, so arithmetic never
overflows. A chain complex stores one boundary matrix per degree, `d(n): C_n -> C_{n-1}`,
with shape `(rank(n - 1), rank(n))`. Homology is computed from Smith normal forms.
"""

import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from config import Limits
from reports import Report

logger = logging.getLogger(__name__)

INFINITY = math.inf

_to_int = np.frompyfunc(int, 1, 1)


class ChainComplexError(ValueError):
    """Raised for malformed complexes and maps."""


def as_matrix(data, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Convert nested sequences or arrays to an exact integer matrix.

    Args:
        data: anything `numpy.asarray` accepts
        shape: the expected shape; required to give an empty matrix its dimensions

    Returns:
        A read-write 2-d object array of Python ints.
    """
    arr = np.asarray(data, dtype=object)
    if arr.size == 0 and shape is not None:
        return np.zeros(shape, dtype=object)
    if arr.ndim != 2:
        raise ChainComplexError(f"expected a 2-d matrix, got shape {arr.shape}")
    out = np.asarray(_to_int(arr), dtype=object).reshape(arr.shape)
    if shape is not None and out.shape != tuple(shape):
        raise ChainComplexError(f"expected shape {tuple(shape)}, got {out.shape}")
    return out


def zeros(rows: int, cols: int) -> np.ndarray:
    """Exact zero matrix."""
    return np.zeros((rows, cols), dtype=object)


def identity(n: int) -> np.ndarray:
    """Exact identity matrix."""
    m = zeros(n, n)
    for k in range(n):
        m[k, k] = 1
    return m


def _frozen(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    m.setflags(write=False)
    return m


def _nonzero(m: np.ndarray) -> bool:
    return m.size > 0 and bool((m != 0).any())


@dataclass(frozen=True, eq=False)
class SmithForm:
    """`u @ a @ v == d` with `u`, `v` unimodular and `d` in Smith normal form."""

    u: np.ndarray | None
    d: np.ndarray
    v: np.ndarray | None

    @property
    def invariants(self) -> tuple[int, ...]:
        """The nonzero diagonal entries d1 | d2 | ..."""
        diag = [self.d[k, k] for k in range(min(self.d.shape))]
        return tuple(int(x) for x in diag if x != 0)

    @property
    def rank(self) -> int:
        """Rank of the original matrix."""
        return len(self.invariants)


def smith_normal_form(matrix, track: bool = True) -> SmithForm:  # noqa: C901
    """Diagonalize an integer matrix by unimodular row and column operations.

    The pivot is always the entry of smallest absolute value in the remaining block.
    Once its row and column are cleared, any entry of the block it does not divide is
    folded into the pivot row, which forces a smaller pivot on the next pass. This keeps
    the divisibility chain of the diagonal.

    Args:
        matrix: an integer matrix
        track: when False the transforms are not accumulated (`u` and `v` are None)

    Returns:
        The Smith form with its transforms.
    """
    a = as_matrix(matrix).copy()
    m, n = a.shape
    u = identity(m) if track else None
    v = identity(n) if track else None

    t = 0
    while t < min(m, n):
        while True:
            block = a[t:, t:]
            mask = block != 0
            if not mask.any():
                return SmithForm(u, a, v)
            positions = np.argwhere(mask)
            values = [abs(block[i, j]) for i, j in positions]
            i, j = positions[min(range(len(values)), key=values.__getitem__)]
            i, j = int(i) + t, int(j) + t
            if i != t:
                a[[t, i]] = a[[i, t]]
                if track:
                    u[[t, i]] = u[[i, t]]
            if j != t:
                a[:, [t, j]] = a[:, [j, t]]
                if track:
                    v[:, [t, j]] = v[:, [j, t]]

            pivot = a[t, t]
            q = a[t + 1 :, t] // pivot
            if _nonzero(q):
                a[t + 1 :, :] -= np.multiply.outer(q, a[t, :])
                if track:
                    u[t + 1 :, :] -= np.multiply.outer(q, u[t, :])
            q = a[t, t + 1 :] // pivot
            if _nonzero(q):
                a[:, t + 1 :] -= np.multiply.outer(a[:, t], q)
                if track:
                    v[:, t + 1 :] -= np.multiply.outer(v[:, t], q)
            if _nonzero(a[t + 1 :, t]) or _nonzero(a[t, t + 1 :]):
                continue

            rest = a[t + 1 :, t + 1 :]
            bad = np.argwhere(rest % pivot != 0) if rest.size else []
            if len(bad):
                row = int(bad[0][0]) + t + 1
                a[t, :] += a[row, :]
                if track:
                    u[t, :] += u[row, :]
                continue
            break

        if a[t, t] < 0:
            a[t, :] = -a[t, :]
            if track:
                u[t, :] = -u[t, :]
        t += 1
    return SmithForm(u, a, v)


def kernel_basis(matrix) -> np.ndarray:
    """Columns forming a Z-basis of the kernel of an integer matrix."""
    a = as_matrix(matrix)
    snf = smith_normal_form(a)
    return snf.v[:, snf.rank :].copy()


def image_contains(matrix, vectors) -> bool:
    """Whether every column of `vectors` lies in the Z-span of the columns of `matrix`."""
    a = as_matrix(matrix)
    y = as_matrix(vectors) if np.size(vectors) else zeros(a.shape[0], 0)
    if y.shape[1] == 0:
        return True
    if a.shape[1] == 0:
        return not _nonzero(y)
    snf = smith_normal_form(a)
    w = snf.u @ y
    for k, dk in enumerate(snf.invariants):
        if _nonzero(w[k, :] % dk):
            return False
    return not _nonzero(w[snf.rank :, :])


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated abelian group Z^betti + sum of Z/t for t in torsion."""

    betti: int = 0
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        """True for the trivial group."""
        return self.betti == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """A bounded complex of finitely generated free abelian groups.

    Attributes:
        ranks: degree -> rank; missing degrees have rank zero
        differentials: degree n -> matrix of d(n): C_n -> C_{n-1}; missing means zero
        labels: optional degree -> generator names, used for export
    """

    ranks: Mapping[int, int]
    differentials: Mapping[int, np.ndarray] = field(default_factory=dict)
    labels: Mapping[int, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        ranks = {int(n): int(r) for n, r in self.ranks.items() if r}
        if any(r < 0 for r in ranks.values()):
            raise ChainComplexError("negative rank")
        diffs = {}
        for n, m in self.differentials.items():
            shape = (ranks.get(n - 1, 0), ranks.get(n, 0))
            m = as_matrix(m, shape)
            if m.shape != shape:
                raise ChainComplexError(f"d({n}) has shape {m.shape}, expected {shape}")
            if _nonzero(m):
                diffs[int(n)] = _frozen(m)
        for n, names in self.labels.items():
            if len(names) != ranks.get(n, 0):
                raise ChainComplexError(f"degree {n}: {len(names)} labels for rank {ranks.get(n)}")
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "differentials", diffs)
        object.__setattr__(self, "labels", {n: tuple(v) for n, v in self.labels.items()})
        object.__setattr__(self, "_smith", {})

    @classmethod
    def zero(cls) -> "ChainComplex":
        """The zero complex."""
        return cls({})

    @classmethod
    def concentrated(cls, degree: int, rank: int = 1) -> "ChainComplex":
        """Z^rank in a single degree."""
        return cls({degree: rank})

    def rank(self, n: int) -> int:
        """Rank of C_n."""
        return self.ranks.get(n, 0)

    def d(self, n: int) -> np.ndarray:
        """The boundary matrix C_n -> C_{n-1}."""
        m = self.differentials.get(n)
        return m if m is not None else zeros(self.rank(n - 1), self.rank(n))

    @property
    def degrees(self) -> list[int]:
        """Degrees with nonzero rank, ascending."""
        return sorted(self.ranks)

    @property
    def bounds(self) -> tuple[int, int] | None:
        """Lowest and highest nonzero degree, or None for the zero complex."""
        return (min(self.ranks), max(self.ranks)) if self.ranks else None

    @property
    def euler_characteristic(self) -> int:
        """Alternating sum of ranks."""
        return sum((-1) ** (n % 2) * r for n, r in self.ranks.items())

    def check(self):
        """Raise `ChainComplexError` unless d(n-1) d(n) = 0 in every degree."""
        for n in self.differentials:
            if n - 1 in self.differentials and _nonzero(self.d(n - 1) @ self.d(n)):
                logger.error("d(%d) d(%d) is nonzero", n - 1, n)
                raise ChainComplexError(f"d({n - 1}) d({n}) != 0")

    def smith(self, n: int) -> SmithForm:
        """Memoized Smith form (without transforms) of d(n)."""
        cache = self._smith  # type: ignore[attr-defined]
        if n not in cache:
            cache[n] = smith_normal_form(self.d(n), track=False)
        return cache[n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        if self.ranks != other.ranks or set(self.differentials) != set(other.differentials):
            return False
        theirs = other.differentials
        return all(np.array_equal(m, theirs[n]) for n, m in self.differentials.items())

    __hash__ = None  # type: ignore[assignment]


def homology(c: ChainComplex, n: int) -> HomologyGroup:
    """H_n = ker d(n) / im d(n+1)."""
    if not c.rank(n):
        return HomologyGroup()
    outgoing = c.smith(n).rank
    incoming = c.smith(n + 1)
    torsion = tuple(t for t in incoming.invariants if t > 1)
    return HomologyGroup(c.rank(n) - outgoing - incoming.rank, torsion)


def homology_table(c: ChainComplex, degrees: Iterable[int]) -> dict[int, HomologyGroup]:
    """Homology in each of the given degrees."""
    return {n: homology(c, n) for n in degrees}


def connectivity(c: ChainComplex) -> float | int:
    """Largest n with H_k = 0 for all k <= n; infinite for acyclic complexes."""
    for n in c.degrees:
        if not homology(c, n).is_zero:
            return n - 1
    return INFINITY


def shift(c: ChainComplex, k: int) -> ChainComplex:
    """The complex with C'_n = C_{n-k} and unchanged differentials."""
    return ChainComplex(
        {n + k: r for n, r in c.ranks.items()},
        {n + k: m for n, m in c.differentials.items()},
        {n + k: v for n, v in c.labels.items()},
    )


def block_matrix(rows: list[list[np.ndarray]]) -> np.ndarray:
    """Assemble a matrix from a grid of blocks; row heights come from the first column."""
    heights = [r[0].shape[0] for r in rows]
    widths = [m.shape[1] for m in rows[0]]
    out = zeros(sum(heights), sum(widths))
    top = 0
    for h, r in zip(heights, rows):
        left = 0
        for w, m in zip(widths, r):
            out[top : top + h, left : left + w] = m
            left += w
        top += h
    return out


def direct_sum(*complexes: ChainComplex) -> ChainComplex:
    """Block-diagonal direct sum."""
    degrees = sorted({n for c in complexes for n in c.ranks})
    ranks = {n: sum(c.rank(n) for c in complexes) for n in degrees}
    diffs = {}
    for n in degrees:
        rows = []
        for a, ca in enumerate(complexes):
            rows.append(
                [
                    ca.d(n) if a == b else zeros(ca.rank(n - 1), cb.rank(n))
                    for b, cb in enumerate(complexes)
                ]
            )
        diffs[n] = block_matrix(rows) if rows else zeros(0, 0)
    return ChainComplex(ranks, diffs)


@dataclass(frozen=True, eq=False)
class ChainMap:
    """A degree-preserving map of chain complexes; component(n) has shape (tgt_n, src_n)."""

    source: ChainComplex
    target: ChainComplex
    components: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        comps = {}
        for n, m in self.components.items():
            shape = (self.target.rank(n), self.source.rank(n))
            m = as_matrix(m, shape)
            if m.shape != shape:
                raise ChainComplexError(f"component {n} has shape {m.shape}, expected {shape}")
            if _nonzero(m):
                comps[int(n)] = _frozen(m)
        object.__setattr__(self, "components", comps)

    @classmethod
    def identity(cls, c: ChainComplex) -> "ChainMap":
        """Identity map of a complex."""
        return cls(c, c, {n: identity(r) for n, r in c.ranks.items()})

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex) -> "ChainMap":
        """The zero map."""
        return cls(source, target)

    def component(self, n: int) -> np.ndarray:
        """Matrix in degree n."""
        m = self.components.get(n)
        return m if m is not None else zeros(self.target.rank(n), self.source.rank(n))

    @property
    def is_zero(self) -> bool:
        """True when every component vanishes."""
        return not self.components

    def is_chain_map(self) -> bool:
        """Whether d f = f d in every degree."""
        degrees = set(self.source.ranks) | set(self.target.ranks)
        for n in degrees:
            lhs = self.target.d(n) @ self.component(n)
            rhs = self.component(n - 1) @ self.source.d(n)
            if not np.array_equal(lhs, rhs):
                logger.debug("Chain map equation fails in degree %d", n)
                return False
        return True

    def check(self):
        """Raise `ChainComplexError` unless this is a chain map."""
        if not self.is_chain_map():
            raise ChainComplexError("map does not commute with the differentials")

    def after(self, other: "ChainMap") -> "ChainMap":
        """The composite self o other."""
        degrees = set(other.source.ranks)
        return ChainMap(
            other.source,
            self.target,
            {n: self.component(n) @ other.component(n) for n in degrees},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        if set(self.components) != set(other.components):
            return False
        return all(np.array_equal(m, other.components[n]) for n, m in self.components.items())

    __hash__ = None  # type: ignore[assignment]


def compose_all(maps: Iterable[ChainMap]) -> ChainMap:
    """Compose a sequence of maps, applied left to right."""
    return reduce(lambda f, g: g.after(f), maps)


def cone(f: ChainMap, limits: Limits | None = None) -> ChainComplex:
    """Mapping cone: cone_n = A_{n-1} + B_n, d(a, b) = (-da, db + f a)."""
    a, b = f.source, f.target
    limits = limits or Limits.from_env()
    degrees = sorted({n + 1 for n in a.ranks} | set(b.ranks))
    ranks = {n: a.rank(n - 1) + b.rank(n) for n in degrees}
    for n, r in ranks.items():
        limits.check("max_generators", r, f"cone degree {n}")
    diffs = {
        n: block_matrix(
            [
                [-a.d(n - 1), zeros(a.rank(n - 2), b.rank(n))],
                [f.component(n - 1), b.d(n)],
            ]
        )
        for n in degrees
    }
    c = ChainComplex(ranks, diffs)
    c.check()
    return c


def homotopy_fiber(f: ChainMap, limits: Limits | None = None) -> tuple[ChainComplex, ChainMap]:
    """Homotopy fiber: fib_n = A_n + B_{n+1}, d(a, b) = (da, -db - f a).

    Returns:
        The fiber and its projection onto the source of `f`.
    """
    a, b = f.source, f.target
    limits = limits or Limits.from_env()
    degrees = sorted(set(a.ranks) | {n - 1 for n in b.ranks})
    ranks = {n: a.rank(n) + b.rank(n + 1) for n in degrees}
    for n, r in ranks.items():
        limits.check("max_generators", r, f"fiber degree {n}")
    diffs = {
        n: block_matrix(
            [
                [a.d(n), zeros(a.rank(n - 1), b.rank(n + 1))],
                [-f.component(n), -b.d(n + 1)],
            ]
        )
        for n in degrees
    }
    fib = ChainComplex(ranks, diffs)
    fib.check()
    projection = ChainMap(
        fib,
        a,
        {
            n: block_matrix([[identity(a.rank(n)), zeros(a.rank(n), b.rank(n + 1))]])
            for n in degrees
        },
    )
    return fib, projection


def _cycles(c: ChainComplex, n: int) -> np.ndarray:
    return kernel_basis(c.d(n)) if c.rank(n) else zeros(0, 0)


def induced_is_injective(f: ChainMap, n: int) -> bool:
    """Whether H_n(f) is injective."""
    a, b = f.source, f.target
    za = _cycles(a, n)
    if za.shape[1] == 0:
        return True
    image = f.component(n) @ za
    stacked = block_matrix([[image, -b.d(n + 1)]])
    relations = kernel_basis(stacked)[: za.shape[1], :]
    return image_contains(a.d(n + 1), za @ relations)


def induced_is_surjective(f: ChainMap, n: int) -> bool:
    """Whether H_n(f) is surjective."""
    a, b = f.source, f.target
    zb = _cycles(b, n)
    if zb.shape[1] == 0:
        return True
    za = _cycles(a, n)
    image = f.component(n) @ za if za.shape[1] else zeros(b.rank(n), 0)
    return image_contains(block_matrix([[image, b.d(n + 1)]]), zb)


def induced_is_zero(f: ChainMap, n: int) -> bool:
    """Whether H_n(f) is the zero map."""
    za = _cycles(f.source, n)
    if za.shape[1] == 0 or not f.target.rank(n):
        return True
    return image_contains(f.target.d(n + 1), f.component(n) @ za)


def quasi_iso_check(f: ChainMap, degrees: Iterable[int]) -> Report:
    """Decide per degree whether f induces an isomorphism on homology."""
    report = Report("quasi-isomorphism check")
    for n in degrees:
        injective = induced_is_injective(f, n)
        surjective = induced_is_surjective(f, n)
        report.add(
            f"H_{n}(f) iso",
            injective and surjective,
            f"injective={injective} surjective={surjective}",
        )
    return report


def homology_iso_check(c: ChainComplex, d: ChainComplex, degrees: Iterable[int]) -> Report:
    """Compare isomorphism types of homology (Betti numbers and torsion) per degree."""
    report = Report("homology isomorphism-type check")
    for n in degrees:
        hc, hd = homology(c, n), homology(d, n)
        report.row(f"degree {n}: {hc} | {hd}")
        report.add(f"H_{n}", hc == hd, f"{hc} vs {hd}")
    return report
