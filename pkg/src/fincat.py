# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Finite categories and functors stored as explicit tables.

A category keeps every morphism, identities included, and a total composition table
keyed by `(g, f)` for `g o f`. Algorithms work with integer indices; labels are only
used for reports and documents.
"""

import logging
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

from config import Limits
from reports import Report

logger = logging.getLogger(__name__)

IDENTITY_PREFIX = "id_"


class CategoryError(Exception):
    """Base class for errors raised by this module."""


class StructuralError(CategoryError):
    """Malformed tables: indices out of range, unknown or duplicate labels."""


@dataclass(frozen=True)
class Morphism:
    """A morphism record: `src` and `tgt` are object indices."""

    name: str
    src: int
    tgt: int
    is_identity: bool = False


@dataclass(frozen=True, eq=False)
class FinCategory:
    """A finite category.

    Attributes:
        objects: object labels, indexed by position
        morphisms: all morphisms, identities included
        composition: `(g, f) -> g o f` for composable pairs
        identities: object index -> index of its identity morphism
    """

    objects: tuple[str, ...]
    morphisms: tuple[Morphism, ...]
    composition: Mapping[tuple[int, int], int]
    identities: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "morphisms", tuple(self.morphisms))
        object.__setattr__(self, "identities", tuple(self.identities))
        object.__setattr__(self, "composition", dict(self.composition))
        self._check_structure()

    def _check_structure(self):  # noqa: C901
        n, m = len(self.objects), len(self.morphisms)
        if len(set(self.objects)) != n:
            raise StructuralError("duplicate object labels")
        if len({f.name for f in self.morphisms}) != m:
            raise StructuralError("duplicate morphism names")
        if len(self.identities) != n:
            raise StructuralError(f"{len(self.identities)} identities for {n} objects")
        for f in self.morphisms:
            if not (0 <= f.src < n and 0 <= f.tgt < n):
                raise StructuralError(f"morphism {f.name} has endpoints out of range")
        for k in self.identities:
            if not 0 <= k < m:
                raise StructuralError(f"identity index {k} out of range")
        for (g, f), h in self.composition.items():
            if not all(0 <= x < m for x in (g, f, h)):
                raise StructuralError(f"composition entry {(g, f, h)} out of range")

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.identities == other.identities
            and dict(self.composition) == dict(other.composition)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FinCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    @property
    def size(self) -> int:
        """Number of objects."""
        return len(self.objects)

    @cached_property
    def object_index(self) -> dict[str, int]:
        """Label -> object index."""
        return {label: k for k, label in enumerate(self.objects)}

    @cached_property
    def morphism_index(self) -> dict[str, int]:
        """Name -> morphism index."""
        return {f.name: k for k, f in enumerate(self.morphisms)}

    @cached_property
    def homs(self) -> dict[tuple[int, int], tuple[int, ...]]:
        """(x, y) -> morphism indices x -> y; only nonempty hom-sets are present."""
        table: dict[tuple[int, int], list[int]] = {}
        for k, f in enumerate(self.morphisms):
            table.setdefault((f.src, f.tgt), []).append(k)
        return {key: tuple(v) for key, v in table.items()}

    def hom(self, x: int, y: int) -> tuple[int, ...]:
        """Morphisms from object x to object y."""
        return self.homs.get((x, y), ())

    @cached_property
    def non_identities(self) -> tuple[int, ...]:
        """Indices of the non-identity morphisms."""
        ids = set(self.identities)
        return tuple(k for k in range(len(self.morphisms)) if k not in ids)

    @cached_property
    def outgoing(self) -> tuple[tuple[int, ...], ...]:
        """Per object, the non-identity morphisms leaving it."""
        out: list[list[int]] = [[] for _ in self.objects]
        for k in self.non_identities:
            out[self.morphisms[k].src].append(k)
        return tuple(tuple(v) for v in out)

    def is_identity(self, f: int) -> bool:
        """Whether morphism f is an identity."""
        return self.identities[self.morphisms[f].src] == f

    def src(self, f: int) -> int:
        """Source object of f."""
        return self.morphisms[f].src

    def tgt(self, f: int) -> int:
        """Target object of f."""
        return self.morphisms[f].tgt

    def compose(self, g: int, f: int) -> int:
        """The composite g o f."""
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise StructuralError(
                f"no composite for {self.morphisms[g].name} o {self.morphisms[f].name}"
            ) from None

    @cached_property
    def is_thin(self) -> bool:
        """At most one morphism between any two objects."""
        return all(len(v) <= 1 for v in self.homs.values())

    def object(self, label: str) -> int:
        """Object index of a label."""
        try:
            return self.object_index[label]
        except KeyError:
            raise StructuralError(f"unknown object {label!r}") from None

    def morphism(self, name: str) -> int:
        """Morphism index of a name."""
        try:
            return self.morphism_index[name]
        except KeyError:
            raise StructuralError(f"unknown morphism {name!r}") from None


@dataclass(frozen=True, eq=False)
class FinFunctor:
    """A functor between finite categories, given by index tables."""

    source: FinCategory
    target: FinCategory
    object_map: tuple[int, ...]
    morphism_map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "object_map", tuple(self.object_map))
        object.__setattr__(self, "morphism_map", tuple(self.morphism_map))
        if len(self.object_map) != self.source.size:
            raise StructuralError("object map does not cover the source objects")
        if len(self.morphism_map) != len(self.source.morphisms):
            raise StructuralError("morphism map does not cover the source morphisms")
        if any(not 0 <= x < self.target.size for x in self.object_map):
            raise StructuralError("object map index out of range")
        if any(not 0 <= f < len(self.target.morphisms) for f in self.morphism_map):
            raise StructuralError("morphism map index out of range")

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.object_map == other.object_map
            and self.morphism_map == other.morphism_map
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FinFunctor({self.source!r} -> {self.target!r})"


def _category(
    objects: Sequence[str], arrows: Sequence[tuple[str, int, int]], compose
) -> FinCategory:
    """Assemble a category with identities at indices 0..n-1.

    `compose(g, f)` receives indices into the full morphism list and returns the index
    of the composite, or None when the table has no entry.
    """
    morphisms = [Morphism(IDENTITY_PREFIX + label, k, k, True) for k, label in enumerate(objects)]
    morphisms.extend(Morphism(name, s, t) for name, s, t in arrows)
    n = len(objects)
    starting: dict[int, list[int]] = {}
    for k, m in enumerate(morphisms):
        starting.setdefault(m.src, []).append(k)
    table: dict[tuple[int, int], int] = {}
    for f, g in ((f, g) for f, m in enumerate(morphisms) for g in starting.get(m.tgt, ())):
        if g < n:
            table[(g, f)] = f
        elif f < n:
            table[(g, f)] = g
        else:
            h = compose(g, f)
            if h is not None:
                table[(g, f)] = h
    return FinCategory(tuple(objects), tuple(morphisms), table, tuple(range(n)))


def build_category(
    objects: Sequence[str],
    morphisms: Iterable[tuple[str, str, str]],
    compose: Iterable[tuple[str, str, str]] = (),
) -> FinCategory:
    """Build a category from labelled non-identity morphisms and composites.

    Identities are implicit and named `id_<object>`; compose entries `(g, f, gf)` may
    refer to them by that name.

    Args:
        objects: object labels
        morphisms: `(name, source label, target label)` for each non-identity morphism
        compose: `(g, f, g o f)` names for composable non-identity pairs

    Returns:
        The category; missing composites are left out of the table and reported by
        `validate_category`.
    """
    index = {label: k for k, label in enumerate(objects)}
    if len(index) != len(objects):
        raise StructuralError("duplicate object labels")
    arrows = []
    for name, s, t in morphisms:
        if s not in index or t not in index:
            raise StructuralError(f"morphism {name!r} refers to an unknown object")
        arrows.append((name, index[s], index[t]))
    names = [IDENTITY_PREFIX + label for label in objects] + [a[0] for a in arrows]
    by_name = {name: k for k, name in enumerate(names)}
    if len(by_name) != len(names):
        raise StructuralError("duplicate morphism names")
    entries = {}
    for g, f, gf in compose:
        try:
            entries[(by_name[g], by_name[f])] = by_name[gf]
        except KeyError as e:
            raise StructuralError(f"compose entry refers to unknown morphism {e}") from None
    return _category(objects, arrows, lambda g, f: entries.get((g, f)))


def preorder_category(  # noqa: C901
    objects: Sequence[str], relation_pairs: Iterable[tuple[str, str]]
) -> FinCategory:
    """The thin category of the reflexive-transitive closure of a relation.

    Morphisms are named `x->y`. Cycles are allowed and produce a preorder, whose
    composites around a cycle are identities.
    """
    index = {label: k for k, label in enumerate(objects)}
    if len(index) != len(objects):
        raise StructuralError("duplicate object labels")
    n = len(objects)
    # row x is a bitset of the objects above x
    above = [1 << x for x in range(n)]
    for x, y in relation_pairs:
        if x not in index or y not in index:
            raise StructuralError(f"relation ({x!r}, {y!r}) refers to an unknown object")
        above[index[x]] |= 1 << index[y]
    for k in range(n):
        for x in range(n):
            if above[x] >> k & 1:
                above[x] |= above[k]
    arrows = [
        (f"{objects[x]}->{objects[y]}", x, y)
        for x in range(n)
        for y in range(n)
        if x != y and above[x] >> y & 1
    ]
    between = {(s, t): n + k for k, (_, s, t) in enumerate(arrows)}

    def compose(g: int, f: int) -> int:
        s = arrows[f - n][1]
        t = arrows[g - n][2]
        return s if s == t else between[(s, t)]

    category = _category(objects, arrows, compose)
    logger.debug("Preorder category with %d objects, %d morphisms", n, len(category.morphisms))
    return category


def _subset_label(subset: Sequence[str], n: int) -> str:
    if not subset:
        return "∅"
    return ("" if n < 10 else ",").join(subset)


def powerset_poset(n: int, punctured: bool = False, limits: Limits | None = None) -> FinCategory:
    """Subsets of {+, 1, ..., n} ordered by inclusion.

    Args:
        n: number of non-basepoint elements
        punctured: drop the empty set
        limits: capacity limits; `max_powerset_n` bounds n

    Returns:
        P(n+) or, when punctured, P0(n+). Objects are sorted by size, then
        lexicographically by element order.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    (limits or Limits.from_env()).check("max_powerset_n", n, "power set size")
    elements = ["+"] + [str(k) for k in range(1, n + 1)]
    subsets = [
        c for size in range(0 if not punctured else 1, n + 2) for c in combinations(elements, size)
    ]
    labels = [_subset_label(s, n) for s in subsets]
    pairs = [
        (labels[a], labels[b])
        for a, b in product(range(len(subsets)), repeat=2)
        if a != b and set(subsets[a]) <= set(subsets[b])
    ]
    return preorder_category(labels, pairs)


def discrete_category(k: int) -> FinCategory:
    """k objects, identities only."""
    return preorder_category([str(x) for x in range(k)], [])


_SHAPE_RE = re.compile(r"^(?P<name>[a-z0-9]+?)(\((?P<arg>\d+)\))?$")


def named_shape(spec: str, limits: Limits | None = None) -> FinCategory:  # noqa: C901
    """Resolve a built-in shape name.

    Known shapes: `point`, `empty`, `arrow`, `pullback`, `pushout`, `discrete(k)`,
    `p(n)` and `p0(n)`.
    """
    match = _SHAPE_RE.match(spec.strip().lower())
    if not match:
        raise StructuralError(f"unknown shape {spec!r}")
    name, arg = match["name"], match["arg"]
    if name == "point" and arg is None:
        return preorder_category(["*"], [])
    if name == "empty" and arg is None:
        return preorder_category([], [])
    if name == "arrow" and arg is None:
        return preorder_category(["0", "1"], [("0", "1")])
    if name == "pullback" and arg is None:
        return preorder_category(["a", "b", "c"], [("a", "b"), ("c", "b")])
    if name == "pushout" and arg is None:
        return preorder_category(["a", "b", "c"], [("a", "b"), ("a", "c")])
    if name == "discrete" and arg is not None:
        return discrete_category(int(arg))
    if name == "p" and arg is not None:
        return powerset_poset(int(arg), punctured=False, limits=limits)
    if name == "p0" and arg is not None:
        return powerset_poset(int(arg), punctured=True, limits=limits)
    raise StructuralError(f"unknown shape {spec!r}")


def validate_category(c: FinCategory) -> Report:  # noqa: C901
    """Check the category axioms exhaustively and itemize every violation.

    Raises:
        StructuralError: when the tables are malformed.
    """
    c._check_structure()
    report = Report("category axioms")
    names = [f.name for f in c.morphisms]
    violations = {"identity": [], "typing": [], "totality": [], "associativity": []}

    for x, k in enumerate(c.identities):
        f = c.morphisms[k]
        if f.src != x or f.tgt != x:
            violations["identity"].append(f"{f.name} is not an endomorphism of {c.objects[x]}")
    flagged = {k for k, f in enumerate(c.morphisms) if f.is_identity}
    for k in flagged ^ set(c.identities):
        violations["identity"].append(f"{names[k]} identity flag disagrees with the table")

    for (g, f), h in c.composition.items():
        fg, ff, fh = c.morphisms[g], c.morphisms[f], c.morphisms[h]
        if ff.tgt != fg.src:
            violations["typing"].append(f"{names[g]} o {names[f]} is not composable")
        elif fh.src != ff.src or fh.tgt != fg.tgt:
            violations["typing"].append(
                f"{names[g]} o {names[f]} = {names[h]} has wrong endpoints"
            )

    starting: dict[int, list[int]] = {}
    for k, m in enumerate(c.morphisms):
        starting.setdefault(m.src, []).append(k)
    for f, m in enumerate(c.morphisms):
        for g in starting.get(m.tgt, ()):
            if (g, f) not in c.composition:
                violations["totality"].append(f"{names[g]} o {names[f]} is missing")

    for f, m in enumerate(c.morphisms):
        left = c.composition.get((c.identities[m.tgt], f))
        right = c.composition.get((f, c.identities[m.src]))
        if (left is not None and left != f) or (right is not None and right != f):
            violations["identity"].append(f"identity is not neutral for {names[f]}")

    for (g, f), gf in c.composition.items():
        for h in c.outgoing[c.morphisms[g].tgt] + (c.identities[c.morphisms[g].tgt],):
            hg = c.composition.get((h, g))
            lhs = c.composition.get((h, gf))
            rhs = c.composition.get((hg, f)) if hg is not None else None
            if lhs is not None and rhs is not None and lhs != rhs:
                violations["associativity"].append(f"({names[h]} o {names[g]}) o {names[f]}")

    for axiom, found in violations.items():
        if not found:
            report.add(axiom, True)
        for detail in found:
            report.add(axiom, False, detail)
    logger.debug("Category validation: %d violations", len(report.failures))
    return report


def validate_functor(functor: FinFunctor) -> Report:
    """Check that a functor preserves endpoints, identities and composition."""
    src, tgt = functor.source, functor.target
    omap, fmap = functor.object_map, functor.morphism_map
    report = Report("functor axioms")
    ok = True
    for k, f in enumerate(src.morphisms):
        image = tgt.morphisms[fmap[k]]
        if image.src != omap[f.src] or image.tgt != omap[f.tgt]:
            ok = report.add("endpoints", False, f"{f.name} -> {image.name}") and ok
    for x, k in enumerate(src.identities):
        if fmap[k] != tgt.identities[omap[x]]:
            ok = report.add("identities", False, f"{src.morphisms[k].name}") and ok
    for (g, f), gf in sorted(src.composition.items()):
        image = tgt.composition.get((fmap[g], fmap[f]))
        if image != fmap[gf]:
            detail = f"{src.morphisms[g].name} o {src.morphisms[f].name}"
            ok = report.add("composition", False, detail) and ok
    if ok:
        report.add("functor", True)
    return report


def identity_functor(c: FinCategory) -> FinFunctor:
    """The identity functor of c."""
    return FinFunctor(c, c, tuple(range(c.size)), tuple(range(len(c.morphisms))))


def compose_functors(g: FinFunctor, f: FinFunctor) -> FinFunctor:
    """The composite g o f."""
    if g.source is not f.target and g.source != f.target:
        raise StructuralError("functors are not composable")
    return FinFunctor(
        f.source,
        g.target,
        tuple(g.object_map[x] for x in f.object_map),
        tuple(g.morphism_map[m] for m in f.morphism_map),
    )


def constant_functor(c: FinCategory, d: FinCategory, x: int) -> FinFunctor:
    """The functor c -> d constant at object x."""
    return FinFunctor(c, d, (x,) * c.size, (d.identities[x],) * len(c.morphisms))


def thin_functor(
    source: FinCategory, target: FinCategory, object_map: Mapping[str, str]
) -> FinFunctor:
    """A functor into a thin category, determined by its object labels.

    Raises:
        StructuralError: when the target is not thin or a morphism has no image.
    """
    if not target.is_thin:
        raise StructuralError("morphisms can only be inferred for a thin target")
    omap = tuple(target.object(object_map[label]) for label in source.objects)
    fmap = []
    for f in source.morphisms:
        images = target.hom(omap[f.src], omap[f.tgt])
        if not images:
            raise StructuralError(f"no image for {f.name}: the object map is not monotone")
        fmap.append(images[0])
    return FinFunctor(source, target, omap, tuple(fmap))


def full_subcategory(c: FinCategory, objects: Iterable[int]) -> tuple[FinCategory, FinFunctor]:
    """The full subcategory on the given objects, with its inclusion functor."""
    keep = sorted(set(objects))
    position = {x: k for k, x in enumerate(keep)}
    morphisms = [f for f, m in enumerate(c.morphisms) if m.src in position and m.tgt in position]
    new_index = {f: k for k, f in enumerate(morphisms)}
    table = {
        (new_index[g], new_index[f]): new_index[h]
        for (g, f), h in c.composition.items()
        if g in new_index and f in new_index
    }
    sub = FinCategory(
        tuple(c.objects[x] for x in keep),
        tuple(
            Morphism(m.name, position[m.src], position[m.tgt], m.is_identity)
            for m in (c.morphisms[f] for f in morphisms)
        ),
        table,
        tuple(new_index[c.identities[x]] for x in keep),
    )
    return sub, FinFunctor(sub, c, tuple(keep), tuple(morphisms))


def opposite(c: FinCategory) -> FinCategory:
    """Reverse every morphism; opposite(opposite(c)) == c."""
    return FinCategory(
        c.objects,
        tuple(Morphism(f.name, f.tgt, f.src, f.is_identity) for f in c.morphisms),
        {(f, g): h for (g, f), h in c.composition.items()},
        c.identities,
    )


def over_category(c: FinCategory, i: int) -> tuple[FinCategory, FinFunctor]:
    """The over category c/i and its forgetful functor to c.

    Objects are the morphisms j -> i. A morphism (u: j -> i) -> (u': j' -> i) is a
    g: j -> j' with u' o g = u; it is named `g/u'`.
    """
    objs = [f for f, m in enumerate(c.morphisms) if m.tgt == i]
    position = {f: k for k, f in enumerate(objs)}
    records: list[Morphism] = []
    under: list[int] = []
    key: dict[tuple[int, int], int] = {}
    identities = [0] * len(objs)
    for u2 in objs:
        for g, gm in enumerate(c.morphisms):
            if gm.tgt != c.src(u2):
                continue
            u = c.compose(u2, g)
            label = c.morphisms[u2].name
            name = label if c.is_identity(g) else f"{gm.name}/{label}"
            if c.is_identity(g):
                identities[position[u2]] = len(records)
            key[(g, u2)] = len(records)
            records.append(Morphism(name, position[u], position[u2], c.is_identity(g)))
            under.append(g)

    objects = tuple(c.morphisms[f].name for f in objs)
    table = {}
    for (g2, u3), second in key.items():
        for (g1, u2), first in key.items():
            if records[first].tgt == records[second].src:
                table[(second, first)] = key[(c.compose(g2, g1), u3)]
    over = FinCategory(objects, tuple(records), table, tuple(identities))
    forget = FinFunctor(over, c, tuple(c.src(f) for f in objs), tuple(under))
    return over, forget


def comma_category(functor: FinFunctor, j: int) -> FinCategory:
    """The comma category F/j: pairs (i, u: F(i) -> j), maps i -> i' compatible over j."""
    src, tgt = functor.source, functor.target
    objs = [(x, u) for x in range(src.size) for u in tgt.hom(functor.object_map[x], j)]
    position = {o: k for k, o in enumerate(objs)}
    records: list[Morphism] = []
    key: dict[tuple[int, tuple[int, int]], int] = {}
    identities = [0] * len(objs)
    for x2, u2 in objs:
        for a, am in enumerate(src.morphisms):
            if am.tgt != x2:
                continue
            u = tgt.compose(u2, functor.morphism_map[a])
            target_label = f"{src.objects[x2]}:{tgt.morphisms[u2].name}"
            if src.is_identity(a):
                identities[position[(x2, u2)]] = len(records)
                name = IDENTITY_PREFIX + target_label
            else:
                name = f"{am.name}/{target_label}"
            key[(a, (x2, u2))] = len(records)
            records.append(
                Morphism(name, position[(am.src, u)], position[(x2, u2)], src.is_identity(a))
            )

    table = {}
    for (a2, o3), second in key.items():
        for (a1, _), first in key.items():
            if records[first].tgt == records[second].src:
                table[(second, first)] = key[(src.compose(a2, a1), o3)]
    objects = tuple(f"{src.objects[x]}:{tgt.morphisms[u].name}" for x, u in objs)
    return FinCategory(objects, tuple(records), table, tuple(identities))


def induced_over_functor(functor: FinFunctor, i: int) -> FinFunctor:
    """The functor I/i -> J/F(i) sending (u: i' -> i) to F(u)."""
    src_over, src_forget = over_category(functor.source, i)
    tgt_over, tgt_forget = over_category(functor.target, functor.object_map[i])
    fmap = functor.morphism_map
    lookup = {(tgt_forget.morphism_map[k], m.tgt): k for k, m in enumerate(tgt_over.morphisms)}
    objects = tuple(
        tgt_over.object(functor.target.morphisms[fmap[functor.source.morphism(label)]].name)
        for label in src_over.objects
    )
    morphisms = tuple(
        lookup[(fmap[src_forget.morphism_map[k]], objects[m.tgt])]
        for k, m in enumerate(src_over.morphisms)
    )
    return FinFunctor(src_over, tgt_over, objects, morphisms)


def _profile(c: FinCategory, x: int) -> tuple[int, int, int]:
    out = sum(len(c.hom(x, y)) for y in range(c.size))
    inc = sum(len(c.hom(y, x)) for y in range(c.size))
    return out, inc, len(c.hom(x, x))


def find_isomorphism(  # noqa: C901
    c: FinCategory, d: FinCategory, limits: Limits | None = None
) -> FinFunctor | None:
    """Search exhaustively for an isomorphism of categories c -> d.

    Raises:
        CapacityError: when either category has more than `max_iso_objects` objects.
    """
    limits = limits or Limits.from_env()
    limits.check("max_iso_objects", max(c.size, d.size), "isomorphism search")
    if c.size != d.size or len(c.morphisms) != len(d.morphisms):
        return None
    profiles = sorted(_profile(c, x) for x in range(c.size))
    if profiles != sorted(_profile(d, x) for x in range(d.size)):
        return None

    n = c.size
    omap: list[int] = []
    used = [False] * n

    def objects_fit(x: int, y: int) -> bool:
        if _profile(c, x) != _profile(d, y):
            return False
        for x2, y2 in enumerate(omap):
            if len(c.hom(x, x2)) != len(d.hom(y, y2)) or len(c.hom(x2, x)) != len(d.hom(y2, y)):
                return False
        return len(c.hom(x, x)) == len(d.hom(y, y))

    def assign_objects() -> FinFunctor | None:
        if len(omap) == n:
            return assign_morphisms(tuple(omap))
        x = len(omap)
        for y in range(n):
            if not used[y] and objects_fit(x, y):
                used[y] = True
                omap.append(y)
                found = assign_objects()
                if found is not None:
                    return found
                omap.pop()
                used[y] = False
        return None

    def assign_morphisms(objects: tuple[int, ...]) -> FinFunctor | None:
        fmap: dict[int, int] = {c.identities[x]: d.identities[objects[x]] for x in range(n)}
        pending = [f for f in c.non_identities]
        taken = set(fmap.values())

        def consistent(f: int) -> bool:
            for (g, h), gh in c.composition.items():
                if f not in (g, h, gh):
                    continue
                if g in fmap and h in fmap and gh in fmap:
                    if d.composition.get((fmap[g], fmap[h])) != fmap[gh]:
                        return False
            return True

        def step(k: int) -> bool:
            if k == len(pending):
                return True
            f = pending[k]
            m = c.morphisms[f]
            for cand in d.hom(objects[m.src], objects[m.tgt]):
                if cand in taken or d.is_identity(cand):
                    continue
                fmap[f] = cand
                taken.add(cand)
                if consistent(f) and step(k + 1):
                    return True
                taken.discard(cand)
                del fmap[f]
            return False

        if not step(0):
            return None
        return FinFunctor(c, d, objects, tuple(fmap[f] for f in range(len(c.morphisms))))

    return assign_objects()


def p0_inclusion(limits: Limits | None = None) -> FinFunctor:
    """The inclusion P0(1+) -> P0(2+) that fixes + and adds 2 to the other subsets."""
    source = powerset_poset(1, punctured=True, limits=limits)
    target = powerset_poset(2, punctured=True, limits=limits)
    return thin_functor(source, target, {"+": "+", "1": "12", "+1": "+12"})


def hasse_pairs(c: FinCategory) -> list[tuple[str, str]]:
    """Covering relations x < y of a thin category, as label pairs in object order."""
    if not c.is_thin:
        raise StructuralError("covering relations need a thin category")
    above = [
        {m.tgt for m in (c.morphisms[k] for k in c.outgoing[x]) if m.tgt != x}
        for x in range(c.size)
    ]
    return [
        (c.objects[x], c.objects[y])
        for x in range(c.size)
        for y in sorted(above[x])
        if not any(y in above[z] for z in above[x] if z != y and x not in above[z])
    ]
