# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""The Grothendieck construction and the cofiber category hoc F.

For a diagram of categories Phi over a shape K, the Grothendieck construction has
objects (k, x) with x in Phi(k), and

    hom((k, x), (l, y)) = disjoint union over g: l -> k of hom_Phi(k)(x, Phi(g)(y)).

Arrows of the shape are reversed, so the projection (k, x) -> k lands in the opposite of
K. The cofiber of a functor F: I -> J glues I, J and a point over the span
`* <- I -> J`; it models the mapping cone of the nerve of F.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from chaincx import cone, homology_iso_check
from config import Limits
from fincat import (
    IDENTITY_PREFIX,
    FinCategory,
    FinFunctor,
    Morphism,
    compose_functors,
    constant_functor,
    find_isomorphism,
    identity_functor,
    induced_over_functor,
    opposite,
    over_category,
    preorder_category,
    validate_functor,
)
from nerve import induced_nerve_chain_map, nerve_chain_complex
from reports import Report

logger = logging.getLogger(__name__)

STAR = "*"
SPAN_APEX, SPAN_POINT, SPAN_TARGET = "I", STAR, "J"


class DiagramOfCategoriesError(ValueError):
    """Raised when a diagram of categories is not functorial."""


@dataclass(frozen=True, eq=False)
class CatDiagram:
    """A functor Phi from a finite shape to finite categories.

    Attributes:
        shape: the shape K
        fibers: per object k of K, the category Phi(k)
        action: per morphism g of K, the functor Phi(g)
    """

    shape: FinCategory
    fibers: tuple[FinCategory, ...]
    action: tuple[FinFunctor, ...]

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(self.fibers))
        object.__setattr__(self, "action", tuple(self.action))
        if len(self.fibers) != self.shape.size:
            raise DiagramOfCategoriesError("one fiber is needed per shape object")
        if len(self.action) != len(self.shape.morphisms):
            raise DiagramOfCategoriesError("one functor is needed per shape morphism")


def _same_functor(f: FinFunctor, g: FinFunctor) -> bool:
    return f.object_map == g.object_map and f.morphism_map == g.morphism_map


def validate_cat_diagram(d: CatDiagram) -> Report:  # noqa: C901
    """Check endpoints, identities and composites of a diagram of categories."""
    k = d.shape
    report = Report("diagram of categories")
    for g, m in enumerate(k.morphisms):
        phi = d.action[g]
        if phi.source != d.fibers[m.src] or phi.target != d.fibers[m.tgt]:
            report.add("endpoints", False, m.name)
        elif not validate_functor(phi).passed:
            report.add("functor", False, m.name)
    if report.failures:
        return report
    for x, g in enumerate(k.identities):
        if not _same_functor(d.action[g], identity_functor(d.fibers[x])):
            report.add("identities", False, k.objects[x])
    for (g, f), gf in sorted(k.composition.items()):
        if not _same_functor(d.action[gf], compose_functors(d.action[g], d.action[f])):
            report.add("composition", False, f"{k.morphisms[g].name} o {k.morphisms[f].name}")
    if not report.failures:
        report.add("functoriality", True)
    return report


def _check(d: CatDiagram):
    report = validate_cat_diagram(d)
    if not report.passed:
        detail = "; ".join(c.render() for c in report.failures)
        logger.error("Diagram of categories is not functorial: %s", detail)
        raise DiagramOfCategoriesError(detail)


@dataclass(frozen=True, eq=False)
class Construction:
    """A Grothendieck construction together with the components of its cells.

    Attributes:
        category: the glued category
        projection: (k, x) -> k, a functor to the opposite of the shape
        objects: per object, the pair (k, x)
        components: per morphism, the pair (g, f) of a shape and a fiber morphism
    """

    category: FinCategory
    projection: FinFunctor
    objects: tuple[tuple[int, int], ...]
    components: tuple[tuple[int, int], ...]

    def find(self, source: int, target: int, gamma: int, f: int) -> int:
        """Index of the morphism with the given endpoints and components."""
        for k in self.category.hom(source, target):
            if self.components[k] == (gamma, f):
                return k
        raise KeyError((source, target, gamma, f))


def construct(d: CatDiagram) -> Construction:  # noqa: C901
    """Build the Grothendieck construction of a diagram of categories.

    Objects are labelled `k:x`. A non-identity morphism is named `a->b` after its
    endpoint labels, with its shape and fiber components appended in brackets when the
    hom-set has more than one element.

    Raises:
        DiagramOfCategoriesError: when the diagram is not functorial.
    """
    _check(d)
    shape = d.shape
    objects = tuple((k, x) for k in range(shape.size) for x in range(d.fibers[k].size))
    position = {o: n for n, o in enumerate(objects)}
    labels = [f"{shape.objects[k]}:{d.fibers[k].objects[x]}" for k, x in objects]

    # (source object, target object, shape morphism, fiber morphism)
    records: list[tuple[int, int, int, int]] = []
    for k, x in objects:
        fiber = d.fibers[k]
        for gamma, gm in enumerate(shape.morphisms):
            if gm.tgt != k:
                continue
            phi = d.action[gamma]
            for y in range(d.fibers[gm.src].size):
                for f in fiber.hom(x, phi.object_map[y]):
                    records.append((position[(k, x)], position[(gm.src, y)], gamma, f))

    # identities first, at the index of their object
    def is_identity(record: tuple[int, int, int, int]) -> bool:
        s, t, gamma, f = record
        return s == t and shape.is_identity(gamma) and d.fibers[objects[s][0]].is_identity(f)

    units = {r[0]: r for r in records if is_identity(r)}
    records = [units[s] for s in range(len(objects))] + [r for r in records if not is_identity(r)]

    hom_sizes: dict[tuple[int, int], int] = {}
    for s, t, _, _ in records:
        hom_sizes[(s, t)] = hom_sizes.get((s, t), 0) + 1
    key = {record: n for n, record in enumerate(records)}
    morphisms = []
    for n, (s, t, gamma, f) in enumerate(records):
        fiber = d.fibers[objects[s][0]]
        is_id = n < len(objects)
        if is_id:
            name = IDENTITY_PREFIX + labels[s]
        elif hom_sizes[(s, t)] == 1:
            name = f"{labels[s]}->{labels[t]}"
        else:
            gname, fname = shape.morphisms[gamma].name, fiber.morphisms[f].name
            name = f"{labels[s]}->{labels[t]}[{gname},{fname}]"
        morphisms.append(Morphism(name, s, t, is_id))

    starting: dict[int, list[int]] = {}
    for n, (s, _, _, _) in enumerate(records):
        starting.setdefault(s, []).append(n)
    table = {}
    for first, (s, t, g1, f) in enumerate(records):
        fiber = d.fibers[objects[s][0]]
        phi1 = d.action[g1]
        for second in starting.get(t, ()):
            _, u, g2, g = records[second]
            composite = (s, u, shape.compose(g1, g2), fiber.compose(phi1.morphism_map[g], f))
            table[(second, first)] = key[composite]

    category = FinCategory(tuple(labels), tuple(morphisms), table, tuple(range(len(objects))))
    projection = FinFunctor(
        category, opposite(shape), tuple(k for k, _ in objects), tuple(r[2] for r in records)
    )
    logger.debug("Grothendieck construction: %r", category)
    return Construction(category, projection, objects, tuple((r[2], r[3]) for r in records))


def grothendieck(d: CatDiagram) -> tuple[FinCategory, FinFunctor]:
    """The Grothendieck construction and its projection to the opposite of the shape."""
    built = construct(d)
    return built.category, built.projection


def span_shape() -> FinCategory:
    """The span `* <- I -> J` that carries the cofiber construction."""
    return preorder_category(
        [SPAN_APEX, SPAN_POINT, SPAN_TARGET], [(SPAN_APEX, SPAN_POINT), (SPAN_APEX, SPAN_TARGET)]
    )


@dataclass(frozen=True, eq=False)
class CofiberData:
    """The cofiber category with its structure maps.

    Attributes:
        cofiber: the category hoc F
        iota: the inclusion J -> hoc F
        kappa: the inclusion I -> hoc F
        star: object index of the added point
        functor: F itself
        construction: the underlying Grothendieck construction over the span
    """

    cofiber: FinCategory
    iota: FinFunctor
    kappa: FinFunctor
    star: int
    functor: FinFunctor
    construction: Construction

    def part(self, x: int) -> str:
        """`I`, `*` or `J`: the piece of hoc F an object comes from."""
        shape = self.construction.projection.target
        return shape.objects[self.construction.objects[x][0]]

    def fiber_object(self, x: int) -> int:
        """The object of I, the point or J that x stands for."""
        return self.construction.objects[x][1]

    def fiber_morphism(self, m: int) -> int:
        """The fiber component of a morphism; J -> I morphisms give u: j -> F(i) in J."""
        return self.construction.components[m][1]

    def unit(self, i: int) -> int:
        """The morphism F(i) -> i given by the identity of F(i)."""
        j = self.functor.object_map[i]
        identity = self.functor.target.identities[j]
        return next(
            m
            for m in self.cofiber.hom(self.iota.object_map[j], self.kappa.object_map[i])
            if self.fiber_morphism(m) == identity
        )

    def basepoint(self, i: int) -> int:
        """The unique morphism * -> i."""
        return self.cofiber.hom(self.star, self.kappa.object_map[i])[0]


def hoc(functor: FinFunctor) -> CofiberData:
    """The cofiber category of F: I -> J, with I -> J -> hoc F."""
    i_cat, j_cat = functor.source, functor.target
    point = preorder_category([STAR], [])
    shape = span_shape()
    fibers = (i_cat, point, j_cat)
    apex, base, tip = (shape.object(x) for x in (SPAN_APEX, SPAN_POINT, SPAN_TARGET))
    action = []
    for g, m in enumerate(shape.morphisms):
        if shape.is_identity(g):
            action.append(identity_functor(fibers[m.src]))
        elif m.tgt == base:
            action.append(constant_functor(i_cat, point, 0))
        else:
            action.append(functor)
    built = construct(CatDiagram(shape, fibers, tuple(action)))
    position = {o: n for n, o in enumerate(built.objects)}

    def inclusion(source: FinCategory, k: int) -> FinFunctor:
        objects = tuple(position[(k, x)] for x in range(source.size))
        identity = shape.identities[k]
        morphisms = tuple(
            built.find(objects[m.src], objects[m.tgt], identity, f)
            for f, m in enumerate(source.morphisms)
        )
        return FinFunctor(source, built.category, objects, morphisms)

    data = CofiberData(
        built.category,
        inclusion(j_cat, tip),
        inclusion(i_cat, apex),
        position[(base, 0)],
        functor,
        built,
    )
    logger.info(
        "hoc F has %d objects and %d morphisms", built.category.size, len(built.category.morphisms)
    )
    return data


def cofiber_structure_report(data: CofiberData) -> Report:
    """Check the structural properties of hoc F by table comparison."""
    c, functor = data.cofiber, data.functor
    i_cat, j_cat = functor.source, functor.target
    iota, kappa = data.iota.object_map, data.kappa.object_map
    report = Report("cofiber structure")
    report.add("functor iota", validate_functor(data.iota).passed)
    report.add("functor kappa", validate_functor(data.kappa).passed)

    full = all(
        len(c.hom(iota[a], iota[b])) == len(j_cat.hom(a, b))
        for a in range(j_cat.size)
        for b in range(j_cat.size)
    )
    faithful = len(set(data.iota.morphism_map)) == len(j_cat.morphisms)
    report.add("iota full and faithful", full and faithful)
    report.add("kappa faithful", len(set(data.kappa.morphism_map)) == len(i_cat.morphisms))

    mismatched = [
        f"{j_cat.objects[j]},{i_cat.objects[i]}"
        for j in range(j_cat.size)
        for i in range(i_cat.size)
        if len(c.hom(iota[j], kappa[i])) != len(j_cat.hom(j, functor.object_map[i]))
    ]
    report.add("hom(j, i) = hom_J(j, F(i))", not mismatched, " ".join(mismatched))
    report.add(
        "one morphism * -> i",
        all(len(c.hom(data.star, kappa[i])) == 1 for i in range(i_cat.size)),
    )
    report.add("no morphism j -> *", not any(c.hom(iota[j], data.star) for j in range(j_cat.size)))
    return report


def thomason_cofiber_check(
    functor: FinFunctor, degrees: int = 3, limits: Limits | None = None
) -> Report:
    """Compare reduced homology of N(hoc F) with the cone of the reduced N(F).

    Args:
        functor: F: I -> J between categories with finite-dimensional nerves
        degrees: highest degree compared; comparison starts at -1
        limits: capacity limits
    """
    limits = limits or Limits.from_env()
    data = hoc(functor)
    left = nerve_chain_complex(data.cofiber, reduced=True, limits=limits)
    right = cone(induced_nerve_chain_map(functor, reduced=True, limits=limits), limits)
    report = Report("Thomason cofiber comparison")
    report.extend(homology_iso_check(left, right, range(-1, degrees + 1)), "N(hoc F) vs cone: ")
    logger.info("Thomason cofiber comparison: %s", "PASS" if report.passed else "FAIL")
    return report


def _is_point(c: FinCategory) -> bool:
    return find_isomorphism(c, preorder_category([STAR], [])) is not None


def _bijective(f: FinFunctor) -> bool:
    return (
        sorted(f.object_map) == list(range(f.target.size))
        and sorted(f.morphism_map) == list(range(len(f.target.morphisms)))
    )


def hoc_overcategory_checks(
    functor: FinFunctor,
    degrees: int = 3,
    objects: Sequence[int] | None = None,
    limits: Limits | None = None,
) -> Report:
    """Check the over categories of hoc F.

    (hoc F)/j is compared with J/j through the functor induced by iota, (hoc F)/* must be
    a point, and for each object i of I the reduced homology of N((hoc F)/i) is compared
    with the cone of N(I/i) -> N(J/F(i)).

    Args:
        functor: F: I -> J
        degrees: highest homology degree compared
        objects: restrict the I-side checks to these objects of I
        limits: capacity limits
    """
    limits = limits or Limits.from_env()
    data = hoc(functor)
    report = Report("over categories of hoc F")
    j_cat = functor.target
    for j in range(j_cat.size):
        induced = induced_over_functor(data.iota, j)
        ok = _bijective(induced) and validate_functor(induced).passed
        report.add(f"(hoc F)/{j_cat.objects[j]} = J/{j_cat.objects[j]}", ok)

    star_over, _ = over_category(data.cofiber, data.star)
    report.add("(hoc F)/* is a point", _is_point(star_over))

    i_cat = functor.source
    for i in objects if objects is not None else range(i_cat.size):
        over, _ = over_category(data.cofiber, data.kappa.object_map[i])
        left = nerve_chain_complex(over, reduced=True, limits=limits)
        comparison = induced_over_functor(functor, i)
        right = cone(induced_nerve_chain_map(comparison, reduced=True, limits=limits), limits)
        check = homology_iso_check(left, right, range(-1, degrees + 1))
        report.extend(check, f"(hoc F)/{i_cat.objects[i]}: ")
    logger.info("Over-category checks: %s", "PASS" if report.passed else "FAIL")
    return report
