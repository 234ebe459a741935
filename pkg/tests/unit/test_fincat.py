# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Unit tests for the fincat module."""

import pytest

from config import CapacityError, Limits
from fincat import (
    FinCategory,
    FinFunctor,
    StructuralError,
    build_category,
    comma_category,
    compose_functors,
    constant_functor,
    discrete_category,
    find_isomorphism,
    full_subcategory,
    hasse_pairs,
    identity_functor,
    induced_over_functor,
    named_shape,
    opposite,
    over_category,
    p0_inclusion,
    powerset_poset,
    preorder_category,
    thin_functor,
    validate_category,
    validate_functor,
)


@pytest.fixture(scope="module")
def p02():
    """P0(2+), the nonempty subsets of {+, 1, 2}."""
    return powerset_poset(2, punctured=True)


def composable_pair():
    """a -f-> b -g-> c with an explicit composite."""
    return build_category(
        ["a", "b", "c"],
        [("f", "a", "b"), ("g", "b", "c"), ("gf", "a", "c")],
        [("g", "f", "gf")],
    )


class TestBuildCategory:
    """Tests for build_category() and validate_category()."""

    def test_valid(self):
        """A complete table passes every axiom."""
        c = composable_pair()
        assert validate_category(c).passed
        assert c.compose(c.morphism("g"), c.morphism("f")) == c.morphism("gf")
        assert c.morphisms[c.identities[0]].name == "id_a"

    def test_missing_composite(self):
        """A composable pair without a composite violates totality."""
        c = build_category(["a", "b", "c"], [("f", "a", "b"), ("g", "b", "c")])
        report = validate_category(c)
        assert not report.passed
        assert [x.detail for x in report.failures] == ["g o f is missing"]

    def test_wrong_endpoints(self):
        """A composite with the wrong endpoints violates typing."""
        c = build_category(
            ["a", "b", "c"],
            [("f", "a", "b"), ("g", "b", "c"), ("h", "b", "c")],
            [("g", "f", "h")],
        )
        assert "typing" in [x.name for x in validate_category(c).failures]

    def test_duplicate_labels(self):
        """Duplicate objects and morphism names are structural errors."""
        with pytest.raises(StructuralError):
            build_category(["a", "a"], [])
        with pytest.raises(StructuralError):
            build_category(["a", "b"], [("f", "a", "b"), ("f", "a", "b")])

    def test_unknown_object(self):
        """Morphisms must refer to known objects."""
        with pytest.raises(StructuralError, match="unknown object"):
            build_category(["a"], [("f", "a", "z")])

    def test_idempotent(self):
        """An idempotent e o e = e is a valid one-object category."""
        c = build_category(["x"], [("e", "x", "x")], [("e", "e", "e")])
        assert validate_category(c).passed
        assert not c.is_thin

    def test_typing_violations_itemized(self):
        """Every badly typed composite gets its own typing failure."""
        c = composable_pair()
        f, g, gf = (c.morphism(name) for name in ("f", "g", "gf"))
        table = dict(c.composition)
        table[(g, f)] = f
        table[(f, g)] = gf
        broken = FinCategory(c.objects, c.morphisms, table, c.identities)
        failures = validate_category(broken).failures
        assert {x.name for x in failures} == {"typing"}
        assert sorted(x.detail for x in failures) == [
            "f o g is not composable",
            "g o f = f has wrong endpoints",
        ]

    def test_associativity_violation_itemized(self):
        """(h o g) o f != h o (g o f) is reported for that triple only."""
        c = build_category(
            ["a", "b", "c", "d"],
            [
                ("f", "a", "b"),
                ("g", "b", "c"),
                ("h", "c", "d"),
                ("gf", "a", "c"),
                ("hg", "b", "d"),
                ("p", "a", "d"),
                ("q", "a", "d"),
            ],
            [("g", "f", "gf"), ("h", "g", "hg"), ("h", "gf", "p"), ("hg", "f", "q")],
        )
        failures = validate_category(c).failures
        assert [(x.name, x.detail) for x in failures] == [("associativity", "(h o g) o f")]


class TestShapes:
    """Tests for the built-in shapes and preorder categories."""

    def test_p01_counts(self):
        """P0(1+) has 3 objects and 2 non-identity morphisms."""
        c = powerset_poset(1, punctured=True)
        assert c.objects == ("+", "1", "+1")
        assert len(c.non_identities) == 2

    def test_p02_counts(self, p02):
        """P0(2+) has 7 objects and 12 non-identity morphisms."""
        assert p02.size == 7
        assert len(p02.non_identities) == 12
        assert p02.objects == ("+", "1", "2", "+1", "+2", "12", "+12")
        assert validate_category(p02).passed

    def test_full_power_set(self):
        """P(2+) includes the empty set, labelled with the empty-set sign."""
        c = named_shape("p(2)")
        assert c.size == 8
        assert c.objects[0] == "∅"
        assert len(c.non_identities) == 19

    def test_powerset_limit(self):
        """The power set size is bounded by the configured limit."""
        with pytest.raises(CapacityError):
            powerset_poset(3, limits=Limits(max_powerset_n=2))

    @pytest.mark.parametrize(
        "name, objects, arrows",
        [
            ("pullback", 3, 2),
            ("pushout", 3, 2),
            ("arrow", 2, 1),
            ("point", 1, 0),
            ("empty", 0, 0),
            ("discrete(4)", 4, 0),
            ("p0(3)", 15, 50),
        ],
    )
    def test_named(self, name, objects, arrows):
        """Built-in shapes have the expected sizes."""
        c = named_shape(name)
        assert c.size == objects
        assert len(c.non_identities) == arrows

    def test_unknown_shape(self):
        """Unknown names are rejected."""
        with pytest.raises(StructuralError):
            named_shape("cube")

    def test_preorder_cycle(self):
        """A cycle in the relation yields a preorder whose round trips are identities."""
        c = preorder_category(["x", "y"], [("x", "y"), ("y", "x")])
        assert validate_category(c).passed
        xy, yx = c.morphism("x->y"), c.morphism("y->x")
        assert c.compose(yx, xy) == c.identities[0]

    def test_hasse_pairs(self):
        """Covering relations skip composites."""
        assert hasse_pairs(named_shape("p0(1)")) == [("+", "+1"), ("1", "+1")]
        chain = preorder_category(["0", "1", "2"], [("0", "1"), ("1", "2")])
        assert hasse_pairs(chain) == [("0", "1"), ("1", "2")]


class TestFunctors:
    """Tests for functor construction and validation."""

    def test_p0_inclusion(self):
        """The inclusion P0(1+) -> P0(2+) adds 2 to 1 and +1."""
        f = p0_inclusion()
        assert validate_functor(f).passed
        labels = [f.target.objects[x] for x in f.object_map]
        assert labels == ["+", "12", "+12"]

    def test_non_monotone(self):
        """A map that reverses an arrow has no functor."""
        arrow = named_shape("arrow")
        with pytest.raises(StructuralError):
            thin_functor(arrow, arrow, {"0": "1", "1": "0"})

    def test_invalid_functor(self):
        """Sending an arrow to an identity breaks endpoints."""
        arrow = named_shape("arrow")
        bad = FinFunctor(arrow, arrow, (0, 1), (0, 1, 0))
        report = validate_functor(bad)
        assert not report.passed
        assert report.failures[0].name == "endpoints"

    def test_broken_composite_reported_once(self):
        """A functor that breaks one composite fails exactly on that pair."""
        source = composable_pair()
        target = build_category(
            ["a", "b", "c"],
            [("f", "a", "b"), ("g", "b", "c"), ("p", "a", "c"), ("q", "a", "c")],
            [("g", "f", "p")],
        )
        images = {"f": "f", "g": "g", "gf": "q"}
        morphism_map = tuple(
            target.identities[k] if k < source.size else target.morphism(images[m.name])
            for k, m in enumerate(source.morphisms)
        )
        report = validate_functor(FinFunctor(source, target, (0, 1, 2), morphism_map))
        assert [(x.name, x.passed, x.detail) for x in report.checks] == [
            ("composition", False, "g o f")
        ]

    def test_identity_and_composition(self, p02):
        """Composing with identities changes nothing."""
        f = p0_inclusion()
        assert compose_functors(identity_functor(p02), f) == f
        assert compose_functors(f, identity_functor(f.source)) == f

    def test_constant(self, p02):
        """A constant functor is a functor."""
        assert validate_functor(constant_functor(p02, named_shape("arrow"), 1)).passed

    def test_full_subcategory(self, p02):
        """The full subcategory keeps every morphism between kept objects."""
        sub, inclusion = full_subcategory(p02, [0, 3, 6])
        assert sub.objects == ("+", "+1", "+12")
        assert len(sub.non_identities) == 3
        assert validate_category(sub).passed
        assert validate_functor(inclusion).passed


class TestOverCategories:
    """Tests for opposite(), over_category() and comma_category()."""

    def test_opposite_involution(self, p02):
        """Taking the opposite twice gives the category back."""
        assert opposite(opposite(p02)) == p02
        assert validate_category(opposite(p02)).passed

    def test_over_pullback_apex(self):
        """The over category of b in a -> b <- c is the same shape."""
        c = named_shape("pullback")
        over, forget = over_category(c, c.object("b"))
        assert over.size == 3
        assert len(over.non_identities) == 2
        assert validate_category(over).passed
        assert validate_functor(forget).passed

    def test_over_of_top_is_whole_poset(self, p02):
        """Everything lies under the top element."""
        over, _ = over_category(p02, p02.object("+12"))
        assert find_isomorphism(over, p02) is not None

    @pytest.mark.parametrize("label", ["+", "12", "+12"])
    def test_comma_of_identity(self, p02, label):
        """id/j is isomorphic to C/j."""
        j = p02.object(label)
        comma = comma_category(identity_functor(p02), j)
        over, _ = over_category(p02, j)
        assert validate_category(comma).passed
        assert find_isomorphism(comma, over) is not None

    def test_induced_over_functor(self):
        """F induces I/i -> J/F(i)."""
        f = p0_inclusion()
        induced = induced_over_functor(f, f.source.object("+1"))
        assert validate_functor(induced).passed
        assert induced.target.size == 7


class TestFindIsomorphism:
    """Tests for find_isomorphism()."""

    def test_pullback_is_not_pushout(self):
        """A cospan is not a span, but it is the opposite of one."""
        pullback, pushout = named_shape("pullback"), named_shape("pushout")
        assert find_isomorphism(pullback, pushout) is None
        found = find_isomorphism(pullback, opposite(pushout))
        assert found is not None
        assert validate_functor(found).passed

    def test_opposite_of_pullback(self):
        """The opposite of a cospan is a span with its apex at b."""
        pullback, pushout = named_shape("pullback"), named_shape("pushout")
        found = find_isomorphism(opposite(pullback), pushout)
        assert found is not None
        assert pushout.objects[found.object_map[pullback.object("b")]] == "a"
        assert validate_category(opposite(pullback)).passed

    def test_discrete(self):
        """Discrete categories of different sizes are not isomorphic."""
        assert find_isomorphism(discrete_category(2), discrete_category(3)) is None
        assert find_isomorphism(discrete_category(3), discrete_category(3)) is not None

    def test_capacity(self):
        """Large categories are refused."""
        with pytest.raises(CapacityError):
            find_isomorphism(named_shape("p(3)"), named_shape("p(3)"))
