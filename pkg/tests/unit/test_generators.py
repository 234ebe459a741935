# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Unit tests for the generators module."""

import random

import numpy as np
import pytest
import sympy

from chaincx import identity
from fincat import build_category, named_shape, validate_functor
from generators import (
    random_complex,
    random_diagram,
    random_monotone_functor,
    random_poset,
    random_unimodular,
    theorem_a_instance,
    theorem_b_instance,
)
from holim import validate_diagram


class TestMatrices:
    """Tests for random_unimodular() and random_complex()."""

    @pytest.mark.parametrize("seed", range(20))
    def test_unimodular(self, seed):
        """The second matrix inverts the first and the determinant is a unit."""
        rng = random.Random(seed)
        n = rng.randint(1, 5)
        p, q = random_unimodular(rng, n)
        assert np.array_equal(p @ q, identity(n))
        assert sympy.Matrix(p.tolist()).det() in (1, -1)

    @pytest.mark.parametrize("seed", range(20))
    def test_complex(self, seed):
        """Random complexes square to zero and stay in the requested degrees."""
        c = random_complex(random.Random(seed), low=1, high=4)
        c.check()
        assert all(1 <= n <= 4 for n in c.degrees)


class TestShapes:
    """Tests for random_poset() and random_monotone_functor()."""

    @pytest.mark.parametrize("seed", range(10))
    def test_poset(self, seed):
        """Random posets are thin and refine the index order."""
        c = random_poset(random.Random(seed), 5)
        assert c.is_thin
        assert c.objects == ("0", "1", "2", "3", "4")
        assert all(not c.hom(b, a) for a in range(5) for b in range(a + 1, 5))

    @pytest.mark.parametrize("seed", range(10))
    def test_monotone_functor(self, seed):
        """Random functors satisfy the functor axioms."""
        rng = random.Random(seed)
        functor = random_monotone_functor(rng, 4, random_poset(rng, 4))
        assert validate_functor(functor).passed


class TestDiagrams:
    """Tests for random_diagram() and the instance factories."""

    @pytest.mark.parametrize("seed", range(20))
    def test_functorial(self, seed):
        """Generated diagrams are functorial."""
        rng = random.Random(seed)
        d = random_diagram(rng, random_poset(rng, rng.randint(1, 5)))
        assert validate_diagram(d).passed

    @pytest.mark.parametrize("shape", ["pullback", "pushout", "p0(2)", "p(2)", "discrete(3)"])
    def test_named_shapes(self, shape):
        """Every thin named shape carries a random diagram."""
        d = random_diagram(random.Random(shape), named_shape(shape))
        assert validate_diagram(d).passed

    def test_not_thin(self):
        """Parallel arrows are rejected."""
        c = build_category(["a", "b"], [("f", "a", "b"), ("g", "a", "b")])
        with pytest.raises(ValueError):
            random_diagram(random.Random(0), c)

    def test_reproducible(self):
        """The same seed gives the same diagram."""
        first = theorem_a_instance(random.Random(42))
        second = theorem_a_instance(random.Random(42))
        assert first.shape == second.shape
        assert first.vertices == second.vertices
        assert first.edges == second.edges

    @pytest.mark.parametrize("seed", range(10))
    def test_theorem_b_instance(self, seed):
        """The diagram lives on the target of the functor."""
        functor, d = theorem_b_instance(random.Random(seed))
        assert functor.target == d.shape
