# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Unit tests for the chaincx module."""

import math
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from chaincx import (
    ChainComplex,
    ChainComplexError,
    ChainMap,
    HomologyGroup,
    block_matrix,
    cone,
    connectivity,
    direct_sum,
    homology,
    homology_iso_check,
    homotopy_fiber,
    identity,
    image_contains,
    induced_is_injective,
    induced_is_surjective,
    induced_is_zero,
    kernel_basis,
    quasi_iso_check,
    shift,
    smith_normal_form,
    zeros,
)
from generators import random_complex, random_matrix


def check_smith_form(a: np.ndarray):
    """Assert every Smith normal form postcondition for a."""
    form = smith_normal_form(a)
    assert np.array_equal(form.u @ a @ form.v, form.d)
    assert sympy.Matrix(form.u.tolist()).det() in (1, -1)
    assert sympy.Matrix(form.v.tolist()).det() in (1, -1)
    rows, cols = form.d.shape
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert form.d[i, j] == 0
    diagonal = [form.d[k, k] for k in range(min(rows, cols))]
    assert all(x >= 0 for x in diagonal)
    nonzero = [x for x in diagonal if x]
    assert diagonal[: len(nonzero)] == nonzero
    for x, y in zip(nonzero, nonzero[1:]):
        assert y % x == 0


def random_chain_map(rng: random.Random) -> ChainMap:
    """k times the inclusion A -> A + C or the projection C + A -> A, for random A and C."""
    a = random_complex(rng, 0, 4)
    c = random_complex(rng, 0, 4)
    k = rng.choice((1, 2, 3))
    degrees = set(a.ranks) | set(c.ranks)
    if rng.random() < 0.5:
        target = direct_sum(a, c)
        parts = {
            n: block_matrix([[k * identity(a.rank(n))], [zeros(c.rank(n), a.rank(n))]])
            for n in degrees
        }
        return ChainMap(a, target, parts)
    source = direct_sum(c, a)
    parts = {
        n: block_matrix([[zeros(a.rank(n), c.rank(n)), k * identity(a.rank(n))]])
        for n in degrees
    }
    return ChainMap(source, a, parts)


def rational_image_rank(f: ChainMap, n: int) -> int:
    """Rank of H_n(f) tensored with Q."""
    if not f.source.rank(n) or not f.target.rank(n):
        return 0
    boundaries = f.target.d(n + 1)
    images = f.component(n) @ kernel_basis(f.source.d(n))
    both = np.concatenate([images, boundaries], axis=1)
    spanned = smith_normal_form(both, track=False).rank
    return spanned - smith_normal_form(boundaries, track=False).rank


@pytest.fixture
def z_mod_2() -> ChainComplex:
    """Z --2--> Z in degrees 1 -> 0."""
    return ChainComplex({0: 1, 1: 1}, {1: [[2]]})


class TestSmithNormalForm:
    """Tests for smith_normal_form()."""

    def test_two_by_two(self):
        """[[2, 4], [6, 8]] has invariants 2 and 4."""
        form = smith_normal_form([[2, 4], [6, 8]])
        assert np.array_equal(form.d, np.array([[2, 0], [0, 4]], dtype=object))
        assert form.invariants == (2, 4)
        assert form.rank == 2

    def test_zero_and_empty(self):
        """Zero and empty matrices have no invariants."""
        assert smith_normal_form(np.zeros((3, 2), dtype=object)).invariants == ()
        assert smith_normal_form(np.zeros((0, 4), dtype=object)).rank == 0

    def test_untracked(self):
        """Without tracking only the diagonal is produced."""
        form = smith_normal_form([[4, 6]], track=False)
        assert form.u is None and form.v is None
        assert form.invariants == (2,)

    def test_random_matrices(self):
        """Postconditions hold on 1000 seeded matrices up to 8x8 with entries in [-9, 9]."""
        rng = random.Random(1000)
        for _ in range(1000):
            a = random_matrix(rng, rng.randint(1, 8), rng.randint(1, 8), bound=9)
            check_smith_form(a)

    @settings(derandomize=True, max_examples=60, deadline=None)
    @given(
        st.integers(1, 5).flatmap(
            lambda cols: st.lists(
                st.lists(st.integers(-30, 30), min_size=cols, max_size=cols),
                min_size=1,
                max_size=5,
            )
        )
    )
    def test_property(self, rows):
        """Postconditions hold on generated matrices."""
        check_smith_form(np.array(rows, dtype=object))


class TestKernelAndImage:
    """Tests for kernel_basis() and image_contains()."""

    def test_kernel(self):
        """The kernel basis is annihilated and has the complementary rank."""
        a = np.array([[1, 2, 3], [2, 4, 6]], dtype=object)
        k = kernel_basis(a)
        assert k.shape == (3, 2)
        assert not (a @ k != 0).any()

    def test_image_lattice(self):
        """Membership is decided over Z, not over Q."""
        a = np.array([[2], [0]], dtype=object)
        assert image_contains(a, np.array([[4], [0]], dtype=object))
        assert not image_contains(a, np.array([[1], [0]], dtype=object))
        assert not image_contains(a, np.array([[0], [1]], dtype=object))

    def test_empty_cases(self):
        """No vectors are always contained; a map with no columns only hits zero."""
        a = np.zeros((2, 0), dtype=object)
        assert image_contains(a, np.zeros((2, 0), dtype=object))
        assert image_contains(a, np.zeros((2, 1), dtype=object))
        assert not image_contains(a, np.array([[1], [0]], dtype=object))


class TestChainComplex:
    """Tests for ChainComplex."""

    def test_bad_shape(self):
        """A differential of the wrong shape is rejected."""
        with pytest.raises(ChainComplexError):
            ChainComplex({0: 1, 1: 2}, {1: [[1]]})

    def test_square_nonzero(self):
        """check() rejects d o d != 0."""
        c = ChainComplex({0: 1, 1: 1, 2: 1}, {1: [[1]], 2: [[1]]})
        with pytest.raises(ChainComplexError):
            c.check()

    def test_zero_ranks_dropped(self):
        """Degrees of rank zero are not stored."""
        assert ChainComplex({0: 1, 3: 0}).degrees == [0]

    def test_euler_characteristic(self, z_mod_2):
        """The Euler characteristic is the alternating sum of ranks."""
        assert z_mod_2.euler_characteristic == 0
        assert ChainComplex({0: 2, 1: 1, 2: 4}).euler_characteristic == 5

    def test_equality_ignores_labels(self):
        """Labels do not take part in equality."""
        assert ChainComplex({0: 1}, labels={0: ("x",)}) == ChainComplex({0: 1})

    def test_shift(self, z_mod_2):
        """Shifting moves homology up."""
        assert homology(shift(z_mod_2, 2), 2) == HomologyGroup(0, (2,))


class TestHomology:
    """Tests for homology() and connectivity()."""

    def test_torsion(self, z_mod_2):
        """Z --2--> Z has H_0 = Z/2 and H_1 = 0."""
        assert homology(z_mod_2, 0) == HomologyGroup(0, (2,))
        assert homology(z_mod_2, 1).is_zero
        assert str(homology(z_mod_2, 0)) == "Z/2"

    def test_free(self):
        """Free homology is counted by Betti numbers."""
        c = ChainComplex({0: 2, 1: 1}, {1: [[1], [-1]]})
        assert homology(c, 0) == HomologyGroup(1)
        assert str(HomologyGroup(2, (3,))) == "Z^2 + Z/3"

    def test_connectivity(self, z_mod_2):
        """Connectivity is one less than the first nonzero homology."""
        assert connectivity(ChainComplex.concentrated(3)) == 2
        assert connectivity(z_mod_2) == -1
        assert connectivity(ChainComplex.zero()) == math.inf

    def test_direct_sum(self, z_mod_2):
        """Homology of a sum is the sum of homologies."""
        total = direct_sum(z_mod_2, ChainComplex.concentrated(0, 2))
        assert homology(total, 0) == HomologyGroup(2, (2,))

    def test_random_complexes(self):
        """Random complexes satisfy d o d = 0 and preserve the Euler characteristic."""
        rng = random.Random(7)
        for _ in range(30):
            c = random_complex(rng, 0, 4)
            c.check()
            betti = sum((-1) ** n * homology(c, n).betti for n in range(-1, 6))
            assert betti == c.euler_characteristic


class TestConeAndFiber:
    """Tests for cone() and homotopy_fiber()."""

    def test_cone_of_identity(self, z_mod_2):
        """The cone of an identity is acyclic."""
        c = cone(ChainMap.identity(z_mod_2))
        assert all(homology(c, n).is_zero for n in range(-1, 4))

    def test_fiber_of_identity(self, z_mod_2):
        """The fiber of an identity is acyclic and its projection is a chain map."""
        fib, projection = homotopy_fiber(ChainMap.identity(z_mod_2))
        assert all(homology(fib, n).is_zero for n in range(-2, 3))
        assert projection.is_chain_map()

    def test_fiber_of_zero_map(self):
        """The fiber of 0 -> Z[0] is Z[-1]."""
        fib, _ = homotopy_fiber(ChainMap.zero(ChainComplex.zero(), ChainComplex.concentrated(0)))
        assert homology(fib, -1) == HomologyGroup(1)

    def test_cone_of_multiplication(self):
        """The cone of 2: Z -> Z has H_0 = Z/2."""
        z = ChainComplex.concentrated(0)
        c = cone(ChainMap(z, z, {0: [[2]]}))
        assert homology(c, 0) == HomologyGroup(0, (2,))
        assert homology(c, 1).is_zero


class TestInducedMaps:
    """Tests for the homology criteria of chain maps."""

    def test_multiplication_by_two(self):
        """2: Z -> Z is injective but not surjective on H_0."""
        z = ChainComplex.concentrated(0)
        f = ChainMap(z, z, {0: [[2]]})
        assert induced_is_injective(f, 0)
        assert not induced_is_surjective(f, 0)
        assert not induced_is_zero(f, 0)
        report = quasi_iso_check(f, [0])
        assert not report.passed

    def test_into_acyclic(self):
        """A map into an acyclic complex is zero in homology."""
        z = ChainComplex.concentrated(0)
        acyclic = ChainComplex({0: 1, 1: 1}, {1: [[1]]})
        f = ChainMap(z, acyclic, {0: [[1]]})
        assert f.is_chain_map()
        assert induced_is_zero(f, 0)

    def test_torsion_quotient(self, z_mod_2):
        """Z[0] -> (Z --2--> Z) is surjective on H_0 but not injective."""
        f = ChainMap(ChainComplex.concentrated(0), z_mod_2, {0: [[1]]})
        assert induced_is_surjective(f, 0)
        assert not induced_is_injective(f, 0)

    def test_not_a_chain_map(self, z_mod_2):
        """A map that ignores the differential is rejected."""
        f = ChainMap(z_mod_2, z_mod_2, {1: [[1]]})
        assert not f.is_chain_map()
        with pytest.raises(ChainComplexError):
            f.check()

    def test_composition(self):
        """after() multiplies components."""
        z = ChainComplex.concentrated(0)
        two = ChainMap(z, z, {0: [[2]]})
        three = ChainMap(z, z, {0: [[3]]})
        assert three.after(two) == ChainMap(z, z, {0: [[6]]})

    def test_homology_iso_check(self, z_mod_2):
        """Isomorphism types are compared degree by degree."""
        report = homology_iso_check(z_mod_2, shift(z_mod_2, 1), range(0, 2))
        assert [c.passed for c in report.checks] == [False, False]
        assert homology_iso_check(z_mod_2, z_mod_2, range(-1, 3)).passed


class TestInvariants:
    """Homological invariants of cones and fibers on generated maps."""

    @settings(derandomize=True, max_examples=30, deadline=None)
    @given(st.integers(2, 9), st.integers(1, 3), st.integers(-2, 3))
    def test_isomorphic_homology_without_quasi_iso(self, k, rank, degree):
        """The inclusion im d -> ker d of Z^r --k--> Z^r is no quasi-iso despite equal homology."""
        c = ChainComplex({degree: rank, degree + 1: rank}, {degree + 1: k * identity(rank)})
        boundaries = ChainComplex.concentrated(degree, rank)
        cycles = ChainComplex.concentrated(degree, rank)
        inclusion = ChainMap(boundaries, cycles, {degree: k * identity(rank)})
        assert image_contains(c.d(degree + 1), inclusion.component(degree))
        assert homology_iso_check(boundaries, cycles, [degree]).passed
        assert not quasi_iso_check(inclusion, [degree]).passed
        assert induced_is_injective(inclusion, degree)

    @settings(derandomize=True, max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_cone_euler_characteristic(self, seed):
        """The Euler characteristic of cone(f: A -> B) is chi(B) - chi(A)."""
        f = random_chain_map(random.Random(seed))
        assert f.is_chain_map()
        expected = f.target.euler_characteristic - f.source.euler_characteristic
        assert cone(f).euler_characteristic == expected

    @settings(derandomize=True, max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_fiber_exact_sequence_ranks(self, seed):
        """Betti numbers of the fiber split into kernel and cokernel ranks of H(f)."""
        f = random_chain_map(random.Random(seed))
        fib, projection = homotopy_fiber(f)
        assert projection.is_chain_map()
        for n in range(-2, 7):
            kernel = homology(f.source, n).betti - rational_image_rank(f, n)
            cokernel = homology(f.target, n + 1).betti - rational_image_rank(f, n + 1)
            assert homology(fib, n).betti == kernel + cokernel
        betti = sum((-1) ** (n % 2) * homology(fib, n).betti for n in range(-2, 7))
        assert betti == f.source.euler_characteristic - f.target.euler_characteristic

    @settings(derandomize=True, max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(0, 4))
    def test_fiber_of_zero_map_is_shift(self, seed, free):
        """The fiber of 0 -> B is B one degree down."""
        b = direct_sum(random_complex(random.Random(seed), 0, 4), ChainComplex.concentrated(free))
        assert connectivity(b) < math.inf
        fib, _ = homotopy_fiber(ChainMap.zero(ChainComplex.zero(), b))
        assert fib.ranks == shift(b, -1).ranks
        assert homology_iso_check(fib, shift(b, -1), range(-2, 6)).passed
        assert not homology(fib, free - 1).is_zero
