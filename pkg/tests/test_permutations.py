"""Unit and oracle tests for the permutation engine."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypertope.permutations import (
    Permutation,
    PermutationGroup,
    SearchBudgetExceeded,
    TransversalCapExceeded,
)

from helpers import (
    group_elements,
    naive_intersection,
    naive_orbit,
    naive_stabilizer,
    random_subgroup,
)


def perm(*cycles, degree):
    return Permutation.from_cycles(degree, cycles)


class TestPermutation:
    def test_identity_compose(self):
        p = perm((0, 1, 2), degree=4)
        assert Permutation.identity(4) * p == p
        assert p * Permutation.identity(4) == p

    def test_inverse_compose(self):
        p = perm((0, 3), (1, 2), degree=5)
        assert p * p.inverse() == Permutation.identity(5)

    def test_right_action_order(self):
        # x · (p * q) = (x · p) · q
        p = perm((0, 1), degree=3)
        q = perm((1, 2), degree=3)
        assert (p * q).apply(0) == q.apply(p.apply(0)) == 2

    def test_disjoint_transpositions(self):
        p = perm((0, 1), degree=4)
        q = perm((2, 3), degree=4)
        c = p * q
        assert c == perm((0, 1), (2, 3), degree=4)
        assert c.order() == 2

    def test_bijection_validation(self):
        with pytest.raises(ValueError):
            Permutation([0, 0, 1])

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            perm((0, 1), degree=3) * perm((0, 1), degree=4)

    def test_order_examples(self):
        assert Permutation.identity(6).order() == 1
        assert perm((0, 1, 2, 3, 4), degree=6).order() == 5
        assert perm((0, 1), (2, 3, 4), degree=5).order() == 6

    def test_pow(self):
        p = perm((0, 1, 2, 3, 4), degree=5)
        assert p**5 == Permutation.identity(5)
        assert p**-1 == p.inverse()
        assert p**3 == p * p * p

    def test_json_roundtrip(self):
        p = perm((0, 4), (1, 2, 3), degree=5)
        assert Permutation.from_json(p.to_json()) == p

    @given(st.permutations(list(range(7))))
    def test_order_equals_cyclic_group_size(self, images):
        p = Permutation(images)
        k = p.order()
        assert (p**k).is_identity()
        powers = set()
        q = Permutation.identity(7)
        for _ in range(k):
            powers.add(q)
            q = q * p
        assert len(powers) == k


class TestGroupBasics:
    def test_trivial_orbit(self):
        g = PermutationGroup.trivial(5)
        assert g.orbit(3) == [3]
        assert g.order() == 1

    def test_orbit_out_of_range(self):
        with pytest.raises(ValueError):
            PermutationGroup.trivial(5).orbit(5)

    def test_symmetric_group_order(self):
        s4 = PermutationGroup(4, [perm((0, 1), degree=4), perm((0, 1, 2, 3), degree=4)])
        assert s4.order() == 24

    def test_dihedral_order(self):
        # two reflections of a hexagon generate a dihedral group of order 12
        a = perm((1, 5), (2, 4), degree=6)
        b = perm((0, 1), (2, 5), (3, 4), degree=6)
        assert PermutationGroup(6, [a, b]).order() == 12

    def test_contains_trivial(self):
        g = PermutationGroup(4, [perm((0, 1), degree=4)])
        assert g.contains(Permutation.identity(4))
        assert g.contains(perm((0, 1), degree=4))
        assert not g.contains(perm((0, 2), degree=4))

    def test_evaluate_word(self):
        g = PermutationGroup(3, [perm((0, 1), degree=3), perm((1, 2), degree=3)])
        assert g.evaluate_word([]).is_identity()
        assert g.evaluate_word([0, 0]).is_identity()
        # word [0, 1] applies generator 0 first
        assert g.evaluate_word([0, 1]).apply(0) == 2
        with pytest.raises(ValueError):
            g.evaluate_word([5])

    def test_elements_enumeration(self):
        s4 = PermutationGroup(4, [perm((0, 1), degree=4), perm((0, 1, 2, 3), degree=4)])
        elems = list(s4.elements())
        assert len(elems) == 24
        assert len(set(elems)) == 24


class TestAgainstNaiveEnumeration:
    @pytest.mark.parametrize("seed", range(12))
    def test_order_matches_closure(self, seed):
        rng = random.Random(seed)
        g = random_subgroup(rng, degree=rng.randint(2, 7))
        assert g.order() == len(group_elements(g, maxsize=20000))

    @pytest.mark.parametrize("seed", range(8))
    def test_membership_matches_closure(self, seed):
        rng = random.Random(100 + seed)
        g = random_subgroup(rng, degree=6)
        elements = group_elements(g, maxsize=20000)
        # every element sifts in; random outsiders sift out
        for p in list(elements)[:50]:
            assert g.contains(p)
        for _ in range(30):
            images = list(range(6))
            rng.shuffle(images)
            q = Permutation(images)
            assert g.contains(q) == (q in elements)

    @pytest.mark.parametrize("seed", range(8))
    def test_orbit_and_stabilizer(self, seed):
        rng = random.Random(200 + seed)
        g = random_subgroup(rng, degree=7)
        x = rng.randrange(7)
        assert set(g.orbit(x)) == naive_orbit(g, x)
        stab = g.point_stabilizer(x)
        assert stab.order() == len(naive_stabilizer(g, x))
        assert len(g.orbit(x)) * stab.order() == g.order()
        for p in stab.generators:
            assert p.apply(x) == x

    def test_orbit_partition_covers_points(self):
        g = PermutationGroup(6, [perm((0, 1), degree=6), perm((2, 3, 4), degree=6)])
        orbits, index = g.orbit_partition()
        assert sorted(v for orb in orbits for v in orb) == list(range(6))
        for oid, orb in enumerate(orbits):
            for v in orb:
                assert index[v] == oid


class TestIntersection:
    def test_self_intersection(self):
        g = PermutationGroup(5, [perm((0, 1), degree=5), perm((0, 1, 2, 3, 4), degree=5)])
        assert g.subgroup_intersection(g).order() == g.order()

    @pytest.mark.parametrize("seed", range(15))
    def test_matches_naive(self, seed):
        rng = random.Random(300 + seed)
        a = random_subgroup(rng, degree=6)
        b = random_subgroup(rng, degree=6)
        got = a.subgroup_intersection(b)
        want = naive_intersection(a, b)
        assert got.order() == len(want)
        for g in got.generators:
            assert g in want

    def test_seeded_lower_bound(self):
        # shared generators are picked up even before searching
        shared = perm((0, 1, 2), degree=6)
        a = PermutationGroup(6, [shared, perm((3, 4), degree=6)])
        b = PermutationGroup(6, [shared, perm((4, 5), degree=6)])
        inter = a.subgroup_intersection(b)
        assert inter.contains(shared)

    def test_budget_exhaustion(self):
        a = PermutationGroup(7, [perm((0, 1), degree=7), perm((0, 1, 2, 3, 4, 5, 6), degree=7)])
        b = PermutationGroup(7, [perm((0, 2), degree=7), perm((0, 2, 4, 6, 1, 3, 5), degree=7)])
        with pytest.raises(SearchBudgetExceeded) as exc:
            a.subgroup_intersection(b, node_budget=3)
        assert exc.value.partial is not None


class TestTransversals:
    def test_h_equals_g(self):
        g = PermutationGroup(4, [perm((0, 1), degree=4), perm((0, 1, 2, 3), degree=4)])
        reps = g.coset_transversal(g)
        assert reps == [Permutation.identity(4)]

    def test_right_cosets_partition(self):
        g = PermutationGroup(4, [perm((0, 1), degree=4), perm((0, 1, 2, 3), degree=4)])
        h = PermutationGroup(4, [perm((0, 1), degree=4), perm((1, 2), degree=4)])  # S_3
        reps = g.coset_transversal(h)
        assert len(reps) == g.order() // h.order() == 4
        assert reps[0].is_identity()
        seen = set()
        h_elems = group_elements(h)
        for r in reps:
            coset = frozenset(k * r for k in h_elems)
            assert coset not in seen
            seen.add(coset)
        assert sum(len(group_elements(h)) for _ in reps) == g.order()

    def test_left_cosets_partition(self):
        g = PermutationGroup(4, [perm((0, 1), degree=4), perm((0, 1, 2, 3), degree=4)])
        h = PermutationGroup(4, [perm((0, 1), degree=4), perm((1, 2), degree=4)])
        reps = g.coset_transversal(h, side="left")
        h_elems = group_elements(h)
        seen = set()
        for r in reps:
            coset = frozenset(r * k for k in h_elems)
            assert coset not in seen
            seen.add(coset)
        assert len(seen) == 4

    def test_words_track_reps(self):
        g = PermutationGroup(4, [perm((0, 1), degree=4), perm((0, 1, 2, 3), degree=4)])
        h = PermutationGroup(4, [perm((0, 1), degree=4)])
        for p, word in g.coset_transversal_with_words(h):
            assert g.evaluate_word(word) == p
        for p, word in g.coset_transversal_with_words(h, side="left"):
            assert g.evaluate_word(word) == p

    def test_not_a_subgroup(self):
        g = PermutationGroup(4, [perm((0, 1), degree=4)])
        h = PermutationGroup(4, [perm((2, 3), degree=4)])
        with pytest.raises(ValueError):
            g.coset_transversal(h)

    def test_cap(self):
        g = PermutationGroup(5, [perm((0, 1), degree=5), perm((0, 1, 2, 3, 4), degree=5)])
        h = PermutationGroup.trivial(5)
        with pytest.raises(TransversalCapExceeded) as exc:
            g.coset_transversal(h, cap=10)
        assert exc.value.found == 10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_property_orbit_stabilizer(seed):
    rng = random.Random(seed)
    g = random_subgroup(rng, degree=rng.randint(2, 8))
    x = rng.randrange(g.degree)
    assert len(g.orbit(x)) * g.point_stabilizer(x).order() == g.order()
