"""Coset enumeration tests, cross-checked against sympy's independent
Todd-Coxeter implementation."""

import pytest

from hypertope.coset_enumeration import (
    CosetTable,
    CoxeterMatrix,
    EnumerationCapExceeded,
    coset_action,
    coxeter_group_order,
    enumerate_cosets,
    parabolic_transversal_words,
)
from hypertope.colored_graphs import validate_proper, induced_group
from hypertope.permutations import PermutationGroup


def sympy_coset_count(matrix: CoxeterMatrix, parabolic) -> int:
    from sympy.combinatorics.free_groups import free_group
    from sympy.combinatorics.fp_groups import FpGroup, coset_enumeration_r

    n = matrix.rank
    names = " ".join("g%d" % i for i in range(n))
    created = free_group(names)
    F, gens = created[0], list(created[1:])
    relators = [g**2 for g in gens]
    for i in range(n):
        for j in range(i + 1, n):
            relators.append((gens[i] * gens[j]) ** matrix[i, j])
    G = FpGroup(F, relators)
    table = coset_enumeration_r(G, [gens[i] for i in parabolic])
    table.compress()
    return table.n


class TestCoxeterMatrix:
    def test_path_constructor(self):
        m = CoxeterMatrix.path([5, 3])
        assert m.rank == 3
        assert m[0, 1] == 5 and m[1, 2] == 3 and m[0, 2] == 2
        assert m[1, 0] == 5

    def test_cycle_constructor(self):
        m = CoxeterMatrix.cycle([3, 3, 3, 4])
        assert m.rank == 4
        assert m[0, 1] == m[1, 2] == m[2, 3] == 3
        assert m[3, 0] == 4
        assert m[0, 2] == m[1, 3] == 2

    def test_from_pairs(self):
        # star: node 1 in the middle, 5 on one arm
        m = CoxeterMatrix.from_pairs(4, {(0, 1): 5, (1, 2): 3, (1, 3): 3})
        assert m[0, 1] == 5 and m[2, 1] == 3 and m[1, 3] == 3
        assert m[0, 2] == m[0, 3] == m[2, 3] == 2

    def test_submatrix(self):
        m = CoxeterMatrix.cycle([3, 3, 3, 4])
        s = m.submatrix([0, 1, 2])
        assert s.entries == CoxeterMatrix.path([3, 3]).entries
        s2 = m.submatrix([0, 2, 3])
        assert s2[0, 1] == 2 and s2[1, 2] == 3 and s2[0, 2] == 4

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            CoxeterMatrix([[1, 3], [4, 1]])

    def test_rejects_bad_diagonal(self):
        with pytest.raises(ValueError):
            CoxeterMatrix([[2, 3], [3, 1]])

    def test_rejects_low_offdiagonal(self):
        with pytest.raises(ValueError):
            CoxeterMatrix([[1, 1], [1, 1]])

    def test_json_roundtrip(self):
        m = CoxeterMatrix.cycle([3, 4, 3, 5])
        assert CoxeterMatrix.from_json(m.to_json()) == m


# (labels as path, parabolic, expected index) checked against sympy too
PATH_CASES = [
    ([3], (), 6),
    ([3], (0,), 3),
    ([4], (1,), 4),
    ([3, 3], (), 24),
    ([3, 3], (0, 1, 2), 1),
    ([3, 3], (1, 2), 4),
    ([4, 3], (1, 2), 8),
    ([4, 3], (0, 1), 6),
    ([3, 5], (1, 2), 12),
    ([5, 3], (0, 1), 12),
    ([5, 3], (1, 2), 20),
    ([3, 3, 3], (0, 1, 2), 5),
    ([3, 3, 4], (), 384),
    ([5, 3, 3], (0, 1, 2), 120),
]


class TestEnumerateCosets:
    @pytest.mark.parametrize("labels,parabolic,expected", PATH_CASES)
    def test_path_cases(self, labels, parabolic, expected):
        m = CoxeterMatrix.path(labels)
        table = enumerate_cosets(m, parabolic)
        assert table.n_cosets == expected

    @pytest.mark.parametrize("labels,parabolic,expected", PATH_CASES)
    def test_agrees_with_sympy(self, labels, parabolic, expected):
        m = CoxeterMatrix.path(labels)
        assert sympy_coset_count(m, parabolic) == expected

    def test_cycle_3334_parabolics(self):
        m = CoxeterMatrix.cycle([3, 3, 3, 4])
        # leaving out one generator gives the spherical residues
        orders = {}
        for i in range(4):
            sub = [j for j in range(4) if j != i]
            orders[i] = enumerate_cosets(m.submatrix(sub), ()).n_cosets
        assert orders == {0: 24, 1: 48, 2: 48, 3: 24}

    def test_rank_one(self):
        m = CoxeterMatrix([[1]])
        assert enumerate_cosets(m, ()).n_cosets == 2
        assert enumerate_cosets(m, (0,)).n_cosets == 1

    def test_rank_zero(self):
        assert enumerate_cosets(CoxeterMatrix([]), ()).n_cosets == 1

    def test_full_parabolic_single_coset(self):
        m = CoxeterMatrix.path([4, 3])
        assert enumerate_cosets(m, (0, 1, 2)).n_cosets == 1

    def test_cap_exceeded_on_affine_group(self):
        # the (3,3,3) triangle diagram is affine, hence infinite
        m = CoxeterMatrix.cycle([3, 3, 3])
        with pytest.raises(EnumerationCapExceeded) as exc:
            enumerate_cosets(m, (), cap=300)
        assert exc.value.live >= 300

    def test_parabolic_index_out_of_range(self):
        with pytest.raises(ValueError):
            enumerate_cosets(CoxeterMatrix.path([3]), (2,))

    def test_table_is_deterministic(self):
        m = CoxeterMatrix.path([5, 3])
        t1 = enumerate_cosets(m, (0,))
        t2 = enumerate_cosets(m, (0,))
        assert t1.action == t2.action

    def test_generators_act_as_involutions(self):
        table = enumerate_cosets(CoxeterMatrix.path([4, 3]), (2,))
        for i in range(table.rank):
            p = table.generator_permutation(i)
            assert (p * p).is_identity()

    def test_relators_hold_in_induced_action(self):
        m = CoxeterMatrix.path([3, 3, 4])
        table = enumerate_cosets(m, (0, 1))
        assert table.n_cosets == 64
        gens = [table.generator_permutation(i) for i in range(4)]
        for i in range(4):
            for j in range(i + 1, 4):
                assert ((gens[i] * gens[j]) ** m[i, j]).is_identity()

    def test_index_multiplicativity(self):
        m = CoxeterMatrix.path([3, 4])
        full = enumerate_cosets(m, ()).n_cosets
        for parabolic, parabolic_order in [((0,), 2), ((0, 1), 6), ((1, 2), 8)]:
            assert enumerate_cosets(m, parabolic).n_cosets * parabolic_order == full


class TestCosetActionGraph:
    def test_dodecahedron_faces_graph(self):
        table = enumerate_cosets(CoxeterMatrix.path([5, 3]), (0, 1))
        g = coset_action(table)
        assert g.d == 12 and g.n == 3
        assert validate_proper(g).ok
        assert induced_group(g).order() == 120

    def test_tetrahedron_vertices_graph(self):
        table = enumerate_cosets(CoxeterMatrix.path([3, 3]), (1, 2))
        g = coset_action(table)
        assert g.d == 4
        assert induced_group(g).order() == 24

    def test_single_coset_graph_flagged(self):
        table = enumerate_cosets(CoxeterMatrix.path([3]), (0, 1))
        g = coset_action(table)
        assert g.d == 1
        assert not validate_proper(g).ok

    def test_action_matches_table(self):
        table = enumerate_cosets(CoxeterMatrix.path([4, 3]), (0, 1))
        g = coset_action(table)
        for i in range(3):
            assert tuple(g.generator(i).images) == table.action[i]


class TestTransversalWords:
    def test_words_reach_every_coset_once(self):
        m = CoxeterMatrix.path([5, 3])
        table = enumerate_cosets(m, (1, 2))
        words = table.transversal_words()
        reached = []
        for w in words:
            c = 0
            for i in w:
                c = table.action[i][c]
            reached.append(c)
        assert sorted(reached) == list(range(table.n_cosets))
        # word k lands on coset k under the standardized numbering
        assert reached == list(range(table.n_cosets))

    def test_full_parabolic_gives_identity_word(self):
        m = CoxeterMatrix.path([3, 3])
        assert parabolic_transversal_words(m, (0, 1, 2)) == [()]

    def test_index_six_words(self):
        # order-48 rank-3 group over its order-8 parabolic: 6 words, one per
        # length 0..5 (a single geodesic chain)
        m = CoxeterMatrix.path([4, 3])
        words = parabolic_transversal_words(m, (0, 1))
        assert len(words) == 6
        assert sorted(len(w) for w in words) == [0, 1, 2, 3, 4, 5]

    def test_dodecahedral_words_longest_is_ten(self):
        m = CoxeterMatrix.path([5, 3])
        words = parabolic_transversal_words(m, (0, 1))
        assert len(words) == 12
        assert max(len(w) for w in words) == 10

    def test_shortlex_sorted_identity_first(self):
        m = CoxeterMatrix.path([3, 4])
        words = parabolic_transversal_words(m, (1,))
        assert words[0] == ()
        assert words == sorted(words, key=lambda w: (len(w), w))

    def test_left_cosets_are_pairwise_distinct(self):
        # evaluate each word in the faithful action; the left cosets w*H
        # must partition the group
        m = CoxeterMatrix.path([3, 4])
        table = enumerate_cosets(m, ())
        group = table.to_group()
        sub = PermutationGroup(
            group.degree, [table.generator_permutation(i) for i in (1, 2)]
        )
        words = parabolic_transversal_words(m, (1, 2))
        keys = set()
        for w in words:
            rep = group.evaluate_word(w)
            # left coset rep*H corresponds to the right coset H*rep^-1
            keys.add(sub.min_coset_element(rep.inverse()))
        assert len(keys) == len(words) == group.order() // sub.order()


class TestGroupOrders:
    @pytest.mark.parametrize(
        "labels,expected",
        [
            ([3, 3], 24),
            ([4, 3], 48),
            ([3, 4], 48),
            ([5, 3], 120),
            ([3, 3, 3], 120),
            ([3, 3, 4], 384),
            ([3, 4, 3], 1152),
            ([5, 3, 3], 14400),
        ],
    )
    def test_spherical_orders(self, labels, expected):
        assert coxeter_group_order(CoxeterMatrix.path(labels)) == expected

    def test_dihedral_orders(self):
        for q in range(2, 8):
            assert coxeter_group_order(CoxeterMatrix.path([q])) == 2 * q

    def test_faithful_action_order_matches(self):
        # the regular action has the same order as the coset count
        m = CoxeterMatrix.path([3, 4])
        table = enumerate_cosets(m, ())
        assert table.to_group().order() == table.n_cosets
