"""Naive reference implementations shared by the test suite.

Everything here is deliberately brute-force: these are the independent oracles
the fast library code is checked against.
"""

from __future__ import annotations

import itertools

from hypertope.permutations import Permutation, PermutationGroup


def mulclose(gens: list[Permutation], maxsize: int | None = None) -> set[Permutation]:
    """All products of generators, by plain breadth-first closure."""
    if not gens:
        return {Permutation.identity(0) if not gens else None} if False else set()
    identity = Permutation.identity(gens[0].degree)
    elements = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for e in frontier:
            for g in gens:
                c = e * g
                if c not in elements:
                    elements.add(c)
                    new.append(c)
                    if maxsize is not None and len(elements) > maxsize:
                        raise RuntimeError("mulclose exceeded %d" % maxsize)
        frontier = new
    return elements


def group_elements(g: PermutationGroup, maxsize: int | None = None) -> set[Permutation]:
    if not g.generators:
        return {Permutation.identity(g.degree)}
    return mulclose(list(g.generators), maxsize=maxsize)


def naive_intersection(a: PermutationGroup, b: PermutationGroup) -> set[Permutation]:
    ea = group_elements(a)
    eb = group_elements(b)
    return ea & eb


def naive_orbit(g: PermutationGroup, x: int) -> set[int]:
    return {p.apply(x) for p in group_elements(g)}


def naive_stabilizer(g: PermutationGroup, x: int) -> set[Permutation]:
    return {p for p in group_elements(g) if p.apply(x) == x}


def random_subgroup(rng, degree: int, n_gens: int = 2) -> PermutationGroup:
    gens = []
    for _ in range(n_gens):
        images = list(range(degree))
        rng.shuffle(images)
        gens.append(Permutation(images))
    return PermutationGroup(degree, gens)


def all_two_generated_subgroups(degree: int):
    """Every ordered pair of elements of S_degree as a generating set, one
    group per unordered pair of generators (including equal)."""
    perms = [Permutation(p) for p in itertools.permutations(range(degree))]
    for i, p in enumerate(perms):
        for q in perms[i:]:
            yield PermutationGroup(degree, [p, q])


def rank4_cycle_voltage():
    """Frozen 20-vertex, 4-colour voltage graph whose covers realize the
    rank-4 group with cyclic diagram labelled 3, 3, 3, 4.  Kept here as an
    independent copy so the tests do not depend on the library's bundled
    data files."""
    from hypertope.colored_graphs import VoltageGraph

    return VoltageGraph.from_edges(
        20,
        4,
        solid=[
            (0, 4, 5), (0, 6, 8), (0, 7, 9), (0, 10, 12), (0, 11, 13), (0, 14, 15),
            (1, 1, 5), (1, 2, 7), (1, 3, 6), (1, 12, 17), (1, 13, 16), (1, 14, 18),
            (2, 0, 2), (2, 4, 6), (2, 5, 8), (2, 11, 14), (2, 13, 15), (2, 17, 19),
            (3, 2, 3), (3, 6, 7), (3, 8, 10), (3, 9, 11), (3, 12, 13), (3, 16, 17),
        ],
        dotted=[(0, 18, 1), (1, 15, 4), (2, 16, 3), (3, 19, 0)],
    )


def rank4_cycle_cover(t: int):
    from hypertope.colored_graphs import cyclic_cover

    return cyclic_cover(rank4_cycle_voltage(), t)


def random_involution(rng, degree: int) -> Permutation:
    """A non-identity involution: a random non-empty partial matching."""
    while True:
        verts = list(range(degree))
        rng.shuffle(verts)
        n_swaps = rng.randrange(1, degree // 2 + 1)
        images = list(range(degree))
        for k in range(n_swaps):
            a, b = verts[2 * k], verts[2 * k + 1]
            images[a], images[b] = b, a
        p = Permutation(images)
        if not p.is_identity():
            return p


def random_typed_group(rng, degree: int, rank: int = 3):
    """Typed group on distinct random involutions."""
    from hypertope.intersection_property import TypedGroup

    while True:
        gens = [random_involution(rng, degree) for _ in range(rank)]
        if len({g.images for g in gens}) == rank:
            return TypedGroup(degree, gens)


def intersection_property_brute(tg, maxsize: int = 20000) -> bool:
    """Full subset-lattice intersection condition by element enumeration:
    the parabolic of I meets the parabolic of J exactly in the parabolic of
    their intersection, for every pair of type subsets."""
    subsets = []
    types = list(tg.index_set)
    for mask in range(1 << len(types)):
        subsets.append(frozenset(t for b, t in enumerate(types) if mask >> b & 1))
    elems = {
        s: group_elements(tg.parabolic(s), maxsize=maxsize) for s in subsets
    }
    for a in subsets:
        for b in subsets:
            if elems[a] & elems[b] != elems[a & b]:
                return False
    return True


def flag_condition_brute(tg, i: int, j: int, k: int, maxsize: int = 20000) -> bool:
    """The product-set condition behind three-type flag-transitivity, by
    element enumeration:  G_i meet G_j G_k  ==  (G_i meet G_j)(G_i meet G_k)."""
    gi = group_elements(tg.omitting(i), maxsize=maxsize)
    gj = group_elements(tg.omitting(j), maxsize=maxsize)
    gk = group_elements(tg.omitting(k), maxsize=maxsize)
    gij = group_elements(tg.omitting(i, j), maxsize=maxsize)
    gik = group_elements(tg.omitting(i, k), maxsize=maxsize)
    left = gi & {a * b for a in gj for b in gk}
    right = {a * b for a in gij for b in gik}
    assert right <= left
    return left == right


def random_proper_two_colored_graph(rng, max_vertices: int = 60):
    """A random graph on >= 2 vertices whose two colour classes are
    non-empty, distinct matchings.  Used to stress the period formula."""
    from hypertope.colored_graphs import ColoredGraph, validate_proper

    while True:
        d = rng.randrange(2, max_vertices + 1)
        per_colour = []
        for _ in range(2):
            verts = list(range(d))
            rng.shuffle(verts)
            n_edges = rng.randrange(1, d // 2 + 1)
            per_colour.append(
                [(verts[2 * k], verts[2 * k + 1]) for k in range(n_edges)]
            )
        g = ColoredGraph(d, 2, per_colour)
        if validate_proper(g).ok:
            return g
