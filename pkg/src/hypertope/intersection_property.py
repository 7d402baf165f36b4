"""Intersection-property verification for groups with typed involution
generators.

The target condition: for every pair of types, the two maximal parabolic
subgroups meet exactly in their common parabolic.  Checked recursively (each
maximal parabolic must satisfy the same condition first), with two cheap
sufficient certificates evaluated on the permutation action before falling
back to an exact backtracking intersection:

  gcd certificate        o * gcd(s_i, s_j)         <= |common parabolic|
  counting certificate   o * |stab_i(x) & stab_j(x)| <= |common parabolic|

where o is the overlap of the two parabolic orbits of a vertex x and s_i,
s_j are the point-stabilizer orders.  Either inequality at a single vertex
forces the intersection to collapse; neither is necessary, so a failed scan
is Inconclusive, never Fail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Sequence

from .colored_graphs import ColoredGraph
from .coset_enumeration import CoxeterMatrix
from .permutations import Permutation, PermutationGroup, SearchBudgetExceeded
from .verdicts import Verdict, combine_verdicts

__all__ = [
    "TypedGroup",
    "RelationIssue",
    "RelationReport",
    "PairCheck",
    "IPReport",
    "check_relations",
    "ip_pair_stats",
    "ip_pair_certificate",
    "verify_intersection_property",
]

DEFAULT_NODE_BUDGET = 10_000_000


class TypedGroup:
    """A permutation group with distinguished involution generators indexed
    by type.  Dropping a type gives the residue; original indices are kept
    so every report speaks the full group's index language.  Parabolic
    subgroups and verification reports are memoized in caches shared across
    the whole residue tree."""

    __slots__ = ("degree", "_gens", "index_set", "_caches")

    def __init__(
        self,
        degree: int,
        generators: "Mapping[int, Permutation] | Sequence[Permutation]",
        _caches: dict | None = None,
    ):
        if isinstance(generators, Mapping):
            gens = dict(sorted(generators.items()))
        else:
            gens = dict(enumerate(generators))
        for idx, p in gens.items():
            if p.degree != degree:
                raise ValueError("generator %d has degree %d, expected %d" % (idx, p.degree, degree))
            if p.is_identity() or not (p * p).is_identity():
                raise ValueError("generator %d is not a non-identity involution" % idx)
        self.degree = degree
        self._gens = gens
        self.index_set = tuple(gens)
        self._caches = _caches if _caches is not None else {"parabolic": {}, "ip": {}, "ft": {}}

    @classmethod
    def from_graph(cls, graph: ColoredGraph) -> "TypedGroup":
        return cls(graph.d, [graph.generator(c) for c in range(graph.n)])

    @classmethod
    def from_group(cls, group: PermutationGroup) -> "TypedGroup":
        return cls(group.degree, list(group.generators))

    @property
    def rank(self) -> int:
        return len(self.index_set)

    def generator(self, i: int) -> Permutation:
        return self._gens[i]

    def parabolic(self, types: Iterable[int]) -> PermutationGroup:
        """Subgroup generated by the listed types (memoized)."""
        key = frozenset(types)
        if not key <= frozenset(self.index_set):
            raise ValueError("types %r not all available in %r" % (sorted(key), self.index_set))
        cached = self._caches["parabolic"].get(key)
        if cached is None:
            members = sorted(key)
            if members:
                cached = PermutationGroup(
                    self.degree,
                    [self._gens[i] for i in members],
                    labels=["rho%d" % i for i in members],
                )
            else:
                cached = PermutationGroup.trivial(self.degree)
            self._caches["parabolic"][key] = cached
        return cached

    def group(self) -> PermutationGroup:
        return self.parabolic(self.index_set)

    def omitting(self, *dropped: int) -> PermutationGroup:
        """The parabolic generated by every type except the ones listed."""
        return self.parabolic(set(self.index_set) - set(dropped))

    def residue(self, i: int) -> "TypedGroup":
        """Typed subgroup dropping type i, sharing caches with this group."""
        if i not in self._gens:
            raise ValueError("type %d not present" % i)
        sub = {j: p for j, p in self._gens.items() if j != i}
        return TypedGroup(self.degree, sub, _caches=self._caches)

    def __repr__(self) -> str:
        return "TypedGroup(degree=%d, types=%r)" % (self.degree, list(self.index_set))


@dataclass(frozen=True)
class RelationIssue:
    kind: str  # "generator_order" | "pair_order"
    types: tuple[int, ...]
    expected: int
    actual: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "types": list(self.types),
            "expected": self.expected,
            "actual": self.actual,
        }


@dataclass(frozen=True)
class RelationReport:
    ok: bool
    issues: tuple[RelationIssue, ...]

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "issues": [i.to_json() for i in self.issues]}


def check_relations(g: TypedGroup, matrix: CoxeterMatrix) -> RelationReport:
    """Exact diagram check: every generator has order 2 and every product of
    two distinct generators has exactly the matrix order.  Matrix rows map to
    the group's types in sorted order."""
    if matrix.rank != g.rank:
        raise ValueError("matrix rank %d != group rank %d" % (matrix.rank, g.rank))
    types = g.index_set
    issues: list[RelationIssue] = []
    for a, i in enumerate(types):
        actual = g.generator(i).order()
        if actual != 2:
            issues.append(RelationIssue("generator_order", (i,), 2, actual))
    for a in range(len(types)):
        for b in range(a + 1, len(types)):
            i, j = types[a], types[b]
            actual = (g.generator(i) * g.generator(j)).order()
            if actual != matrix[a, b]:
                issues.append(RelationIssue("pair_order", (i, j), matrix[a, b], actual))
    return RelationReport(not issues, tuple(issues))


@dataclass(frozen=True)
class PairCheck:
    """Outcome of one pair-of-types check, with the numbers behind it.

    For a certificate Pass: witness is the vertex, orbit_overlap is
    |x G_i meet x G_j|, stab_i/stab_j the point-stabilizer orders there.
    For the exact route: intersection_order is |G_i meet G_j|."""

    i: int
    j: int
    verdict: Verdict
    method: str | None = None
    witness: int | None = None
    orbit_overlap: int | None = None
    stab_i: int | None = None
    stab_j: int | None = None
    stab_gcd: int | None = None
    stab_intersection: int | None = None
    parabolic_order: int | None = None
    intersection_order: int | None = None
    note: str | None = None

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "verdict": self.verdict.to_json(),
            "method": self.method,
            "witness": self.witness,
            "orbit_overlap": self.orbit_overlap,
            "stab_i": self.stab_i,
            "stab_j": self.stab_j,
            "stab_gcd": self.stab_gcd,
            "stab_intersection": self.stab_intersection,
            "parabolic_order": self.parabolic_order,
            "intersection_order": self.intersection_order,
            "note": self.note,
        }


@dataclass(frozen=True)
class IPReport:
    index_set: tuple[int, ...]
    verdict: Verdict
    pairs: tuple[PairCheck, ...] = ()
    residues: tuple[tuple[int, "IPReport"], ...] = ()
    note: str | None = None

    def pair(self, i: int, j: int) -> PairCheck:
        a, b = min(i, j), max(i, j)
        for p in self.pairs:
            if (p.i, p.j) == (a, b):
                return p
        raise KeyError((i, j))

    def residue(self, i: int) -> "IPReport":
        for j, rep in self.residues:
            if j == i:
                return rep
        raise KeyError(i)

    def to_json(self) -> dict:
        return {
            "index_set": list(self.index_set),
            "verdict": self.verdict.to_json(),
            "pairs": [p.to_json() for p in self.pairs],
            "residues": {str(i): r.to_json() for i, r in self.residues},
            "note": self.note,
        }


def _orbit_data(group: PermutationGroup):
    orbits, point_to_id = group.orbit_partition()
    sizes = [len(o) for o in orbits]
    return point_to_id, sizes, group.order()


def ip_pair_stats(g: TypedGroup, i: int, j: int, x: int) -> dict:
    """The certificate ingredients at one vertex: orbit overlap o, stabilizer
    orders s_i and s_j, their gcd, and the target parabolic order."""
    gi = g.omitting(i)
    gj = g.omitting(j)
    id_i, sizes_i, order_i = _orbit_data(gi)
    id_j, sizes_j, order_j = _orbit_data(gj)
    o = sum(
        1 for v in range(g.degree) if id_i[v] == id_i[x] and id_j[v] == id_j[x]
    )
    s_i = order_i // sizes_i[id_i[x]]
    s_j = order_j // sizes_j[id_j[x]]
    return {
        "orbit_overlap": o,
        "stab_i": s_i,
        "stab_j": s_j,
        "stab_gcd": gcd(s_i, s_j),
        "parabolic_order": g.omitting(i, j).order(),
    }


def ip_pair_certificate(
    graph: ColoredGraph | None,
    g: TypedGroup,
    i: int,
    j: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> PairCheck:
    """Scan vertices for a sufficient certificate that G_i and G_j meet in
    exactly their common parabolic.  Tries the gcd inequality at every vertex
    first, then the exact stabilizer-intersection inequality.  Exhausted scan
    is Inconclusive."""
    if graph is not None and graph.d != g.degree:
        raise ValueError("graph and group degrees differ")
    gi = g.omitting(i)
    gj = g.omitting(j)
    target = g.omitting(i, j).order()
    id_i, sizes_i, order_i = _orbit_data(gi)
    id_j, sizes_j, order_j = _orbit_data(gj)

    overlap: dict[tuple[int, int], int] = {}
    for v in range(g.degree):
        key = (id_i[v], id_j[v])
        overlap[key] = overlap.get(key, 0) + 1

    def stats(x: int) -> tuple[int, int, int]:
        o = overlap[(id_i[x], id_j[x])]
        s_i = order_i // sizes_i[id_i[x]]
        s_j = order_j // sizes_j[id_j[x]]
        return o, s_i, s_j

    for x in range(g.degree):
        o, s_i, s_j = stats(x)
        if o * gcd(s_i, s_j) <= target:
            return PairCheck(
                i, j, Verdict.PASS, method="gcd", witness=x,
                orbit_overlap=o, stab_i=s_i, stab_j=s_j,
                stab_gcd=gcd(s_i, s_j), parabolic_order=target,
            )

    budget_hit = False
    for x in range(g.degree):
        o, s_i, s_j = stats(x)
        if o > target:
            continue
        stab_i = gi.point_stabilizer(x)
        stab_j = gj.point_stabilizer(x)
        try:
            inter = stab_i.subgroup_intersection(stab_j, node_budget=node_budget)
        except SearchBudgetExceeded:
            budget_hit = True
            continue
        m = inter.order()
        if o * m <= target:
            return PairCheck(
                i, j, Verdict.PASS, method="stabilizer_counting", witness=x,
                orbit_overlap=o, stab_i=s_i, stab_j=s_j,
                stab_gcd=gcd(s_i, s_j), stab_intersection=m,
                parabolic_order=target,
            )
    return PairCheck(
        i, j, Verdict.INCONCLUSIVE, parabolic_order=target,
        note="certificate scan exhausted" + (" (stabilizer budget hit)" if budget_hit else ""),
    )


def _pair_exact(
    g: TypedGroup, i: int, j: int, node_budget: int
) -> PairCheck:
    gi = g.omitting(i)
    gj = g.omitting(j)
    target = g.omitting(i, j).order()
    try:
        inter = gi.subgroup_intersection(gj, node_budget=node_budget)
    except SearchBudgetExceeded:
        return PairCheck(
            i, j, Verdict.INCONCLUSIVE, method="exact_intersection",
            parabolic_order=target, note="intersection search budget exhausted",
        )
    got = inter.order()
    if got == target:
        return PairCheck(
            i, j, Verdict.PASS, method="exact_intersection",
            parabolic_order=target, intersection_order=got,
        )
    if got > target:
        return PairCheck(
            i, j, Verdict.FAIL, method="exact_intersection",
            parabolic_order=target, intersection_order=got,
            note="intersection exceeds common parabolic by factor %d" % (got // target),
        )
    raise RuntimeError(
        "intersection smaller than common parabolic; inconsistent group data"
    )  # pragma: no cover


def verify_intersection_property(
    graph: ColoredGraph | None,
    g: TypedGroup,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> IPReport:
    """Full recursive check.  Rank <= 1 passes outright; rank 2 requires the
    two generators to differ; higher ranks verify every residue first, then
    every pair of types (certificates, then exact fallback)."""
    key = frozenset(g.index_set)
    cached = g._caches["ip"].get(key)
    if cached is not None:
        return cached

    types = g.index_set
    if g.rank <= 1:
        report = IPReport(types, Verdict.PASS)
    elif g.rank == 2:
        a, b = types
        if g.generator(a) == g.generator(b):
            pair = PairCheck(
                a, b, Verdict.FAIL, method="distinct_generators",
                note="generators coincide",
            )
        else:
            pair = PairCheck(a, b, Verdict.PASS, method="distinct_generators")
        report = IPReport(types, pair.verdict, pairs=(pair,))
    else:
        residues = tuple(
            (i, verify_intersection_property(graph, g.residue(i), node_budget))
            for i in types
        )
        pairs = []
        for a in range(len(types)):
            for b in range(a + 1, len(types)):
                i, j = types[a], types[b]
                check = ip_pair_certificate(graph, g, i, j, node_budget)
                if check.verdict is not Verdict.PASS:
                    check = _pair_exact(g, i, j, node_budget)
                pairs.append(check)
        verdict = combine_verdicts(
            [r.verdict for _, r in residues] + [p.verdict for p in pairs]
        )
        report = IPReport(types, verdict, pairs=tuple(pairs), residues=residues)

    g._caches["ip"][key] = report
    return report
