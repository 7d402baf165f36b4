"""Flag-transitivity verification.

For rank 3 and above, transitivity on the flags of each three-element type
subset is what needs establishing (lower ranks are automatic).  Given a
distinguished first type i, the condition for the subset {i, j, k} is the
product-set equality

    G_i  meet  G_j G_k  =  (G_i meet G_j)(G_i meet G_k)

whose right side has order |G_{i,j}| |G_{i,k}| / |G_{i,j,k}| once the
intersection property holds.  The left side always contains the right, so
exhibiting a matching upper bound settles it.  Two mechanisms:

* vertex certificate: at some vertex x,
      |xG_i meet xG_jG_k| * |stab_{G_i}(x)|  <=  target
  (sufficient only; scans all vertices, then gives up);

* coset-representative analysis: decompose G_j G_k over a left transversal R
  of G_{j,k} in G_j, classify each G_i meet (alpha G_k) as empty (a vertex
  whose G_i-orbit misses the (x alpha) G_k-orbit) or non-empty (an explicit
  witness element), and compare the non-empty count against the target.
  Representatives that differ by a left G_i factor share their status, so
  only one per class is classified.

The distinguished index matters: a check may succeed for one ordering of the
subset and not another, while the underlying transitivity condition itself
is ordering-independent.  All orderings are therefore tried, and the report
records which one succeeded.  Ranks above 3 additionally recurse into every
maximal residue.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Sequence

from .colored_graphs import ColoredGraph
from .intersection_property import IPReport, TypedGroup, verify_intersection_property
from .permutations import Permutation, TransversalCapExceeded
from .verdicts import Verdict, combine_verdicts

__all__ = [
    "TripleEvidence",
    "TripleCheck",
    "FTReport",
    "ft_triple_stats",
    "ft_triple_certificate",
    "ft_triple_cosetrep",
    "verify_flag_transitive",
]

ENUMERATION_CAP = 10**5
WITNESS_TRIALS = 10**6
WITNESS_SEED = 0x5EED


@dataclass(frozen=True)
class TripleEvidence:
    """Classification of G_i meet (alpha G_k) for one class of coset
    representatives.  ``word`` is alpha spelled in type indices (left to
    right product); ``equivalent_words`` are the other representatives
    settled by this one via a left G_i factor."""

    word: tuple[int, ...]
    status: str  # "nonempty" | "empty" | "unresolved"
    equivalent_words: tuple[tuple[int, ...], ...] = ()
    witness: Permutation | None = None
    empty_vertex: int | None = None

    @property
    def class_size(self) -> int:
        return 1 + len(self.equivalent_words)

    def to_json(self) -> dict:
        return {
            "word": list(self.word),
            "status": self.status,
            "equivalent_words": [list(w) for w in self.equivalent_words],
            "witness": self.witness.to_json() if self.witness else None,
            "empty_vertex": self.empty_vertex,
        }


@dataclass(frozen=True)
class TripleCheck:
    subset: tuple[int, int, int]
    ordering: tuple[int, int, int]
    verdict: Verdict
    method: str | None = None  # "vertex_certificate" | "coset_representatives"
    witness: int | None = None
    orbit_overlap: int | None = None
    stab_i: int | None = None
    order_ij: int | None = None
    order_ik: int | None = None
    order_ijk: int | None = None
    target: int | None = None
    nonempty_count: int | None = None
    evidence: tuple[TripleEvidence, ...] = ()
    note: str | None = None

    def to_json(self) -> dict:
        return {
            "subset": list(self.subset),
            "ordering": list(self.ordering),
            "verdict": self.verdict.to_json(),
            "method": self.method,
            "witness": self.witness,
            "orbit_overlap": self.orbit_overlap,
            "stab_i": self.stab_i,
            "order_ij": self.order_ij,
            "order_ik": self.order_ik,
            "order_ijk": self.order_ijk,
            "target": self.target,
            "nonempty_count": self.nonempty_count,
            "evidence": [e.to_json() for e in self.evidence],
            "note": self.note,
        }


@dataclass(frozen=True)
class FTReport:
    index_set: tuple[int, ...]
    verdict: Verdict
    triples: tuple[TripleCheck, ...] = ()
    residues: tuple[tuple[int, "FTReport"], ...] = ()
    ip: IPReport | None = None
    note: str | None = None

    def triple(self, *subset: int) -> TripleCheck:
        want = tuple(sorted(subset))
        for t in self.triples:
            if t.subset == want:
                return t
        raise KeyError(want)

    def residue(self, i: int) -> "FTReport":
        for j, rep in self.residues:
            if j == i:
                return rep
        raise KeyError(i)

    def to_json(self) -> dict:
        return {
            "index_set": list(self.index_set),
            "verdict": self.verdict.to_json(),
            "triples": [t.to_json() for t in self.triples],
            "residues": {str(i): r.to_json() for i, r in self.residues},
            "ip": self.ip.to_json() if self.ip else None,
            "note": self.note,
        }


def _parabolic_orders(g: TypedGroup, i: int, j: int, k: int) -> tuple[int, int, int, int]:
    o_ij = g.omitting(i, j).order()
    o_ik = g.omitting(i, k).order()
    o_ijk = g.omitting(i, j, k).order()
    if (o_ij * o_ik) % o_ijk:
        raise RuntimeError("parabolic orders inconsistent")  # pragma: no cover
    return o_ij, o_ik, o_ijk, (o_ij * o_ik) // o_ijk


def _product_overlap_table(g: TypedGroup, i: int, j: int, k: int):
    """count[(a, b)] = number of vertices whose G_i-orbit id is a and that
    lie in yG_k for some y with G_j-orbit id b.  Then the overlap
    |xG_i meet xG_jG_k| is count[(id_i[x], id_j[x])]."""
    _, id_i = g.omitting(i).orbit_partition()
    orbits_j, id_j = g.omitting(j).orbit_partition()
    orbits_k, id_k = g.omitting(k).orbit_partition()
    k_ids_of_j: list[set[int]] = [set() for _ in orbits_j]
    for v in range(g.degree):
        k_ids_of_j[id_j[v]].add(id_k[v])
    count: dict[tuple[int, int], int] = {}
    for b, kset in enumerate(k_ids_of_j):
        mark = [kid in kset for kid in range(len(orbits_k))]
        for v in range(g.degree):
            if mark[id_k[v]]:
                key = (id_i[v], b)
                count[key] = count.get(key, 0) + 1
    return id_i, id_j, count


def ft_triple_stats(g: TypedGroup, i: int, j: int, k: int, x: int) -> dict:
    """Certificate ingredients at one vertex for the ordered triple:
    the product-orbit overlap o, |stab_{G_i}(x)|, and the parabolic orders
    making up the target."""
    gi = g.omitting(i)
    id_i, id_j, count = _product_overlap_table(g, i, j, k)
    orbits_i, _ = gi.orbit_partition()
    o_ij, o_ik, o_ijk, target = _parabolic_orders(g, i, j, k)
    return {
        "orbit_overlap": count[(id_i[x], id_j[x])],
        "stab_i": gi.order() // len(orbits_i[id_i[x]]),
        "order_ij": o_ij,
        "order_ik": o_ik,
        "order_ijk": o_ijk,
        "target": target,
    }


def ft_triple_certificate(
    graph: ColoredGraph | None, g: TypedGroup, triple: Sequence[int]
) -> TripleCheck:
    """Vertex-scan certificate for the ordered triple (i, j, k).  Pass on the
    first vertex satisfying the inequality; Inconclusive when none does."""
    i, j, k = triple
    if graph is not None and graph.d != g.degree:
        raise ValueError("graph and group degrees differ")
    subset = tuple(sorted((i, j, k)))
    gi = g.omitting(i)
    orbits_i, id_i_part = gi.orbit_partition()
    id_i, id_j, count = _product_overlap_table(g, i, j, k)
    o_ij, o_ik, o_ijk, target = _parabolic_orders(g, i, j, k)
    order_i = gi.order()
    for x in range(g.degree):
        o = count[(id_i[x], id_j[x])]
        s_i = order_i // len(orbits_i[id_i[x]])
        if o * s_i <= target:
            return TripleCheck(
                subset, (i, j, k), Verdict.PASS, method="vertex_certificate",
                witness=x, orbit_overlap=o, stab_i=s_i,
                order_ij=o_ij, order_ik=o_ik, order_ijk=o_ijk, target=target,
            )
    return TripleCheck(
        subset, (i, j, k), Verdict.INCONCLUSIVE,
        order_ij=o_ij, order_ik=o_ik, order_ijk=o_ijk, target=target,
        note="vertex certificate scan exhausted",
    )


def _nonempty_witness(
    g: TypedGroup,
    i: int,
    k: int,
    alpha: Permutation,
    enum_cap: int,
    trials: int,
    seed: int,
) -> tuple[Permutation | None, bool]:
    """Search for an element of G_i meet (alpha G_k): enumerate G_k when it
    is small enough, otherwise walk random words in its generators.  Returns
    (witness, exhaustive); an exhaustive search that found nothing proves
    the set empty."""
    gi = g.omitting(i)
    gk = g.omitting(k)
    if gk.order() <= enum_cap:
        for h in gk.elements():
            w = alpha * h
            if gi.contains(w):
                return w, True
        return None, True
    rng = random.Random(seed)
    gens = gk.generators
    h = gk.identity()
    for _ in range(trials):
        h = h * gens[rng.randrange(len(gens))]
        w = alpha * h
        if gi.contains(w):
            return w, False
    return None, False


def ft_triple_cosetrep(
    g: TypedGroup,
    triple: Sequence[int],
    graph: ColoredGraph | None = None,
    enum_cap: int = ENUMERATION_CAP,
    witness_trials: int = WITNESS_TRIALS,
    seed: int = WITNESS_SEED,
) -> TripleCheck:
    """Coset-representative analysis for the ordered triple (i, j, k)."""
    i, j, k = triple
    if graph is not None and graph.d != g.degree:
        raise ValueError("graph and group degrees differ")
    subset = tuple(sorted((i, j, k)))
    o_ij, o_ik, o_ijk, target = _parabolic_orders(g, i, j, k)
    expected_nonempty = o_ij // o_ijk

    gi = g.omitting(i)
    gj = g.omitting(j)
    gjk = g.omitting(j, k)
    try:
        reps = gj.coset_transversal_with_words(gjk, side="left")
    except TransversalCapExceeded:
        return TripleCheck(
            subset, (i, j, k), Verdict.INCONCLUSIVE,
            order_ij=o_ij, order_ik=o_ik, order_ijk=o_ijk, target=target,
            note="representative transversal exceeded cap",
        )
    # transversal words index gj's generator list; respell in type indices
    gj_types = sorted(set(g.index_set) - {j})
    reps = [(p, tuple(gj_types[t] for t in word)) for p, word in reps]

    _, id_i = gi.orbit_partition()
    _, id_k = g.omitting(k).orbit_partition()
    pair_present: set[tuple[int, int]] = set()
    for v in range(g.degree):
        pair_present.add((id_i[v], id_k[v]))

    # group representatives into left-G_i classes; the first in transversal
    # order leads its class
    leaders: list[tuple[Permutation, tuple[int, ...], list[tuple[int, ...]]]] = []
    for p, word in reps:
        for lp, lword, members in leaders:
            if gi.contains(p * lp.inverse()):
                members.append(word)
                break
        else:
            leaders.append((p, word, []))

    evidence: list[TripleEvidence] = []
    nonempty = 0
    unresolved = 0
    for p, word, members in leaders:
        ev: TripleEvidence | None = None
        if gi.contains(p):
            ev = TripleEvidence(word, "nonempty", tuple(members), witness=p)
        else:
            for x in range(g.degree):
                if (id_i[x], id_k[p.apply(x)]) not in pair_present:
                    ev = TripleEvidence(word, "empty", tuple(members), empty_vertex=x)
                    break
            if ev is None:
                w, exhaustive = _nonempty_witness(
                    g, i, k, p, enum_cap, witness_trials, seed
                )
                if w is not None:
                    ev = TripleEvidence(word, "nonempty", tuple(members), witness=w)
                elif exhaustive:
                    ev = TripleEvidence(word, "empty", tuple(members))
        if ev is None:
            ev = TripleEvidence(word, "unresolved", tuple(members))
            unresolved += 1
        elif ev.status == "nonempty":
            nonempty += ev.class_size
        evidence.append(ev)

    common = dict(
        order_ij=o_ij, order_ik=o_ik, order_ijk=o_ijk, target=target,
        nonempty_count=nonempty, evidence=tuple(evidence),
    )
    if unresolved:
        return TripleCheck(
            subset, (i, j, k), Verdict.INCONCLUSIVE,
            method="coset_representatives",
            note="%d representative classes unresolved" % unresolved, **common,
        )
    if nonempty == expected_nonempty:
        return TripleCheck(
            subset, (i, j, k), Verdict.PASS, method="coset_representatives", **common
        )
    if nonempty > expected_nonempty:
        return TripleCheck(
            subset, (i, j, k), Verdict.FAIL, method="coset_representatives",
            note="product set larger than the transitivity bound "
            "(%d nonempty classes of %d expected)" % (nonempty, expected_nonempty),
            **common,
        )
    return TripleCheck(
        subset, (i, j, k), Verdict.INCONCLUSIVE, method="coset_representatives",
        note="nonempty count below the containment bound; "
        "check the intersection-property premise", **common,
    )


def _check_subset(
    graph: ColoredGraph | None,
    g: TypedGroup,
    subset: tuple[int, int, int],
    enum_cap: int,
    witness_trials: int,
    seed: int,
) -> TripleCheck:
    cache = g._caches.setdefault("ft_triple", {})
    key = (frozenset(g.index_set), subset)
    cached = cache.get(key)
    if cached is not None:
        return cached

    orderings = [
        (i, j, k)
        for i in subset
        for (j, k) in permutations([t for t in subset if t != i])
    ]
    result: TripleCheck | None = None
    for ordering in orderings:
        check = ft_triple_certificate(graph, g, ordering)
        if check.verdict is Verdict.PASS:
            result = check
            break
    if result is None:
        for ordering in orderings:
            check = ft_triple_cosetrep(
                g, ordering, graph, enum_cap, witness_trials, seed
            )
            if check.verdict in (Verdict.PASS, Verdict.FAIL):
                # the transitivity condition itself is ordering-independent,
                # so the first conclusive ordering settles the subset
                result = check
                break
            result = check
    cache[key] = result
    return result


def verify_flag_transitive(
    graph: ColoredGraph | None,
    g: TypedGroup,
    ip_report: IPReport | None = None,
    node_budget: int = 10_000_000,
    enum_cap: int = ENUMERATION_CAP,
    witness_trials: int = WITNESS_TRIALS,
    seed: int = WITNESS_SEED,
) -> FTReport:
    """Full recursive check.  Rank <= 2 passes outright.  Rank 3 checks its
    single type triple; higher ranks check every triple and recurse into
    every maximal residue.  Requires the intersection property (verified
    here if no report is supplied)."""
    if ip_report is None:
        ip_report = verify_intersection_property(graph, g, node_budget)
    if ip_report.verdict is not Verdict.PASS:
        return FTReport(
            g.index_set, Verdict.INCONCLUSIVE, ip=ip_report,
            note="intersection property not established (%s)" % ip_report.verdict,
        )

    key = frozenset(g.index_set)
    cache = g._caches["ft"]
    cached = cache.get(key)
    if cached is not None:
        return cached

    if g.rank <= 2:
        report = FTReport(g.index_set, Verdict.PASS, ip=ip_report)
    else:
        triples = tuple(
            _check_subset(graph, g, subset, enum_cap, witness_trials, seed)
            for subset in combinations(g.index_set, 3)
        )
        residues: tuple[tuple[int, FTReport], ...] = ()
        if g.rank >= 4:
            residues = tuple(
                (
                    i,
                    verify_flag_transitive(
                        graph, g.residue(i), None, node_budget,
                        enum_cap, witness_trials, seed,
                    ),
                )
                for i in g.index_set
            )
        verdict = combine_verdicts(
            [t.verdict for t in triples] + [r.verdict for _, r in residues]
        )
        report = FTReport(g.index_set, verdict, triples, residues, ip=ip_report)
    cache[key] = report
    return report
