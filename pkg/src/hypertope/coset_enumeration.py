"""Todd-Coxeter coset enumeration over Coxeter presentations.

Synthesizes the base permutation actions used by the catalogue (a reflection
group acting on the faces of a dodecahedron, on the cells of a 120-cell) and
produces shortest coset-representative words for the flag-transitivity
arguments.

Only Coxeter presentations are supported: generators are involutions, the
defining relators are (r_i r_j)^{m[i][j]}.  The involution relators are baked
into the table: setting c . i = d always also sets d . i = c.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .colored_graphs import ColoredGraph
from .permutations import Permutation, PermutationGroup

__all__ = [
    "CoxeterMatrix",
    "CosetTable",
    "EnumerationCapExceeded",
    "enumerate_cosets",
    "coset_action",
    "parabolic_transversal_words",
    "coxeter_group_order",
]

DEFAULT_COSET_CAP = 10**6


class EnumerationCapExceeded(Exception):
    """The enumeration defined more live cosets than the cap allows; the
    subgroup index is infinite or just too large for the budget."""

    def __init__(self, message: str, live: int):
        super().__init__(message)
        self.live = live


class CoxeterMatrix:
    """A Coxeter presentation: m[i][j] is the order of r_i r_j.

    Symmetric, diagonal 1, off-diagonal at least 2 (2 means the generators
    commute, i.e. no branch in the diagram).
    """

    def __init__(self, entries: Sequence[Sequence[int]]):
        n = len(entries)
        m = tuple(tuple(row) for row in entries)
        for i in range(n):
            if len(m[i]) != n:
                raise ValueError("matrix is not square")
            if m[i][i] != 1:
                raise ValueError("diagonal entry m[%d][%d] must be 1" % (i, i))
            for j in range(n):
                if i != j:
                    if m[i][j] < 2:
                        raise ValueError("off-diagonal entry m[%d][%d] must be >= 2" % (i, j))
                    if m[i][j] != m[j][i]:
                        raise ValueError("matrix is not symmetric")
        self.entries = m

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def __eq__(self, other) -> bool:
        return isinstance(other, CoxeterMatrix) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return "CoxeterMatrix(%r)" % (self.entries,)

    @classmethod
    def from_pairs(cls, rank: int, pairs: dict[tuple[int, int], int], default: int = 2) -> "CoxeterMatrix":
        """Build from branch labels; unmentioned pairs get ``default`` (2 =
        commuting, the absent-branch convention)."""
        m = [[default] * rank for _ in range(rank)]
        for i in range(rank):
            m[i][i] = 1
        for (i, j), p in pairs.items():
            m[i][j] = p
            m[j][i] = p
        return cls(m)

    @classmethod
    def path(cls, labels: Sequence[int]) -> "CoxeterMatrix":
        """Linear diagram: label k sits between nodes k and k+1."""
        return cls.from_pairs(len(labels) + 1, {(i, i + 1): p for i, p in enumerate(labels)})

    @classmethod
    def cycle(cls, labels: Sequence[int]) -> "CoxeterMatrix":
        """Cycle diagram: labels p_1..p_n on successive edges, edge n closing
        the cycle between the last node and node 0."""
        n = len(labels)
        pairs = {(i, (i + 1) % n): p for i, p in enumerate(labels)}
        return cls.from_pairs(n, pairs)

    def submatrix(self, subset: Sequence[int]) -> "CoxeterMatrix":
        return CoxeterMatrix([[self.entries[i][j] for j in subset] for i in subset])

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    @classmethod
    def from_json(cls, data) -> "CoxeterMatrix":
        return cls(data)


class CosetTable:
    """A closed coset table: ``action[i][c]`` is the image of coset ``c``
    under generator ``i``.  Coset 0 is the subgroup itself.  Numbering is
    standardized (breadth-first from coset 0, generators in index order), so
    equal enumerations give identical tables."""

    def __init__(self, rank: int, action: Sequence[Sequence[int]]):
        self.rank = rank
        self.action = tuple(tuple(col) for col in action)
        self.n_cosets = len(self.action[0]) if rank else 1

    def generator_permutation(self, i: int) -> Permutation:
        return Permutation(self.action[i])

    def to_group(self) -> PermutationGroup:
        return PermutationGroup(
            self.n_cosets,
            [self.generator_permutation(i) for i in range(self.rank)],
            labels=["rho%d" % i for i in range(self.rank)],
        )

    def to_colored_graph(self) -> ColoredGraph:
        """The Schreier coset graph as an edge-coloured graph: colour-i edges
        are the 2-cycles of generator i's action."""
        edges = []
        for i in range(self.rank):
            col = self.action[i]
            for c in range(self.n_cosets):
                if col[c] > c:
                    edges.append((i, c, col[c]))
        return ColoredGraph.from_edges(self.n_cosets, self.rank, edges)

    def transversal_words(self) -> list[tuple[int, ...]]:
        """Shortest word reaching each coset from coset 0, breadth-first with
        generators in index order; index w = coset number (standardized)."""
        words: list[tuple[int, ...] | None] = [None] * self.n_cosets
        words[0] = ()
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for i in range(self.rank):
                d = self.action[i][c]
                if words[d] is None:
                    words[d] = words[c] + (i,)
                    queue.append(d)
        assert all(w is not None for w in words)
        return words  # type: ignore[return-value]


def _rep(p: list[int], c: int) -> int:
    root = c
    while p[root] != root:
        root = p[root]
    while p[c] != c:
        p[c], c = root, p[c]
    return root


def enumerate_cosets(
    matrix: CoxeterMatrix,
    parabolic: Sequence[int] = (),
    cap: int = DEFAULT_COSET_CAP,
) -> CosetTable:
    """HLT-style Todd-Coxeter over the subgroup generated by the listed
    generator indices.  Raises EnumerationCapExceeded (with the live-coset
    count) if the table would outgrow ``cap``."""
    n = matrix.rank
    for s in parabolic:
        if not 0 <= s < n:
            raise ValueError("parabolic index %d out of range" % s)

    # (i, i) relators force every generator column to close even at rank 1;
    # for the pair relators the symmetric table handles the involutions.
    relators = [(i, i) for i in range(n)] + [
        ((i, j) * matrix[i, j])
        for i in range(n)
        for j in range(i + 1, n)
    ]

    table: list[list[int | None]] = [[None] * n]
    p: list[int] = [0]
    dead = 0
    queue: deque[int] = deque()

    def define(c: int, i: int) -> int:
        nonlocal dead
        if len(table) - dead >= cap:
            raise EnumerationCapExceeded(
                "coset cap %d exceeded" % cap, live=len(table) - dead
            )
        d = len(table)
        table.append([None] * n)
        p.append(d)
        table[c][i] = d
        table[d][i] = c
        return d

    def merge(a: int, b: int) -> None:
        a, b = _rep(p, a), _rep(p, b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        nonlocal dead
        p[b] = a
        dead += 1
        queue.append(b)

    def set_entry(a: int, i: int, b: int) -> None:
        """Record a·i = b (and b·i = a), merging on clash."""
        ea = table[a][i]
        if ea is not None:
            merge(ea, b)
            return
        eb = table[b][i]
        if eb is not None:
            merge(eb, a)
            return
        table[a][i] = b
        table[b][i] = a

    def process_coincidences() -> None:
        while queue:
            e = queue.popleft()
            row = table[e]
            for i in range(n):
                d = row[i]
                if d is None:
                    continue
                # detach the dead coset's edge, then re-install on the survivors
                if table[d][i] == e:
                    table[d][i] = None
                row[i] = None
                mu, nu = _rep(p, e), _rep(p, d)
                set_entry(mu, i, nu)

    def scan_and_fill(c: int, word: tuple[int, ...]) -> None:
        f, fi = c, 0
        b, bi = c, len(word) - 1
        while True:
            # forward as far as defined
            while fi <= bi and table[f][word[fi]] is not None:
                f = table[f][word[fi]]
                fi += 1
            if fi > bi:
                if f != b:
                    merge(f, b)
                return
            # backward as far as defined
            while bi >= fi and table[b][word[bi]] is not None:
                b = table[b][word[bi]]
                bi -= 1
            if bi < fi:
                if f != b:
                    merge(f, b)
                return
            if bi == fi:
                # gap of one: deduction
                set_entry(f, word[fi], b)
                return
            # fill the leftmost gap and continue scanning forward
            define(f, word[fi])

    for s in parabolic:
        table[0][s] = 0

    c = 0
    while c < len(table):
        if _rep(p, c) != c:
            c += 1
            continue
        for word in relators:
            scan_and_fill(c, word)
            process_coincidences()
            if _rep(p, c) != c:
                break  # this coset just died; move on
        c += 1

    # compress to live cosets, then standardize by breadth-first renumbering
    live = [c for c in range(len(table)) if _rep(p, c) == c]
    number = {c: k for k, c in enumerate(live)}
    compact = [[number[_rep(p, table[c][i])] for c in live] for i in range(n)]

    order: list[int] = [number[_rep(p, 0)]]
    seen = {order[0]}
    queue2 = deque(order)
    while queue2:
        x = queue2.popleft()
        for i in range(n):
            y = compact[i][x]
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue2.append(y)
    if len(order) != len(live):
        raise RuntimeError("coset table is not connected")  # pragma: no cover
    relabel = {old: new for new, old in enumerate(order)}
    action = [
        [relabel[compact[i][order[new]]] for new in range(len(live))]
        for i in range(n)
    ]
    return CosetTable(n, action)


def coset_action(table: CosetTable) -> ColoredGraph:
    """The coset table as an edge-coloured graph (the Schreier graph of the
    enumeration).  A one-coset table yields a single bare vertex, which the
    graph validator flags as degenerate."""
    return table.to_colored_graph()


def parabolic_transversal_words(
    matrix: CoxeterMatrix,
    parabolic: Sequence[int],
    cap: int = DEFAULT_COSET_CAP,
) -> list[tuple[int, ...]]:
    """Minimal-length coset-representative words for the given parabolic
    subgroup, one per coset, sorted shortest-first with ties broken by
    generator index; the empty word (identity) comes first.

    Reading a word left to right as a product gives a LEFT-coset
    representative (w * parabolic), the form the flag-transitivity arguments
    consume; reversing it gives the right-coset word.
    """
    t = enumerate_cosets(matrix, parabolic, cap=cap)
    words = [tuple(reversed(w)) for w in t.transversal_words()]
    return sorted(words, key=lambda w: (len(w), w))


def coxeter_group_order(matrix: CoxeterMatrix, cap: int = DEFAULT_COSET_CAP) -> int:
    """Order of the Coxeter group, by enumerating over the trivial subgroup.
    Only terminates for finite (spherical) diagrams; the cap guards the rest."""
    return enumerate_cosets(matrix, (), cap=cap).n_cosets
