"""Coset incidence geometries and their hypertope audits.

A group with typed involution generators has, for each type i, a maximal
parabolic G_i (generated by all the other types).  The geometry's type-i
elements are the right cosets of G_i, and two elements are incident when
the cosets intersect:  G_i g1  meets  G_j g2  exactly when g1 g2^{-1} lies
in the product set G_i G_j.  The identity cosets are mutually incident and
form the designated base chamber.

Flags are sets of pairwise incident elements with distinct types, stored as
type-sorted tuples of (type, element index).  Chambers are full-rank flags.
Two audits, both report-valued:

* thinness: every corank-1 flag extends to exactly two chambers;
* residual connectedness: for every flag missing at least two types
  (including the empty flag), the incidence graph of its residue is
  connected.

Product membership is decided against the smaller of the two parabolics:
its elements are enumerated once per type pair and reduced to canonical
coset keys of the larger, so each incidence test is a dictionary lookup.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .intersection_property import TypedGroup
from .permutations import Permutation, PermutationGroup

__all__ = [
    "GeometryCapExceeded",
    "IncidenceSystem",
    "ThinnessReport",
    "ResidualConnectivityReport",
    "build_geometry",
    "enumerate_chambers",
    "check_thin",
    "check_residually_connected",
    "geometry_to_dot",
]

DEFAULT_GEOMETRY_CAP = 10**6

Element = tuple[int, int]  # (type, index)
Flag = tuple[Element, ...]  # sorted by type


class GeometryCapExceeded(Exception):
    """Materializing the geometry would exceed the caller's cap.  Carries
    the per-type element counts computed from group orders."""

    def __init__(self, message: str, indices: dict[int, int]):
        super().__init__(message)
        self.indices = dict(indices)


class IncidenceSystem:
    """Typed elements with a symmetric cross-type incidence relation.

    ``counts[i]`` is the number of type-i elements; ``reps[i][a]`` the coset
    representative behind element (i, a) when the system was built from a
    group (fixture-built systems carry no representatives)."""

    def __init__(
        self,
        types: Sequence[int],
        counts: dict[int, int],
        pairs: Iterable[tuple[Element, Element]],
        reps: dict[int, list[Permutation]] | None = None,
    ):
        self.types = tuple(sorted(types))
        if set(counts) != set(self.types):
            raise ValueError("counts must cover exactly the declared types")
        self.counts = dict(counts)
        self.reps = reps
        self._adj: dict[tuple[int, int], list[set[int]]] = {}
        for i in self.types:
            for j in self.types:
                if i != j:
                    self._adj[(i, j)] = [set() for _ in range(self.counts[i])]
        for (i, a), (j, b) in pairs:
            if i == j:
                raise ValueError("incidence between equal types (%d)" % i)
            if not (0 <= a < self.counts[i] and 0 <= b < self.counts[j]):
                raise ValueError("incidence pair out of range: %r" % (((i, a), (j, b)),))
            self._adj[(i, j)][a].add(b)
            self._adj[(j, i)][b].add(a)

    @property
    def rank(self) -> int:
        return len(self.types)

    def n_elements(self, i: int) -> int:
        return self.counts[i]

    def elements(self) -> Iterator[Element]:
        for i in self.types:
            for a in range(self.counts[i]):
                yield (i, a)

    def neighbors(self, i: int, a: int, j: int) -> set[int]:
        """Type-j elements incident to element (i, a)."""
        return self._adj[(i, j)][a]

    def incident(self, e: Element, f: Element) -> bool:
        if e[0] == f[0]:
            return e[1] == f[1]
        return f[1] in self._adj[(e[0], f[0])][e[1]]

    def representative(self, i: int, a: int) -> Permutation:
        if self.reps is None:
            raise ValueError("system was not built from a group")
        return self.reps[i][a]

    def base_chamber(self) -> Flag:
        """The identity cosets, one per type (group-built systems only)."""
        if self.reps is None:
            raise ValueError("system was not built from a group")
        return tuple((i, 0) for i in self.types)

    def incidence_pairs(self) -> list[tuple[Element, Element]]:
        out = []
        for i, j in ((i, j) for i in self.types for j in self.types if i < j):
            for a, bs in enumerate(self._adj[(i, j)]):
                out.extend(((i, a), (j, b)) for b in sorted(bs))
        return out

    def to_json(self) -> dict:
        data = {
            "types": list(self.types),
            "elements": {str(i): self.counts[i] for i in self.types},
            "incidence": [
                [[i, a], [j, b]] for (i, a), (j, b) in self.incidence_pairs()
            ],
        }
        if self.reps is not None:
            data["representatives"] = {
                str(i): [list(p.images) for p in self.reps[i]] for i in self.types
            }
        return data

    @classmethod
    def from_json(cls, data: dict) -> "IncidenceSystem":
        types = [int(i) for i in data["types"]]
        counts = {int(i): int(c) for i, c in data["elements"].items()}
        pairs = [
            ((int(i), int(a)), (int(j), int(b)))
            for (i, a), (j, b) in data["incidence"]
        ]
        reps = None
        if "representatives" in data:
            reps = {
                int(i): [Permutation(images) for images in rows]
                for i, rows in data["representatives"].items()
            }
        return cls(types, counts, pairs, reps)

    def __repr__(self) -> str:
        return "IncidenceSystem(types=%r, elements=%r)" % (
            list(self.types),
            [self.counts[i] for i in self.types],
        )


def _product_membership_keys(
    small: PermutationGroup, large: PermutationGroup, small_on_left: bool
):
    """Canonical keys marking the product set (small on the stated side of
    large).  With the small factor on the left the product is a union of
    left cosets a·L, recognized through right-coset keys of inverses."""
    if small_on_left:
        keys = {large.min_coset_element(a.inverse()).images for a in small.elements()}
        return keys, lambda z: large.min_coset_element(z.inverse()).images
    keys = {large.min_coset_element(b).images for b in small.elements()}
    return keys, lambda z: large.min_coset_element(z).images


def build_geometry(g: TypedGroup, cap: int = DEFAULT_GEOMETRY_CAP) -> IncidenceSystem:
    """Materialize the coset geometry of ``g``.  Refuses (with the computed
    per-type element counts) before enumerating anything if some type has
    more than ``cap`` elements."""
    order = g.group().order()
    indices = {i: order // g.omitting(i).order() for i in g.index_set}
    if any(n > cap for n in indices.values()):
        raise GeometryCapExceeded(
            "element counts %r exceed cap %d" % (indices, cap), indices
        )

    full = g.group()
    reps: dict[int, list[Permutation]] = {}
    for i in g.index_set:
        transversal = full.coset_transversal(g.omitting(i), cap=cap + 1)
        if len(transversal) != indices[i]:
            raise RuntimeError(
                "type %d transversal size %d != index %d"
                % (i, len(transversal), indices[i])
            )  # pragma: no cover
        reps[i] = transversal

    pairs: list[tuple[Element, Element]] = []
    for ia, i in enumerate(g.index_set):
        for j in g.index_set[ia + 1:]:
            gi, gj = g.omitting(i), g.omitting(j)
            if gi.order() <= gj.order():
                keys, key_of = _product_membership_keys(gi, gj, small_on_left=True)
            else:
                keys, key_of = _product_membership_keys(gj, gi, small_on_left=False)
            inv_j = [r.inverse() for r in reps[j]]
            for a, ra in enumerate(reps[i]):
                for b, rb_inv in enumerate(inv_j):
                    if key_of(ra * rb_inv) in keys:
                        pairs.append(((i, a), (j, b)))
    return IncidenceSystem(g.index_set, indices, pairs, reps)


def _extensions(s: IncidenceSystem, flag: Flag, j: int) -> set[int]:
    """Type-j elements incident to every element of the flag."""
    out: set[int] | None = None
    for i, a in flag:
        cand = s.neighbors(i, a, j)
        out = set(cand) if out is None else out & cand
        if not out:
            return set()
    if out is None:
        return set(range(s.n_elements(j)))
    return out


def _flags_over(s: IncidenceSystem, types: tuple[int, ...]) -> Iterator[Flag]:
    """All flags with exactly the given (sorted) types, in lexicographic
    element order."""

    def extend(flag: Flag, pos: int) -> Iterator[Flag]:
        if pos == len(types):
            yield flag
            return
        j = types[pos]
        for b in sorted(_extensions(s, flag, j)):
            yield from extend(flag + ((j, b),), pos + 1)

    yield from extend((), 0)


def enumerate_chambers(s: IncidenceSystem, cap: int = DEFAULT_GEOMETRY_CAP) -> list[Flag]:
    """All full-rank flags, deterministically ordered."""
    chambers: list[Flag] = []
    for flag in _flags_over(s, s.types):
        if len(chambers) >= cap:
            raise GeometryCapExceeded(
                "chamber count exceeds cap %d" % cap, dict(s.counts)
            )
        chambers.append(flag)
    return chambers


@dataclass(frozen=True)
class ThinnessReport:
    ok: bool
    checked: int
    issues: tuple[tuple[Flag, int], ...]  # (corank-1 flag, extension count)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "issues": [
                {"flag": [list(e) for e in flag], "extensions": n}
                for flag, n in self.issues
            ],
        }


def check_thin(s: IncidenceSystem, max_issues: int = 20) -> ThinnessReport:
    """Every corank-1 flag must extend to exactly two chambers."""
    issues: list[tuple[Flag, int]] = []
    checked = 0
    for omitted in s.types:
        rest = tuple(t for t in s.types if t != omitted)
        for flag in _flags_over(s, rest):
            checked += 1
            n = len(_extensions(s, flag, omitted))
            if n != 2:
                if len(issues) < max_issues:
                    issues.append((flag, n))
    return ThinnessReport(not issues, checked, tuple(issues))


@dataclass(frozen=True)
class ResidualConnectivityReport:
    ok: bool
    checked: int
    issues: tuple[tuple[Flag, int], ...]  # (flag, number of components)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "issues": [
                {"flag": [list(e) for e in flag], "components": c}
                for flag, c in self.issues
            ],
        }


def _residue_components(s: IncidenceSystem, flag: Flag) -> int:
    """Number of connected components of the residue's incidence graph."""
    present = {t for t, _ in flag}
    residue_types = [t for t in s.types if t not in present]
    nodes: list[Element] = []
    for j in residue_types:
        nodes.extend((j, b) for b in sorted(_extensions(s, flag, j)))
    if not nodes:
        return 0
    node_set = set(nodes)
    seen: set[Element] = set()
    components = 0
    for start in nodes:
        if start in seen:
            continue
        components += 1
        stack = [start]
        seen.add(start)
        while stack:
            i, a = stack.pop()
            for j in residue_types:
                if j == i:
                    continue
                for b in s.neighbors(i, a, j):
                    e = (j, b)
                    if e in node_set and e not in seen:
                        seen.add(e)
                        stack.append(e)
    return components


def check_residually_connected(
    s: IncidenceSystem, max_issues: int = 20
) -> ResidualConnectivityReport:
    """The residue of every flag of corank >= 2 (the empty flag included)
    must have a connected incidence graph."""
    issues: list[tuple[Flag, int]] = []
    checked = 0
    for size in range(0, s.rank - 1):
        for subset in combinations(s.types, size):
            for flag in _flags_over(s, subset):
                checked += 1
                c = _residue_components(s, flag)
                if c > 1:
                    if len(issues) < max_issues:
                        issues.append((flag, c))
    return ResidualConnectivityReport(not issues, checked, tuple(issues))


_DOT_COLOURS = [
    "black", "red", "blue", "darkgreen", "orange", "purple", "brown", "cyan"
]


def geometry_to_dot(s: IncidenceSystem) -> str:
    """Incidence graph, nodes coloured by type."""
    lines = ["graph incidence {", "  node [style=filled];"]
    for i in s.types:
        colour = _DOT_COLOURS[i % len(_DOT_COLOURS)]
        for a in range(s.n_elements(i)):
            lines.append(
                '  "t%d_%d" [label="%d:%d", fillcolor="%s", fontcolor="white"];'
                % (i, a, i, a, colour)
            )
    for (i, a), (j, b) in s.incidence_pairs():
        lines.append('  "t%d_%d" -- "t%d_%d";' % (i, a, j, b))
    lines.append("}")
    return "\n".join(lines) + "\n"
