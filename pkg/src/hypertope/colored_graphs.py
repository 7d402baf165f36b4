"""Properly edge-coloured graphs and the permutation groups they induce.

A graph on d vertices with n edge colours, where each colour class is a
matching, encodes n involutions: generator i swaps the endpoints of every
colour-i edge.  These graphs drive the whole construction pipeline: base
graphs are read from data files, expanded into cyclic covers (t layers,
"dotted" edges climbing one layer) or doubled with crossed edges, and the
induced groups are then fed to the verification stack.

Vertices are 0-based everywhere, including serialized files.  A cover vertex
(base b, layer l) is stored as the integer l*d + b.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence

from .permutations import Permutation, PermutationGroup

__all__ = [
    "ColoredGraph",
    "VoltageGraph",
    "CrossEdge",
    "JComponent",
    "ValidationIssue",
    "ValidationReport",
    "DerivedMatchingError",
    "validate_proper",
    "induced_group",
    "j_components",
    "predicted_period",
    "is_connected",
    "cyclic_cover",
    "crossed_double",
    "disjoint_union",
    "to_dot",
]


class DerivedMatchingError(ValueError):
    """A derived graph repeated a vertex within one colour class, which means
    the source data (voltages or crosses) is inconsistent."""


def _normalize_matchings(
    d: int, n: int, matchings: Iterable[Iterable[Sequence[int]]], *, directed: bool = False
) -> tuple[tuple[tuple[int, int], ...], ...]:
    out = []
    for raw in matchings:
        edges = []
        for pair in raw:
            u, v = pair
            if not (0 <= u < d and 0 <= v < d):
                raise ValueError("vertex out of range in edge (%r, %r)" % (u, v))
            if u == v and not directed:
                raise ValueError("loop at vertex %d" % u)
            edges.append((u, v) if directed else (min(u, v), max(u, v)))
        out.append(tuple(sorted(edges)))
    result = tuple(out)
    if len(result) != n:
        raise ValueError("expected %d colour classes, got %d" % (n, len(result)))
    return result


class ColoredGraph:
    """Immutable edge-coloured graph.  Construction checks only that vertex
    indices are in range and edges are not loops; the matching and
    distinctness requirements are checked by validate_proper so that
    degenerate graphs can still be represented and reported on."""

    __slots__ = ("d", "n", "matchings")

    def __init__(self, d: int, n: int, matchings: Iterable[Iterable[Sequence[int]]]):
        if d < 1:
            raise ValueError("need at least one vertex")
        if n < 0:
            raise ValueError("negative colour count")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "matchings", _normalize_matchings(d, n, matchings))

    def __setattr__(self, name, value):
        raise AttributeError("ColoredGraph is immutable")

    @classmethod
    def from_edges(cls, d: int, n: int, edges: Iterable[Sequence[int]]) -> "ColoredGraph":
        """Build from (colour, u, v) triples."""
        per_colour: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for c, u, v in edges:
            if not 0 <= c < n:
                raise ValueError("colour %r out of range" % (c,))
            per_colour[c].append((u, v))
        return cls(d, n, per_colour)

    def edges(self) -> list[tuple[int, int, int]]:
        """All (colour, u, v) triples, sorted."""
        return [(c, u, v) for c, m in enumerate(self.matchings) for (u, v) in m]

    def generator(self, colour: int) -> Permutation:
        """The involution swapping colour-i edge endpoints.  Meaningful only
        when the colour class is a matching."""
        images = list(range(self.d))
        for u, v in self.matchings[colour]:
            images[u], images[v] = v, u
        return Permutation(images)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ColoredGraph)
            and self.d == other.d
            and self.n == other.n
            and self.matchings == other.matchings
        )

    def __hash__(self) -> int:
        return hash((self.d, self.n, self.matchings))

    def __repr__(self) -> str:
        return "ColoredGraph(d=%d, n=%d, edges=%d)" % (
            self.d,
            self.n,
            sum(len(m) for m in self.matchings),
        )

    def to_json(self) -> dict:
        return {"d": self.d, "n": self.n, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, data) -> "ColoredGraph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_edges(data["d"], data["n"], data["edges"])


@dataclass(frozen=True)
class ValidationIssue:
    colour: int | None
    vertices: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[ValidationIssue, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate_proper(g: ColoredGraph) -> ValidationReport:
    """Check the three requirements on a proper colouring: every colour class
    is a matching, is non-empty, and no two colour classes coincide."""
    issues: list[ValidationIssue] = []
    for c, m in enumerate(g.matchings):
        if not m:
            issues.append(ValidationIssue(c, (), "colour %d has no edges" % c))
        seen: dict[int, tuple[int, int]] = {}
        for u, v in m:
            for x in (u, v):
                if x in seen:
                    issues.append(
                        ValidationIssue(
                            c,
                            (x,) + seen[x] + (u, v),
                            "vertex %d appears in two colour-%d edges %r and %r"
                            % (x, c, seen[x], (u, v)),
                        )
                    )
            seen[u] = (u, v)
            seen[v] = (u, v)
    for a in range(g.n):
        for b in range(a + 1, g.n):
            if g.matchings[a] and g.matchings[a] == g.matchings[b]:
                issues.append(
                    ValidationIssue(
                        None,
                        (),
                        "colours %d and %d have identical edge sets" % (a, b),
                    )
                )
    return ValidationReport(not issues, tuple(issues))


def induced_group(g: ColoredGraph) -> PermutationGroup:
    """The group generated by the per-colour involutions, acting on vertices."""
    report = validate_proper(g)
    if not report.ok:
        raise ValueError(
            "graph is not properly coloured: " + "; ".join(i.message for i in report.issues)
        )
    return PermutationGroup(
        g.d,
        [g.generator(c) for c in range(g.n)],
        labels=["rho%d" % c for c in range(g.n)],
    )


@dataclass(frozen=True)
class JComponent:
    """A connected component of the subgraph keeping only the given colours.
    For exactly two colours the shape is classified: an alternating path, an
    alternating cycle, or an isolated vertex.  Parallel edges in the two
    colours count as a 2-vertex cycle."""

    colours: tuple[int, ...]
    vertices: tuple[int, ...]
    kind: str | None  # "path" | "cycle" | "isolated" for 2 colours, else None
    edge_count: int

    def period_contribution(self) -> int:
        """Order of the colour-i * colour-j product restricted to this
        component: p for a p-vertex path, q for a 2q-vertex cycle, 1 for an
        isolated vertex."""
        if self.kind == "path":
            return len(self.vertices)
        if self.kind == "cycle":
            return len(self.vertices) // 2
        if self.kind == "isolated":
            return 1
        raise ValueError("shape classification only applies to 2-colour components")


def j_components(g: ColoredGraph, colours: Iterable[int]) -> list[JComponent]:
    """Connected components of the subgraph induced by the given colours,
    sorted by smallest vertex.  Every graph vertex appears in exactly one
    component (vertices touching no kept edge are isolated components)."""
    J = tuple(sorted(set(colours)))
    if not J:
        raise ValueError("colour subset must be non-empty")
    for c in J:
        if not 0 <= c < g.n:
            raise ValueError("colour %d out of range" % c)

    adj: list[list[int]] = [[] for _ in range(g.d)]
    n_edges_at: list[int] = [0] * g.d
    for c in J:
        for u, v in g.matchings[c]:
            adj[u].append(v)
            adj[v].append(u)
            n_edges_at[u] += 1
            n_edges_at[v] += 1

    seen = [False] * g.d
    out: list[JComponent] = []
    for start in range(g.d):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        comp.sort()
        edge_count = sum(n_edges_at[x] for x in comp) // 2
        kind: str | None = None
        if len(J) == 2:
            if edge_count == 0:
                kind = "isolated"
            elif edge_count == len(comp) - 1:
                kind = "path"
            elif edge_count == len(comp):
                kind = "cycle"
            else:  # pragma: no cover - impossible when both classes are matchings
                raise ValueError("component is neither a path nor a cycle")
        out.append(JComponent(J, tuple(comp), kind, edge_count))
    return out


def predicted_period(g: ColoredGraph, i: int, j: int) -> int:
    """Order of the product of generators i and j, computed from component
    shapes alone: lcm of the per-component contributions."""
    if i == j:
        raise ValueError("need two distinct colours")
    return lcm(*(comp.period_contribution() for comp in j_components(g, (i, j))))


def is_connected(g: ColoredGraph) -> bool:
    if g.n == 0:
        return g.d == 1
    return len(j_components(g, range(g.n))) == 1


class VoltageGraph:
    """A base graph plus layer-climbing data.  Solid edges live inside each
    layer; a dotted edge (u, v) joins (u, layer l) to (v, layer l+1 mod t).
    Dotted pairs are ordered, so they are stored as given, not sorted."""

    __slots__ = ("d", "n", "solid", "dotted")

    def __init__(
        self,
        d: int,
        n: int,
        solid: Iterable[Iterable[Sequence[int]]],
        dotted: Iterable[Iterable[Sequence[int]]],
    ):
        if d < 1:
            raise ValueError("need at least one vertex")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "solid", _normalize_matchings(d, n, solid))
        object.__setattr__(self, "dotted", _normalize_matchings(d, n, dotted, directed=True))

    def __setattr__(self, name, value):
        raise AttributeError("VoltageGraph is immutable")

    @classmethod
    def from_edges(
        cls,
        d: int,
        n: int,
        solid: Iterable[Sequence[int]],
        dotted: Iterable[Sequence[int]],
    ) -> "VoltageGraph":
        s: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        t: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for c, u, v in solid:
            s[c].append((u, v))
        for c, u, v in dotted:
            t[c].append((u, v))
        return cls(d, n, s, t)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, VoltageGraph)
            and (self.d, self.n, self.solid, self.dotted)
            == (other.d, other.n, other.solid, other.dotted)
        )

    def __hash__(self) -> int:
        return hash((self.d, self.n, self.solid, self.dotted))

    def __repr__(self) -> str:
        return "VoltageGraph(d=%d, n=%d, solid=%d, dotted=%d)" % (
            self.d,
            self.n,
            sum(len(m) for m in self.solid),
            sum(len(m) for m in self.dotted),
        )

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "n": self.n,
            "solid": [[c, u, v] for c, m in enumerate(self.solid) for (u, v) in m],
            "dotted": [[c, u, v] for c, m in enumerate(self.dotted) for (u, v) in m],
        }

    @classmethod
    def from_json(cls, data) -> "VoltageGraph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_edges(data["d"], data["n"], data["solid"], data["dotted"])


def cyclic_cover(v: VoltageGraph, t: int) -> ColoredGraph:
    """The t-layer derived graph.  Layer l copies all solid edges; each
    dotted edge (u, w) becomes (u, l)-(w, l+1 mod t).  At t = 1 dotted edges
    fold back into the single layer.  Raises DerivedMatchingError when the
    derived colour classes are not matchings."""
    if t < 1:
        raise ValueError("need at least one layer")
    d, n = v.d, v.n
    per_colour: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for c in range(n):
        for u, w in v.solid[c]:
            for layer in range(t):
                per_colour[c].append((layer * d + u, layer * d + w))
        for u, w in v.dotted[c]:
            for layer in range(t):
                a = layer * d + u
                b = ((layer + 1) % t) * d + w
                if a == b:
                    raise DerivedMatchingError(
                        "dotted colour-%d edge (%d, %d) folds to a loop at t=%d" % (c, u, w, t)
                    )
                per_colour[c].append((min(a, b), max(a, b)))
        used: set[int] = set()
        for a, b in per_colour[c]:
            if a in used or b in used:
                raise DerivedMatchingError(
                    "colour %d is not a matching in the t=%d derived graph near edge (%d, %d)"
                    % (c, t, a, b)
                )
            used.add(a)
            used.add(b)
    return ColoredGraph(d * t, n, per_colour)


@dataclass(frozen=True)
class CrossEdge:
    """One doubled-graph cross: the base edge (colour, u, v) is joined across
    the two copies as (u, v') and (v, u') in new_colour.  keep_original says
    whether the straight copies of the base edge survive alongside the cross."""

    colour: int
    u: int
    v: int
    new_colour: int
    keep_original: bool = False

    def to_json(self) -> list:
        return [self.colour, self.u, self.v, self.new_colour, self.keep_original]

    @classmethod
    def from_json(cls, data) -> "CrossEdge":
        c, u, v, nc, keep = data
        return cls(int(c), int(u), int(v), int(nc), bool(keep))


def crossed_double(g: ColoredGraph, crosses: Sequence[CrossEdge]) -> ColoredGraph:
    """Two copies of g on 2d vertices (second copy shifted by d), with the
    listed edges crossed between the copies in their new colours.  An empty
    cross list gives the plain disjoint double."""
    d = g.d
    edge_set = set(g.edges())
    cross_at: dict[tuple[int, int, int], CrossEdge] = {}
    for cr in crosses:
        key = (cr.colour, min(cr.u, cr.v), max(cr.u, cr.v))
        if key not in edge_set:
            raise ValueError("cross refers to missing colour-%d edge (%d, %d)" % key)
        if key in cross_at:
            raise ValueError("edge (%d, %d, %d) crossed twice" % key)
        cross_at[key] = cr

    n_out = max([g.n] + [cr.new_colour + 1 for cr in crosses])
    per_colour: list[list[tuple[int, int]]] = [[] for _ in range(n_out)]
    for c, u, v in g.edges():
        cr = cross_at.get((c, u, v))
        if cr is None or cr.keep_original:
            per_colour[c].append((u, v))
            per_colour[c].append((u + d, v + d))
        if cr is not None:
            per_colour[cr.new_colour].append((min(u, v + d), max(u, v + d)))
            per_colour[cr.new_colour].append((min(v, u + d), max(v, u + d)))

    for c in range(n_out):
        used: set[int] = set()
        for a, b in per_colour[c]:
            if a in used or b in used:
                raise DerivedMatchingError(
                    "colour %d is not a matching in the doubled graph near edge (%d, %d)"
                    % (c, a, b)
                )
            used.add(a)
            used.add(b)
    return ColoredGraph(2 * d, n_out, per_colour)


def disjoint_union(a: ColoredGraph, b: ColoredGraph) -> ColoredGraph:
    """Side-by-side union, b's vertices shifted up by a.d.  Colour counts
    must agree so the generator indexing stays aligned."""
    if a.n != b.n:
        raise ValueError("colour counts differ: %d vs %d" % (a.n, b.n))
    per_colour = [
        list(a.matchings[c]) + [(u + a.d, v + a.d) for (u, v) in b.matchings[c]]
        for c in range(a.n)
    ]
    return ColoredGraph(a.d + b.d, a.n, per_colour)


_DOT_PALETTE = (
    "black",
    "red3",
    "blue3",
    "green4",
    "darkorange2",
    "purple3",
    "grey40",
    "deeppink3",
)


def to_dot(g: "ColoredGraph | VoltageGraph", name: str = "G") -> str:
    """Graphviz source.  Edges carry their colour index as label; layer-climb
    edges of a voltage graph are drawn dashed."""
    lines = ["graph %s {" % name, "  node [shape=circle];"]
    for v in range(g.d):
        lines.append("  %d;" % v)

    def edge_line(u: int, v: int, c: int, dashed: bool) -> str:
        style = ', style=dashed' if dashed else ""
        return '  %d -- %d [label="%d", color="%s"%s];' % (
            u,
            v,
            c,
            _DOT_PALETTE[c % len(_DOT_PALETTE)],
            style,
        )

    if isinstance(g, VoltageGraph):
        for c in range(g.n):
            for u, v in g.solid[c]:
                lines.append(edge_line(u, v, c, False))
            for u, v in g.dotted[c]:
                lines.append(edge_line(u, v, c, True))
    else:
        for c, u, v in g.edges():
            lines.append(edge_line(u, v, c, False))
    lines.append("}")
    return "\n".join(lines) + "\n"
