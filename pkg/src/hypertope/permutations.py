"""Permutations on finite point sets and permutation groups.

Everything downstream (graph groups, verification certificates, coset
geometries) rests on the operations here: orbits, stabilizers, exact orders,
membership, coset transversals and subgroup intersection.

Conventions, fixed once and used everywhere:

* Points are 0-based integers ``0 .. degree-1``.
* Groups act on the right: ``x · (p * q) == (x · p) · q``.  Consequently
  ``p * q`` means "apply ``p`` first, then ``q``".
* All search orders (orbits, transversals, base selection) are deterministic:
  breadth-first, generators in index order, smallest point first.  Repeated
  runs produce byte-identical results.
* Orders are plain Python integers, so arbitrarily large group orders are
  exact.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Permutation",
    "PermutationGroup",
    "StabilizerChain",
    "SearchBudgetExceeded",
    "TransversalCapExceeded",
]


class SearchBudgetExceeded(Exception):
    """Backtrack search ran out of its node budget.

    Carries the best verified lower bound found so far (``partial`` is a
    subgroup of the true answer), so callers can downgrade to an inconclusive
    verdict instead of failing with a wrong answer.
    """

    def __init__(self, message: str, partial: "PermutationGroup | None" = None):
        super().__init__(message)
        self.partial = partial


class TransversalCapExceeded(Exception):
    """A coset transversal grew past the caller's cap."""

    def __init__(self, message: str, found: int):
        super().__init__(message)
        self.found = found


class Permutation:
    """An immutable permutation of ``{0, .., degree-1}`` stored as an image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError("images do not form a bijection on 0..%d" % (len(images) - 1))
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Permutation is immutable")

    @classmethod
    def _unchecked(cls, images: tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._unchecked(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, tuple(cycle[1:]) + (cycle[0],)):
                if images[a] != a:
                    raise ValueError("point %d repeated across cycles" % a)
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def apply(self, x: int) -> int:
        """Image of point ``x`` under the right action ``x · self``."""
        return self.images[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(self.images) != len(other.images):
            raise ValueError("degree mismatch: %d vs %d" % (len(self.images), len(other.images)))
        return Permutation._unchecked(tuple(map(other.images.__getitem__, self.images)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, img in enumerate(self.images):
            inv[img] = i
        return Permutation._unchecked(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == img for i, img in enumerate(self.images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        """Least k >= 1 with self**k = identity: the lcm of cycle lengths."""
        out = 1
        for cyc in self.cycles():
            out = math.lcm(out, len(cyc))
        return out

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, img in enumerate(self.images) if i != img)

    def __pow__(self, n: int) -> "Permutation":
        if n < 0:
            return self.inverse() ** (-n)
        result = Permutation.identity(len(self.images))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "Permutation(identity[%d])" % len(self.images)
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)
        return "Permutation(%s)" % body

    def to_json(self) -> list[int]:
        return list(self.images)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> "Permutation":
        return cls(data)


class _ChainLevel:
    """One level of a stabilizer chain: a base point, the generators fixing
    all earlier base points, and the transversal of the point's orbit."""

    __slots__ = ("point", "gens", "transversal")

    def __init__(self, point: int, identity: Permutation):
        self.point = point
        self.gens: list[Permutation] = []
        self.transversal: dict[int, Permutation] = {point: identity}

    def recompute_orbit(self, identity: Permutation) -> None:
        self.transversal = {self.point: identity}
        queue = deque([self.point])
        while queue:
            x = queue.popleft()
            ux = self.transversal[x]
            for s in self.gens:
                y = s.images[x]
                if y not in self.transversal:
                    self.transversal[y] = ux * s
                    queue.append(y)


class StabilizerChain:
    """Base and strong generating structure built by deterministic
    Schreier-Sims.

    ``base_hint`` forces a base prefix (used to read off point stabilizers and
    to canonicalize cosets); hint points are installed as levels up front, so
    the first levels are exactly the hinted points in order.
    """

    def __init__(self, degree: int, generators: Sequence[Permutation], base_hint: Sequence[int] = ()):
        self.degree = degree
        self._id = Permutation.identity(degree)
        self.levels: list[_ChainLevel] = [_ChainLevel(b, self._id) for b in base_hint]
        for g in generators:
            self._add_strong(g)

    @classmethod
    def from_levels(cls, degree: int, levels: list[_ChainLevel]) -> "StabilizerChain":
        """Adopt an existing (already closed) level list as a chain.  Used to
        read a stabilizer chain off the tail of another chain."""
        chain = cls.__new__(cls)
        chain.degree = degree
        chain._id = Permutation.identity(degree)
        chain.levels = levels
        return chain

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lv.point for lv in self.levels)

    def order(self) -> int:
        n = 1
        for lv in self.levels:
            n *= len(lv.transversal)
        return n

    def strip(self, p: Permutation, start: int = 0) -> tuple[Permutation, int]:
        """Sift ``p`` through levels ``start..``; returns (residue, level at
        which sifting stopped).  Residue is the identity iff ``p`` lies in the
        group generated at ``start``."""
        for l in range(start, len(self.levels)):
            lv = self.levels[l]
            x = p.images[lv.point]
            u = lv.transversal.get(x)
            if u is None:
                return p, l
            if x != lv.point or u is not self._id:
                p = p * u.inverse()
        return p, len(self.levels)

    def contains(self, p: Permutation) -> bool:
        residue, _ = self.strip(p)
        return residue.is_identity()

    def _add_strong(self, g: Permutation) -> None:
        residue, l = self.strip(g)
        if residue.is_identity():
            return
        if l == len(self.levels):
            self.levels.append(_ChainLevel(min(residue.support()), self._id))
        for k in range(l + 1):
            self.levels[k].gens.append(residue)
        for k in range(l, -1, -1):
            self._close_level(k)

    def _close_level(self, l: int) -> None:
        """Make level ``l`` satisfy the strong generation property, assuming
        all deeper levels already do.  Level ``l``'s own generator list never
        changes here (recursion only touches deeper levels), so its orbit is
        computed once."""
        lv = self.levels[l]
        lv.recompute_orbit(self._id)
        for x in list(lv.transversal.keys()):
            ux = lv.transversal[x]
            for s in lv.gens:
                y = s.images[x]
                schreier = ux * s * lv.transversal[y].inverse()
                if schreier.is_identity():
                    continue
                residue, m = self.strip(schreier, l + 1)
                if residue.is_identity():
                    continue
                if m == len(self.levels):
                    self.levels.append(_ChainLevel(min(residue.support()), self._id))
                for k in range(l + 1, m + 1):
                    self.levels[k].gens.append(residue)
                for k in range(m, l, -1):
                    self._close_level(k)

    def elements(self) -> Iterator[Permutation]:
        """Every group element exactly once, deterministically ordered."""

        def rec(l: int) -> Iterator[Permutation]:
            if l == len(self.levels):
                yield self._id
                return
            for h in rec(l + 1):
                for u in self.levels[l].transversal.values():
                    yield h * u

        return rec(0)


_DEFAULT_NODE_BUDGET = 10_000_000
_DEFAULT_TRANSVERSAL_CAP = 10**6


class PermutationGroup:
    """A group given by generating permutations, with a lazily built
    stabilizer chain behind order/membership/stabilizer/transversal queries.

    The chain is built on first use and cached; afterwards all queries are
    read-only, so a built group can be shared freely.
    """

    def __init__(
        self,
        degree: int,
        generators: Sequence[Permutation],
        labels: Sequence[str] | None = None,
    ):
        for g in generators:
            if g.degree != degree:
                raise ValueError("generator degree %d != group degree %d" % (g.degree, degree))
        if labels is not None and len(labels) != len(generators):
            raise ValueError("labels length mismatch")
        self.degree = degree
        self.generators = tuple(g for g in generators)
        self.labels = tuple(labels) if labels is not None else None
        self._chain: StabilizerChain | None = None
        self._canonical_chain: StabilizerChain | None = None
        self._order: int | None = None
        self._orbit_partition: tuple[tuple[int, ...], ...] | None = None
        self._orbit_index: tuple[int, ...] | None = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def trivial(cls, degree: int) -> "PermutationGroup":
        return cls(degree, [])

    @classmethod
    def from_cycles(cls, degree: int, gens: Sequence[Iterable[Sequence[int]]], labels=None) -> "PermutationGroup":
        return cls(degree, [Permutation.from_cycles(degree, c) for c in gens], labels)

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    # -- core queries ---------------------------------------------------------

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            self._chain = StabilizerChain(self.degree, self.generators)
        return self._chain

    def order(self) -> int:
        if self._order is None:
            self._order = self.chain.order()
        return self._order

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise ValueError("degree mismatch")
        return self.chain.contains(p)

    def orbit(self, x: int) -> list[int]:
        """Orbit of ``x`` in breadth-first discovery order."""
        if not 0 <= x < self.degree:
            raise ValueError("point %d out of range" % x)
        seen = {x}
        order = [x]
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g in self.generators:
                z = g.images[y]
                if z not in seen:
                    seen.add(z)
                    order.append(z)
                    queue.append(z)
        return order

    def orbit_partition(self) -> tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]:
        """All orbits (scanning representatives in point order) plus a
        point -> orbit-id lookup table.  Cached."""
        if self._orbit_partition is None:
            index = [-1] * self.degree
            orbits: list[tuple[int, ...]] = []
            for x in range(self.degree):
                if index[x] >= 0:
                    continue
                orb = self.orbit(x)
                oid = len(orbits)
                for y in orb:
                    index[y] = oid
                orbits.append(tuple(orb))
            self._orbit_partition = tuple(orbits)
            self._orbit_index = tuple(index)
        return self._orbit_partition, self._orbit_index

    def point_stabilizer(self, x: int) -> "PermutationGroup":
        """Subgroup fixing ``x``, via a chain whose first base point is ``x``.
        Orbit-stabilizer holds exactly: |orbit(x)| * |stabilizer| = order."""
        if not 0 <= x < self.degree:
            raise ValueError("point %d out of range" % x)
        chain = StabilizerChain(self.degree, self.generators, base_hint=(x,))
        gens = list(dict.fromkeys(chain.levels[1].gens)) if len(chain.levels) > 1 else []
        sub = PermutationGroup(self.degree, gens)
        # levels below the first are already a closed chain for the stabilizer
        sub._chain = StabilizerChain.from_levels(self.degree, chain.levels[1:])
        return sub

    def evaluate_word(self, word: Sequence[int]) -> Permutation:
        """Left-to-right product of generators by index: word [a,b] applies
        generator a first."""
        result = Permutation.identity(self.degree)
        for idx in word:
            if not 0 <= idx < len(self.generators):
                raise ValueError("generator index %d out of range" % idx)
            result = result * self.generators[idx]
        return result

    def elements(self) -> Iterator[Permutation]:
        return self.chain.elements()

    def is_subgroup(self, other: "PermutationGroup") -> bool:
        """True iff self <= other."""
        return all(other.contains(g) for g in self.generators)

    # -- canonical coset machinery -------------------------------------------

    def _canonical(self) -> StabilizerChain:
        if self._canonical_chain is None:
            self._canonical_chain = StabilizerChain(
                self.degree, self.generators, base_hint=range(self.degree)
            )
        return self._canonical_chain

    def min_coset_element(self, x: Permutation) -> Permutation:
        """The lexicographically least (by image tuple) element of the right
        coset ``self · x``.  Constant on cosets, so its image tuple is a
        canonical coset key."""
        chain = self._canonical()
        cur = x
        for lv in chain.levels:
            if len(lv.transversal) == 1:
                continue
            imgs = cur.images
            best_y = min(lv.transversal, key=lambda y: imgs[y])
            if best_y != lv.point:
                cur = lv.transversal[best_y] * cur
        return cur

    def coset_transversal(
        self,
        h: "PermutationGroup",
        cap: int = _DEFAULT_TRANSVERSAL_CAP,
        side: str = "right",
    ) -> list[Permutation]:
        return [p for p, _ in self.coset_transversal_with_words(h, cap=cap, side=side)]

    def coset_transversal_with_words(
        self,
        h: "PermutationGroup",
        cap: int = _DEFAULT_TRANSVERSAL_CAP,
        side: str = "right",
    ) -> list[tuple[Permutation, tuple[int, ...]]]:
        """One representative per coset of ``h`` in ``self``, as (permutation,
        generator word) pairs.

        side="right": cosets h·g, breadth-first by appending generators, so
        words are shortest with ties broken by generator index.  side="left":
        cosets g·h, breadth-first by prepending generators.  The identity
        comes first either way.
        """
        if side not in ("right", "left"):
            raise ValueError("side must be 'right' or 'left'")
        if not h.is_subgroup(self):
            raise ValueError("h is not a subgroup of this group")

        def key_of(p: Permutation) -> tuple[int, ...]:
            probe = p if side == "right" else p.inverse()
            return h.min_coset_element(probe).images

        identity = self.identity()
        reps: list[tuple[Permutation, tuple[int, ...]]] = [(identity, ())]
        seen = {key_of(identity)}
        queue = deque(reps)
        while queue:
            rep, word = queue.popleft()
            for idx, g in enumerate(self.generators):
                if side == "right":
                    nxt, nword = rep * g, word + (idx,)
                else:
                    nxt, nword = g * rep, (idx,) + word
                k = key_of(nxt)
                if k in seen:
                    continue
                if len(reps) >= cap:
                    raise TransversalCapExceeded(
                        "coset transversal exceeded cap %d" % cap, found=len(reps)
                    )
                seen.add(k)
                entry = (nxt, nword)
                reps.append(entry)
                queue.append(entry)
        return reps

    # -- subgroup intersection ------------------------------------------------

    def subgroup_intersection(
        self, other: "PermutationGroup", node_budget: int = _DEFAULT_NODE_BUDGET
    ) -> "PermutationGroup":
        """Exact intersection via backtracking over the stabilizer chain of
        the smaller group, pruning with base-image feasibility in the other.

        Raises SearchBudgetExceeded (with the partial subgroup found so far)
        if the node budget runs out; never returns a wrong answer.
        """
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        a, b = (self, other) if self.order() <= other.order() else (other, self)
        chain_a = a.chain
        base = chain_a.base
        chain_b = StabilizerChain(a.degree, b.generators, base_hint=base)
        identity = Permutation.identity(a.degree)

        known: list[Permutation] = []
        for g in list(a.generators) + list(b.generators):
            if chain_a.contains(g) and chain_b.contains(g) and not g.is_identity():
                if g not in known:
                    known.append(g)
        k_group = PermutationGroup(a.degree, known)

        if not base:
            return PermutationGroup(a.degree, [])

        nodes = 0
        levels = chain_a.levels

        # Elements of a decompose as g = h * u_l * ... * u_0 with u_k from the
        # level-k transversal, so the DFS accumulates factors on the left:
        # rep_{l+1} = u_l * rep_l.  Choosing transversal key y at level l pins
        # the final image of base[l] to rep_l(y); ``combo`` folds rep together
        # with the inverses of the matched b-side transversal factors so that
        # combo(y) is directly the point the b-chain must realize at level l.
        k_min: dict[int, int] = {}
        for orb in k_group.orbit_partition()[0]:
            m = min(orb)
            for y in orb:
                k_min[y] = m

        def search(l: int, rep: Permutation, combo: Permutation) -> None:
            nonlocal nodes, k_group
            if l == len(levels):
                if chain_b.contains(rep) and not rep.is_identity() and not k_group.contains(rep):
                    k_group = PermutationGroup(a.degree, list(k_group.generators) + [rep])
                return
            lv = levels[l]
            b_lv = chain_b.levels[l]
            for y in sorted(lv.transversal):
                nodes += 1
                if nodes > node_budget:
                    raise SearchBudgetExceeded(
                        "intersection search exceeded %d nodes" % node_budget,
                        partial=k_group,
                    )
                if l == 0 and k_min[y] != y:
                    continue  # a smaller representative of the same K-coset exists
                z = combo.images[y]
                u_b = b_lv.transversal.get(z)
                if u_b is None:
                    continue  # no element of b matches these base images
                if y == lv.point:
                    new_rep, new_combo = rep, combo
                else:
                    u_a = lv.transversal[y]
                    new_rep, new_combo = u_a * rep, u_a * combo
                if z != b_lv.point:
                    new_combo = new_combo * u_b.inverse()
                search(l + 1, new_rep, new_combo)

        search(0, identity, identity)
        return k_group
